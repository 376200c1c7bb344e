"""Perfect orthogonality broadcasting: verification and infeasibility certificates.

A channel broadcasts the orthogonality of an ensemble when, for every
setting, both output marginals of any two same-setting states stay
orthogonal.  The classical variant replaces the channel by a POVM whose
outcomes never confuse two same-setting states.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .discrimination import PostInfoResult, SolverSettings, p_postinfo
from .ensembles import Isometry, PostInfoEnsemble, Povm
from .errors import InternalInconsistency
from .linalg import dyad, partial_trace

BORN_ZERO_TOL = 1e-10
RANK_TOL = 1e-10
FEASIBLE_VALUE_TOL = 1e-7
WITNESS_VIOLATION_TOL = 1e-6


def output_marginals(iso: Isometry, state: np.ndarray, cut=(0,)) -> tuple[np.ndarray, np.ndarray]:
    """Both reduced outputs of the isometry applied to a pure state."""
    cut = tuple(sorted(set(cut)))
    n_factors = len(iso.output_dims)
    if any(c < 0 or c >= n_factors for c in cut) or len(cut) >= n_factors:
        raise ValueError(f"cut {cut} is not a proper bipartition of {n_factors} output factors")
    out = dyad(iso.apply(state))
    other = tuple(sorted(set(range(n_factors)) - set(cut)))
    sigma_a = partial_trace(out, iso.output_dims, cut)
    sigma_b = partial_trace(out, iso.output_dims, other)
    return sigma_a, sigma_b


def broadcast_outputs(iso: Isometry, ensemble: PostInfoEnsemble, cut=(0,)):
    """Per-state marginal pairs, mirroring the ensemble's (setting, index) layout."""
    if ensemble.dim != iso.input_dim:
        raise ValueError(f"isometry input dim {iso.input_dim} != ensemble dim {ensemble.dim}")
    return tuple(tuple(output_marginals(iso, s, cut) for s in group) for group in ensemble.states)


@dataclass(frozen=True)
class OrthogonalityBroadcastReport:
    ok: bool
    max_overlap: float


def verify_orthogonality_broadcast(
    iso: Isometry, ensemble: PostInfoEnsemble, cut=(0,), tol: float = BORN_ZERO_TOL
) -> OrthogonalityBroadcastReport:
    """Check Tr[sigma_i sigma_j] = 0 on both output sides for all same-setting pairs."""
    if not ensemble.orthogonal:
        raise ValueError("ensemble must carry the orthogonality flag")
    outputs = broadcast_outputs(iso, ensemble, cut)
    worst = 0.0
    for group in outputs:
        for (a_i, b_i), (a_j, b_j) in itertools.combinations(group, 2):
            worst = max(worst, abs(np.trace(a_i @ a_j)), abs(np.trace(b_i @ b_j)))
    return OrthogonalityBroadcastReport(worst <= tol, worst)


@dataclass(frozen=True)
class ClassicalBroadcastReport:
    ok: bool
    max_violation: float
    outcome_table: dict

    def outcomes(self, setting: int, index: int) -> tuple[int, ...]:
        return self.outcome_table[(setting, index)]


def verify_classical_broadcast_povm(
    povm: Povm, ensemble: PostInfoEnsemble, tol: float = BORN_ZERO_TOL
) -> ClassicalBroadcastReport:
    """Check that no POVM outcome is shared by two same-setting states.

    Also returns, per state, the outcomes it can trigger with probability
    above ``tol``.
    """
    if povm.dim != ensemble.dim:
        raise ValueError(f"POVM dim {povm.dim} != ensemble dim {ensemble.dim}")
    probs = {
        (t, i): povm.outcome_probabilities(s)
        for t, i, s, _ in ensemble.pairs()
    }
    table = {
        key: tuple(int(x) for x in np.nonzero(p > tol)[0])
        for key, p in probs.items()
    }
    worst = 0.0
    for t, group in enumerate(ensemble.states):
        for i, j in itertools.combinations(range(len(group)), 2):
            # second-smallest of each outcome's two probabilities must vanish
            both = np.minimum(probs[(t, i)], probs[(t, j)])
            worst = max(worst, float(both.max()))
    return ClassicalBroadcastReport(worst <= tol, worst, table)


@dataclass(frozen=True)
class KillPatternCertificate:
    """Kernel dimensions for every survivor pattern.

    A pattern picks, per setting, the single index a POVM outcome may keep
    alive; the outcome must then annihilate every other state, so it is
    supported on the joint orthogonal complement.  All kernels being trivial
    certifies that perfect classical broadcasting is impossible.
    """

    certified_infeasible: bool
    kernel_dims: dict


def kill_pattern_certificate(ensemble: PostInfoEnsemble, rank_tol: float = RANK_TOL) -> KillPatternCertificate:
    """Kernel dimension of every survivor pattern, within the joint state span.

    Restricting to the span loses nothing: an effect's component outside the
    span never fires on any state, so completeness on the span already leads
    to the contradiction when every kernel is trivial.
    """
    if not ensemble.orthogonal:
        raise ValueError("ensemble must carry the orthogonality flag")
    all_states = [s for group in ensemble.states for s in group]
    span_dim = int(np.linalg.matrix_rank(np.array(all_states), tol=rank_tol))
    dims = {}
    for pattern in itertools.product(*[range(n) for n in ensemble.index_sets]):
        killed = [
            ensemble.states[t][j]
            for t in range(len(ensemble.settings))
            for j in range(ensemble.index_sets[t])
            if j != pattern[t]
        ]
        rank = int(np.linalg.matrix_rank(np.array(killed), tol=rank_tol)) if killed else 0
        dims[pattern] = span_dim - rank
    return KillPatternCertificate(all(v == 0 for v in dims.values()), dims)


@dataclass(frozen=True)
class BroadcastFeasibility:
    feasible: bool
    value: float
    witness: Povm | None
    witness_violation: float | None
    certificate: KillPatternCertificate


def perfect_classical_broadcast_decision(
    ensemble: PostInfoEnsemble, settings: SolverSettings | None = None
) -> BroadcastFeasibility:
    """Decide perfect classical broadcastability.

    Feasibility is equivalent to unit post-information value under any
    full-support prior, so the decision runs one discrimination solve on a
    uniform reweighting and, when the value reaches one, extracts the optimal
    POVM as an explicit witness.  The kill-pattern certificate provides an
    independent exact cross-check on the infeasible side.
    """
    counts = ensemble.index_sets
    total = sum(counts)
    uniform = PostInfoEnsemble(
        settings=ensemble.settings,
        states=ensemble.states,
        prior=tuple(tuple(1.0 / total for _ in range(n)) for n in counts),
        orthogonal=ensemble.orthogonal,
    )
    result: PostInfoResult = p_postinfo(uniform, settings)
    certificate = kill_pattern_certificate(ensemble)
    feasible = result.value >= 1.0 - FEASIBLE_VALUE_TOL
    if feasible and certificate.certified_infeasible:
        raise InternalInconsistency(
            f"discrimination value {result.value!r} reaches one but the kill-pattern "
            "certificate proves infeasibility"
        )
    witness = None
    violation = None
    if feasible:
        witness = result.povm
        violation = verify_classical_broadcast_povm(witness, uniform).max_violation
        if violation > WITNESS_VIOLATION_TOL:
            raise InternalInconsistency(
                f"feasible value {result.value!r} but witness POVM violates the "
                f"classical-broadcast condition by {violation:.3e}"
            )
    return BroadcastFeasibility(feasible, result.value, witness, violation, certificate)
