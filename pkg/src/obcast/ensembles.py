"""Ensemble data model and the gallery of named states, POVMs, and isometries.

Gallery names are stable public identifiers; ``gallery_names()`` lists them.
All state vectors are stored normalized (shorthand kets like ``|1+2>`` carry
their 1/sqrt(2) factors).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

import numpy as np

from .linalg import PSD_TOL, dagger, dyad, hermitian, ket, pure_state_overlap

PRIOR_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class PostInfoEnsemble:
    """Pure states indexed by (setting, index) with a joint prior.

    ``states[t][i]`` is the ket for index ``i`` under setting ``t`` and
    ``prior[t][i]`` the joint probability of that pair.  With ``orthogonal``
    set, states within each setting must be pairwise orthogonal.
    """

    settings: tuple[str, ...]
    states: tuple[tuple[np.ndarray, ...], ...]
    prior: tuple[tuple[float, ...], ...]
    orthogonal: bool = False

    def __post_init__(self):
        if len(self.states) != len(self.settings) or len(self.prior) != len(self.settings):
            raise ValueError("settings, states, and prior must align")
        states = tuple(tuple(_freeze(ket(s)) for s in group) for group in self.states)
        object.__setattr__(self, "states", states)
        dims = {s.shape[0] for group in states for s in group}
        if len(dims) != 1:
            raise ValueError(f"states live on different dimensions: {sorted(dims)}")
        flat = [p for group in self.prior for p in group]
        if any(len(g) != len(s) for g, s in zip(self.prior, states)):
            raise ValueError("prior shape must match states")
        if min(flat) < 0:
            raise ValueError("prior entries must be nonnegative")
        if abs(sum(flat) - 1.0) > PRIOR_TOL:
            raise ValueError(f"prior sums to {sum(flat)!r}, not 1")
        if self.orthogonal:
            worst = 0.0
            for group in states:
                for i in range(len(group)):
                    for j in range(i + 1, len(group)):
                        worst = max(worst, abs(pure_state_overlap(group[i], group[j])))
            if worst > ORTHOGONALITY_TOL:
                raise ValueError(f"orthogonality flag set but max in-setting overlap is {worst:.3e}")

    @property
    def dim(self) -> int:
        return self.states[0][0].shape[0]

    @property
    def index_sets(self) -> tuple[int, ...]:
        return tuple(len(group) for group in self.states)

    def pairs(self):
        """Iterate (setting index, state index, ket, joint prior)."""
        for t, group in enumerate(self.states):
            for i, s in enumerate(group):
                yield t, i, s, self.prior[t][i]


@dataclass(frozen=True)
class GopEnsemble:
    """Globally orthogonal product states {|a_k>|b_k>} with priors p_k."""

    a_states: tuple[np.ndarray, ...]
    b_states: tuple[np.ndarray, ...]
    prior: tuple[float, ...]

    def __post_init__(self):
        a = tuple(_freeze(ket(s)) for s in self.a_states)
        b = tuple(_freeze(ket(s)) for s in self.b_states)
        object.__setattr__(self, "a_states", a)
        object.__setattr__(self, "b_states", b)
        if not (len(a) == len(b) == len(self.prior)):
            raise ValueError("a_states, b_states, prior must have equal length")
        if len({s.shape[0] for s in a}) != 1 or len({s.shape[0] for s in b}) != 1:
            raise ValueError("per-side dimensions must agree")
        if min(self.prior) < 0 or abs(sum(self.prior) - 1.0) > PRIOR_TOL:
            raise ValueError("prior must be a probability vector")
        report = global_orthogonality_check(a, b)
        if not report.ok:
            raise ValueError(
                f"not globally orthogonal: pair {report.worst_pair} deviates by {report.max_violation:.3e}"
            )

    @property
    def dims(self) -> tuple[int, int]:
        return self.a_states[0].shape[0], self.b_states[0].shape[0]

    def __len__(self) -> int:
        return len(self.prior)

    def joint_kets(self) -> tuple[np.ndarray, ...]:
        return tuple(np.kron(a, b) for a, b in zip(self.a_states, self.b_states))


@dataclass(frozen=True)
class Povm:
    """PSD effects summing to the identity."""

    effects: tuple[np.ndarray, ...]

    def __post_init__(self):
        effects = tuple(_freeze(hermitian(e, tol=PSD_TOL)) for e in self.effects)
        object.__setattr__(self, "effects", effects)
        d = effects[0].shape[0]
        if any(e.shape != (d, d) for e in effects):
            raise ValueError("effects must share a dimension")
        for e in effects:
            low = np.linalg.eigvalsh(e).min()
            if low < -PSD_TOL:
                raise ValueError(f"effect has negative eigenvalue {low:.3e}")
        residual = np.abs(sum(effects) - np.eye(d)).max()
        if residual > PSD_TOL:
            raise ValueError(f"effects sum to identity only within {residual:.3e}")

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def __len__(self) -> int:
        return len(self.effects)

    def outcome_probabilities(self, state: np.ndarray) -> np.ndarray:
        v = ket(state)
        return np.array([np.real(np.vdot(v, e @ v)) for e in self.effects])


@dataclass(frozen=True)
class Isometry:
    """Matrix with orthonormal columns mapping into a factorized output space."""

    matrix: np.ndarray
    output_dims: tuple[int, ...]

    def __post_init__(self):
        m = _freeze(np.asarray(self.matrix, dtype=complex))
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "output_dims", tuple(int(d) for d in self.output_dims))
        rows, cols = m.shape
        if rows < cols:
            raise ValueError("output dimension must be at least the input dimension")
        if int(np.prod(self.output_dims)) != rows:
            raise ValueError(f"output_dims {self.output_dims} do not multiply to {rows}")
        residual = np.abs(dagger(m) @ m - np.eye(cols)).max()
        if residual > PSD_TOL:
            raise ValueError(f"columns are not orthonormal (residual {residual:.3e})")

    @property
    def input_dim(self) -> int:
        return self.matrix.shape[1]

    def apply(self, state: np.ndarray) -> np.ndarray:
        return self.matrix @ ket(state)


@dataclass(frozen=True)
class GlobalOrthogonalityReport:
    ok: bool
    max_violation: float
    worst_pair: tuple[int, int] | None


def global_orthogonality_check(a_states, b_states) -> GlobalOrthogonalityReport:
    """Check <a_j|a_k><b_j|b_k> = delta_jk on raw state lists."""
    a = [ket(s) for s in a_states]
    b = [ket(s) for s in b_states]
    worst, pair = 0.0, None
    for j in range(len(a)):
        for k in range(len(a)):
            target = 1.0 if j == k else 0.0
            got = pure_state_overlap(a[j], a[k]) * pure_state_overlap(b[j], b[k])
            dev = abs(got - target)
            if dev > worst:
                worst, pair = dev, (j, k)
    return GlobalOrthogonalityReport(worst <= ORTHOGONALITY_TOL, worst, pair)


def classical_ray_labels(states, tol: float = ORTHOGONALITY_TOL) -> list[int] | None:
    """Group states into rays of one orthonormal basis.

    Returns per-state class labels when every pairwise overlap modulus is 0
    or 1 within ``tol``; returns None otherwise.
    """
    kets = [ket(s) for s in states]
    labels = [-1] * len(kets)
    next_label = 0
    for i, v in enumerate(kets):
        if labels[i] >= 0:
            continue
        labels[i] = next_label
        for j in range(i + 1, len(kets)):
            ov = abs(pure_state_overlap(v, kets[j]))
            if ov > 1 - tol:
                labels[j] = next_label
            elif ov > tol:
                return None
        next_label += 1
    return labels


def induced_postinfo(gop: GopEnsemble, classical_side: str = "a") -> PostInfoEnsemble:
    """Reduce a GOP ensemble with one classical side to a post-information ensemble.

    The classical side's ray classes become the settings; the other side's
    states, grouped by class, become the indexed states with the joint prior
    carried over unchanged.
    """
    if classical_side not in ("a", "b"):
        raise ValueError("classical_side must be 'a' or 'b'")
    cl = gop.a_states if classical_side == "a" else gop.b_states
    qu = gop.b_states if classical_side == "a" else gop.a_states
    labels = classical_ray_labels(cl)
    if labels is None:
        raise ValueError(f"side {classical_side!r} is not classical (not a single orthonormal basis)")
    n_classes = max(labels) + 1
    states = [[] for _ in range(n_classes)]
    prior = [[] for _ in range(n_classes)]
    for lab, s, p in zip(labels, qu, gop.prior):
        states[lab].append(s)
        prior[lab].append(p)
    orthogonal = all(
        abs(pure_state_overlap(g[i], g[j])) <= ORTHOGONALITY_TOL
        for g in states
        for i in range(len(g))
        for j in range(i + 1, len(g))
    )
    return PostInfoEnsemble(
        settings=tuple(str(t) for t in range(n_classes)),
        states=tuple(tuple(g) for g in states),
        prior=tuple(tuple(p) for p in prior),
        orthogonal=orthogonal,
    )


@dataclass(frozen=True)
class FormDecomposition:
    """Outcome of the qubit-times-qudit structure test."""

    fits: bool
    reason: str
    induced: PostInfoEnsemble | None = None
    removable: tuple[int, ...] = ()


def _ray_classes(states) -> list[int]:
    """Group states by parallelism (|overlap| = 1 up to phase)."""
    kets = [ket(s) for s in states]
    labels = [-1] * len(kets)
    nxt = 0
    for i, v in enumerate(kets):
        if labels[i] >= 0:
            continue
        labels[i] = nxt
        for j in range(i + 1, len(kets)):
            if labels[j] < 0 and abs(pure_state_overlap(v, kets[j])) > 1 - ORTHOGONALITY_TOL:
                labels[j] = nxt
        nxt += 1
    return labels


def qubit_qudit_form_check(gop: GopEnsemble) -> FormDecomposition:
    """Split a 2 x d GOP set into a two-setting ensemble plus locally removable states.

    The kept states' first factors must fall into at most two mutually
    orthogonal rays (the two settings); every other state must be locally
    removable, i.e. its second factor orthogonal to every other second
    factor.  The largest consistent ray selection wins, so states are only
    marked removable when they cannot join the two-setting part.  Failure to
    fit is a diagnosable outcome, not an error.
    """
    d_a, _ = gop.dims
    if d_a != 2:
        return FormDecomposition(False, f"first factor has dimension {d_a}, not 2")
    n = len(gop)
    labels = _ray_classes(gop.a_states)
    classes = sorted(set(labels))
    members = {c: [k for k in range(n) if labels[k] == c] for c in classes}
    reps = {c: gop.a_states[members[c][0]] for c in classes}

    def orthogonal_pair(c1, c2):
        return abs(pure_state_overlap(reps[c1], reps[c2])) <= ORTHOGONALITY_TOL

    candidates = [(c1, c2) for i, c1 in enumerate(classes) for c2 in classes[i + 1 :] if orthogonal_pair(c1, c2)]
    candidates += [(c,) for c in classes]
    candidates.sort(key=lambda sel: -sum(len(members[c]) for c in sel))
    for selection in candidates:
        kept = [k for c in selection for k in members[c]]
        removable = sorted(set(range(n)) - set(kept))
        if any(
            abs(pure_state_overlap(gop.b_states[k], gop.b_states[j])) > ORTHOGONALITY_TOL
            for k in removable
            for j in range(n)
            if j != k
        ):
            continue
        weight = sum(gop.prior[k] for k in kept)
        groups = []
        prior = []
        for c in selection:
            groups.append(tuple(gop.b_states[k] for k in members[c]))
            prior.append(tuple(gop.prior[k] / weight for k in members[c]))
        induced = PostInfoEnsemble(
            settings=tuple(str(t) for t in range(len(selection))),
            states=tuple(groups),
            prior=tuple(prior),
            orthogonal=True,
        )
        return FormDecomposition(True, "fits", induced, tuple(removable))
    return FormDecomposition(False, "no orthogonal ray selection covers the non-removable states")


def local_unitary_equivalence_deviation(
    u: "Isometry", source: GopEnsemble, target: GopEnsemble, side: str = "a"
) -> float:
    """Worst deviation from carrying ``source`` onto ``target`` by a one-sided unitary.

    Applies ``u`` to the chosen side of every source state and greedily
    matches each result to an unused target state with the same prior, up to
    a global phase per state.  Returns the largest per-factor overlap deficit
    (infinity when some state cannot be matched at all).
    """
    if side not in ("a", "b"):
        raise ValueError("side must be 'a' or 'b'")
    if u.matrix.shape[0] != u.matrix.shape[1]:
        raise ValueError("equivalence map must be a square unitary")
    n = len(source)
    if n != len(target):
        return math.inf
    used: set[int] = set()
    worst = 0.0
    for k in range(n):
        a = u.apply(source.a_states[k]) if side == "a" else source.a_states[k]
        b = source.b_states[k] if side == "a" else u.apply(source.b_states[k])
        match = None
        for j in range(n):
            if j in used or abs(source.prior[k] - target.prior[j]) > PRIOR_TOL:
                continue
            ov_a = abs(pure_state_overlap(target.a_states[j], a))
            ov_b = abs(pure_state_overlap(target.b_states[j], b))
            if ov_a > 1 - 1e-9 and ov_b > 1 - 1e-9:
                match = max(1 - ov_a, 1 - ov_b)
                used.add(j)
                break
        if match is None:
            return math.inf
        worst = max(worst, match)
    return worst


# --- gallery -----------------------------------------------------------------

_SQ2 = math.sqrt(2.0)


def _basis(d: int) -> list[np.ndarray]:
    return [np.eye(d, dtype=complex)[i] for i in range(d)]


def _plus(d, m, n, sign=1.0, phase=1.0) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[m] = 1.0
    v[n] = sign * phase
    return v / _SQ2


def _sup(d, i, j, sign) -> np.ndarray:
    return _plus(d, i, j, sign)


def _bb84() -> PostInfoEnsemble:
    z0, z1 = _basis(2)
    return PostInfoEnsemble(
        settings=("0", "1"),
        states=((z0, z1), (_plus(2, 0, 1, 1), _plus(2, 0, 1, -1))),
        prior=((0.25, 0.25), (0.25, 0.25)),
        orthogonal=True,
    )


def _minimal_qutrit() -> PostInfoEnsemble:
    z = _basis(3)
    psi_p = np.array([0.5, 0.5, 1 / _SQ2], dtype=complex)
    psi_m = np.array([0.5, 0.5, -1 / _SQ2], dtype=complex)
    return PostInfoEnsemble(
        settings=("0", "1"),
        states=((z[0], z[1]), (psi_p, psi_m)),
        prior=((0.25, 0.25), (0.25, 0.25)),
        orthogonal=True,
    )


def _prop1_povm() -> Povm:
    r = 1 / (2 * _SQ2)
    e0 = np.array([[0.5, 0, r], [0, 0, 0], [r, 0, 0.25]])
    e1 = np.array([[0.5, 0, -r], [0, 0, 0], [-r, 0, 0.25]])
    e2 = np.array([[0, 0, 0], [0, 0.5, r], [0, r, 0.25]])
    e3 = np.array([[0, 0, 0], [0, 0.5, -r], [0, -r, 0.25]])
    return Povm(effects=(e0, e1, e2, e3))


def _thm1_pairs() -> PostInfoEnsemble:
    p = 1.0 / 6.0
    return PostInfoEnsemble(
        settings=("0", "1", "2"),
        states=(
            (_plus(3, 0, 1, 1), _plus(3, 0, 1, -1)),
            (_plus(3, 0, 2, 1), _plus(3, 0, 2, -1)),
            (_plus(3, 1, 2, 1, 1j), _plus(3, 1, 2, -1, 1j)),
        ),
        prior=((p, p), (p, p), (p, p)),
        orthogonal=True,
    )


def _thm1_isometry() -> Isometry:
    m = np.zeros((4, 3), dtype=complex)
    m[:, 0] = np.array([1, 0, 0, 1]) / _SQ2
    m[:, 1] = np.array([1, 0, 0, -1]) / _SQ2
    m[:, 2] = np.array([0, 1, 1, 0]) / _SQ2
    return Isometry(matrix=m, output_dims=(2, 2))


def _thm2_eight() -> GopEnsemble:
    a = _basis(5)
    entries = [
        (a[1], a[1]),
        (a[1], a[2]),
        (a[2], _plus(5, 2, 3, 1)),
        (a[2], _plus(5, 2, 3, -1)),
        (a[3], _plus(5, 2, 4, 1)),
        (a[3], _plus(5, 2, 4, -1)),
        (a[4], _plus(5, 3, 4, 1, 1j)),
        (a[4], _plus(5, 3, 4, -1, 1j)),
    ]
    return GopEnsemble(
        a_states=tuple(x for x, _ in entries),
        b_states=tuple(y for _, y in entries),
        prior=(0.125,) * 8,
    )


def _thm2_isometry() -> Isometry:
    def kk(i, j):
        v = np.zeros(16, dtype=complex)
        v[4 * i + j] = 1.0
        return v

    m = np.zeros((16, 5), dtype=complex)
    m[:, 0] = kk(0, 0)  # completion outside the span of the eight states
    m[:, 1] = kk(1, 1)
    m[:, 2] = (kk(2, 2) + kk(3, 3)) / _SQ2
    m[:, 3] = (kk(2, 2) - kk(3, 3)) / _SQ2
    m[:, 4] = (kk(2, 3) + kk(3, 2)) / _SQ2
    return Isometry(matrix=m, output_dims=(4, 4))


def _cor4_six() -> GopEnsemble:
    a = _basis(3)
    entries = [
        (a[0], _plus(4, 1, 2, 1)),
        (a[1], _plus(4, 1, 3, 1)),
        (a[2], _plus(4, 2, 3, 1, 1j)),
        (a[0], _plus(4, 1, 2, -1)),
        (a[1], _plus(4, 1, 3, -1)),
        (a[2], _plus(4, 2, 3, -1, 1j)),
    ]
    p = 1.0 / 6.0
    return GopEnsemble(
        a_states=tuple(x for x, _ in entries),
        b_states=tuple(y for _, y in entries),
        prior=(p,) * 6,
    )


def _cor4_isometry() -> Isometry:
    """Broadcast isometry for the second factor of ``cor4-six``.

    Acts as the three-level isometry on basis labels 1..3; label 0 is sent to
    the leftover orthogonal direction, so the columns stay orthonormal.
    """
    base = _thm1_isometry().matrix
    m = np.zeros((4, 4), dtype=complex)
    m[:, 1:] = base
    m[:, 0] = np.array([0, 1, -1, 0]) / _SQ2
    return Isometry(matrix=m, output_dims=(2, 2))


def gen_bb84(theta: float) -> GopEnsemble:
    """Two classical labels against a rotated qubit pair at angle ``theta``."""
    z0, z1 = _basis(2)
    n_hat = np.array([math.cos(theta / 2), math.sin(theta / 2)], dtype=complex)
    n_perp = np.array([math.cos((theta - math.pi) / 2), math.sin((theta - math.pi) / 2)], dtype=complex)
    return GopEnsemble(
        a_states=(z0, z0, z1, z1),
        b_states=(z0, z1, n_hat, n_perp),
        prior=(0.25,) * 4,
    )


def _weighted_seven(entries) -> GopEnsemble:
    return GopEnsemble(
        a_states=tuple(x for x, _ in entries),
        b_states=tuple(y for _, y in entries),
        prior=(0.25, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125),
    )


def _obb() -> GopEnsemble:
    a = _basis(3)
    return _weighted_seven(
        [
            (a[0], a[1]),
            (a[0], a[2]),
            (a[1], _sup(3, 1, 2, 1)),
            (a[1], _sup(3, 1, 2, -1)),
            (a[0], a[0]),
            (a[2], _sup(3, 0, 1, 1)),
            (a[2], _sup(3, 0, 1, -1)),
        ]
    )


def _cq() -> GopEnsemble:
    a = _basis(3)
    return _weighted_seven(
        [
            (a[1], a[1]),
            (a[1], _sup(3, 0, 2, 1)),
            (a[1], _sup(3, 0, 2, -1)),
            (a[0], _sup(3, 0, 1, 1)),
            (a[0], _sup(3, 0, 1, -1)),
            (a[2], _sup(3, 1, 2, 1)),
            (a[2], _sup(3, 1, 2, -1)),
        ]
    )


def _qq() -> GopEnsemble:
    a = _basis(3)
    minus10 = (a[1] - a[0]) / _SQ2
    return _weighted_seven(
        [
            (a[1], a[1]),
            (minus10, a[2]),
            (a[0], _sup(3, 0, 1, 1)),
            (a[0], _sup(3, 0, 1, -1)),
            (a[2], _sup(3, 1, 2, 1)),
            (a[2], _sup(3, 1, 2, -1)),
            (_sup(3, 1, 2, 1), a[0]),
        ]
    )


def _qq_tilde() -> GopEnsemble:
    a = _basis(3)
    return _weighted_seven(
        [
            (a[1], a[1]),
            (_sup(3, 1, 2, -1), a[2]),
            (a[0], _sup(3, 1, 2, 1)),
            (a[0], _sup(3, 1, 2, -1)),
            (_sup(3, 0, 1, 1), a[0]),
            (a[2], _sup(3, 0, 1, 1)),
            (a[2], _sup(3, 0, 1, -1)),
        ]
    )


def _qq_equivalence_unitary() -> Isometry:
    m = np.zeros((3, 3), dtype=complex)
    m[2, 0] = 1.0
    m[1, 1] = 1.0
    m[0, 2] = 1.0
    return Isometry(matrix=m, output_dims=(3,))


def _shifts() -> GopEnsemble:
    z0, z1 = _basis(2)
    plus = _plus(2, 0, 1, 1)
    minus = _plus(2, 0, 1, -1)
    entries = [
        (np.kron(z0, z0), z0),
        (np.kron(plus, minus), z1),
        (np.kron(minus, z1), plus),
        (np.kron(z1, plus), minus),
    ]
    return GopEnsemble(
        a_states=tuple(x for x, _ in entries),
        b_states=tuple(y for _, y in entries),
        prior=(0.25,) * 4,
    )


def _thm6_breidbart_povm() -> Povm:
    c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)
    z = _basis(3)
    vecs = [
        (c * z[1] + s * (z[0] + z[2])) / _SQ2,
        (c * z[1] + s * (z[0] - z[2])) / _SQ2,
        (s * z[1] - c * (z[0] + z[2])) / _SQ2,
        (s * z[1] - c * (z[0] - z[2])) / _SQ2,
    ]
    return Povm(effects=tuple(dyad(v) for v in vecs))


_GALLERY = {
    "bb84": _bb84,
    "minimal-qutrit": _minimal_qutrit,
    "prop1-povm": _prop1_povm,
    "thm1-pairs": _thm1_pairs,
    "thm1-isometry": _thm1_isometry,
    "thm2-eight": _thm2_eight,
    "thm2-isometry": _thm2_isometry,
    "cor4-six": _cor4_six,
    "cor4-isometry": _cor4_isometry,
    "obb": _obb,
    "cq": _cq,
    "qq": _qq,
    "qq-tilde": _qq_tilde,
    "qq-equivalence-unitary": _qq_equivalence_unitary,
    "shifts": _shifts,
    "thm6-breidbart-povm": _thm6_breidbart_povm,
}

_GEN_BB84 = re.compile(r"^gen-bb84\((?P<theta>[^)]+)\)$")
_ANGLE = re.compile(r"^(?:(?P<num>[0-9.]+)\s*\*\s*)?pi(?:\s*/\s*(?P<den>[0-9.]+))?$")


def _parse_angle(text: str) -> float:
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass
    m = _ANGLE.match(text)
    if not m:
        raise ValueError(f"cannot parse angle {text!r} (use a float, 'pi', 'pi/2', '3*pi/4', ...)")
    num = float(m.group("num")) if m.group("num") else 1.0
    den = float(m.group("den")) if m.group("den") else 1.0
    return num * math.pi / den


def gallery_names() -> tuple[str, ...]:
    return tuple(sorted(_GALLERY)) + ("gen-bb84(<theta>)",)


def gallery(name: str):
    """Look up a named gallery object; parameterized names carry an angle argument."""
    m = _GEN_BB84.match(name)
    if m:
        return gen_bb84(_parse_angle(m.group("theta")))
    try:
        builder = _GALLERY[name]
    except KeyError:
        raise ValueError(f"unknown gallery name {name!r}; known: {', '.join(gallery_names())}") from None
    return builder()


# --- JSON encoding -----------------------------------------------------------


def _encode_vector(v: np.ndarray) -> list:
    return [[float(c.real), float(c.imag)] for c in v]


def _encode_matrix(m: np.ndarray) -> list:
    return [_encode_vector(row) for row in np.asarray(m, dtype=complex)]


def _decode_vector(rows) -> np.ndarray:
    return np.array([complex(re_, im) for re_, im in rows], dtype=complex)


def _decode_matrix(rows) -> np.ndarray:
    return np.array([[complex(re_, im) for re_, im in row] for row in rows], dtype=complex)


def to_json_dict(obj) -> dict:
    if isinstance(obj, PostInfoEnsemble):
        return {
            "kind": "postinfo",
            "dims": [obj.dim],
            "settings": list(obj.settings),
            "prior": [list(g) for g in obj.prior],
            "states": [[_encode_vector(s) for s in g] for g in obj.states],
            "orthogonal": obj.orthogonal,
        }
    if isinstance(obj, GopEnsemble):
        return {
            "kind": "gop",
            "dims": list(obj.dims),
            "prior": list(obj.prior),
            "states": [[_encode_vector(a), _encode_vector(b)] for a, b in zip(obj.a_states, obj.b_states)],
        }
    if isinstance(obj, Povm):
        return {
            "kind": "povm",
            "dims": [obj.dim],
            "states": [_encode_matrix(e) for e in obj.effects],
        }
    if isinstance(obj, Isometry):
        return {
            "kind": "isometry",
            "dims": [obj.input_dim],
            "output_dims": list(obj.output_dims),
            "states": _encode_matrix(obj.matrix),
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_json_dict(data: dict):
    kind = data.get("kind")
    if kind == "postinfo":
        return PostInfoEnsemble(
            settings=tuple(data["settings"]),
            states=tuple(tuple(_decode_vector(s) for s in g) for g in data["states"]),
            prior=tuple(tuple(float(p) for p in g) for g in data["prior"]),
            orthogonal=bool(data.get("orthogonal", False)),
        )
    if kind == "gop":
        return GopEnsemble(
            a_states=tuple(_decode_vector(pair[0]) for pair in data["states"]),
            b_states=tuple(_decode_vector(pair[1]) for pair in data["states"]),
            prior=tuple(float(p) for p in data["prior"]),
        )
    if kind == "povm":
        return Povm(effects=tuple(_decode_matrix(e) for e in data["states"]))
    if kind == "isometry":
        return Isometry(matrix=_decode_matrix(data["states"]), output_dims=tuple(data["output_dims"]))
    raise ValueError(f"unknown ensemble kind {kind!r}")


def dumps(obj) -> str:
    return json.dumps(to_json_dict(obj), sort_keys=True)


def loads(text: str):
    return from_json_dict(json.loads(text))
