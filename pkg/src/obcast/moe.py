"""Tripartite correlation games: winning probability and operator-norm bounds.

One referee measurement per setting is applied to the first share of a
three-party state; the other two parties must both reproduce the outcome
after learning the setting.  The standard upper-bound tool replaces the
optimization over states by the operator norm of the summed game operators
and splits that norm along a clash-free permutation family.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .ensembles import Povm, _encode_matrix, _decode_matrix
from .linalg import dagger, dyad, hermitian, kron, operator_norm, partial_trace, psd_sqrt


@dataclass(frozen=True)
class MoeGame:
    """One referee POVM per setting, all on the same space."""

    measurements: tuple[Povm, ...]

    def __post_init__(self):
        if not self.measurements:
            raise ValueError("need at least one setting")
        dims = {m.dim for m in self.measurements}
        if len(dims) != 1:
            raise ValueError(f"measurements live on different dimensions: {sorted(dims)}")
        outcomes = {len(m) for m in self.measurements}
        if len(outcomes) != 1:
            raise ValueError("all settings must share an outcome alphabet")

    @property
    def dim(self) -> int:
        return self.measurements[0].dim

    @property
    def outcome_count(self) -> int:
        return len(self.measurements[0])


@dataclass(frozen=True)
class MoeStrategy:
    """Shared state plus per-setting response POVMs for the two guessing parties."""

    state: np.ndarray
    bob: tuple[Povm, ...]
    charlie: tuple[Povm, ...]

    def __post_init__(self):
        rho = hermitian(self.state, tol=1e-10)
        if abs(np.trace(rho).real - 1.0) > 1e-10 or np.linalg.eigvalsh(rho).min() < -1e-10:
            raise ValueError("shared state must be a density operator")
        object.__setattr__(self, "state", rho)


@dataclass(frozen=True)
class PermutationFamily:
    """Permutations that never agree pointwise (clash-free)."""

    permutations: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.permutations:
            raise ValueError("need at least one permutation")
        n = len(self.permutations[0])
        for p in self.permutations:
            if sorted(p) != list(range(n)):
                raise ValueError(f"{p} is not a permutation of range({n})")
        for p, q in itertools.combinations(self.permutations, 2):
            if any(p[i] == q[i] for i in range(n)):
                raise ValueError(f"permutations {p} and {q} clash")

    @classmethod
    def cyclic(cls, n: int, count: int | None = None) -> "PermutationFamily":
        k = count if count is not None else n
        return cls(tuple(tuple((i + shift) % n for i in range(n)) for shift in range(k)))


def game_operators(game: MoeGame, strategy: MoeStrategy) -> list[np.ndarray]:
    """Per-setting operators sum_x F_x (x) P_x (x) Q_x."""
    if len(strategy.bob) != len(game.measurements) or len(strategy.charlie) != len(game.measurements):
        raise ValueError("strategy must respond to every setting")
    ops = []
    for meas, p_povm, q_povm in zip(game.measurements, strategy.bob, strategy.charlie):
        if len(p_povm) != len(meas) or len(q_povm) != len(meas):
            raise ValueError("responses must share the referee outcome alphabet")
        acc = None
        for f, p, q in zip(meas.effects, p_povm.effects, q_povm.effects):
            term = kron(kron(f, p), q)
            acc = term if acc is None else acc + term
        ops.append(acc)
    return ops


def moe_win_prob(game: MoeGame, strategy: MoeStrategy, priors=None) -> float:
    """Probability that both responders match the referee outcome."""
    n = len(game.measurements)
    pr = np.full(n, 1.0 / n) if priors is None else np.asarray(priors, dtype=float)
    if pr.shape != (n,) or pr.min() < 0 or abs(pr.sum() - 1.0) > 1e-12:
        raise ValueError("priors must be a probability vector over the settings")
    ops = game_operators(game, strategy)
    if ops[0].shape != strategy.state.shape:
        raise ValueError(
            f"state dimension {strategy.state.shape[0]} does not match game operators {ops[0].shape[0]}"
        )
    value = float(sum(w * np.trace(op @ strategy.state).real for w, op in zip(pr, ops)))
    if not -1e-9 <= value <= 1.0 + 1e-9:
        raise ValueError(f"winning probability {value!r} escaped [0, 1]")
    return min(1.0, max(0.0, value))


def overlap_constant(game: MoeGame) -> float:
    """Largest cross-setting effect overlap max ||sqrt(F) sqrt(F')||."""
    if len(game.measurements) < 2:
        raise ValueError("need at least two settings")
    roots = [[psd_sqrt(e) for e in m.effects] for m in game.measurements]
    return max(
        operator_norm(f @ g)
        for i, j in itertools.combinations(range(len(roots)), 2)
        for f in roots[i]
        for g in roots[j]
    )


def lemma_a1_bound(operators, family: PermutationFamily) -> float:
    """Permutation splitting of ||sum R_i||: sum_k max_i ||sqrt(R_i) sqrt(R_pi^k(i))||."""
    ops = [hermitian(r, tol=1e-10) for r in operators]
    n = len(ops)
    if any(len(p) != n for p in family.permutations):
        raise ValueError("family size does not match the operator count")
    roots = [psd_sqrt(r) for r in ops]
    total = 0.0
    for perm in family.permutations:
        total += max(operator_norm(roots[i] @ roots[perm[i]]) for i in range(n))
    return total


def steering_deviation(u: np.ndarray) -> float:
    """Worst deviation of the transpose-trick steering identity for one unitary.

    Measuring conj(U) |x><x| conj(U)^dagger on one half of the maximally
    entangled state must leave the other half in U |x><x| U^dagger / d.
    """
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    basis = np.eye(d, dtype=complex)
    shared = dyad(basis.reshape(-1) / math.sqrt(d))
    worst = 0.0
    for x in range(d):
        effect = np.conj(u) @ dyad(basis[x]) @ u.T
        marginal = partial_trace(kron(effect, np.eye(d)) @ shared, (d, d), {1})
        steered = u @ dyad(basis[x]) @ dagger(u) / d
        worst = max(worst, float(np.abs(marginal - steered).max()))
    return worst


def transpose_trick_game(unitaries) -> MoeGame:
    """Game whose effects steer the maximally entangled state onto rotated basis states.

    For each unitary U the setting's effects are conj(U) |x><x| conj(U)^dagger;
    the steering identity is verified before the game is returned.
    """
    mats = [np.asarray(u, dtype=complex) for u in unitaries]
    d = mats[0].shape[0]
    for u in mats:
        if u.shape != (d, d) or np.abs(dagger(u) @ u - np.eye(d)).max() > 1e-10:
            raise ValueError("inputs must be unitaries of one dimension")
    basis = np.eye(d, dtype=complex)
    measurements = []
    for u in mats:
        if steering_deviation(u) > 1e-12:
            raise ValueError("steering identity failed; inputs are not consistent unitaries")
        effects = tuple(np.conj(u) @ dyad(basis[x]) @ u.T for x in range(d))
        measurements.append(Povm(effects=effects))
    return MoeGame(measurements=tuple(measurements))


def game_bb84() -> MoeGame:
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    h = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    return transpose_trick_game([x, h])


def game_obb() -> MoeGame:
    """Completion of the overlapping-bases qutrit partition into three bases."""
    z = np.eye(3, dtype=complex)

    def plus(i, j, sign):
        return (z[i] + sign * z[j]) / math.sqrt(2)

    m0 = Povm(effects=tuple(dyad(z[i]) for i in range(3)))
    m1 = Povm(effects=(dyad(z[0]), dyad(plus(1, 2, 1)), dyad(plus(1, 2, -1))))
    m2 = Povm(effects=(dyad(plus(0, 1, 1)), dyad(plus(0, 1, -1)), dyad(z[2])))
    return MoeGame(measurements=(m0, m1, m2))


def copying_strategy(game: MoeGame) -> MoeStrategy:
    """Both responders reuse the referee's effects on their own copies."""
    d = game.dim
    basis = np.eye(d, dtype=complex)
    correlated = sum(dyad(np.kron(np.kron(basis[i], basis[i]), basis[i])) for i in range(d)) / d
    return MoeStrategy(state=correlated, bob=game.measurements, charlie=game.measurements)


def classical_copy_registers(game: MoeGame) -> list[np.ndarray]:
    """Game operators when both responders hold classical copies of the outcome.

    Setting operators sum_x F_x (x) |x><x| (x) |x><x|; feeding them to the
    permutation bound yields the tight two-basis game value after prior
    scaling.
    """
    basis = np.eye(game.outcome_count, dtype=complex)
    return [
        sum(kron(kron(m.effects[x], dyad(basis[x])), dyad(basis[x])) for x in range(len(m)))
        for m in game.measurements
    ]


def classical_copy_permutation_bound(game: MoeGame) -> float:
    """Permutation bound on the classical-copy registers, scaled by the uniform prior."""
    n = len(game.measurements)
    return lemma_a1_bound(classical_copy_registers(game), PermutationFamily.cyclic(n)) / n


@dataclass(frozen=True)
class GoTrivialityReport:
    """The operator-norm toolkit yields nothing on the overlapping-bases game.

    The cross-setting overlap constant is one (two settings share a rank-one
    effect), and the permutation bound on the copying strategy's operators is
    also one, while the broadcast-side analysis of the same seven-state set
    certifies a strictly smaller attack value.
    """

    overlap_constant: float
    copy_strategy_bound: float
    contrast_bound: float


def example_go_trivial() -> GoTrivialityReport:
    from .qpv import disk_program_solve, obb_disk_program

    game = game_obb()
    c = overlap_constant(game)
    strategy = copying_strategy(game)
    ops = game_operators(game, strategy)
    bound = lemma_a1_bound(ops, PermutationFamily.cyclic(3)) / 3.0
    contrast = disk_program_solve(obb_disk_program()).bound
    return GoTrivialityReport(overlap_constant=c, copy_strategy_bound=bound, contrast_bound=contrast)


# --- JSON --------------------------------------------------------------------


def game_to_json_dict(game: MoeGame) -> dict:
    return {
        "kind": "moe-game",
        "dims": [game.dim],
        "measurements": [[_encode_matrix(e) for e in m.effects] for m in game.measurements],
    }


def game_from_json_dict(data: dict) -> MoeGame:
    if data.get("kind") != "moe-game":
        raise ValueError(f"unknown kind {data.get('kind')!r}")
    return MoeGame(
        measurements=tuple(
            Povm(effects=tuple(_decode_matrix(e) for e in m)) for m in data["measurements"]
        )
    )


def game_dumps(game: MoeGame) -> str:
    return json.dumps(game_to_json_dict(game), sort_keys=True)


def game_loads(text: str) -> MoeGame:
    return game_from_json_dict(json.loads(text))
