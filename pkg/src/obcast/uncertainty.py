"""Geometric uncertainty relations for superposed bipartite vectors.

The central trade-off: if two vectors are nearly distinguishable on one
subsystem, superpositions of them lose their relative phase on the other
subsystem.  Three forms are provided: trace-distance/fidelity for one pair
of superpositions, the guessing-probability relaxation, and the general
multi-vector form with a permutation-minimized classical term.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .linalg import dyad, fidelity, ket, partial_trace, trace_distance

MAX_GENERAL_VECTORS = 8


@dataclass(frozen=True)
class SuperpositionSpec:
    """Angles defining two superpositions of a fixed vector pair.

    The first superposition uses (theta, phi), the second (omega, phi_prime):
    cos(angle/2) |v0> + e^{i phase} sin(angle/2) |v1>.  The derived
    coefficients are always recomputed from the angles.
    """

    theta: float
    phi: float
    omega: float
    phi_prime: float

    @property
    def z1(self) -> complex:
        return 0.5 * (
            math.sin(self.theta) * cmath.exp(-1j * self.phi)
            - math.sin(self.omega) * cmath.exp(-1j * self.phi_prime)
        )

    @property
    def z2(self) -> float:
        return 0.5 * (math.cos(self.theta) - math.cos(self.omega))

    def superpose(self, v0: np.ndarray, v1: np.ndarray, which: str) -> np.ndarray:
        """Linear combination for 'theta' or 'omega'; not renormalized."""
        angle, phase = (self.theta, self.phi) if which == "theta" else (self.omega, self.phi_prime)
        return math.cos(angle / 2) * ket(v0) + cmath.exp(1j * phase) * math.sin(angle / 2) * ket(v1)


def _marginal(v: np.ndarray, dims: tuple[int, int], keep: int) -> np.ndarray:
    return partial_trace(dyad(v), dims, {keep})


def ur_pair_bound(
    alpha0: np.ndarray,
    alpha1: np.ndarray,
    spec: SuperpositionSpec,
    dims: tuple[int, int],
) -> tuple[float, float]:
    """Both sides of the pair uncertainty relation.

    Returns (lhs, rhs) with
    lhs = D(alpha_theta^B, alpha_omega^B) and
    rhs = |z1| F(alpha_0^A, alpha_1^A) + |z2| D(alpha_0^B, alpha_1^B),
    where the superpositions stay unnormalized and A is the first factor.
    """
    a0, a1 = ket(alpha0), ket(alpha1)
    if a0.shape != a1.shape:
        raise ValueError("vectors must share a dimension")
    if int(np.prod(dims)) != a0.shape[0]:
        raise ValueError(f"dims {dims} do not match vector length {a0.shape[0]}")
    v_theta = spec.superpose(a0, a1, "theta")
    v_omega = spec.superpose(a0, a1, "omega")
    lhs = trace_distance(_marginal(v_theta, dims, 1), _marginal(v_omega, dims, 1))
    rhs = abs(spec.z1) * fidelity(_marginal(a0, dims, 0), _marginal(a1, dims, 0)) + abs(
        spec.z2
    ) * trace_distance(_marginal(a0, dims, 1), _marginal(a1, dims, 1))
    return lhs, rhs


def ur_guess_bound(pg_cross_a: float, pg_pair_b: float, spec: SuperpositionSpec) -> float:
    """Upper bound on guessing the two superpositions from the second factor.

    Inputs are equiprobable guessing probabilities: ``pg_cross_a`` for the
    base pair seen on the first factor, ``pg_pair_b`` for the base pair seen
    on the second factor.
    """
    for name, p in (("pg_cross_a", pg_cross_a), ("pg_pair_b", pg_pair_b)):
        if not 0.5 - 1e-12 <= p <= 1.0 + 1e-12:
            raise ValueError(f"{name}={p!r} outside [1/2, 1]")
    return 0.5 * (
        abs(spec.z1) * math.sqrt(max(0.0, 1.0 - (2 * pg_cross_a - 1) ** 2))
        + abs(spec.z2) * (2 * pg_pair_b - 1)
        + 1.0
    )


@dataclass(frozen=True)
class GeneralURInstance:
    """Two linear combinations of shared (possibly unnormalized) vectors."""

    gammas: tuple[np.ndarray, ...]
    alphas: tuple[complex, ...]
    betas: tuple[complex, ...]
    dims: tuple[int, int]

    def __post_init__(self):
        gammas = tuple(ket(g) for g in self.gammas)
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "alphas", tuple(complex(a) for a in self.alphas))
        object.__setattr__(self, "betas", tuple(complex(b) for b in self.betas))
        if len({g.shape[0] for g in gammas}) != 1:
            raise ValueError("vectors must share a dimension")
        if not (len(self.alphas) == len(self.betas) == len(gammas)):
            raise ValueError("coefficient lists must match the vector count")
        if int(np.prod(self.dims)) != gammas[0].shape[0]:
            raise ValueError(f"dims {self.dims} do not match vector length")


@dataclass(frozen=True)
class URGeneralBounds:
    lhs: float
    rhs_tight: float
    rhs_relaxed: float
    best_permutation: tuple[int, ...]


def ur_general(inst: GeneralURInstance) -> URGeneralBounds:
    """Multi-vector uncertainty relation.

    The tight right-hand side minimizes the classical term over index
    permutations (exhaustive; at most eight vectors).  The relaxed form
    replaces that term with the total-variation distance of the coefficient
    weight vectors.  The fidelity term runs over unordered vector pairs with
    z_ij = alpha_i alpha_j^* - beta_i beta_j^*, matching the pair form when
    only two vectors are present.
    """
    n = len(inst.gammas)
    if n > MAX_GENERAL_VECTORS:
        raise ValueError(f"{n} vectors exceed the supported {MAX_GENERAL_VECTORS}")
    v_alpha = sum(a * g for a, g in zip(inst.alphas, inst.gammas))
    v_beta = sum(b * g for b, g in zip(inst.betas, inst.gammas))
    marg_b = [_marginal(g, inst.dims, 1) for g in inst.gammas]
    marg_a = [_marginal(g, inst.dims, 0) for g in inst.gammas]
    lhs = trace_distance(_marginal(v_alpha, inst.dims, 1), _marginal(v_beta, inst.dims, 1))
    p = [abs(a) ** 2 for a in inst.alphas]
    q = [abs(b) ** 2 for b in inst.betas]
    fid_term = 0.0
    for i, j in itertools.combinations(range(n), 2):
        z_ij = inst.alphas[i] * np.conj(inst.alphas[j]) - inst.betas[i] * np.conj(inst.betas[j])
        fid_term += abs(z_ij) * fidelity(marg_a[i], marg_a[j])
    cost = [[trace_distance(p[i] * marg_b[i], q[j] * marg_b[j]) for j in range(n)] for i in range(n)]
    best_perm, best_classical = None, math.inf
    for perm in itertools.permutations(range(n)):
        classical = sum(cost[i][perm[i]] for i in range(n))
        if classical < best_classical:
            best_perm, best_classical = perm, classical
    relaxed_classical = 0.5 * sum(abs(pi - qi) for pi, qi in zip(p, q))
    return URGeneralBounds(
        lhs=lhs,
        rhs_tight=best_classical + fid_term,
        rhs_relaxed=relaxed_classical + fid_term,
        best_permutation=best_perm,
    )


def no_go_bound(theta: float) -> float:
    """Ceiling on the broadcast-side distinguishability of a rotated basis pair.

    When the unrotated pair stays perfectly distinguishable on one side, the
    rotated pair's other-side trace distance cannot exceed |cos theta|, which
    sits strictly below one except at basis coincidence.
    """
    return abs(math.cos(theta))
