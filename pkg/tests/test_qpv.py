import math

import numpy as np
import pytest

from obcast.ensembles import gallery, gen_bb84
from obcast.qpv import (
    DiskProgram,
    Theorem4Instance,
    bb84_family_instance,
    breidbart_lower,
    cor5_epsilon_star,
    cq_strategy_value,
    disk_program_ascent,
    disk_program_solve,
    error_per_state,
    obb_disk_program,
    prop4_solve,
    qq_tilde_disk_program,
    shifts_instance,
    thm4_min_epsilon,
    thm4_rhs,
    thm6_separation,
)
from obcast.uncertainty import SuperpositionSpec

SQ2 = math.sqrt(2)
BB84_VALUE = (2 + SQ2) / 4
CONJUGATE = SuperpositionSpec(math.pi / 2, 0.0, -math.pi / 2, 0.0)


def test_instance_validation():
    with pytest.raises(ValueError):
        Theorem4Instance(overlap_a01=0.0, overlap_b01=0.0, overlap_a23=1.0, spec=CONJUGATE)
    with pytest.raises(ValueError):
        Theorem4Instance(overlap_a01=1.2, overlap_b01=0.0, overlap_a23=1.0, spec=CONJUGATE)


def test_rhs_fully_classical_case_is_unconstraining():
    inst = Theorem4Instance(
        overlap_a01=1.0,
        overlap_b01=0.0,
        overlap_a23=0.0,
        spec=SuperpositionSpec(0.0, 0.0, math.pi, 0.0),
    )
    assert thm4_rhs(0.0, inst) == pytest.approx(2.0)
    assert thm4_min_epsilon(inst) == 0.0


def test_rhs_conjugate_instance_closed_form():
    inst = bb84_family_instance(math.pi / 2)
    for eps in np.linspace(0, 0.5, 17):
        assert thm4_rhs(float(eps), inst) == pytest.approx(
            2 * math.sqrt(eps * (1 - eps)) + 2 * eps, abs=1e-12
        )
    assert thm4_rhs(0.5, inst) >= 1.0
    with pytest.raises(ValueError):
        thm4_rhs(0.6, inst)


def test_min_epsilon_conjugate_value():
    assert thm4_min_epsilon(bb84_family_instance(math.pi / 2)) == pytest.approx(
        (2 - SQ2) / 4, abs=1e-9
    )


def test_min_epsilon_matches_quadratic_root_across_angles():
    for theta in np.linspace(0.05, math.pi / 2, 100):
        c = 1 - math.cos(theta)
        s = math.sin(theta) ** 2
        root = ((c + s) - math.sqrt((c + s) ** 2 - (1 + s) * c * c)) / (2 * (1 + s))
        assert thm4_min_epsilon(bb84_family_instance(float(theta))) == pytest.approx(root, abs=1e-9)


def test_shifts_instance_threshold():
    inst = shifts_instance()
    assert inst.overlap_a01 == pytest.approx(0.5, abs=1e-12)
    assert inst.overlap_b01 == pytest.approx(0.0, abs=1e-12)
    assert inst.overlap_a23 == pytest.approx(0.5, abs=1e-12)
    eps = thm4_min_epsilon(inst)
    assert eps > 1e-5
    assert eps == pytest.approx(2.782088e-4, abs=1e-9)


def test_cor5_reports_both_readings():
    result = cor5_epsilon_star(math.pi / 2)
    assert result.printed_formula == pytest.approx(BB84_VALUE, abs=1e-12)
    assert result.bisection_root == pytest.approx((2 - SQ2) / 4, abs=1e-9)
    assert cor5_epsilon_star(0.0).bisection_root == 0.0


@pytest.mark.parametrize(
    "theta,expected",
    [(math.pi / 2, (2 + SQ2) / 4), (0.0, 1.0), (math.pi / 3, math.cos(math.pi / 12) ** 2)],
)
def test_breidbart_strategy_value(theta, expected):
    assert breidbart_lower(theta) == pytest.approx(expected, abs=1e-12)


def test_prop4_symmetric_parameters():
    result = prop4_solve(0.5, 0.5, 0.5, CONJUGATE)
    assert result.bound == pytest.approx(BB84_VALUE, abs=1e-6)
    assert not result.unity_condition_printed


def test_prop4_unconstrained_first_slot():
    # with both coefficients zero the capped slots sit at one half
    spec = SuperpositionSpec(0.4, 0.0, 0.4, 0.0)
    assert abs(spec.z1) == pytest.approx(0.0, abs=1e-15)
    result = prop4_solve(0.5, 0.6, 0.6, spec)
    expected = 0.5 * (0.6 + 1.0) + 0.5 * (0.6 + 0.5) - 0.5
    assert result.raw_value == pytest.approx(expected, abs=1e-6)


def test_prop4_orthogonal_case_saturates():
    spec = SuperpositionSpec(0.0, 0.0, -math.pi / 2, 0.0)
    result = prop4_solve(0.5, 1.0, 1.0, spec)
    assert result.unity_condition_printed
    assert result.bound == pytest.approx(1.0, abs=1e-9)
    assert result.raw_value >= 1.0


def test_prop4_input_validation():
    with pytest.raises(ValueError):
        prop4_solve(1.5, 0.5, 0.5, CONJUGATE)
    with pytest.raises(ValueError):
        prop4_solve(0.5, 0.2, 0.5, CONJUGATE)


def test_disk_program_seven_state_bound():
    solution = disk_program_solve(obb_disk_program())
    assert solution.bound == pytest.approx(0.25 + SQ2 / 4, abs=1e-12)
    assert solution.bound <= 0.603554
    assert abs(solution.opt - solution.certificate_value) <= 1e-9
    assert solution.min_constraint_slack >= -1e-12


def test_disk_program_primed_quantum_bound():
    solution = disk_program_solve(qq_tilde_disk_program())
    assert solution.bound == pytest.approx(0.25 + 3 / (4 * SQ2), abs=1e-12)
    assert solution.bound == pytest.approx(0.78033, abs=1e-6)


def test_disk_program_empty_and_invalid():
    empty = DiskProgram(couplings=(), shift=0.0, base=0.25, scale=0.25)
    solution = disk_program_solve(empty)
    assert solution.opt == 0.0 and solution.bound == pytest.approx(0.25)
    with pytest.raises(ValueError):
        DiskProgram(couplings=((0, 0), (1, 0)), shift=0.0, base=0.0, scale=1.0)


def test_disk_ascent_agrees_with_analytic_route():
    analytic = disk_program_solve(obb_disk_program())
    numeric = disk_program_ascent(obb_disk_program())
    assert numeric.certificate == "heuristic"
    assert numeric.opt <= analytic.opt + 1e-9
    assert numeric.opt >= analytic.opt - 1e-6


def test_disk_program_agrees_with_convex_solver():
    cp = pytest.importorskip("cvxpy")
    program = obb_disk_program()
    n = program.pair_count
    a = cp.Variable(n)
    b = cp.Variable(n)
    t = cp.Variable()
    constraints = [t <= cp.sum(a), t <= cp.sum(b), a >= 0, a <= 1, b >= 0, b <= 1]
    for i, j in program.couplings:
        constraints.append(a[i] <= 0.5 + 0.5 * cp.sqrt(1 - cp.square(2 * b[j] - 1)))
        constraints.append(b[j] <= 0.5 + 0.5 * cp.sqrt(1 - cp.square(2 * a[i] - 1)))
    problem = cp.Problem(cp.Maximize(t), constraints)
    problem.solve(solver=cp.CLARABEL)
    assert disk_program_solve(program).opt == pytest.approx(problem.value, abs=1e-6)


def test_prop4_agrees_with_convex_solver():
    cp = pytest.importorskip("cvxpy")
    p, pg01, pg23 = 0.5, 0.5, 0.5
    z1, z2 = abs(CONJUGATE.z1), abs(CONJUGATE.z2)
    r = cp.Variable(2)
    s = cp.Variable(2)
    t = cp.Variable()
    constraints = [
        r >= 0, r <= 1, s >= 0, s <= 1,
        t <= p * (pg01 + r[0]) + (1 - p) * (pg23 + r[1]) - 0.5,
        t <= p * (pg01 + s[0]) + (1 - p) * (pg23 + s[1]) - 0.5,
        r[1] <= 0.5 * (z1 * cp.sqrt(1 - cp.square(2 * s[0] - 1)) + z2 * (2 * r[0] - 1) + 1),
        s[1] <= 0.5 * (z1 * cp.sqrt(1 - cp.square(2 * r[0] - 1)) + z2 * (2 * s[0] - 1) + 1),
    ]
    problem = cp.Problem(cp.Maximize(t), constraints)
    problem.solve(solver=cp.CLARABEL)
    assert prop4_solve(p, pg01, pg23, CONJUGATE).raw_value == pytest.approx(problem.value, abs=1e-6)


def test_error_per_state():
    assert error_per_state(gen_bb84(math.pi / 2), 1.0, BB84_VALUE) == pytest.approx(
        (2 - SQ2) / 16, abs=1e-12
    )
    assert error_per_state(gen_bb84(math.pi / 2), 1.0, BB84_VALUE) < 0.03662
    assert error_per_state(gallery("obb"), 1.0, 0.603554) > 0.05663
    assert error_per_state(gallery("obb"), 0.7, 0.7) == 0.0
    with pytest.raises(ValueError):
        error_per_state(gallery("obb"), 0.5, 0.7)


def test_cq_strategy_rows_and_total():
    result = cq_strategy_value()
    target = math.cos(math.pi / 8) ** 2
    assert result.value == pytest.approx(target, abs=1e-12)
    assert all(abs(x - target) <= 1e-12 for x in result.per_state_success)
    assert result.identity_residual <= 1e-12


def test_cq_strategy_is_prior_independent():
    # every row succeeds with the same probability, so reweighting is inert
    rows = cq_strategy_value().per_state_success
    rng = np.random.default_rng(0)
    totals = []
    for _ in range(20):
        w = rng.dirichlet(np.ones(7))
        totals.append(float(np.dot(w, rows)))
    assert max(totals) - min(totals) <= 1e-12


def test_separation_assembly():
    sep = thm6_separation()
    assert sep.equivalence_deviation <= 1e-12
    assert sep.upper.computed == pytest.approx(0.780330, abs=1e-6)
    assert sep.upper.computed <= 0.7805
    assert sep.lower.computed == pytest.approx(BB84_VALUE, abs=1e-12)
    assert sep.gap > 0.07
    assert sep.upper.passed and sep.lower.passed


def test_attack_bounds_dominate_their_strategies():
    # the certified chain at theta = pi/2: program bound, explicit strategy,
    # and inequality threshold all meet at the same number
    success_bound = 1 - thm4_min_epsilon(bb84_family_instance(math.pi / 2))
    strategy = breidbart_lower(math.pi / 2)
    program = prop4_solve(0.5, 0.5, 0.5, CONJUGATE).bound
    assert success_bound >= strategy - 1e-9
    assert program >= strategy - 1e-6


def test_rhs_monotone_on_gallery_instances():
    for inst in (bb84_family_instance(math.pi / 2), bb84_family_instance(1.0), shifts_instance()):
        grid = [thm4_rhs(float(e), inst) for e in np.linspace(0, 0.5, 1000)]
        assert all(b >= a - 1e-12 for a, b in zip(grid, grid[1:]))
