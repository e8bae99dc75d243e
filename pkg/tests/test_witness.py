import math

import numpy as np
import pytest

from thermwit import (
    PartitionCut,
    SpinModelSpec,
    build_spin_hamiltonian,
    critical_temperature,
    eig_hermitian,
    ensemble_from_decomposition,
    evaluate_witness,
    ground_state,
    ppt_check,
    ree_lower_bound,
    sweep,
)
from thermwit.witness import WitnessReport
from conftest import LN2, heis2_closed_form

# frozen pre-build oracle values (bisection on closed-form entropies)
HEIS2_T_STAR_EQ2 = 4.0 / math.log(3.0)  # 3.6409569065...
HEIS2_T_STAR_EQ4 = 1.5666338883549469
RING4_T_STAR_EQ4 = 1.7545333145958169


def heis(n, boundary="open"):
    return build_spin_hamiltonian(
        SpinModelSpec(kind="heisenberg", n_sites=n, boundary=boundary)
    )


def heis2_estimate():
    return ree_lower_bound(ground_state(heis(2)).state)


# ---------------------------------------------------------------------------
# single-temperature evaluation
# ---------------------------------------------------------------------------

def test_evaluate_fires_both_at_low_temperature():
    rep = evaluate_witness(heis(2), 1.0, heis2_estimate())
    ref = heis2_closed_form(1.0)
    assert rep.S == pytest.approx(ref["S"], rel=1e-10)
    assert rep.p == pytest.approx(ref["p"], rel=1e-10)
    assert rep.S < LN2
    assert rep.eq4_fires and rep.eq2_fires
    assert rep.ground_degeneracy == 1


def test_evaluate_entropy_form_stops_first():
    rep = evaluate_witness(heis(2), 2.0, heis2_estimate())
    ref = heis2_closed_form(2.0)
    assert rep.S == pytest.approx(ref["S"], rel=1e-10)  # ~0.918 > ln 2
    assert rep.neg_ln_p == pytest.approx(-math.log(ref["p"]), rel=1e-10)  # ~0.341
    assert not rep.eq4_fires
    assert rep.eq2_fires


def test_product_ground_state_never_fires():
    spec = SpinModelSpec(kind="transverse_ising", n_sites=2, coupling=0.0, field=1.0)
    h = build_spin_hamiltonian(spec)
    est = ree_lower_bound(ground_state(h).state)
    assert est.lower == pytest.approx(0.0, abs=1e-10)
    for t in (0.1, 1.0, 10.0):
        rep = evaluate_witness(h, t, est)
        assert not rep.eq2_fires and not rep.eq4_fires


def test_report_rejects_implication_violation():
    with pytest.raises(RuntimeError, match="implication"):
        WitnessReport(
            T=1.0, S=0.1, p=0.99, neg_ln_p=0.2, E_lower=0.15, E_upper=None,
            eq2_fires=False, eq4_fires=True, ground_degeneracy=1,
        )


def test_evaluate_rejects_nonpositive_temperature():
    with pytest.raises(ValueError, match="positive"):
        evaluate_witness(heis(2), -1.0, heis2_estimate())


# ---------------------------------------------------------------------------
# critical temperatures
# ---------------------------------------------------------------------------

def test_threshold_ground_weight_form_closed_value():
    t_star = critical_temperature(heis(2), "eq2", LN2, bracket=(0.1, 10.0), tol=1e-6)
    assert t_star == pytest.approx(HEIS2_T_STAR_EQ2, abs=1e-3)


def test_threshold_entropy_form_pins_the_crossing():
    t_star = critical_temperature(heis(2), "eq4", LN2, bracket=(0.1, 10.0), tol=1e-6)
    assert 1.0 < t_star < 2.0
    assert t_star == pytest.approx(HEIS2_T_STAR_EQ4, abs=1e-3)
    assert abs(heis2_closed_form(t_star)["S"] - LN2) <= 1e-6


def test_threshold_absent_for_zero_bound():
    assert critical_temperature(heis(2), "eq2", 0.0) is None


def test_threshold_absent_when_quantity_already_above():
    # at T >= 5 the entropy already exceeds ln 2, so no crossing in bracket
    assert critical_temperature(heis(2), "eq4", LN2, bracket=(5.0, 50.0)) is None


def test_threshold_absent_for_degenerate_ground_level():
    # Z x I: two-fold ground level, S(T->0) = ln 2 >= e_lower
    spec = SpinModelSpec(kind="custom_terms", n_sites=2, custom_terms=(((0,), "Z", 1.0),))
    h = build_spin_hamiltonian(spec)
    assert critical_temperature(h, "eq4", LN2, bracket=(1e-3, 10.0)) is None


def test_threshold_expands_bracket_upward():
    t_star = critical_temperature(heis(2), "eq2", LN2, bracket=(0.1, 0.2), tol=1e-6)
    assert t_star == pytest.approx(HEIS2_T_STAR_EQ2, abs=1e-3)


def test_threshold_rejects_bad_inputs():
    with pytest.raises(ValueError, match="kind"):
        critical_temperature(heis(2), "eq9", LN2)
    with pytest.raises(ValueError, match="bracket"):
        critical_temperature(heis(2), "eq2", LN2, bracket=(2.0, 1.0))


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def test_sweep_firing_pattern_matches_thresholds():
    grid = [round(0.1 * k, 10) for k in range(1, 51)]
    res = sweep(heis(2), grid)
    assert res.T_star_eq2 == pytest.approx(HEIS2_T_STAR_EQ2, abs=1e-3)
    assert res.T_star_eq4 == pytest.approx(HEIS2_T_STAR_EQ4, abs=1e-3)
    assert res.T_star_eq4 < res.T_star_eq2
    for rep in res.reports:
        assert rep.eq4_fires == (rep.T < res.T_star_eq4)
        assert rep.eq2_fires == (rep.T < res.T_star_eq2)
        assert (not rep.eq4_fires) or rep.eq2_fires


def test_sweep_single_point_grid_still_bisects():
    res = sweep(heis(2), [1.0])
    assert len(res.reports) == 1
    assert res.T_star_eq2 == pytest.approx(HEIS2_T_STAR_EQ2, abs=1e-3)
    assert res.T_star_eq4 == pytest.approx(HEIS2_T_STAR_EQ4, abs=1e-3)


def test_sweep_four_site_ring():
    res = sweep(heis(4, boundary="periodic"), [0.5, 1.0, 2.0, 4.0])
    assert res.T_star_eq4 is not None
    assert res.T_star_eq4 == pytest.approx(RING4_T_STAR_EQ4, abs=1e-3)
    assert res.reports[0].E_lower == pytest.approx(math.log(3), abs=1e-9)


def test_sweep_with_upper_bound():
    res = sweep(heis(2), [1.0, 2.0], compute_upper=True)
    for rep in res.reports:
        assert rep.E_upper is not None
        assert rep.E_lower <= rep.E_upper + 1e-6


def test_sweep_grid_validation():
    with pytest.raises(ValueError, match="nonempty"):
        sweep(heis(2), [])
    with pytest.raises(ValueError, match="ascending"):
        sweep(heis(2), [2.0, 1.0])
    with pytest.raises(ValueError, match="positive"):
        sweep(heis(2), [-1.0, 1.0])


# ---------------------------------------------------------------------------
# soundness properties
# ---------------------------------------------------------------------------

def test_smaller_bound_never_flips_silent_to_firing():
    h = heis(2)
    est = heis2_estimate()
    for t in np.geomspace(0.2, 20.0, 12):
        full = evaluate_witness(h, float(t), est)
        for shrink in (0.5, 0.1):
            weaker = ree_lower_bound(ground_state(h).state)
            weaker = type(weaker)(
                lower=est.lower * shrink, upper=None, method=weaker.method,
                iterations=weaker.iterations, converged=True,
            )
            rep = evaluate_witness(h, float(t), weaker)
            assert not (rep.eq2_fires and not full.eq2_fires)
            assert not (rep.eq4_fires and not full.eq4_fires)


def test_firing_reports_are_npt():
    h = heis(2)
    dec = eig_hermitian(h)
    est = heis2_estimate()
    cut = PartitionCut(frozenset({0}))
    for t in np.geomspace(0.2, 10.0, 12):
        rep = evaluate_witness(h, float(t), est)
        if rep.eq2_fires or rep.eq4_fires:
            ens = ensemble_from_decomposition(dec, h.dims, float(t))
            assert ppt_check(ens.rho_T, cut).npt
