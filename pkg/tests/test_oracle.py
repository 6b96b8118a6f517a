import json

import numpy as np
import pytest

from taupint.oracle import (
    check_diag_dominance,
    check_ideal_contraction,
    check_localization,
    check_practical_bounds,
    check_residual_relation,
    check_symbol_quotients,
    check_temporal_equivalence,
    check_weighted_mean_inequality,
    measure_mu_beta,
    measure_spectral_bounds,
    run_suite,
    write_reports,
)
from taupint.problems import make_example1, make_example2, make_example3

LAPLACIAN_SYMBOL = np.array([-1.0, 2.0, -1.0])
CONSTANT_ONE = np.array([1.0])


def test_localization_equal_symbols_gives_identity_spectrum():
    rep = check_localization(LAPLACIAN_SYMBOL, LAPLACIAN_SYMBOL, 16)
    assert rep.passed
    assert abs(rep.measured["eig_min"] - 1.0) < 1e-10
    assert abs(rep.measured["eig_max"] - 1.0) < 1e-10


def test_localization_scaling():
    rep = check_localization(2.0 * LAPLACIAN_SYMBOL, LAPLACIAN_SYMBOL, 16)
    assert rep.passed
    assert abs(rep.measured["eig_min"] - 2.0) < 1e-10


def test_localization_laplacian_vs_identity():
    rep = check_localization(LAPLACIAN_SYMBOL, CONSTANT_ONE, 16)
    assert rep.passed
    assert rep.measured["eig_min"] > 0.0
    assert rep.measured["eig_max"] < 4.0


def test_localization_rejects_indefinite_denominator():
    with pytest.raises(ValueError):
        check_localization(LAPLACIAN_SYMBOL, np.array([1.0, -3.0, 1.0]), 8)


def test_temporal_equivalence_single_step():
    rep = check_temporal_equivalence(0.5, 1)
    assert rep.passed
    assert abs(rep.measured["eig_min"] - 1.0) < 1e-12


def test_temporal_equivalence_two_steps():
    rep = check_temporal_equivalence(0.5, 2)
    assert rep.passed
    assert 0.5 < rep.measured["eig_min"] <= rep.measured["eig_max"] < 1.5


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("N", [4, 32, 256])
def test_temporal_equivalence_sweep(alpha, N):
    rep = check_temporal_equivalence(alpha, N)
    assert rep.passed, rep.measured


def test_diag_dominance_hand_case_and_sweep():
    assert check_diag_dominance(0.5, 2).passed
    assert check_diag_dominance(0.2, 128).passed
    assert check_diag_dominance(0.9, 128).passed
    assert check_diag_dominance(0.2, 256).passed
    assert check_diag_dominance(0.9, 256).passed


def test_symbol_quotients_symmetric_kind():
    rep = check_symbol_quotients(make_example1(0.1, (5, 5), 4))
    assert rep.passed
    assert rep.measured["mu_beta"] == 0.0
    assert np.isclose(rep.measured["eta"], np.tan(0.05 * np.pi))
    assert rep.measured["temporal_quotient_max"] < np.tan(0.05 * np.pi) + 1e-3


def test_symbol_quotients_nonsymmetric_kind():
    rep = check_symbol_quotients(make_example3(0.5, (1.2, 1.8), (5, 5), 4))
    assert rep.passed
    assert rep.measured["mu_beta"] > 0.0
    assert rep.measured["eta"] >= rep.measured["mu_beta"]


def test_mu_beta_matches_small_angle_limit():
    # the quotient of the two-sided WSGD symbol approaches
    # |k+ - k-|/(k+ + k-) * |tan(beta*pi/2)| at small angles
    prob = make_example3(0.5, (1.2, 1.2), (5, 5), 4,
                         k_plus=(0.4, 0.4), k_minus=(0.7, 0.7))
    mu = measure_mu_beta(prob.spatial)
    limit = (0.3 / 1.1) * abs(np.tan(1.2 * np.pi / 2.0))
    assert abs(mu - limit) < 5e-3


@pytest.mark.parametrize(
    "prob",
    [
        make_example1(0.5, (9, 9), 8),
        make_example2(0.5, (1.5, 1.5), (9, 9), 8),
        make_example3(0.5, (1.2, 1.8), (9, 9), 8),
    ],
    ids=["laplacian", "riesz", "riemann_liouville"],
)
def test_practical_bounds_all_kinds(prob):
    rep = check_practical_bounds(prob)
    assert rep.passed, rep.measured
    assert rep.bounds["b_check"] == min(rep.bounds["a_check"], 0.5)
    assert rep.bounds["b_hat"] == max(rep.bounds["a_hat"], 1.5)
    assert np.sqrt(2.0 / 3.0) - 1e-12 <= rep.bounds["omega_practical"] < 1.0


def test_practical_bounds_closed_form_constants_symmetric_case():
    rep = check_practical_bounds(make_example1(0.5, (9, 9), 8))
    assert np.isclose(rep.bounds["varsigma"], 1.5 * np.tan(np.pi / 4.0))
    assert np.isclose(rep.bounds["omega_practical"], np.sqrt(11.0 / 12.0))


def test_ideal_contraction_all_kinds():
    for prob in (
        make_example1(0.5, (9, 9), 8),
        make_example2(0.5, (1.5, 1.5), (9, 9), 8),
        make_example3(0.5, (1.2, 1.8), (9, 9), 8),
    ):
        rep = check_ideal_contraction(prob)
        assert rep.passed, rep.measured
        assert rep.measured["omega_ideal"] < 1.0


def test_ideal_contraction_symmetric_system_one_iteration():
    # with the temporal block symmetrized the operator is symmetric, the
    # preconditioned skew radius vanishes and GMRES converges immediately
    from taupint.allatonce import assemble_rhs, build_operator
    from taupint.gmres import GmresConfig, gmres

    prob = make_example1(0.5, (4, 4), 4)
    A, co = build_operator(prob)
    Ad = A.materialize()
    H = (Ad + Ad.T) / 2.0
    evals, evecs = np.linalg.eigh(H)
    Hinv_sqrt = (evecs / np.sqrt(evals)) @ evecs.T
    two_sided = Hinv_sqrt @ H @ Hinv_sqrt  # identity
    rhs = Hinv_sqrt @ assemble_rhs(prob, co)
    rep = gmres(lambda v: two_sided @ v, rhs, cfg=GmresConfig())
    assert rep.converged
    assert rep.iterations == 1


def test_ideal_contraction_faster_for_smaller_alpha():
    rep_small = check_ideal_contraction(make_example1(0.2, (7, 7), 8))
    rep_large = check_ideal_contraction(make_example1(0.8, (7, 7), 8))
    assert rep_small.measured["epsilon_matrix"] < rep_large.measured["epsilon_matrix"]
    assert rep_small.measured["omega_ideal"] < rep_large.measured["omega_ideal"]
    assert rep_small.measured["iterations"] <= rep_large.measured["iterations"]


def test_residual_relation_check():
    rep = check_residual_relation(make_example2(0.5, (1.5, 1.5), (7, 7), 8))
    assert rep.passed, rep.measured


def test_weighted_mean_inequality_cases():
    rng = np.random.default_rng(0)
    assert check_weighted_mean_inequality(np.ones(4), 2.0 * np.ones(4)).passed
    assert check_weighted_mean_inequality([3.0], [0.5]).passed
    for _ in range(25):
        xi = rng.uniform(0.0, 5.0, size=10)
        zeta = rng.uniform(0.1, 5.0, size=10)
        assert check_weighted_mean_inequality(xi, zeta).passed


def test_measured_bounds_record_satisfies_its_invariants():
    bounds = measure_spectral_bounds(make_example3(0.5, (1.2, 1.8), (7, 7), 8))
    assert 0.0 < bounds.omega_ideal < 1.0
    assert np.sqrt(2.0 / 3.0) - 1e-12 <= bounds.omega_practical < 1.0
    assert bounds.b_check == min(bounds.a_check, 0.5)
    assert bounds.b_hat == max(bounds.a_hat, 1.5)
    assert bounds.epsilon <= bounds.eta + 1e-8
    assert bounds.mu_beta > 0.0
    assert bounds.c_check > 0.0
    assert np.isclose(
        bounds.omega_ideal, bounds.epsilon / np.sqrt(1.0 + bounds.epsilon**2)
    )
    s2 = bounds.varsigma**2
    assert np.isclose(bounds.omega_practical, np.sqrt((2 + 4 * s2) / (3 + 4 * s2)))


def test_run_suite_and_report_files(tmp_path):
    reports = run_suite("tau")
    assert reports and all(r.passed for r in reports)
    combined = write_reports(reports, tmp_path / "reports.json")
    payload = json.loads(combined.read_text())
    assert len(payload) == len(reports)
    assert {"name", "passed", "config", "measured", "bounds"} <= set(payload[0])
    outdir = write_reports(reports, tmp_path / "percheck")
    files = list(outdir.glob("*.json"))
    assert len(files) == len(reports)


def test_run_suite_rejects_unknown():
    with pytest.raises(ValueError):
        run_suite("everything")
