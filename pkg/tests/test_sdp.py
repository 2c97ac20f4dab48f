import numpy as np
import pytest

from phaseclone import sdp
from phaseclone.bases import CLONER9, EW_R, HYBRID9, TRANSPOSE2, TRANSPOSE6, ReducedPoint, assemble
from phaseclone.qcore import DimensionError

# frozen optima, computed once with the barrier solver and confirmed by certificates
FROZEN = {
    (CLONER9, 2): 0.75, (CLONER9, 3): 5 / 9, (CLONER9, 5): 0.36,
    (TRANSPOSE6, 2): 0.75, (TRANSPOSE6, 3): 2 / 3, (TRANSPOSE6, 4): 0.375,
    (HYBRID9, 3): 5 / 9, (TRANSPOSE2, 4): 0.5, (EW_R, 3): 0.3, (EW_R, 4): 0.2,
}


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_solver_hits_frozen_optimum(key):
    name, d = key
    res = sdp.solve_primal(sdp.SdpProblem.for_family(name, d))
    assert abs(res.value - FROZEN[key]) < 1e-6
    assert res.min_eig > -1e-12
    assert abs(res.point.trace_value - 1) < 1e-9
    assert res.gap_bound < 1e-6


@pytest.mark.parametrize("name", [CLONER9, TRANSPOSE6, HYBRID9, TRANSPOSE2, EW_R])
@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_certificates_verify(name, d):
    prob = sdp.SdpProblem.for_family(name, d)
    cert = sdp.verify_certificate(prob, *sdp.certificates_for(name, d))
    assert cert.verdict == "OPTIMAL", cert.failures
    assert cert.gap < 1e-12


def test_tampered_certificates_name_the_violation():
    d = 3
    prob = sdp.SdpProblem.for_family(CLONER9, d)
    primal, dual, z = sdp.certificates_for(CLONER9, d)
    bad = ReducedPoint(primal.family, primal.x * 1.01)
    cert = sdp.verify_certificate(prob, bad, dual, z)
    assert not cert.optimal and any("a.x" in f for f in cert.failures)
    bad_dual = ReducedPoint(dual.family, dual.x + 1e-3)
    cert = sdp.verify_certificate(prob, primal, bad_dual, z)
    assert any("dual infeasible" in f for f in cert.failures)
    cert = sdp.verify_certificate(prob, primal, dual, z + 0.01)
    assert any("gap" in f or "dual infeasible" in f for f in cert.failures)
    neg = ReducedPoint(primal.family, np.r_[-0.5, primal.x[1:]])
    assert any("eigenvalue" in f or "a.x" in f for f in sdp.verify_certificate(prob, neg, dual, z).failures)


def test_transpose_cloner_qubit_branch():
    primal, _, z = sdp.certificates_for(TRANSPOSE6, 2)
    assert z == 0.75 and np.isclose(primal.objective, 0.75)
    # the generic d >= 3 primal has no support at d=2
    assert np.allclose(primal.x[3:], 0)


def test_dual_matrix_is_psd():
    res = sdp.solve_primal(sdp.SdpProblem.for_family(CLONER9, 3))
    assert np.linalg.eigvalsh(res.dual_matrix).min() > -1e-12


def test_weak_duality_for_random_feasible_points():
    rng = np.random.default_rng(3)
    d = 3
    prob = sdp.SdpProblem.for_family(TRANSPOSE6, d)
    fam = prob.family
    _, _, z = sdp.certificates_for(TRANSPOSE6, d)
    for _ in range(20):
        x = rng.uniform(0, 1, len(fam))
        x[2] = x[4] = x[5] = 0  # keep diagonal-only, hence PSD
        x /= fam.a @ x
        X = assemble(ReducedPoint(fam, x))
        assert np.linalg.eigvalsh(X).min() > -1e-12
        assert fam.c @ x <= z + 1e-12


@pytest.mark.parametrize("d", range(2, 9))
def test_ew_linear_program(d):
    sol = sdp.ew_linear_program(d)
    assert sol.value == pytest.approx(6 / (d * d + 3 * d + 2), abs=1e-15)
    assert sol.min_eig > -1e-12 and sol.marginal_residual < 1e-12


def test_dimension_cap():
    with pytest.raises(DimensionError):
        sdp.SdpProblem.for_family(CLONER9, 13)
