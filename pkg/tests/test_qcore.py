import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phaseclone.qcore import (MAX_DIM, ChannelChoi, DimensionError, DomainError, apply_channel,
                              check_dim, choi_from_kraus, dm, fidelity, ket, max_entangled,
                              partial_trace, partial_transpose, permute_factors, phase_state,
                              psd_sqrt, random_channel, random_kraus, tensor)


def test_check_dim_bounds():
    assert check_dim(2) == 2 and check_dim(MAX_DIM) == MAX_DIM
    for bad in (1, 0, MAX_DIM + 1):
        with pytest.raises(DimensionError):
            check_dim(bad)


def test_ket_and_tensor():
    v = ket((1, 0), (2, 3))
    assert v.shape == (6,) and v[3] == 1
    assert np.allclose(tensor(ket((1,), (2,)), ket((0,), (3,))), v)


def test_phase_state_and_max_entangled():
    psi = phase_state([0, np.pi / 2, np.pi])
    assert np.isclose(np.linalg.norm(psi), 1)
    assert np.allclose(np.abs(psi) ** 2, 1 / 3)
    phi = max_entangled(3)
    assert np.allclose(phi, phase_state([0, 0, 0]))


def test_fidelity_known_values():
    a, b = dm(ket((0,), (2,))), dm(ket((1,), (2,)))
    assert np.isclose(fidelity(a, a), 1)
    assert np.isclose(fidelity(a, b), 0)
    assert np.isclose(fidelity(a, np.eye(2) / 2), 0.5)


def test_psd_sqrt_rejects_negative():
    with pytest.raises(DomainError):
        psd_sqrt(np.diag([1.0, -0.1]))
    r = psd_sqrt(np.diag([4.0, -1e-14]))
    assert np.allclose(r, np.diag([2.0, 0.0]))


def test_partial_trace_of_product(rng):
    A = rng.normal(size=(2, 2))
    B = rng.normal(size=(3, 3))
    C = rng.normal(size=(2, 2))
    X = tensor(A, B, C)
    assert np.allclose(partial_trace(X, (2, 3, 2), [1]), np.trace(A) * np.trace(C) * B)
    assert np.allclose(partial_trace(X, (2, 3, 2), [0, 2]), np.trace(B) * np.kron(A, C))


def test_partial_transpose_involution(rng):
    X = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    Y = partial_transpose(X, (2, 3), 1)
    assert np.allclose(partial_transpose(Y, (2, 3), 1), X)
    assert np.allclose(partial_transpose(partial_transpose(X, (2, 3), 0), (2, 3), 1), X.T)


def test_permute_factors_matches_kron_swap(rng):
    A, B = rng.normal(size=(2, 2)), rng.normal(size=(3, 3))
    assert np.allclose(permute_factors(np.kron(A, B), (2, 3), (1, 0)), np.kron(B, A))


def test_choi_convention_identity_channel():
    d = 3
    E = choi_from_kraus([np.eye(d)])
    omega = np.eye(d).ravel()  # sum_i |ii>
    assert np.allclose(E.J, np.outer(omega, omega))
    rho = dm(phase_state([0.1, 0.7, 2.0]))
    assert np.allclose(apply_channel(E, rho), rho)


def test_choi_rejects_non_channel():
    with pytest.raises(DomainError):
        ChannelChoi(2, (2,), np.eye(4))
    with pytest.raises(DomainError):
        ChannelChoi(2, (2,), -np.eye(4) / 2)


def test_kraus_completeness(rng):
    K = random_kraus(3, 4, 5, rng)
    assert np.allclose(sum(k.conj().T @ k for k in K), np.eye(3))


@settings(max_examples=25, deadline=None)
@given(d=st.integers(2, 3), n_out=st.integers(1, 2), seed=st.integers(0, 2 ** 32 - 1))
def test_random_channel_is_cptp(d, n_out, seed):
    E = random_channel(d, (d,) * n_out, np.random.default_rng(seed))
    r = E.residuals()
    assert r["min_eig"] > -1e-10 and r["marginal"] < 1e-10
    assert np.isclose(np.trace(E.J).real, d)
    rho = dm(phase_state(np.random.default_rng(seed).uniform(0, 6, d)))
    out = apply_channel(E, rho)
    assert np.isclose(np.trace(out).real, 1)
    assert np.linalg.eigvalsh(out).min() > -1e-10
