from fractions import Fraction

import numpy as np
import pytest

from phaseclone.cloners import MapKind, optimal_channel, process_fidelity_analytic
from phaseclone.composition import (WiringSpec, compose, modular_cloner, modular_report,
                                    modular_transpose_cloner, reference_modular_value)
from phaseclone.qcore import ChannelChoi, DimensionError, apply_channel, dm, phase_state, random_channel


def kraus_of(E: ChannelChoi) -> list[np.ndarray]:
    w, v = np.linalg.eigh(E.J)
    dout = int(np.prod(E.d_out))
    return [np.sqrt(wi) * v[:, k].reshape(E.d_in, dout).T for k, wi in enumerate(w) if wi > 1e-14]


def kraus_route(first: ChannelChoi, second: ChannelChoi, wire: int) -> np.ndarray:
    """Apply ``second`` on factor 1+wire of J_first via its Kraus operators."""
    d = first.d_in
    I = np.eye(d)
    out = np.zeros_like(first.J, dtype=complex)
    for K in kraus_of(second):
        L = np.kron(np.kron(I, K), I) if wire == 0 else np.kron(np.kron(I, I), K)
        out += L @ first.J @ L.conj().T
    return out


@pytest.mark.parametrize("wire", [0, 1])
@pytest.mark.parametrize("d", [2, 3])
def test_link_product_matches_kraus_route(wire, d, rng):
    A = random_channel(d, (d, d), rng)
    B = random_channel(d, (d,), rng)
    J = compose(WiringSpec(A, B, wire)).J
    assert np.allclose(J, kraus_route(A, B, wire), atol=1e-12)


def test_link_product_acts_as_composition(rng):
    d = 2
    A = random_channel(d, (d, d), rng)
    B = random_channel(d, (d,), rng)
    C = compose(WiringSpec(A, B, 1))
    rho = dm(phase_state([0.3, 1.9]))
    out = apply_channel(A, rho)
    # apply B on the second output directly
    expected = np.zeros((d * d, d * d), dtype=complex)
    for K in kraus_of(B):
        L = np.kron(np.eye(d), K)
        expected += L @ out @ L.conj().T
    assert np.allclose(apply_channel(C, rho), expected)


def test_wiring_validation(rng):
    A = random_channel(2, (2, 3), rng)
    B = random_channel(2, (2,), rng)
    with pytest.raises(DimensionError):
        WiringSpec(A, B, 1)
    with pytest.raises(DimensionError):
        WiringSpec(A, B, 2)
    assert WiringSpec(A, B, 0, ("A", "B~", "C"), "B").output_labels == ("B", "C")


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_modular_values_frozen(d):
    # frozen link-product values: (d^2+4d-3)/(d^2(2d-1)) and (8d-7)/(d^2(2d-1))
    cl = process_fidelity_analytic(modular_cloner(d), MapKind.PHASE_CLONER)
    tc = process_fidelity_analytic(modular_transpose_cloner(d), MapKind.PHASE_TRANSPOSE_CLONER)
    assert cl == pytest.approx((d * d + 4 * d - 3) / (d * d * (2 * d - 1)), abs=1e-12)
    assert tc == pytest.approx((8 * d - 7) / (d * d * (2 * d - 1)), abs=1e-12)


@pytest.mark.parametrize("variant", ["cloner", "transpose-cloner"])
@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_modular_never_beats_direct(variant, d):
    rep = modular_report(d, variant)
    assert rep.modular <= rep.direct_optimum + 1e-12
    assert rep.ratio >= 1 - 1e-12


def test_qubit_composite_is_optimal():
    # at d=2 the phase transposition is a perfect equatorial map, so nothing is lost
    for variant in ("cloner", "transpose-cloner"):
        assert modular_report(2, variant).ratio == pytest.approx(1)


def test_reference_value():
    assert reference_modular_value(3, exact=True) == Fraction(1, 6)
    assert reference_modular_value(4, exact=True) == Fraction(2, 21)


def test_bad_variant():
    with pytest.raises(ValueError):
        modular_report(3, "cloner2")
