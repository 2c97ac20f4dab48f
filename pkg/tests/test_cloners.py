from fractions import Fraction

import numpy as np
import pytest

from phaseclone.cloners import (MapKind, closed_form_fidelity, n_outputs, optimal_channel,
                                process_fidelity_analytic, reference_table, single_qudit_fidelity)
from phaseclone.oracle import SamplerConfig, SamplingMode, mc_process_fidelity
from phaseclone.qcore import DimensionError, random_channel


def test_closed_forms_exact():
    assert closed_form_fidelity(MapKind.PHASE_CLONER, 3, exact=True) == Fraction(5, 9)
    assert closed_form_fidelity(MapKind.PHASE_TRANSPOSE_CLONER, 2, exact=True) == Fraction(3, 4)
    assert closed_form_fidelity(MapKind.PHASE_TRANSPOSE_CLONER, 5, exact=True) == Fraction(6, 25)
    assert closed_form_fidelity(MapKind.PHASE_TRANSPOSE, 4, exact=True) == Fraction(1, 2)
    assert closed_form_fidelity(MapKind.UNIVERSAL_TRANSPOSE_CLONER, 4, exact=True) == Fraction(1, 5)
    assert closed_form_fidelity(MapKind.HYBRID, 2) == 0.75


@pytest.mark.parametrize("kind", list(MapKind))
@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_optimal_channels_attain_closed_form(kind, d):
    E = optimal_channel(kind, d)
    assert len(E.d_out) == n_outputs(kind)
    assert abs(process_fidelity_analytic(E, kind) - closed_form_fidelity(kind, d)) < 1e-12


@pytest.mark.parametrize("kind", list(MapKind))
def test_analytic_matches_mc_for_random_channels(kind):
    # random channels are not covariant, so the MC integrand really fluctuates
    d = 2 if kind is MapKind.UNIVERSAL_TRANSPOSE_CLONER else 3
    rng = np.random.default_rng(11)
    mode = SamplingMode.HAAR_UNITARY if kind is MapKind.UNIVERSAL_TRANSPOSE_CLONER \
        else SamplingMode.PHASE_TORUS
    for _ in range(2):
        E = random_channel(d, (d,) * n_outputs(kind), rng)
        mean, se = mc_process_fidelity(E, kind, SamplerConfig(7, 40_000, mode))
        assert se > 1e-6
        assert abs(mean - process_fidelity_analytic(E, kind)) < 4.5 * se


def test_shape_mismatch_rejected():
    E = random_channel(2, (2,), np.random.default_rng(0))
    with pytest.raises(DimensionError):
        process_fidelity_analytic(E, MapKind.PHASE_CLONER)


@pytest.mark.parametrize("d,expected", [(2, Fraction(5, 6)), (3, Fraction(11, 15)), (4, Fraction(19, 28))])
def test_single_qudit_fidelity_frozen(d, expected):
    # (d^2+d-1)/(d(2d-1)), measured; sits below the optimal single-copy value
    mean, se = single_qudit_fidelity(optimal_channel(MapKind.PHASE_CLONER, d), d, 5000, 1)
    assert abs(mean - float(expected)) < 1e-12
    optimum = 1 / d + (d - 2 + np.sqrt(d * d + 4 * d - 4)) / (4 * d)
    assert mean < optimum


def test_single_qudit_outputs_symmetric():
    E = optimal_channel(MapKind.PHASE_CLONER, 3)
    means, _ = single_qudit_fidelity(E, 3, 4096, 5, per_output=True)
    assert np.isclose(means[0], means[1])


def test_reference_table_rows():
    rows = reference_table([2, 3])
    computed = [r for r in rows if r.computed]
    assert {round(r.value, 12) for r in computed} == {0.75, round(5 / 9, 12)}
    assert all(r.quantity in ("single", "process") for r in rows)
    qubit_single = [r for r in rows if "qubits, phase" in r.label and r.quantity == "single"][0]
    assert np.isclose(qubit_single.value, 0.5 + 1 / np.sqrt(8))
