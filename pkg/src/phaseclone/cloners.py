"""Optimal cloning, transposition and hybrid channels with their fidelities."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import sdp
from .bases import (CLONER9, EW_R, HYBRID9, TRANSPOSE2, TRANSPOSE6, assemble, build_family,
                    coefficients)
from .qcore import ChannelChoi, DimensionError, check_dim, partial_trace
from .symmetry import (CLONER_SIGNATURE, HYBRID_SIGNATURE, SWAP12, TRANSPOSE_CLONER_SIGNATURE,
                       TRANSPOSE_SIGNATURE, conjugate_by_subsystem, phase_twirl)


class MapKind(enum.Enum):
    PHASE_CLONER = "phase-cloner"
    PHASE_TRANSPOSE = "phase-transpose"
    PHASE_TRANSPOSE_CLONER = "transpose-cloner"
    HYBRID = "hybrid"
    UNIVERSAL_TRANSPOSE_CLONER = "universal-transpose-cloner"


# which output factors of the ideal map carry the conjugate |-theta>
IDEAL_OUTPUTS = {
    MapKind.PHASE_CLONER: (False, False),
    MapKind.PHASE_TRANSPOSE: (True,),
    MapKind.PHASE_TRANSPOSE_CLONER: (True, True),
    MapKind.HYBRID: (False, True),
    MapKind.UNIVERSAL_TRANSPOSE_CLONER: (True, True),
}

SIGNATURES = {
    MapKind.PHASE_CLONER: CLONER_SIGNATURE,
    MapKind.PHASE_TRANSPOSE: TRANSPOSE_SIGNATURE,
    MapKind.PHASE_TRANSPOSE_CLONER: TRANSPOSE_CLONER_SIGNATURE,
    MapKind.HYBRID: HYBRID_SIGNATURE,
}

FAMILIES = {
    MapKind.PHASE_CLONER: CLONER9,
    MapKind.PHASE_TRANSPOSE: TRANSPOSE2,
    MapKind.PHASE_TRANSPOSE_CLONER: TRANSPOSE6,
    MapKind.HYBRID: HYBRID9,
    MapKind.UNIVERSAL_TRANSPOSE_CLONER: EW_R,
}


def n_outputs(kind: MapKind) -> int:
    return len(IDEAL_OUTPUTS[MapKind(kind)])


def closed_form_fidelity(kind: MapKind, d: int, exact: bool = False):
    """Optimal process fidelity of ``kind`` at dimension d."""
    kind = MapKind(kind)
    d = check_dim(d)
    if kind in (MapKind.PHASE_CLONER, MapKind.HYBRID):
        val = Fraction(2 * d - 1, d * d)
    elif kind is MapKind.PHASE_TRANSPOSE:
        val = Fraction(2, d)
    elif kind is MapKind.PHASE_TRANSPOSE_CLONER:
        val = Fraction(3, 4) if d == 2 else Fraction(6, d * d)
    else:
        val = Fraction(6, d * d + 3 * d + 2)
    return val if exact else float(val)


def optimal_channel(kind: MapKind, d: int) -> ChannelChoi:
    """Choi matrix of an optimal channel, built from the certified primal points."""
    kind = MapKind(kind)
    d = check_dim(d)
    if kind is MapKind.PHASE_CLONER:
        J = assemble(sdp.cloner_primal(d))
    elif kind is MapKind.HYBRID:
        # cloner optimum with the input and first output wires exchanged
        J = conjugate_by_subsystem(optimal_channel(MapKind.PHASE_CLONER, d).J, SWAP12, d)
    elif kind is MapKind.PHASE_TRANSPOSE:
        J = np.zeros((d * d, d * d))
        for i in range(d):
            for j in range(d):
                if i != j:
                    a, b = i * d + j, j * d + i
                    J[a, a] += 1
                    J[a, b] += 1
        J /= d - 1
    elif kind is MapKind.PHASE_TRANSPOSE_CLONER:
        J = assemble(sdp.transpose_cloner_certificates(d)[0])
    else:
        J = assemble(sdp.ew_certificates(d)[0])
    return ChannelChoi(d, (d,) * n_outputs(kind), J)


def process_fidelity_analytic(E: ChannelChoi, kind: MapKind) -> float:
    """Process fidelity from the averaged Choi operator.

    Phase-covariant kinds: tr[phi^{+(x)n} T(J)], i.e. the sum of the entries
    that survive the phase twirl divided by d**n. Universal kind: the Haar
    twirl is the projection onto the R-operator span, and the fidelity is its
    <000|.|000> entry.
    """
    kind = MapKind(kind)
    n = 1 + n_outputs(kind)
    if E.d_out != (E.d_in,) * (n - 1):
        raise DimensionError(f"channel shape {E.dims} does not fit {kind.name}")
    d = E.d_in
    if kind is MapKind.UNIVERSAL_TRANSPOSE_CLONER:
        fam = build_family(EW_R, d)
        x, _ = coefficients(fam, E.J)
        return float(np.real(sum(xi * E_i[0, 0] for xi, E_i in zip(x, fam.elements))))
    T = phase_twirl(E.J, SIGNATURES[kind])
    return float(T.sum().real / d ** n)


def single_qudit_fidelity(E: ChannelChoi, d: int, samples: int = 100_000, seed: int = 42,
                          per_output: bool = False):
    """Monte Carlo average of F(rho_theta, marginal_j) over outputs j and uniform theta.

    Inputs are pure, so F(rho, sigma) = <theta|sigma|theta>. Returns
    (mean, stderr), or per-output (means, stderrs) when ``per_output``.
    """
    from .oracle import SamplingMode, apply_batch, chunk_rng, chunk_sizes, sample_inputs
    if samples < 2:
        raise ValueError("need at least two samples")
    if len(E.d_out) != 2 or E.d_in != d:
        raise DimensionError("single-qudit fidelity needs a 1 -> 2 channel on qudits")
    vals = []
    for k, n in enumerate(chunk_sizes(samples)):
        kets = sample_inputs(d, n, SamplingMode.PHASE_TORUS, chunk_rng(seed, k))
        out = apply_batch(E, kets).reshape(n, d, d, d, d)
        m1 = np.einsum("bijkj->bik", out)
        m2 = np.einsum("bijik->bjk", out)
        f1 = np.einsum("bi,bij,bj->b", kets.conj(), m1, kets).real
        f2 = np.einsum("bi,bij,bj->b", kets.conj(), m2, kets).real
        vals.append(np.stack([f1, f2], axis=1))
    v = np.concatenate(vals)
    if per_output:
        return v.mean(axis=0), v.std(axis=0, ddof=1) / np.sqrt(len(v))
    avg = v.mean(axis=1)
    return float(avg.mean()), float(avg.std(ddof=1) / np.sqrt(len(avg)))


@dataclass(frozen=True)
class ReferenceConstant:
    label: str
    quantity: str
    formula: str
    d: int
    value: float
    citation: str
    computed: bool = False


def reference_table(d_values) -> list[ReferenceConstant]:
    """Reference fidelity entries evaluated at the requested dimensions (all cited constants)."""
    rows = []
    for d in d_values:
        d = check_dim(d)
        sq = np.sqrt
        rows += [
            ReferenceConstant("1->2 qudits, universal", "single", "(d+3)/(2d+2)", d,
                              (d + 3) / (2 * d + 2), "Buzek-Hillery 1999"),
            ReferenceConstant("1->2 qudits, universal", "process", "2/(d+1)", d,
                              2 / (d + 1), "Werner 1998"),
            ReferenceConstant("1->2 qudits, phase covariant", "single",
                              "1/d + (d-2+sqrt(d^2+4d-4))/(4d)", d,
                              1 / d + (d - 2 + sq(d * d + 4 * d - 4)) / (4 * d), "Fan et al. 2003"),
            ReferenceConstant("1->2 qudits, phase covariant", "process", "(2d-1)/d^2", d,
                              (2 * d - 1) / d ** 2, "sdp", computed=True),
        ]
    rows += [
        ReferenceConstant("1->2 qubits, universal", "single", "5/6", 2, 5 / 6, "Buzek-Hillery 1996"),
        ReferenceConstant("1->2 qubits, universal", "process", "2/3", 2, 2 / 3, "Buzek-Hillery 1996"),
        ReferenceConstant("1->2 qubits, phase covariant", "single", "1/2 + 1/sqrt(8)", 2,
                          0.5 + 1 / np.sqrt(8), "Bruss et al. 2000"),
        ReferenceConstant("1->2 qubits, phase covariant", "process", "3/4", 2, 0.75,
                          "Koniorczyk et al. 2013", computed=True),
        ReferenceConstant("1->2 qutrits, phase covariant", "single", "(5+sqrt(17))/12", 3,
                          (5 + np.sqrt(17)) / 12, "D'Ariano-Macchiavello 2003"),
        ReferenceConstant("1->2 qutrits, phase covariant", "process", "5/9", 3, 5 / 9,
                          "sdp", computed=True),
    ]
    return rows
