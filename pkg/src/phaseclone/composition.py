"""Modular channels: wiring a 1 -> 2 channel into a 1 -> 1 channel by link product."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cloners import MapKind, optimal_channel, process_fidelity_analytic
from .qcore import ChannelChoi, DimensionError


@dataclass(frozen=True)
class WiringSpec:
    """Feed output ``wire`` (0 or 1) of ``first`` into ``second``.

    ``labels`` names first's factors (input, output 0, output 1) and
    ``out_label`` names second's output, e.g. ("A", "B", "C~") -> "C".
    """

    first: ChannelChoi
    second: ChannelChoi
    wire: int
    labels: tuple[str, str, str] = ("A", "B", "C")
    out_label: str = "C'"

    def __post_init__(self):
        if len(self.first.d_out) != 2 or len(self.second.d_out) != 1:
            raise DimensionError("wiring expects a 1 -> 2 channel followed by a 1 -> 1 channel")
        if self.wire not in (0, 1):
            raise DimensionError("wire must be 0 or 1")
        if self.second.d_in != self.first.d_out[self.wire]:
            raise DimensionError(
                f"wire {self.labels[1 + self.wire]} has dimension {self.first.d_out[self.wire]}, "
                f"second channel expects {self.second.d_in}")

    @property
    def output_labels(self) -> tuple[str, str]:
        outs = list(self.labels[1:])
        outs[self.wire] = self.out_label
        return tuple(outs)


def compose(w: WiringSpec) -> ChannelChoi:
    """Choi matrix of (second on the wire) o first.

    J = tr_wire[(J_first^{T_wire} (x) 1)(1 (x) J_second)]: the wire index is
    contracted with its row/column roles exchanged.
    """
    a, (b, c) = w.first.d_in, w.first.d_out
    e = w.second.d_out[0]
    T1 = w.first.J.reshape(a, b, c, a, b, c)
    if w.wire == 1:
        T2 = w.second.J.reshape(c, e, c, e)
        R = np.einsum("abyABx,ycxC->abcABC", T1, T2)
        d_out = (b, e)
    else:
        T2 = w.second.J.reshape(b, e, b, e)
        R = np.einsum("aycAxC,ybxB->abcABC", T1, T2)
        d_out = (e, c)
    side = a * d_out[0] * d_out[1]
    return ChannelChoi(a, d_out, R.reshape(side, side))


def modular_cloner(d: int) -> ChannelChoi:
    """Optimal hybrid A -> B C~ followed by optimal transposition C~ -> C."""
    w = WiringSpec(optimal_channel(MapKind.HYBRID, d), optimal_channel(MapKind.PHASE_TRANSPOSE, d),
                   wire=1, labels=("A", "B", "C~"), out_label="C")
    return compose(w)


def modular_transpose_cloner(d: int) -> ChannelChoi:
    """Optimal hybrid A -> B~ C followed by optimal transposition B~ -> B."""
    w = WiringSpec(optimal_channel(MapKind.HYBRID, d), optimal_channel(MapKind.PHASE_TRANSPOSE, d),
                   wire=0, labels=("A", "B~", "C"), out_label="B")
    return compose(w)


def reference_modular_value(d: int, exact: bool = False):
    """The value (3d-4)/(d(d-1)(2d-1)) quoted for both modular constructions."""
    val = Fraction(3 * d - 4, d * (d - 1) * (2 * d - 1))
    return val if exact else float(val)


@dataclass(frozen=True)
class ModularReport:
    variant: str
    d: int
    modular: float
    direct_optimum: float
    reference: float

    @property
    def ratio(self) -> float:
        return self.direct_optimum / self.modular

    @property
    def matches_reference(self) -> bool:
        return abs(self.modular - self.reference) <= 1e-9


def modular_report(d: int, variant: str) -> ModularReport:
    if variant == "cloner":
        E, kind = modular_cloner(d), MapKind.PHASE_CLONER
    elif variant == "transpose-cloner":
        E, kind = modular_transpose_cloner(d), MapKind.PHASE_TRANSPOSE_CLONER
    else:
        raise ValueError(f"unknown variant {variant!r}; use 'cloner' or 'transpose-cloner'")
    from .cloners import closed_form_fidelity
    return ModularReport(variant, d, process_fidelity_analytic(E, kind),
                         closed_form_fidelity(kind, d), reference_modular_value(d))
