"""Invariant operator families and their coefficient algebra.

Each family spans (the real part of) the commutant of one symmetry group. A
point ``x`` in coefficient space assembles to ``X(x) = sum_i x_i X_i``; the
vector ``c`` gives the process-fidelity functional ``tr[phi^{+(x)n} X] = c.x``
and ``a`` the trace condition ``tr_out X = (a.x) 1``.

Elements are stored sparse; triple-distinct sums are empty at d=2 and kept as
zero operators so coefficient vectors have a d-independent length.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .qcore import check_dim
from .symmetry import SWAP12, conjugate_by_subsystem, subsystem_permutation

CLONER9 = "CLONER9"
TRANSPOSE6 = "TRANSPOSE6"
EW_R = "EW_R"
HYBRID9 = "HYBRID9"
TRANSPOSE2 = "TRANSPOSE2"

_CLONER9_TEMPLATES = (
    ("iii,iii",),
    ("iik,iik", "iki,iki"),
    ("kii,kii",),
    ("kik,iii", "iii,kik", "kki,iii", "iii,kki"),
    ("iik,iki", "iki,iik"),
    ("ikl,ikl",),
    ("kkl,ili", "lkl,iik"),
    ("kkl,iil", "lkl,iki"),
    ("ikl,ilk",),
)

# X3 is the full six-term orbit of |iik><kii| under S_3
_TRANSPOSE6_TEMPLATES = (
    ("iii,iii",),
    ("iik,iik", "iki,iki", "kii,kii"),
    ("iik,kii", "kii,iik", "kii,iki", "iik,iki", "iki,iik", "iki,kii"),
    ("ikl,ikl",),
    ("ikl,kli", "ikl,lik"),
    ("ikl,kil", "ikl,lki", "ikl,ilk"),
)

_TRANSPOSE2_TEMPLATES = (
    ("ii,ii",),
    ("ik,ik",),
    ("ik,ki",),
)


@dataclass(frozen=True)
class BasisFamily:
    name: str
    d: int
    dims: tuple[int, ...]
    elements: tuple = field(repr=False)
    c: np.ndarray = field(repr=False)
    a: np.ndarray = field(repr=False)
    labels: tuple[str, ...] = ()
    start: tuple[int, ...] = ()

    def __len__(self):
        return len(self.elements)

    @property
    def side(self) -> int:
        return int(np.prod(self.dims))

    def dense(self, i: int) -> np.ndarray:
        return self.elements[i].toarray()

    def gram(self) -> np.ndarray:
        """G_ij = tr(X_i^dagger X_j)."""
        n = len(self)
        G = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                G[i, j] = self.elements[i].conj().multiply(self.elements[j]).sum()
        return G


@dataclass(frozen=True)
class ReducedPoint:
    family: BasisFamily
    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.shape != (len(self.family),):
            raise ValueError(f"point of length {x.size} does not match {self.family.name}")
        object.__setattr__(self, "x", x)

    @property
    def objective(self) -> float:
        return float(self.family.c @ self.x)

    @property
    def trace_value(self) -> float:
        return float(self.family.a @ self.x)


def _orbit_sum(d: int, templates) -> sp.csr_array:
    n = len(templates[0].split(",")[0])
    coords_r, coords_c = [], []
    for t in templates:
        row, col = t.split(",")
        letters = sorted(set(row + col))
        for values in itertools.permutations(range(d), len(letters)):
            val = dict(zip(letters, values))
            coords_r.append(np.ravel_multi_index(tuple(val[ch] for ch in row), (d,) * n))
            coords_c.append(np.ravel_multi_index(tuple(val[ch] for ch in col), (d,) * n))
    N = d ** n
    data = np.ones(len(coords_r))
    return sp.csr_array(sp.coo_array((data, (coords_r, coords_c)), shape=(N, N)))


def _freeze(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    v.setflags(write=False)
    return v


@lru_cache(maxsize=16)
def build_cloner9(d: int) -> BasisFamily:
    d = check_dim(d)
    els = tuple(_orbit_sum(d, t) for t in _CLONER9_TEMPLATES)
    p, q = d - 1, (d - 1) * (d - 2)
    c = np.array([1, 2 * p, p, 4 * p, 2 * p, q, 2 * q, 2 * q, q]) / d ** 2
    a = np.array([1, 2 * p, p, 0, 0, q, 0, 0, 0])
    labels = tuple(f"X{i}" for i in range(1, 10))
    return BasisFamily(CLONER9, d, (d, d, d), els, _freeze(c), _freeze(a), labels, (0, 1, 2, 5))


@lru_cache(maxsize=16)
def build_hybrid9(d: int) -> BasisFamily:
    """CLONER9 conjugated by V_(12): the commutant for the ideal map theta -> theta (x) -theta."""
    base = build_cloner9(d)
    els = []
    for X in base.elements:
        Y = conjugate_by_subsystem(X.toarray(), SWAP12, d)
        els.append(sp.csr_array(Y))
    return BasisFamily(HYBRID9, d, base.dims, tuple(els), base.c, base.a,
                       tuple(f"V12 {s} V12" for s in base.labels), base.start)


@lru_cache(maxsize=16)
def build_transpose6(d: int) -> BasisFamily:
    d = check_dim(d)
    els = tuple(_orbit_sum(d, t) for t in _TRANSPOSE6_TEMPLATES)
    p, q = d - 1, (d - 1) * (d - 2)
    c = np.array([1, 3 * p, 6 * p, q, 2 * q, 3 * q]) / d ** 2
    a = np.array([1, 3 * p, 0, q, 0, 0])
    labels = tuple(f"X{i}" for i in range(1, 7))
    return BasisFamily(TRANSPOSE6, d, (d, d, d), els, _freeze(c), _freeze(a), labels, (0, 1, 3))


@lru_cache(maxsize=16)
def build_transpose2(d: int) -> BasisFamily:
    """Commutant family for phase-covariant transposition (two factors)."""
    d = check_dim(d)
    els = tuple(_orbit_sum(d, t) for t in _TRANSPOSE2_TEMPLATES)
    c = np.array([1, d - 1, d - 1]) / d
    a = np.array([1, d - 1, 0])
    return BasisFamily(TRANSPOSE2, d, (d, d), els, _freeze(c), _freeze(a), ("Y1", "Y2", "Y3"), (0, 1))


def ew_operators(d: int) -> dict[str, np.ndarray]:
    """R_+, R_-, R_0, R_1, R_2, R_3 built from the subsystem permutations."""
    V = {s: subsystem_permutation(p, d) for s, p in {
        "1": (0, 1, 2), "12": (1, 0, 2), "23": (0, 2, 1), "31": (2, 1, 0),
        "123": (1, 2, 0), "132": (2, 0, 1)}.items()}
    I = V["1"]
    cyc = V["123"] + V["132"]
    return {
        "R+": (I + V["12"] + V["23"] + V["31"] + cyc) / 6,
        "R-": (I - V["12"] - V["23"] - V["31"] + cyc) / 6,
        "R0": (2 * I - cyc) / 3,
        # 2 V_(23) rather than 2*1: keeps R1 traceless and inside the R0 block
        "R1": (2 * V["23"] - V["31"] - V["12"]) / 3,
        "R2": (V["12"] - V["31"]) / np.sqrt(3),
        "R3": 1j * (V["123"] - V["132"]) / np.sqrt(3),
    }


@lru_cache(maxsize=16)
def build_ew_r(d: int) -> BasisFamily:
    d = check_dim(d)
    R = ew_operators(d)
    els = tuple(sp.csr_array(R[k]) for k in ("R+", "R-", "R0", "R1", "R2", "R3"))
    c = np.array([1, 0, 0, 0, 0, 0], dtype=float)
    a = np.array([(d + 1) * (d + 2) / 6, (d - 1) * (d - 2) / 6, 2 * (d * d - 1) / 3, 0, 0, 0])
    return BasisFamily(EW_R, d, (d, d, d), els, _freeze(c), _freeze(a),
                       ("R+", "R-", "R0", "R1", "R2", "R3"), (0, 1, 2))


BUILDERS = {
    CLONER9: build_cloner9,
    HYBRID9: build_hybrid9,
    TRANSPOSE6: build_transpose6,
    TRANSPOSE2: build_transpose2,
    EW_R: build_ew_r,
}


def build_family(name: str, d: int) -> BasisFamily:
    return BUILDERS[name](d)


def assemble(point: ReducedPoint) -> np.ndarray:
    fam = point.family
    acc = sp.csr_array((fam.side, fam.side), dtype=complex)
    for xi, X in zip(point.x, fam.elements):
        if xi != 0:
            acc = acc + xi * X
    out = acc.toarray()
    if np.isrealobj(out) or not np.abs(out.imag).any():
        return out.real.copy()
    return out


def coefficients(family: BasisFamily, X: np.ndarray) -> tuple[np.ndarray, float]:
    """Least-squares coefficients of X in the family span and the residual norm."""
    b = np.array([E.conj().multiply(X).sum() for E in family.elements])
    G = family.gram()
    x = np.linalg.lstsq(G, b, rcond=1e-12)[0]
    if np.abs(x.imag).max() < 1e-12:
        x = x.real
    recon = sum(xi * E.toarray() for xi, E in zip(x, family.elements))
    return x, float(np.linalg.norm(recon - X))
