"""Symmetry-reduced semidefinite programs and their certificates.

Every problem has the form

    maximize   c.x
    subject to X(x) = sum_i x_i X_i >= 0,   a.x = 1,

written in the standard primal form with F_0 = 0 (+) [1] and
F_i = X_i (+) [-a_i]. A dual point is Z = Z_hat (+) [z] with
Z_hat = sum_i b_i X_i; it is feasible when Z_hat >= 0, z >= 0 and
tr[X_i Z_hat] - a_i z = -c_i for every i, and then z bounds c.x from above.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linprog

from .bases import (CLONER9, EW_R, HYBRID9, TRANSPOSE2, TRANSPOSE6, BasisFamily,
                    ReducedPoint, assemble, build_family)
from .qcore import check_dim, min_eig, partial_trace

log = logging.getLogger(__name__)

GAP_TOL = 1e-8
EIG_TOL = 1e-9
EQ_TOL = 1e-9


class InfeasibleError(RuntimeError):
    pass


@dataclass(frozen=True)
class SdpProblem:
    family: BasisFamily

    def __post_init__(self):
        if not np.any(self.family.a):
            raise ValueError("trace-constraint vector a is identically zero")

    @classmethod
    def for_family(cls, name: str, d: int) -> "SdpProblem":
        return cls(build_family(name, d))

    @property
    def d(self) -> int:
        return self.family.d


@dataclass(frozen=True)
class SolveResult:
    point: ReducedPoint
    value: float
    dual_value: float
    gap_bound: float
    min_eig: float
    iterations: int
    dual_matrix: np.ndarray = field(repr=False, default=None)


@dataclass(frozen=True)
class SdpCertificate:
    primal_x: ReducedPoint
    dual_b: ReducedPoint
    dual_z: float
    primal_value: float
    dual_value: float
    gap: float
    primal_min_eig: float
    dual_min_eig: float
    primal_trace_residual: float
    dual_residual: float
    failures: tuple[str, ...] = ()

    @property
    def verdict(self) -> str:
        return "OPTIMAL" if not self.failures else "NOT_CERTIFIED"

    @property
    def optimal(self) -> bool:
        return not self.failures


def _range_basis(family: BasisFamily) -> np.ndarray:
    """Orthonormal coordinates for the span of the non-degenerate directions."""
    G = family.gram().real
    w, U = np.linalg.eigh(G)
    keep = w > 1e-10 * w.max()
    return U[:, keep]


def solve_primal(problem: SdpProblem, tol: float = 1e-8, max_newton: int = 60) -> SolveResult:
    """Log-barrier interior point on the reduced coordinates.

    The equality a.x = 1 is eliminated with a null-space parameterisation and
    the barrier weight is halved from 1 until the central-path gap bound
    nu / t falls below ``tol`` (nu = side of X).
    """
    fam = problem.family
    W = _range_basis(fam)
    Ys = [sum(W[i, j] * fam.elements[i] for i in range(len(fam)) if W[i, j] != 0)
          for j in range(W.shape[1])]
    cz, az = W.T @ fam.c, W.T @ fam.a
    x_start = np.zeros(len(fam))
    x_start[list(fam.start)] = 1.0
    x_start /= fam.a @ x_start
    z0 = W.T @ x_start
    N = sla.null_space(az[None, :])
    nu = fam.side

    def build(y):
        z = z0 + N @ y
        X = sum(zj * Y for zj, Y in zip(z, Ys)).toarray()
        return z, X

    def chol(X):
        try:
            return sla.cho_factor(X, lower=True, check_finite=False)
        except np.linalg.LinAlgError:
            return None

    def objective(t, z, cf):
        logdet = 2 * np.sum(np.log(np.abs(np.diag(cf[0]))))
        return -t * (cz @ z) - logdet

    y = np.zeros(N.shape[1])
    z, X = build(y)
    cf = chol(X)
    if cf is None:
        raise InfeasibleError(f"no strictly feasible start for {fam.name} d={fam.d}")

    t = 1.0
    iterations = 0
    while True:
        for _ in range(max_newton):
            Xinv = sla.cho_solve(cf, np.eye(nu))
            B = [(Y.T @ Xinv.T).T for Y in Ys]
            q = np.array([np.trace(Bj).real for Bj in B])
            H = np.array([[np.sum(Bj * Bk.T).real for Bk in B] for Bj in B])
            g = N.T @ (-t * cz - q)
            Hy = N.T @ H @ N
            step = -np.linalg.solve(Hy, g)
            dec = -g @ step
            iterations += 1
            if dec / 2 <= 1e-12:
                break
            f0 = objective(t, z, cf)
            s = 1.0
            while s > 1e-14:
                z_new, X_new = build(y + s * step)
                cf_new = chol(X_new)
                if cf_new is not None and objective(t, z_new, cf_new) <= f0 - 0.25 * s * dec:
                    break
                s *= 0.5
            else:
                break
            y = y + s * step
            z, X, cf = z_new, X_new, cf_new
        if nu / t <= tol:
            break
        t *= 2.0

    Xinv = sla.cho_solve(cf, np.eye(nu))
    q = np.array([np.sum(Y.multiply(Xinv.T)).real for Y in Ys])
    # stationarity: t c + q = t * lam * a in the reduced coordinates
    lam = float(az @ (t * cz + q) / (t * (az @ az)))
    x = W @ z
    point = ReducedPoint(fam, x)
    value = point.objective
    log.debug("solved %s d=%d value=%.12f dual=%.12f its=%d", fam.name, fam.d, value, lam, iterations)
    return SolveResult(point, value, lam, abs(lam - value), min_eig(X), iterations, Xinv / t)


# closed-form certificates -------------------------------------------------

def cloner_primal(d: int) -> ReducedPoint:
    d = check_dim(d)
    k = 1.0 / (2 * d - 1)
    return ReducedPoint(build_family(CLONER9, d), k * np.array([1, 1, 0, 1, 1, 0, 1, 1, 0]))


def cloner_dual(d: int) -> tuple[ReducedPoint, float]:
    d = check_dim(d)
    p, m = 2 * (d - 1) / d ** 3, -1 / d ** 3
    b = np.array([p, p, p, m, m, p, m, m, m])
    return ReducedPoint(build_family(CLONER9, d), b), (2 * d - 1) / d ** 2


def transpose_cloner_certificates(d: int) -> tuple[ReducedPoint, ReducedPoint, float]:
    d = check_dim(d)
    fam = build_family(TRANSPOSE6, d)
    if d == 2:
        x = np.array([0, 1 / 3, 1 / 3, 0, 0, 0])
        b = np.array([1 / 4, 1 / 4, -1 / 8, 1 / 4, -1 / 8, -1 / 8])
        return ReducedPoint(fam, x), ReducedPoint(fam, b), 0.75
    k = 1.0 / ((d - 1) * (d - 2))
    x = np.array([0, 0, 0, k, k, k])
    p, m = 5 / d ** 3, -1 / d ** 3
    b = np.array([p, p, m, p, m, m])
    return ReducedPoint(fam, x), ReducedPoint(fam, b), 6 / d ** 2


def hybrid_certificates(d: int) -> tuple[ReducedPoint, ReducedPoint, float]:
    """Cloner pair carried over to the V_(12)-conjugated family."""
    fam = build_family(HYBRID9, d)
    x = cloner_primal(d).x
    b, z = cloner_dual(d)
    return ReducedPoint(fam, x), ReducedPoint(fam, b.x), z


def transpose_certificates(d: int) -> tuple[ReducedPoint, ReducedPoint, float]:
    """Optimal pair for phase-covariant transposition (value 2/d)."""
    d = check_dim(d)
    fam = build_family(TRANSPOSE2, d)
    x = np.array([0, 1, 1]) / (d - 1)
    b = np.array([1, 1, -1]) / d ** 2
    return ReducedPoint(fam, x), ReducedPoint(fam, b), 2 / d


def ew_certificates(d: int) -> tuple[ReducedPoint, ReducedPoint, float]:
    """c_+ R_+ with dual Z_hat = (z/d)(R_- + R_0), z = 6/(d^2+3d+2)."""
    d = check_dim(d)
    fam = build_family(EW_R, d)
    z = 6 / (d * d + 3 * d + 2)
    x = np.array([z, 0, 0, 0, 0, 0])
    b = np.array([0, z / d, z / d, 0, 0, 0])
    return ReducedPoint(fam, x), ReducedPoint(fam, b), z


CERTIFICATES = {
    CLONER9: lambda d: (cloner_primal(d), *cloner_dual(d)),
    TRANSPOSE6: transpose_cloner_certificates,
    HYBRID9: hybrid_certificates,
    TRANSPOSE2: transpose_certificates,
    EW_R: ew_certificates,
}


def certificates_for(name: str, d: int) -> tuple[ReducedPoint, ReducedPoint, float]:
    return CERTIFICATES[name](d)


def verify_certificate(problem: SdpProblem, primal: ReducedPoint, dual: ReducedPoint,
                       z: float, gap_tol: float = GAP_TOL, eig_tol: float = EIG_TOL) -> SdpCertificate:
    fam = problem.family
    if primal.family is not fam or dual.family is not fam:
        if primal.family.name != fam.name or dual.family.name != fam.name or primal.family.d != fam.d:
            raise ValueError("certificate points belong to a different family")
    failures = []
    X = assemble(primal)
    p_eig = min_eig(X)
    tr_res = abs(primal.trace_value - 1.0)
    if tr_res > EQ_TOL:
        failures.append(f"primal infeasible: a.x = {primal.trace_value:.12g} != 1")
    if p_eig < -eig_tol:
        failures.append(f"primal infeasible: min eigenvalue {p_eig:.3e} < 0")
    Z = assemble(dual)
    d_eig = min(min_eig(Z), float(z))
    res = np.array([np.sum(E.conj().multiply(Z)).real for E in fam.elements]) - fam.a * z + fam.c
    d_res = float(np.abs(res).max())
    if d_res > EQ_TOL:
        worst = int(np.argmax(np.abs(res)))
        failures.append(f"dual infeasible: constraint {fam.labels[worst]} residual {d_res:.3e}")
    if d_eig < -eig_tol:
        failures.append(f"dual infeasible: min eigenvalue {d_eig:.3e} < 0")
    pv = primal.objective
    gap = abs(z - pv)
    if gap > gap_tol:
        failures.append(f"duality gap {gap:.3e} exceeds {gap_tol:.1e}")
    return SdpCertificate(primal, dual, float(z), pv, float(z), gap, p_eig, d_eig, tr_res, d_res,
                          tuple(failures))


# Eggeling-Werner linear program --------------------------------------------

@dataclass(frozen=True)
class EwSolution:
    d: int
    coefficients: dict
    value: float
    exact_value: Fraction
    trace_residual: float
    marginal_residual: float
    min_eig: float


def ew_linear_program(d: int) -> EwSolution:
    """Maximise c_+ over U^{(x)3}-invariant Choi operators sum_k c_k R_k.

    Positivity is c_+, c_-, c_0 >= 0 with |(c_1, c_2, c_3)| <= c_0; since
    c_1..c_3 enter neither objective nor trace, they are set to zero and the
    rest is a three-variable LP.
    """
    d = check_dim(d)
    fam = build_family(EW_R, d)
    A_eq = np.array([fam.a[:3]])
    bounds = [(0, None)] * 3
    if d == 2:
        bounds[1] = (0, 0)  # R_- vanishes for qubits
    lp = linprog(-np.array([1.0, 0.0, 0.0]), A_eq=A_eq, b_eq=[1.0], bounds=bounds, method="highs")
    if not lp.success:
        raise InfeasibleError(lp.message)
    exact = Fraction(6, d * d + 3 * d + 2)
    if abs(lp.x[0] - float(exact)) > 1e-12:
        raise ArithmeticError(f"LP optimum {lp.x[0]} disagrees with closed form {exact}")
    coeffs = dict(zip(fam.labels, [float(exact), 0.0, 0.0, 0.0, 0.0, 0.0]))
    point = ReducedPoint(fam, np.array(list(coeffs.values())))
    J = assemble(point)
    trace_res = abs(point.trace_value - 1.0)
    marg = partial_trace(J, fam.dims, [0])
    return EwSolution(d, coeffs, float(exact), exact, trace_res,
                      float(np.abs(marg - np.eye(d)).max()), min_eig(J))
