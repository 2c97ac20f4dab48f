"""Dense linear algebra and quantum primitives on tensor-product spaces.

Operators are plain complex ``numpy`` arrays. Functions that need the
tensor-factor structure take an explicit ``dims`` sequence (factor order =
tensor order). Choi matrices follow the unnormalised convention
``J = sum_ij |i><j| (x) E(|i><j|)`` with the input factor first, so that
``tr J = d_in``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

MAX_DIM = 12
PSD_TOL = 1e-9


class DimensionError(ValueError):
    """Raised on inconsistent or out-of-range dimensions."""


class DomainError(ValueError):
    """Raised when an input violates a mathematical precondition (e.g. PSD)."""


def check_dim(d: int) -> int:
    d = int(d)
    if d < 2 or d > MAX_DIM:
        raise DimensionError(f"dimension d={d} outside supported range 2..{MAX_DIM}")
    return d


def _check_dims(dims: Sequence[int], side: int) -> tuple[int, ...]:
    dims = tuple(int(x) for x in dims)
    if any(x < 2 for x in dims):
        raise DimensionError(f"every subsystem dimension must be >= 2, got {dims}")
    if int(np.prod(dims)) != side:
        raise DimensionError(f"dims {dims} do not match operator side {side}")
    return dims


def ket(index: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Computational basis vector |i1 i2 ...> on the given factors."""
    v = np.zeros(int(np.prod(dims)), dtype=complex)
    v[np.ravel_multi_index(tuple(index), tuple(dims))] = 1.0
    return v


def phase_state(theta: Sequence[float]) -> np.ndarray:
    """Maximally coherent state with amplitudes exp(i theta_k)/sqrt(d)."""
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1 or theta.size < 2:
        raise DimensionError("phase_state needs at least two angles")
    return np.exp(1j * theta) / np.sqrt(theta.size)


def max_entangled(d: int) -> np.ndarray:
    """The uniform superposition |phi_d^+> = sum_k |k> / sqrt(d)."""
    return np.ones(d, dtype=complex) / np.sqrt(d)


def dm(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi)
    return np.outer(psi, psi.conj())


def tensor(*ops: np.ndarray) -> np.ndarray:
    return reduce(np.kron, ops)


def is_hermitian(X: np.ndarray, tol: float = 1e-12) -> bool:
    scale = max(np.abs(X).max(), 1.0)
    return bool(np.allclose(X, X.conj().T, atol=tol * scale, rtol=0))


def min_eig(X: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((X + X.conj().T) / 2)[0])


def psd_sqrt(rho: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Square root of a PSD matrix; clamps tiny negative eigenvalues, rejects larger ones."""
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    floor = -tol * max(abs(w[-1]), 1.0)
    if w[0] < floor:
        raise DomainError(f"operator is not PSD (min eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))**2."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionError("fidelity arguments have different shapes")
    s = psd_sqrt(rho)
    psd_sqrt(sigma)  # validates sigma
    inner = s @ sigma @ s
    w = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    val = float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
    return min(max(val, 0.0), 1.0)


def partial_trace(X: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every factor not listed in ``keep`` (0-based indices, order preserved)."""
    X = np.asarray(X)
    dims = _check_dims(dims, X.shape[0])
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise DimensionError("keep set is empty; use np.trace for the full trace")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise DimensionError(f"keep indices {keep} out of range for {len(dims)} factors")
    n = len(dims)
    T = X.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n:2 * n])
    for f in range(n):
        if f not in keep:
            cols[f] = rows[f]
    out = "".join(rows[f] for f in keep) + "".join(cols[f] for f in keep)
    R = np.einsum("".join(rows) + "".join(cols) + "->" + out, T)
    side = int(np.prod([dims[f] for f in keep]))
    return R.reshape(side, side)


def partial_transpose(X: np.ndarray, dims: Sequence[int], factor: int | Sequence[int]) -> np.ndarray:
    """Transpose the listed factor(s) of X."""
    X = np.asarray(X)
    dims = _check_dims(dims, X.shape[0])
    n = len(dims)
    factors = [factor] if np.isscalar(factor) else list(factor)
    perm = list(range(2 * n))
    for f in factors:
        if not 0 <= f < n:
            raise DimensionError(f"factor {f} out of range")
        perm[f], perm[n + f] = perm[n + f], perm[f]
    return X.reshape(dims + dims).transpose(perm).reshape(X.shape)


def permute_factors(X: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: new factor j is old factor ``order[j]``."""
    dims = _check_dims(dims, X.shape[0])
    n = len(dims)
    order = list(order)
    axes = order + [n + o for o in order]
    return X.reshape(dims + dims).transpose(axes).reshape(X.shape)


@dataclass(frozen=True)
class ChannelChoi:
    """Choi matrix of a CPTP map from ``d_in`` to the product of ``d_out``.

    Construction validates positivity and the trace-preserving marginal.
    Pass ``check=False`` only for intermediate objects that are known to be
    valid by construction.
    """

    d_in: int
    d_out: tuple[int, ...]
    J: np.ndarray = field(repr=False)
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "d_out", tuple(int(x) for x in self.d_out))
        J = np.asarray(self.J, dtype=complex)
        J.setflags(write=False)
        object.__setattr__(self, "J", J)
        check_dim(self.d_in)
        for x in self.d_out:
            check_dim(x)
        _check_dims(self.dims, J.shape[0])
        if self.check:
            self.validate()

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.d_in,) + self.d_out

    def marginal(self) -> np.ndarray:
        return partial_trace(self.J, self.dims, [0])

    def residuals(self) -> dict[str, float]:
        w = np.linalg.eigvalsh((self.J + self.J.conj().T) / 2)
        return {
            "min_eig": float(w[0]),
            "max_eig": float(w[-1]),
            "hermitian": float(np.abs(self.J - self.J.conj().T).max()),
            "marginal": float(np.abs(self.marginal() - np.eye(self.d_in)).max()),
            "trace": float(abs(np.trace(self.J) - self.d_in)),
        }

    def validate(self, tol: float = PSD_TOL) -> None:
        r = self.residuals()
        if r["hermitian"] > tol:
            raise DomainError(f"Choi matrix not Hermitian ({r['hermitian']:.2e})")
        if r["min_eig"] < -tol * max(r["max_eig"], 1.0):
            raise DomainError(f"Choi matrix not PSD (min eig {r['min_eig']:.2e})")
        if r["marginal"] > tol:
            raise DomainError(f"map not trace preserving (marginal error {r['marginal']:.2e})")


def apply_channel(E: ChannelChoi, rho: np.ndarray) -> np.ndarray:
    """E(rho) = tr_in[J (rho^T (x) 1)]."""
    rho = np.asarray(rho)
    if rho.shape != (E.d_in, E.d_in):
        raise DimensionError(f"input of shape {rho.shape} does not match d_in={E.d_in}")
    dout = int(np.prod(E.d_out))
    J4 = E.J.reshape(E.d_in, dout, E.d_in, dout)
    return np.einsum("iajc,ij->ac", J4, rho)


def choi_from_kraus(kraus: Sequence[np.ndarray], d_out: Sequence[int] | None = None,
                    tol: float = 1e-10) -> ChannelChoi:
    """Choi matrix of rho -> sum_k K rho K^dagger."""
    ks = [np.asarray(K, dtype=complex) for K in kraus]
    if not ks:
        raise DimensionError("empty Kraus set")
    d_in = ks[0].shape[1]
    tp = sum(K.conj().T @ K for K in ks)
    if np.abs(tp - np.eye(d_in)).max() > tol:
        raise DomainError("Kraus operators are not trace preserving")
    if d_out is None:
        d_out = (ks[0].shape[0],)
    # sum_i |i> (x) K|i> has entry (i, a) = K[a, i]
    W = np.stack([K.T.ravel() for K in ks])
    J = W.T @ W.conj()
    return ChannelChoi(d_in, tuple(d_out), J)


def random_kraus(d_in: int, d_out: int, rank: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Kraus operators of a random channel from a Haar-like random isometry."""
    G = rng.normal(size=(d_out * rank, d_in)) + 1j * rng.normal(size=(d_out * rank, d_in))
    Q, R = np.linalg.qr(G)
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))
    Q = Q.reshape(rank, d_out, d_in)
    return [Q[k] for k in range(rank)]


def random_channel(d_in: int, d_out: Sequence[int], rng: np.random.Generator,
                   rank: int | None = None) -> ChannelChoi:
    dout = int(np.prod(d_out))
    rank = rank or d_in * dout
    return choi_from_kraus(random_kraus(d_in, dout, rank, rng), d_out)
