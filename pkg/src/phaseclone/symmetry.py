"""Group actions, phase twirls and the averaged Choi operators.

Three actions appear: diagonal phase unitaries U(theta) (twirled exactly via an
index filter), basis permutations U_pi^{(x)n} (averaged over S_d) and
subsystem permutations V_sigma.

Permutations are image tuples: ``sigma[f]`` is where factor ``f`` is sent, so
``(0, 2, 1)`` is V_(23) in 1-based cycle notation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .qcore import DimensionError

IDENTITY3 = (0, 1, 2)
SWAP12 = (1, 0, 2)
SWAP23 = (0, 2, 1)
SWAP13 = (2, 1, 0)
CYCLE123 = (1, 2, 0)
CYCLE132 = (2, 0, 1)
S3 = (IDENTITY3, SWAP12, SWAP23, SWAP13, CYCLE123, CYCLE132)


def compose_perm(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """(a o b)(f) = a(b(f))."""
    return tuple(a[b[f]] for f in range(len(b)))


@dataclass(frozen=True)
class PhaseSignature:
    """Sign of the phase rotation applied to each tensor factor.

    An entry |r_1..r_n><c_1..c_n| survives the twirl iff
    sum_f s_f (e_{r_f} - e_{c_f}) = 0 as a vector of index counts.
    """

    signs: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    def __len__(self):
        return len(self.signs)


# the Choi input factor carries rho^T = |-theta><-theta|
CLONER_SIGNATURE = PhaseSignature((-1, 1, 1))
HYBRID_SIGNATURE = PhaseSignature((-1, 1, -1))
TRANSPOSE_CLONER_SIGNATURE = PhaseSignature((1, 1, 1))
TRANSPOSE_SIGNATURE = PhaseSignature((1, 1))


@dataclass(frozen=True)
class AveragingSpec:
    signature: PhaseSignature
    subsystem_group: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.signature)
        group = set(self.subsystem_group)
        if tuple(range(n)) not in group:
            raise ValueError("subsystem group must contain the identity")
        for a in group:
            if sorted(a) != list(range(n)):
                raise ValueError(f"{a} is not a permutation of {n} factors")
            for b in group:
                if compose_perm(a, b) not in group:
                    raise ValueError("subsystem_group is not closed under composition")


CLONER_AVERAGING = AveragingSpec(CLONER_SIGNATURE, (IDENTITY3, SWAP23))
HYBRID_AVERAGING = AveragingSpec(HYBRID_SIGNATURE, (IDENTITY3, SWAP13))
TRANSPOSE_CLONER_AVERAGING = AveragingSpec(TRANSPOSE_CLONER_SIGNATURE, S3)
TRANSPOSE_AVERAGING = AveragingSpec(TRANSPOSE_SIGNATURE, ((0, 1), (1, 0)))


def phase_unitary(theta: Sequence[float]) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.size < 2:
        raise DimensionError("need d >= 2 angles")
    return np.diag(np.exp(1j * theta))


def basis_permutation_unitary(pi: Sequence[int]) -> np.ndarray:
    """U_pi = sum_k |pi(k)><k|."""
    pi = list(pi)
    d = len(pi)
    if sorted(pi) != list(range(d)):
        raise ValueError(f"{pi} is not a bijection of range({d})")
    U = np.zeros((d, d))
    U[pi, np.arange(d)] = 1.0
    return U


def _perm_index(perm: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Flat index map for V_perm: basis state j is sent to index[j]."""
    n = len(perm)
    idx = np.indices(tuple(dims)).reshape(n, -1)
    new = np.empty_like(idx)
    for f in range(n):
        new[perm[f]] = idx[f]
    new_dims = [0] * n
    for f in range(n):
        new_dims[perm[f]] = dims[f]
    return np.ravel_multi_index(tuple(new), tuple(new_dims))


def subsystem_permutation(sigma: Sequence[int], d: int) -> np.ndarray:
    """V_sigma on (C^d)^{(x)n}: the content of factor f moves to factor sigma(f)."""
    sigma = tuple(sigma)
    n = len(sigma)
    if sorted(sigma) != list(range(n)):
        raise ValueError(f"{sigma} is not a permutation")
    N = d ** n
    V = np.zeros((N, N))
    V[_perm_index(sigma, (d,) * n), np.arange(N)] = 1.0
    return V


def conjugate_by_subsystem(X: np.ndarray, sigma: Sequence[int], d: int) -> np.ndarray:
    """V_sigma X V_sigma^dagger without forming V."""
    p = _perm_index(tuple(sigma), (d,) * len(sigma))
    Y = np.empty_like(X)
    Y[np.ix_(p, p)] = X
    return Y


@lru_cache(maxsize=32)
def _pattern_classes(d: int, npos: int) -> tuple[np.ndarray, tuple[tuple[int, ...], ...]]:
    """Equality pattern of every multi-index in range(d)**npos.

    Returns (class id per flat multi-index, canonical pattern per class). A
    pattern is the restricted growth string of the index tuple; two tuples are
    in the same S_d orbit iff they share it.
    """
    idx = np.indices((d,) * npos).reshape(npos, -1)
    first = np.empty_like(idx)
    for p in range(npos):
        first[p] = p
        for q in range(p - 1, -1, -1):
            first[p] = np.where(idx[q] == idx[p], q, first[p])
    code = np.zeros(idx.shape[1], dtype=np.int64)
    for p in range(npos):
        code = code * npos + first[p]
    uniq, inverse = np.unique(code, return_inverse=True)
    patterns = []
    for c in uniq:
        digits = []
        for _ in range(npos):
            digits.append(int(c % npos))
            c //= npos
        firsts = digits[::-1]
        labels, rgs = {}, []
        for p, fp in enumerate(firsts):
            rgs.append(labels.setdefault(fp, len(labels)))
        patterns.append(tuple(rgs))
    inverse.setflags(write=False)
    return inverse, tuple(patterns)


def _survives(pattern: Sequence[int], signs: Sequence[int]) -> bool:
    n = len(signs)
    total = [0] * (max(pattern) + 1)
    for f in range(n):
        total[pattern[f]] += signs[f]
        total[pattern[n + f]] -= signs[f]
    return not any(total)


@lru_cache(maxsize=32)
def twirl_mask(d: int, signs: tuple[int, ...]) -> np.ndarray:
    n = len(signs)
    inverse, patterns = _pattern_classes(d, 2 * n)
    keep = np.array([_survives(p, signs) for p in patterns])
    mask = keep[inverse].reshape(d ** n, d ** n)
    mask.setflags(write=False)
    return mask


def _infer_d(X: np.ndarray, n: int) -> int:
    d = round(X.shape[0] ** (1.0 / n))
    if d ** n != X.shape[0]:
        raise DimensionError(f"operator side {X.shape[0]} is not d**{n}")
    return d


def phase_twirl(X: np.ndarray, sig: PhaseSignature) -> np.ndarray:
    """Exact average of U_s(theta) X U_s(theta)^dagger over the phase torus."""
    d = _infer_d(X, len(sig))
    return np.where(twirl_mask(d, sig.signs), X, 0)


def permutation_average(X: np.ndarray, n: int, method: str = "pattern") -> np.ndarray:
    """Average of U_pi^{(x)n} X U_pi^{dagger (x)n} over pi in S_d.

    ``pattern`` averages entries within equality-pattern classes, which is
    the same projection without enumerating d! elements. ``enumerate`` sums
    over the group explicitly (d <= 8).
    """
    d = _infer_d(X, n)
    if method == "enumerate":
        if d > 8:
            raise DimensionError("explicit S_d enumeration limited to d <= 8")
        acc = np.zeros_like(X, dtype=complex)
        count = 0
        for pi in itertools.permutations(range(d)):
            p = _perm_index_basis(pi, d, n)
            Y = np.empty_like(acc)
            Y[np.ix_(p, p)] = X
            acc += Y
            count += 1
        return acc / count
    if method != "pattern":
        raise ValueError(f"unknown method {method!r}")
    inverse, patterns = _pattern_classes(d, 2 * n)
    flat = np.asarray(X, dtype=complex).ravel()
    k = len(patterns)
    sums = np.bincount(inverse, weights=flat.real, minlength=k) + 1j * np.bincount(
        inverse, weights=flat.imag, minlength=k)
    counts = np.bincount(inverse, minlength=k)
    return (sums / counts)[inverse].reshape(X.shape)


def _perm_index_basis(pi: Sequence[int], d: int, n: int) -> np.ndarray:
    idx = np.indices((d,) * n).reshape(n, -1)
    return np.ravel_multi_index(tuple(np.asarray(pi)[idx]), (d,) * n)


def subsystem_average(X: np.ndarray, group: Sequence[Sequence[int]]) -> np.ndarray:
    n = len(group[0])
    d = _infer_d(X, n)
    return sum(conjugate_by_subsystem(X, g, d) for g in group) / len(group)


def average_choi(J: np.ndarray, spec: AveragingSpec, method: str = "pattern") -> np.ndarray:
    """Phase twirl, then S_d average, then subsystem-permutation average."""
    n = len(spec.signature)
    Y = phase_twirl(np.asarray(J, dtype=complex), spec.signature)
    Y = permutation_average(Y, n, method=method)
    return subsystem_average(Y, spec.subsystem_group)
