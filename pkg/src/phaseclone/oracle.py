"""Monte Carlo and quadrature oracles, independent of the twirl algebra.

Process fidelities are estimated straight from the defining integral: sample
an input state, push it through the channel with ``apply_channel``-style
contraction and take the overlap with the ideal output. Random streams come
from Philox keyed by (seed, chunk index), so results do not depend on how
chunks are scheduled across workers.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .qcore import ChannelChoi, DimensionError

CHUNK = 4096


class SamplingMode(enum.Enum):
    PHASE_TORUS = "phase_torus"
    HAAR_UNITARY = "haar_unitary"


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 42
    samples: int = 100_000
    mode: SamplingMode = SamplingMode.PHASE_TORUS

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("need at least two samples")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(chunk),))
    return np.random.Generator(np.random.Philox(ss))


def chunk_sizes(samples: int) -> list[int]:
    full, rest = divmod(samples, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def haar_unitary(d: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar unitary via QR of a complex Ginibre matrix with the R-diagonal phases removed."""
    if d < 2:
        raise DimensionError("d must be >= 2")
    shape = (d, d) if size is None else (size, d, d)
    Z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    diag = np.diagonal(R, axis1=-2, axis2=-1)
    return Q * (diag / np.abs(diag))[..., None, :]


def sample_inputs(d: int, n: int, mode: SamplingMode, rng: np.random.Generator) -> np.ndarray:
    """n input kets, shape (n, d)."""
    if mode is SamplingMode.PHASE_TORUS:
        theta = rng.uniform(0.0, 2 * np.pi, size=(n, d))
        return np.exp(1j * theta) / np.sqrt(d)
    return haar_unitary(d, rng, size=n)[:, :, 0]


def apply_batch(E: ChannelChoi, kets: np.ndarray) -> np.ndarray:
    """E(|psi><psi|) for a batch of input kets, shape (n, D_out, D_out)."""
    dout = int(np.prod(E.d_out))
    J4 = E.J.reshape(E.d_in, dout, E.d_in, dout)
    rho = kets[:, :, None] * kets[:, None, :].conj()
    return np.einsum("iajc,bij->bac", J4, rho, optimize=True)


def _product_kets(factors: list[np.ndarray]) -> np.ndarray:
    out = factors[0]
    for f in factors[1:]:
        out = np.einsum("bi,bj->bij", out, f).reshape(out.shape[0], -1)
    return out


def ideal_outputs(kind, kets: np.ndarray) -> np.ndarray:
    """Pure ideal output kets for a batch of inputs."""
    from .cloners import IDEAL_OUTPUTS
    return _product_kets([kets.conj() if conj else kets for conj in IDEAL_OUTPUTS[kind]])


def _chunk_values(E, kind, cfg, k, n):
    rng = chunk_rng(cfg.seed, k)
    kets = sample_inputs(E.d_in, n, cfg.mode, rng)
    out = apply_batch(E, kets)
    chi = ideal_outputs(kind, kets)
    return np.einsum("ba,bac,bc->b", chi.conj(), out, chi).real


def mc_process_fidelity(E: ChannelChoi, kind, cfg: SamplerConfig = SamplerConfig(),
                        workers: int = 1) -> tuple[float, float]:
    """Monte Carlo estimate of the process fidelity and its standard error."""
    from .cloners import MapKind
    kind = MapKind(kind)
    expected = SamplingMode.HAAR_UNITARY if kind is MapKind.UNIVERSAL_TRANSPOSE_CLONER \
        else SamplingMode.PHASE_TORUS
    if cfg.mode is not expected:
        raise ValueError(f"{kind.name} requires sampling mode {expected.name}")
    sizes = chunk_sizes(cfg.samples)
    jobs = list(enumerate(sizes))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda kn: _chunk_values(E, kind, cfg, *kn), jobs))
    else:
        parts = [_chunk_values(E, kind, cfg, k, n) for k, n in jobs]
    vals = np.concatenate(parts)
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(vals.size))


def quadrature_twirl_check(X: np.ndarray, sig, points_per_angle: int = 32) -> np.ndarray:
    """Phase twirl by the product trapezoid rule on the d-torus (d <= 3)."""
    signs = np.asarray(sig.signs)
    n = len(signs)
    d = round(X.shape[0] ** (1.0 / n))
    if d ** n != X.shape[0]:
        raise DimensionError("operator side is not d**n")
    if d > 3:
        raise DimensionError("quadrature oracle limited to d <= 3")
    grid = 2 * np.pi * np.arange(points_per_angle) / points_per_angle
    nodes = np.array(np.meshgrid(*([grid] * d), indexing="ij")).reshape(d, -1).T
    acc = np.zeros(X.shape, dtype=complex)
    for start in range(0, len(nodes), 2048):
        th = nodes[start:start + 2048]
        u = np.ones((len(th), 1), dtype=complex)
        for s in signs:
            u = np.einsum("bi,bj->bij", u, np.exp(1j * s * th)).reshape(len(th), -1)
        # diagonal unitaries: U X U^dagger = X * (u u^*)
        acc += np.einsum("bi,bj->ij", u, u.conj())
    return X * acc / len(nodes)
