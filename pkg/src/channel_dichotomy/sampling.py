"""Seeded random generation of channels, unit vectors and unitaries.

Every sampler is a pure function of a ``SeedSpec``; a (master_seed,
stream_index) pair pins the full draw sequence, so trials indexed by
stream are order independent and safely parallel.  Within one
implementation the draws are bit-reproducible; the generator is numpy's
``default_rng`` (PCG64) keyed through ``SeedSequence([master_seed,
stream_index])``, recorded in experiment outputs as ``RNG_ID``.
"""

from dataclasses import dataclass

import numpy as np

from .channel import HolevoForm, KrausChannel
from .errors import InvalidInput
from .linalg import dagger

RNG_ID = "numpy-default_rng(PCG64)/SeedSequence([master_seed, stream_index])"


@dataclass(frozen=True)
class SeedSpec:
    """Reproducibility key: a 64-bit master seed plus a stream index."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise InvalidInput(f"master_seed must be a 64-bit unsigned int, got {self.master_seed}")
        if self.stream_index < 0:
            raise InvalidInput(f"stream_index must be nonnegative, got {self.stream_index}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(
            np.random.SeedSequence([self.master_seed, self.stream_index])
        )

    def stream(self, offset: int) -> "SeedSpec":
        """SeedSpec for a sub-stream, e.g. one Monte Carlo trial."""
        return SeedSpec(self.master_seed, self.stream_index + offset)


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _phase_corrected_q(g: np.ndarray) -> np.ndarray:
    # Thin QR of a complex Gaussian is Haar only after fixing R's diagonal phases.
    q, r = np.linalg.qr(g, mode="reduced")
    d = np.diagonal(r).copy()
    d[d == 0] = 1.0
    return q * (d / np.abs(d)).conj()


def sample_sphere(d: int, seed: SeedSpec) -> np.ndarray:
    """Uniform unit vector in C^d (normalized complex standard Gaussian)."""
    if d < 1:
        raise InvalidInput(f"dimension must be positive, got {d}")
    rng = seed.rng()
    while True:
        z = _complex_gaussian(rng, d)
        nrm = np.linalg.norm(z)
        if nrm > 0:
            return z / nrm


def sample_unitary(d: int, seed: SeedSpec) -> np.ndarray:
    """Haar-distributed d x d unitary via phase-corrected QR of a Gaussian."""
    if d < 1:
        raise InvalidInput(f"dimension must be positive, got {d}")
    return _phase_corrected_q(_complex_gaussian(seed.rng(), (d, d)))


def sample_vr(n: int, m: int, r: int, seed: SeedSpec) -> KrausChannel:
    """Uniform random unital Kraus r-tuple for B(K) -> B(H), dim K = m, dim H = n.

    Draws an (r m) x n complex Gaussian, takes its phase-corrected thin QR
    factor (a Haar isometry H -> r copies of K), and slices it into r blocks
    of m x n.  Requires r * m >= n, otherwise no isometry exists and the
    tuple manifold is empty.
    """
    if n < 1 or m < 1 or r < 1:
        raise InvalidInput(f"need n, m, r >= 1, got n={n}, m={m}, r={r}")
    if r * m < n:
        raise InvalidInput(
            f"empty manifold: r*m = {r * m} < n = {n}, no unital r-tuple exists"
        )
    q = _phase_corrected_q(_complex_gaussian(seed.rng(), (r * m, n)))
    ops = [q[k * m : (k + 1) * m, :] for k in range(r)]
    return KrausChannel(n, m, ops)


def make_extremal(n: int, m: int, r: int) -> KrausChannel:
    """Deterministic extremal rank-r tuple for 1 <= r <= n <= m.

    v_i = u_i + w / sqrt(r) where u_i maps e_i to the first basis vector f
    of K, and w is a partial isometry carrying the orthocomplement of
    span{e_1..e_r} onto basis vectors of K orthogonal to f.  Then
    v_i* v_j = |e_i><e_j| + p_perp / r, so the products are linearly
    independent and unitality is exact.
    """
    if not 1 <= r <= n <= m:
        raise InvalidInput(f"need 1 <= r <= n <= m, got r={r}, n={n}, m={m}")
    w = np.zeros((m, n), dtype=np.complex128)
    for j in range(r, n):
        w[1 + (j - r), j] = 1.0  # needs n - r <= m - 1, implied by r >= 1, n <= m
    ops = []
    for i in range(r):
        u = np.zeros((m, n), dtype=np.complex128)
        u[0, i] = 1.0
        ops.append(u + w / np.sqrt(r))
    return KrausChannel(n, m, ops)


def sample_holevo(n: int, m: int, s: int, seed: SeedSpec) -> HolevoForm:
    """Random Holevo form with s terms: Wishart states and a normalized POVM.

    Effects are built from Wishart factors p_k via e_k = S^{-1/2} p_k S^{-1/2}
    with S = sum p_k, which sums to the identity exactly.
    """
    if n < 1 or m < 1 or s < 1:
        raise InvalidInput(f"need n, m, s >= 1, got n={n}, m={m}, s={s}")
    rng = seed.rng()
    omegas = []
    for _ in range(s):
        g = _complex_gaussian(rng, (m, m))
        w = g @ dagger(g)
        omegas.append(w / np.trace(w).real)
    raws = []
    for _ in range(s):
        g = _complex_gaussian(rng, (n, n))
        raws.append(g @ dagger(g))
    total = np.sum(raws, axis=0)
    evals, vecs = np.linalg.eigh(total)
    inv_sqrt = (vecs / np.sqrt(evals)) @ dagger(vecs)
    effects = [inv_sqrt @ p @ inv_sqrt for p in raws]
    return HolevoForm(tuple(omegas), tuple(effects))
