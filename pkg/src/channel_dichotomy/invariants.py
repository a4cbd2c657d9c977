"""Channel-level invariants: wedge ranks and the extremality criterion.

The wedge operator of an r-tuple is the alternating sum

    L = sum_{sigma in S_r} sgn(sigma) v_{sigma(1)} (x) ... (x) v_{sigma(r)},

an m^r x n^r matrix that maps the symmetric subspace of the input power into
the antisymmetric subspace of the output power.  Its rank restricted to the
symmetric subspace, together with the same construction on the adjoint
tuple, yields the pair (w, w_star); tuples whose output states are separable
satisfy w <= 1 and w_star <= 1, so a value >= 2 certifies entanglement
preservation.  The overall scalar normalization of L is irrelevant: both
reported quantities are ranks.

A channel is an extreme point of the UCP convex set iff the r^2 products
{v_i* v_j} of a minimal tuple are linearly independent; since B(H) has
dimension n^2 this forces r <= n.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channel import KrausChannel, reduce_minimal
from .errors import NumericalFailure, SizeGuardExceeded
from .linalg import (
    DEFAULT_TOL,
    SIZE_GUARD,
    Tolerance,
    antisymmetric_projector,
    dagger,
    perm_sign,
    rank_from_singvals,
    singular_values,
    symmetric_projector,
)

# Absolute defect allowed in the exact identity P_antisym L P_sym = L P_sym.
_RANGE_CHECK_ABS = 1e-10


@dataclass(frozen=True)
class WedgeReport:
    """The two wedge ranks plus the singular values backing each of them."""

    w: int
    w_star: int
    singvals: tuple
    singvals_star: tuple


@dataclass(frozen=True)
class ExtremalityReport:
    """Extremality verdict with the rank and margin of the product family."""

    extremal: bool
    gram_rank: int
    min_singval: float


def alternating_tensor(ops) -> np.ndarray:
    """Signed sum over permutations of the tensor product of the tuple."""
    r = len(ops)
    acc = None
    for perm in itertools.permutations(range(r)):
        term = ops[perm[0]]
        for k in range(1, r):
            term = np.kron(term, ops[perm[k]])
        term = perm_sign(perm) * term
        acc = term if acc is None else acc + term
    return acc


def _restricted_rank(ops, d_out: int, d_in: int, tol: Tolerance, size_guard: int):
    """Rank of the alternating tensor restricted to the symmetric input subspace.

    The rank cutoff is relative to the largest singular value of the
    unrestricted alternating tensor: the restriction can vanish identically
    (e.g. the antisymmetric target space is zero once r exceeds d_out), and
    a cutoff relative to the restricted operator's own scale would then
    count roundoff noise as rank.
    """
    r = len(ops)
    big = alternating_tensor(ops)
    p_sym = symmetric_projector(d_in, r, size_guard)
    restricted = big @ p_sym
    p_anti = antisymmetric_projector(d_out, r, size_guard)
    defect = float(np.linalg.norm(restricted - p_anti @ restricted))
    if defect > _RANGE_CHECK_ABS:
        raise NumericalFailure(
            f"alternating tensor leaked out of the antisymmetric range (defect {defect:.3e})"
        )
    s = singular_values(restricted)
    scale = float(singular_values(big)[0])
    rank = int(np.count_nonzero(s > tol.rel_eps * scale)) if scale > 0.0 else 0
    bound = min(math.comb(d_in + r - 1, r), math.comb(d_out, r))
    if rank > bound:
        raise NumericalFailure(f"wedge rank {rank} exceeds its dimension bound {bound}")
    return rank, tuple(float(x) for x in s)


def wedge_invariants(
    phi: KrausChannel,
    tol: Tolerance = DEFAULT_TOL,
    size_guard: int = SIZE_GUARD,
) -> WedgeReport:
    """Wedge ranks (w, w_star) of the channel's tuple as given.

    w restricts the alternating tensor of (v_1..v_r) to the symmetric
    subspace of the r-th power of H; w_star does the same for the adjoint
    tuple on the r-th power of K.  Both are invariant under unitary mixing
    (mixing rescales L by the determinant).  The r-th powers n^r and m^r
    must stay within size_guard.
    """
    r = len(phi.ops)
    n, m = phi.dim_h, phi.dim_k
    if n**r > size_guard or m**r > size_guard:
        raise SizeGuardExceeded(
            f"tensor powers n^r={n ** r}, m^r={m ** r} exceed the size guard {size_guard}"
        )
    w, s = _restricted_rank(list(phi.ops), m, n, tol, size_guard)
    adj = [dagger(v) for v in phi.ops]
    w_star, s_star = _restricted_rank(adj, n, m, tol, size_guard)
    return WedgeReport(w=w, w_star=w_star, singvals=s, singvals_star=s_star)


def is_extremal(phi: KrausChannel, tol: Tolerance = DEFAULT_TOL) -> ExtremalityReport:
    """Extreme-point test: are the products v_i* v_j linearly independent?

    The tuple is first reduced to minimal form (extremality is a property of
    the map).  With r the reduced length, the channel is extremal iff the
    r^2 x n^2 matrix of vectorized products has full row rank r^2; for
    r > n that is impossible, matching the fact that no extremal map of
    rank above n exists.  min_singval is the margin behind the verdict.
    """
    red = reduce_minimal(phi, tol)
    ops = red.ops
    r = len(ops)
    rows = np.stack([(dagger(vi) @ vj).ravel() for vi in ops for vj in ops])
    s = singular_values(rows)
    gram_rank = rank_from_singvals(s, tol)
    return ExtremalityReport(
        extremal=(gram_rank == r * r),
        gram_rank=gram_rank,
        min_singval=float(s[-1]),
    )
