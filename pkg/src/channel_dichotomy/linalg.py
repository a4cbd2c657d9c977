"""Shared dense complex linear algebra.

Conventions fixed here and obeyed by every other module:

* matrices are ``numpy.complex128`` arrays in row-major order;
* on tensor products the first factor carries the major index: the row
  index of ``kron(a, b)`` is ``i_a * rows(b) + i_b``;
* rank and positivity cutoffs are relative to the largest singular value,
  controlled by a ``Tolerance`` (default ``rel_eps = 1e-9``).

Everything is dense; the intended scale is matrices up to ~4096 square.
"""

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, InvalidInput, NumericalFailure, SizeGuardExceeded

SIZE_GUARD = 4096


@dataclass(frozen=True)
class Tolerance:
    """Relative cutoff used for ranks, positivity checks and defect norms."""

    rel_eps: float = 1e-9

    def __post_init__(self):
        if not 0.0 <= self.rel_eps < 1.0:
            raise InvalidInput(f"rel_eps must lie in [0, 1), got {self.rel_eps}")


DEFAULT_TOL = Tolerance()


class Keep(Enum):
    """Which tensor factor survives a partial trace."""

    FIRST = "first"
    SECOND = "second"


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a 2-d complex128 array, rejecting NaN/Inf entries."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise InvalidInput(f"expected a 2-d matrix, got ndim={arr.ndim}")
    if arr.size == 0:
        raise InvalidInput("matrix must have positive dimensions")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise InvalidInput("matrix entries must be finite (no NaN/Inf)")
    return arr


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product, first factor major."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def _check_bipartite(rho: np.ndarray, dim_a: int, dim_b: int) -> None:
    if dim_a < 1 or dim_b < 1:
        raise DimensionMismatch(f"factor dimensions must be positive, got {dim_a}, {dim_b}")
    d = dim_a * dim_b
    if rho.shape != (d, d):
        raise DimensionMismatch(
            f"matrix has shape {rho.shape}, expected ({d}, {d}) for factors {dim_a} x {dim_b}"
        )


def partial_transpose(rho, dim_a: int, dim_b: int) -> np.ndarray:
    """Transpose of the second tensor factor: ((i,j),(k,l)) -> ((i,l),(k,j))."""
    rho = as_complex_matrix(rho)
    _check_bipartite(rho, dim_a, dim_b)
    t = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    return np.ascontiguousarray(t.transpose(0, 3, 2, 1).reshape(rho.shape))


def partial_trace(rho, dim_a: int, dim_b: int, keep: Keep) -> np.ndarray:
    """Reduced matrix of the kept factor; trace is preserved."""
    rho = as_complex_matrix(rho)
    _check_bipartite(rho, dim_a, dim_b)
    t = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep is Keep.FIRST:
        out = np.einsum("ijkj->ik", t)
    elif keep is Keep.SECOND:
        out = np.einsum("ijil->jl", t)
    else:
        raise InvalidInput(f"keep must be a Keep member, got {keep!r}")
    return np.ascontiguousarray(out)


def singular_values(a) -> np.ndarray:
    """Singular values in descending order; SVD failure becomes NumericalFailure."""
    a = as_complex_matrix(a)
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc


def rank_from_singvals(s: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> int:
    """Count singular values above rel_eps times the largest one."""
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rel_eps * s[0]))


def numerical_rank(a, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of singular values above the relative cutoff; 0 for the zero matrix."""
    return rank_from_singvals(singular_values(a), tol)


def hermitian_min_eig(a, tol: Tolerance = DEFAULT_TOL) -> float:
    """Smallest eigenvalue of (a + a*)/2; rejects clearly non-Hermitian input."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise InvalidInput(f"expected a square matrix, got shape {a.shape}")
    defect = np.linalg.norm(a - dagger(a))
    if defect > tol.rel_eps * max(np.linalg.norm(a), 1e-300):
        raise InvalidInput(f"matrix is not Hermitian (defect {defect:.3e})")
    try:
        return float(np.linalg.eigvalsh((a + dagger(a)) / 2.0)[0])
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc


def perm_sign(perm) -> int:
    """Sign of a permutation given as a sequence of distinct integers."""
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def permutation_operator(d: int, perm) -> np.ndarray:
    """Unitary on (C^d)^(x r) that moves tensor factor a of the input to slot perm[a]."""
    r = len(perm)
    dim = d**r
    src = np.arange(dim)
    dst = np.zeros(dim, dtype=np.int64)
    for a, slot in enumerate(perm):
        digit = (src // d ** (r - 1 - a)) % d
        dst += digit * d ** (r - 1 - slot)
    u = np.zeros((dim, dim), dtype=np.complex128)
    u[dst, src] = 1.0
    return u


def _projector(d: int, r: int, signed: bool, size_guard: int) -> np.ndarray:
    if d < 1 or r < 1:
        raise InvalidInput(f"need d >= 1 and r >= 1, got d={d}, r={r}")
    if d**r > size_guard:
        raise SizeGuardExceeded(f"d^r = {d**r} exceeds the size guard {size_guard}")
    dim = d**r
    acc = np.zeros((dim, dim), dtype=np.complex128)
    for perm in itertools.permutations(range(r)):
        term = permutation_operator(d, perm)
        if signed:
            term *= perm_sign(perm)
        acc += term
    return acc / math.factorial(r)


def symmetric_projector(d: int, r: int, size_guard: int = SIZE_GUARD) -> np.ndarray:
    """Orthogonal projection onto the symmetric subspace of (C^d)^(x r)."""
    return _projector(d, r, signed=False, size_guard=size_guard)


def antisymmetric_projector(d: int, r: int, size_guard: int = SIZE_GUARD) -> np.ndarray:
    """Orthogonal projection onto the antisymmetric subspace of (C^d)^(x r)."""
    return _projector(d, r, signed=True, size_guard=size_guard)
