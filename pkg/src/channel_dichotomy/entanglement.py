"""Separability criteria and the channel-level classification.

The computational oracle for separability is the partial transpose, which is
decisive exactly when the product of the factor dimensions is at most 6.
Above that, a negative partial transpose or a realignment value above 1
certifies entanglement, and everything else is reported Unknown; the tool
never claims "separable" outside the decisive regime.

A channel preserves entanglement iff its output state at one (equivalently,
every) maximally entangled input is entangled, so the channel verdict is the
state verdict of the Choi state.  ``verify_rank_one_certificate`` checks the
one positive certificate we do accept for the breaking side: an orthonormal
family of mixing coefficients under which every mixed Kraus operator has
rank at most one.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .channel import BipartiteDensity, KrausChannel, choi_state
from .errors import DimensionMismatch, InvalidInput
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    dagger,
    numerical_rank,
    partial_transpose,
    rank_from_singvals,
    singular_values,
)

logger = logging.getLogger(__name__)

# Largest dim_a * dim_b for which a positive partial transpose proves separability.
PPT_DECISIVE_LIMIT = 6


class VerdictKind(str, Enum):
    ENTANGLED_NPT = "EntangledNPT"
    ENTANGLED_REALIGNMENT = "EntangledRealignment"
    SEPARABLE_PPT_EXACT = "SeparablePPTExact"
    UNKNOWN = "Unknown"


_CRITERION = {
    VerdictKind.ENTANGLED_NPT: "ppt",
    VerdictKind.ENTANGLED_REALIGNMENT: "realignment",
    VerdictKind.SEPARABLE_PPT_EXACT: "ppt",
    VerdictKind.UNKNOWN: "none",
}


@dataclass(frozen=True)
class Verdict:
    """Three-valued separability verdict with the witness value behind it.

    witness_value is the minimum partial-transpose eigenvalue for ppt-based
    verdicts and the realignment excess (trace norm minus 1) otherwise, so
    margins near the tolerance stay visible.
    """

    kind: VerdictKind
    witness_value: float

    @property
    def entangled(self):
        """True / False when certified, None when Unknown."""
        if self.kind in (VerdictKind.ENTANGLED_NPT, VerdictKind.ENTANGLED_REALIGNMENT):
            return True
        if self.kind is VerdictKind.SEPARABLE_PPT_EXACT:
            return False
        return None

    @property
    def criterion(self) -> str:
        return _CRITERION[self.kind]

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "witness": float(self.witness_value),
            "criterion": self.criterion,
        }


def schmidt_rank(xi, dim_a: int, dim_b: int, tol: Tolerance = DEFAULT_TOL) -> int:
    """Rank of the coefficient matrix of a bipartite unit vector."""
    xi = np.asarray(xi, dtype=np.complex128).reshape(-1)
    if xi.size != dim_a * dim_b:
        raise DimensionMismatch(
            f"vector has length {xi.size}, expected {dim_a} * {dim_b}"
        )
    nrm = float(np.linalg.norm(xi))
    if abs(nrm - 1.0) > tol.rel_eps:
        raise InvalidInput(f"xi must be a unit vector (norm {nrm:.12g})")
    return numerical_rank(xi.reshape(dim_a, dim_b), tol)


def is_marginally_cyclic(xi, n: int, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Full Schmidt rank in H (x) H: the marginal state is faithful."""
    return schmidt_rank(xi, n, n, tol) == n


def realignment_value(rho: BipartiteDensity) -> float:
    """Trace norm of the realigned matrix; values above 1 certify entanglement."""
    da, db = rho.dim_a, rho.dim_b
    t = rho.mat.reshape(da, db, da, db)
    realigned = t.transpose(0, 2, 1, 3).reshape(da * da, db * db)
    return float(np.sum(singular_values(realigned)))


def ppt_verdict(rho: BipartiteDensity, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Classify a bipartite density: NPT, separable (small dims), or escalate.

    The negativity threshold is relative to the spectral norm of rho.  For
    dim_a * dim_b <= 6 a positive partial transpose is conclusive; above
    that the realignment criterion is tried and the fallback is Unknown.
    """
    pt = partial_transpose(rho.mat, rho.dim_a, rho.dim_b)
    evs = np.linalg.eigvalsh((pt + dagger(pt)) / 2.0)
    lam_min = float(evs[0])
    scale = float(np.max(np.abs(np.linalg.eigvalsh((rho.mat + dagger(rho.mat)) / 2.0))))
    if lam_min < -tol.rel_eps * scale:
        return Verdict(VerdictKind.ENTANGLED_NPT, lam_min)
    if rho.dim_a * rho.dim_b <= PPT_DECISIVE_LIMIT:
        return Verdict(VerdictKind.SEPARABLE_PPT_EXACT, lam_min)
    excess = realignment_value(rho) - 1.0
    if excess > tol.rel_eps:
        return Verdict(VerdictKind.ENTANGLED_REALIGNMENT, excess)
    return Verdict(VerdictKind.UNKNOWN, excess)


def classify_channel(phi: KrausChannel, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Entanglement-breaking vs entanglement-preserving, decided at the Choi state.

    An entangled verdict means the channel preserves entanglement (its output
    at every maximally entangled input is entangled); a separable verdict in
    the decisive regime means it is entanglement breaking.
    """
    return ppt_verdict(choi_state(phi, tol), tol)


@dataclass(frozen=True)
class RankOneCertificate:
    """Mixing coefficients claiming membership in the separable tuple set.

    coeffs is a q x r matrix, q = (dim_k * dim_h)^2 + 1, whose columns must
    be orthonormal (hence extendable to rows of a q x q unitary).  The claim
    it certifies: every combination sum_j coeffs[i, j] v_j has rank <= 1.
    """

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.coeffs), dtype=np.complex128)
        if arr.ndim != 2:
            raise InvalidInput(f"coefficients must be a 2-d matrix, got ndim={arr.ndim}")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def padded_identity(cls, q: int, r: int) -> "RankOneCertificate":
        """The trivial certificate for a tuple whose operators are already rank one."""
        if q < r:
            raise InvalidInput(f"need q >= r to pad, got q={q}, r={r}")
        coeffs = np.zeros((q, r), dtype=np.complex128)
        coeffs[:r, :r] = np.eye(r)
        return cls(coeffs)


def certificate_rows(phi: KrausChannel) -> int:
    """Required certificate height q = (m n)^2 + 1 for a channel with dims (n, m)."""
    return (phi.dim_k * phi.dim_h) ** 2 + 1


def verify_rank_one_certificate(
    phi: KrausChannel, cert: RankOneCertificate, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Check a separability certificate against the channel's tuple.

    True iff the columns are orthonormal and every certified combination has
    numerical rank at most 1.  A true verdict proves the channel is
    entanglement breaking; False only means this certificate fails.
    """
    q = certificate_rows(phi)
    r = len(phi.ops)
    if cert.coeffs.shape != (q, r):
        raise DimensionMismatch(
            f"certificate has shape {cert.coeffs.shape}, expected ({q}, {r})"
        )
    ortho_defect = float(np.linalg.norm(dagger(cert.coeffs) @ cert.coeffs - np.eye(r)))
    if ortho_defect > tol.rel_eps:
        logger.info("certificate rejected: columns not orthonormal (defect %.3e)", ortho_defect)
        return False
    stacked = np.stack(phi.ops)
    combos = np.einsum("ij,jab->iab", cert.coeffs, stacked)
    for i in range(q):
        s = singular_values(combos[i])
        if rank_from_singvals(s, tol) > 1:
            logger.info(
                "certificate rejected: combination %d has rank > 1 (s1=%.3e, s2=%.3e)",
                i, s[0], s[1] if s.size > 1 else 0.0,
            )
            return False
    return True
