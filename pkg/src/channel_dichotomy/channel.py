"""Kraus-tuple quantum channels in the Heisenberg picture.

A channel here is a unital completely positive map phi: B(K) -> B(H) carried
by an r-tuple of operators v_1..v_r in B(H, K), stored as m x n matrices
(m = dim K, n = dim H), acting as

    phi(a) = v_1* a v_1 + ... + v_r* a v_r,      sum_k v_k* v_k = I_n.

The tuple is unique up to mixing by an r x r unitary; ``reduce_minimal``
removes linear dependence, ``rank`` counts the independent components, and
``recover_mixing_unitary`` reconstructs the mixing matrix between two tuples
implementing the same map.  Output states of the inflated map phi (x) id at
pure inputs live on K (x) H (first factor major).
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidInput, NumericalFailure
from .linalg import DEFAULT_TOL, Tolerance, as_complex_matrix, dagger, kron, numerical_rank


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.complex128)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class KrausChannel:
    """UCP map phi: B(K) -> B(H) as a tuple of m x n Kraus operators.

    dim_h is n = dim H (codomain algebra B(H)), dim_k is m = dim K (domain
    algebra B(K)); each operator maps H into K.  Construction validates the
    shapes and the unitality sum; channels are immutable once built.
    """

    dim_h: int
    dim_k: int
    ops: tuple = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(_freeze(np.asarray(v)) for v in self.ops))
        failures = kraus_invariant_violations(self.dim_h, self.dim_k, self.ops)
        if failures:
            raise InvalidInput("invalid Kraus tuple: " + "; ".join(failures))

    def __len__(self) -> int:
        return len(self.ops)


def kraus_invariant_violations(
    dim_h: int, dim_k: int, ops, tol: Tolerance = DEFAULT_TOL
) -> list:
    """Names of violated KrausChannel invariants (empty when valid)."""
    failures = []
    if dim_h < 1 or dim_k < 1:
        failures.append(f"dimensions must be positive (dim_h={dim_h}, dim_k={dim_k})")
        return failures
    if len(ops) < 1:
        failures.append("tuple must contain at least one operator")
        return failures
    for k, v in enumerate(ops):
        v = np.asarray(v)
        if v.shape != (dim_k, dim_h):
            failures.append(
                f"operator {k} has shape {v.shape}, expected ({dim_k}, {dim_h})"
            )
        elif not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
            failures.append(f"operator {k} has non-finite entries")
    if failures:
        return failures
    defect = unitality_defect(ops, dim_h)
    if defect > tol.rel_eps * np.sqrt(dim_h):
        failures.append(f"unitality: ||sum v_k* v_k - I||_F = {defect:.3e}")
    return failures


def unitality_defect(ops, dim_h: int) -> float:
    """Frobenius distance of sum_k v_k* v_k from the identity on H."""
    acc = np.zeros((dim_h, dim_h), dtype=np.complex128)
    for v in ops:
        acc += dagger(np.asarray(v)) @ np.asarray(v)
    return float(np.linalg.norm(acc - np.eye(dim_h)))


@dataclass(frozen=True)
class HolevoForm:
    """Entanglement-breaking map as states omega_k on K and effects e_k on H.

    The map is phi(x) = sum_k tr(omega_k x) e_k with each omega_k a density
    matrix on K and the e_k positive operators on H summing to the identity.
    """

    omegas: tuple
    effects: tuple

    def __post_init__(self):
        object.__setattr__(self, "omegas", tuple(_freeze(np.asarray(w)) for w in self.omegas))
        object.__setattr__(self, "effects", tuple(_freeze(np.asarray(e)) for e in self.effects))
        failures = holevo_invariant_violations(self.omegas, self.effects)
        if failures:
            raise InvalidInput("invalid Holevo form: " + "; ".join(failures))

    @property
    def dim_k(self) -> int:
        return self.omegas[0].shape[0]

    @property
    def dim_h(self) -> int:
        return self.effects[0].shape[0]

    def __len__(self) -> int:
        return len(self.omegas)


def holevo_invariant_violations(omegas, effects, tol: Tolerance = DEFAULT_TOL) -> list:
    failures = []
    if len(omegas) < 1 or len(omegas) != len(effects):
        failures.append(
            f"need equally many states and effects, got {len(omegas)} and {len(effects)}"
        )
        return failures
    m = np.asarray(omegas[0]).shape[0]
    n = np.asarray(effects[0]).shape[0]
    for k, w in enumerate(omegas):
        w = np.asarray(w)
        if w.shape != (m, m):
            failures.append(f"state {k} has shape {w.shape}, expected ({m}, {m})")
            continue
        evs = np.linalg.eigvalsh((w + dagger(w)) / 2.0)
        if evs[0] < -tol.rel_eps:
            failures.append(f"state {k} is not PSD (min eig {evs[0]:.3e})")
        if abs(np.trace(w).real - 1.0) > tol.rel_eps or abs(np.trace(w).imag) > tol.rel_eps:
            failures.append(f"state {k} does not have unit trace")
    acc = np.zeros((n, n), dtype=np.complex128)
    for k, e in enumerate(effects):
        e = np.asarray(e)
        if e.shape != (n, n):
            failures.append(f"effect {k} has shape {e.shape}, expected ({n}, {n})")
            continue
        evs = np.linalg.eigvalsh((e + dagger(e)) / 2.0)
        if evs[0] < -tol.rel_eps:
            failures.append(f"effect {k} is not PSD (min eig {evs[0]:.3e})")
        acc += e
    defect = float(np.linalg.norm(acc - np.eye(n)))
    if defect > tol.rel_eps * np.sqrt(n):
        failures.append(f"effects do not sum to the identity (defect {defect:.3e})")
    return failures


@dataclass(frozen=True)
class BipartiteDensity:
    """Density operator on a tensor product with recorded factor dimensions."""

    dim_a: int
    dim_b: int
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "mat", _freeze(np.asarray(self.mat)))
        failures = density_invariant_violations(self.mat, self.dim_a, self.dim_b)
        if failures:
            raise InvalidInput("invalid bipartite density: " + "; ".join(failures))


def density_invariant_violations(
    mat, dim_a: int, dim_b: int, tol: Tolerance = DEFAULT_TOL
) -> list:
    failures = []
    mat = np.asarray(mat)
    d = dim_a * dim_b
    if dim_a < 1 or dim_b < 1 or mat.shape != (d, d):
        failures.append(f"matrix shape {mat.shape} does not match factors {dim_a} x {dim_b}")
        return failures
    herm_defect = float(np.linalg.norm(mat - dagger(mat)))
    if herm_defect > tol.rel_eps * max(float(np.linalg.norm(mat)), 1e-300):
        failures.append(f"not Hermitian (defect {herm_defect:.3e})")
        return failures
    # Eigenvalues in [-rel_eps, 0] are roundoff from outer products; treat as 0.
    evs = np.linalg.eigvalsh((mat + dagger(mat)) / 2.0)
    if evs[0] < -tol.rel_eps:
        failures.append(f"not positive semidefinite (min eig {evs[0]:.3e})")
    tr = np.trace(mat)
    if abs(tr - 1.0) > tol.rel_eps:
        failures.append(f"trace is {tr:.12g}, expected 1")
    return failures


def maximally_entangled_vector(n: int) -> np.ndarray:
    """The canonical unit vector (e_1 (x) e_1 + ... + e_n (x) e_n) / sqrt(n)."""
    if n < 1:
        raise InvalidInput(f"dimension must be positive, got {n}")
    xi = np.zeros(n * n, dtype=np.complex128)
    xi[np.arange(n) * n + np.arange(n)] = 1.0 / np.sqrt(n)
    return xi


def apply(phi: KrausChannel, a) -> np.ndarray:
    """Evaluate phi(a) = sum_k v_k* a v_k for a in B(K)."""
    a = as_complex_matrix(a)
    m = phi.dim_k
    if a.shape != (m, m):
        raise DimensionMismatch(f"argument has shape {a.shape}, expected ({m}, {m})")
    out = np.zeros((phi.dim_h, phi.dim_h), dtype=np.complex128)
    for v in phi.ops:
        out += dagger(v) @ a @ v
    return out


def output_state(phi: KrausChannel, xi, tol: Tolerance = DEFAULT_TOL) -> BipartiteDensity:
    """State of B(K (x) H) produced by the inflated map at the pure input xi.

    xi is a unit vector in H (x) H of length n^2; the result is
    sum_k (v_k (x) I_n) |xi><xi| (v_k (x) I_n)* with factor dims (m, n).
    Its functionals satisfy tr[D (a (x) b)] = <(phi(a) (x) b) xi, xi>.
    """
    n = phi.dim_h
    xi = np.asarray(xi, dtype=np.complex128).reshape(-1)
    if xi.shape != (n * n,):
        raise DimensionMismatch(f"xi has length {xi.size}, expected n^2 = {n * n}")
    nrm = float(np.linalg.norm(xi))
    if abs(nrm - 1.0) > tol.rel_eps:
        raise InvalidInput(f"xi must be a unit vector (norm {nrm:.12g})")
    # (v (x) I) xi reshapes to v @ X with X the n x n coefficient matrix of xi.
    x_mat = xi.reshape(n, n)
    d = phi.dim_k * n
    acc = np.zeros((d, d), dtype=np.complex128)
    for v in phi.ops:
        y = (v @ x_mat).reshape(d)
        acc += np.outer(y, y.conj())
    return BipartiteDensity(dim_a=phi.dim_k, dim_b=n, mat=acc)


def choi_state(phi: KrausChannel, tol: Tolerance = DEFAULT_TOL) -> BipartiteDensity:
    """Output state at the canonical maximally entangled vector; decides EB vs EP."""
    return output_state(phi, maximally_entangled_vector(phi.dim_h), tol)


def gram_matrix(phi: KrausChannel) -> np.ndarray:
    """Gram matrix of the vectorized Kraus operators, G_ij = tr(v_i* v_j)."""
    flat = np.stack([v.ravel() for v in phi.ops])
    return flat.conj() @ flat.T


def rank(phi: KrausChannel, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of linearly independent Kraus operators (the channel's rank)."""
    return numerical_rank(gram_matrix(phi), tol)


def reduce_minimal(phi: KrausChannel, tol: Tolerance = DEFAULT_TOL) -> KrausChannel:
    """Rotate the tuple by a unitary so near-null components split off, then drop them.

    Diagonalizes the Gram matrix of the vectorized operators; the resulting
    tuple implements the same map (unitary mixing), has linearly independent
    components, and its length equals the numerical rank of the Gram matrix.
    """
    g = gram_matrix(phi)
    try:
        evals, vecs = np.linalg.eigh(g)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"Gram eigendecomposition failed: {exc}") from exc
    order = np.argsort(evals)[::-1]
    evals = evals[order]
    vecs = vecs[:, order]
    stacked = np.stack(phi.ops)
    # v'_i = sum_j lambda_ij v_j with lambda = W^T diagonalizes the Gram matrix.
    rotated = np.einsum("ji,jab->iab", vecs, stacked)
    cutoff = tol.rel_eps * max(evals[0], 0.0)
    kept = [rotated[i] for i in range(len(phi.ops)) if evals[i] > cutoff]
    return KrausChannel(phi.dim_h, phi.dim_k, kept)


def mix_unitary(phi: KrausChannel, lam, tol: Tolerance = DEFAULT_TOL) -> KrausChannel:
    """Rotate the tuple: v'_i = sum_j lam_ij v_j with lam an r x r unitary."""
    lam = as_complex_matrix(lam)
    r = len(phi.ops)
    if lam.shape != (r, r):
        raise DimensionMismatch(f"mixing matrix has shape {lam.shape}, expected ({r}, {r})")
    defect = float(np.linalg.norm(dagger(lam) @ lam - np.eye(r)))
    if defect > tol.rel_eps * np.sqrt(r):
        raise InvalidInput(f"mixing matrix is not unitary (defect {defect:.3e})")
    stacked = np.stack(phi.ops)
    rotated = np.einsum("ij,jab->iab", lam, stacked)
    return KrausChannel(phi.dim_h, phi.dim_k, list(rotated))


def same_map(phi1: KrausChannel, phi2: KrausChannel, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the two tuples implement the same map, decided at the Choi state."""
    if (phi1.dim_h, phi1.dim_k) != (phi2.dim_h, phi2.dim_k):
        raise DimensionMismatch(
            f"channels act between different spaces: "
            f"({phi1.dim_h}, {phi1.dim_k}) vs ({phi2.dim_h}, {phi2.dim_k})"
        )
    diff = float(np.linalg.norm(choi_state(phi1).mat - choi_state(phi2).mat))
    return diff <= tol.rel_eps * (phi1.dim_h * phi1.dim_k)


def recover_mixing_unitary(
    phi1: KrausChannel, phi2: KrausChannel, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """Solve phi2's tuple = lam @ phi1's tuple for the unitary mixing matrix lam.

    Both tuples must have the same length, be linearly independent, and
    implement the same map.  Least squares on the vectorized operators; the
    result is checked for per-row residual and unitarity.
    """
    if (phi1.dim_h, phi1.dim_k) != (phi2.dim_h, phi2.dim_k):
        raise DimensionMismatch("channels act between different spaces")
    r = len(phi1.ops)
    if len(phi2.ops) != r:
        raise InvalidInput(f"tuple lengths differ: {r} vs {len(phi2.ops)}")
    if rank(phi1, tol) != r or rank(phi2, tol) != r:
        raise InvalidInput("tuples must be linearly independent; reduce_minimal first")
    if not same_map(phi1, phi2, tol):
        raise InvalidInput("tuples implement different maps; no mixing unitary exists")
    m1 = np.stack([v.ravel() for v in phi1.ops])
    m2 = np.stack([v.ravel() for v in phi2.ops])
    sol, _, _, _ = np.linalg.lstsq(m1.T, m2.T, rcond=None)
    lam = sol.T
    resid = float(np.max(np.linalg.norm(m2 - lam @ m1, axis=1)))
    if resid > tol.rel_eps:
        raise NumericalFailure(f"mixing solve left residual {resid:.3e}")
    defect = float(np.linalg.norm(dagger(lam) @ lam - np.eye(r)))
    if defect > tol.rel_eps:
        raise NumericalFailure(f"recovered mixing matrix is not unitary (defect {defect:.3e})")
    return lam


def from_holevo(h: HolevoForm, tol: Tolerance = DEFAULT_TOL) -> KrausChannel:
    """Kraus tuple realizing phi(x) = sum_k tr(omega_k x) e_k.

    Spectrally decomposes each state and effect and emits the rank-one
    operator sqrt(mu_p nu_q) |f_p><g_q| per eigenpair; spectral weights below
    the relative cutoff are dropped.  Unitality holds by construction.
    """
    ops = []
    for w, e in zip(h.omegas, h.effects):
        mu, f = np.linalg.eigh((w + dagger(w)) / 2.0)
        nu, g = np.linalg.eigh((e + dagger(e)) / 2.0)
        mu_keep = mu > tol.rel_eps * max(float(mu[-1]), 0.0)
        nu_keep = nu > tol.rel_eps * max(float(nu[-1]), 0.0)
        for p in np.nonzero(mu_keep)[0]:
            for q in np.nonzero(nu_keep)[0]:
                weight = np.sqrt(mu[p] * nu[q])
                ops.append(weight * np.outer(f[:, p], g[:, q].conj()))
    if not ops:
        raise InvalidInput("Holevo form has no spectral weight above the cutoff")
    return KrausChannel(h.dim_h, h.dim_k, ops)


def depolarizing_holevo(n: int, m: int) -> HolevoForm:
    """Single-term Holevo form with omega = I_m / m and effect I_n.

    The resulting map is x -> (tr x / m) I_n, whose Choi state is maximally
    mixed; a convenient entanglement-breaking reference channel.
    """
    if n < 1 or m < 1:
        raise InvalidInput(f"dimensions must be positive, got n={n}, m={m}")
    return HolevoForm((np.eye(m) / m,), (np.eye(n),))


# ---------------------------------------------------------------------------
# Channel JSON format
#
# {"dim_h": n, "dim_k": m, "kraus": [op, ...]} where each op is a row-major
# flat array of [re, im] pairs of length m*n.  Extra fields (e.g. "seed")
# are preserved by the CLI but ignored on load.
# ---------------------------------------------------------------------------


def channel_to_dict(phi: KrausChannel, seed=None) -> dict:
    """JSON-ready dict in the channel wire format."""
    doc = {
        "dim_h": phi.dim_h,
        "dim_k": phi.dim_k,
        "kraus": [
            [[float(z.real), float(z.imag)] for z in v.ravel()] for v in phi.ops
        ],
    }
    if seed is not None:
        doc["seed"] = {"master_seed": seed.master_seed, "stream_index": seed.stream_index}
    return doc


def channel_from_dict(doc: dict, tol: Tolerance = DEFAULT_TOL) -> KrausChannel:
    """Parse and validate the channel wire format, naming any violated invariant."""
    for key in ("dim_h", "dim_k", "kraus"):
        if key not in doc:
            raise InvalidInput(f"channel document is missing required field '{key}'")
    n, m = doc["dim_h"], doc["dim_k"]
    if not isinstance(n, int) or not isinstance(m, int):
        raise InvalidInput("dim_h and dim_k must be integers")
    raw = doc["kraus"]
    if not isinstance(raw, list) or not raw:
        raise InvalidInput("'kraus' must be a nonempty array of matrices")
    ops = []
    for k, entries in enumerate(raw):
        if not isinstance(entries, list) or len(entries) != m * n:
            raise InvalidInput(
                f"kraus[{k}] must be a row-major array of {m * n} [re, im] pairs"
            )
        try:
            flat = np.array(
                [complex(re, im) for re, im in entries], dtype=np.complex128
            )
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"kraus[{k}] entries must be [re, im] pairs") from exc
        ops.append(flat.reshape(m, n))
    failures = kraus_invariant_violations(n, m, ops, tol)
    if failures:
        raise InvalidInput("channel file violates invariants: " + "; ".join(failures))
    return KrausChannel(n, m, ops)


def dumps_channel(phi: KrausChannel, seed=None) -> str:
    """Canonical serialization: sorted keys, 2-space indent, lossless floats."""
    return json.dumps(channel_to_dict(phi, seed=seed), sort_keys=True, indent=2) + "\n"


def save_channel(phi: KrausChannel, path, seed=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_channel(phi, seed=seed))


def load_channel(path, tol: Tolerance = DEFAULT_TOL) -> KrausChannel:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise InvalidInput("channel file must contain a JSON object")
    return channel_from_dict(doc, tol)
