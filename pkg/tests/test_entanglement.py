"""Separability criteria, channel classification, rank-one certificates."""

import numpy as np
import pytest
from conftest import rand_unit_vector

from channel_dichotomy import (
    BipartiteDensity,
    DimensionMismatch,
    InvalidInput,
    KrausChannel,
    RankOneCertificate,
    VerdictKind,
    choi_state,
    classify_channel,
    depolarizing_holevo,
    from_holevo,
    is_marginally_cyclic,
    kron,
    maximally_entangled_vector,
    mix_unitary,
    output_state,
    ppt_verdict,
    realignment_value,
    schmidt_rank,
    verify_rank_one_certificate,
)
from channel_dichotomy.entanglement import certificate_rows
from channel_dichotomy.sampling import (
    SeedSpec,
    sample_holevo,
    sample_sphere,
    sample_unitary,
    sample_vr,
)


def pure_density(xi, dim_a, dim_b):
    return BipartiteDensity(dim_a, dim_b, np.outer(xi, xi.conj()))


def test_schmidt_rank_cases():
    rng = np.random.default_rng(0)
    eta = rand_unit_vector(rng, 2)
    zeta = rand_unit_vector(rng, 3)
    assert schmidt_rank(np.kron(eta, zeta), 2, 3) == 1
    for n in (2, 3):
        assert schmidt_rank(maximally_entangled_vector(n), n, n) == n
    xi = np.zeros(4, dtype=complex)
    xi[0] = 2 / np.sqrt(5)
    xi[3] = 1 / np.sqrt(5)
    assert schmidt_rank(xi, 2, 2) == 2


def test_schmidt_rank_local_unitary_invariance():
    for t in range(20):
        xi = sample_sphere(4, SeedSpec(20, t))
        u = sample_unitary(2, SeedSpec(21, t))
        w = sample_unitary(2, SeedSpec(22, t))
        rotated = kron(u, w) @ xi
        assert schmidt_rank(rotated, 2, 2) == schmidt_rank(xi, 2, 2)


def test_schmidt_rank_input_validation():
    with pytest.raises(DimensionMismatch):
        schmidt_rank(np.ones(3) / np.sqrt(3), 2, 2)
    with pytest.raises(InvalidInput):
        schmidt_rank(np.ones(4), 2, 2)


def test_marginal_cyclicity():
    assert is_marginally_cyclic(maximally_entangled_vector(2), 2)
    assert is_marginally_cyclic(maximally_entangled_vector(3), 3)
    rng = np.random.default_rng(1)
    eta = rand_unit_vector(rng, 2)
    zeta = rand_unit_vector(rng, 2)
    assert not is_marginally_cyclic(np.kron(eta, zeta), 2)


def test_ppt_verdict_maximally_entangled():
    xi = maximally_entangled_vector(2)
    verdict = ppt_verdict(pure_density(xi, 2, 2))
    assert verdict.kind is VerdictKind.ENTANGLED_NPT
    assert abs(verdict.witness_value + 0.5) <= 1e-12
    assert verdict.criterion == "ppt"


def test_ppt_verdict_maximally_mixed():
    verdict = ppt_verdict(BipartiteDensity(2, 2, np.eye(4) / 4))
    assert verdict.kind is VerdictKind.SEPARABLE_PPT_EXACT
    assert verdict.entangled is False


def test_ppt_verdict_unknown_above_decisive_limit():
    # 3 x 3 maximally mixed: PPT holds but dims are beyond the decisive regime.
    verdict = ppt_verdict(BipartiteDensity(3, 3, np.eye(9) / 9))
    assert verdict.kind is VerdictKind.UNKNOWN
    assert verdict.entangled is None
    assert verdict.criterion == "none"


def test_ppt_verdict_realignment_catches_npt_free_entanglement_direction():
    # Pure entangled state in 3 x 3 is caught by NPT; force the realignment
    # branch by checking a 3 x 3 pure state is flagged entangled, not unknown.
    xi = maximally_entangled_vector(3)
    verdict = ppt_verdict(pure_density(xi, 3, 3))
    assert verdict.entangled is True


def test_realignment_values():
    # Oracle: realign by explicit loops and sum the singular values.
    rho = BipartiteDensity(2, 2, np.eye(4) / 4)
    r = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    r[i * 2 + k, j * 2 + l] = rho.mat[i * 2 + j, k * 2 + l]
    oracle = float(np.sum(np.linalg.svd(r, compute_uv=False)))
    got = realignment_value(rho)
    assert abs(got - oracle) <= 1e-12
    assert got <= 1.0
    assert abs(got - 0.5) <= 1e-12


def test_realignment_maximally_entangled_and_product():
    for d in (2, 3):
        xi = maximally_entangled_vector(d)
        assert abs(realignment_value(pure_density(xi, d, d)) - d) <= 1e-10
    rng = np.random.default_rng(2)
    eta = rand_unit_vector(rng, 2)
    zeta = rand_unit_vector(rng, 3)
    prod = pure_density(np.kron(eta, zeta), 2, 3)
    assert abs(realignment_value(prod) - 1.0) <= 1e-10


def test_classify_channel_identity_and_depolarizing():
    ident = KrausChannel(2, 2, [np.eye(2)])
    assert classify_channel(ident).entangled is True
    dep = from_holevo(depolarizing_holevo(2, 2))
    assert classify_channel(dep).entangled is False


def test_classify_channel_invariant_under_mixing():
    for t in range(20):
        phi = sample_vr(2, 2, 4, SeedSpec(23, t))
        lam = sample_unitary(4, SeedSpec(24, t))
        assert classify_channel(phi).kind == classify_channel(mix_unitary(phi, lam)).kind


def test_holevo_outputs_separable_at_cyclic_vectors():
    # Entanglement-breaking maps give separable outputs at every input.
    for n, m in [(2, 2), (2, 3)]:
        for t in range(10):
            h = sample_holevo(n, m, 1 + t % 3, SeedSpec(25, 100 * n + 10 * m + t))
            phi = from_holevo(h)
            assert classify_channel(phi).entangled is False
            for u in range(5):
                xi = sample_sphere(n * n, SeedSpec(26, 1000 * t + u))
                verdict = ppt_verdict(output_state(phi, xi))
                assert verdict.entangled is False


def test_zero_one_smoke():
    # Small-scale version of the zero-one dichotomy; full size in acceptance.
    for t in range(10):
        r = 1 if t % 2 == 0 else 4
        phi = sample_vr(2, 2, r, SeedSpec(27, t))
        canonical = classify_channel(phi).entangled
        fractions = [
            ppt_verdict(output_state(phi, sample_sphere(4, SeedSpec(28, 100 * t + u)))).entangled
            for u in range(50)
        ]
        assert all(f == canonical for f in fractions)


def test_criteria_never_conflict():
    # No state is NPT and simultaneously certified separable; in 2x2 every
    # PPT state also satisfies the realignment bound.
    for t in range(50):
        phi = sample_vr(2, 2, 4, SeedSpec(29, t))
        rho = choi_state(phi)
        verdict = ppt_verdict(rho)
        value = realignment_value(rho)
        if verdict.kind is VerdictKind.SEPARABLE_PPT_EXACT:
            assert value <= 1.0 + 1e-9


def test_certificate_padded_identity_accepts_rank_one_tuples():
    h = sample_holevo(2, 2, 2, SeedSpec(30))
    phi = from_holevo(h)
    cert = RankOneCertificate.padded_identity(certificate_rows(phi), len(phi.ops))
    assert verify_rank_one_certificate(phi, cert)
    assert classify_channel(phi).entangled is False  # soundness cross-check


def test_certificate_rejects_identity_channel():
    phi = KrausChannel(2, 2, [np.eye(2)])
    cert = RankOneCertificate.padded_identity(certificate_rows(phi), 1)
    assert not verify_rank_one_certificate(phi, cert)


def test_certificate_rejects_non_orthonormal_columns():
    h = sample_holevo(2, 2, 1, SeedSpec(31))
    phi = from_holevo(h)
    q = certificate_rows(phi)
    coeffs = np.zeros((q, len(phi.ops)), dtype=complex)
    coeffs[0, :] = 1.0  # columns neither unit nor orthogonal
    assert not verify_rank_one_certificate(phi, RankOneCertificate(coeffs))


def test_certificate_shape_mismatch_raises():
    phi = KrausChannel(2, 2, [np.eye(2)])
    with pytest.raises(DimensionMismatch):
        verify_rank_one_certificate(phi, RankOneCertificate(np.eye(3)))


def test_verdict_json():
    verdict = ppt_verdict(BipartiteDensity(2, 2, np.eye(4) / 4))
    doc = verdict.to_json_dict()
    assert doc["kind"] == "SeparablePPTExact"
    assert doc["criterion"] == "ppt"
    assert isinstance(doc["witness"], float)
