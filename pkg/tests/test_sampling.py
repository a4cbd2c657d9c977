"""Seeded samplers: distribution sanity, reproducibility, the extremal construction."""

import numpy as np
import pytest

from channel_dichotomy import (
    InvalidInput,
    is_extremal,
    is_marginally_cyclic,
    rank,
    sample_holevo,
    sample_sphere,
    sample_unitary,
    sample_vr,
)
from channel_dichotomy.channel import holevo_invariant_violations, kraus_invariant_violations
from channel_dichotomy.sampling import SeedSpec, make_extremal


def test_seed_spec_validation():
    with pytest.raises(InvalidInput):
        SeedSpec(-1)
    with pytest.raises(InvalidInput):
        SeedSpec(2**64)
    with pytest.raises(InvalidInput):
        SeedSpec(0, -1)
    assert SeedSpec(3).stream(5) == SeedSpec(3, 5)


def test_reproducibility_bit_identical():
    a = sample_vr(2, 3, 2, SeedSpec(99, 4))
    b = sample_vr(2, 3, 2, SeedSpec(99, 4))
    for x, y in zip(a.ops, b.ops):
        assert np.array_equal(x, y)
    assert np.array_equal(sample_sphere(5, SeedSpec(7, 1)), sample_sphere(5, SeedSpec(7, 1)))
    assert not np.array_equal(sample_sphere(5, SeedSpec(7, 1)), sample_sphere(5, SeedSpec(7, 2)))


def test_sample_vr_n1_reduces_to_norms():
    phi = sample_vr(1, 3, 4, SeedSpec(1))
    total = sum(float(np.linalg.norm(v)) ** 2 for v in phi.ops)
    assert abs(total - 1.0) <= 1e-12


def test_sample_vr_rank1_square_is_unitary():
    phi = sample_vr(2, 2, 1, SeedSpec(2))
    v = phi.ops[0]
    assert np.linalg.norm(v.conj().T @ v - np.eye(2)) <= 1e-12
    assert np.linalg.norm(v @ v.conj().T - np.eye(2)) <= 1e-12


def test_sample_vr_unitality_tight():
    for t in range(200):
        phi = sample_vr(2, 2, 4, SeedSpec(3, t))
        acc = sum(v.conj().T @ v for v in phi.ops)
        assert np.linalg.norm(acc - np.eye(2)) <= 1e-12
        assert not kraus_invariant_violations(2, 2, phi.ops)


def test_sample_vr_empty_manifold():
    with pytest.raises(InvalidInput):
        sample_vr(4, 1, 2, SeedSpec(4))


def test_sample_vr_rank_concentration_smoke():
    hits = sum(rank(sample_vr(2, 2, 4, SeedSpec(5, t))) == 4 for t in range(200))
    assert hits == 200


def test_sample_sphere_d1_unimodular():
    z = sample_sphere(1, SeedSpec(6))
    assert abs(abs(z[0]) - 1.0) <= 1e-12


def test_sample_sphere_coordinate_symmetry():
    # Coordinates are exchangeable, so E|<xi, e_1>|^2 = 1/4 at d = 4.
    total = 0.0
    draws = 100_000
    for t in range(draws):
        xi = sample_sphere(4, SeedSpec(8, t))
        total += abs(xi[0]) ** 2
    assert abs(total / draws - 0.25) <= 0.01


def test_sample_sphere_is_marginally_cyclic_generically():
    hits = sum(is_marginally_cyclic(sample_sphere(4, SeedSpec(9, t)), 2) for t in range(1000))
    assert hits == 1000


def test_sample_unitary_is_unitary():
    for t in range(100):
        u = sample_unitary(4, SeedSpec(10, t))
        assert np.linalg.norm(u.conj().T @ u - np.eye(4)) <= 1e-12


def test_sample_unitary_d1_unimodular():
    u = sample_unitary(1, SeedSpec(11))
    assert abs(abs(u[0, 0]) - 1.0) <= 1e-12


def test_sample_unitary_entry_mean_vanishes():
    # Haar symmetry: the distribution of U_11 has zero mean.
    total = 0.0 + 0.0j
    draws = 10_000
    for t in range(draws):
        total += sample_unitary(4, SeedSpec(12, t))[0, 0]
    mean = total / draws
    assert abs(mean.real) <= 0.02
    assert abs(mean.imag) <= 0.02


def _ks_statistic(xs, ys):
    # Two-sample Kolmogorov-Smirnov statistic, max |F1 - F2|.
    xs = np.sort(xs)
    ys = np.sort(ys)
    grid = np.concatenate([xs, ys])
    f1 = np.searchsorted(xs, grid, side="right") / len(xs)
    f2 = np.searchsorted(ys, grid, side="right") / len(ys)
    return float(np.max(np.abs(f1 - f2)))


def test_sample_vr_distribution_invariant_under_left_unitary():
    # tr(v_1* v_1) from one seed block, with every op hit by a fixed W in U(m),
    # against the same statistic from a disjoint block left alone.
    draws = 10_000
    w = sample_unitary(2, SeedSpec(13))
    transformed = np.empty(draws)
    plain = np.empty(draws)
    for t in range(draws):
        phi = sample_vr(2, 2, 2, SeedSpec(14, t))
        transformed[t] = np.trace((w @ phi.ops[0]).conj().T @ (w @ phi.ops[0])).real
        psi = sample_vr(2, 2, 2, SeedSpec(15, t))
        plain[t] = np.trace(psi.ops[0].conj().T @ psi.ops[0]).real
    # 5% critical value for the two-sample KS test
    critical = 1.358 * np.sqrt(2.0 / draws)
    assert _ks_statistic(transformed, plain) < critical


def test_make_extremal_parameter_validation():
    for bad in [(2, 2, 3), (3, 2, 1), (2, 2, 0)]:
        n, m, r = bad
        with pytest.raises(InvalidInput):
            make_extremal(n, m, r)


def test_make_extremal_all_small_cases():
    for n in range(1, 5):
        for m in range(n, 5):
            for r in range(1, n + 1):
                phi = make_extremal(n, m, r)
                acc = sum(v.conj().T @ v for v in phi.ops)
                assert np.linalg.norm(acc - np.eye(n)) <= 1e-12
                assert rank(phi) == r
                assert is_extremal(phi).extremal


def test_make_extremal_222_product_structure():
    # For n = m = r = 2 the span projection is the identity, so the products
    # v_i* v_j are exactly the matrix units |e_i><e_j|.
    phi = make_extremal(2, 2, 2)
    for i in range(2):
        for j in range(2):
            unit = np.zeros((2, 2), dtype=complex)
            unit[i, j] = 1.0
            prod = phi.ops[i].conj().T @ phi.ops[j]
            assert np.max(np.abs(prod - unit)) <= 1e-12


def test_make_extremal_232_structure():
    phi = make_extremal(2, 3, 2)
    acc = sum(v.conj().T @ v for v in phi.ops)
    assert np.linalg.norm(acc - np.eye(2)) <= 1e-12
    assert is_extremal(phi).extremal


def test_sample_holevo_is_valid():
    for t in range(10):
        h = sample_holevo(2, 3, 1 + t % 4, SeedSpec(16, t))
        assert not holevo_invariant_violations(h.omegas, h.effects)
