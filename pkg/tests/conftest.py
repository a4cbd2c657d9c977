"""Shared helpers for the test suite (imported as plain functions)."""

import numpy as np


def rand_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def rand_hermitian(rng, d):
    g = rand_complex(rng, (d, d))
    return (g + g.conj().T) / 2


def rand_psd(rng, d):
    g = rand_complex(rng, (d, d))
    return g @ g.conj().T


def rand_density(rng, d):
    p = rand_psd(rng, d)
    return p / np.trace(p).real


def rand_unit_vector(rng, d):
    z = rand_complex(rng, d)
    return z / np.linalg.norm(z)
