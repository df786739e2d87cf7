"""Seeded random test instances.

All randomness goes through numpy's PCG64 bit generator (a 64-bit
permuted congruential generator) seeded with the user's integer, so a seed
determines the output on every platform numpy supports.
"""

import numpy as np

from . import linalg as la

MIN_SIGMA = 0.1


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def random_matrix(rng, n, field=la.FieldTag.REAL):
    if field is la.FieldTag.COMPLEX:
        return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    return rng.standard_normal((n, n))


def random_invertible(rng, n, field=la.FieldTag.REAL, min_sigma=MIN_SIGMA):
    """Gaussian matrix, resampled until its smallest singular value is >= `min_sigma`."""
    while True:
        G = random_matrix(rng, n, field)
        if la.sigma_min(G) >= min_sigma:
            return G


def random_projector(rng, n, rank, field=la.FieldTag.REAL):
    """``G diag(1, .., 1, 0, .., 0) G^-1`` for a random invertible ``G``."""
    if not 0 <= rank <= n:
        raise ValueError(f"rank {rank} outside [0, {n}]")
    G = random_invertible(rng, n, field)
    D = np.diag([1.0] * rank + [0.0] * (n - rank)).astype(field.dtype)
    return la.conjugate_by(G, D)


def random_orthogonal_projector(rng, n, rank, field=la.FieldTag.REAL):
    B = random_matrix(rng, n, field)[:, :rank]
    Q, _ = np.linalg.qr(B)
    return Q @ la.adjoint(Q)


def random_unit_c2(rng):
    z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return z / np.linalg.norm(z)
