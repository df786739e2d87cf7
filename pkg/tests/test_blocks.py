import dataclasses

import numpy as np
import pytest

from projpaths import generate
from projpaths import linalg as la
from projpaths.blocks import (splitting_projector, split_connect,
                              split_connect_in_basis, verify_decomposition)
from projpaths.errors import Breakdown, Singular
from projpaths.homotopy import SampledPath

from conftest import FIELDS


def test_block_diagonal_input():
    T = np.diag([2.0, 3.0])
    B = split_connect(T, 1)
    assert all(np.array_equal(M, T) for M in B.path.matrices)
    assert np.array_equal(B.s, np.eye(2))
    np.testing.assert_array_equal(B.A, [[2.0]])
    np.testing.assert_array_equal(B.T2, [[3.0]])


def test_swap():
    T = np.array([[0.0, 1.0], [1.0, 0.0]])
    B = split_connect(T, 1)
    assert la.op_norm(B.bundle.projector_path.end - np.diag([0.0, 1.0])) <= 1e-15
    assert max(B.offdiag_norms()) <= 1e-9
    assert np.all(B.path.det_signs() == -1)
    report = verify_decomposition(B, T)
    assert report.passed, report.lines()


def test_singular():
    with pytest.raises(Singular):
        split_connect(np.diag([1.0, 0.0]), 1)


def test_conditioning_guard():
    K = np.array([[0, 1, 2], [-1, 0, 1], [-2, -1, 0.0]])
    T = np.diag([1e3, 1.0, 1e-3]) @ la.expm_skew(K)
    # conjugate has residual ~3e-14 > 1e-24 * cond(T)
    with pytest.raises(Breakdown):
        split_connect(T, 1, tol=1e-24)


def _random_T(rng, n, field, max_cond=1e3):
    while True:
        T = generate.random_invertible(rng, n, field)
        if la.cond(T) <= max_cond:
            return T


def test_random_decompositions(rng):
    for i in range(150):
        field = FIELDS[i % 2]
        n = int(rng.integers(1, 13))
        k = int(rng.integers(0, n + 1))
        T = _random_T(rng, n, field)
        B = split_connect(T, k)
        tn = la.op_norm(T)
        D = B.final
        assert max(B.offdiag_norms()) <= 1e-8 * tn
        p = splitting_projector(n, k, field)
        assert la.op_norm(D @ p - p @ D) <= 1e-8 * la.op_norm(D)
        assert la.op_norm(B.path.start - T) <= 1e-10 * tn
        assert B.path.sigma_mins().min() > 1e-10
        signs = B.path.det_signs()
        if signs is not None:
            assert np.all(signs == signs[0])
        s = B.s
        q = la.conjugate_by(T, p)
        assert la.op_norm(la.conjugate_by(s, p) - q) <= 1e-8
        assert verify_decomposition(B, T).passed


def test_verify_flags_zeroed_sample(rng):
    T = _random_T(rng, 4, FIELDS[0])
    B = split_connect(T, 2)
    mats = B.path.matrices.copy()
    mats[3] = 0
    bad = dataclasses.replace(B, path=SampledPath(B.path.kind, B.path.times, mats))
    report = verify_decomposition(bad, T)
    assert not report.passed
    assert report.singular_samples == [3]
    assert "sigma_min" in report.failures


def test_verify_flags_tampered_block(rng):
    T = _random_T(rng, 4, FIELDS[0])
    B = split_connect(T, 2)
    bad = dataclasses.replace(B, A=-B.A)
    report = verify_decomposition(bad, T)
    assert not report.passed
    assert "end_blocks" in report.failures


def test_split_in_basis(rng):
    n, k = 5, 2
    T = _random_T(rng, n, FIELDS[0])
    S = generate.random_invertible(rng, n)
    B = split_connect_in_basis(T, S, k)
    D = B.final
    assert max(B.offdiag_norms()) <= 1e-8 * la.op_norm(D)
    # back in the original coordinates the endpoint preserves span(S[:, :k]) and span(S[:, k:])
    Dorig = S @ D @ np.linalg.inv(S)
    proj = S @ splitting_projector(n, k) @ np.linalg.inv(S)
    assert la.op_norm(Dorig @ proj - proj @ Dorig) <= 1e-8 * la.op_norm(Dorig) * la.cond(S) ** 2
    with pytest.raises(Singular):
        split_connect_in_basis(T, np.zeros((n, n)), k)
