import numpy as np
import pytest

from projpaths import generate, homotopy
from projpaths import linalg as la
from projpaths.errors import (FieldMismatch, NotOrthogonalProjector,
                              NotProjectorPath, RankMismatch, RefinementFailed,
                              Singular, StepTooLarge)
from projpaths.homotopy import (Obstruction, PathKind, SampledPath, concatenate,
                                connect_invertibles, connect_projectors,
                                lift_path, subspace_rotation)
from projpaths.projectors import validate_projector

from conftest import FIELDS, random_pairs, rotation

E1 = np.diag([1.0, 0.0])
E2 = np.diag([0.0, 1.0])


def test_sampled_path_contract():
    with pytest.raises(ValueError):
        SampledPath(PathKind.PROJECTOR, [0.0, 0.5], np.zeros((2, 2, 2)))
    with pytest.raises(ValueError):
        SampledPath(PathKind.PROJECTOR, [0.0, 0.0, 1.0], np.zeros((3, 2, 2)))


def test_subspace_rotation_examples():
    P, Q = validate_projector(E1), validate_projector(E2)
    assert np.array_equal(subspace_rotation(P, P), np.eye(2))
    W = subspace_rotation(P, Q)
    assert la.op_norm(W @ E1 @ W.T - E2) <= 1e-10
    assert np.linalg.det(W) == pytest.approx(1.0)
    assert min(la.op_norm(W - rotation(np.pi / 2)), la.op_norm(W - rotation(-np.pi / 2))) <= 1e-12
    with pytest.raises(RankMismatch):
        subspace_rotation(P, validate_projector(np.eye(2)))
    with pytest.raises(NotOrthogonalProjector):
        subspace_rotation(validate_projector([[1.0, 1.0], [0.0, 0.0]]), P)


def test_subspace_rotation_random(rng):
    for i in range(200):
        field = FIELDS[i % 2]
        n = int(rng.integers(1, 11))
        r = int(rng.integers(0, n + 1))
        P = validate_projector(generate.random_orthogonal_projector(rng, n, r, field))
        Q = validate_projector(generate.random_orthogonal_projector(rng, n, r, field))
        W = subspace_rotation(P, Q)
        assert la.op_norm(W @ P.matrix @ W.conj().T - Q.matrix) <= 1e-10
        assert la.op_norm(W.conj().T @ W - np.eye(n)) <= 1e-12
        if field is la.FieldTag.REAL:
            assert np.linalg.det(W) > 0


def test_connect_constant_path():
    P = validate_projector(E1)
    c = connect_projectors(P, P, min_steps=7)
    assert len(c) == 7
    assert all(np.array_equal(M, E1) for M in c.matrices)


def test_connect_complementary_pair():
    c = connect_projectors(validate_projector(E1), validate_projector(E2), min_steps=16)
    assert len(c) >= 16
    assert c.idempotency_residuals().max() <= 1e-12
    assert c.max_gap() <= 0.5
    assert np.array_equal(c.start, E1) and np.array_equal(c.end, E2)
    # every sample is an orthogonal projector of rank 1
    for M in c.matrices:
        assert la.op_norm(M - M.T) <= 1e-15 and abs(np.trace(M) - 1) <= 1e-14


def test_connect_errors():
    with pytest.raises(RankMismatch):
        connect_projectors(validate_projector(E1), validate_projector(np.zeros((2, 2))))
    with pytest.raises(FieldMismatch):
        connect_projectors(validate_projector(E1), validate_projector(E2.astype(complex)))


def test_connect_and_lift_random(rng):
    for P, Q in random_pairs(rng, 500):
        P, Q = validate_projector(P), validate_projector(Q)
        c = connect_projectors(P, Q)
        assert len(c) >= homotopy.DEFAULT_STEPS
        assert c.idempotency_residuals().max() <= 1e-10
        assert c.max_gap() <= homotopy.DEFAULT_ETA
        assert np.array_equal(c.start, P.matrix) and np.array_equal(c.end, Q.matrix)
        b = lift_path(c)
        assert np.array_equal(b.lift.start, np.eye(P.n))
        assert b.max_residual <= 1e-8
        assert b.ok


def test_refinement_inserts_native_midpoints():
    # strongly oblique projector: its straight segment is long
    P = validate_projector([[1.0, 40.0], [0.0, 0.0]])
    Q = validate_projector(E2)
    c = connect_projectors(P, Q, min_steps=4)
    assert len(c) > 4
    assert c.max_gap() <= 0.5
    assert c.idempotency_residuals().max() <= 1e-10


def test_refinement_failure(monkeypatch):
    monkeypatch.setattr(homotopy, "MAX_BISECTION_DEPTH", 2)
    with pytest.raises(RefinementFailed):
        connect_projectors(validate_projector([[1.0, 1e3], [0.0, 0.0]]),
                           validate_projector(E1), min_steps=2)


def test_lift_constant_path():
    P = validate_projector(E1)
    b = lift_path(connect_projectors(P, P, min_steps=5))
    assert all(np.array_equal(u, np.eye(2)) for u in b.lift.matrices)


def test_lift_rotation_path():
    ts = np.linspace(0, 1, 33)
    mats = np.array([rotation(t * np.pi / 4) @ E1 @ rotation(t * np.pi / 4).T for t in ts])
    b = lift_path(SampledPath(PathKind.PROJECTOR, ts, mats))
    assert b.max_residual <= 1e-10
    u1 = b.end_intertwiner
    assert la.op_norm(u1 @ E1 @ np.linalg.inv(u1) - mats[-1]) <= 1e-10
    # orthogonal path: the lift is the rotation itself
    assert la.op_norm(u1 - rotation(np.pi / 4)) <= 1e-10


def test_lift_errors():
    two = SampledPath(PathKind.PROJECTOR, [0.0, 1.0], np.array([E1, E2]))
    with pytest.raises(StepTooLarge) as err:
        lift_path(two)
    assert err.value.index == 0
    with pytest.raises(NotProjectorPath):
        lift_path(SampledPath(PathKind.INVERTIBLE, [0.0, 1.0], np.array([np.eye(2)] * 2)))
    bad = SampledPath(PathKind.PROJECTOR, [0.0, 1.0], np.array([E1, np.eye(2) * 0.5]))
    with pytest.raises(NotProjectorPath):
        lift_path(bad)


def test_lift_composition_law(rng):
    for i in range(40):
        field = FIELDS[i % 2]
        n = int(rng.integers(2, 8))
        r = int(rng.integers(0, n + 1))
        P, Q, S = (validate_projector(generate.random_projector(rng, n, r, field)) for _ in range(3))
        a, b = connect_projectors(P, Q), connect_projectors(Q, S)
        whole = lift_path(concatenate(a, b)).end_intertwiner
        parts = lift_path(b).end_intertwiner @ lift_path(a).end_intertwiner
        assert la.op_norm(whole - parts) <= 1e-9 * max(1.0, la.op_norm(parts))


def test_connect_invertibles_examples():
    G = np.eye(2)
    c = connect_invertibles(G, G.copy())
    assert all(np.array_equal(M, G) for M in c.matrices)
    c = connect_invertibles(np.eye(2), np.diag([1.0, 2.0]))
    assert np.all(np.array([np.linalg.det(M) for M in c.matrices]) > 0)
    assert np.array_equal(c.start, np.eye(2)) and np.array_equal(c.end, np.diag([1.0, 2.0]))
    obs = connect_invertibles(np.eye(2), np.diag([-1.0, 1.0]))
    assert isinstance(obs, Obstruction)
    assert (obs.det_sign_start, obs.det_sign_end) == (1, -1)
    with pytest.raises(Singular):
        connect_invertibles(np.eye(2), E1)
    with pytest.raises(FieldMismatch):
        connect_invertibles(np.eye(2), np.eye(2, dtype=complex))


def test_connect_invertibles_through_half_turns():
    # polar factors with eigenvalue -1 sit on the branch cut of the log
    G = np.diag([-1.0, -1.0, 2.0])
    H = np.diag([-3.0, 1.0, -1.0])
    c = connect_invertibles(G, H)
    assert np.all(c.det_signs() == 1)
    assert c.sigma_mins().min() > 1e-12
    assert np.array_equal(c.start, G) and np.array_equal(c.end, H)


def test_connect_invertibles_random(rng):
    for i in range(200):
        field = FIELDS[i % 2]
        n = int(rng.integers(1, 9))
        G = generate.random_invertible(rng, n, field)
        H = generate.random_invertible(rng, n, field)
        c = connect_invertibles(G, H)
        if field is la.FieldTag.REAL and np.sign(np.linalg.det(G)) != np.sign(np.linalg.det(H)):
            assert isinstance(c, Obstruction)
            continue
        assert c.kind is PathKind.INVERTIBLE
        assert np.array_equal(c.start, G) and np.array_equal(c.end, H)
        assert c.sigma_mins().min() > 1e-12
        signs = c.det_signs()
        if signs is not None:
            assert np.all(signs == signs[0])
        # consecutive samples stay close: the path is continuous at this resolution
        assert c.max_gap() <= 2 * max(la.op_norm(G), la.op_norm(H), 1.0)
