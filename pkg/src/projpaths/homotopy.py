"""Sampled paths of projectors and invertibles.

:func:`connect_projectors` joins two projectors of equal rank through
idempotents, :func:`lift_path` lifts such a path to a path of invertibles
starting at the identity by chaining Kato intertwiners, and
:func:`connect_invertibles` joins two invertibles that lie in the same
component of GL.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import (GapTooLarge, NotOrthogonalProjector, NotProjectorPath,
                     RankMismatch, RefinementFailed, ShapeMismatch,
                     StepTooLarge)
from .projectors import (DEFAULT_TOL, idempotency_residual, intertwiner_matrix,
                         ortho_homotopy, orthogonalize, range_basis)

DEFAULT_ETA = 0.5
DEFAULT_STEPS = 32
MAX_BISECTION_DEPTH = 30
MAX_SEGMENT_SAMPLES = 20000


class PathKind(enum.Enum):
    PROJECTOR = "projector"
    INVERTIBLE = "invertible"


@dataclass(frozen=True, eq=False)
class SampledPath:
    """Samples ``(t_k, M_k)`` of a continuous matrix path on ``[0, 1]``.

    `times` is strictly increasing from exactly 0 to exactly 1 and
    `matrices` has shape ``(len(times), n, n)``.
    """

    kind: PathKind
    times: np.ndarray
    matrices: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        mats = np.asarray(self.matrices)
        if t.ndim != 1 or len(t) < 2:
            raise ShapeMismatch("a path needs at least two samples")
        if mats.ndim != 3 or mats.shape[0] != len(t) or mats.shape[1] != mats.shape[2]:
            raise ShapeMismatch(f"bad sample array shape {mats.shape}")
        if t[0] != 0 or t[-1] != 1 or np.any(np.diff(t) <= 0):
            raise ValueError("path times must increase strictly from 0 to 1")
        t.flags.writeable = False
        mats.flags.writeable = False
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "matrices", mats)

    def __len__(self):
        return len(self.times)

    @property
    def n(self):
        return self.matrices.shape[1]

    @property
    def field(self):
        return la.field_of(self.matrices)

    @property
    def start(self):
        return self.matrices[0]

    @property
    def end(self):
        return self.matrices[-1]

    def gaps(self):
        return np.array([la.op_norm(b - a)
                         for a, b in zip(self.matrices[:-1], self.matrices[1:])])

    def max_gap(self):
        return float(self.gaps().max())

    def idempotency_residuals(self):
        return np.array([idempotency_residual(M) for M in self.matrices])

    def sigma_mins(self):
        return np.array([la.sigma_min(M) for M in self.matrices])

    def det_signs(self):
        """Signs of the real determinants; None for complex paths."""
        if self.field is la.FieldTag.COMPLEX:
            return None
        return np.array([np.linalg.slogdet(M)[0] for M in self.matrices])


@dataclass(frozen=True, eq=False)
class PathBundle:
    """A projector path together with its lift through invertibles.

    ``lift.matrices[k] @ c(0) @ inv(lift.matrices[k])`` reproduces
    ``c(t_k)``; `residuals` holds the measured errors and `tol` the bound
    ``K * 1e-12 * steps`` with ``K = (1 + max ||c_k||) * max cond(u_k)``.
    """

    projector_path: SampledPath
    lift: SampledPath
    residuals: np.ndarray
    tol: float

    @property
    def end_intertwiner(self):
        return self.lift.end

    @property
    def max_residual(self):
        return float(self.residuals.max())

    @property
    def ok(self):
        return self.max_residual <= self.tol


@dataclass(frozen=True)
class Obstruction:
    """Two invertibles lie in different components of GL(n, R)."""

    reason: str
    det_sign_start: int
    det_sign_end: int


def _check_orthogonal_projector(P):
    if la.op_norm(P.matrix - la.adjoint(P.matrix)) > P.tol:
        raise NotOrthogonalProjector("projector is not self-adjoint")


def _rotation_generator(A, B):
    """Skew ``K`` whose exponential turns span(A) onto span(B).

    `A`, `B` are orthonormal n x k bases. ``K`` acts as a rotation by the
    principal angle ``theta_i`` in each plane spanned by a pair of principal
    vectors, so all its eigenangles lie in ``[0, pi/2]``.
    """
    n, k = A.shape
    K = np.zeros((n, n), dtype=np.result_type(A, B))
    if k == 0 or k == n:
        return K
    Uc, sig, Vh = np.linalg.svd(la.adjoint(A) @ B)
    Y0 = A @ Uc
    Y1 = B @ la.adjoint(Vh)
    # component of each target principal vector orthogonal to span(A)
    M = Y1 - A @ (la.adjoint(A) @ Y1)
    norms = np.linalg.norm(M, axis=0)
    thetas = np.arctan2(norms, sig)
    for i in range(k):
        if norms[i] <= 1e-15:
            continue
        y = Y0[:, i:i + 1]
        z = M[:, i:i + 1] / norms[i]
        K += thetas[i] * (z @ la.adjoint(y) - y @ la.adjoint(z))
    return (K - la.adjoint(K)) / 2


def _rotation_between(Pp, Qp):
    if Pp.rank != Qp.rank:
        raise RankMismatch(Pp.rank, Qp.rank)
    A = range_basis(Pp.matrix, Pp.rank)
    B = range_basis(Qp.matrix, Qp.rank)
    return _rotation_generator(A, B)


def subspace_rotation(P_orth, Q_orth):
    """Orthogonal/unitary ``W`` with ``W P_orth W* = Q_orth``.

    ``W`` is the exponential of a skew matrix, so in the real case
    ``det W = +1``. Equal inputs give the identity.

    Raises
    ------
    NotOrthogonalProjector
    RankMismatch
    """
    la.common_field(P_orth.matrix, Q_orth.matrix)
    _check_orthogonal_projector(P_orth)
    _check_orthogonal_projector(Q_orth)
    if P_orth.rank != Q_orth.rank:
        raise RankMismatch(P_orth.rank, Q_orth.rank)
    if P_orth == Q_orth:
        return np.eye(P_orth.n, dtype=P_orth.matrix.dtype)
    return la.expm_skew(_rotation_between(P_orth, Q_orth))


def _refine(f, a, b, va, vb, eta, depth, out):
    if la.op_norm(vb - va) <= eta:
        out.append((b, vb))
        return
    if depth >= MAX_BISECTION_DEPTH:
        raise RefinementFailed(
            f"gap still above {eta} after {MAX_BISECTION_DEPTH} bisections near s={a:.6g}")
    if len(out) >= MAX_SEGMENT_SAMPLES:
        raise RefinementFailed(f"segment needs more than {MAX_SEGMENT_SAMPLES} samples")
    mid = (a + b) / 2
    vm = f(mid)
    _refine(f, a, mid, va, vm, eta, depth + 1, out)
    _refine(f, mid, b, vm, vb, eta, depth + 1, out)


def _sample_segment(f, intervals, eta=None):
    # uniform grid on [0, 1], bisected where consecutive samples are too far apart
    grid = np.linspace(0.0, 1.0, intervals + 1)
    vals = [f(s) for s in grid]
    if eta is None:
        return list(zip(grid, vals))
    out = [(grid[0], vals[0])]
    for i in range(intervals):
        _refine(f, grid[i], grid[i + 1], vals[i], vals[i + 1], eta, 0, out)
    return out


def _join(kind, segments, tol):
    # segment i occupies [i/m, (i+1)/m]; shared endpoints are kept once
    m = len(segments)
    times, mats = [], []
    for i, seg in enumerate(segments):
        for j, (s, M) in enumerate(seg):
            if i > 0 and j == 0:
                continue
            times.append(1.0 if (i == m - 1 and s == 1) else (i + s) / m)
            mats.append(M)
    return SampledPath(kind, np.array(times), np.array(mats), tol)


def _constant_path(kind, M, count, tol):
    count = max(count, 2)
    return SampledPath(kind, np.linspace(0.0, 1.0, count),
                       np.repeat(M[None], count, axis=0), tol)


def connect_projectors(P, Q, min_steps=DEFAULT_STEPS, eta=DEFAULT_ETA):
    """Path of idempotents from `P` to `Q` (equal rank).

    Three segments, each on a third of ``[0, 1]``:

    1. ``P -> P_orth`` along the straight homotopy to the orthogonal
       projector with the same range;
    2. ``P_orth -> Q_orth`` through ``exp(sK) P_orth exp(-sK)`` with ``K``
       the principal-angle rotation generator;
    3. ``Q_orth -> Q`` along the straight homotopy of `Q`.

    Each segment starts on a uniform grid and is bisected in its own
    parameter until consecutive samples are within `eta` in operator norm.
    The first and last samples are `P` and `Q` exactly.

    Raises
    ------
    FieldMismatch
    RankMismatch
    RefinementFailed
    """
    la.common_field(P.matrix, Q.matrix)
    if P.n != Q.n:
        raise ShapeMismatch(f"projector sizes differ: {P.n} vs {Q.n}")
    if P.rank != Q.rank:
        raise RankMismatch(P.rank, Q.rank)
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    tol = max(P.tol, Q.tol)
    if P == Q:
        return _constant_path(PathKind.PROJECTOR, P.matrix, min_steps, tol)

    Pp = orthogonalize(P)
    Qp = orthogonalize(Q)
    K = _rotation_between(Pp, Qp)
    intervals = max(1, math.ceil((max(min_steps, 2) - 1) / 3))

    def down(s):
        return ortho_homotopy(P, 1 - s, Pp).matrix

    def rotate(s):
        if s == 0:
            return Pp.matrix
        if s == 1:
            return Qp.matrix
        E = la.expm_skew(s * K)
        M = E @ Pp.matrix @ la.adjoint(E)
        return (M + la.adjoint(M)) / 2

    def up(s):
        return ortho_homotopy(Q, s, Qp).matrix

    segments = [_sample_segment(f, intervals, eta) for f in (down, rotate, up)]
    return _join(PathKind.PROJECTOR, segments, tol)


def lift_path(c):
    """Lift a projector path to invertibles ``u`` with ``u(0) = I``.

    ``u_{k+1} = U(c_k -> c_{k+1}) u_k`` with ``U`` the Kato intertwiner, so
    ``u_k c_0 u_k^{-1} = c_k`` at every sample.

    Raises
    ------
    NotProjectorPath
        Wrong path kind or a sample that is not idempotent within
        ``c.tol``.
    StepTooLarge
        Some consecutive gap is >= 1; the caller must refine.
    """
    if c.kind is not PathKind.PROJECTOR:
        raise NotProjectorPath(f"expected a projector path, got {c.kind.value}")
    res = c.idempotency_residuals()
    bad = np.flatnonzero(res > c.tol)
    if bad.size:
        raise NotProjectorPath(
            f"sample {bad[0]} is not idempotent (residual {res[bad[0]]:.3e})")
    mats = c.matrices
    u = [np.eye(c.n, dtype=mats.dtype)]
    for k in range(len(c) - 1):
        try:
            U = intertwiner_matrix(mats[k], mats[k + 1])
        except GapTooLarge as exc:
            raise StepTooLarge(k, exc.gap) from None
        u.append(U @ u[-1])
    u = np.array(u)
    residuals = np.array([la.op_norm(la.conjugate_by(uk, mats[0]) - ck)
                          for uk, ck in zip(u, mats)])
    K = (1 + max(la.op_norm(M) for M in mats)) * max(la.cond(uk) for uk in u)
    tol = K * 1e-12 * len(c)
    lift = SampledPath(PathKind.INVERTIBLE, c.times, u, c.tol)
    return PathBundle(c, lift, residuals, tol)


def concatenate(a, b):
    """Path `a` followed by `b`, reparametrized to halves of ``[0, 1]``."""
    if a.kind is not b.kind:
        raise ValueError("cannot concatenate paths of different kinds")
    la.common_field(a.matrices, b.matrices)
    if la.op_norm(a.end - b.start) > max(a.tol, b.tol):
        raise ValueError("paths do not meet")
    times = np.concatenate([a.times / 2, 0.5 + b.times[1:] / 2])
    times[-1] = 1.0
    mats = np.concatenate([a.matrices, b.matrices[1:]])
    return SampledPath(a.kind, times, mats, max(a.tol, b.tol))


def connect_invertibles(G, H, steps=DEFAULT_STEPS):
    """Path of invertibles from `G` to `H`, or an :class:`Obstruction`.

    Both endpoints are contracted through their polar factors to a fixed
    component representative: the identity, or ``J = diag(-1, 1, ..., 1)``
    for real matrices with negative determinant. The positive factor moves
    by ``spd_power`` and the rotation factor along ``exp(sK)``, so every
    sample is invertible and in the real case keeps the sign of det.

    Returns
    -------
    SampledPath or Obstruction
        An obstruction is returned (not raised) when the real determinants
        have opposite signs.

    Raises
    ------
    Singular
    FieldMismatch
    """
    G = la.as_matrix(G)
    H = la.as_matrix(H)
    field = la.common_field(G, H)
    n = la.require_square(G)
    if H.shape != G.shape:
        raise ShapeMismatch(f"shapes differ: {G.shape} vs {H.shape}")
    la.check_invertible(G)
    la.check_invertible(H)
    rep = np.eye(n, dtype=field.dtype)
    if field is la.FieldTag.REAL:
        sg = int(np.linalg.slogdet(G)[0])
        sh = int(np.linalg.slogdet(H)[0])
        if sg != sh:
            return Obstruction("real determinants have opposite signs", sg, sh)
        if sg < 0:
            rep[0, 0] = -1
    if np.array_equal(G, H):
        return _constant_path(PathKind.INVERTIBLE, G, steps, DEFAULT_TOL)

    UG, HG = la.polar(G)
    UH, HH = la.polar(H)
    # rep is an involution, so exp(K) = U rep gives U = exp(K) rep
    KG = la.orthogonal_log(UG @ rep, allow_branch_cut=True)
    KH = la.orthogonal_log(UH @ rep, allow_branch_cut=True)
    intervals = max(1, math.ceil((max(steps, 2) - 1) / 4))

    def shrink_g(s):
        return G if s == 0 else UG @ la.spd_power(HG, 1 - s)

    def rotate_g(s):
        if s == 0:
            return UG
        return rep.copy() if s == 1 else la.expm_skew((1 - s) * KG) @ rep

    def rotate_h(s):
        if s == 1:
            return UH
        return rep.copy() if s == 0 else la.expm_skew(s * KH) @ rep

    def grow_h(s):
        return H if s == 1 else UH @ la.spd_power(HH, s)

    segments = [_sample_segment(f, intervals) for f in (shrink_g, rotate_g, rotate_h, grow_h)]
    return _join(PathKind.INVERTIBLE, segments, DEFAULT_TOL)
