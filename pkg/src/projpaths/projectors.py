"""Validated projectors and the pointwise tools built on them.

A :class:`Projector` is an idempotent square matrix together with its rank
and the idempotency residual measured at validation time. The functions
here work one projector (or one pair) at a time:

* :func:`orthogonalize` and :func:`ortho_homotopy` deform a projector to the
  self-adjoint projector with the same range;
* :func:`sznagy_intertwiner` builds Kato's invertible ``U`` with
  ``U P = Q U`` for nearby projectors;
* :func:`conjugator` builds some invertible ``G`` with ``G P = Q G``
  whenever the ranks agree;
* :func:`hopf_family` evaluates the rank-one family ``z z*`` on C^2.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import linalg as la
from .errors import (Breakdown, GapTooLarge, NotIdempotent, NotUnit,
                     RankMismatch, ShapeMismatch)

DEFAULT_TOL = 1e-8
RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Projector:
    matrix: np.ndarray
    rank: int
    residual: float
    tol: float

    def __post_init__(self):
        self.matrix.flags.writeable = False

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def field(self):
        return la.field_of(self.matrix)

    def __eq__(self, other):
        if not isinstance(other, Projector):
            return NotImplemented
        return (self.matrix.dtype == other.matrix.dtype
                and np.array_equal(self.matrix, other.matrix))

    __hash__ = None


def idempotency_residual(M):
    return la.op_norm(M @ M - M)


def validate_projector(M, tol=DEFAULT_TOL):
    """Check that `M` is idempotent within `tol` and wrap it.

    Raises
    ------
    NotSquare
    NotIdempotent
        Carries the measured residual ``||M^2 - M||``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = la.as_matrix(M)
    la.require_square(M)
    res = idempotency_residual(M)
    if res > tol:
        raise NotIdempotent(res, tol)
    return Projector(M.copy(), la.rank_of(M, RANK_TOL), res, tol)


def _trusted(M, tol, rank=None):
    # internal constructor for matrices that are projectors by construction
    if rank is None:
        rank = la.rank_of(M, RANK_TOL)
    return Projector(M, rank, idempotency_residual(M), tol)


def range_basis(M, r):
    """Orthonormal basis of the column space of `M`, assumed to have rank `r`.

    Column-pivoted QR keeps the choice deterministic for a given input.
    """
    if r == 0:
        return np.zeros((M.shape[0], 0), dtype=M.dtype)
    Q, _, _ = scipy.linalg.qr(M, pivoting=True)
    return Q[:, :r]


def orthogonalize(P):
    """The orthogonal projector with the same range as `P`.

    The range basis comes from a rank-revealing SVD of ``P`` itself.
    """
    M = P.matrix
    if P.rank == 0:
        return _trusted(np.zeros_like(M), P.tol, 0)
    U, _, _ = np.linalg.svd(M)
    B = U[:, :P.rank]
    Pp = B @ la.adjoint(B)
    Pp = (Pp + la.adjoint(Pp)) / 2
    return _trusted(Pp, P.tol, P.rank)


def ortho_homotopy(P, s, P_orth=None):
    """Point ``P(s) = P_orth + s (P - P_orth)`` of the straight homotopy.

    ``D = P - P_orth`` squares to zero and ``P_orth D = D``, ``D P_orth = 0``,
    so every ``P(s)`` is idempotent with the rank of `P`. The endpoints are
    returned exactly: ``P(1) is P`` and ``P(0)`` is the orthogonalization.
    """
    if P_orth is None:
        P_orth = orthogonalize(P)
    if s == 1:
        return P
    if s == 0:
        return P_orth
    M = P_orth.matrix + s * (P.matrix - P_orth.matrix)
    return _trusted(M, P.tol, P.rank)


def _check_pair(P, Q):
    la.common_field(P.matrix, Q.matrix)
    if P.n != Q.n:
        raise ShapeMismatch(f"projector sizes differ: {P.n} vs {Q.n}")


def _inv_sqrt_near_identity(R):
    """``(I - R)^(-1/2)`` as a primary matrix function of `R`.

    Binomial series when ``||R|| <= 1/2``; otherwise a Schur square root.
    Either way the result is a function of ``R`` and commutes with anything
    that commutes with ``R``.
    """
    n = R.shape[0]
    eye = np.eye(n, dtype=R.dtype)
    rn = la.op_norm(R)
    if rn <= 0.5:
        out = eye.copy()
        term = eye
        k = 0
        while True:
            k += 1
            # binom(-1/2, k) (-1)^k = prod_{j<k} (2j+1)/(2j+2)
            term = term @ R * ((2 * k - 1) / (2 * k))
            out = out + term
            if np.linalg.norm(term) <= 1e-17:
                return out
    M = eye - R
    lam = np.linalg.eigvals(M)
    if np.any(lam.real <= 0):
        raise Breakdown("I - (P-Q)^2 has an eigenvalue with nonpositive real part")
    S = scipy.linalg.sqrtm(M)
    if la.field_of(R) is la.FieldTag.REAL:
        S = np.real(S)
    return np.linalg.inv(S)


def intertwiner_matrix(P, Q):
    """Kato's intertwiner for raw idempotent arrays; see sznagy_intertwiner."""
    n = P.shape[0]
    eye = np.eye(n, dtype=np.result_type(P, Q))
    diff = P - Q
    gap = la.op_norm(diff)
    if gap >= 1:
        raise GapTooLarge(gap)
    if gap == 0:
        return eye
    R = diff @ diff
    V = Q @ P + (eye - Q) @ (eye - P)
    return V @ _inv_sqrt_near_identity(R)


def sznagy_intertwiner(P, Q):
    """Invertible ``U`` with ``U P = Q U`` for projectors closer than 1.

    With ``R = (P - Q)^2``,

        U = [Q P + (I - Q)(I - P)] (I - R)^(-1/2).

    ``R`` commutes with both projectors, so does the inverse square root,
    and the bracket already intertwines. ``U`` tends to the identity as
    ``Q`` tends to ``P``; for orthogonal projectors it is unitary.

    Raises
    ------
    GapTooLarge
        If ``op_norm(P - Q) >= 1``.
    """
    _check_pair(P, Q)
    return intertwiner_matrix(P.matrix, Q.matrix)


def _adapted_basis(P):
    # columns: range basis, then kernel basis (range of I - P)
    n = P.n
    eye = np.eye(n, dtype=P.matrix.dtype)
    return np.hstack([range_basis(P.matrix, P.rank),
                      range_basis(eye - P.matrix, n - P.rank)])


def conjugator(P, Q):
    """Some invertible ``G`` with ``G P = Q G``.

    ``G`` maps a (range, kernel) basis of `P` onto one of `Q`. Bases come
    from column-pivoted QR so the output is reproducible bit for bit.
    Identical inputs give the identity.

    Raises
    ------
    RankMismatch
        Projectors of different rank are never conjugate in finite
        dimension.
    """
    _check_pair(P, Q)
    if P.rank != Q.rank:
        raise RankMismatch(P.rank, Q.rank)
    if P == Q:
        return np.eye(P.n, dtype=P.matrix.dtype)
    SP = _adapted_basis(P)
    SQ = _adapted_basis(Q)
    # G = SQ SP^{-1}
    return np.linalg.solve(SP.T, SQ.T).T


def hopf_family(z, tol=1e-12):
    """Rank-one orthogonal projector ``x -> <x, z> z`` on C^2, i.e. ``z z*``."""
    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    if z.shape != (2,):
        raise ShapeMismatch("hopf_family expects a vector in C^2")
    norm = np.linalg.norm(z)
    if abs(norm - 1) > tol:
        raise NotUnit(f"|z| = {norm!r} is not 1 within {tol}")
    M = np.outer(z, z.conj())
    return _trusted(M, DEFAULT_TOL, 1)
