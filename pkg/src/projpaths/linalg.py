"""Dense matrix kernels over the real or complex field.

Matrices are plain 2-D numpy arrays. The scalar field is carried by the
dtype: ``float64`` is the real field and ``complex128`` the complex one.
Use :func:`as_matrix` to normalize input and :func:`common_field` to check
that the operands of a computation agree.
"""

import enum

import numpy as np
import scipy.linalg

from .errors import (BranchAmbiguous, FieldMismatch, NotOrthogonal,
                     NotPositiveDefinite, NotSquare, RealDetNegative,
                     ShapeMismatch, Singular)

# relative threshold sigma_min / sigma_max under which a matrix is singular
SINGULAR_RTOL = 1e-13
# eigenangles closer than this to pi have no well-defined principal log
BRANCH_BAND = 1e-8


class FieldTag(enum.Enum):
    REAL = "R"
    COMPLEX = "C"

    @property
    def dtype(self):
        return np.float64 if self is FieldTag.REAL else np.complex128


def as_matrix(a, field=None):
    """Return `a` as a finite 2-D float64 or complex128 array.

    If `field` is None the field is inferred: complex dtypes map to
    :attr:`FieldTag.COMPLEX`, everything else to :attr:`FieldTag.REAL`.
    Asking for a real matrix from data with a nonzero imaginary part is a
    :class:`FieldMismatch`.
    """
    arr = np.asarray(a)
    if arr.ndim != 2 or 0 in arr.shape:
        raise ShapeMismatch(f"expected a nonempty 2-D array, got shape {arr.shape}")
    if field is None:
        field = FieldTag.COMPLEX if np.iscomplexobj(arr) else FieldTag.REAL
    if field is FieldTag.REAL and np.iscomplexobj(arr):
        if np.any(arr.imag != 0):
            raise FieldMismatch("complex entries in a real matrix")
        arr = arr.real
    out = np.array(arr, dtype=field.dtype)
    if not np.all(np.isfinite(out)):
        raise ValueError("matrix has non-finite entries")
    return out


def field_of(M):
    return FieldTag.COMPLEX if np.iscomplexobj(M) else FieldTag.REAL


def common_field(*mats):
    """Field shared by all `mats`; raises FieldMismatch when they differ."""
    fields = {field_of(M) for M in mats}
    if len(fields) != 1:
        raise FieldMismatch("real and complex matrices mixed in one computation")
    return fields.pop()


def require_square(M):
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {M.shape}")
    return M.shape[0]


def adjoint(M):
    return M.conj().T


def identity(n, field=FieldTag.REAL):
    return np.eye(n, dtype=field.dtype)


def singular_values(M):
    return np.linalg.svd(M, compute_uv=False)


def op_norm(M):
    """Operator 2-norm, i.e. the largest singular value."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(singular_values(M)[0])


def sigma_min(M):
    return float(singular_values(M)[-1])


def cond(M):
    s = singular_values(M)
    return float(np.inf) if s[-1] == 0 else float(s[0] / s[-1])


def rank_of(M, tol=1e-10):
    """Numerical rank relative to the largest singular value.

    Counts singular values strictly greater than ``tol * sigma_max``. The
    zero matrix has rank 0.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = singular_values(M)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def check_invertible(M, rtol=SINGULAR_RTOL):
    s = singular_values(M)
    if s[0] == 0 or s[-1] <= rtol * s[0]:
        raise Singular(f"matrix is singular (sigma_min={s[-1]:.3e}, sigma_max={s[0]:.3e})")


def polar(M):
    """Polar decomposition ``M = U @ H`` of an invertible square matrix.

    Returns
    -------
    U : ndarray
        Orthogonal (unitary) factor.
    H : ndarray
        Symmetric (Hermitian) positive-definite factor.
    """
    require_square(M)
    W, s, Vh = np.linalg.svd(M)
    if s[0] == 0 or s[-1] <= SINGULAR_RTOL * s[0]:
        raise Singular(f"polar: matrix is singular (sigma_min={s[-1]:.3e})")
    U = W @ Vh
    H = (adjoint(Vh) * s) @ Vh
    H = (H + adjoint(H)) / 2
    return U, H


def _check_unitary(W, tol):
    n = W.shape[0]
    err = op_norm(adjoint(W) @ W - np.eye(n))
    if err > tol:
        raise NotOrthogonal(f"matrix is not orthogonal/unitary (defect {err:.3e})")


def _real_schur_log(W, allow_branch_cut):
    T, Z = scipy.linalg.schur(W, output="real")
    n = W.shape[0]
    K = np.zeros((n, n))
    minus_one = []
    i = 0
    while i < n:
        if i + 1 < n and abs(T[i + 1, i]) > 0:
            # standardized 2x2 block [[a, b], [c, a]] with b*c < 0
            a = (T[i, i] + T[i + 1, i + 1]) / 2
            s = (T[i + 1, i] - T[i, i + 1]) / 2
            theta = np.arctan2(s, a)
            if np.pi - abs(theta) < BRANCH_BAND and not allow_branch_cut:
                raise BranchAmbiguous(f"eigenangle {theta:.12g} is within {BRANCH_BAND} of pi")
            K[i + 1, i] = theta
            K[i, i + 1] = -theta
            i += 2
        else:
            if T[i, i] < 0:
                minus_one.append(i)
            i += 1
    if minus_one:
        if len(minus_one) % 2:
            raise RealDetNegative("real orthogonal matrix with det -1 has no real logarithm")
        if not allow_branch_cut:
            raise BranchAmbiguous("eigenvalue -1 has eigenangle pi")
        # pair the -1 eigenvectors into planes rotated by pi
        for a, b in zip(minus_one[::2], minus_one[1::2]):
            K[b, a] = np.pi
            K[a, b] = -np.pi
    K = Z @ K @ Z.T
    return (K - K.T) / 2


def orthogonal_log(W, allow_branch_cut=False, tol=1e-8):
    """Skew logarithm of an orthogonal or unitary matrix.

    The principal branch is used: eigenangles lie in ``(-pi, pi]``. Inputs
    with an eigenangle within ``BRANCH_BAND`` of pi raise
    :class:`BranchAmbiguous` unless `allow_branch_cut` is set, in which case
    the angle pi is taken (and, in the real case, pairs of -1 eigenvalues
    are joined into half-turn planes).

    Raises
    ------
    NotOrthogonal
        If ``W* W`` differs from the identity by more than `tol`.
    RealDetNegative
        Real input with determinant -1.
    """
    W = np.asarray(W)
    require_square(W)
    _check_unitary(W, tol)
    if field_of(W) is FieldTag.REAL:
        if np.linalg.det(W) < 0:
            raise RealDetNegative("real orthogonal matrix with det -1 has no real logarithm")
        return _real_schur_log(W, allow_branch_cut)
    T, Z = scipy.linalg.schur(W, output="complex")
    angles = np.angle(np.diag(T))
    near_pi = np.pi - np.abs(angles) < BRANCH_BAND
    if np.any(near_pi):
        if not allow_branch_cut:
            raise BranchAmbiguous("eigenangle within the rejection band around pi")
        angles = np.where(near_pi, np.pi, angles)
    K = (Z * (1j * angles)) @ adjoint(Z)
    return (K - adjoint(K)) / 2


def expm(M):
    """General matrix exponential (scaling and squaring, Pade)."""
    return scipy.linalg.expm(M)


def expm_skew(K):
    """Exponential of a skew-symmetric or skew-Hermitian matrix.

    Uses the Hermitian eigendecomposition of ``iK`` so that the result is
    orthogonal/unitary to working precision.
    """
    lam, V = np.linalg.eigh(1j * K)
    E = (V * np.exp(-1j * lam)) @ adjoint(V)
    if field_of(K) is FieldTag.REAL:
        return E.real.copy()
    return E


def spd_power(H, t):
    """Real power ``H**t`` of a symmetric/Hermitian positive-definite matrix."""
    H = np.asarray(H)
    n = require_square(H)
    scale = max(op_norm(H), 1.0)
    if op_norm(H - adjoint(H)) > 1e-10 * scale:
        raise NotPositiveDefinite("matrix is not symmetric/Hermitian")
    if t == 0:
        return np.eye(n, dtype=H.dtype)
    if t == 1:
        return H.copy()
    lam, V = np.linalg.eigh((H + adjoint(H)) / 2)
    if lam[0] <= 0:
        raise NotPositiveDefinite(f"smallest eigenvalue {lam[0]:.3e} is not positive")
    out = (V * lam ** t) @ adjoint(V)
    return (out + adjoint(out)) / 2


def block_diag(A, B):
    """Direct sum ``A ⊕ B``; either block may be 0x0."""
    dtype = np.result_type(A, B)
    k, m = A.shape[0], B.shape[0]
    out = np.zeros((k + m, k + m), dtype=dtype)
    out[:k, :k] = A
    out[k:, k:] = B
    return out


def conjugate_by(G, M):
    """``G @ M @ inv(G)`` computed with a linear solve."""
    GM = G @ M
    # X G = G M  <=>  G^T X^T = (G M)^T
    return np.linalg.solve(G.T, GM.T).T
