"""Deform an invertible matrix to block-diagonal form.

Given ``T`` and a split ``C^n = C^k ⊕ C^(n-k)`` along the leading
coordinates, :func:`split_connect` lifts a projector path from
``p = diag(I_k, 0)`` to ``q = T p T^-1``. If ``u`` is that lift and
``s = u(1)``, then ``s^-1 T`` commutes with ``p``, i.e. it is ``A ⊕ T2``,
and ``t -> u(t)^-1 T`` is a path of invertibles from ``T`` to it.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .errors import Breakdown, NotIdempotent, ShapeMismatch
from .homotopy import DEFAULT_STEPS, PathBundle, PathKind, SampledPath, connect_projectors, lift_path
from .projectors import DEFAULT_TOL, validate_projector

SIGMA_FLOOR = 1e-10
ENDPOINT_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    k: int
    A: np.ndarray
    T2: np.ndarray
    path: SampledPath
    s: np.ndarray
    bundle: PathBundle

    @property
    def final(self):
        return self.path.end

    @property
    def block_diagonal(self):
        return la.block_diag(self.A, self.T2)

    def offdiag_norms(self):
        D, k = self.final, self.k
        return _offdiag(D, k)


def _offdiag(D, k):
    n = D.shape[0]
    if k in (0, n):
        return 0.0, 0.0
    return la.op_norm(D[:k, k:]), la.op_norm(D[k:, :k])


def splitting_projector(n, k, field=la.FieldTag.REAL):
    p = np.zeros((n, n), dtype=field.dtype)
    p[:k, :k] = np.eye(k)
    return p


def split_connect(T, k, tol=DEFAULT_TOL, min_steps=DEFAULT_STEPS):
    """Path of invertibles from `T` to a block-diagonal ``A ⊕ T2``.

    Raises
    ------
    Singular
    Breakdown
        ``T p T^-1`` is not idempotent within ``tol * cond(T)``.
    """
    T = la.as_matrix(T)
    n = la.require_square(T)
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside [0, {n}]")
    la.check_invertible(T)
    fld = la.field_of(T)
    p = validate_projector(splitting_projector(n, k, fld), tol)
    q_tol = tol * max(1.0, la.cond(T))
    try:
        q = validate_projector(la.conjugate_by(T, p.matrix), q_tol)
    except NotIdempotent as exc:
        raise Breakdown(f"conjugated splitting projector failed validation: {exc}") from None

    bundle = lift_path(connect_projectors(p, q, min_steps))
    u = bundle.lift.matrices
    samples = [T] + [np.linalg.solve(uk, T) for uk in u[1:]]
    path = SampledPath(PathKind.INVERTIBLE, bundle.lift.times, np.array(samples), tol)
    D = path.end
    return BlockDecomposition(k, D[:k, :k].copy(), D[k:, k:].copy(), path,
                              bundle.end_intertwiner, bundle)


def split_connect_in_basis(T, basis, k, tol=DEFAULT_TOL, min_steps=DEFAULT_STEPS):
    """:func:`split_connect` for the splitting given by the columns of `basis`.

    The first `k` columns span the distinguished subspace, the rest its
    complement. The decomposition is computed for ``S^-1 T S`` and is
    expressed in the coordinates of `basis`.
    """
    S = la.as_matrix(basis)
    T = la.as_matrix(T)
    la.common_field(S, T)
    if S.shape != T.shape:
        raise ShapeMismatch(f"basis has shape {S.shape}, T has {T.shape}")
    la.check_invertible(S)
    return split_connect(np.linalg.solve(S, T @ S), k, tol, min_steps)


@dataclass
class DecompositionReport:
    passed: bool
    checks: dict = field(default_factory=dict)
    singular_samples: list = field(default_factory=list)

    @property
    def failures(self):
        return [name for name, (_, _, ok) in self.checks.items() if not ok]

    def lines(self):
        out = []
        for name, (value, bound, ok) in self.checks.items():
            out.append(f"{name:<14} {value:.3e}  bound {bound:.1e}  {'ok' if ok else 'FAIL'}")
        if self.singular_samples:
            out.append(f"singular samples: {self.singular_samples}")
        return out


def verify_decomposition(B, T, tol=DEFAULT_TOL):
    """Recompute every residual of a :class:`BlockDecomposition`.

    Never raises on bad data; failures are recorded in the report.
    """
    T = la.as_matrix(T)
    n = T.shape[0]
    k = B.k
    tnorm = max(la.op_norm(T), 1.0)
    path = B.path
    D = path.end
    checks = {}

    def check(name, value, bound):
        checks[name] = (float(value), float(bound), bool(value <= bound))

    check("start", la.op_norm(path.start - T), ENDPOINT_RTOL * tnorm)
    check("end_blocks", la.op_norm(D - B.block_diagonal), tol * tnorm)
    upper, lower = _offdiag(D, k)
    check("offdiag_upper", upper, tol * tnorm)
    check("offdiag_lower", lower, tol * tnorm)
    p = splitting_projector(n, k, la.field_of(D))
    check("commutation", la.op_norm(D @ p - p @ D), tol * max(la.op_norm(D), 1.0))

    sig = path.sigma_mins()
    singular = [int(i) for i in np.flatnonzero(sig <= SIGMA_FLOOR)]
    checks["sigma_min"] = (float(sig.min()), SIGMA_FLOOR, not singular)

    try:
        intertwined = np.linalg.solve(B.s, T)
        check("intertwiner", la.op_norm(intertwined - D), ENDPOINT_RTOL * tnorm * la.cond(B.s))
    except np.linalg.LinAlgError:
        checks["intertwiner"] = (float("inf"), 0.0, False)

    signs = path.det_signs()
    if signs is not None:
        flips = int(np.count_nonzero(signs != signs[0]))
        checks["det_sign"] = (float(flips), 0.0, flips == 0)

    passed = all(ok for _, _, ok in checks.values())
    return DecompositionReport(passed, checks, singular)
