"""Connected components of GL and orbit-connectivity certificates.

In finite dimension the component of an invertible matrix is captured by a
concrete invariant: the sign of the determinant over the reals, nothing
over the complex numbers. :func:`is_j_surjective` asks whether the block
inclusion ``GL(k) x GL(n-k) -> GL(n)`` hits every component, and
:func:`certify_orbit` produces checkable evidence that ``t P t^-1`` is
connected to ``P``.
"""

import enum
import hashlib
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg as la
from .errors import Breakdown, ImpossibleWitness, ShapeMismatch
from .homotopy import DEFAULT_STEPS, PathBundle, connect_projectors, lift_path
from .projectors import Projector, validate_projector

CERTIFICATE_TOL = 1e-8


class Label(enum.Enum):
    PLUS = "+"
    MINUS = "-"
    TRIVIAL = "trivial"


@dataclass(frozen=True)
class ComponentInvariant:
    field: la.FieldTag
    label: Label


def component_invariant(G):
    """Component label of an invertible matrix.

    Real matrices are labelled by the sign of det; every complex invertible
    gets ``Label.TRIVIAL`` since GL(n, C) is connected.
    """
    G = la.as_matrix(G)
    la.require_square(G)
    la.check_invertible(G)
    fld = la.field_of(G)
    if fld is la.FieldTag.COMPLEX:
        return ComponentInvariant(fld, Label.TRIVIAL)
    sign = np.linalg.slogdet(G)[0]
    return ComponentInvariant(fld, Label.PLUS if sign > 0 else Label.MINUS)


def _empty(field):
    return np.zeros((0, 0), dtype=field.dtype)


def representatives(n, field):
    """One matrix per component of GL(n): ``I`` and, over R, ``diag(-1, 1, ...)``."""
    if n == 0:
        return [_empty(field)]
    reps = [np.eye(n, dtype=field.dtype)]
    if field is la.FieldTag.REAL:
        J = np.eye(n)
        J[0, 0] = -1
        reps.append(J)
    return reps


def j_witness(t, k):
    """Pair ``(x, y)`` in GL(k) x GL(n-k) with ``x ⊕ y`` in the component of `t`.

    The default witness is ``(I_k, I_{n-k})``; a real `t` with negative
    determinant flips the first basis vector of ``x`` (or of ``y`` when
    ``k = 0``).
    """
    t = la.as_matrix(t)
    n = la.require_square(t)
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside [0, {n}]")
    inv = component_invariant(t)
    fld = inv.field
    x = np.eye(k, dtype=fld.dtype)
    y = np.eye(n - k, dtype=fld.dtype)
    if inv.label is Label.MINUS:
        if k >= 1:
            x[0, 0] = -1
        elif n - k >= 1:
            y[0, 0] = -1
        else:
            raise ImpossibleWitness("no block to carry the sign flip")
    return x, y


def _label_of_sum(x, y, field):
    # component label of x ⊕ y without forming the determinant of an empty block
    if field is la.FieldTag.COMPLEX:
        return Label.TRIVIAL
    sign = 1.0
    for block in (x, y):
        if block.shape[0]:
            sign *= np.linalg.slogdet(block)[0]
    return Label.PLUS if sign > 0 else Label.MINUS


def j_image(n, k, field):
    """Component labels of GL(n) reached by ``x ⊕ y`` over all components of the factors."""
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside [0, {n}]")
    return {_label_of_sum(x, y, field)
            for x in representatives(k, field)
            for y in representatives(n - k, field)}


def is_j_surjective(n, k, field):
    """Whether ``GL(k) x GL(n-k) -> GL(n)`` is onto on components.

    Computed by enumerating component representatives of both factors and
    comparing the labels they reach with those of GL(n).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    target = {component_invariant(g).label for g in representatives(n, field)}
    return target <= j_image(n, k, field)


def input_digest(*mats):
    h = hashlib.sha256()
    for M in mats:
        M = np.ascontiguousarray(M)
        h.update(f"{la.field_of(M).value}:{M.shape[0]}x{M.shape[1]};".encode())
        h.update(M.tobytes())
    return h.hexdigest()


@dataclass(frozen=True, eq=False)
class Certificate:
    """Evidence that ``q = t P t^-1`` is (or is not) connected to ``P``.

    A connected certificate carries the lift end ``s`` with
    ``s P s^-1 = q``; ``s^-1 t`` then commutes with ``P``. `bundle` is
    dropped when a certificate is read back from disk.
    """

    outcome: str
    digest: str
    P: np.ndarray
    t: np.ndarray
    q: np.ndarray
    s: Optional[np.ndarray]
    invariant: ComponentInvariant
    cond_t: float
    residuals: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    obstruction: Optional[str] = None
    bundle: Optional[PathBundle] = None

    @property
    def connected(self):
        return self.outcome == "connected"

    def to_dict(self):
        return {
            "outcome": self.outcome,
            "digest": self.digest,
            "field": self.invariant.field.value,
            "invariant": self.invariant.label.value,
            "cond_t": self.cond_t,
            "P": _encode(self.P),
            "t": _encode(self.t),
            "q": _encode(self.q),
            "s": None if self.s is None else _encode(self.s),
            "residuals": dict(self.residuals),
            "tolerances": dict(self.tolerances),
            "obstruction": self.obstruction,
            "samples": None if self.bundle is None else len(self.bundle.lift),
        }

    @classmethod
    def from_dict(cls, d):
        fld = la.FieldTag(d["field"])
        return cls(
            outcome=d["outcome"],
            digest=d["digest"],
            P=_decode(d["P"], fld),
            t=_decode(d["t"], fld),
            q=_decode(d["q"], fld),
            s=None if d["s"] is None else _decode(d["s"], fld),
            invariant=ComponentInvariant(fld, Label(d["invariant"])),
            cond_t=float(d["cond_t"]),
            residuals=dict(d.get("residuals", {})),
            tolerances=dict(d.get("tolerances", {})),
            obstruction=d.get("obstruction"),
        )


def _encode(M):
    if np.iscomplexobj(M):
        return [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return [[float(x) for x in row] for row in M]


def _decode(rows, fld):
    arr = np.array(rows, dtype=float)
    if fld is la.FieldTag.COMPLEX:
        arr = arr[..., 0] + 1j * arr[..., 1]
    return la.as_matrix(arr, fld)


def _orbit_residuals(P, t, q, s):
    w = np.linalg.solve(s, t)
    return {
        "conjugation": la.op_norm(la.conjugate_by(s, P) - q),
        "commutation": la.op_norm(w @ P - P @ w),
    }


def certify_orbit(P, t, tol=CERTIFICATE_TOL, min_steps=DEFAULT_STEPS):
    """Connect ``P`` to its conjugate ``q = t P t^-1`` and certify the result.

    The certificate's ``s`` is the end of the lifted path, so it lies in the
    identity component, satisfies ``s P s^-1 = q``, and ``s^-1 t`` commutes
    with ``P``; both residuals are measured and must be below `tol`. The
    conjugate is re-validated with ten times the tolerance of `P`.

    Raises
    ------
    Singular
    NotIdempotent
        The conjugate fails validation (t too badly conditioned).
    Breakdown
        A residual exceeds `tol`.
    """
    if not isinstance(P, Projector):
        P = validate_projector(P)
    t = la.as_matrix(t)
    fld = la.common_field(P.matrix, t)
    if t.shape != P.matrix.shape:
        raise ShapeMismatch(f"t has shape {t.shape}, P has {P.matrix.shape}")
    la.check_invertible(t)
    q_mat = la.conjugate_by(t, P.matrix)
    Q = validate_projector(q_mat, 10 * P.tol)
    inv = component_invariant(t)
    digest = input_digest(P.matrix, t)
    tolerances = {"certificate": tol, "projector": P.tol, "conjugate": Q.tol}
    common = dict(digest=digest, P=P.matrix, t=t, q=Q.matrix, invariant=inv,
                  cond_t=la.cond(t), tolerances=tolerances)

    if inv.label not in j_image(P.n, P.rank, fld):
        return Certificate(outcome="obstructed", s=None,
                           obstruction=f"component {inv.label.value} of t is not in the image of j",
                           **common)

    bundle = lift_path(connect_projectors(P, Q, min_steps))
    s = bundle.end_intertwiner
    residuals = _orbit_residuals(P.matrix, t, Q.matrix, s)
    residuals["lift"] = bundle.max_residual
    for name in ("conjugation", "commutation"):
        if residuals[name] > tol:
            raise Breakdown(f"{name} residual {residuals[name]:.3e} exceeds {tol:.1e}")
    return Certificate(outcome="connected", s=s, residuals=residuals,
                       bundle=bundle, **common)


def verify_certificate(cert, P=None, t=None):
    """Re-check a certificate; returns ``(ok, checks)``.

    `checks` maps a check name to ``(value, bound, passed)``. When `P` and
    `t` are given, the digest and ``q`` are recomputed from them.
    """
    tol = cert.tolerances.get("certificate", CERTIFICATE_TOL)
    checks = {}
    Pm = cert.P if P is None else la.as_matrix(P)
    tm = cert.t if t is None else la.as_matrix(t)
    checks["digest"] = (0.0, 0.0, input_digest(Pm, tm) == cert.digest)
    q = la.conjugate_by(tm, Pm)
    qerr = la.op_norm(q - cert.q)
    checks["q"] = (qerr, 10 * tol, qerr <= 10 * tol)
    if cert.connected:
        for name, value in _orbit_residuals(Pm, tm, q, cert.s).items():
            checks[name] = (value, tol, value <= tol)
        if la.field_of(cert.s) is la.FieldTag.REAL:
            sign = float(np.linalg.slogdet(cert.s)[0])
            checks["s_identity_component"] = (sign, 0.0, sign > 0)
        if cert.bundle is not None:
            lift = cert.bundle.lift
            n = lift.n
            checks["lift_start"] = (0.0, 0.0, np.array_equal(lift.start, np.eye(n)))
            end_err = la.op_norm(lift.end - cert.s)
            checks["lift_end"] = (end_err, 0.0, end_err == 0.0)
    ok = all(passed for _, _, passed in checks.values())
    return ok, checks
