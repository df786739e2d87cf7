"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`ProjPathsError`. Errors that describe a mathematical failure of the
input (not a malformed file or bad usage) additionally derive from
:class:`MathError`; the CLI maps those to exit code 1.
"""


class ProjPathsError(Exception):
    """Base class for all library errors."""


class MathError(ProjPathsError):
    """The input is well-formed but the requested object does not exist."""


class FieldMismatch(ProjPathsError):
    """Real and complex matrices were mixed in one computation."""


class NotSquare(ProjPathsError):
    pass


class ShapeMismatch(ProjPathsError):
    pass


class Singular(MathError):
    """Smallest singular value is below the invertibility threshold."""


class NotOrthogonal(MathError):
    pass


class RealDetNegative(MathError):
    """A real orthogonal matrix with det -1 has no real skew logarithm."""


class BranchAmbiguous(MathError):
    """An eigenangle lies within the rejection band around pi."""


class NotPositiveDefinite(MathError):
    pass


class NotIdempotent(MathError):
    def __init__(self, residual, tol):
        super().__init__(
            f"matrix is not idempotent: residual {residual:.3e} > tol {tol:.3e}")
        self.residual = residual
        self.tol = tol


class NotOrthogonalProjector(MathError):
    pass


class NotUnit(MathError):
    pass


class GapTooLarge(MathError):
    """op_norm(P - Q) >= 1, so the Kato intertwiner is not defined."""

    def __init__(self, gap):
        super().__init__(f"projector gap {gap:.6g} is not below 1")
        self.gap = gap


class RankMismatch(MathError):
    def __init__(self, rank_p, rank_q):
        super().__init__(f"rank mismatch: {rank_p} vs {rank_q}")
        self.rank_p = rank_p
        self.rank_q = rank_q


class StepTooLarge(MathError):
    def __init__(self, index, gap):
        super().__init__(
            f"path step {index} -> {index + 1} has gap {gap:.6g} >= 1; refine the path")
        self.index = index
        self.gap = gap


class NotProjectorPath(MathError):
    pass


class RefinementFailed(MathError):
    pass


class Breakdown(MathError):
    """Roundoff made an intermediate object fail validation."""


class ImpossibleWitness(MathError):
    pass


class ParseError(ProjPathsError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
