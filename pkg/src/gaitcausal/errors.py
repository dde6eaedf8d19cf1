"""Exception taxonomy for the gaitcausal package.

Every error raised deliberately by this package derives from
:class:`GaitCausalError`. Data problems (malformed files, degenerate
geometry, contract violations on inputs) derive from :class:`DataError`;
failures of iterative numerical procedures derive from
:class:`NumericalError`. The CLI maps these onto exit codes.
"""


class GaitCausalError(Exception):
    """Base class for all errors raised by gaitcausal."""


class DataError(GaitCausalError):
    """Invalid or degenerate input data."""


class NumericalError(GaitCausalError):
    """An iterative numerical procedure failed to converge."""


class MalformedAsf(DataError):
    """Syntactically or semantically invalid ASF skeleton file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class MalformedAmc(DataError):
    """Syntactically or semantically invalid AMC motion file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class HeterogeneousSkeletons(DataError):
    """Operation across sequences requires a shared joint set."""


class UnknownJoint(DataError):
    """A named joint does not exist in the skeleton or sequence."""


class DegenerateHeading(DataError):
    """Root trajectory has no usable horizontal displacement."""


class NoCycleDetected(DataError):
    """Gait cycle segmentation found no complete cycle."""


class LagTooLarge(DataError):
    """Requested lag leaves no prediction rows (d >= n)."""


class DimensionMismatch(DataError):
    """Array arguments have incompatible shapes."""


class EmptyDataset(DataError):
    """An operation received no samples."""


class TooFewSamples(DataError):
    """An operation needs more samples than were provided."""


class JaccardUndefined(DataError):
    """Jaccard distance is undefined: both graphs are empty."""


class MissingScatterModel(DataError):
    """Mahalanobis distance requested without a fitted scatter model."""


class CoincidentMedoids(DataError):
    """Two class medoids coincide; Davies-Bouldin ratio undefined."""


class ZeroDiameter(DataError):
    """All class diameters are zero; Dunn index undefined."""


class ZeroResidual(DataError):
    """Residual sum of squares is zero; log-likelihood criteria undefined."""


class NonStationary(DataError):
    """VAR coefficient array defines a non-stationary process."""


class NonConvergence(NumericalError):
    """Coordinate descent exhausted its sweep budget."""


class EigenFailure(NumericalError):
    """Jacobi SVD sweep cap reached before off-diagonal convergence."""
