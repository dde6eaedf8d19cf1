"""Configuration record for Granger graph extraction."""

from dataclasses import asdict, dataclass, fields

import numpy as np

_PENALTIES = ("adaptive-lasso", "plain-lasso")


@dataclass(frozen=True)
class GgmConfig:
    """Knobs of the penalized lagged-regression pipeline.

    lag
        Number of past frames used as predictors (model order d).
    lambda_max
        Upper end of the penalty grid.
    cv_folds
        Number of contiguous validation blocks over prediction time points.
    lambda_grid_size
        Number of grid points, log-spaced over [lambda_max*1e-3, lambda_max].
    zero_threshold
        |coefficient| at or below this counts as zero for edge extraction
        and for the parameter count in the information criteria.
    weight_floor
        Lower clamp on the per-block MLE norm before inversion, so weights
        stay finite when a block's MLE estimate vanishes.
    penalty
        "adaptive-lasso" (MLE-derived block weights) or "plain-lasso"
        (all weights one).
    """

    lag: int = 1
    lambda_max: float = 5.0
    cv_folds: int = 5
    lambda_grid_size: int = 20
    zero_threshold: float = 1e-8
    weight_floor: float = 1e-8
    penalty: str = "adaptive-lasso"

    def __post_init__(self):
        if int(self.lag) != self.lag or self.lag < 1:
            raise ValueError("lag must be a positive integer")
        object.__setattr__(self, "lag", int(self.lag))
        if not (self.lambda_max > 0):
            raise ValueError("lambda_max must be positive")
        if int(self.cv_folds) != self.cv_folds or self.cv_folds < 2:
            raise ValueError("cv_folds must be an integer >= 2")
        object.__setattr__(self, "cv_folds", int(self.cv_folds))
        if int(self.lambda_grid_size) != self.lambda_grid_size \
                or self.lambda_grid_size < 1:
            raise ValueError("lambda_grid_size must be a positive integer")
        object.__setattr__(self, "lambda_grid_size",
                           int(self.lambda_grid_size))
        if not (self.zero_threshold > 0):
            raise ValueError("zero_threshold must be positive")
        if not (self.weight_floor > 0):
            raise ValueError("weight_floor must be positive")
        if self.penalty not in _PENALTIES:
            raise ValueError("penalty must be one of %s" % (_PENALTIES,))

    def lambda_grid(self):
        """Penalty grid in descending order (largest first, for warm starts)."""
        if self.lambda_grid_size == 1:
            return np.array([self.lambda_max])
        return np.geomspace(self.lambda_max, self.lambda_max * 1e-3,
                            self.lambda_grid_size)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError("unknown config keys: %s" % sorted(unknown))
        return cls(**d)
