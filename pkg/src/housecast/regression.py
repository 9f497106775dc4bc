"""Ordinary least squares with Student-t prediction intervals.

The solver goes through a QR decomposition of the design matrix; the inverse
normal matrix needed for predictive variances is recovered from the R factor.
"""

from dataclasses import dataclass

import numpy as np

from .tdist import student_t_quantile

# Reciprocal condition number below this signals collinear predictors.
_RCOND_MIN = 1e-12


class CollinearityError(ValueError):
    """Design matrix is rank deficient (collinear predictors)."""


@dataclass(frozen=True)
class RegressionFit:
    """Immutable OLS fit; coefficients carry the intercept first when present."""

    coefficients: np.ndarray
    include_intercept: bool
    residual_std_error: float
    degrees_of_freedom: int
    r_squared: float
    normal_matrix_inverse: np.ndarray

    @property
    def n_predictors(self) -> int:
        return len(self.coefficients) - (1 if self.include_intercept else 0)


def _augment(x: np.ndarray, include_intercept: bool) -> np.ndarray:
    if include_intercept:
        return np.column_stack([np.ones(x.shape[0]), x])
    return x


def fit_ols(predictors, response, include_intercept: bool = True) -> RegressionFit:
    """Fit y = X b (+ intercept) by least squares.

    Raises CollinearityError on a rank-deficient design and ValueError when
    there are not enough observations to leave at least one residual degree
    of freedom.
    """
    x = np.asarray(predictors, dtype=float)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2:
        raise ValueError("predictors must be a 2-D matrix")
    y = np.asarray(response, dtype=float).ravel()
    n = x.shape[0]
    if y.shape[0] != n:
        raise ValueError(f"response length {y.shape[0]} != {n} rows of predictors")

    design = _augment(x, include_intercept)
    k = design.shape[1]
    if n - k < 1:
        raise ValueError(f"need more than {k} observations, got {n}")

    singular_values = np.linalg.svd(design, compute_uv=False)
    if singular_values[-1] / singular_values[0] < _RCOND_MIN:
        raise CollinearityError(
            "design matrix is rank deficient; predictors are collinear"
        )

    q, r = np.linalg.qr(design)
    coefficients = np.linalg.solve(r, q.T @ y)
    r_inv = np.linalg.solve(r, np.eye(k))
    normal_matrix_inverse = r_inv @ r_inv.T

    residuals = y - design @ coefficients
    rss = float(residuals @ residuals)
    df = n - k
    residual_std_error = np.sqrt(rss / df)

    if include_intercept:
        tss = float(np.sum((y - y.mean()) ** 2))
    else:
        tss = float(y @ y)
    r_squared = 1.0 if tss == 0.0 else 1.0 - rss / tss

    return RegressionFit(
        coefficients=coefficients,
        include_intercept=include_intercept,
        residual_std_error=float(residual_std_error),
        degrees_of_freedom=df,
        r_squared=float(r_squared),
        normal_matrix_inverse=normal_matrix_inverse,
    )


def _augmented_point(fit: RegressionFit, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != fit.n_predictors:
        raise ValueError(
            f"predictor vector has length {x.shape[0]}, fit expects {fit.n_predictors}"
        )
    if fit.include_intercept:
        return np.concatenate([[1.0], x])
    return x


def predict_point(fit: RegressionFit, x) -> float:
    """Fitted value at predictor vector x."""
    return float(_augmented_point(fit, x) @ fit.coefficients)


def predictive_std(fit: RegressionFit, x) -> float:
    """Standard error of a new observation at x (residual + estimation noise)."""
    xa = _augmented_point(fit, x)
    leverage = float(xa @ fit.normal_matrix_inverse @ xa)
    return float(fit.residual_std_error * np.sqrt(1.0 + leverage))


def prediction_interval(fit: RegressionFit, x, level: float):
    """(lo, hi, predictive_std) for a new observation at x.

    The interval is point +/- t(df, (1+level)/2) * predictive_std.
    """
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    point = predict_point(fit, x)
    spread = predictive_std(fit, x)
    t_mult = student_t_quantile(fit.degrees_of_freedom, (1.0 + level) / 2.0)
    return point - t_mult * spread, point + t_mult * spread, spread


def sample_predictive(fit: RegressionFit, x, rng: np.random.Generator) -> float:
    """One draw from the predictive t distribution at x, using the caller's rng."""
    point = predict_point(fit, x)
    spread = predictive_std(fit, x)
    return point + spread * float(rng.standard_t(fit.degrees_of_freedom))
