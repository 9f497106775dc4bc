"""The four seat-change forecasting models.

Each model regresses historical House outcomes on a small predictor set and
converts the 2018 prediction into a discrete seat-change distribution via the
regression's t-predictive interval.  All seat changes are reported from the
Republican perspective; the president-party indicator is +1 under a
Republican president and -1 under a Democrat.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .data import (
    HOUSE_SEATS,
    MAJORITY,
    HistoricalElection,
    Party,
    RatingCategory,
    SeatRating,
)
from .regression import RegressionFit, fit_ols, predict_point, predictive_std
from .tdist import student_t_cdf


class ModelError(ValueError):
    """Training data or inputs violate a model's preconditions."""


class ModelId(enum.Enum):
    GENERIC_BALLOT = "generic_ballot"
    NPDI = "npdi"
    STRUCTURE_X = "structure_x"
    SEATS_IN_TROUBLE = "seats_in_trouble"


class InTroubleDefinition(enum.Enum):
    LEAN_OR_WORSE = "lean_or_worse"
    TOSSUP_OR_WORSE = "tossup_or_worse"


@dataclass(frozen=True)
class ForecastInputs:
    """Current-cycle values every model draws from.

    Poll-derived fields (generic_margin_sep, generic_dem_share_early) may be
    None here when the engine has not resolved them from the poll fixture yet;
    each model raises if a field it needs is missing.
    """

    year: int
    president_party: Party
    rep_seats_held: int
    generic_margin_sep: float | None = None
    generic_dem_share_early: float | None = None
    rdi_growth_h1: float | None = None
    approval_june: float | None = None
    disapproval_june: float | None = None
    expert_seat_differential: int | None = None
    use_disapproval: bool = False
    in_trouble_definition: InTroubleDefinition = InTroubleDefinition.LEAN_OR_WORSE
    expert_weight: float = 0.5

    def __post_init__(self):
        if not 0 <= self.rep_seats_held <= HOUSE_SEATS:
            raise ValueError(f"rep_seats_held {self.rep_seats_held} outside [0, {HOUSE_SEATS}]")
        if not 0.0 <= self.expert_weight <= 1.0:
            raise ValueError(f"expert_weight {self.expert_weight} outside [0, 1]")

    @property
    def president_indicator(self) -> float:
        return 1.0 if self.president_party is Party.R else -1.0

    @property
    def is_midterm(self) -> bool:
        # House elections fall on even years; presidential ones divide by 4.
        return self.year % 4 != 0


@dataclass(frozen=True)
class SeatForecast:
    model_id: ModelId
    rep_seat_change_point: float
    predictive_std: float
    degrees_of_freedom: int
    distribution: dict = field(repr=False)
    prob_dem_control: float

    def __post_init__(self):
        total = sum(self.distribution.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"distribution sums to {total}, not 1")
        if not 0.0 <= self.prob_dem_control <= 1.0:
            raise ValueError(f"prob_dem_control {self.prob_dem_control} outside [0, 1]")


def forecast_from_point_spread(model_id, point, spread, degrees_of_freedom,
                               rep_seats_held) -> SeatForecast:
    """Discretize a t-predictive distribution onto integer seat changes.

    P(change = k) integrates the predictive density over [k-0.5, k+0.5],
    truncated to changes that keep Republican seats in [0, 435] and
    renormalized.  A zero spread degenerates to a point mass at the rounded
    point estimate.
    """
    if not 0 <= rep_seats_held <= HOUSE_SEATS:
        raise ValueError(f"rep_seats_held {rep_seats_held} outside [0, {HOUSE_SEATS}]")
    if spread < 0:
        raise ValueError(f"negative predictive spread {spread}")
    lo = -rep_seats_held
    hi = HOUSE_SEATS - rep_seats_held
    if spread == 0.0:
        k = min(max(round(point), lo), hi)
        distribution = {k: 1.0}
    else:
        raw = {}
        for k in range(lo, hi + 1):
            upper = student_t_cdf((k + 0.5 - point) / spread, degrees_of_freedom)
            lower = student_t_cdf((k - 0.5 - point) / spread, degrees_of_freedom)
            raw[k] = upper - lower
        total = sum(raw.values())
        if total <= 0:
            raise ValueError("predictive mass vanished inside the seat range")
        distribution = {k: float(v / total) for k, v in raw.items()}
    control_cut = MAJORITY - 1 - rep_seats_held  # change leaving R at <= 217
    prob_dem = float(sum(p for k, p in distribution.items() if k <= control_cut))
    return SeatForecast(
        model_id=model_id,
        rep_seat_change_point=float(point),
        predictive_std=float(spread),
        degrees_of_freedom=degrees_of_freedom,
        distribution=distribution,
        prob_dem_control=min(prob_dem, 1.0),
    )


def seat_distribution_from_fit(fit: RegressionFit, x, rep_seats_held,
                               model_id) -> SeatForecast:
    point = predict_point(fit, x)
    spread = predictive_std(fit, x)
    return forecast_from_point_spread(model_id, point, spread,
                                      fit.degrees_of_freedom, rep_seats_held)


def _require(row: HistoricalElection, field_name: str):
    value = getattr(row, field_name)
    if value is None:
        raise ModelError(f"training row {row.year} is missing {field_name}")
    return value


def _require_input(inputs: ForecastInputs, field_name: str):
    value = getattr(inputs, field_name)
    if value is None:
        raise ModelError(f"inputs are missing {field_name}")
    return value


def _midterms_before(history, year: int):
    rows = [r for r in history if r.is_midterm and r.year < year]
    if not rows:
        raise ModelError(f"no midterm training rows before {year}")
    return rows


# ----------------------------------------------------------------- model 1 --

def _generic_ballot_fit(history, inputs):
    rows = _midterms_before(history, inputs.year)
    predictors = [
        [r.president_indicator,
         _require(r, "generic_margin_sep"),
         float(_require(r, "rep_seats_held"))]
        for r in rows
    ]
    response = [float(_require(r, "rep_seat_change")) for r in rows]
    fit = fit_ols(predictors, response, include_intercept=True)
    x = [inputs.president_indicator,
         _require_input(inputs, "generic_margin_sep"),
         float(inputs.rep_seats_held)]
    return fit, x


def generic_ballot_forecast(history, inputs) -> SeatForecast:
    """Seat change from the September generic-ballot margin and exposure.

    With-intercept OLS of Republican seat change on the president-party
    indicator, the 60-to-90-day live-poll margin (R minus D), and the number
    of seats Republicans hold, over all prior midterms in the history.
    """
    fit, x = _generic_ballot_fit(history, inputs)
    return seat_distribution_from_fit(fit, x, inputs.rep_seats_held,
                                      ModelId.GENERIC_BALLOT)


# ----------------------------------------------------------------- model 2 --

@dataclass(frozen=True)
class NationalVoteForecast:
    """NPDI step 1: predicted Democratic national House vote, pp from 50."""

    dem_vote_pp: float
    fit: RegressionFit
    predictors: tuple

    @property
    def dem_vote_share(self) -> float:
        return 50.0 + self.dem_vote_pp


def _npdi_rows(history, inputs):
    rows = _midterms_before(history, inputs.year)
    predictors = [
        [r.president_indicator, _require(r, "generic_dem_share_early")]
        for r in rows
    ]
    response = [float(_require(r, "dem_national_vote")) for r in rows]
    return predictors, response


def npdi_national_vote(history, inputs) -> NationalVoteForecast:
    """National two-party vote from early generic-ballot polls, intercept 0.

    No-intercept OLS of the Democratic national House vote (pp from 50) on
    the president-party indicator and the 121-to-180-day live-poll Democratic
    share (pp from 50); the fit is retained for the district simulation.
    """
    predictors, response = _npdi_rows(history, inputs)
    fit = fit_ols(predictors, response, include_intercept=False)
    x = (inputs.president_indicator,
         _require_input(inputs, "generic_dem_share_early"))
    return NationalVoteForecast(
        dem_vote_pp=predict_point(fit, list(x)),
        fit=fit,
        predictors=x,
    )


def npdi_free_intercept(history, inputs) -> float:
    """Intercept of the same regression refit with a free constant term."""
    predictors, response = _npdi_rows(history, inputs)
    fit = fit_ols(predictors, response, include_intercept=True)
    return float(fit.coefficients[0])


# ----------------------------------------------------------------- model 3 --

@dataclass(frozen=True)
class StructuralFit:
    """Structure-X regression plus its 2018 predictor vector."""

    fit: RegressionFit
    predictors: tuple
    rep_seat_change_point: float
    incumbent_sign: float  # +1 when incumbent change equals Republican change


def structure_x_fit_details(history, inputs) -> StructuralFit:
    approval_field = "disapproval_june" if inputs.use_disapproval else "approval_june"
    rows = [r for r in history if r.year < inputs.year]
    if not rows:
        raise ModelError(f"no training rows before {inputs.year}")
    predictors = [
        [_require(r, "rdi_growth_h1"),
         _require(r, approval_field),
         1.0 if r.is_midterm else 0.0]
        for r in rows
    ]
    response = [float(_require(r, "rep_seat_change")) if r.president_party is Party.R
                else -float(_require(r, "rep_seat_change"))
                for r in rows]
    fit = fit_ols(predictors, response, include_intercept=True)
    x = (_require_input(inputs, "rdi_growth_h1"),
         _require_input(inputs, approval_field),
         1.0 if inputs.is_midterm else 0.0)
    incumbent_point = predict_point(fit, list(x))
    sign = inputs.president_indicator
    return StructuralFit(
        fit=fit,
        predictors=x,
        rep_seat_change_point=sign * incumbent_point,
        incumbent_sign=sign,
    )


def structure_x_structural(history, inputs) -> float:
    """Republican seat change from RDI growth, June approval, and midterm
    status, fit on the president's party and sign-converted back."""
    return structure_x_fit_details(history, inputs).rep_seat_change_point


def structure_x_combined(structural, expert_seat_differential, expert_weight,
                         *, predictive_std, degrees_of_freedom,
                         rep_seats_held) -> SeatForecast:
    """Weighted average of the structural forecast and an expert seat
    differential; the spread is inherited from the structural fit because the
    handful of overlapping expert cycles supports no variance estimate."""
    if not 0.0 <= expert_weight <= 1.0:
        raise ValueError(f"expert_weight {expert_weight} outside [0, 1]")
    point = (1.0 - expert_weight) * structural + expert_weight * expert_seat_differential
    return forecast_from_point_spread(ModelId.STRUCTURE_X, point, predictive_std,
                                      degrees_of_freedom, rep_seats_held)


def structure_x_forecast(history, inputs) -> SeatForecast:
    """Full Structure-X: structural regression blended with the expert
    differential at the configured weight."""
    details = structure_x_fit_details(history, inputs)
    spread = predictive_std(details.fit, list(details.predictors))
    return structure_x_combined(
        details.rep_seat_change_point,
        float(_require_input(inputs, "expert_seat_differential")),
        inputs.expert_weight,
        predictive_std=spread,
        degrees_of_freedom=details.fit.degrees_of_freedom,
        rep_seats_held=inputs.rep_seats_held,
    )


# ----------------------------------------------------------------- model 4 --

_LEAN_D_RANK = RatingCategory.LEAN_D.rank
_LEAN_R_RANK = RatingCategory.LEAN_R.rank
_TOSSUP_RANK = RatingCategory.TOSSUP.rank


def _in_play(rating: SeatRating, definition: InTroubleDefinition) -> bool:
    rank = rating.category.rank
    if rating.holder is Party.D:
        threshold = (_LEAN_D_RANK if definition is InTroubleDefinition.LEAN_OR_WORSE
                     else _TOSSUP_RANK)
        return rank >= threshold
    threshold = (_LEAN_R_RANK if definition is InTroubleDefinition.LEAN_OR_WORSE
                 else _TOSSUP_RANK)
    return rank <= threshold


def seats_in_play_differential(ratings, definition: InTroubleDefinition) -> int:
    """Democratic-held seats in play minus Republican-held seats in play.

    A seat is in play when rated at or worse than the definition's threshold
    from its holder's perspective.  Callers pass a single rating source;
    mixing sources would double-count districts.
    """
    dem = sum(1 for r in ratings if r.holder is Party.D and _in_play(r, definition))
    rep = sum(1 for r in ratings if r.holder is Party.R and _in_play(r, definition))
    return dem - rep


_NET_FIELD = {
    InTroubleDefinition.LEAN_OR_WORSE: "net_seats_in_play_lean",
    InTroubleDefinition.TOSSUP_OR_WORSE: "net_seats_in_play_tossup",
}


def seats_in_trouble_forecast(history, ratings, inputs,
                              definition: InTroubleDefinition) -> SeatForecast:
    """Seat change regressed on the net seats-in-play differential alone."""
    net_field = _NET_FIELD[definition]
    rows = [r for r in history if r.year < inputs.year]
    if not rows:
        raise ModelError(f"no training rows before {inputs.year}")
    predictors = [[float(_require(r, net_field))] for r in rows]
    response = [float(_require(r, "rep_seat_change")) for r in rows]
    fit = fit_ols(predictors, response, include_intercept=True)
    net18 = seats_in_play_differential(ratings, definition)
    return seat_distribution_from_fit(fit, [float(net18)], inputs.rep_seats_held,
                                      ModelId.SEATS_IN_TROUBLE)
