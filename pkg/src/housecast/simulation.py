"""Monte Carlo seat counts under a sampled national environment.

Each simulation draws one national vote from the fitted predictive
distribution, shifts every contested district uniformly by the swing
against the previous election's national vote, adds independent race
noise, and counts seats.  Probabilities are empirical proportions.
"""

from dataclasses import dataclass

import numpy as np

from .data import MAJORITY, Incumbency, Party
from .models import npdi_national_vote
from .regression import sample_predictive


class SimulationError(ValueError):
    """Raised when a simulation cannot be set up from the given records."""


@dataclass(frozen=True)
class SimulationConfig:
    """Knobs for the district-level simulation.

    sigma_incumbent and sigma_open are race-noise standard deviations in
    two-party points; baseline_weight_house sets the House-vs-presidential
    blend for districts defending an incumbent.
    """

    seed: int
    sigma_incumbent: float
    sigma_open: float
    freshman_surge: float
    baseline_weight_house: float
    n_sims: int = 10000

    def __post_init__(self):
        if self.n_sims < 1:
            raise ValueError(f"n_sims must be at least 1, got {self.n_sims}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")
        if self.sigma_incumbent <= 0.0 or self.sigma_open <= 0.0:
            raise ValueError("race noise standard deviations must be positive")
        # Races with an incumbent on the ballot are the less noisy kind.
        if not self.sigma_incumbent < self.sigma_open:
            raise ValueError(
                f"sigma_incumbent ({self.sigma_incumbent}) must be below "
                f"sigma_open ({self.sigma_open})"
            )
        if self.freshman_surge < 0.0:
            raise ValueError(f"freshman_surge must be >= 0, got {self.freshman_surge}")
        if not 0.0 <= self.baseline_weight_house <= 1.0:
            raise ValueError(
                f"baseline_weight_house must lie in [0, 1], "
                f"got {self.baseline_weight_house}"
            )


@dataclass(frozen=True)
class SimulationResult:
    """Aggregate of one simulation run.

    seat_histogram maps Republican seat change to its empirical
    probability; flip_probability maps district_id to the share of
    simulations where the district left its 2016 winner's party.
    """

    seat_histogram: dict
    mean_change: float
    prob_dem_control: float
    flip_probability: dict

    def __post_init__(self):
        total = sum(self.seat_histogram.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"seat histogram sums to {total!r}, not 1")
        expectation = sum(k * p for k, p in self.seat_histogram.items())
        if abs(expectation - self.mean_change) > 1e-9:
            raise ValueError(
                f"mean_change {self.mean_change!r} disagrees with the "
                f"histogram expectation {expectation!r}"
            )
        if not 0.0 <= self.prob_dem_control <= 1.0:
            raise ValueError(f"prob_dem_control {self.prob_dem_control!r} out of range")


def district_baseline(district, config):
    """Expected 2018 Democratic two-party share, or the conceded winner.

    A district nobody contested in 2016 stays with that winner (a Party is
    returned).  Open seats fall back on the district's presidential vote;
    seats defending an incumbent blend House and presidential performance
    and freshman defenders get a surge toward their party.
    """
    if not district.contested_2016:
        winner = district.conceded_party_2016
        if winner is None:
            raise SimulationError(
                f"district {district.district_id} was uncontested in 2016 "
                "with no identifiable winner"
            )
        return winner
    if district.incumbency_2018 is Incumbency.OPEN:
        return district.dem_pres_share_2016
    if district.dem_house_share_2016 is None:
        raise SimulationError(
            f"district {district.district_id} defends an incumbent but has "
            "no 2016 House share to anchor its baseline"
        )
    w = config.baseline_weight_house
    share = w * district.dem_house_share_2016 + (1.0 - w) * district.dem_pres_share_2016
    if district.freshman:
        if district.incumbency_2018 is Incumbency.DEM_INCUMBENT:
            share += config.freshman_surge
        else:
            share -= config.freshman_surge
    return share


@dataclass(frozen=True)
class _Plan:
    """Per-district arrays precomputed once per run.

    base holds the expected Democratic share (0 where the outcome is
    fixed), sigma the race noise sd (0 where fixed), and fixed_dem the
    winner of every district in the fixed mask.
    """

    base: np.ndarray
    sigma: np.ndarray
    fixed: np.ndarray
    fixed_dem: np.ndarray


def _district_plan(districts, config):
    n = len(districts)
    base = np.zeros(n)
    sigma = np.zeros(n)
    fixed = np.zeros(n, dtype=bool)
    fixed_dem = np.zeros(n, dtype=bool)
    for i, district in enumerate(districts):
        # A race with only one party on the 2018 ballot never simulates,
        # whatever its 2016 history.
        if district.uncontested_2018_winner is not None:
            fixed[i] = True
            fixed_dem[i] = district.uncontested_2018_winner is Party.D
            continue
        outcome = district_baseline(district, config)
        if isinstance(outcome, Party):
            fixed[i] = True
            fixed_dem[i] = outcome is Party.D
            continue
        base[i] = outcome
        if district.incumbency_2018 is Incumbency.OPEN:
            sigma[i] = config.sigma_open
        else:
            sigma[i] = config.sigma_incumbent
    return _Plan(base=base, sigma=sigma, fixed=fixed, fixed_dem=fixed_dem)


def _simulate(plan, national_swing, rng):
    # The noise vector always spans every district so the stream position
    # after a simulation does not depend on which districts are fixed, and
    # a swing shift leaves the draws untouched (common random numbers).
    noise = rng.standard_normal(plan.base.shape[0]) * plan.sigma
    dem_share = plan.base + national_swing + noise
    dem_wins = np.where(plan.fixed, plan.fixed_dem, dem_share > 50.0)
    rep_seats = int(np.count_nonzero(~dem_wins))
    return rep_seats, dem_wins


def simulate_election(districts, national_swing, config, rng):
    """One simulated election at a swing relative to the 2016 baseline.

    Returns (Republican seats won, tuple of per-district winning parties
    in input order).  rng must sit on this simulation's own substream.
    """
    plan = _district_plan(districts, config)
    rep_seats, dem_wins = _simulate(plan, national_swing, rng)
    winners = tuple(Party.D if won else Party.R for won in dem_wins)
    return rep_seats, winners


def _previous_national_vote(history, year):
    for row in history:
        if row.year == year - 2:
            if row.dem_national_vote is None:
                break
            return row.dem_national_vote
    raise SimulationError(
        f"no {year - 2} national vote on record to anchor the swing"
    )


def run_simulations(history, inputs, districts, config):
    """Sample n_sims national environments and simulate each election.

    The swing applied to districts is the sampled national vote minus the
    previous election's national vote.  Every simulation runs on its own
    substream spawned from config.seed, so results do not depend on
    evaluation order.
    """
    vote = npdi_national_vote(history, inputs)
    prior = _previous_national_vote(history, inputs.year)
    plan = _district_plan(districts, config)

    winner16_dem = np.zeros(len(districts), dtype=bool)
    for i, district in enumerate(districts):
        winner = district.winner_2016
        if winner is None and not plan.fixed[i]:
            raise SimulationError(
                f"district {district.district_id} has no 2016 winner to "
                "measure flips against"
            )
        winner16_dem[i] = winner is Party.D

    change_counts = {}
    flip_counts = np.zeros(len(districts), dtype=np.int64)
    dem_control = 0
    for child in np.random.SeedSequence(config.seed).spawn(config.n_sims):
        rng = np.random.default_rng(child)
        draw = sample_predictive(vote.fit, vote.predictors, rng)
        rep_seats, dem_wins = _simulate(plan, draw - prior, rng)
        change = rep_seats - inputs.rep_seats_held
        change_counts[change] = change_counts.get(change, 0) + 1
        flip_counts += dem_wins != winner16_dem
        if rep_seats < MAJORITY:
            dem_control += 1

    n = config.n_sims
    histogram = {change: change_counts[change] / n for change in sorted(change_counts)}
    mean_change = sum(change * p for change, p in histogram.items())
    flip_probability = {
        district.district_id: float(count) / n
        for district, count in zip(districts, flip_counts)
    }
    return SimulationResult(
        seat_histogram=histogram,
        mean_change=mean_change,
        prob_dem_control=dem_control / n,
        flip_probability=flip_probability,
    )
