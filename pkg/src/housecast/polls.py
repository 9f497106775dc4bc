"""Generic-ballot poll filtering and window averaging.

Both poll-driven models use only live-interviewer polls, averaged over a
fixed window of days before the election.  Window bounds are inclusive and
measured from each poll's median field date.
"""

from __future__ import annotations

from dataclasses import dataclass

from .data import GenericBallotPoll, PollMethod


class EmptyWindowError(ValueError):
    """No qualifying poll fell inside the requested window."""


@dataclass(frozen=True)
class PollWindow:
    """Inclusive [min_days, max_days] range of days before the election."""

    min_days: int
    max_days: int

    def __post_init__(self):
        if self.min_days < 0:
            raise ValueError(f"min_days must be non-negative, got {self.min_days}")
        if self.max_days < self.min_days:
            raise ValueError(
                f"window is empty: max_days {self.max_days} < min_days {self.min_days}"
            )

    def contains(self, days_before: int) -> bool:
        return self.min_days <= days_before <= self.max_days


def filter_live(polls) -> tuple:
    """Keep only live-interviewer polls, preserving order."""
    return tuple(p for p in polls if p.method is PollMethod.LIVE)


def polls_in_window(polls, window: PollWindow) -> tuple:
    return tuple(p for p in polls if window.contains(p.days_before))


def window_average_margin(polls, window: PollWindow) -> float:
    """Unweighted mean Republican-minus-Democratic margin inside the window.

    Live-only filtering is the caller's job (compose with filter_live); this
    keeps the averaging reusable for any method subset.
    """
    selected = polls_in_window(polls, window)
    if not selected:
        raise EmptyWindowError(
            f"no poll with median field date {window.min_days} to "
            f"{window.max_days} days before the election"
        )
    return sum(p.margin for p in selected) / len(selected)


def window_average_dem_share(polls, window: PollWindow) -> float:
    """Mean Democratic two-party share inside the window, less 50.

    Returned in percentage points from 50, matching the regression scale.
    """
    selected = polls_in_window(polls, window)
    if not selected:
        raise EmptyWindowError(
            f"no poll with median field date {window.min_days} to "
            f"{window.max_days} days before the election"
        )
    mean_share = sum(p.dem_two_party_share for p in selected) / len(selected)
    return mean_share - 50.0
