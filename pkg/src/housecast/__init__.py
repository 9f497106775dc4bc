"""housecast: forecasting engine for U.S. House midterm elections.

Four models (generic ballot, national-polls-plus-district-info, Structure-X,
seats-in-trouble) fitted on post-WWII election fixtures, with Monte Carlo
district simulation, a CLI, and a JSON API for what-if exploration.
"""

__version__ = "0.1.0"
