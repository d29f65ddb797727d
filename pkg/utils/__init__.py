"""
Stateless helpers: PRNG, DFT sums, parallel reductions, numbers and guards.
"""
from .dft import autocorrelation, exponential_sum, grid_sums, grid_sums_2d
from .feasibility import guard, guard_u_norm
from .numbers import centered, circle_distance, continued_fraction, convergents, to_fraction
from .parallel import chunked_sum, ordered_map, tree_sum
from .prng import SplitMix64, trial_seeds

__all__ = [
    "autocorrelation",
    "exponential_sum",
    "grid_sums",
    "grid_sums_2d",
    "guard",
    "guard_u_norm",
    "centered",
    "circle_distance",
    "continued_fraction",
    "convergents",
    "to_fraction",
    "chunked_sum",
    "ordered_map",
    "tree_sum",
    "SplitMix64",
    "trial_seeds",
]
