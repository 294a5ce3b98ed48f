"""Longest convex chains of random points in a triangle."""
from .chain_solver import (
    Chain,
    ChainInstance,
    is_convex_chain,
    is_convex_position,
    longest_chain_banded,
    longest_chain_brute_force,
    longest_chain_exact,
    longest_chain_length,
)
from .geometry import Parabola, Point, Triangle, standard_triangle
from .sampling import SeedSpec, sample_poisson_triangle, sample_uniform_triangle

__version__ = "0.1.0"
