"""Balanced packing of unequal circles in a rotating circular container.

Circles are placed one at a time tangent to pairs on the outer ring of the
layout, choosing pairs quadrant by quadrant around the current center of mass;
the container is finally centered on the center of mass, so the imbalance is
zero by construction.
"""

from .geometry import Point
from .harness import InstanceFamily, generate_instance, reference_family, run_batch, summarize
from .layout import CircleSpec, Layout, ProblemInstance, verify_solution
from .permutations import PermutationScheme, sample_permutations
from .solver import Solution, SolverConfig, solve

__all__ = [
    "CircleSpec",
    "InstanceFamily",
    "Layout",
    "PermutationScheme",
    "Point",
    "ProblemInstance",
    "Solution",
    "SolverConfig",
    "generate_instance",
    "reference_family",
    "run_batch",
    "sample_permutations",
    "solve",
    "summarize",
    "verify_solution",
]
