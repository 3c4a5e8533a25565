"""Spectral toolkit for metric-graph Laplacians with delta_s vertex conditions."""

from .conditions import (
    ConditionAssignment,
    VertexCondition,
    alpha_from_s,
    delta,
    delta_prime,
    delta_s,
    evaluate_form,
    family_assignment,
    nk,
    s_from_alpha,
)
from .graph import Edge, MetricGraph, PointOnEdge
from .solver import (
    Eigenpair,
    SpectrumSlice,
    build_S,
    find_eigenvalues,
    full_spectrum,
    l2_normalize,
    negative_spectrum,
    secular,
)
from .waves import EdgeWave

__all__ = [
    "ConditionAssignment",
    "Edge",
    "EdgeWave",
    "Eigenpair",
    "MetricGraph",
    "PointOnEdge",
    "SpectrumSlice",
    "VertexCondition",
    "alpha_from_s",
    "build_S",
    "delta",
    "delta_prime",
    "delta_s",
    "evaluate_form",
    "family_assignment",
    "find_eigenvalues",
    "full_spectrum",
    "l2_normalize",
    "negative_spectrum",
    "nk",
    "s_from_alpha",
    "secular",
]
