"""Deterministic graph families for experiments and tests.

Edge lengths are drawn from Uniform[0.5, 2.0) with a seeded generator, so a
given (family, seed) pair always produces the same document; continuous
lengths are rationally independent almost surely, which the averaged
statistics want.
"""

from __future__ import annotations

import numpy as np

from .errors import PreconditionError
from .graph import Edge, MetricGraph

FAMILIES = ("interval", "star", "cycle", "lasso", "glasses", "random_tree", "random")


def gen_graph(family: str, seed: int = 0, n: int = 5, d: int = 3, beta: int = 1) -> MetricGraph:
    rng = np.random.default_rng(seed)

    def lengths(count):
        return rng.uniform(0.5, 2.0, size=count)

    if family == "interval":
        (l,) = lengths(1)
        return MetricGraph([0, 1], [Edge(0, 0, 1, l)])
    if family == "star":
        ls = lengths(d)
        edges = [Edge(i, 0, i + 1, ls[i]) for i in range(d)]
        return MetricGraph(range(d + 1), edges)
    if family == "cycle":
        (l,) = lengths(1)
        return MetricGraph([0], [Edge(0, 0, 0, l)])
    if family == "lasso":
        ls = lengths(2)
        return MetricGraph([0, 1], [Edge(0, 0, 0, ls[0]), Edge(1, 0, 1, ls[1])])
    if family == "glasses":
        ls = lengths(3)
        return MetricGraph([0, 1], [Edge(0, 0, 0, ls[0]), Edge(1, 0, 1, ls[1]), Edge(2, 1, 1, ls[2])])
    if family == "random_tree":
        ls = lengths(n - 1)
        edges = []
        for i in range(1, n):
            parent = int(rng.integers(0, i))
            edges.append(Edge(i - 1, parent, i, ls[i - 1]))
        return MetricGraph(range(n), edges)
    if family == "random":
        ls = lengths(n - 1 + beta)
        edges = []
        for i in range(1, n):
            parent = int(rng.integers(0, i))
            edges.append(Edge(i - 1, parent, i, ls[i - 1]))
        for j in range(beta):
            a, b = int(rng.integers(0, n)), int(rng.integers(0, n))
            edges.append(Edge(n - 1 + j, a, b, ls[n - 1 + j]))
        return MetricGraph(range(n), edges)
    raise PreconditionError(f"unknown family {family!r}; choose from {FAMILIES}")
