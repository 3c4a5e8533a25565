"""Eigenfunction analysis: s-points, s-domains, deficiency, genericity.

An s-point of an eigenfunction f is a point where f'(x) = s f(x), the
derivative taken in the edge's fixed orientation (so reversing an edge maps
the s-set to the (-s)-set).  s = inf gives nodal points, s = 0 Neumann
points.  Cutting the graph at the s-set and counting components gives the
number of s-domains nu_s, and the s-deficiency of the n-th eigenfunction is
D_s = n - nu_s.

All root locations are closed-form: on each edge a real eigenfunction is
R cos(kx - phi) and s-points solve tan(kx - phi) = -s/k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateEdgeError, PreconditionError
from .graph import HEAD, MetricGraph, PointOnEdge
from .solver import Eigenpair
from .waves import OSC, EdgeWave

#: points closer to a vertex than this fraction of the edge length are
#: attributed to the vertex and excluded from the interior s-set
VERTEX_SNAP = 1e-9
#: |f| or |f'| below this fraction of the edge sup counts as vanishing
VANISH_TOL = 1e-8


@dataclass(frozen=True)
class RealEdgeForm:
    """Real representation f = c cos(kx) + d sin(kx) on one edge."""

    edge: int
    length: float
    k: float
    c: float
    d: float

    def value(self, x: float) -> float:
        return self.c * math.cos(self.k * x) + self.d * math.sin(self.k * x)

    def derivative(self, x: float) -> float:
        return self.k * (-self.c * math.sin(self.k * x) + self.d * math.cos(self.k * x))

    @property
    def amplitude(self) -> float:
        return math.hypot(self.c, self.d)


def phase_align(graph: MetricGraph, eig: Eigenpair, which: int = 0) -> dict[int, RealEdgeForm]:
    """Rotate an oscillatory eigenvector to a real representative.

    Kernel vectors carry an arbitrary complex phase; the rotation makes the
    largest-magnitude vertex value real positive (falling back to the largest
    coefficient when the function vanishes at every vertex).  The residual
    imaginary part must be negligible, which holds for simple eigenvalues.
    """
    if eig.kind != OSC:
        raise PreconditionError("phase alignment applies to positive-eigenvalue waves")
    waves = eig.waves(graph, which)
    k = eig.kval
    coeffs = {}
    for e in graph.edges:
        w = waves[e.id]
        big_b = w.b * np.exp(1j * k * e.length)
        coeffs[e.id] = (w.a + big_b, 1j * (w.a - big_b))  # (c, d), complex pre-rotation

    vertex_vals = []
    for v in graph.vertices:
        ep = graph.endpoints_at(v)[0]
        w = waves[ep.edge]
        vertex_vals.append(w.valueL() if ep.end == HEAD else w.value0())
    pivot = max(vertex_vals, key=abs)
    if abs(pivot) < 1e-10 * max(abs(z) for cd in coeffs.values() for z in cd):
        pivot = max((z for cd in coeffs.values() for z in cd), key=abs)
    rot = abs(pivot) / pivot

    out = {}
    scale = max(abs(z) for cd in coeffs.values() for z in cd)
    for e in graph.edges:
        c, d = coeffs[e.id][0] * rot, coeffs[e.id][1] * rot
        if max(abs(c.imag), abs(d.imag)) > 1e-7 * max(scale, 1e-300):
            raise PreconditionError(
                f"eigenvector is not real up to a global phase on edge {e.id} "
                "(multiple eigenvalue?)"
            )
        out[e.id] = RealEdgeForm(e.id, e.length, k, c.real, d.real)
    return out


@dataclass(frozen=True)
class SPoint:
    point: PointOnEdge
    value: float
    derivative: float


@dataclass
class SPointSet:
    s: float
    points: list[SPoint]
    snapped_to_vertices: list[PointOnEdge] = field(default_factory=list)
    flagged: list[PointOnEdge] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.points)

    def point_list(self) -> list[PointOnEdge]:
        return [p.point for p in self.points]


def find_s_points(graph: MetricGraph, forms: dict[int, RealEdgeForm], s: float) -> SPointSet:
    """Closed-form enumeration of the s-set of a real eigenfunction.

    Points landing within VERTEX_SNAP of an edge end are attributed to the
    vertex and reported separately, not counted as interior.
    """
    pts: list[SPoint] = []
    snapped: list[PointOnEdge] = []
    flagged: list[PointOnEdge] = []
    global_amp = max(f.amplitude for f in forms.values())
    for e in graph.edges:
        f = forms[e.id]
        if f.amplitude < 1e-12 * global_amp:
            raise DegenerateEdgeError(f"eigenfunction vanishes identically on edge {e.id}")
        k, l = f.k, f.length
        phi = math.atan2(f.d, f.c)  # f = R cos(kx - phi)
        psi0 = 0.5 * math.pi if math.isinf(s) else math.atan2(-s, k)
        # roots at x = (phi + psi0 + m*pi) / k
        m_lo = math.floor((-phi - psi0) / math.pi) - 1
        m_hi = math.ceil((k * l - phi - psi0) / math.pi) + 1
        for m in range(m_lo, m_hi + 1):
            x = (phi + psi0 + m * math.pi) / k
            if x < -VERTEX_SNAP * l or x > l * (1.0 + VERTEX_SNAP):
                continue
            if x < VERTEX_SNAP * l or x > l * (1.0 - VERTEX_SNAP):
                snapped.append(PointOnEdge(e.id, min(max(x, 0.0), l)))
                continue
            val, der = f.value(x), f.derivative(x)
            if not math.isinf(s) and abs(val) < VANISH_TOL * f.amplitude and abs(der) < VANISH_TOL * f.amplitude * k:
                flagged.append(PointOnEdge(e.id, x))
                continue
            pts.append(SPoint(PointOnEdge(e.id, x), val, der))
    pts.sort(key=lambda p: (p.point.edge, p.point.x))
    return SPointSet(s, pts, snapped, flagged)


@dataclass(frozen=True)
class SDomainPartition:
    domains: int
    deficiency: int
    cut_graph: MetricGraph


def partition(graph: MetricGraph, spoints: SPointSet, n: int) -> SDomainPartition:
    """Cut at the s-set; nu_s = number of components, D_s = n - nu_s."""
    cut = graph.cut(spoints.point_list())
    return SDomainPartition(cut.components, n - cut.components, cut.graph)


@dataclass(frozen=True)
class GenericityReport:
    simple: bool
    vertex_data: dict[int, tuple[float, float]]  # v -> (|f(v)|, min side |f'|), deg > 2 only
    verdict: bool


def genericity(graph: MetricGraph, eig: Eigenpair) -> GenericityReport:
    """Simple eigenvalue, and f and f' nonvanishing at vertices of degree > 2."""
    simple = eig.multiplicity == 1
    data: dict[int, tuple[float, float]] = {}
    ok = simple
    if simple and eig.kind == OSC:
        forms = phase_align(graph, eig)
        amp = max(f.amplitude for f in forms.values())
        for v in graph.vertices:
            if graph.degree(v) <= 2:
                continue
            vals, ders = [], []
            for ep in graph.endpoints_at(v):
                f = forms[ep.edge]
                x = f.length if ep.end == HEAD else 0.0
                vals.append(abs(f.value(x)))
                ders.append(abs(f.derivative(x)))
            data[v] = (max(vals), min(ders))
            if max(vals) < VANISH_TOL * amp or min(ders) < VANISH_TOL * amp * eig.kval:
                ok = False
    elif not simple:
        ok = False
    return GenericityReport(simple, data, ok)


def sign_change_count(form: RealEdgeForm, use_derivative: bool, samples: int = 10000) -> int:
    """Brute-force sign-change counter used as an oracle in tests."""
    xs = np.linspace(0.0, form.length, samples)
    vals = np.array([form.derivative(x) if use_derivative else form.value(x) for x in xs])
    signs = np.sign(vals)
    signs = signs[signs != 0]
    return int(np.sum(signs[1:] != signs[:-1]))


def evaluate(wave: EdgeWave, x: float) -> tuple[complex, complex]:
    """(value, oriented derivative) of an edge wave at x."""
    return wave.value(x), wave.derivative(x)
