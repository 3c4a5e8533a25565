"""Generalized two-sided Dirichlet-to-Neumann (Robin) map on a marked set.

Cutting the graph at a set B of degree-1/2 points partitions it into
domains.  On each domain, the boundary value problem -u'' = c u with
prescribed gamma^s data on the boundary copies and Neumann-Kirchhoff
conditions elsewhere has a unique solution away from the hard-condition
spectrum; the domain map reads off the gamma^{s*} data of that solution.
The assembled map weights every boundary copy by chi = +1 when the copy
keeps the arriving edge end (orientation points into the vertex) and -1
when it keeps the departing end, which realizes

    Lambda_s(c) gamma^s(f) = gamma_1^{s*}(f) - gamma_2^{s*}(f)

on ell^2(B).  The matrix is real symmetric; -t is one of its eigenvalues
exactly when c is an eigenvalue of the delta_s(t) operator on B, which is
the module's master consistency oracle.

Boundary-value solves reuse the closed-form edge bases of the spectral
solver (no meshing); negative c switches to the decaying-exponential basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResonanceError, UnsupportedDegreeError
from .graph import HEAD, MetricGraph
from .solver import _basis_functionals
from .waves import EXP, LIN, OSC

#: eigenvalues of the assembled matrix within this tolerance of zero count
#: into the nullity rather than either index
INDEX_TOL = 1e-7


@dataclass(frozen=True)
class BoundaryIncidence:
    """One side of a marked point as seen from its domain."""

    point: int          # original vertex id in the uncut graph
    copy: int           # vertex id in the cut graph
    end: str            # HEAD (side 1) or TAIL (side 2)
    chi: int            # +1 for HEAD, -1 for TAIL
    domain: int


@dataclass
class DomainDecomposition:
    base: MetricGraph
    points: list[int]                   # B, in matrix order
    cut_graph: MetricGraph
    domains: list[MetricGraph]
    incidences: list[BoundaryIncidence]

    def domain_incidences(self, i: int) -> list[BoundaryIncidence]:
        return [inc for inc in self.incidences if inc.domain == i]


def decompose(graph: MetricGraph, points: list[int]) -> DomainDecomposition:
    """Cut at B and group the pieces into domains with chi weights.

    ``points`` are vertex ids of degree one or two (interior points must be
    subdivided into artificial vertices first).  Matrix order is the sorted
    order of these ids, which for subdivision-created vertices follows
    (edge id, x).
    """
    points = sorted(points)
    deg2 = []
    incidences: list[BoundaryIncidence] = []
    for p in points:
        d = graph.degree(p)
        if d > 2:
            raise UnsupportedDegreeError(f"marked point {p} has degree {d}; only degree <= 2 is defined")
        if d == 2:
            deg2.append(p)
    cut = graph.cut(deg2)
    labels = cut.graph.component_labels()
    for p in points:
        if graph.degree(p) == 1:
            ep = graph.endpoints_at(p)[0]
            incidences.append(
                BoundaryIncidence(p, p, ep.end, +1 if ep.end == HEAD else -1, labels[p])
            )
        else:
            for ep, copy in cut.copies[p]:
                incidences.append(
                    BoundaryIncidence(p, copy, ep.end, +1 if ep.end == HEAD else -1, labels[copy])
                )
    n_domains = cut.graph.component_count()
    domains = []
    for i in range(n_domains):
        vs = [v for v in cut.graph.vertices if labels[v] == i]
        vset = set(vs)
        es = [e for e in cut.graph.edges if e.tail in vset]
        domains.append(MetricGraph(vs, es))
    incidences.sort(key=lambda inc: (inc.domain, inc.point, inc.end))
    return DomainDecomposition(graph, points, cut.graph, domains, incidences)


def _solve_domain(domain: MetricGraph, incs: list[BoundaryIncidence], alpha: float, c: float,
                  rhs_points: list[int]) -> np.ndarray:
    """gamma^{s*} responses of one domain.

    Returns a matrix G with G[i, j] = gamma^{s*} at incidence i of the
    solution whose gamma^s data is 1 at point rhs_points[j] (applied to all
    copies of that point inside this domain) and 0 at the other points.
    """
    if c > 0.0:
        kind, kval = OSC, math.sqrt(c)
    elif c < 0.0:
        kind, kval = EXP, math.sqrt(-c)
    else:
        kind, kval = LIN, 0.0
    n = 2 * domain.E
    col = {e.id: 2 * i for i, e in enumerate(domain.edges)}
    fun = {e.id: _basis_functionals(kind, kval, e.length) for e in domain.edges}
    ca, sa = math.cos(alpha), math.sin(alpha)

    def endpoint_rows(ep):
        v0, vL, d0, dL = fun[ep.edge]
        value = np.zeros(n)
        deriv = np.zeros(n)  # oriented d/dx at the endpoint
        j = col[ep.edge]
        if ep.end == HEAD:
            value[j:j + 2] = vL
            deriv[j:j + 2] = dL
        else:
            value[j:j + 2] = v0
            deriv[j:j + 2] = d0
        return value, deriv

    copy_of = {inc.copy: inc for inc in incs}
    rows = []
    rhs_rows = []
    trace_rows = []
    for v in domain.vertices:
        eps = domain.endpoints_at(v)
        inc = copy_of.get(v)
        if inc is not None:
            value, deriv = endpoint_rows(eps[0])
            rows.append(ca * value - sa * deriv)  # gamma^s(u) = w_p
            rhs_rows.append((len(rows) - 1, inc.point))
            continue
        vals, outs = [], []
        for ep in eps:
            value, deriv = endpoint_rows(ep)
            vals.append(value)
            outs.append(deriv if ep.end == "tail" else -deriv)
        for i in range(len(eps) - 1):
            rows.append(vals[i] - vals[i + 1])
        rows.append(sum(outs))
    M = np.array(rows)
    rhs = np.zeros((n, len(rhs_points)))
    for row, p in rhs_rows:
        j = rhs_points.index(p)
        rhs[row, j] = 1.0

    scale = np.linalg.norm(M, ord=np.inf)
    u, s, vt = np.linalg.svd(M)
    if s[-1] < 1e-12 * s[0]:
        raise ResonanceError(
            f"c={c} lies in (or numerically at) the hard-condition spectrum of a domain"
        )
    X = np.linalg.solve(M, rhs)

    for inc in incs:
        ep = domain.endpoints_at(inc.copy)[0]
        value, deriv = endpoint_rows(ep)
        trace_rows.append(sa * value + ca * deriv)  # gamma^{s*}
    return np.array(trace_rows) @ X


@dataclass
class RobinMapMatrix:
    """Real symmetric |B| x |B| Robin map with index accessors."""

    matrix: np.ndarray
    points: list[int]
    alpha: float
    c: float

    def symmetry_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.T)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.T))

    def indices(self, tol: float = INDEX_TOL) -> tuple[int, int, int]:
        """(Morse, positive count, nullity), signs taken with tolerance."""
        ev = self.eigenvalues()
        cut = tol * max(1.0, float(np.max(np.abs(ev))) if ev.size else 1.0)
        mor = int(np.sum(ev < -cut))
        pos = int(np.sum(ev > cut))
        return mor, pos, len(ev) - mor - pos


def domain_map(decomp: DomainDecomposition, i: int, alpha: float, c: float) -> tuple[np.ndarray, list[BoundaryIncidence]]:
    """Per-domain gamma^s -> gamma^{s*} response matrix over the domain's boundary copies."""
    incs = decomp.domain_incidences(i)
    pts = sorted({inc.point for inc in incs})
    G = _solve_domain(decomp.domains[i], incs, alpha, c, pts)
    return G, incs


def assemble(graph: MetricGraph, points: list[int], alpha: float, c: float) -> RobinMapMatrix:
    """Weighted block sum of the domain maps over ell^2(B)."""
    decomp = decompose(graph, points)
    return assemble_from(decomp, alpha, c)


def assemble_from(decomp: DomainDecomposition, alpha: float, c: float) -> RobinMapMatrix:
    pts = decomp.points
    index = {p: j for j, p in enumerate(pts)}
    mat = np.zeros((len(pts), len(pts)))
    for i in range(len(decomp.domains)):
        incs = decomp.domain_incidences(i)
        if not incs:
            continue
        dom_pts = sorted({inc.point for inc in incs})
        G = _solve_domain(decomp.domains[i], incs, alpha, c, dom_pts)
        for r, inc in enumerate(incs):
            for jj, p in enumerate(dom_pts):
                mat[index[inc.point], index[p]] += inc.chi * G[r, jj]
    return RobinMapMatrix(mat, pts, alpha, c)
