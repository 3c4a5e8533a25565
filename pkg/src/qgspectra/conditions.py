"""The delta_s family of vertex conditions.

A condition is parametrized by a Pruefer angle alpha in [0, pi) and a
coupling t in R union {+-inf}.  The Robin parameter is s = cot(alpha), so
alpha = 0 is s = inf (the delta family: continuity plus a derivative jump)
and alpha = pi/2 is s = 0 (the delta' family).  t = 0 is Neumann-Kirchhoff
for every alpha; t = +-inf is the hard condition gamma^s = 0 on both sides.

At a degree-2 vertex the two sides are fixed by the edge orientations:
side 1 is the edge arriving at the vertex (derivative oriented into the
vertex), side 2 the edge leaving it (derivative oriented into the edge).
Everything in this module works in the "outward" convention, where both
derivatives point away from the vertex into their edges; the conversion
from oriented to outward values (f1' -> -u1', f2' -> +u2') happens only
here, in the condition-matrix constructors and in `trace`.

Hard t = +-inf conditions are represented exactly (dedicated matrices),
never as numerical limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConditionError, DomainViolationError, UnsupportedDegreeError
from .graph import HEAD, TAIL, MetricGraph
from .waves import EdgeWave

NK = "nk"
DELTA_S = "delta_s"


def alpha_from_s(s: float) -> float:
    """Pruefer angle alpha in [0, pi) with s = cot(alpha); s = inf maps to 0."""
    if math.isinf(s):
        return 0.0
    if s == 0.0:
        return 0.5 * math.pi
    a = math.atan2(1.0, s)  # in (0, pi)
    return a


def s_from_alpha(alpha: float) -> float:
    if alpha == 0.0:
        return math.inf
    if alpha == 0.5 * math.pi:
        return 0.0
    return math.cos(alpha) / math.sin(alpha)


@dataclass(frozen=True)
class VertexCondition:
    """Neumann-Kirchhoff or a delta_s condition (alpha, t)."""

    kind: str
    alpha: float = 0.0
    t: float = 0.0

    def is_nk(self) -> bool:
        return self.kind == NK or (self.kind == DELTA_S and self.t == 0.0)

    def is_hard(self) -> bool:
        return self.kind == DELTA_S and math.isinf(self.t)

    @property
    def s(self) -> float:
        return s_from_alpha(self.alpha)


def nk() -> VertexCondition:
    return VertexCondition(NK)


def delta_s(alpha: float, t: float) -> VertexCondition:
    if not (0.0 <= alpha < math.pi):
        raise ConditionError(f"alpha must lie in [0, pi), got {alpha}")
    return VertexCondition(DELTA_S, alpha=alpha, t=float(t))


def delta(sigma: float) -> VertexCondition:
    """delta coupling: continuity plus outward-derivative sum = sigma * f(v)."""
    return delta_s(0.0, sigma)


def delta_prime(sigma: float) -> VertexCondition:
    """delta' coupling at a degree-2 vertex."""
    return delta_s(0.5 * math.pi, sigma)


def from_s(s: float, t: float) -> VertexCondition:
    return delta_s(alpha_from_s(s), t)


# ---------------------------------------------------------------------------
# condition matrices (outward-derivative convention)
# ---------------------------------------------------------------------------


def _normalize_rows(A: np.ndarray, B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    for r in range(A.shape[0]):
        n = math.hypot(*np.abs(A[r]), *np.abs(B[r]))
        A[r] /= n
        B[r] /= n
    return A, B


def condition_matrices(alpha: float, t: float) -> tuple[np.ndarray, np.ndarray]:
    """2x2 matrices (A, B) with A u + B u' = 0 at a degree-2 delta_s vertex.

    u = (u1, u2) are the two-sided values, u' the outward derivatives.
    Rows are normalized to unit norm; (A, B) is only defined up to left
    multiplication by an invertible matrix, so compare kernels, not entries.
    """
    ca, sa = math.cos(alpha), math.sin(alpha)
    if math.isinf(t):
        A = np.array([[ca, -ca], [ca, ca]], dtype=float)
        B = np.array([[sa, sa], [sa, -sa]], dtype=float)
    elif t == 0.0:
        A = np.array([[ca, -ca], [sa, -sa]], dtype=float)
        B = np.array([[sa, sa], [-ca, -ca]], dtype=float)
    else:
        A = np.array(
            [[ca, -ca],
             [0.5 * ca * t + sa, 0.5 * ca * t - sa]],
            dtype=float,
        )
        B = np.array(
            [[sa, sa],
             [0.5 * sa * t - ca, -0.5 * sa * t - ca]],
            dtype=float,
        )
    return _normalize_rows(A, B)


def condition_matrices_deg1(alpha: float, t: float, end: str) -> tuple[np.ndarray, np.ndarray]:
    """1x1 matrices (A, B) for a delta_s condition at a degree-1 vertex.

    The missing side uses the convention gamma_j^s = gamma_i^s and
    gamma_j^{s*} = 0, which collapses the pair of conditions to a single
    Robin-type relation on the present side.  ``end`` says whether the
    incident edge arrives (HEAD, side 1) or departs (TAIL, side 2).
    """
    ca, sa = math.cos(alpha), math.sin(alpha)
    if math.isinf(t):
        a, b = (ca, sa) if end == HEAD else (ca, -sa)
    elif end == HEAD:
        a, b = sa + t * ca, t * sa - ca
    else:
        a, b = sa - t * ca, ca + t * sa
    n = math.hypot(a, b)
    return np.array([[a / n]]), np.array([[b / n]])


def vertex_scattering(A: np.ndarray, B: np.ndarray, k: complex) -> np.ndarray:
    """sigma_v(k) = -(A + ikB)^{-1} (A - ikB).

    Unitary for real k > 0; real for k = i*kappa (used for the negative
    spectrum).  Raises on numerical degeneracy, which the rank condition
    rules out for valid self-adjoint conditions.
    """
    ik = 1j * k
    M = A + ik * B
    N = A - ik * B
    try:
        return -np.linalg.solve(M, N)
    except np.linalg.LinAlgError as exc:
        raise ConditionError(f"A + ikB singular at k={k}") from exc


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------


def trace_vector(values: tuple[complex, complex, complex, complex], alpha: float):
    """Rotate two-sided boundary data into (gamma^s, gamma^{s*}) pairs.

    ``values`` = (f1, f1', f2, f2') with the oriented derivatives (f1' into
    the vertex, f2' into the edge).  Returns ((g1, g1s), (g2, g2s)).
    """
    ca, sa = math.cos(alpha), math.sin(alpha)
    f1, d1, f2, d2 = values
    g1 = ca * f1 - sa * d1
    g1s = sa * f1 + ca * d1
    g2 = ca * f2 - sa * d2
    g2s = sa * f2 + ca * d2
    return (g1, g1s), (g2, g2s)


def trace_deg1(value: complex, oriented_derivative: complex, alpha: float, end: str):
    """One-sided trace with the degree-1 convention for the missing side."""
    ca, sa = math.cos(alpha), math.sin(alpha)
    g = ca * value - sa * oriented_derivative
    gs = sa * value + ca * oriented_derivative
    if end == HEAD:  # present side is 1
        return (g, gs), (g, 0.0)
    return (g, 0.0), (g, gs)


# ---------------------------------------------------------------------------
# assignments
# ---------------------------------------------------------------------------


class ConditionAssignment:
    """Maps every vertex of a graph to a condition (default Neumann-Kirchhoff).

    delta_s conditions with alpha != 0 are only defined at vertices of degree
    one or two, and at degree two require one ingoing and one outgoing edge.
    The delta family (alpha = 0) is allowed at any degree, t = +-inf meaning
    full Dirichlet decoupling.
    """

    def __init__(self, graph: MetricGraph, conditions: dict[int, VertexCondition] | None = None):
        self.graph = graph
        self._conditions = dict(conditions or {})
        for v in self._conditions:
            if v not in graph.vertices:
                raise ConditionError(f"condition assigned to unknown vertex {v}")
        self.validate()

    def condition(self, v: int) -> VertexCondition:
        return self._conditions.get(v, nk())

    def items(self):
        return [(v, self.condition(v)) for v in self.graph.vertices]

    def validate(self) -> None:
        for v, cond in self._conditions.items():
            if cond.kind == NK or cond.alpha == 0.0:
                continue
            deg = self.graph.degree(v)
            if deg > 2:
                raise UnsupportedDegreeError(
                    f"delta_s with alpha != 0 at vertex {v} of degree {deg}; only degree <= 2 is defined"
                )
            if deg == 2:
                ends = sorted(ep.end for ep in self.graph.endpoints_at(v))
                if ends != [HEAD, TAIL]:
                    raise ConditionError(
                        f"delta_s vertex {v} needs one ingoing and one outgoing edge; "
                        "reverse one incident edge first"
                    )

    def with_condition(self, v: int, cond: VertexCondition) -> "ConditionAssignment":
        d = dict(self._conditions)
        d[v] = cond
        return ConditionAssignment(self.graph, d)


def family_assignment(graph: MetricGraph, points: list[int], alpha: float, t: float) -> ConditionAssignment:
    """NK everywhere except a delta_s(alpha, t) condition on ``points``."""
    return ConditionAssignment(graph, {v: delta_s(alpha, t) for v in points})


# ---------------------------------------------------------------------------
# sesquilinear form
# ---------------------------------------------------------------------------


def _two_sided_values(graph: MetricGraph, waves: dict[int, EdgeWave], v: int):
    """(f1, f2) at a degree-2 vertex, (value, end) at degree 1."""
    eps = graph.endpoints_at(v)
    vals = []
    for ep in eps:
        w = waves[ep.edge]
        vals.append((ep, w.valueL() if ep.end == HEAD else w.value0()))
    return vals


def evaluate_form(graph: MetricGraph, assignment: ConditionAssignment, waves: dict[int, EdgeWave]) -> float:
    """Quadratic form L_t^s(f, f) of the assignment, evaluated exactly.

    ``waves`` maps edge id -> EdgeWave.  The Dirichlet energy uses the
    closed-form edge integrals; the boundary term follows the condition at
    each marked vertex.  NK vertices contribute nothing.  Raises
    DomainViolationError when t = 0 is requested with data discontinuous at
    a marked vertex.
    """
    total = sum(waves[e.id].energy() for e in graph.edges)
    for v, cond in assignment.items():
        if cond.kind != DELTA_S:
            continue
        alpha, t = cond.alpha, cond.t
        vals = _two_sided_values(graph, waves, v)
        if alpha == 0.0:
            # delta family: + t * |f(v)|^2 (f continuous at v); t = inf -> hard, term absent
            if math.isinf(t):
                continue
            total += t * abs(vals[0][1]) ** 2
            continue
        if len(vals) == 1:
            raise DomainViolationError("form evaluation at degree-1 delta_s vertices is not supported")
        (ep1, f1), (ep2, f2) = _resolve_sides(vals)
        if t == 0.0:
            if abs(f1 - f2) > 1e-9 * max(1.0, abs(f1), abs(f2)):
                raise DomainViolationError(f"t=0 form requires continuity at vertex {v}")
            continue
        sa2 = math.sin(alpha) ** 2
        s2a = math.sin(2.0 * alpha)
        if math.isinf(t):
            # limit of the finite-t matrix: -(1/sin^2 a)(.5 sin 2a |f1|^2 - .5 sin 2a |f2|^2)
            total -= (0.5 * s2a / sa2) * (abs(f1) ** 2 - abs(f2) ** 2)
            continue
        m11 = 1.0 + 0.5 * s2a * t
        m22 = 1.0 - 0.5 * s2a * t
        q = m11 * abs(f1) ** 2 - 2.0 * (f1 * f2.conjugate()).real + m22 * abs(f2) ** 2
        total -= q / (sa2 * t)
    return float(total)


def _resolve_sides(vals):
    """Order two-sided endpoint values as (side1=arriving, side2=departing)."""
    (epa, fa), (epb, fb) = vals
    if epa.end == HEAD:
        return (epa, fa), (epb, fb)
    return (epb, fb), (epa, fa)


def boundary_coefficient(cond: VertexCondition) -> float:
    """Upper bound c >= 0 such that the vertex's form term >= -c * sum |f_i(v)|^2.

    Used to derive an explicit lower bound on the spectrum (the negative
    part of the boundary quadratic controls how deep eigenvalues can dive).
    """
    if cond.kind != DELTA_S or cond.t == 0.0:
        return 0.0
    alpha, t = cond.alpha, cond.t
    if alpha == 0.0:
        if math.isinf(t):
            return 0.0
        return max(0.0, -t)
    s = abs(s_from_alpha(alpha))
    if math.isinf(t):
        return s
    beta = 0.5 * math.sin(2.0 * alpha) * t
    sa2 = math.sin(alpha) ** 2
    if t > 0.0:
        return (1.0 + math.hypot(1.0, beta)) / (sa2 * t)
    return (math.hypot(1.0, beta) - 1.0) / (sa2 * abs(t))


def boundary_coefficient_deg1(cond: VertexCondition, end: str) -> float:
    """Like :func:`boundary_coefficient` but for a degree-1 delta_s vertex.

    The one-sided condition is Robin-like, L = energy + q |f(v)|^2; returns
    max(0, -q).  A vanishing denominator means the condition is Dirichlet
    there (f(v) = 0), which contributes nothing negative.
    """
    if cond.kind != DELTA_S or cond.t == 0.0:
        return 0.0
    alpha, t = cond.alpha, cond.t
    ca, sa = math.cos(alpha), math.sin(alpha)
    if math.isinf(t):
        s = s_from_alpha(alpha)
        if math.isinf(s):
            return 0.0  # Dirichlet
        q = -s if end == HEAD else s
        return max(0.0, -q)
    if end == HEAD:
        num, den = sa + t * ca, ca - t * sa
    else:
        num, den = t * ca - sa, ca + t * sa
    if den == 0.0:
        return 0.0
    q = num / den
    return max(0.0, -q)
