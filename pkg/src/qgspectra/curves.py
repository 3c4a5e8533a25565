"""Spectral curves of the delta_s family, RNG statistics, Weyl law, flow.

The family H(t) places a delta_s(alpha, t) condition on a marked set B and
NK everywhere else.  Curves lambda_n(t) are monotone nondecreasing on every
continuity region (all of the t-line for alpha = 0; the two half lines for
alpha != 0, where some curves dive to -inf as t -> 0+).  The endpoints
t = +-inf are the same hard operator, solved exactly, never by large-|t|
extrapolation.

Spectral flow through a level is computed two ways and cross-checked: a
partition formula over panels (counts inside a spectrum-free window) and
explicit crossing enumeration with bisection-located crossing parameters.
Panels live in u = atan(t) coordinates so +-inf are ordinary endpoints.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .conditions import ConditionAssignment, delta, family_assignment
from .errors import InconsistencyError, PreconditionError, SolverError
from .graph import HEAD, MetricGraph
from .solver import Eigenpair, SpectrumSlice, find_eigenvalues, full_spectrum, l2_normalize
from .waves import OSC

log = logging.getLogger(__name__)

#: half-width of the excluded zone (0, EPS_GRID) on the t-axis for alpha != 0
EPS_GRID = 1e-3


def _value_at_vertex(graph: MetricGraph, waves, v: int) -> complex:
    ep = graph.endpoints_at(v)[0]
    w = waves[ep.edge]
    return w.valueL() if ep.end == HEAD else w.value0()


# ---------------------------------------------------------------------------
# curve tracking
# ---------------------------------------------------------------------------


@dataclass
class SpectralCurveFamily:
    alpha: float
    points: list[int]
    t_values: list[float]          # includes -inf / +inf endpoints when requested
    slices: list[SpectrumSlice]    # one per t, indexed from the bottom

    def curve(self, n: int) -> list[tuple[float, float]]:
        """(t, lambda_n(t)) wherever the n-th eigenvalue lies inside the slice."""
        out = []
        for t, sl in zip(self.t_values, self.slices):
            flat = sl.flat()
            for m, lam, _, _ in flat:
                if m == n:
                    out.append((t, lam))
                    break
        return out

    def count_at(self, t_index: int) -> int:
        return self.slices[t_index].total_multiplicity()


def track_curves(
    graph: MetricGraph,
    points: list[int],
    alpha: float,
    t_grid: list[float],
    lam_max: float,
    include_endpoints: bool = True,
    lam_resolution: float | None = None,
    max_refine: int = 200,
) -> SpectralCurveFamily:
    """Spectrum slices of H(t) on a t-grid, matched into curves by sorted index.

    For alpha != 0 the open interval (0, EPS_GRID) is excluded (the form
    domain changes at t = 0 and curves dive to -inf just right of it); a
    curve-count mismatch across t = 0 is expected and logged, not an error.
    Sorted-index matching is the minimal-total-displacement matching for
    real sorted spectra, with monotonicity as the tie-break.
    """
    ts = sorted(float(t) for t in t_grid)
    if alpha != 0.0:
        kept = [t for t in ts if not (0.0 < t < EPS_GRID)]
        if len(kept) != len(ts):
            log.info("excluded %d grid nodes in (0, %g)", len(ts) - len(kept), EPS_GRID)
        ts = kept
    if include_endpoints:
        ts = [-math.inf] + ts + [math.inf]

    def slice_at(t: float) -> SpectrumSlice:
        asg = family_assignment(graph, points, alpha, t)
        return full_spectrum(graph, asg, lam_max)

    slices = [slice_at(t) for t in ts]

    if lam_resolution is not None:
        budget = max_refine
        i = 0
        while i < len(ts) - 1 and budget > 0:
            t1, t2 = ts[i], ts[i + 1]
            if not (math.isfinite(t1) and math.isfinite(t2)) or (alpha != 0.0 and t1 <= 0.0 < t2):
                i += 1
                continue
            f1 = {n: lam for n, lam, _, _ in slices[i].flat()}
            f2 = {n: lam for n, lam, _, _ in slices[i + 1].flat()}
            common = set(f1) & set(f2)
            jump = max((abs(f2[n] - f1[n]) for n in common), default=0.0)
            if jump > lam_resolution and t2 - t1 > 1e-9:
                tm = 0.5 * (t1 + t2)
                ts.insert(i + 1, tm)
                slices.insert(i + 1, slice_at(tm))
                budget -= 1
            else:
                i += 1
    return SpectralCurveFamily(alpha, list(points), ts, slices)


# ---------------------------------------------------------------------------
# Robin-Neumann gap
# ---------------------------------------------------------------------------


@dataclass
class RNGSequence:
    sigma: float
    gaps: np.ndarray           # d_n, n = 1..N
    running_means: np.ndarray  # prefix means of gaps


def _first_n_positive(graph: MetricGraph, assignment: ConditionAssignment, n: int) -> list[tuple[int, float, Eigenpair, int]]:
    """First n spectrum entries (with multiplicity), indexed from the bottom."""
    L = graph.total_length
    lam_guess = ((n + graph.E + graph.V + 2) * math.pi / L) ** 2
    for _ in range(8):
        sl = full_spectrum(graph, assignment, lam_guess)
        flat = sl.flat()
        if len(flat) >= n:
            return flat[:n]
        lam_guess *= 1.6
    raise SolverError(f"could not collect {n} eigenvalues")


def rng(graph: MetricGraph, robin_vertices: list[int], sigma: float, n_max: int) -> RNGSequence:
    """Robin-Neumann gaps d_n = lambda_n(sigma) - lambda_n(0) for n = 1..n_max.

    At multiple eigenvalues the branch is chosen by sorted-index pairing
    (any branch choice only permutes finitely many entries).
    """
    base = ConditionAssignment(graph)
    pert = ConditionAssignment(graph, {v: delta(sigma) for v in robin_vertices})
    lam0 = np.array([lam for _, lam, _, _ in _first_n_positive(graph, base, n_max)])
    lam1 = np.array([lam for _, lam, _, _ in _first_n_positive(graph, pert, n_max)])
    gaps = lam1 - lam0
    return RNGSequence(sigma, gaps, cesaro(gaps))


def cesaro(seq) -> np.ndarray:
    """Prefix means (1/N) sum_{n<=N} a_n."""
    a = np.asarray(seq, dtype=float)
    return np.cumsum(a) / np.arange(1, len(a) + 1)


def eigenfunction_vertex_values(graph: MetricGraph, eig: Eigenpair, vertices: list[int]) -> np.ndarray:
    """|f(v)|^2 of the L2-normalized eigenfunction, averaged over a degenerate basis."""
    eign = l2_normalize(eig, graph)
    vals = np.zeros(len(vertices))
    for j in range(eign.multiplicity):
        waves = eign.waves(graph, j)
        for i, v in enumerate(vertices):
            vals[i] += abs(_value_at_vertex(graph, waves, v)) ** 2
    return vals / eign.multiplicity


def rng_hadamard(
    graph: MetricGraph,
    robin_vertices: list[int],
    sigma: float,
    n: int,
    tol: float = 1e-7,
) -> float:
    """d_n(sigma) as the integral over t of sum_v |f_n^(t)(v)|^2.

    Agrees with the endpoint difference whenever lambda_n(t) is simple on all
    but finitely many t of the path; on persistent degeneracy the endpoint
    difference is returned with a warning.
    """
    if sigma == 0.0:
        return 0.0
    lam_top_entry = _first_n_positive(
        graph, ConditionAssignment(graph, {v: delta(max(sigma, 0.0)) for v in robin_vertices}), n
    )[n - 1]
    lam_cap = lam_top_entry[1] + 1.0
    degenerate_hits = 0

    def integrand(t: float) -> float:
        nonlocal degenerate_hits
        asg = ConditionAssignment(graph, {v: delta(t) for v in robin_vertices})
        sl = full_spectrum(graph, asg, lam_cap)
        flat = sl.flat()
        if len(flat) < n:
            raise SolverError("spectrum window too small in Hadamard integrand")
        _, lam, eig, _ = flat[n - 1]
        if eig.multiplicity > 1:
            degenerate_hits += 1
        return float(np.sum(eigenfunction_vertex_values(graph, eig, robin_vertices)))

    val, err = quad(integrand, 0.0, sigma, epsabs=tol, epsrel=tol, limit=200)
    if degenerate_hits > 5:
        log.warning("persistent degeneracy along the Hadamard path; falling back to endpoint difference")
        seq = rng(graph, robin_vertices, sigma, n)
        return float(seq.gaps[n - 1])
    return float(val)


# ---------------------------------------------------------------------------
# local Weyl law
# ---------------------------------------------------------------------------


@dataclass
class WeylStats:
    n_used: int
    vertices: list[int]
    vertex_means: np.ndarray        # running means of |f(v)|^2, shape (N, V)
    vertex_targets: np.ndarray      # 2 / (deg(v) * L)
    amp_means: np.ndarray           # running means of |A_b|^2, shape (N, 2E)
    amp_target: float               # 1 / (2L)
    max_cross_correlation: float    # max_j!=e |<A_j conj(A_e)>| over both directions


def weyl_stats(graph: MetricGraph, n_max: int) -> WeylStats:
    """Running spectral means over the first n_max positive NK eigenfunctions."""
    asg = ConditionAssignment(graph)
    flat = [f for f in _first_n_positive(graph, asg, n_max + 1) if f[1] > 1e-12][:n_max]
    verts = list(graph.vertices)
    L = graph.total_length
    nb = graph.bond_count()
    vertex_sq = np.zeros((len(flat), len(verts)))
    amps = np.zeros((len(flat), nb), dtype=complex)
    normalized: dict[int, Eigenpair] = {}
    for i, (n, lam, eig, copy) in enumerate(flat):
        key = id(eig)
        if key not in normalized:
            normalized[key] = l2_normalize(eig, graph)
        eign = normalized[key]
        waves = eign.waves(graph, copy)
        for j, v in enumerate(verts):
            vertex_sq[i, j] = abs(_value_at_vertex(graph, waves, v)) ** 2
        amps[i] = eign.vectors[copy]
    counts = np.arange(1, len(flat) + 1)[:, np.newaxis]
    vertex_means = np.cumsum(vertex_sq, axis=0) / counts
    amp_means = np.cumsum(np.abs(amps) ** 2, axis=0) / counts
    targets = np.array([2.0 / (graph.degree(v) * L) for v in verts])

    cross = 0.0
    E = graph.E
    for i in range(E):
        for j in range(E):
            if i == j:
                continue
            cross = max(cross, abs(np.mean(amps[:, 2 * i] * np.conj(amps[:, 2 * j]))))
            cross = max(cross, abs(np.mean(amps[:, 2 * i + 1] * np.conj(amps[:, 2 * j + 1]))))
    return WeylStats(len(flat), verts, vertex_means, targets, amp_means, 1.0 / (2.0 * L), float(cross))


# ---------------------------------------------------------------------------
# spectral flow
# ---------------------------------------------------------------------------


@dataclass
class FlowCount:
    level: float
    interval: tuple[float, float]
    flow: int
    crossings: list[tuple[float, int, int]] = field(default_factory=list)  # (t, window index, direction)


class _FlowContext:
    """Counts eigenvalues of H(t) in lambda-windows, caching slices per t."""

    def __init__(self, graph, points, alpha, level):
        self.graph = graph
        self.points = points
        self.alpha = alpha
        self.level = level
        self._cache: dict[float, tuple[float, SpectrumSlice]] = {}

    def slice_at(self, t: float, floor: float) -> SpectrumSlice:
        hit = self._cache.get(t)
        pad = 0.05 * max(1.0, abs(self.level)) + 1e-6
        if hit is not None and hit[0] <= floor:
            return hit[1]
        asg = family_assignment(self.graph, self.points, self.alpha, t)
        sl = find_eigenvalues(self.graph, asg, floor, self.level + pad)
        self._cache[t] = (floor, sl)
        return sl

    def eigs_in(self, t: float, lo: float, hi: float) -> list[float]:
        sl = self.slice_at(t, lo)
        out = []
        for e in sl.eigenpairs:
            if lo <= e.lam < hi:
                out.extend([e.lam] * e.multiplicity)
        return out

    def count_in(self, t: float, lo: float, hi: float) -> int:
        return len(self.eigs_in(t, lo, hi))


def _panel_window(ctx: _FlowContext, t1: float, t2: float, level: float):
    """A window floor `a` below `level` with no spectrum at `a` throughout the panel.

    Monotone curves cross a level only upward, so equal counts below `a` at
    both panel ends certify that no curve meets `a` inside the panel.
    """
    W = max(1.0, 0.3 * abs(level))
    for _ in range(6):
        floor = level - W
        e1 = ctx.eigs_in(t1, floor, level)
        e2 = ctx.eigs_in(t2, floor, level)
        occupied = sorted(e1 + e2)
        candidates = []
        prev = floor
        for lam in occupied + [level]:
            if lam - prev > 1e-6:
                candidates.append(0.5 * (prev + lam))
            prev = lam
        for a in candidates:
            m = min(min((abs(a - x) for x in occupied), default=math.inf), level - a) * 0.5
            if m <= 1e-9:
                continue
            if ctx.count_in(t1, floor - 0.5 * W, a) == ctx.count_in(t2, floor - 0.5 * W, a):
                # no curve reaches `a` inside the panel (monotone), so [a, level)
                # is a valid counting window for the partition formula
                return a
        W *= 2.0
    return None


def spectral_flow(
    graph: MetricGraph,
    points: list[int],
    alpha: float,
    level: float,
    t_interval: tuple[float, float] = (-math.inf, math.inf),
    initial_nodes: int = 9,
    locate: bool = True,
) -> FlowCount:
    """Signed crossing count of the level by the delta_s spectral curves.

    Computed by the partition formula over adaptively refined panels and
    cross-checked against per-panel crossing enumeration (both directions
    counted; monotonicity makes every crossing upward on continuity
    regions).  Raises InconsistencyError when the two disagree after
    refinement, which signals a missed eigenvalue.
    """
    t_lo, t_hi = t_interval
    ctx = _FlowContext(graph, points, alpha, level)

    for t_end in (t_lo, t_hi):
        near = ctx.eigs_in(t_end, level - 1e-7, level + 1e-7)
        if near:
            raise PreconditionError(f"level {level} lies in the spectrum at t = {t_end}")

    u_lo, u_hi = math.atan(t_lo), math.atan(t_hi)
    us = list(np.linspace(u_lo, u_hi, initial_nodes))
    if alpha != 0.0:
        # the two continuity regions meet at t = 0; keep 0 and EPS_GRID as nodes
        for special in (0.0, math.atan(EPS_GRID)):
            if u_lo < special < u_hi:
                us.append(special)
        us = sorted(set(us))
        us = [u for u in us if not (0.0 < u < math.atan(EPS_GRID) - 1e-15)]

    flow = 0
    crossings: list[tuple[float, int, int]] = []
    i = 0
    while i < len(us) - 1:
        u1, u2 = us[i], us[i + 1]
        t1, t2 = math.tan(u1), math.tan(u2)
        if u1 == u_lo:
            t1 = t_lo
        if u2 == u_hi:
            t2 = t_hi
        a = _panel_window(ctx, t1, t2, level)
        if a is None:
            if u2 - u1 < 1e-8:
                raise InconsistencyError("no spectrum-free window found in a tiny panel")
            um = 0.5 * (u1 + u2)
            us.insert(i + 1, um)
            continue
        c1 = ctx.count_in(t1, a, level)
        c2 = ctx.count_in(t2, a, level)
        contribution = c1 - c2
        e1 = sorted(ctx.eigs_in(t1, a, level))
        e2 = sorted(ctx.eigs_in(t2, a, level))
        # crossing enumeration: with the window sealed at `a`, curves leave
        # [a, level) only through the level; monotonicity forbids re-entry
        enumerated = len(e1) - len(e2)
        if enumerated != contribution:
            raise InconsistencyError("partition and enumeration methods disagree")
        if contribution < 0:
            raise InconsistencyError(
                f"negative flow {contribution} in panel t=({t1}, {t2}); missed eigenvalue?"
            )
        if contribution > 0 and locate:
            crossings.extend(_locate_crossings(ctx, t1, t2, u1, u2, a, level, contribution))
        flow += contribution
        i += 1
    crossings.sort()
    return FlowCount(level, t_interval, flow, crossings)


def _locate_crossings(ctx, t1, t2, u1, u2, a, level, m) -> list[tuple[float, int, int]]:
    """Bisect in u = atan(t) until each crossing parameter is isolated."""
    out = []

    def rec(ua, ub, ca, cb, count):
        if count == 0:
            return
        if ub - ua < 1e-10:
            t_star = math.tan(0.5 * (ua + ub))
            for j in range(count):
                out.append((t_star, cb + j, +1))
            return
        um = 0.5 * (ua + ub)
        tm = math.tan(um)
        cm = ctx.count_in(tm, a, level)
        rec(ua, um, ca, cm, ca - cm)
        rec(um, ub, cm, cb, cm - cb)

    ca = ctx.count_in(t1, a, level)
    cb = ctx.count_in(t2, a, level)
    rec(math.atan(t1) if math.isfinite(t1) else u1, math.atan(t2) if math.isfinite(t2) else u2, ca, cb, m)
    return out


# ---------------------------------------------------------------------------
# flat-curve intersections (Betti count)
# ---------------------------------------------------------------------------


def hard_multiplicity(graph: MetricGraph, points: list[int], alpha: float, lam: float, delta_lam: float) -> int:
    """Multiplicity of lam in the hard-endpoint spectrum (t = inf)."""
    asg = family_assignment(graph, points, alpha, math.inf)
    sl = find_eigenvalues(graph, asg, lam - delta_lam, lam + delta_lam)
    return sum(e.multiplicity for e in sl.eigenpairs if abs(e.lam - lam) <= delta_lam)


def flat_curve_intersections(
    graph: MetricGraph,
    points: list[int],
    alpha: float,
    lam_n: float,
    eps: float,
) -> int:
    """Transversal crossings of the constant curve's level by the other curves.

    With B at the s-points of a generic eigenfunction, lambda_n is a constant
    curve; Mult(lambda_n, t=inf) - 1 monotone curves end at lambda_n from
    below without crossing it, and every other curve that crosses the level
    lambda_n - eps must continue through lambda_n.  So the transversal count
    is Sf_{lambda_n - eps}[-inf, inf] - (Mult(lambda_n, inf) - 1).
    """
    mult_inf = hard_multiplicity(graph, points, alpha, lam_n, 0.49 * eps)
    fc = spectral_flow(graph, points, alpha, lam_n - eps, locate=False)
    return fc.flow - (mult_inf - 1)
