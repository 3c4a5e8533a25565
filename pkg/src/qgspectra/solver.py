"""Spectral solver for metric-graph Laplacians.

Positive spectrum: k^2 > 0 is an eigenvalue iff det(I - S(k) e^{ikL}) = 0,
where S(k) is the 2E x 2E bond scattering matrix and L the diagonal matrix
of bond lengths.  Roots are located by tracking the eigenphases of the
unitary U(k) = S(k) e^{ikL}: an eigenvalue is a passage of an eigenphase
through 0 (mod 2pi).  Phases are matched across k-steps on the circle and
steps are refined until every matched jump is small, so crossings are
counted without assuming monotone phase motion; the accumulated crossing
count doubles as the exhaustiveness certificate of a window.

lambda = 0 and the negative spectrum are handled by direct linear systems
in per-edge coefficients (bases {1, x} and {e^{-kx}, e^{-k(l-x)}}); the
negative case is the real continuation k -> i*kappa of the secular problem,
reorganized so the determinant stays finite at the scattering-matrix poles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .conditions import (
    ConditionAssignment,
    DELTA_S,
    boundary_coefficient,
    boundary_coefficient_deg1,
    condition_matrices,
    condition_matrices_deg1,
    vertex_scattering,
)
from .errors import IncompleteSliceError, SolverError, StaleEigenvalueError
from .graph import HEAD, TAIL, MetricGraph
from .waves import EXP, LIN, OSC, EdgeWave, inner

TWO_PI = 2.0 * math.pi

#: eigenphases closer to 0 than this (at a common k) are merged into one
#: multiple eigenvalue
PHASE_MERGE_TOL = 1e-7
#: k-values closer than this are reported as one eigenvalue
K_MERGE_TOL = 1e-7
#: relative bracket width at which a crossing is accepted
K_REFINE_TOL = 1e-13
#: numerical-kernel threshold for row-normalized condition systems
KERNEL_TOL = 5e-13


# ---------------------------------------------------------------------------
# bond scattering matrix
# ---------------------------------------------------------------------------


def build_S(graph: MetricGraph, assignment: ConditionAssignment, k: complex) -> np.ndarray:
    """Bond scattering matrix S(k); unitary for real k > 0.

    NK vertices and the delta family get the closed-form block
    2/(deg + it/k) - delta_{j', j^}; other delta_s vertices get the 2x2 (or
    1x1) vertex scattering matrix built from their condition matrices.
    """
    n = graph.bond_count()
    S = np.zeros((n, n), dtype=complex)
    for v in graph.vertices:
        inc = graph.incoming_bonds(v)
        cond = assignment.condition(v)
        d = len(inc)
        if cond.kind != DELTA_S or cond.alpha == 0.0:
            t = cond.t if cond.kind == DELTA_S else 0.0
            if math.isinf(t):
                for b in inc:
                    S[graph.reversed_bond(b), b] = -1.0
                continue
            w = 2.0 / (d + 1j * t / k)
            for b in inc:
                for b2 in inc:
                    o = graph.reversed_bond(b2)
                    S[o, b] = w - (1.0 if o == graph.reversed_bond(b) else 0.0)
            continue
        if d == 1:
            end = graph.endpoint_of_bond_end(inc[0]).end
            A, B = condition_matrices_deg1(cond.alpha, cond.t, end)
            sig = vertex_scattering(A, B, k)
            S[graph.reversed_bond(inc[0]), inc[0]] = sig[0, 0]
            continue
        side = {graph.endpoint_of_bond_end(b).end: b for b in inc}
        b1, b2 = side[HEAD], side[TAIL]
        A, B = condition_matrices(cond.alpha, cond.t)
        sig = vertex_scattering(A, B, k)
        for p, bp in enumerate((b1, b2)):
            for q, bq in enumerate((b1, b2)):
                S[graph.reversed_bond(bp), bq] = sig[p, q]
    return S


def bond_lengths(graph: MetricGraph) -> np.ndarray:
    return np.repeat([e.length for e in graph.edges], 2)


def build_U(graph: MetricGraph, assignment: ConditionAssignment, k: float) -> np.ndarray:
    S = build_S(graph, assignment, k)
    return S * np.exp(1j * k * bond_lengths(graph))[np.newaxis, :]


@dataclass(frozen=True)
class SecularEvaluation:
    k: float
    value: complex
    eigenphases: np.ndarray  # sorted, in [0, 2pi)
    nearest_phase: float  # distance of the closest eigenphase to 0 (mod 2pi)


def secular(graph: MetricGraph, assignment: ConditionAssignment, k: float) -> SecularEvaluation:
    U = build_U(graph, assignment, k)
    F = np.linalg.det(np.eye(U.shape[0], dtype=complex) - U)
    th = np.sort(np.mod(np.angle(np.linalg.eigvals(U)), TWO_PI))
    near = float(np.min(np.minimum(th, TWO_PI - th))) if th.size else math.inf
    return SecularEvaluation(k, complex(F), th, near)


# ---------------------------------------------------------------------------
# direct condition systems (negative spectrum, zero modes, BVPs)
# ---------------------------------------------------------------------------


def _basis_functionals(kind: str, kval: float, length: float):
    """Endpoint functionals (value0, valueL, d0, dL) of the 2 basis functions."""
    l = length
    if kind == EXP:
        q = math.exp(-kval * l)
        return (
            np.array([1.0, q]),
            np.array([q, 1.0]),
            np.array([-kval, kval * q]),
            np.array([-kval * q, kval]),
        )
    if kind == LIN:
        return (
            np.array([1.0, 0.0]),
            np.array([1.0, l]),
            np.array([0.0, 1.0]),
            np.array([0.0, 1.0]),
        )
    k = kval  # oscillatory, real basis {cos kx, sin kx}
    c, s = math.cos(k * l), math.sin(k * l)
    return (
        np.array([1.0, 0.0]),
        np.array([c, s]),
        np.array([0.0, k]),
        np.array([-k * s, k * c]),
    )


def condition_system(graph: MetricGraph, assignment: ConditionAssignment, kind: str, kval: float) -> np.ndarray:
    """Square 2E x 2E system whose kernel is the eigenspace at this energy.

    Unknowns are the per-edge coefficient pairs in the basis of ``kind``
    (EXP: {e^{-kx}, e^{-k(l-x)}}, LIN: {1, x}, OSC: {cos kx, sin kx}).
    Rows are the vertex conditions, normalized to unit norm.
    """
    n = 2 * graph.E
    col = {e.id: 2 * graph._edge_index[e.id] for e in graph.edges}
    fun = {e.id: _basis_functionals(kind, kval, e.length) for e in graph.edges}
    rows = []
    for v in graph.vertices:
        eps = graph.endpoints_at(v)
        cond = assignment.condition(v)
        vals, outs = [], []
        for ep in eps:
            v0, vL, d0, dL = fun[ep.edge]
            value = np.zeros(n)
            deriv = np.zeros(n)
            if ep.end == TAIL:
                value[col[ep.edge]:col[ep.edge] + 2] = v0
                deriv[col[ep.edge]:col[ep.edge] + 2] = d0
            else:
                value[col[ep.edge]:col[ep.edge] + 2] = vL
                deriv[col[ep.edge]:col[ep.edge] + 2] = -dL
            vals.append(value)
            outs.append(deriv)
        if cond.kind != DELTA_S or cond.alpha == 0.0:
            t = cond.t if cond.kind == DELTA_S else 0.0
            if math.isinf(t):
                rows.extend(vals)
                continue
            for i in range(len(eps) - 1):
                rows.append(vals[i] - vals[i + 1])
            rows.append(sum(outs) - t * vals[0])
            continue
        if len(eps) == 1:
            A, B = condition_matrices_deg1(cond.alpha, cond.t, eps[0].end)
            rows.append(A[0, 0] * vals[0] + B[0, 0] * outs[0])
            continue
        i1 = next(i for i, ep in enumerate(eps) if ep.end == HEAD)
        i2 = next(i for i, ep in enumerate(eps) if ep.end == TAIL)
        A, B = condition_matrices(cond.alpha, cond.t)
        for r in range(2):
            rows.append(A[r, 0] * vals[i1] + A[r, 1] * vals[i2] + B[r, 0] * outs[i1] + B[r, 1] * outs[i2])
    M = np.array(rows)
    norms = np.linalg.norm(M, axis=1)
    norms[norms == 0.0] = 1.0
    return M / norms[:, np.newaxis]


def _kernel(M: np.ndarray, tol: float = KERNEL_TOL):
    u, s, vt = np.linalg.svd(M)
    dim = int(np.sum(s < tol * max(1.0, s[0])))
    return dim, vt[len(s) - dim:].conj() if dim else vt[:0], s


def zero_modes(graph: MetricGraph, assignment: ConditionAssignment):
    """Multiplicity and coefficient vectors of the eigenvalue 0."""
    M = condition_system(graph, assignment, LIN, 0.0)
    dim, vecs, _ = _kernel(M)
    return dim, vecs


# ---------------------------------------------------------------------------
# eigenphase marching (positive spectrum)
# ---------------------------------------------------------------------------


def _phases(graph, assignment, k: float) -> np.ndarray:
    U = build_U(graph, assignment, k)
    return np.sort(np.mod(np.angle(np.linalg.eigvals(U)), TWO_PI))


def _match_deltas(th1: np.ndarray, th2: np.ndarray) -> np.ndarray:
    """Wrapped phase motions for the circular-order-preserving matching.

    Both arrays are sorted positions on the circle; the optimal bijection is
    a cyclic shift, chosen to minimize total movement.
    """
    n = len(th1)
    shifts = np.arange(n)
    idx = (np.arange(n)[np.newaxis, :] + shifts[:, np.newaxis]) % n
    diffs = th2[idx] - th1[np.newaxis, :]
    wrapped = np.mod(diffs + math.pi, TWO_PI) - math.pi
    best = int(np.argmin(np.sum(np.abs(wrapped), axis=1)))
    return wrapped[best]


@dataclass
class _Crossing:
    k: float
    up: int
    down: int

    @property
    def count(self) -> int:
        return self.up + self.down


class _Marcher:
    """Counts and refines eigenphase passages through 0 over a k-interval.

    Circular phase matching aliases when the true motion within a step
    exceeds pi, so every step is validated against its two halves: accept
    only when the crossing counts of the halves sum to the direct count,
    otherwise split.  Phases need not move monotonically; up and down
    passages are both eigenvalues and are recorded separately.
    """

    def __init__(self, graph, assignment, max_jump=0.55 * math.pi):
        self.graph = graph
        self.assignment = assignment
        self.max_jump = max_jump
        self.events: list[_Crossing] = []
        self.evaluations = 0

    def phases(self, k):
        self.evaluations += 1
        return _phases(self.graph, self.assignment, k)

    @staticmethod
    def _step_crossings(th1, th2):
        d = _match_deltas(th1, th2)
        pos = th1 + d
        up = int(np.sum(pos >= TWO_PI))
        down = int(np.sum(pos < 0.0))
        return d, up, down

    def process(self, k1, th1, k2, th2, depth=0):
        width = k2 - k1
        d, up, down = self._step_crossings(th1, th2)
        refine_tol = K_REFINE_TOL * max(1.0, k2)
        if width <= refine_tol:
            if up + down:
                self.events.append(_Crossing(0.5 * (k1 + k2), up, down))
            return
        km = 0.5 * (k1 + k2)
        thm = self.phases(km)
        _, u1, dn1 = self._step_crossings(th1, thm)
        _, u2, dn2 = self._step_crossings(thm, th2)
        consistent = (u1 + u2 == up) and (dn1 + dn2 == down) and np.max(np.abs(d)) <= self.max_jump
        if consistent and up + down == 0:
            return
        self.process(k1, th1, km, thm, depth + 1)
        self.process(km, thm, k2, th2, depth + 1)

    def run(self, k_lo, k_hi, h0):
        k = k_lo
        th = self.phases(k)
        while k < k_hi - 1e-15:
            k2 = min(k + h0, k_hi)
            th2 = self.phases(k2)
            self.process(k, th, k2, th2)
            k, th = k2, th2
        self.events.sort(key=lambda c: c.k)
        return self.events


def _merge_crossings(events: list[_Crossing]) -> list[_Crossing]:
    merged: list[_Crossing] = []
    for ev in events:
        if merged and ev.k - merged[-1].k <= K_MERGE_TOL:
            prev = merged[-1]
            total = prev.count + ev.count
            knew = (prev.k * prev.count + ev.k * ev.count) / total
            merged[-1] = _Crossing(knew, prev.up + ev.up, prev.down + ev.down)
        else:
            merged.append(ev)
    return merged


# ---------------------------------------------------------------------------
# eigenpairs and spectrum slices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Eigenpair:
    """One eigenvalue with an orthonormal coefficient basis of its eigenspace.

    ``kval`` is k for lam = k^2 > 0, kappa for lam = -kappa^2 < 0, and 0 for
    lam = 0; ``kind`` selects the edge-wave representation.  ``vectors`` has
    shape (multiplicity, 2E); rows are C^{2E}-orthonormal unless
    ``normalization`` is "l2", in which case the reconstructed functions are
    L2-orthonormal on the graph.
    """

    lam: float
    kind: str
    kval: float
    multiplicity: int
    vectors: np.ndarray
    normalization: str = "amplitude"
    n: int | None = None

    def waves(self, graph: MetricGraph, which: int = 0) -> dict[int, EdgeWave]:
        c = self.vectors[which]
        out = {}
        for i, e in enumerate(graph.edges):
            out[e.id] = EdgeWave(e.id, e.length, self.kind, self.kval, complex(c[2 * i]), complex(c[2 * i + 1]))
        return out


@dataclass
class SpectrumSlice:
    """Eigenpairs in a lambda-window, sorted, with the winding certificate."""

    eigenpairs: list[Eigenpair]
    lam_lo: float
    lam_hi: float
    winding: int
    exhaustive: bool = True

    def total_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.eigenpairs)

    def flat(self) -> list[tuple[int, float, Eigenpair, int]]:
        """(n, lambda, eigenpair, copy index) with n counting multiplicity."""
        out = []
        n = self.eigenpairs[0].n if self.eigenpairs and self.eigenpairs[0].n else 1
        for e in self.eigenpairs:
            base = e.n if e.n is not None else n
            for j in range(e.multiplicity):
                out.append((base + j, e.lam, e, j))
            n = base + e.multiplicity
        return out


def _osc_coeff_to_amplitudes(graph: MetricGraph, k: float, coeffs: np.ndarray) -> np.ndarray:
    """Convert real-basis {cos, sin} coefficients to bond amplitudes (a, b).

    f = p cos(kx) + q sin(kx) = a e^{ikx} + b e^{ik(l-x)} with
    a = (p - iq)/2 ... b = e^{-ikl} (p + iq)/2.
    """
    out = np.zeros(coeffs.shape, dtype=complex)
    for i, e in enumerate(graph.edges):
        p, q = coeffs[2 * i], coeffs[2 * i + 1]
        out[2 * i] = 0.5 * (p - 1j * q)
        out[2 * i + 1] = 0.5 * (p + 1j * q) * np.exp(-1j * k * e.length)
    return out


def amplitudes(graph: MetricGraph, assignment: ConditionAssignment, k: float, multiplicity: int) -> np.ndarray:
    """Orthonormal basis of ker(I - U(k)) as bond-amplitude vectors."""
    U = build_U(graph, assignment, k)
    n = U.shape[0]
    u, s, vt = np.linalg.svd(np.eye(n, dtype=complex) - U)
    vecs = vt[n - multiplicity:].conj()
    residual = np.max(np.abs((np.eye(n) - U) @ vecs.T)) if multiplicity else 0.0
    if residual > 1e-9:
        raise StaleEigenvalueError(f"kernel residual {residual:.2e} at k={k}; not an eigenvalue?")
    return vecs


def eigen_norm_sq(graph: MetricGraph, eig: Eigenpair, which: int = 0) -> float:
    """Exact L2 norm squared of the reconstructed eigenfunction."""
    return sum(w.norm_sq() for w in eig.waves(graph, which).values())


def l2_normalize(eig: Eigenpair, graph: MetricGraph) -> Eigenpair:
    """Rescale (and for multiple eigenvalues, re-orthogonalize) to unit L2 norm.

    Uses the exact closed-form edge integrals, never quadrature.
    """
    m = eig.multiplicity
    waves = [eig.waves(graph, j) for j in range(m)]
    gram = np.zeros((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            gram[i, j] = sum(inner(waves[i][e.id], waves[j][e.id]) for e in graph.edges)
    evals, evecs = np.linalg.eigh(gram)
    if np.any(evals <= 0):
        raise SolverError("degenerate Gram matrix in L2 normalization")
    transform = evecs @ np.diag(evals ** -0.5)
    newvecs = (eig.vectors.T @ transform).T
    return replace(eig, vectors=newvecs, normalization="l2")


# ---------------------------------------------------------------------------
# negative spectrum
# ---------------------------------------------------------------------------


def _local_kappa_candidates(graph: MetricGraph, assignment: ConditionAssignment) -> list[float]:
    """kappa values of per-vertex bound states (poles of S(i*kappa)).

    Deep negative eigenvalues sit exponentially close to these, so the scan
    grid is densified around them.
    """
    cands = []
    for v, cond in assignment.items():
        if cond.kind != DELTA_S or cond.t == 0.0 or math.isinf(cond.t):
            continue
        deg = graph.degree(v)
        if cond.alpha == 0.0:
            if cond.t < 0.0:
                cands.append(-cond.t / deg)
            continue
        if deg == 1:
            A, B = condition_matrices_deg1(cond.alpha, cond.t, graph.endpoints_at(v)[0].end)
            if B[0, 0] != 0.0:
                r = A[0, 0] / B[0, 0]
                if r > 0:
                    cands.append(r)
            continue
        A, B = condition_matrices(cond.alpha, cond.t)
        c2 = B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0]
        c1 = -(A[0, 0] * B[1, 1] + A[1, 1] * B[0, 0] - A[0, 1] * B[1, 0] - A[1, 0] * B[0, 1])
        c0 = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        for r in np.roots([c2, c1, c0]):
            if abs(r.imag) < 1e-12 and r.real > 0:
                cands.append(float(r.real))
    return sorted(cands)


def spectral_lower_bound(graph: MetricGraph, assignment: ConditionAssignment) -> float:
    """Explicit (coarse) lower bound on the spectrum from the quadratic form."""
    cmax = 0.0
    for v, cond in assignment.items():
        if graph.degree(v) == 1:
            c = boundary_coefficient_deg1(cond, graph.endpoints_at(v)[0].end)
        else:
            c = boundary_coefficient(cond)
        cmax = max(cmax, min(c, 1e8))
    if cmax == 0.0:
        return 0.0
    lmin = graph.min_edge_length()
    return -2.0 * cmax * (1.0 / lmin + 4.0 * cmax)


def _logdet(graph, assignment, kappa):
    M = condition_system(graph, assignment, EXP, kappa)
    sign, logabs = np.linalg.slogdet(M)
    return float(sign), float(logabs)


def negative_spectrum(graph: MetricGraph, assignment: ConditionAssignment) -> list[Eigenpair]:
    """All eigenvalues lambda < 0, found on kappa = sqrt(-lambda) > 0.

    Scans the (pole-free) condition-system determinant over an adaptively
    expanded window: candidate bound-state kappas get densified grids and the
    window keeps doubling until a doubling finds nothing new and the
    form-derived lower bound is covered.
    """
    kappa_min = 1e-6
    cands = _local_kappa_candidates(graph, assignment)
    bound = spectral_lower_bound(graph, assignment)
    if bound == 0.0 and not cands:
        return []  # the form is nonnegative, so there is no negative spectrum
    kappa_form = math.sqrt(-bound) if bound < 0 else 0.0
    hi = max([2.0, 3.0 / graph.min_edge_length()] + [1.5 * c for c in cands])

    found: list[tuple[float, int, np.ndarray]] = []
    scanned_hi = kappa_min

    def scan(lo, hi_):
        grid = list(np.linspace(lo, hi_, 600))
        for c in cands:
            if lo <= c <= hi_ or (c < hi_ * 1.3):
                grid.extend(c * np.linspace(0.7, 1.3, 241))
        grid = np.unique([g for g in grid if lo <= g <= hi_])
        if len(grid) < 2:
            return
        vals = [_logdet(graph, assignment, g) for g in grid]
        signs = np.array([v[0] for v in vals])
        logs = np.array([v[1] for v in vals])
        shift = np.max(logs[np.isfinite(logs)]) if np.any(np.isfinite(logs)) else 0.0

        def f(kap):
            s, la = _logdet(graph, assignment, kap)
            return s * math.exp(min(la - shift, 200.0))

        for i in range(len(grid) - 1):
            if signs[i] != 0 and signs[i + 1] != 0 and signs[i] != signs[i + 1]:
                root = brentq(f, grid[i], grid[i + 1], xtol=1e-13, rtol=8.9e-16)
                _record(root)
        # even-order roots: local minima of log|det| dipping well below neighbors
        for i in range(1, len(grid) - 1):
            if logs[i] < logs[i - 1] and logs[i] < logs[i + 1] and signs[i] == signs[i - 1] == signs[i + 1]:
                if logs[i] < shift - 6.0:
                    res = minimize_scalar(
                        lambda kap: _logdet(graph, assignment, kap)[1],
                        bounds=(grid[i - 1], grid[i + 1]),
                        method="bounded",
                        options={"xatol": 1e-13},
                    )
                    _record(float(res.x), require_kernel=True)

    def _record(kappa, require_kernel=False):
        M = condition_system(graph, assignment, EXP, kappa)
        dim, vecs, s = _kernel(M, tol=1e-9)
        if dim == 0:
            if require_kernel:
                return
            dim, vecs, s = _kernel(M, tol=1e-6)
            if dim == 0:
                return
        for k0, _, _ in found:
            if abs(k0 - kappa) < 1e-9 * max(1.0, kappa):
                return
        found.append((kappa, dim, vecs))

    scan(kappa_min, hi)
    scanned_hi = hi
    while True:
        before = len(found)
        new_hi = 2.0 * scanned_hi
        scan(scanned_hi, new_hi)
        scanned_hi = new_hi
        if len(found) == before and scanned_hi >= min(kappa_form, 1e7):
            break
        if scanned_hi > 1e9:
            raise IncompleteSliceError("negative-spectrum window expansion did not stabilize", found)

    out = []
    for kappa, dim, vecs in sorted(found):
        out.append(Eigenpair(-kappa ** 2, EXP, kappa, dim, vecs))
    return out


# ---------------------------------------------------------------------------
# top-level searches
# ---------------------------------------------------------------------------


def _phase_speed_bound(graph, assignment) -> float:
    """Coarse bound on a single eigenphase's d(theta)/dk, for the step size.

    Bond propagation contributes at most l_max; a k-dependent scattering
    block at a delta_s vertex contributes up to ~2/|t| near k ~ |t| (capped,
    since step validation handles the narrow fast regions anyway).
    """
    speed = max(e.length for e in graph.edges)
    for v, cond in assignment.items():
        if cond.kind == DELTA_S and cond.t != 0.0 and not math.isinf(cond.t):
            speed += min(2.0 / abs(cond.t), 20.0)
        elif cond.kind == DELTA_S and math.isinf(cond.t):
            continue
    return speed


def _positive_eigenpairs(graph, assignment, k_lo, k_hi) -> tuple[list[Eigenpair], int]:
    if k_hi <= k_lo:
        return [], 0
    h0 = min(0.45 * math.pi / _phase_speed_bound(graph, assignment), (k_hi - k_lo))
    m = _Marcher(graph, assignment)
    events = _merge_crossings(m.run(k_lo, k_hi, h0))
    pairs = []
    winding = 0
    for ev in events:
        winding += ev.count
        vecs = amplitudes(graph, assignment, ev.k, ev.count)
        pairs.append(Eigenpair(ev.k ** 2, OSC, ev.k, ev.count, vecs))
    return pairs, winding


def find_eigenvalues(
    graph: MetricGraph,
    assignment: ConditionAssignment,
    lam_lo: float,
    lam_hi: float,
) -> SpectrumSlice:
    """All eigenvalues with lam_lo <= lambda <= lam_hi, with multiplicities."""
    pairs: list[Eigenpair] = []
    if lam_lo < 0.0:
        for e in negative_spectrum(graph, assignment):
            if lam_lo <= e.lam <= lam_hi:
                pairs.append(e)
    if lam_lo <= 0.0 <= lam_hi:
        dim, vecs = zero_modes(graph, assignment)
        if dim:
            pairs.append(Eigenpair(0.0, LIN, 0.0, dim, vecs))
    winding = 0
    if lam_hi > 0.0:
        k_lo = math.sqrt(max(lam_lo, 0.0))
        k_lo = max(k_lo, 1e-7)
        k_hi = math.sqrt(lam_hi)
        pos, winding = _positive_eigenpairs(graph, assignment, k_lo, k_hi)
        pairs.extend(pos)
    pairs.sort(key=lambda e: e.lam)
    return SpectrumSlice(pairs, lam_lo, lam_hi, winding)


def full_spectrum(graph: MetricGraph, assignment: ConditionAssignment, lam_max: float) -> SpectrumSlice:
    """Spectrum from the bottom up to lam_max, with 1-based indices n."""
    sl = find_eigenvalues(graph, assignment, -math.inf, lam_max)
    n = 1
    indexed = []
    for e in sl.eigenpairs:
        indexed.append(replace(e, n=n))
        n += e.multiplicity
    sl.eigenpairs = indexed
    return sl


def eigenvalue_count_below(graph: MetricGraph, assignment: ConditionAssignment, lam: float, lam_floor: float) -> int:
    """Number of eigenvalues in [lam_floor, lam), counted with multiplicity."""
    sl = find_eigenvalues(graph, assignment, lam_floor, lam)
    return sum(e.multiplicity for e in sl.eigenpairs if e.lam < lam)
