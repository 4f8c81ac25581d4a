"""Certified approximation of the p-matching distance on bipersistence modules.

Lines are drawn from a compact parameter square: s in [-C, C] encodes
the base point (s >= 0 -> w = (s, 0), s < 0 -> w = (0, -s)) and mu in
[-1, 1] the direction (mu >= 0 -> v = (1, 1/(1-mu)), mu < 0 ->
v = (1/(1+mu), 1)); |mu| = 1 are the axis-parallel limit lines.  After
jointly translating both modules into [0, C]^2, pushed labels are
constant in s beyond |s| = C, so the square captures the supremum over
all admissible lines.

In each sign quadrant of the chart the push of a fixed grade is the max
of two expressions that are affine in each parameter separately (one of
them constant or single-variable), so its extrema over a box sit on the
corners of the quadrant-split sub-boxes.  label_deviation evaluates
those corners exactly; the branch-and-bound loop uses a float twin of
the same formulas with a small inflation (~1e-9) on every upper-bound
term, and the final lower bound is re-evaluated in exact arithmetic at
the best line found (p in {1, inf}).
"""
from __future__ import annotations

import heapq
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DataError, SubdivisionLimitError
from .grades import (INF, Extended, Grade, PExp, as_pexp, is_inf, pexp_integral,
                     rat, vec_pnorm)
from .lines import AdmissibleLine, Line, LimitLine, barcode_along_line
from .onepar import barcode_pairs
from .presentation import Presentation, labels
from .wasserstein import bottleneck_assignment, min_cost_assignment, wasserstein


def parallel_map(fn, items: Sequence):
    """Map with an optional thread pool capped by MPM_THREADS (default 1)."""
    items = list(items)
    try:
        workers = int(os.environ.get("MPM_THREADS", "1") or "1")
    except ValueError:
        workers = 1
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# the line chart

@dataclass(frozen=True)
class LineParam:
    """Chart coordinates of a (possibly degenerate) admissible line."""

    s: Fraction
    mu: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s", rat(self.s))
        object.__setattr__(self, "mu", rat(self.mu))
        if not -1 <= self.mu <= 1:
            raise DataError(f"mu = {self.mu} outside [-1, 1]")


def _base_point(s: Fraction) -> Grade:
    return (s, Fraction(0)) if s >= 0 else (Fraction(0), -s)


def line_of_param(q: LineParam) -> Line:
    """The admissible line of a chart point; |mu| = 1 gives the limit line."""
    w = _base_point(q.s)
    if q.mu == 1:
        return LimitLine(0, w)
    if q.mu == -1:
        return LimitLine(1, w)
    if q.mu >= 0:
        return AdmissibleLine((Fraction(1), 1 / (1 - q.mu)), w)
    return AdmissibleLine((1 / (1 + q.mu), Fraction(1)), w)


def push_param(a: Grade, s: Fraction, mu: Fraction) -> Fraction:
    """Exact push of a grade along the chart line (valid on the boundary)."""
    ax, ay = a
    if s >= 0:
        wx, wy = s, Fraction(0)
    else:
        wx, wy = Fraction(0), -s
    if mu >= 0:
        return max(ax - wx, (1 - mu) * (ay - wy))
    return max((1 + mu) * (ax - wx), ay - wy)


@dataclass(frozen=True)
class ParamBox:
    """A rectangle in the (s, mu) chart."""

    s_lo: Fraction
    s_hi: Fraction
    mu_lo: Fraction
    mu_hi: Fraction

    def __post_init__(self):
        for name in ("s_lo", "s_hi", "mu_lo", "mu_hi"):
            object.__setattr__(self, name, rat(getattr(self, name)))
        if self.s_lo > self.s_hi or self.mu_lo > self.mu_hi:
            raise DataError("empty parameter box")
        if not (-1 <= self.mu_lo and self.mu_hi <= 1):
            raise DataError("box leaves the parameter square")

    @property
    def center(self) -> LineParam:
        return LineParam((self.s_lo + self.s_hi) / 2, (self.mu_lo + self.mu_hi) / 2)


def label_deviation(a: Grade, box: ParamBox) -> Fraction:
    """Exact sup over the box of |push - push at the box center|.

    Extrema over each sign quadrant sit on sub-box corners, so the grid
    of boundary and zero cuts is evaluated exactly.
    """
    a = (rat(a[0]), rat(a[1]))
    center = box.center
    pc = push_param(a, center.s, center.mu)
    s_cuts = {box.s_lo, box.s_hi}
    if box.s_lo < 0 < box.s_hi:
        s_cuts.add(Fraction(0))
    mu_cuts = {box.mu_lo, box.mu_hi}
    if box.mu_lo < 0 < box.mu_hi:
        mu_cuts.add(Fraction(0))
    vals = [push_param(a, s, mu) for s in s_cuts for mu in mu_cuts]
    return max(max(vals) - pc, pc - min(vals))


def local_bound(label_vec: Sequence[Grade], box: ParamBox, p: PExp) -> Extended:
    """lp-norm of the per-label push deviations over the box.

    This bounds how far the pushed label vector can move from its value
    at the box center, hence (through the 1-parameter inequality
    d_W <= label distance) the change of the per-line Wasserstein
    distance across the box.
    """
    p = as_pexp(p)
    devs = [label_deviation(a, box) for a in label_vec]
    return vec_pnorm(devs, p)


def sampled_lower_bound(P_M: Presentation, P_N: Presentation, p: PExp,
                        lines: Sequence[Line]) -> Extended:
    """Max of the exact per-line Wasserstein distances (a valid lower bound)."""
    p = as_pexp(p)

    def value(line: Line) -> Extended:
        return wasserstein(barcode_along_line(P_M, line),
                           barcode_along_line(P_N, line), p)

    best: Extended = Fraction(0)
    for v in parallel_map(value, lines):
        if v > best:
            best = v
    return best


# ---------------------------------------------------------------------------
# float fast path

_INFLATE = 1e-9


def _push_f(ax: float, ay: float, s: float, mu: float) -> float:
    if s >= 0.0:
        wx, wy = s, 0.0
    else:
        wx, wy = 0.0, -s
    if mu >= 0.0:
        return max(ax - wx, (1.0 - mu) * (ay - wy))
    return max((1.0 + mu) * (ax - wx), ay - wy)


def _deviation_f(ax: float, ay: float, sl, sh, ml, mh) -> float:
    pc = _push_f(ax, ay, (sl + sh) / 2, (ml + mh) / 2)
    s_cuts = (sl, sh) if not sl < 0.0 < sh else (sl, 0.0, sh)
    mu_cuts = (ml, mh) if not ml < 0.0 < mh else (ml, 0.0, mh)
    hi = lo = pc
    for s in s_cuts:
        for mu in mu_cuts:
            v = _push_f(ax, ay, s, mu)
            if v > hi:
                hi = v
            if v < lo:
                lo = v
    return max(hi - pc, pc - lo)


class _ModuleData:
    """Float label data of one presentation, translated to [0, C]^2."""

    def __init__(self, P: Presentation, ux: Fraction, uy: Fraction):
        self.rows = [(float(g[0] - ux), float(g[1] - uy)) for g in P.row_labels]
        self.cols = [(float(g[0] - ux), float(g[1] - uy)) for g in P.col_labels]
        self.columns = P.column_dicts()
        self.field = P.field
        self.all = self.rows + self.cols

    def bars(self, s: float, mu: float):
        row_vals = [_push_f(x, y, s, mu) for x, y in self.rows]
        col_vals = [_push_f(x, y, s, mu) for x, y in self.cols]
        pairs, essential = barcode_pairs(row_vals, col_vals, self.columns, self.field)
        finite = [(b, d) for b, d in pairs if d > b]
        return finite, essential

    def bound(self, sl, sh, ml, mh, pf: Optional[float]) -> float:
        devs = [_deviation_f(x, y, sl, sh, ml, mh) for x, y in self.all]
        if pf is None:
            return max(devs, default=0.0)
        if pf == 1.0:
            return sum(devs)
        return sum(d ** pf for d in devs) ** (1.0 / pf)


def _dw_f(finB, essB, finC, essC, pf: Optional[float]) -> float:
    """Float p-Wasserstein between bar lists; pf None means p = inf."""
    if len(essB) != len(essC):
        return INF
    essB, essC = sorted(essB), sorted(essC)
    if pf is None:
        ess = max((abs(b - c) for b, c in zip(essB, essC)), default=0.0)
        pair = [[max(abs(b[0] - c[0]), abs(b[1] - c[1])) for c in finC] for b in finB]
        diag_l = [(b[1] - b[0]) / 2 for b in finB]
        diag_r = [(c[1] - c[0]) / 2 for c in finC]
        fin, _ = bottleneck_assignment(pair, diag_l, diag_r)
        return max(ess, float(fin))
    one = pf == 1.0
    if one:
        ess = sum(abs(b - c) for b, c in zip(essB, essC))
    else:
        ess = sum(abs(b - c) ** pf for b, c in zip(essB, essC))
    m, n = len(finB), len(finC)
    size = m + n
    if size == 0:
        return ess if one else ess ** (1.0 / pf)
    if one:
        diag_c = [abs(c[1] - c[0]) for c in finC]
    else:
        diag_c = [2.0 * (abs(c[1] - c[0]) / 2) ** pf for c in finC]
    cost = [[0.0] * size for _ in range(size)]
    for i, b in enumerate(finB):
        if one:
            dl = abs(b[1] - b[0])
            row = [abs(b[0] - c[0]) + abs(b[1] - c[1]) for c in finC]
        else:
            dl = 2.0 * (abs(b[1] - b[0]) / 2) ** pf
            row = [abs(b[0] - c[0]) ** pf + abs(b[1] - c[1]) ** pf for c in finC]
        row.extend(dl for _ in range(n, size))
        cost[i] = row
    for i in range(m, size):
        for j in range(n):
            cost[i][j] = diag_c[j]
    assign = min_cost_assignment(cost)
    total = ess + sum(cost[i][assign[i]] for i in range(size))
    return total if one else total ** (1.0 / pf)


# ---------------------------------------------------------------------------
# the branch-and-bound approximation

@dataclass
class DistanceReport:
    """Certified bounds: lower <= d_M^p <= upper, upper - lower <= epsilon."""

    p: PExp
    epsilon: float
    lower: Extended
    upper: Extended
    lines_evaluated: int
    argmax_line: LineParam
    translation: Grade
    converged: bool = True
    max_depth_seen: int = 0

    def argmax_admissible(self) -> Line:
        """The best line found, in the original (untranslated) coordinates."""
        line = line_of_param(self.argmax_line)
        ux, uy = self.translation
        w = (line.w[0] + ux, line.w[1] + uy)
        if isinstance(line, LimitLine):
            return LimitLine(line.axis, w)
        return AdmissibleLine(line.v, w)


def _exact_line_value(P_M, P_N, lp: LineParam, translation: Grade, p) -> Extended:
    line = line_of_param(lp)
    ux, uy = translation
    moved = (line.w[0] + ux, line.w[1] + uy)
    line = LimitLine(line.axis, moved) if isinstance(line, LimitLine) \
        else AdmissibleLine(line.v, moved)
    return wasserstein(barcode_along_line(P_M, line),
                       barcode_along_line(P_N, line), p)


def approx_matching_distance(P_M: Presentation, P_N: Presentation, p: PExp,
                             epsilon, max_depth: int = 60) -> DistanceReport:
    """Approximate d_M^p(M, N) with certificate upper - lower <= epsilon.

    lower is the max of per-line distances over the evaluated box
    centers (re-evaluated exactly at the best line for p in {1, inf});
    upper adds the local push-deviation bounds of the live boxes.
    Boxes are processed best-first by upper bound and split one
    direction at a time by the rule in split_candidates; children whose
    bound cannot beat the current lower are pruned.  Raises
    SubdivisionLimitError (with the partial report attached) if the
    depth guard is hit.
    """
    p = as_pexp(p)
    eps = float(epsilon)
    if not eps > 0:
        raise DataError("epsilon must be positive")
    for P in (P_M, P_N):
        if P.n_params != 2:
            raise DataError("matching distance requires 2-parameter presentations")

    all_labels = labels(P_M) + labels(P_N)
    if not all_labels:
        zero_param = LineParam(0, 0)
        return DistanceReport(p, eps, Fraction(0), Fraction(0), 0, zero_param,
                              (Fraction(0), Fraction(0)))
    ux = min(g[0] for g in all_labels)
    uy = min(g[1] for g in all_labels)
    translation = (ux, uy)
    C = max(max(g[0] - ux for g in all_labels), max(g[1] - uy for g in all_labels))
    Cf = float(C)
    if Fraction(Cf) < C:
        Cf = math.nextafter(Cf, math.inf)

    M = _ModuleData(P_M, ux, uy)
    N = _ModuleData(P_N, ux, uy)
    pf = None if is_inf(p) else float(p)

    def line_value(s: float, mu: float) -> float:
        finB, essB = M.bars(s, mu)
        finC, essC = N.bars(s, mu)
        return _dw_f(finB, essB, finC, essC, pf)

    def box_bound(sl, sh, ml, mh) -> float:
        b = M.bound(sl, sh, ml, mh, pf) + N.bound(sl, sh, ml, mh, pf)
        return b * (1.0 + 1e-12) + _INFLATE

    root = (-Cf, Cf, -1.0, 1.0)
    root_val = line_value(0.0, 0.0)
    evaluated = 1
    argmax = LineParam(0, 0)
    if is_inf(root_val):
        return DistanceReport(p, eps, INF, INF, evaluated, argmax, translation)
    if P_M == P_N:
        return DistanceReport(p, eps, Fraction(0), Fraction(0), evaluated,
                              argmax, translation)

    lower = root_val
    goal = eps * (1.0 - 1e-6)
    counter = 0
    heap = [(-(root_val + box_bound(*root)), counter, root, 0)]
    max_depth_seen = 0

    def make_report(upper_f: float, converged: bool) -> DistanceReport:
        if pexp_integral(p) or is_inf(p):
            exact_lower = _exact_line_value(P_M, P_N, argmax, translation, p)
        else:
            exact_lower = lower
        upper_out: Extended = max(upper_f, float(exact_lower))
        report = DistanceReport(p, eps, exact_lower, upper_out, evaluated,
                                argmax, translation, converged, max_depth_seen)
        assert float(report.lower) <= float(report.upper) + 1e-9
        return report

    def split_candidates(box):
        """Candidate splits: midpoints and, when straddled, the sign seams.

        Pushes are flat or affine within each sign quadrant of the
        chart, so cutting at 0 isolates flat regions (bound 0) at once.
        Returns (children, bounds) or None for a point box.
        """
        sl, sh, ml, mh = box
        cands = []
        for cut in ((sl + sh) / 2, 0.0):
            if sl < cut < sh:
                cands.append((0, cut, [(sl, cut, ml, mh), (cut, sh, ml, mh)]))
        for cut in ((ml + mh) / 2, 0.0):
            if ml < cut < mh:
                cands.append((1, cut, [(sl, sh, ml, cut), (sl, sh, cut, mh)]))
        if not cands:
            return None
        best = None
        for axis, cut, children in cands:
            bnds = [box_bound(*ch) for ch in children]
            # sum-of-children ranks a split that flattens one child above
            # one that merely halves both; max alone cannot see that
            key = (sum(bnds), max(bnds), axis, cut)
            if best is None or key < best[0]:
                best = (key, children, bnds)
        return best[1], best[2]

    while heap:
        neg_upper, _, box, depth = heap[0]
        upper_top = -neg_upper
        if upper_top <= lower + goal:
            return make_report(max(float(lower), upper_top), True)
        heapq.heappop(heap)
        if depth >= max_depth:
            raise SubdivisionLimitError(
                f"subdivision depth limit {max_depth} reached",
                make_report(max(float(lower), upper_top), False))
        max_depth_seen = max(max_depth_seen, depth + 1)
        split = split_candidates(box)
        if split is None:
            # point box: its only line is the (already evaluated) center
            continue
        children, bnds = split
        centers = [((a + b) / 2, (c + d) / 2) for a, b, c, d in children]
        values = parallel_map(lambda sm: line_value(*sm), centers)
        for child, (cs, cmu), val, bnd in zip(children, centers, values, bnds):
            evaluated += 1
            if val > lower:
                lower = val
                argmax = LineParam(Fraction(cs), Fraction(cmu))
            upper_child = val + bnd
            if upper_child > lower:
                counter += 1
                heapq.heappush(heap, (-upper_child, counter, child, depth + 1))
    return make_report(float(lower), True)
