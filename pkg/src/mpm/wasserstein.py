"""Exact p-Wasserstein and bottleneck distances between barcodes.

A bar [a1, a2) is identified with the point (a1, a2); unmatched bars pay
the lp-distance to their diagonal projection m(a).  The convention
inf - inf = 0 makes a matched pair of essential bars cost only the birth
difference, while an unmatched essential bar (or an essential bar
matched to a finite one) costs inf.

Essential bars therefore pre-partition: they are matched among
themselves, and on a line the sorted pairing is optimal for every
p >= 1 (and for the bottleneck).  The finite bars go through a
min-cost assignment on an augmented square matrix (one diagonal ghost
per bar, ghosts mutually free), solved by shortest augmenting paths in
exact rational arithmetic; for p = inf a threshold search with a
maximum bipartite matching is used instead.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .barcode import Bar, Barcode
from .errors import DataError
from .grades import (INF, Extended, PExp, abs_power, as_pexp, ext_abs_diff,
                     is_inf, pexp_integral, pth_root)


@dataclass(frozen=True)
class Matching:
    """Partial matching between two barcodes, as index pairs (i in B, j in C)."""

    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        left = [i for i, _ in self.pairs]
        right = [j for _, j in self.pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise DataError("an index appears in more than one matched pair")


@dataclass(frozen=True)
class WassersteinResult:
    p: PExp
    value: Extended          # the distance; Fraction for p in {1, inf}, else float
    power: Optional[Extended]  # exact sum of p-th powers for finite integral p
    matching: Matching


# ---------------------------------------------------------------------------
# bar costs

def _pair_power(a: Bar, b: Bar, p: PExp) -> Extended:
    d1 = abs(a[0] - b[0])
    d2 = ext_abs_diff(a[1], b[1])
    if is_inf(d2):
        return INF
    return abs_power(d1, p) + abs_power(d2, p)


def _diag_power(a: Bar, p: PExp) -> Extended:
    if is_inf(a[1]):
        return INF
    half = (a[1] - a[0]) / 2
    return 2 * abs_power(half, p)


def _pair_inf(a: Bar, b: Bar) -> Extended:
    d2 = ext_abs_diff(a[1], b[1])
    if is_inf(d2):
        return INF
    return max(abs(a[0] - b[0]), d2)


def _diag_inf(a: Bar) -> Extended:
    return INF if is_inf(a[1]) else (a[1] - a[0]) / 2


def matching_cost_power(B: Barcode, C: Barcode, sigma: Matching, p: PExp) -> Extended:
    """Sum of p-th powers of the cost terms of sigma (finite p)."""
    p = as_pexp(p)
    if is_inf(p):
        raise DataError("matching_cost_power requires finite p")
    matched_b = set()
    matched_c = set()
    total: Extended = Fraction(0)
    for i, j in sigma.pairs:
        if not (0 <= i < len(B) and 0 <= j < len(C)):
            raise DataError(f"matching pair ({i}, {j}) out of range")
        matched_b.add(i)
        matched_c.add(j)
        term = _pair_power(B[i], C[j], p)
        if is_inf(term):
            return INF
        total = total + term
    for i in range(len(B)):
        if i not in matched_b:
            term = _diag_power(B[i], p)
            if is_inf(term):
                return INF
            total = total + term
    for j in range(len(C)):
        if j not in matched_c:
            term = _diag_power(C[j], p)
            if is_inf(term):
                return INF
            total = total + term
    return total


def matching_cost(B: Barcode, C: Barcode, sigma: Matching, p: PExp) -> Extended:
    """cost(sigma, p): lp-aggregated matched and diagonal terms."""
    p = as_pexp(p)
    if is_inf(p):
        best: Extended = Fraction(0)
        matched_b = set()
        matched_c = set()
        for i, j in sigma.pairs:
            if not (0 <= i < len(B) and 0 <= j < len(C)):
                raise DataError(f"matching pair ({i}, {j}) out of range")
            matched_b.add(i)
            matched_c.add(j)
            best = max(best, _pair_inf(B[i], C[j]))
        for i in range(len(B)):
            if i not in matched_b:
                best = max(best, _diag_inf(B[i]))
        for j in range(len(C)):
            if j not in matched_c:
                best = max(best, _diag_inf(C[j]))
        return best
    power = matching_cost_power(B, C, sigma, p)
    if is_inf(power):
        return INF
    if p == 1:
        return power
    return pth_root(power, p)


# ---------------------------------------------------------------------------
# exact min-cost assignment (shortest augmenting paths with potentials)

def min_cost_assignment(cost: Sequence[Sequence]) -> list[int]:
    """Optimal assignment of a square cost matrix with finite entries.

    Entries may be Fractions or floats (not mixed with inf).  Returns
    row_to_col.  Standard O(n^3) Jonker-Volgenant style algorithm; with
    Fraction entries every comparison is exact.
    """
    n = len(cost)
    if n == 0:
        return []
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    match = [0] * (n + 1)  # column -> row, 1-based, 0 = free
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv: list = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = INF
            j1 = 0
            row = cost[i0 - 1]
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                elif not is_inf(minv[j]):
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    row_to_col = [0] * n
    for j in range(1, n + 1):
        if match[j]:
            row_to_col[match[j] - 1] = j - 1
    return row_to_col


# ---------------------------------------------------------------------------
# maximum bipartite matching (Hopcroft-Karp), for the bottleneck search

def max_bipartite_matching(n_left: int, n_right: int,
                           adj: Sequence[Sequence[int]]) -> list[int]:
    """Hopcroft-Karp; adj[u] lists right neighbors of left node u.

    Returns match_left (right index or -1 per left node).
    """
    inf = float("inf")
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    while True:
        dist = [0 if match_l[u] == -1 else inf for u in range(n_left)]
        queue = [u for u in range(n_left) if match_l[u] == -1]
        found = False
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            for w in adj[u]:
                nxt = match_r[w]
                if nxt == -1:
                    found = True
                elif dist[nxt] == inf:
                    dist[nxt] = dist[u] + 1
                    queue.append(nxt)
        if not found:
            break

        def dfs(u: int) -> bool:
            for w in adj[u]:
                nxt = match_r[w]
                if nxt == -1 or (dist[nxt] == dist[u] + 1 and dfs(nxt)):
                    match_l[u] = w
                    match_r[w] = u
                    return True
            dist[u] = inf
            return False

        for u in range(n_left):
            if match_l[u] == -1:
                dfs(u)
    return match_l


def bottleneck_assignment(pair_cost, diag_left, diag_right):
    """Min over matchings of the max cost term, for finite bars only.

    pair_cost: m x n matrix; diag_left/diag_right: diagonal costs.
    Returns (value, pairs) where pairs matches left to right indices.
    """
    m, n = len(diag_left), len(diag_right)
    if m == 0 and n == 0:
        return Fraction(0), []
    candidates = sorted(set([Fraction(0)] + list(diag_left) + list(diag_right) +
                            [pair_cost[i][j] for i in range(m) for j in range(n)]))

    def matching_at(thr):
        # left: bars of B then n ghosts; right: bars of C then m ghosts
        adj = []
        for i in range(m):
            nbrs = [j for j in range(n) if pair_cost[i][j] <= thr]
            if diag_left[i] <= thr:
                nbrs.extend(range(n, n + m))
            adj.append(nbrs)
        for k in range(n):
            nbrs = list(range(n, n + m))
            if diag_right[k] <= thr:
                nbrs = [k] + nbrs
            adj.append(nbrs)
        return max_bipartite_matching(m + n, n + m, adj)

    lo, hi = 0, len(candidates) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        ml = matching_at(candidates[mid])
        if all(w != -1 for w in ml):
            best = (candidates[mid], ml)
            hi = mid - 1
        else:
            lo = mid + 1
    assert best is not None  # the largest candidate is always feasible
    value, ml = best
    pairs = [(i, ml[i]) for i in range(m) if ml[i] < n]
    return value, pairs


# ---------------------------------------------------------------------------
# the distance

def _split(B: Barcode):
    fin, ess = [], []
    for idx, bar in enumerate(B.bars):
        (ess if is_inf(bar[1]) else fin).append(idx)
    return fin, ess


def _essential_pairs(B: Barcode, C: Barcode, ess_b, ess_c):
    """Sorted-birth pairing; optimal on a line for every p and for p = inf."""
    bs = sorted(ess_b, key=lambda i: B[i][0])
    cs = sorted(ess_c, key=lambda j: C[j][0])
    return list(zip(bs, cs))


def wasserstein_full(B: Barcode, C: Barcode, p: PExp) -> WassersteinResult:
    """Minimal matching cost between B and C, with a realizing matching."""
    p = as_pexp(p)
    fin_b, ess_b = _split(B)
    fin_c, ess_c = _split(C)
    if len(ess_b) != len(ess_c):
        return WassersteinResult(p, INF, INF if not is_inf(p) else None,
                                 Matching(frozenset()))
    ess_pairs = _essential_pairs(B, C, ess_b, ess_c)

    if is_inf(p):
        ess_val: Extended = Fraction(0)
        for i, j in ess_pairs:
            ess_val = max(ess_val, abs(B[i][0] - C[j][0]))
        pair_cost = [[_pair_inf(B[i], C[j]) for j in fin_c] for i in fin_b]
        diag_l = [_diag_inf(B[i]) for i in fin_b]
        diag_r = [_diag_inf(C[j]) for j in fin_c]
        fin_val, fin_pairs = bottleneck_assignment(pair_cost, diag_l, diag_r)
        pairs = [(fin_b[i], fin_c[j]) for i, j in fin_pairs]
        value = max(ess_val, fin_val)
        return WassersteinResult(p, value, None,
                                 Matching(frozenset(pairs + ess_pairs)))

    exact = pexp_integral(p)
    ess_power: Extended = Fraction(0)
    for i, j in ess_pairs:
        ess_power = ess_power + abs_power(B[i][0] - C[j][0], p)

    m, n = len(fin_b), len(fin_c)
    size = m + n
    zero = Fraction(0) if exact else 0.0

    def pw(x: Extended) -> Extended:
        return x if exact else float(x)

    diag_c = [pw(_diag_power(C[j], p)) for j in fin_c]
    cost = [[zero] * size for _ in range(size)]
    for a in range(m):
        dl = pw(_diag_power(B[fin_b[a]], p))
        for b in range(n):
            cost[a][b] = pw(_pair_power(B[fin_b[a]], C[fin_c[b]], p))
        for b in range(n, size):
            cost[a][b] = dl
    for a in range(m, size):
        for b in range(n):
            cost[a][b] = diag_c[b]
    row_to_col = min_cost_assignment(cost)
    fin_power: Extended = zero
    pairs = list(ess_pairs)
    for a in range(size):
        b = row_to_col[a]
        fin_power = fin_power + cost[a][b]
        if a < m and b < n:
            pairs.append((fin_b[a], fin_c[b]))
    power = ess_power + fin_power
    if p == 1:
        value: Extended = power
    else:
        value = pth_root(power, p) if exact else float(power) ** (1.0 / float(p))
    return WassersteinResult(p, value, power if exact else None,
                             Matching(frozenset(pairs)))


def wasserstein(B: Barcode, C: Barcode, p: PExp) -> Extended:
    """p-Wasserstein distance; exact Fraction for p in {1, inf}."""
    return wasserstein_full(B, C, p).value


def wasserstein_power(B: Barcode, C: Barcode, p: PExp) -> Extended:
    """Exact minimal sum of p-th powers (finite integral p only)."""
    p = as_pexp(p)
    if not pexp_integral(p):
        raise DataError("wasserstein_power requires a finite integral p")
    res = wasserstein_full(B, C, p)
    return res.power


# ---------------------------------------------------------------------------
# brute-force oracle

def brute_force_full(B: Barcode, C: Barcode, p: PExp) -> WassersteinResult:
    """Exhaustive minimum over all matchings; instances of total size <= 12."""
    p = as_pexp(p)
    if len(B) + len(C) > 12:
        raise DataError("brute force limited to |B| + |C| <= 12 bars")
    nb, nc = len(B), len(C)
    use_max = is_inf(p)

    diag_b = [_diag_inf(B[i]) if use_max else _diag_power(B[i], p) for i in range(nb)]
    diag_c = [_diag_inf(C[j]) if use_max else _diag_power(C[j], p) for j in range(nc)]

    best: dict = {"val": INF, "pairs": frozenset()}

    def combine(acc, term):
        return max(acc, term) if use_max else acc + term

    def leaf_tail(used_c):
        acc: Extended = Fraction(0)
        for j in range(nc):
            if j not in used_c:
                if is_inf(diag_c[j]):
                    return INF
                acc = combine(acc, diag_c[j])
        return acc

    def rec(i: int, used_c: set, acc: Extended, pairs: list):
        if acc >= best["val"]:
            return
        if i == nb:
            total = combine(acc, leaf_tail(used_c))
            if total < best["val"]:
                best["val"] = total
                best["pairs"] = frozenset(pairs)
            return
        # leave B[i] unmatched
        if not is_inf(diag_b[i]):
            rec(i + 1, used_c, combine(acc, diag_b[i]), pairs)
        # or match it to any unused bar of C
        for j in range(nc):
            if j in used_c:
                continue
            term = _pair_inf(B[i], C[j]) if use_max else _pair_power(B[i], C[j], p)
            if is_inf(term):
                continue
            used_c.add(j)
            pairs.append((i, j))
            rec(i + 1, used_c, combine(acc, term), pairs)
            pairs.pop()
            used_c.remove(j)

    rec(0, set(), Fraction(0), [])
    val = best["val"]
    if is_inf(val):
        return WassersteinResult(p, INF, INF if not use_max else None,
                                 Matching(frozenset()))
    if use_max:
        return WassersteinResult(p, val, None, Matching(best["pairs"]))
    value = val if p == 1 else pth_root(val, p)
    return WassersteinResult(p, value, val if pexp_integral(p) else None,
                             Matching(best["pairs"]))


def brute_force_wasserstein(B: Barcode, C: Barcode, p: PExp) -> Extended:
    return brute_force_full(B, C, p).value
