"""One-parameter presentations: graded normal form and barcodes.

The reduction is the persistence-style column reduction: rows and
columns are sorted by label (ties by index), columns are processed left
to right, and a column is repeatedly reduced by the earlier column
owning its lowest nonzero row.  Every operation adds an earlier-labeled
column to a later one, hence is admissible.  The final cleanup that
empties pivot rows above the pivots amounts to row operations
row_i += a * row_p with i earlier than p in label order (admissible);
at the time a pivot row is processed in decreasing order it is a
singleton, so the net effect is dropping the non-pivot entries of the
pivot columns.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .barcode import Barcode
from .errors import DataError
from .field import PrimeField, SparseCol, col_axpy
from .grades import INF
from .presentation import Presentation


def reduce_columns(columns: list[SparseCol], field: PrimeField):
    """Left-to-right column reduction with largest-row pivots.

    columns are consumed in list order and row indices must already be
    renumbered by processing rank.  Returns (reduced columns, pivot map
    row -> column index).
    """
    q = field.q
    pivots: dict[int, int] = {}
    reduced: list[SparseCol] = []
    for j, col in enumerate(columns):
        col = dict(col)
        while col:
            r = max(col)
            owner = pivots.get(r)
            if owner is None:
                break
            other = reduced[owner]
            factor = col[r] * field.inv(other[r]) % q
            col_axpy(col, factor, other, q)
        reduced.append(col)
        if col:
            pivots[max(col)] = j
    return reduced, pivots


def barcode_pairs(row_values: Sequence, col_values: Sequence,
                  columns: list[SparseCol], field: PrimeField):
    """Pivot pairs and essential births of a 1-parameter reduction.

    Label values only need to be totally ordered (Fractions or floats),
    which lets the matching-distance fast path reuse this routine.
    Returns ([(birth, death) pivot pairs], [essential births]).
    """
    row_order = sorted(range(len(row_values)), key=lambda i: (row_values[i], i))
    row_rank = {orig: rank for rank, orig in enumerate(row_order)}
    col_order = sorted(range(len(col_values)), key=lambda j: (col_values[j], j))
    permuted = [{row_rank[r]: v for r, v in columns[j].items()} for j in col_order]
    _, pivots = reduce_columns(permuted, field)
    pairs = [(row_values[row_order[r]], col_values[col_order[j]])
             for r, j in pivots.items()]
    essential = [row_values[row_order[r]]
                 for r in range(len(row_values)) if r not in pivots]
    return pairs, essential


@dataclass(frozen=True)
class NormalForm:
    """Graded normal form: at most one nonzero entry per row and column."""

    presentation: Presentation          # reduced matrix, label-sorted bases
    pivots: dict[int, int]              # column index -> row index (sorted order)
    row_order: tuple[int, ...]          # sorted position -> original row index
    col_order: tuple[int, ...]


def reduce_to_normal_form(P: Presentation) -> NormalForm:
    """Reduce a 1-parameter presentation by admissible operations only."""
    if P.n_params != 1:
        raise DataError("normal form reduction requires a 1-parameter presentation")
    row_order = tuple(sorted(range(P.n_rows), key=lambda i: (P.row_labels[i], i)))
    row_rank = {orig: rank for rank, orig in enumerate(row_order)}
    col_order = tuple(sorted(range(P.n_cols), key=lambda j: (P.col_labels[j], j)))
    permuted = [{row_rank[r]: v for r, v in P.columns[j]} for j in col_order]
    reduced, pivots = reduce_columns(permuted, P.field)
    # pivot rows are cleared above their pivot (admissible row additions)
    columns = []
    for j, col in enumerate(reduced):
        if col:
            r = max(col)
            columns.append(((r, col[r]),))
        else:
            columns.append(())
    pres = Presentation(
        P.field, 1,
        tuple(P.row_labels[i] for i in row_order),
        tuple(P.col_labels[j] for j in col_order),
        tuple(columns))
    return NormalForm(pres, {j: r for r, j in pivots.items()}, row_order, col_order)


def barcode_of(P: Presentation) -> Barcode:
    """Barcode of coker(P) for a 1-parameter presentation.

    Pivot pairs with distinct labels give bars [row label, column label);
    equal-label pivot pairs are dropped; zero rows give [row label, inf).
    """
    if P.n_params != 1:
        raise DataError("barcodes require a 1-parameter presentation")
    pairs, essential = barcode_pairs(
        [g[0] for g in P.row_labels], [g[0] for g in P.col_labels],
        P.column_dicts(), P.field)
    bars = [(b, d) for b, d in pairs if b != d]
    bars.extend((b, INF) for b in essential)
    return Barcode(bars)


def interpolation_breakpoints(L0: Sequence[Fraction], L1: Sequence[Fraction]) -> list[Fraction]:
    """Parameters t in (0, 1) where interpolated labels cross.

    The labels at time t are (1-t) L0 + t L1; a pair (i, j) crosses at
    t = d0 / (d0 - d1) with d0 = L0_i - L0_j and d1 = L1_i - L1_j when
    d0 != d1.  Between consecutive breakpoints the weak order of the
    labels is constant, and the endpoint label vectors are compatible
    with every interior one.
    """
    if len(L0) != len(L1):
        raise DataError("label vectors differ in length")
    cuts = set()
    n = len(L0)
    for i in range(n):
        for j in range(i + 1, n):
            d0 = L0[i] - L0[j]
            d1 = L1[i] - L1[j]
            if d0 == d1:
                continue
            t = Fraction(d0, d0 - d1)
            if 0 < t < 1:
                cuts.add(t)
    return sorted(cuts)
