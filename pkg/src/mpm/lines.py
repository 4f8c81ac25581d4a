"""Admissible lines, push maps, and restriction of 2-parameter presentations.

An admissible line is l(t) = t*v + w with v > 0 and min(v) = 1.  The
push of a grade a is the smallest t with l(t) >= a, i.e.
max_i (a_i - w_i) / v_i.  Degenerate axis-parallel limits (used by the
matching-distance compactification) are represented separately; their
push is max(a_i - w_i, 0) over the remaining finite-direction
coordinate, the pointwise limit of the admissible formula.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .barcode import Barcode
from .errors import DataError
from .grades import Grade, rat
from .onepar import barcode_of
from .presentation import Presentation


@dataclass(frozen=True)
class AdmissibleLine:
    """l(t) = t*v + w with v > 0 and min(v) = 1."""

    v: Grade
    w: Grade

    def __post_init__(self):
        v = tuple(rat(c) for c in self.v)
        w = tuple(rat(c) for c in self.w)
        if len(v) != 2 or len(w) != 2:
            raise DataError("admissible lines live in the plane")
        if min(v) != 1 or any(c <= 0 for c in v):
            raise DataError(f"direction {v} is not admissible (need v > 0, min(v) = 1)")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)

    def __call__(self, t) -> Grade:
        t = rat(t)
        return (t * self.v[0] + self.w[0], t * self.v[1] + self.w[1])


@dataclass(frozen=True)
class LimitLine:
    """Axis-parallel limit of admissible lines; only push is defined.

    axis is the coordinate whose direction component stayed at 1.
    """

    axis: int
    w: Grade

    def __post_init__(self):
        if self.axis not in (0, 1):
            raise DataError("axis must be 0 or 1")
        object.__setattr__(self, "w", tuple(rat(c) for c in self.w))


Line = Union[AdmissibleLine, LimitLine]


def canonicalize_line(v_raw, w_raw) -> AdmissibleLine:
    """Scale the direction to min(v) = 1 and slide the base to min(w) = 0.

    Barcodes of a module along the original and the canonical line agree
    up to a common parameter translation.
    """
    v = tuple(rat(c) for c in v_raw)
    w = tuple(rat(c) for c in w_raw)
    if len(v) != 2 or len(w) != 2:
        raise DataError("expected a direction and base point in the plane")
    if any(c <= 0 for c in v):
        raise DataError(f"direction {v} must be strictly positive")
    scale = min(v)
    v = (v[0] / scale, v[1] / scale)
    t0 = min(w[0] / v[0], w[1] / v[1])
    w = (w[0] - t0 * v[0], w[1] - t0 * v[1])
    return AdmissibleLine(v, w)


def push(line: Line, a: Grade) -> Fraction:
    """Minimal t with l(t) >= a (limit value for degenerate lines)."""
    a = tuple(rat(c) for c in a)
    if isinstance(line, LimitLine):
        i = line.axis
        return max(a[i] - line.w[i], Fraction(0))
    return max((a[0] - line.w[0]) / line.v[0], (a[1] - line.w[1]) / line.v[1])


def restrict_presentation(P: Presentation, line: Line) -> Presentation:
    """The induced 1-parameter presentation of coker(P) along the line.

    Same underlying matrix; every label is replaced by its push value.
    """
    if P.n_params != 2:
        raise DataError("restriction applies to 2-parameter presentations")
    rows = tuple((push(line, g),) for g in P.row_labels)
    cols = tuple((push(line, g),) for g in P.col_labels)
    return Presentation(P.field, 1, rows, cols, P.columns)


def barcode_along_line(P: Presentation, line: Line) -> Barcode:
    return barcode_of(restrict_presentation(P, line))


def parse_line(text: str) -> AdmissibleLine:
    """CLI literal ``"v1,v2;w1,w2"`` with exact decimals or rationals.

    The direction is scaled to min(v) = 1 (required for admissibility);
    the base point is kept as given, so push values follow the stated w.
    """
    try:
        v_part, w_part = text.split(";")
        v = tuple(rat(tok.strip()) for tok in v_part.split(","))
        w = tuple(rat(tok.strip()) for tok in w_part.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise DataError(f"bad line literal {text!r}: {exc}") from exc
    if len(v) != 2 or len(w) != 2 or any(c <= 0 for c in v):
        raise DataError(f"bad line literal {text!r}: need positive v1,v2;w1,w2")
    scale = min(v)
    return AdmissibleLine((v[0] / scale, v[1] / scale), w)
