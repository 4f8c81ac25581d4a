"""Bifiltered cell complexes, free-module kernels, homology presentations.

The kernel of a morphism of free modules is free for n <= 2 parameters.
kernel_basis computes a basis that is also a Groebner basis for the
colexicographically ordered domain basis (pairwise distinct leading
components): the columns are swept once per distinct y-grade, in
ascending x within the sweep, reducing images against a fresh echelon
whose combinations are tracked; a column whose image dies yields a
syzygy whose grade is the join of its support grades.  A candidate is
kept only if it is outside the span of the already-emitted generators
at its own grade (a single colex pass would emit wrong grades: three
columns hitting one generator at grades (0,2), (2,0), (1,1) must
produce kernel generators at (2,1) and (1,2), not (2,2)).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DataError, ParseError
from .field import ColumnEchelon, PrimeField, SparseCol, col_axpy
from .grades import (Grade, format_grade, grade_leq, join_all, parse_grade,
                     rat, show_grade)
from .presentation import Column, Presentation, labels


# ---------------------------------------------------------------------------
# filtered complexes

Cell = tuple[str, int, Grade]


class FilteredComplex:
    """Finite CW/simplicial complex with a monotone grade per cell.

    boundary[cell id] lists (face id, coefficient) pairs over the field;
    faces must have dimension one lower, grades must be monotone, and
    the composite boundary must vanish.
    """

    __slots__ = ("field", "n_params", "cells", "boundary", "_index")

    def __init__(self, field: PrimeField, n_params: int,
                 cells: Iterable[Cell],
                 boundary: Mapping[str, Iterable[tuple[str, int]]]):
        if n_params not in (1, 2):
            raise DataError(f"n_params must be 1 or 2, got {n_params}")
        self.field = field
        self.n_params = n_params
        frozen_cells = []
        for cid, dim, grade in cells:
            cid = str(cid)
            if dim < 0:
                raise DataError(f"cell {cid} has negative dimension")
            grade = tuple(rat(c) for c in grade)
            if len(grade) != n_params:
                raise DataError(f"cell {cid}: grade {grade} is not {n_params}-dimensional")
            frozen_cells.append((cid, dim, grade))
        self.cells: tuple[Cell, ...] = tuple(frozen_cells)
        self._index = {cid: i for i, (cid, _, _) in enumerate(self.cells)}
        if len(self._index) != len(self.cells):
            raise DataError("duplicate cell ids")
        bnd = {}
        for cid, _, _ in self.cells:
            entries = []
            for fid, coeff in boundary.get(cid, ()):
                fid = str(fid)
                coeff = coeff % field.q
                if coeff:
                    entries.append((fid, coeff))
            bnd[cid] = tuple(entries)
        self.boundary: dict[str, tuple[tuple[str, int], ...]] = bnd
        self._validate()

    def _validate(self):
        for cid, dim, grade in self.cells:
            for fid, _ in self.boundary[cid]:
                if fid not in self._index:
                    raise DataError(f"cell {cid}: unknown face {fid}")
                f_id, f_dim, f_grade = self.cells[self._index[fid]]
                if f_dim != dim - 1:
                    raise DataError(f"cell {cid}: face {fid} has dimension {f_dim}, expected {dim - 1}")
                if not grade_leq(f_grade, grade):
                    raise DataError(
                        f"grades not monotone: face {fid} at {show_grade(f_grade)} "
                        f"≰ cell {cid} at {show_grade(grade)}")
        q = self.field.q
        for cid, dim, _ in self.cells:
            if dim < 2:
                continue
            acc: dict[str, int] = {}
            for fid, c1 in self.boundary[cid]:
                for gid, c2 in self.boundary[fid]:
                    acc[gid] = (acc.get(gid, 0) + c1 * c2) % q
            if any(acc.values()):
                raise DataError(f"boundary of boundary of {cid} is nonzero")

    def grade_of(self, cid: str) -> Grade:
        return self.cells[self._index[cid]][2]

    def cells_of_dim(self, dim: int) -> list[Cell]:
        return [c for c in self.cells if c[1] == dim]

    def max_dim(self) -> int:
        return max((c[1] for c in self.cells), default=-1)

    def with_grades(self, grades: Mapping[str, Grade]) -> "FilteredComplex":
        cells = [(cid, dim, grades[cid]) for cid, dim, _ in self.cells]
        return FilteredComplex(self.field, self.n_params, cells, self.boundary)

    def grade_map(self) -> dict[str, Grade]:
        return {cid: grade for cid, _, grade in self.cells}

    @staticmethod
    def from_simplices(field: PrimeField, n_params: int,
                       simplices: Mapping[tuple, Grade]) -> "FilteredComplex":
        """Simplicial input: keys are vertex tuples, boundaries implied.

        Every proper face of a listed simplex must be listed too.
        """
        def cid(vs) -> str:
            return "-".join(str(v) for v in vs)

        keyed = {tuple(sorted(vs)): grade for vs, grade in simplices.items()}
        cells = []
        boundary = {}
        for vs in sorted(keyed, key=lambda t: (len(t), t)):
            dim = len(vs) - 1
            cells.append((cid(vs), dim, keyed[vs]))
            faces = []
            if dim > 0:
                for i in range(len(vs)):
                    face = vs[:i] + vs[i + 1:]
                    if face not in keyed:
                        raise DataError(f"missing face {face} of simplex {vs}")
                    faces.append((cid(face), (-1) ** i % field.q))
            boundary[cid(vs)] = faces
        return FilteredComplex(field, n_params, cells, boundary)


# ---------------------------------------------------------------------------
# free morphisms

@dataclass(frozen=True)
class FreeMorphism:
    """Matrix of a morphism of free modules, with basis grades."""

    field: PrimeField
    n_params: int
    codomain_grades: tuple[Grade, ...]  # row grades
    domain_grades: tuple[Grade, ...]    # column grades
    columns: tuple[Column, ...]

    def __post_init__(self):
        pres = self.to_presentation()  # validates entries and label order
        object.__setattr__(self, "columns", pres.columns)
        object.__setattr__(self, "codomain_grades", pres.row_labels)
        object.__setattr__(self, "domain_grades", pres.col_labels)

    def to_presentation(self) -> Presentation:
        return Presentation(self.field, self.n_params,
                            tuple(self.codomain_grades),
                            tuple(self.domain_grades),
                            tuple(self.columns))

    def column_dicts(self) -> list[SparseCol]:
        return [dict(col) for col in self.columns]


def boundary_morphism(X: FilteredComplex, j: int) -> FreeMorphism:
    """Matrix of the j-th boundary map of the associated chain complex."""
    if j < 0:
        raise DataError("boundary degree must be nonnegative")
    rows = X.cells_of_dim(j - 1) if j >= 1 else []
    cols = X.cells_of_dim(j)
    row_pos = {cid: i for i, (cid, _, _) in enumerate(rows)}
    columns = []
    for cid, _, _ in cols:
        entries: dict[int, int] = {}
        for fid, coeff in X.boundary[cid]:
            entries[row_pos[fid]] = (entries.get(row_pos[fid], 0) + coeff) % X.field.q
        columns.append(tuple(sorted((r, v) for r, v in entries.items() if v)))
    return FreeMorphism(X.field, X.n_params,
                        tuple(g for _, _, g in rows),
                        tuple(g for _, _, g in cols),
                        tuple(columns))


# ---------------------------------------------------------------------------
# kernel bases

@dataclass(frozen=True)
class KernelBasis:
    """Basis of ker(gamma) with the colex Groebner property.

    columns[i] is the coordinate vector of the i-th basis element over
    the domain basis of gamma; grades[i] is the join of the grades of
    its support; leads[i] the colex-largest support index.
    """

    domain_grades: tuple[Grade, ...]
    grades: tuple[Grade, ...]
    columns: tuple[Column, ...]
    leads: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.columns)


class _Elem:
    __slots__ = ("vec", "grade")

    def __init__(self, vec: SparseCol, grade: Grade):
        self.vec = vec
        self.grade = grade


def _support_grade(vec: SparseCol, grades: Sequence[Grade]) -> Grade:
    return join_all(grades[i] for i in vec)


def _place_distinct_lead(elem: _Elem, by_lead: dict[int, _Elem],
                         rank: Mapping[int, int], grades: Sequence[Grade],
                         field: PrimeField) -> None:
    """Insert elem keeping leading components pairwise distinct.

    Conflicting leads always have comparable grades (their lead shares
    the binding coordinate), so the smaller-grade element stays and the
    other is reduced by it.  Reductions never change an element's grade
    (all bases of a free module share the same grade multiset).
    """
    q = field.q
    while True:
        if not elem.vec:
            raise AssertionError("basis element reduced to zero")
        lead = max(elem.vec, key=lambda t: rank[t])
        other = by_lead.get(lead)
        if other is None:
            by_lead[lead] = elem
            return
        if grade_leq(other.grade, elem.grade):
            factor = elem.vec[lead] * field.inv(other.vec[lead]) % q
            col_axpy(elem.vec, factor, other.vec, q)
            if elem.vec and _support_grade(elem.vec, grades) != elem.grade:
                raise AssertionError("lead reduction changed a basis grade")
        elif grade_leq(elem.grade, other.grade):
            by_lead[lead] = elem
            elem = other
        else:
            raise AssertionError("incomparable grades share a leading component")


def kernel_basis(gamma: FreeMorphism) -> KernelBasis:
    """Groebner kernel basis for a morphism with n_params in {1, 2}."""
    dg = gamma.domain_grades
    k = len(dg)
    field = gamma.field
    colex_order = sorted(range(k), key=lambda i: (tuple(reversed(dg[i])), i))
    rank = {i: r for r, i in enumerate(colex_order)}
    cols = gamma.column_dicts()

    if gamma.n_params == 1:
        slices: list = [None]
    else:
        slices = sorted({g[1] for g in dg})

    emitted: list[_Elem] = []
    by_lead: dict[int, _Elem] = {}
    for y in slices:
        if y is None:
            active = sorted(range(k), key=lambda i: (dg[i], i))
        else:
            active = sorted((i for i in range(k) if dg[i][1] <= y),
                            key=lambda i: (dg[i][0], i))
        ech = ColumnEchelon(field, track=True)
        for i in active:
            res, combo = ech.insert(cols[i], tag=i)
            if res:
                continue
            vec: SparseCol = {i: 1}
            for t, v in combo.items():
                w = (vec.get(t, 0) - v) % field.q
                if w:
                    vec[t] = w
                else:
                    vec.pop(t, None)
            grade = _support_grade(vec, dg)
            span = ColumnEchelon(field)
            for e in emitted:
                if grade_leq(e.grade, grade):
                    span.insert(dict(e.vec))
            if span.contains(vec):
                continue
            elem = _Elem(vec, grade)
            _place_distinct_lead(elem, by_lead, rank, dg, field)
            emitted.append(elem)
    lead_of = {id(e): lead for lead, e in by_lead.items()}
    return KernelBasis(
        dg,
        tuple(e.grade for e in emitted),
        tuple(tuple(sorted(e.vec.items())) for e in emitted),
        tuple(lead_of[id(e)] for e in emitted))


def grade_injections(gamma: FreeMorphism, C: KernelBasis):
    """Injective maps j_x, j_y from kernel elements to domain basis indices.

    j_y(c) is the colex leading component of a lead-reduced copy of the
    basis (its y-grade equals c's); j_x mirrors it with the roles of the
    coordinates swapped (lex order).  Returns (j_x, j_y) as tuples of
    domain indices parallel to C.
    """
    if gamma.n_params != 2:
        raise DataError("grade injections are defined for 2-parameter morphisms")
    dg = gamma.domain_grades
    k = len(dg)
    field = gamma.field

    def side(rank_key, coord: int) -> tuple[int, ...]:
        rank = {i: r for r, i in enumerate(sorted(range(k), key=rank_key))}
        entries = [_Elem(dict(col), grade) for col, grade in zip(C.columns, C.grades)]
        by_lead: dict[int, _Elem] = {}
        for e in entries:
            _place_distinct_lead(e, by_lead, rank, dg, field)
        lead_of = {id(e): lead for lead, e in by_lead.items()}
        out = []
        for e, grade in zip(entries, C.grades):
            lead = lead_of[id(e)]
            if dg[lead][coord] != grade[coord]:
                raise AssertionError("leading component misses the binding coordinate")
            out.append(lead)
        if len(set(out)) != len(out):
            raise AssertionError("grade injection is not injective")
        return tuple(out)

    j_y = side(lambda i: (tuple(reversed(dg[i])), i), 1)
    j_x = side(lambda i: (dg[i], i), 0)
    return j_x, j_y


# ---------------------------------------------------------------------------
# homology presentations and the lifting construction

def homology_presentation(X: FilteredComplex, j: int) -> Presentation:
    """A presentation of the degree-j homology of the sublevel filtration.

    Rows are a kernel basis of the j-th boundary map (for one parameter
    this is the tracked graded-SNF reduction), columns the (j+1)-cells,
    entries the coordinates of their boundaries in the kernel basis.
    """
    if j < 0:
        raise DataError("homology degree must be nonnegative")
    gamma = boundary_morphism(X, j)
    K = kernel_basis(gamma)
    gamma_up = boundary_morphism(X, j + 1)
    ech = ColumnEchelon(X.field, track=True)
    for idx, col in enumerate(K.columns):
        ech.insert(dict(col), tag=idx)
    columns = []
    for col in gamma_up.columns:
        coords = ech.solve(dict(col))  # unique: kernel columns are independent
        columns.append(tuple(sorted(coords.items())))
    return Presentation(X.field, X.n_params, K.grades,
                        gamma_up.domain_grades, tuple(columns))


def lift_presentations(P_M: Presentation, P_N: Presentation):
    """CW-complex realizing both presentations as degree-1 homology.

    One vertex at the joint coordinatewise minimum of all labels, one
    1-cell per row (attached at both ends to the vertex, so the degree-1
    boundary vanishes), one 2-cell per column with cellular boundary
    equal to that column.  Returns (X, f, g) where X carries the f
    grades and f, g map cell ids to grades; ||f - g||_p equals the label
    distance of the pair.
    """
    if not P_M.underlying_equal(P_N):
        raise DataError("lifting requires presentations with the same underlying matrix")
    if P_M.n_params != 2 or P_N.n_params != 2:
        raise DataError("lifting is defined for 2-parameter presentations")
    all_labels = labels(P_M) + labels(P_N)
    if all_labels:
        vx = min(g[0] for g in all_labels)
        vy = min(g[1] for g in all_labels)
    else:
        vx = vy = Fraction(0)
    base = (vx, vy)

    def build(P: Presentation) -> FilteredComplex:
        cells = [("v", 0, base)]
        cells += [(f"e{i}", 1, P.row_labels[i]) for i in range(P.n_rows)]
        cells += [(f"t{j}", 2, P.col_labels[j]) for j in range(P.n_cols)]
        boundary = {f"t{j}": tuple((f"e{r}", v) for r, v in P.columns[j])
                    for j in range(P.n_cols)}
        return FilteredComplex(P.field, 2, cells, boundary)

    X = build(P_M)
    build(P_N)  # validates monotonicity of the g grades as well
    f = X.grade_map()
    g = dict(f)
    for i in range(P_N.n_rows):
        g[f"e{i}"] = P_N.row_labels[i]
    for j in range(P_N.n_cols):
        g[f"t{j}"] = P_N.col_labels[j]
    return X, f, g


# ---------------------------------------------------------------------------
# the .cwf format

def parse_complex(text: str) -> FilteredComplex:
    """Parse the ``.cwf`` format: header lines then one line per cell,
    ``<id> <dim> <grade...> : <face-id> <coeff> ...``."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            rows.append((lineno, stripped))
    if not rows or rows[0][1].split() != ["cwf", "1"]:
        raise ParseError("expected 'cwf 1' header", rows[0][0] if rows else 1)
    rows.pop(0)

    def keyword(kw: str) -> int:
        if not rows:
            raise ParseError(f"missing '{kw}' line")
        lineno, line = rows.pop(0)
        toks = line.split()
        if len(toks) != 2 or toks[0] != kw:
            raise ParseError(f"expected '{kw} <int>', got {line!r}", lineno)
        try:
            return int(toks[1])
        except ValueError as exc:
            raise ParseError(f"bad integer {toks[1]!r}", lineno) from exc

    q = keyword("field")
    n_params = keyword("params")
    try:
        field = PrimeField(q)
    except DataError as exc:
        raise ParseError(str(exc)) from exc
    cells = []
    boundary = {}
    for lineno, line in rows:
        head, _, tail = line.partition(":")
        toks = head.split()
        if len(toks) != 2 + n_params:
            raise ParseError("expected '<id> <dim> <grade...> : ...'", lineno)
        cid = toks[0]
        try:
            dim = int(toks[1])
            grade = parse_grade(toks[2:], n_params)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), lineno) from exc
        face_toks = tail.split()
        if len(face_toks) % 2:
            raise ParseError("boundary must be '<face-id> <coeff>' pairs", lineno)
        faces = []
        for fid, ctok in zip(face_toks[::2], face_toks[1::2]):
            try:
                coeff = int(ctok)
            except ValueError as exc:
                raise ParseError(f"bad coefficient {ctok!r}", lineno) from exc
            if not 0 < coeff < q:
                raise ParseError(f"coefficient {coeff} outside the field F_{q}", lineno)
            faces.append((fid, coeff))
        cells.append((cid, dim, grade))
        boundary[cid] = tuple(faces)
    try:
        return FilteredComplex(field, n_params, cells, boundary)
    except DataError as exc:
        raise ParseError(str(exc)) from exc


def serialize_complex(X: FilteredComplex) -> str:
    out = ["cwf 1", f"field {X.field.q}", f"params {X.n_params}"]
    for cid, dim, grade in X.cells:
        entries = " ".join(f"{fid} {v}" for fid, v in X.boundary[cid])
        out.append(f"{cid} {dim} {format_grade(grade)} :" + (f" {entries}" if entries else ""))
    return "\n".join(out) + "\n"
