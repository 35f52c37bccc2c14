"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` (always reduced, positive
denominator). Matrices are stored sparsely as ``{(row, col): value}`` with
zero entries never stored. Ranks are computed by fraction-free (Bareiss)
elimination on integer rows; kernels and coordinate solves use Gauss-Jordan
over the rationals with the same deterministic pivot rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

Scalar = Fraction
Vector = tuple[Fraction, ...]

__all__ = [
    "Scalar",
    "Vector",
    "Matrix",
    "Subspace",
    "Quotient",
    "LinalgError",
    "ContainmentError",
    "WellDefinednessError",
    "to_scalar",
    "rank",
    "kernel_basis",
    "image_basis",
    "quotient",
    "induced_on_quotient",
]


class LinalgError(ValueError):
    pass


class ContainmentError(LinalgError):
    """A subspace generator is not contained in the claimed super-space."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class WellDefinednessError(LinalgError):
    """A linear map does not descend to the requested quotient."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


def to_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact or boolean scalar {x!r}")
    return Fraction(x)


class Matrix:
    """Immutable sparse rational matrix."""

    __slots__ = ("rows", "cols", "_entries", "_by_row")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        if rows < 0 or cols < 0:
            raise LinalgError("matrix dimensions must be non-negative")
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise LinalgError(f"entry ({i}, {j}) outside {rows}x{cols}")
            v = to_scalar(v)
            if v:
                clean[(i, j)] = v
        self.rows = rows
        self.cols = cols
        self._entries = clean
        self._by_row: dict[int, dict[int, Fraction]] | None = None

    # construction helpers

    @classmethod
    def zero(cls, rows: int, cols: int) -> Matrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[object]], cols: int | None = None) -> Matrix:
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise LinalgError("ragged row data")
            for j, v in enumerate(row):
                entries[(i, j)] = v
        return cls(rows, cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]], rows: int) -> Matrix:
        entries = {}
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise LinalgError("column length does not match row count")
            for i, v in enumerate(col):
                entries[(i, j)] = v
        return cls(rows, len(columns), entries)

    @classmethod
    def block(cls, blocks: Sequence[Sequence[Matrix]]) -> Matrix:
        """Assemble a block matrix; row heights and column widths must agree."""
        heights = [row[0].rows for row in blocks]
        widths = [m.cols for m in blocks[0]] if blocks else []
        entries: dict[tuple[int, int], Fraction] = {}
        r0 = 0
        for bi, row in enumerate(blocks):
            if len(row) != len(widths):
                raise LinalgError("block rows have different lengths")
            c0 = 0
            for bj, m in enumerate(row):
                if m.rows != heights[bi] or m.cols != widths[bj]:
                    raise LinalgError(f"block ({bi}, {bj}) has shape {m.shape}")
                for (i, j), v in m._entries.items():
                    entries[(r0 + i, c0 + j)] = v
                c0 += widths[bj]
            r0 += heights[bi]
        out = cls(sum(heights), sum(widths))
        out._entries = entries
        return out

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> Mapping[tuple[int, int], Fraction]:
        return dict(self._entries)

    def nnz(self) -> int:
        return len(self._entries)

    def fill(self) -> float:
        size = self.rows * self.cols
        return len(self._entries) / size if size else 0.0

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._entries.get((i, j), Fraction(0))

    def row_dicts(self) -> dict[int, dict[int, Fraction]]:
        if self._by_row is None:
            by_row: dict[int, dict[int, Fraction]] = {}
            for (i, j), v in self._entries.items():
                by_row.setdefault(i, {})[j] = v
            self._by_row = by_row
        return self._by_row

    def column(self, j: int) -> Vector:
        col = [Fraction(0)] * self.rows
        for (i, jj), v in self._entries.items():
            if jj == j:
                col[i] = v
        return tuple(col)

    def columns(self) -> list[Vector]:
        cols = [[Fraction(0)] * self.rows for _ in range(self.cols)]
        for (i, j), v in self._entries.items():
            cols[j][i] = v
        return [tuple(c) for c in cols]

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return not self._entries

    # algebra

    def transpose(self) -> Matrix:
        out = Matrix(self.cols, self.rows)
        out._entries = {(j, i): v for (i, j), v in self._entries.items()}
        return out

    @property
    def T(self) -> Matrix:
        return self.transpose()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, nnz={len(self._entries)})"

    def _combine(self, other: Matrix, sign: int) -> Matrix:
        if self.shape != other.shape:
            raise LinalgError(f"shape mismatch {self.shape} vs {other.shape}")
        entries = dict(self._entries)
        for k, v in other._entries.items():
            s = entries.get(k, 0) + sign * v
            if s:
                entries[k] = s
            else:
                entries.pop(k, None)
        out = Matrix(self.rows, self.cols)
        out._entries = entries
        return out

    def __add__(self, other: Matrix) -> Matrix:
        return self._combine(other, 1)

    def __sub__(self, other: Matrix) -> Matrix:
        return self._combine(other, -1)

    def __neg__(self) -> Matrix:
        return self.scale(-1)

    def scale(self, c) -> Matrix:
        c = to_scalar(c)
        out = Matrix(self.rows, self.cols)
        if c:
            out._entries = {k: v * c for k, v in self._entries.items()}
        return out

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise LinalgError(f"cannot multiply {self.shape} by {other.shape}")
            right = other.row_dicts()
            acc: dict[tuple[int, int], Fraction] = {}
            for (i, k), a in self._entries.items():
                rk = right.get(k)
                if not rk:
                    continue
                for j, b in rk.items():
                    key = (i, j)
                    acc[key] = acc.get(key, 0) + a * b
            out = Matrix(self.rows, other.cols)
            out._entries = {k: v for k, v in acc.items() if v}
            return out
        vec = tuple(other)
        if len(vec) != self.cols:
            raise LinalgError(f"vector of length {len(vec)} does not fit {self.shape}")
        res = [Fraction(0)] * self.rows
        for (i, j), a in self._entries.items():
            if vec[j]:
                res[i] += a * vec[j]
        return tuple(res)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        rpos = {r: a for a, r in enumerate(rows)}
        cpos = {c: b for b, c in enumerate(cols)}
        out = Matrix(len(rows), len(cols))
        out._entries = {
            (rpos[i], cpos[j]): v
            for (i, j), v in self._entries.items()
            if i in rpos and j in cpos
        }
        return out


def _as_matrix(m) -> Matrix:
    return m if isinstance(m, Matrix) else Matrix.from_rows(m)


def _integer_rows(m: Matrix) -> list[tuple[int, dict[int, int]]]:
    """Clear denominators row by row; row scaling does not change rank."""
    out = []
    for i, row in sorted(m.row_dicts().items()):
        den = lcm(*(v.denominator for v in row.values()))
        out.append((i, {j: int(v * den) for j, v in row.items()}))
    return out


def rank(m) -> int:
    """Exact rank over the rationals.

    Fraction-free Bareiss elimination. At each step the pivot column is the
    lowest column still occupied; the pivot row is the one with the
    smallest-magnitude entry there, ties going to the lowest row index.
    """
    m = _as_matrix(m)
    active = _integer_rows(m)
    prev = 1
    r = 0
    while active:
        col = min(min(row) for _, row in active)
        piv_idx, (piv_row_id, piv_row) = min(
            ((k, item) for k, item in enumerate(active) if col in item[1]),
            key=lambda t: (abs(t[1][1][col]), t[1][0]),
        )
        pv = piv_row[col]
        nxt = []
        for k, (rid, row) in enumerate(active):
            if k == piv_idx:
                continue
            a = row.get(col, 0)
            new: dict[int, int] = {}
            if a:
                for j in row.keys() | piv_row.keys():
                    if j == col:
                        continue
                    num = pv * row.get(j, 0) - a * piv_row.get(j, 0)
                    if num:
                        q, rem = divmod(num, prev)
                        if rem:
                            raise AssertionError("Bareiss division not exact")
                        new[j] = q
            else:
                for j, v in row.items():
                    q, rem = divmod(pv * v, prev)
                    if rem:
                        raise AssertionError("Bareiss division not exact")
                    new[j] = q
            if new:
                nxt.append((rid, new))
        prev = pv
        r += 1
        active = nxt
    return r


def _rref(m: Matrix) -> tuple[list[int], list[dict[int, Fraction]]]:
    """Reduced row echelon form over the rationals.

    Returns pivot columns (ascending) and the matching reduced rows, each
    normalised to a leading 1.
    """
    active = [(i, dict(row)) for i, row in sorted(m.row_dicts().items())]
    pivots: list[tuple[int, dict[int, Fraction]]] = []
    while active:
        col = min(min(row) for _, row in active)
        piv_idx, (_, piv_row) = min(
            ((k, item) for k, item in enumerate(active) if col in item[1]),
            key=lambda t: (abs(t[1][1][col]), t[1][0]),
        )
        inv = 1 / piv_row[col]
        piv_row = {j: v * inv for j, v in piv_row.items()}
        nxt = []
        for k, (rid, row) in enumerate(active):
            if k == piv_idx:
                continue
            a = row.get(col)
            if a:
                for j, v in piv_row.items():
                    s = row.get(j, 0) - a * v
                    if s:
                        row[j] = s
                    else:
                        row.pop(j, None)
            if row:
                nxt.append((rid, row))
        # back-substitute into earlier pivot rows
        for _, prow in pivots:
            a = prow.get(col)
            if a:
                for j, v in piv_row.items():
                    s = prow.get(j, 0) - a * v
                    if s:
                        prow[j] = s
                    else:
                        prow.pop(j, None)
        pivots.append((col, piv_row))
        active = nxt
    pivots.sort(key=lambda t: t[0])
    return [c for c, _ in pivots], [row for _, row in pivots]


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim given by a linearly independent basis."""

    ambient_dim: int
    basis: tuple[Vector, ...]
    _solver: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        basis = tuple(tuple(to_scalar(x) for x in v) for v in self.basis)
        for v in basis:
            if len(v) != self.ambient_dim:
                raise LinalgError(f"basis vector of length {len(v)} in ambient {self.ambient_dim}")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence[object]]) -> Subspace:
        """Greedy independent subset of ``vectors``, kept in input order."""
        ech = _Echelon(ambient_dim)
        kept = [tuple(to_scalar(x) for x in v) for v in vectors]
        return cls(ambient_dim, tuple(v for v in kept if ech.add(v)))

    @classmethod
    def full(cls, n: int) -> Subspace:
        return cls(n, tuple(_unit(n, i) for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> Subspace:
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        return Matrix.from_columns(self.basis, self.ambient_dim)

    def _left_inverse(self) -> tuple[list[int], Matrix]:
        if not self._solver:
            b = self.matrix()
            # independent rows of b = pivot columns of b^T
            rows, _ = _rref(b.transpose())
            if len(rows) != self.dim:
                raise LinalgError("subspace basis is not linearly independent")
            square = b.submatrix(rows, range(self.dim))
            self._solver.append((rows, _inverse(square)))
        return self._solver[0]

    def coordinates(self, v: Sequence[object]) -> Vector | None:
        """Coordinates of ``v`` in this basis, or None when ``v`` is outside."""
        v = tuple(to_scalar(x) for x in v)
        if len(v) != self.ambient_dim:
            raise LinalgError("vector length does not match ambient dimension")
        if not self.basis:
            return () if not any(v) else None
        rows, inv = self._left_inverse()
        coords = inv @ tuple(v[r] for r in rows)
        recon = [Fraction(0)] * self.ambient_dim
        for c, bv in zip(coords, self.basis):
            if c:
                for i, x in enumerate(bv):
                    if x:
                        recon[i] += c * x
        return coords if tuple(recon) == v else None

    def contains(self, v: Sequence[object]) -> bool:
        return self.coordinates(v) is not None

    def is_independent(self) -> bool:
        return rank(self.matrix()) == self.dim


class _Echelon:
    """Incremental independence test against a growing set of vectors."""

    def __init__(self, n: int):
        self.n = n
        self.rows: list[tuple[int, dict[int, Fraction]]] = []

    def add(self, v: Sequence[Fraction]) -> bool:
        w = {i: x for i, x in enumerate(v) if x}
        for piv, row in self.rows:
            a = w.get(piv)
            if a:
                for j, x in row.items():
                    s = w.get(j, 0) - a * x
                    if s:
                        w[j] = s
                    else:
                        w.pop(j, None)
        if not w:
            return False
        piv = min(w)
        inv = 1 / w[piv]
        self.rows.append((piv, {j: x * inv for j, x in w.items()}))
        return True


def _unit(n: int, i: int) -> Vector:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return tuple(v)


def _inverse(m: Matrix) -> Matrix:
    n = m.rows
    if m.cols != n:
        raise LinalgError("cannot invert a non-square matrix")
    aug = Matrix.block([[m, Matrix.identity(n)]])
    pivots, rows = _rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise LinalgError("matrix is singular")
    entries = {}
    for i, row in enumerate(rows[:n]):
        for j, v in row.items():
            if j >= n:
                entries[(i, j - n)] = v
    return Matrix(n, n, entries)


def kernel_basis(m) -> Subspace:
    """Basis of {v : m v = 0}, one vector per free column of the RREF."""
    m = _as_matrix(m)
    pivots, rows = _rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for pc, row in zip(pivots, rows):
            x = row.get(f)
            if x:
                v[pc] = -x
        basis.append(tuple(v))
    return Subspace(m.cols, tuple(basis))


def image_basis(m) -> Subspace:
    """Basis of the column space made of the pivot columns of ``m``."""
    m = _as_matrix(m)
    pivots, _ = _rref(m)
    cols = m.columns()
    return Subspace(m.rows, tuple(cols[j] for j in pivots))


@dataclass(frozen=True)
class Quotient:
    """The quotient super/sub with chosen representatives and a projector."""

    ambient_dim: int
    sub: Subspace
    sup: Subspace
    representatives: Subspace
    projector: Matrix

    @property
    def dim(self) -> int:
        return self.representatives.dim


def quotient(ambient_dim: int, sub: Subspace, sup: Subspace) -> Quotient:
    """Quotient ``sup / sub``.

    Representatives extend the sub basis greedily by super basis vectors in
    input order. The projector sends a vector of ``sup`` to its coordinates
    along the representatives.
    """
    if sub.ambient_dim != ambient_dim or sup.ambient_dim != ambient_dim:
        raise LinalgError("subspaces live in different ambient spaces")
    for idx, v in enumerate(sub.basis):
        if not sup.contains(v):
            raise ContainmentError(f"sub generator #{idx} is not in the super-space", idx)
    ech = _Echelon(ambient_dim)
    for v in sub.basis:
        ech.add(v)
    reps = tuple(v for v in sup.basis if ech.add(v))
    combined = Subspace(ambient_dim, sub.basis + reps)
    q = len(reps)
    if combined.dim:
        rows, inv = combined._left_inverse()
        # coordinates = inv @ v[rows]; keep the trailing q coordinate rows
        entries = {}
        for (i, j), x in inv.entries.items():
            if i >= sub.dim:
                entries[(i - sub.dim, rows[j])] = x
        projector = Matrix(q, ambient_dim, entries)
    else:
        projector = Matrix(0, ambient_dim)
    return Quotient(ambient_dim, sub, sup, Subspace(ambient_dim, reps), projector)


def induced_on_quotient(f: Matrix, source: Quotient, target: Quotient) -> Matrix:
    """Matrix of the map induced by ``f`` between two quotients.

    ``f`` must send source super into target super and source sub into
    target sub; otherwise :class:`WellDefinednessError` names the first
    offending generator.
    """
    if f.cols != source.ambient_dim or f.rows != target.ambient_dim:
        raise LinalgError(f"map of shape {f.shape} does not fit the quotients")
    for idx, v in enumerate(source.sub.basis):
        if not target.sub.contains(f @ v):
            raise WellDefinednessError(f"image of sub generator #{idx} leaves the target sub-space", idx)
    for idx, v in enumerate(source.sup.basis):
        if not target.sup.contains(f @ v):
            raise WellDefinednessError(f"image of super generator #{idx} leaves the target super-space", idx)
    if not source.dim:
        return Matrix(target.dim, 0)
    return target.projector @ f @ source.representatives.matrix()
