"""Finite commutative differential graded algebras with a symplectic class.

A :class:`GradedModel` is a finite-dimensional cdga given by a graded basis
(sorted by degree, so each degree slice is a contiguous index range),
differential matrices between consecutive slices, sparse structure
constants and a closed degree-2 element ``omega``.

Three constructors are provided: exterior-algebra (Chevalley-Eilenberg)
models of nilmanifolds, cohomology-ring models with zero differential, and
the graded tensor product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import Matrix, Subspace, image_basis, rank, to_scalar

__all__ = [
    "BasisElement",
    "Element",
    "GradedModel",
    "ModelError",
    "ValidationReport",
    "Failure",
    "make_ce_model",
    "make_ring_model",
    "tensor",
    "wedge",
    "psi",
    "power",
    "validate",
    "with_omega",
    "permute_basis",
]

UNIT_LABEL = "1"


class ModelError(ValueError):
    """Raised when a model cannot be constructed; ``witness`` names the culprit."""

    def __init__(self, message: str, witness: object = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class BasisElement:
    id: int
    label: str
    degree: int


class GradedModel:
    """Immutable finite cdga with distinguished degree-2 class ``omega``.

    ``mult`` maps a pair of basis ids to ``{id: coefficient}``; missing pairs
    multiply to zero. ``diff[k]`` is the matrix of d from the degree-k slice
    to the degree-(k+1) slice, in slice-local coordinates.
    """

    def __init__(
        self,
        name: str,
        basis: Sequence[BasisElement],
        diff: Mapping[int, Matrix],
        mult: Mapping[tuple[int, int], Mapping[int, Fraction]],
        omega: Mapping[int, object],
        recipe: dict | None = None,
    ):
        self.name = name
        self.basis = tuple(basis)
        degrees = [b.degree for b in self.basis]
        if degrees != sorted(degrees):
            raise ModelError("basis must be sorted by degree")
        if [b.id for b in self.basis] != list(range(len(self.basis))):
            raise ModelError("basis ids must be 0..N-1 in order")
        labels = [b.label for b in self.basis]
        if len(set(labels)) != len(labels):
            dup = next(lab for lab in labels if labels.count(lab) > 1)
            raise ModelError(f"duplicate basis label {dup!r}", dup)
        self.top_degree = max(degrees, default=0)
        self._offsets: dict[int, tuple[int, int]] = {}
        for k, grp in itertools.groupby(self.basis, key=lambda b: b.degree):
            ids = [b.id for b in grp]
            self._offsets[k] = (ids[0], ids[-1] + 1)
        self.diff = {}
        for k in range(self.top_degree + 1):
            m = diff.get(k, Matrix(self.dim(k + 1), self.dim(k)))
            if m.shape != (self.dim(k + 1), self.dim(k)):
                raise ModelError(f"differential in degree {k} has shape {m.shape}")
            self.diff[k] = m
        self.mult = {
            key: {k: to_scalar(v) for k, v in terms.items() if v}
            for key, terms in mult.items()
        }
        self.mult = {key: terms for key, terms in self.mult.items() if terms}
        self.omega = Element(self, omega)
        self.recipe = recipe
        self._label_index = {b.label: b.id for b in self.basis}
        self._right: dict[int, list[int]] | None = None
        self._left: dict[int, list[int]] | None = None
        self._dcols: dict[int, dict[int, Fraction]] | None = None

    # slices

    def slice_range(self, k: int) -> range:
        lo, hi = self._offsets.get(k, (0, 0))
        return range(lo, hi)

    def dim(self, k: int) -> int:
        return len(self.slice_range(k))

    @property
    def size(self) -> int:
        return len(self.basis)

    def degree_of(self, i: int) -> int:
        return self.basis[i].degree

    def index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise ModelError(f"unknown basis label {label!r}", label) from None

    def d_matrix(self, k: int) -> Matrix:
        if 0 <= k <= self.top_degree:
            return self.diff[k]
        return Matrix(self.dim(k + 1), self.dim(k))

    # elements

    def element(self, terms: Mapping[str, object] | None = None) -> Element:
        return Element(self, {self.index(lab): c for lab, c in (terms or {}).items()})

    def unit(self) -> Element:
        return Element(self, {self.slice_range(0)[0]: 1}) if self.dim(0) else Element(self, {})

    def zero(self) -> Element:
        return Element(self, {})

    def basis_element(self, i: int) -> Element:
        return Element(self, {i: 1})

    def _d_columns(self) -> dict[int, dict[int, Fraction]]:
        if self._dcols is None:
            cols: dict[int, dict[int, Fraction]] = {}
            for k, mat in self.diff.items():
                lo, tgt = self.slice_range(k).start, self.slice_range(k + 1).start
                for (r, c), v in mat.entries.items():
                    cols.setdefault(lo + c, {})[tgt + r] = v
            self._dcols = cols
        return self._dcols

    def d(self, x: Element) -> Element:
        out: dict[int, Fraction] = {}
        cols = self._d_columns()
        for i, c in x.coeffs.items():
            for r, v in cols.get(i, {}).items():
                out[r] = out.get(r, 0) + c * v
        return Element(self, out)

    def product(self, i: int, j: int) -> Mapping[int, Fraction]:
        return self.mult.get((i, j), {})

    def right_partners(self, i: int) -> list[int]:
        """Basis ids ``j`` with ``e_i * e_j`` nonzero."""
        if self._right is None:
            self._right, self._left = {}, {}
            for a, b in self.mult:
                self._right.setdefault(a, []).append(b)
                self._left.setdefault(b, []).append(a)
        return self._right.get(i, [])

    def left_partners(self, j: int) -> list[int]:
        self.right_partners(0)
        return self._left.get(j, [])

    def left_mult_matrix(self, x: Element, k: int) -> Matrix:
        """Matrix of ``y -> x*y`` from the degree-k slice, for homogeneous ``x``."""
        deg = x.degree() if not x.is_zero() else 0
        src = self.slice_range(k)
        tgt = self.slice_range(k + deg)
        entries: dict[tuple[int, int], Fraction] = {}
        if not x.is_zero():
            for i, c in x.coeffs.items():
                for j in self.right_partners(i):
                    if j in src:
                        for r, v in self.product(i, j).items():
                            key = (r - tgt.start, j - src.start)
                            entries[key] = entries.get(key, 0) + c * v
        return Matrix(len(tgt), len(src), entries)

    # comparison

    def _key(self):
        return (
            self.name,
            tuple((b.label, b.degree) for b in self.basis),
            tuple(self.diff[k] for k in sorted(self.diff)),
            self.mult,
            self.omega.coeffs,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedModel):
            return NotImplemented
        return self._key() == other._key()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"GradedModel({self.name!r}, top_degree={self.top_degree}, size={self.size})"


class Element:
    """A linear combination of basis elements of one model."""

    __slots__ = ("model", "coeffs")

    def __init__(self, model: GradedModel, coeffs: Mapping[int, object]):
        self.model = model
        clean = {}
        for i, c in coeffs.items():
            c = to_scalar(c)
            if c:
                if not 0 <= i < model.size:
                    raise ModelError(f"basis index {i} out of range")
                clean[i] = c
        self.coeffs: dict[int, Fraction] = dict(sorted(clean.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degrees(self) -> set[int]:
        return {self.model.degree_of(i) for i in self.coeffs}

    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) != 1:
            raise ModelError(f"element is not homogeneous (degrees {sorted(degs)})")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def vector(self, k: int | None = None) -> tuple[Fraction, ...]:
        """Coefficient vector over the full basis, or over the degree-k slice."""
        if k is None:
            v = [Fraction(0)] * self.model.size
            for i, c in self.coeffs.items():
                v[i] = c
            return tuple(v)
        rng = self.model.slice_range(k)
        return tuple(self.coeffs.get(i, Fraction(0)) for i in rng)

    def _check(self, other: Element) -> None:
        if other.model is not self.model:
            raise ModelError("elements belong to different models")

    def __add__(self, other: Element) -> Element:
        self._check(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, 0) + c
        return Element(self.model, out)

    def __sub__(self, other: Element) -> Element:
        return self + (-other)

    def __neg__(self) -> Element:
        return Element(self.model, {i: -c for i, c in self.coeffs.items()})

    def __rmul__(self, c) -> Element:
        c = to_scalar(c)
        return Element(self.model, {i: c * v for i, v in self.coeffs.items()})

    def wedge(self, other: Element) -> Element:
        self._check(other)
        out: dict[int, Fraction] = {}
        product = self.model.product
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                for k, v in product(i, j).items():
                    out[k] = out.get(k, 0) + a * b * v
        return Element(self.model, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.model is other.model and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((id(self.model), tuple(self.coeffs.items())))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in self.coeffs.items():
            lab = self.model.basis[i].label
            parts.append(lab if c == 1 else f"{c}*{lab}")
        return " + ".join(parts)


def wedge(x: Element, y: Element) -> Element:
    return x.wedge(y)


def power(x: Element, n: int) -> Element:
    out = x.model.unit()
    for _ in range(n):
        out = out.wedge(x)
    return out


def psi(model: GradedModel) -> Element:
    """omega ^ omega."""
    return model.omega.wedge(model.omega)


# --- Chevalley-Eilenberg (exterior algebra) models ------------------------

Monomial = tuple[int, ...]


def _mono_mul(a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    """Sign and sorted monomial of a*b in an exterior algebra; sign 0 if zero."""
    if set(a) & set(b):
        return 0, ()
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


def _poly_mul(x: Mapping[Monomial, Fraction], y: Mapping[Monomial, Fraction]) -> dict[Monomial, Fraction]:
    out: dict[Monomial, Fraction] = {}
    for a, ca in x.items():
        for b, cb in y.items():
            s, m = _mono_mul(a, b)
            if s:
                out[m] = out.get(m, 0) + s * ca * cb
    return {m: c for m, c in out.items() if c}


def _poly_add(x: dict, y: Mapping, sign: int = 1) -> dict:
    out = dict(x)
    for m, c in y.items():
        out[m] = out.get(m, 0) + sign * c
    return {m: c for m, c in out.items() if c}


def parse_monomial(text: str, generators: Sequence[str]) -> tuple[int, Monomial]:
    """Parse ``"e3^e1"`` into a sign and sorted index tuple (sign 0 if repeated)."""
    if text == UNIT_LABEL:
        return 1, ()
    pos = {g: i for i, g in enumerate(generators)}
    idx = []
    for part in text.split("^"):
        if part not in pos:
            raise ModelError(f"unknown generator {part!r} in monomial {text!r}", part)
        idx.append(pos[part])
    sign, mono = 1, ()
    for i in idx:
        s, mono = _mono_mul(mono, (i,))
        sign *= s
        if not s:
            return 0, ()
    return sign, mono


def make_ce_model(
    name: str,
    generators: Sequence[str],
    diff2: Mapping[str, Mapping[str, object]],
    omega: Mapping[str, object],
) -> GradedModel:
    """Exterior algebra on degree-1 generators with a quadratic differential.

    ``diff2`` sends a generator label to ``{monomial: coefficient}`` with
    degree-2 monomials written ``"e2^e3"``; generators not listed are
    closed. ``omega`` is given the same way.
    """
    gens = list(generators)
    if len(set(gens)) != len(gens):
        raise ModelError("duplicate generator labels")
    unknown = set(diff2) - set(gens)
    if unknown:
        lab = sorted(unknown)[0]
        raise ModelError(f"differential given for unknown generator {lab!r}", lab)

    def to_poly(terms: Mapping[str, object], what: str) -> dict[Monomial, Fraction]:
        poly: dict[Monomial, Fraction] = {}
        for text, c in terms.items():
            s, mono = parse_monomial(text, gens)
            if s:
                poly[mono] = poly.get(mono, 0) + s * to_scalar(c)
        return {m: c for m, c in poly.items() if c}

    dgen: dict[int, dict[Monomial, Fraction]] = {}
    for i, g in enumerate(gens):
        poly = to_poly(diff2.get(g, {}), g)
        bad = [m for m in poly if len(m) != 2]
        if bad:
            raise ModelError(f"d({g}) must be a degree-2 expression", g)
        dgen[i] = poly

    def d_mono(m: Monomial) -> dict[Monomial, Fraction]:
        out: dict[Monomial, Fraction] = {}
        for pos, g in enumerate(m):
            left, right = m[:pos], m[pos + 1:]
            term = _poly_mul(_poly_mul({left: Fraction(1)}, dgen[g]), {right: Fraction(1)})
            out = _poly_add(out, term, -1 if pos % 2 else 1)
        return out

    def d_poly(p: Mapping[Monomial, Fraction]) -> dict[Monomial, Fraction]:
        out: dict[Monomial, Fraction] = {}
        for m, c in p.items():
            out = _poly_add(out, {mm: c * v for mm, v in d_mono(m).items()})
        return out

    for i, g in enumerate(gens):
        if d_poly(dgen[i]):
            raise ModelError(f"d(d({g})) != 0", g)

    monos = sorted(
        (m for k in range(len(gens) + 1) for m in itertools.combinations(range(len(gens)), k)),
        key=lambda m: (len(m), m),
    )
    ids = {m: n for n, m in enumerate(monos)}
    basis = [
        BasisElement(n, "^".join(gens[i] for i in m) if m else UNIT_LABEL, len(m))
        for n, m in enumerate(monos)
    ]
    mult: dict[tuple[int, int], dict[int, Fraction]] = {}
    for a in monos:
        for b in monos:
            s, m = _mono_mul(a, b)
            if s:
                mult[(ids[a], ids[b])] = {ids[m]: Fraction(s)}
    starts = {}
    for n, m in enumerate(monos):
        starts.setdefault(len(m), n)
    diff = {}
    for k in range(len(gens) + 1):
        entries = {}
        for m in monos:
            if len(m) != k:
                continue
            for mm, c in d_mono(m).items():
                entries[(ids[mm] - starts[k + 1], ids[m] - starts[k])] = c
        rows = sum(1 for m in monos if len(m) == k + 1)
        cols = sum(1 for m in monos if len(m) == k)
        diff[k] = Matrix(rows, cols, entries)

    om = to_poly(omega, "omega")
    if any(len(m) != 2 for m in om):
        raise ModelError("omega must have degree 2", "omega")
    if d_poly(om):
        raise ModelError("omega is not closed", "omega")

    recipe = {
        "schema": 1,
        "name": name,
        "kind": "ce",
        "generators": gens,
        "differential": {
            gens[i]: [["^".join(gens[j] for j in m), str(c)] for m, c in sorted(p.items())]
            for i, p in dgen.items()
            if p
        },
        "omega": [["^".join(gens[j] for j in m), str(c)] for m, c in sorted(om.items())],
    }
    return GradedModel(name, basis, diff, mult, {ids[m]: c for m, c in om.items()}, recipe)


# --- cohomology-ring models ------------------------------------------------

def make_ring_model(
    name: str,
    basis: Sequence[tuple[str, int]],
    products: Mapping[tuple[str, str], Mapping[str, object]],
    omega: Mapping[str, object],
) -> GradedModel:
    """Graded ring with zero differential.

    ``basis`` lists ``(label, degree)`` pairs excluding the unit, which is
    added as ``"1"`` in degree 0. Products with the unit are implicit; every
    other nonzero product must be listed, in both orders.
    """
    items = [(UNIT_LABEL, 0)] + [(lab, int(deg)) for lab, deg in basis]
    for lab, deg in items[1:]:
        if deg < 1:
            raise ModelError(f"basis element {lab!r} must have positive degree", lab)
    order = sorted(range(len(items)), key=lambda i: (items[i][1], i))
    elems = [BasisElement(n, items[i][0], items[i][1]) for n, i in enumerate(order)]
    labels = [e.label for e in elems]
    if len(set(labels)) != len(labels):
        dup = next(lab for lab in labels if labels.count(lab) > 1)
        raise ModelError(f"duplicate basis label {dup!r}", dup)
    pos = {e.label: e.id for e in elems}
    deg = {e.label: e.degree for e in elems}

    def look(lab: str) -> int:
        if lab not in pos:
            raise ModelError(f"unknown basis label {lab!r}", lab)
        return pos[lab]

    mult: dict[tuple[int, int], dict[int, Fraction]] = {}
    for e in elems:
        mult[(0, e.id)] = {e.id: Fraction(1)}
        mult[(e.id, 0)] = {e.id: Fraction(1)}
    for (a, b), result in products.items():
        ia, ib = look(a), look(b)
        if ia == 0 or ib == 0:
            raise ModelError(f"products with the unit are implicit ({a!r}*{b!r})", (a, b))
        terms = {}
        for lab, c in result.items():
            look(lab)
            if deg[lab] != deg[a] + deg[b] and to_scalar(c):
                raise ModelError(f"{a}*{b} has a term {lab!r} in the wrong degree", (a, b))
            terms[look(lab)] = to_scalar(c)
        mult[(ia, ib)] = terms
    om = {}
    for lab, c in omega.items():
        look(lab)
        if deg[lab] != 2 and to_scalar(c):
            raise ModelError("omega must have degree 2", "omega")
        om[look(lab)] = c
    recipe = {
        "schema": 1,
        "name": name,
        "kind": "ring",
        "basis": [{"label": lab, "degree": d} for lab, d in items[1:]],
        "products": [
            {"left": a, "right": b, "result": [[lab, str(to_scalar(c))] for lab, c in res.items()]}
            for (a, b), res in products.items()
        ],
        "omega": [[lab, str(to_scalar(c))] for lab, c in omega.items()],
    }
    model = GradedModel(name, elems, {}, mult, om, recipe)
    report = validate(model)
    algebraic = [f for f in report.failures if f.invariant in ("commutativity", "associativity", "unit")]
    if algebraic:
        f = algebraic[0]
        raise ModelError(f"{f.invariant} fails: {f.message}", f.witness)
    return model


# --- tensor products ----------------------------------------------------------

def tensor(a: GradedModel, b: GradedModel, name: str | None = None) -> GradedModel:
    """Graded tensor product with Koszul signs; omega = omega_a + omega_b."""
    pairs = sorted(
        itertools.product(range(a.size), range(b.size)),
        key=lambda t: (a.degree_of(t[0]) + b.degree_of(t[1]), t[0], t[1]),
    )
    ids = {p: n for n, p in enumerate(pairs)}
    basis = [
        BasisElement(n, f"{a.basis[i].label}|{b.basis[j].label}", a.degree_of(i) + b.degree_of(j))
        for n, (i, j) in enumerate(pairs)
    ]
    mult: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (a1, a2), ta in a.mult.items():
        sa = a.degree_of(a2)
        for (b1, b2), tb in b.mult.items():
            sign = -1 if (b.degree_of(b1) * sa) % 2 else 1
            terms = {}
            for i, x in ta.items():
                for j, y in tb.items():
                    terms[ids[(i, j)]] = sign * x * y
            mult[(ids[(a1, b1)], ids[(a2, b2)])] = terms

    # differential on the full basis, then cut into slices
    def d_full(m: GradedModel) -> dict[int, dict[int, Fraction]]:
        out: dict[int, dict[int, Fraction]] = {}
        for k, mat in m.diff.items():
            lo, tgt = m.slice_range(k).start, m.slice_range(k + 1).start
            for (r, c), v in mat.entries.items():
                out.setdefault(lo + c, {})[tgt + r] = v
        return out

    da, db = d_full(a), d_full(b)
    top = a.top_degree + b.top_degree
    starts: dict[int, int] = {}
    for e in basis:
        starts.setdefault(e.degree, e.id)
    counts = {k: sum(1 for e in basis if e.degree == k) for k in range(top + 2)}
    diff_entries: dict[int, dict[tuple[int, int], Fraction]] = {k: {} for k in range(top + 1)}
    for (i, j), n in ids.items():
        k = basis[n].degree
        col = n - starts[k]
        for ii, v in da.get(i, {}).items():
            key = (ids[(ii, j)] - starts[k + 1], col)
            diff_entries[k][key] = diff_entries[k].get(key, 0) + v
        sign = -1 if a.degree_of(i) % 2 else 1
        for jj, v in db.get(j, {}).items():
            key = (ids[(i, jj)] - starts[k + 1], col)
            diff_entries[k][key] = diff_entries[k].get(key, 0) + sign * v
    diff = {k: Matrix(counts.get(k + 1, 0), counts[k], e) for k, e in diff_entries.items()}

    ua = a.slice_range(0).start
    ub = b.slice_range(0).start
    omega: dict[int, Fraction] = {}
    for i, c in a.omega.coeffs.items():
        omega[ids[(i, ub)]] = omega.get(ids[(i, ub)], 0) + c
    for j, c in b.omega.coeffs.items():
        omega[ids[(ua, j)]] = omega.get(ids[(ua, j)], 0) + c
    name = name or f"{a.name}*{b.name}"
    recipe = {"schema": 1, "name": name, "kind": "product", "factors": [a.recipe, b.recipe]}
    return GradedModel(name, basis, diff, mult, omega, recipe)


# --- derived models ---------------------------------------------------------

def with_omega(model: GradedModel, omega: Element, name: str | None = None) -> GradedModel:
    """Same algebra with a different symplectic class."""
    if omega.model is not model:
        raise ModelError("omega belongs to another model")
    return GradedModel(name or model.name, model.basis, model.diff, model.mult, omega.coeffs, None)


def permute_basis(model: GradedModel, order: Sequence[int]) -> GradedModel:
    """Reorder the basis; ``order`` lists old ids and must keep degrees sorted."""
    if sorted(order) != list(range(model.size)):
        raise ModelError("order is not a permutation of the basis")
    new_of = {old: new for new, old in enumerate(order)}
    basis = [BasisElement(n, model.basis[o].label, model.basis[o].degree) for n, o in enumerate(order)]
    mult = {
        (new_of[i], new_of[j]): {new_of[k]: v for k, v in t.items()}
        for (i, j), t in model.mult.items()
    }
    diff = {}
    for k, mat in model.diff.items():
        src, tgt = model.slice_range(k), model.slice_range(k + 1)
        entries = {}
        for (r, c), v in mat.entries.items():
            entries[(new_of[tgt.start + r] - tgt.start, new_of[src.start + c] - src.start)] = v
        diff[k] = Matrix(mat.rows, mat.cols, entries)
    omega = {new_of[i]: c for i, c in model.omega.coeffs.items()}
    return GradedModel(model.name, basis, diff, mult, omega, None)


# --- validation ----------------------------------------------------------------

@dataclass(frozen=True)
class Failure:
    invariant: str
    message: str
    witness: object


@dataclass
class ValidationReport:
    model_name: str
    failures: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed


def _nilpotency_witness(model: GradedModel) -> str | None:
    """First generator that cannot be placed in a triangular (nilpotent) order."""
    recipe = model.recipe or {}
    if recipe.get("kind") != "ce":
        return None
    gens = recipe["generators"]
    uses = {}
    for g in gens:
        used = set()
        for mono, _ in recipe["differential"].get(g, []):
            used.update(mono.split("^"))
        uses[g] = used
    placed: set[str] = set()
    progress = True
    while progress:
        progress = False
        for g in gens:
            if g not in placed and uses[g] <= placed:
                placed.add(g)
                progress = True
    rest = [g for g in gens if g not in placed]
    return rest[0] if rest else None


def validate(model: GradedModel) -> ValidationReport:
    """Check every cdga invariant; each failure carries a witness."""
    rep = ValidationReport(model.name)
    fail = rep.failures.append
    B = model.basis
    deg = model.degree_of

    units = list(model.slice_range(0))
    if len(units) != 1:
        fail(Failure("unit", f"expected one degree-0 basis element, found {len(units)}", units))
    else:
        u = units[0]
        for e in B:
            if model.product(u, e.id) != {e.id: 1} or model.product(e.id, u) != {e.id: 1}:
                fail(Failure("unit", f"unit does not act trivially on {e.label}", e.label))
                break

    for (i, j), terms in model.mult.items():
        bad = [k for k in terms if deg(k) != deg(i) + deg(j)]
        if bad:
            fail(Failure("grading", f"{B[i].label}*{B[j].label} leaves degree {deg(i) + deg(j)}",
                         (B[i].label, B[j].label)))

    for (i, j), terms in model.mult.items():
        sign = -1 if (deg(i) * deg(j)) % 2 else 1
        other = model.product(j, i)
        if {k: sign * v for k, v in terms.items()} != dict(other):
            fail(Failure("commutativity", f"{B[i].label}*{B[j].label} != +-{B[j].label}*{B[i].label}",
                         (B[i].label, B[j].label)))
            break

    if not any(f.invariant == "commutativity" for f in rep.failures):
        for (i, j) in model.mult:
            if (j, i) not in model.mult:
                fail(Failure("commutativity", f"{B[j].label}*{B[i].label} missing",
                             (B[j].label, B[i].label)))
                break

    # associativity over every triple where either bracketing can be nonzero
    # integral structure constants as plain ints: Fraction arithmetic dominates otherwise
    mult = {
        key: {c: (v.numerator if v.denominator == 1 else v) for c, v in terms.items()}
        for key, terms in model.mult.items()
    }

    def times(x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for c, v in mult.get((a, b), {}).items():
                    out[c] = out.get(c, 0) + ca * cb * v
        return {c: v for c, v in out.items() if v}

    def assoc_ok(i: int, j: int, k: int) -> bool:
        left = times(mult.get((i, j), {}), {k: 1})
        right = times({i: 1}, mult.get((j, k), {}))
        return left == right

    triples: set[tuple[int, int, int]] = set()
    for (i, j), terms in mult.items():
        for c in terms:
            triples.update((i, j, k) for k in model.right_partners(c))
    for (j, k), terms in mult.items():
        for c in terms:
            triples.update((i, j, k) for i in model.left_partners(c))
    bad_triple = next((t for t in sorted(triples) if not assoc_ok(*t)), None)
    if bad_triple:
        fail(Failure("associativity", "(ab)c != a(bc)", tuple(B[t].label for t in bad_triple)))

    for k in range(model.top_degree):
        prod = model.d_matrix(k + 1) @ model.d_matrix(k)
        if not prod.is_zero():
            (_, c) = min(prod.entries)
            lab = B[model.slice_range(k).start + c].label
            fail(Failure("d_squared", f"d(d({lab})) != 0", lab))
            break

    # Leibniz on every pair where some term can be nonzero
    dcols = model._d_columns()

    def d_of(x: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, c in x.items():
            for r, v in dcols.get(i, {}).items():
                out[r] = out.get(r, 0) + c * v
        return {r: v for r, v in out.items() if v}

    pairs = set(mult)
    for i in range(model.size):
        for c in dcols.get(i, {}):
            pairs.update((i, j) for j in model.right_partners(c))
            pairs.update((j, i) for j in model.left_partners(c))
    for i, j in sorted(pairs):
        lhs = d_of(mult.get((i, j), {}))
        rhs = times(d_of({i: 1}), {j: 1})
        sign = -1 if deg(i) % 2 else 1
        for c, v in times({i: 1}, d_of({j: 1})).items():
            rhs[c] = rhs.get(c, 0) + sign * v
        if lhs != {c: v for c, v in rhs.items() if v}:
            fail(Failure("leibniz", f"Leibniz rule fails on ({B[i].label}, {B[j].label})",
                         (B[i].label, B[j].label)))
            break

    nil = _nilpotency_witness(model)
    if nil is not None:
        fail(Failure("nilpotency", f"d({nil}) cannot be ordered triangularly", nil))

    om = model.omega
    if not om.is_zero():
        if om.degrees() != {2}:
            fail(Failure("omega_degree", "omega must be homogeneous of degree 2", "omega"))
        elif not model.d(om).is_zero():
            fail(Failure("omega_closed", "d(omega) != 0", "omega"))
    if model.top_degree % 2 == 0 and model.top_degree >= 2:
        if om.is_zero() or om.degrees() != {2}:
            fail(Failure("omega_nondegenerate", "omega vanishes", "omega"))
        else:
            top = power(om, model.top_degree // 2)
            n = model.top_degree
            exact = image_basis(model.d_matrix(n - 1))
            if top.is_zero() or Subspace(exact.ambient_dim, exact.basis).contains(top.vector(n)):
                fail(Failure("omega_nondegenerate",
                             f"omega^{n // 2} is zero in cohomology", "omega"))
    return rep
