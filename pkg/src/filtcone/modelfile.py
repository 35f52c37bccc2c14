"""JSON model files (schema 1).

Three kinds are accepted::

    {"schema": 1, "name": "kt", "kind": "ce",
     "generators": ["e1", "e2", "e3", "e4"],
     "differential": {"e4": [["e2^e3", "1"]]},
     "omega": [["e1^e2", "1"], ["e3^e4", "1"]]}

    {"schema": 1, "name": "s2", "kind": "ring",
     "basis": [{"label": "x", "degree": 2}],
     "products": [{"left": "a1", "right": "b1", "result": [["vol", "1"]]}],
     "omega": [["x", "1"]]}

    {"schema": 1, "name": "kt_x_s2", "kind": "product",
     "factors": ["@kodaira_thurston", "other.json", {...inline model...}]}

Coefficients are integers or strings ``"p/q"``. The unit is implicit and is
written ``"1"`` where a monomial is needed.
"""

from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction
from pathlib import Path

from . import catalog
from .model import GradedModel, ModelError, make_ce_model, make_ring_model, validate

__all__ = ["ModelFileError", "parse_model", "load_model", "model_from_document", "dump_model", "model_hash"]

LABEL_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
KEYS = {
    "ce": {"schema", "name", "kind", "generators", "differential", "omega"},
    "ring": {"schema", "name", "kind", "basis", "products", "omega"},
    "product": {"schema", "name", "kind", "factors"},
}


class ModelFileError(ValueError):
    """Malformed model file; ``where`` is a JSON path or line/column."""

    def __init__(self, message: str, where: str = "$"):
        super().__init__(f"{where}: {message}")
        self.where = where


class ModelValidationError(ModelFileError):
    def __init__(self, message: str, witness: object, where: str = "$"):
        super().__init__(message, where)
        self.witness = witness


def _coef(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ModelFileError(f"coefficient {value!r} must be an integer or a 'p/q' string", where)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and re.fullmatch(r"\s*-?\d+(\s*/\s*\d+)?\s*", value):
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise ModelFileError(f"zero denominator in {value!r}", where) from None
    raise ModelFileError(f"bad coefficient {value!r}", where)


def _terms(value, where: str) -> dict[str, Fraction]:
    if not isinstance(value, list):
        raise ModelFileError("expected a list of [monomial, coefficient] pairs", where)
    out: dict[str, Fraction] = {}
    for n, pair in enumerate(value):
        w = f"{where}[{n}]"
        if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], str)):
            raise ModelFileError("expected [monomial, coefficient]", w)
        out[pair[0]] = out.get(pair[0], 0) + _coef(pair[1], w)
    return out


def _check_label(label, where: str) -> str:
    if not isinstance(label, str) or not LABEL_RE.fullmatch(label):
        raise ModelFileError(f"invalid label {label!r}", where)
    return label


def _check_keys(doc: dict, kind: str, where: str) -> None:
    extra = set(doc) - KEYS[kind]
    if extra:
        raise ModelFileError(f"unknown field(s) {sorted(extra)}", where)
    missing = {"schema", "name", "kind"} - set(doc)
    if missing:
        raise ModelFileError(f"missing field(s) {sorted(missing)}", where)
    if doc["schema"] != 1:
        raise ModelFileError(f"unsupported schema {doc['schema']!r}", f"{where}.schema")
    if not isinstance(doc["name"], str):
        raise ModelFileError("name must be a string", f"{where}.name")


def _from_ce(doc: dict, where: str) -> GradedModel:
    gens = doc.get("generators")
    if not isinstance(gens, list):
        raise ModelFileError("generators must be a list", f"{where}.generators")
    for n, g in enumerate(gens):
        _check_label(g, f"{where}.generators[{n}]")
    diff_doc = doc.get("differential", {})
    if not isinstance(diff_doc, dict):
        raise ModelFileError("differential must be an object", f"{where}.differential")
    diff2 = {}
    for g, terms in diff_doc.items():
        w = f"{where}.differential.{g}"
        if g not in gens:
            raise ModelFileError(f"differential given for unknown generator {g!r}", w)
        parsed = _terms(terms, w)
        for mono, c in parsed.items():
            degree = 0 if mono == "1" else len(mono.split("^"))
            if c and degree != 2:
                raise ModelFileError(f"d({g}) has the term {mono!r} of degree {degree}, expected 2", w)
        diff2[g] = parsed
    omega = _terms(doc.get("omega", []), f"{where}.omega")
    try:
        return make_ce_model(doc["name"], gens, diff2, omega)
    except ModelError as exc:
        raise ModelValidationError(str(exc), exc.witness, where) from None


def _from_ring(doc: dict, where: str) -> GradedModel:
    basis_doc = doc.get("basis", [])
    if not isinstance(basis_doc, list):
        raise ModelFileError("basis must be a list", f"{where}.basis")
    basis = []
    for n, item in enumerate(basis_doc):
        w = f"{where}.basis[{n}]"
        if not isinstance(item, dict) or set(item) != {"label", "degree"}:
            raise ModelFileError("basis entries are {label, degree}", w)
        if not isinstance(item["degree"], int) or isinstance(item["degree"], bool):
            raise ModelFileError("degree must be an integer", w)
        basis.append((_check_label(item["label"], w), item["degree"]))
    products = {}
    for n, item in enumerate(doc.get("products", [])):
        w = f"{where}.products[{n}]"
        if not isinstance(item, dict) or set(item) != {"left", "right", "result"}:
            raise ModelFileError("product entries are {left, right, result}", w)
        products[(item["left"], item["right"])] = _terms(item["result"], f"{w}.result")
    omega = _terms(doc.get("omega", []), f"{where}.omega")
    try:
        return make_ring_model(doc["name"], basis, products, omega)
    except ModelError as exc:
        raise ModelValidationError(str(exc), exc.witness, where) from None


def _from_product(doc: dict, where: str, base: Path | None) -> GradedModel:
    factors = doc.get("factors")
    if not isinstance(factors, list) or not factors:
        raise ModelFileError("factors must be a non-empty list", f"{where}.factors")
    models = []
    for n, ref in enumerate(factors):
        w = f"{where}.factors[{n}]"
        if isinstance(ref, dict):
            models.append(model_from_document(ref, base, w))
        elif isinstance(ref, str) and ref.startswith("@"):
            try:
                models.append(catalog.get(ref))
            except KeyError:
                raise ModelFileError(f"unknown catalog model {ref!r}", w) from None
        elif isinstance(ref, str):
            path = Path(ref) if base is None else base / ref
            models.append(load_model(path))
        else:
            raise ModelFileError(f"bad factor reference {ref!r}", w)
    return catalog.product(models, doc["name"])


def model_from_document(doc, base: Path | None = None, where: str = "$") -> GradedModel:
    """Build and validate a model from an already-decoded JSON document."""
    if not isinstance(doc, dict):
        raise ModelFileError("model document must be an object", where)
    kind = doc.get("kind")
    if kind not in KEYS:
        raise ModelFileError(f"kind must be one of {sorted(KEYS)}", f"{where}.kind")
    _check_keys(doc, kind, where)
    if kind == "ce":
        model = _from_ce(doc, where)
    elif kind == "ring":
        model = _from_ring(doc, where)
    else:
        model = _from_product(doc, where, base)
    report = validate(model)
    if not report.passed:
        f = report.failures[0]
        raise ModelValidationError(f"{f.invariant}: {f.message}", f.witness, where)
    return model


def parse_model(text: str, base: Path | None = None) -> GradedModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return model_from_document(doc, base)


def load_model(ref: str | Path) -> GradedModel:
    """Load ``@catalog_name`` or a path to a JSON model file."""
    if isinstance(ref, str) and ref.startswith("@"):
        try:
            return catalog.get(ref)
        except KeyError as exc:
            raise ModelFileError(str(exc.args[0])) from None
    path = Path(ref)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError(f"cannot read {path}: {exc.strerror}") from None
    return parse_model(text, path.parent)


def dump_model(model: GradedModel) -> str:
    if model.recipe is None:
        raise ValueError(f"model {model.name!r} has no file representation")
    return json.dumps(model.recipe, indent=2, sort_keys=True) + "\n"


def model_hash(model: GradedModel) -> str:
    if model.recipe is None:
        return ""
    canon = json.dumps(model.recipe, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()
