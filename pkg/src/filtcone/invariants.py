"""Betti numbers, Lefschetz-type ranks, filtered Betti numbers and the
semi-characteristics built from them.

Filtered Betti numbers are computed two independent ways: directly from the
cone complex, and from de Rham data through the long exact sequence of the
cone,

    b_i(Phi) = b_i - r_(i-2q) + b_(i-s) - r_(i-s),   q = p+1, s = 2p+1,

where r_j is the rank of [omega^q]: H^j -> H^(j+2q). Every table carries both
and records whether they agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cone import build_cone, cone_betti
from .linalg import Quotient, image_basis, induced_on_quotient, kernel_basis, quotient, rank
from .model import GradedModel, power

__all__ = [
    "CohomologyTable",
    "Semicharacteristics",
    "VerificationReport",
    "betti",
    "cohomology_quotient",
    "lefschetz_ranks",
    "filtered_betti_formula",
    "filtered_betti_direct",
    "cohomology_table",
    "semicharacteristics",
    "verify_vanishing",
]


def betti(model: GradedModel) -> list[int]:
    ranks = {k: rank(model.d_matrix(k)) for k in range(-1, model.top_degree + 1)}
    return [model.dim(k) - ranks[k] - ranks[k - 1] for k in range(model.top_degree + 1)]


def cohomology_quotient(model: GradedModel, k: int) -> Quotient:
    """H^k as closed forms modulo exact forms, in slice-local coordinates."""
    closed = kernel_basis(model.d_matrix(k))
    exact = image_basis(model.d_matrix(k - 1))
    return quotient(model.dim(k), exact, closed)


def lefschetz_ranks(model: GradedModel, q: int) -> list[int]:
    """r_i = rank of [omega^q ^ .]: H^i -> H^(i+2q) for i = 0..top."""
    mult_by = power(model.omega, q)
    top = model.top_degree
    quotients = {k: cohomology_quotient(model, k) for k in range(top + 1)}
    out = []
    for i in range(top + 1):
        j = i + 2 * q
        if j > top or mult_by.is_zero() or not quotients[i].dim:
            out.append(0)
            continue
        f = model.left_mult_matrix(mult_by, i)
        out.append(rank(induced_on_quotient(f, quotients[i], quotients[j])))
    return out


def _at(seq: list[int], i: int) -> int:
    return seq[i] if 0 <= i < len(seq) else 0


def filtered_betti_formula(
    model: GradedModel,
    p: int,
    b: list[int] | None = None,
    r: list[int] | None = None,
) -> list[int]:
    s, q = 2 * p + 1, p + 1
    b = betti(model) if b is None else b
    r = lefschetz_ranks(model, q) if r is None else r
    return [
        _at(b, i) - _at(r, i - 2 * q) + _at(b, i - s) - _at(r, i - s)
        for i in range(model.top_degree + s + 1)
    ]


def filtered_betti_direct(model: GradedModel, p: int) -> list[int]:
    return cone_betti(build_cone(model, p))


def _even_sum(values: list[int], upto: int | None = None) -> int:
    return sum(v for i, v in enumerate(values) if i % 2 == 0 and (upto is None or i <= upto))


@dataclass
class CohomologyTable:
    model_name: str
    p: int
    top_degree: int
    b: list[int]
    r: list[int]
    b_phi_formula: list[int]
    b_phi_direct: list[int]

    @property
    def paths_agree(self) -> bool:
        return self.b_phi_formula == self.b_phi_direct

    @property
    def even_sum(self) -> int:
        return _even_sum(self.b_phi_direct)

    @property
    def alternating_sum(self) -> int:
        return sum((-1) ** i * v for i, v in enumerate(self.b_phi_direct))

    def as_dict(self) -> dict:
        return {
            "model": self.model_name,
            "p": self.p,
            "top_degree": self.top_degree,
            "b": list(self.b),
            "r": list(self.r),
            "b_phi_formula": list(self.b_phi_formula),
            "b_phi_direct": list(self.b_phi_direct),
            "paths_agree": self.paths_agree,
            "even_sum": self.even_sum,
            "alternating_sum": self.alternating_sum,
        }


def cohomology_table(model: GradedModel, p: int) -> CohomologyTable:
    b = betti(model)
    r = lefschetz_ranks(model, p + 1)
    return CohomologyTable(
        model.name, p, model.top_degree, b, r,
        filtered_betti_formula(model, p, b, r),
        filtered_betti_direct(model, p),
    )


@dataclass
class Semicharacteristics:
    """``ell`` needs top degree 2 mod 4, ``k_char`` an even top degree.

    ``p1_even_sum`` is reported for every model so the 4n case can be
    inspected without asserting anything about it.
    """

    ell: int | None
    k_char: int | None
    p1_even_sum: int
    p0_even_sum: int

    def as_dict(self) -> dict:
        return {
            "ell": self.ell,
            "k_char": self.k_char,
            "p1_even_sum": self.p1_even_sum,
            "p1_even_parity": self.p1_even_sum % 2,
            "p0_even_sum": self.p0_even_sum,
        }


def semicharacteristics(
    model: GradedModel,
    p1: CohomologyTable | None = None,
    p0: CohomologyTable | None = None,
) -> Semicharacteristics:
    top = model.top_degree
    p1 = p1 or cohomology_table(model, 1)
    p0 = p0 or cohomology_table(model, 0)
    p1_sum = _even_sum(p1.b_phi_direct, top + 2)
    p0_sum = p0.even_sum
    return Semicharacteristics(
        ell=p1_sum % 2 if top % 4 == 2 else None,
        k_char=p0_sum % 2 if top % 2 == 0 else None,
        p1_even_sum=p1_sum,
        p0_even_sum=p0_sum,
    )


@dataclass
class VerificationReport:
    model_name: str
    top_degree: int
    applicable: bool
    ell_formula: int
    ell_direct: int
    table: CohomologyTable
    findings: list[str] = field(default_factory=list)

    @property
    def paths_agree(self) -> bool:
        return self.table.paths_agree and self.ell_formula == self.ell_direct

    @property
    def falsified(self) -> bool:
        return self.applicable and (self.ell_formula != 0 or self.ell_direct != 0)

    @property
    def passed(self) -> bool:
        return self.paths_agree and not self.falsified

    def as_dict(self) -> dict:
        return {
            "model": self.model_name,
            "top_degree": self.top_degree,
            "theorem_applicable": self.applicable,
            "ell_formula": self.ell_formula,
            "ell_direct": self.ell_direct,
            "paths_agree": self.paths_agree,
            "passed": self.passed,
            "findings": list(self.findings),
            "table": self.table.as_dict(),
        }


def verify_vanishing(model: GradedModel) -> VerificationReport:
    """Check that the even part of 1-filtered cohomology has even dimension.

    For top degree 2 mod 4 both computation paths must give 0. Other top
    degrees are reported as not applicable, with the parity still recorded.
    """
    top = model.top_degree
    table = cohomology_table(model, 1)
    upto = top + 2
    ell_f = _even_sum(table.b_phi_formula, upto) % 2
    ell_d = _even_sum(table.b_phi_direct, upto) % 2
    applicable = top % 4 == 2
    rep = VerificationReport(model.name, top, applicable, ell_f, ell_d, table)
    above = [v for i, v in enumerate(table.b_phi_direct) if i % 2 == 0 and i > upto]
    if any(above):
        rep.findings.append(f"nonzero even filtered Betti number above degree {upto}: {above}")
    if not table.paths_agree:
        rep.findings.append(
            f"formula and cone disagree: {table.b_phi_formula} vs {table.b_phi_direct}")
    if not applicable:
        rep.findings.append(
            f"top degree {top} is not 2 mod 4; even-sum parity {ell_d} recorded, nothing asserted")
    elif rep.falsified:
        rep.findings.append(f"FALSIFICATION: ell = {ell_d} on {model.name}; table {table.as_dict()}")
    return rep
