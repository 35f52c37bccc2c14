"""The p-filtered mapping-cone complex of a graded model.

For filtration level ``p`` the multiplier is ``Phi = omega^(p+1)`` and the
shift is ``s = 2p + 1``. The cochain spaces are ``C^k = A^k + A^(k-s)``
(first component first) and the coboundary is the block matrix
``[[d, Phi], [0, -d]]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .linalg import Matrix, rank
from .model import Element, GradedModel, power

__all__ = ["ConeComplex", "ConeError", "build_cone", "cone_betti", "euler_characteristic"]


class ConeError(RuntimeError):
    def __init__(self, message: str, degree: int, witness: tuple):
        super().__init__(message)
        self.degree = degree
        self.witness = witness


@dataclass(eq=False)
class ConeComplex:
    model: GradedModel
    p: int
    phi: Element
    boundaries: dict[int, Matrix] = field(repr=False)

    @property
    def shift(self) -> int:
        return 2 * self.p + 1

    @property
    def max_degree(self) -> int:
        return self.model.top_degree + self.shift

    @property
    def degrees(self) -> range:
        return range(self.max_degree + 1)

    def dim(self, k: int) -> int:
        return self.model.dim(k) + self.model.dim(k - self.shift)

    def boundary(self, k: int) -> Matrix:
        """Coboundary C^k -> C^(k+1); zero outside the stored range."""
        if k in self.boundaries:
            return self.boundaries[k]
        return Matrix(self.dim(k + 1), self.dim(k))

    def phi_matrix(self, j: int) -> Matrix:
        """Phi^ from A^j to A^(j+s+1)."""
        return _phi_map(self.model, self.phi, j, self.shift)

    @cached_property
    def ranks(self) -> dict[int, int]:
        return {k: rank(m) for k, m in self.boundaries.items()}


def _phi_map(model: GradedModel, phi: Element, j: int, shift: int) -> Matrix:
    if phi.is_zero():
        return Matrix(model.dim(j + shift + 1), model.dim(j))
    return model.left_mult_matrix(phi, j)


def build_cone(model: GradedModel, p: int) -> ConeComplex:
    if p < 0:
        raise ValueError("filtration level must be non-negative")
    s = 2 * p + 1
    phi = power(model.omega, p + 1)
    boundaries: dict[int, Matrix] = {}
    for k in range(model.top_degree + s + 1):
        d_top = model.d_matrix(k)
        d_low = model.d_matrix(k - s)
        mult = _phi_map(model, phi, k - s, s)
        zero = Matrix(model.dim(k + 1 - s), model.dim(k))
        boundaries[k] = Matrix.block([[d_top, mult], [zero, -d_low]])
    cone = ConeComplex(model, p, phi, boundaries)
    for k in range(cone.max_degree):
        sq = boundaries[k + 1] @ boundaries[k]
        if not sq.is_zero():
            (_, c) = min(sq.entries)
            witness = tuple(int(i == c) for i in range(cone.dim(k)))
            raise ConeError(f"boundary squares to a nonzero map in degree {k}", k, witness)
    return cone


def cone_betti(cone: ConeComplex) -> list[int]:
    """Cohomology dimensions b_k = dim C^k - rank d_k - rank d_(k-1)."""
    r = cone.ranks
    return [cone.dim(k) - r.get(k, 0) - r.get(k - 1, 0) for k in cone.degrees]


def euler_characteristic(cone: ConeComplex) -> int:
    return sum((-1) ** k * b for k, b in enumerate(cone_betti(cone)))
