"""Finite-dimensional counterparts of the operators on 1-filtered cochains.

The inner product is the one making the model basis orthonormal, so every
adjoint is a transpose. ``C^even`` is identified with (all even-degree basis
elements) + (all odd-degree basis elements), the first block coming from
the first cone component and the second from the shifted one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .cone import ConeComplex, cone_betti
from .linalg import Matrix, rank
from .model import psi

__all__ = [
    "OperatorBundle",
    "OperatorError",
    "HodgeCheck",
    "SkewKernel",
    "build_bundle",
    "hodge_even_kernel_dim",
    "laplacian_kernel_dims",
    "D_kernel_parity",
]


class OperatorError(ValueError):
    pass


def _full_matrix(model, blocks) -> Matrix:
    """Assemble per-degree maps (degree k -> k+shift) into one N x N matrix."""
    entries = {}
    for k, (shift, mat) in blocks.items():
        src = model.slice_range(k).start
        tgt = model.slice_range(k + shift).start
        for (r, c), v in mat.entries.items():
            entries[(tgt + r, src + c)] = v
    return Matrix(model.size, model.size, entries)


@dataclass(eq=False)
class OperatorBundle:
    cone: ConeComplex
    adjoints: dict[int, Matrix]
    hodge_even: Matrix
    D: Matrix
    even_coords: list[int]
    odd_coords: list[int]

    @cached_property
    def total_boundary(self) -> Matrix:
        return _assemble_total(self.cone)


def _cone_offsets(cone: ConeComplex) -> dict[int, int]:
    offsets, pos = {}, 0
    for k in range(cone.max_degree + 2):
        offsets[k] = pos
        pos += cone.dim(k)
    return offsets


def _assemble_total(cone: ConeComplex) -> Matrix:
    off = _cone_offsets(cone)
    n = off[cone.max_degree + 1]
    entries = {}
    for k in cone.degrees:
        for (r, c), v in cone.boundary(k).entries.items():
            if k + 1 <= cone.max_degree:
                entries[(off[k + 1] + r, off[k] + c)] = v
    return Matrix(n, n, entries)


def build_bundle(cone: ConeComplex) -> OperatorBundle:
    if cone.p != 1:
        raise OperatorError(f"the skew operator is defined for p = 1 only (got p = {cone.p})")
    model = cone.model
    if model.top_degree % 2:
        raise OperatorError("model top degree must be even")

    adjoints = {k: cone.boundary(k).transpose() for k in cone.degrees}

    total = _assemble_total(cone)
    sym = total + total.transpose()
    off = _cone_offsets(cone)
    even = [i for k in cone.degrees if k % 2 == 0 for i in range(off[k], off[k] + cone.dim(k))]
    odd = [i for k in cone.degrees if k % 2 == 1 for i in range(off[k], off[k] + cone.dim(k))]
    hodge_even = sym.submatrix(odd, even)

    top = model.top_degree
    d_full = _full_matrix(model, {k: (1, model.d_matrix(k)) for k in range(top + 1)})
    psi_el = psi(model)
    psi_full = _full_matrix(
        model,
        {k: (4, model.left_mult_matrix(psi_el, k)) for k in range(top + 1)} if not psi_el.is_zero() else {},
    )
    dd = d_full + d_full.transpose()
    skew_psi = (psi_full.transpose() - psi_full).scale(Fraction(1, 2))
    ev = [b.id for b in model.basis if b.degree % 2 == 0]
    od = [b.id for b in model.basis if b.degree % 2 == 1]
    D = Matrix.block([
        [skew_psi.submatrix(ev, ev), -dd.submatrix(ev, od)],
        [dd.submatrix(od, ev), (-skew_psi).submatrix(od, od)],
    ])
    return OperatorBundle(cone, adjoints, hodge_even, D, ev, od)


@dataclass(frozen=True)
class HodgeCheck:
    kernel_dim: int
    even_sum: int


def hodge_even_kernel_dim(bundle: OperatorBundle) -> HodgeCheck:
    """Kernel of (del + del^T) on C^even, checked against the even Betti sum."""
    h = bundle.hodge_even
    kernel = h.cols - rank(h)
    even_sum = sum(v for i, v in enumerate(cone_betti(bundle.cone)) if i % 2 == 0)
    if kernel != even_sum:
        raise AssertionError(
            f"internal inconsistency: Hodge kernel {kernel} != even filtered sum {even_sum}")
    return HodgeCheck(kernel, even_sum)


def laplacian_kernel_dims(bundle: OperatorBundle) -> list[int]:
    """Kernel dimension of each degree block of (del + del^T)^2."""
    cone = bundle.cone
    out = []
    for k in cone.degrees:
        up = cone.boundary(k)
        down = cone.boundary(k - 1) if k else Matrix(cone.dim(0), 0)
        lap = up.transpose() @ up + down @ down.transpose()
        out.append(lap.rows - rank(lap))
    return out


@dataclass(frozen=True)
class SkewKernel:
    size: int
    rank: int
    kernel_dim: int
    skew: bool

    @property
    def parity(self) -> int:
        return self.kernel_dim % 2


def D_kernel_parity(bundle: OperatorBundle) -> SkewKernel:
    D = bundle.D
    r = rank(D)
    return SkewKernel(D.rows, r, D.rows - r, (D + D.transpose()).is_zero())
