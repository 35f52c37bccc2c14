"""Built-in models: tori, the Kodaira-Thurston nilmanifold, spheres, surfaces
and products of these."""

from __future__ import annotations

import re
from functools import reduce
from typing import Callable, Sequence

from .model import GradedModel, ModelError, make_ce_model, make_ring_model, tensor

__all__ = [
    "point",
    "torus",
    "kodaira_thurston",
    "sphere2",
    "surface",
    "product",
    "get",
    "names",
]


def point() -> GradedModel:
    return make_ring_model("point", [], {}, {})


def torus(m: int) -> GradedModel:
    """T^(2m) as the abelian exterior algebra on e1..e(2m)."""
    if m < 1:
        raise ModelError("torus needs m >= 1", m)
    gens = [f"e{i}" for i in range(1, 2 * m + 1)]
    omega = {f"e{2 * i - 1}^e{2 * i}": 1 for i in range(1, m + 1)}
    return make_ce_model(f"torus{m}", gens, {}, omega)


def kodaira_thurston() -> GradedModel:
    # e4 = dx4 + x2 dx3, so d(e4) = dx2 ^ dx3
    return make_ce_model(
        "kodaira_thurston",
        ["e1", "e2", "e3", "e4"],
        {"e4": {"e2^e3": 1}},
        {"e1^e2": 1, "e3^e4": 1},
    )


def sphere2() -> GradedModel:
    return make_ring_model("sphere2", [("x", 2)], {}, {"x": 1})


def surface(g: int) -> GradedModel:
    """Cohomology ring of the closed genus-g surface, omega = vol."""
    if g < 0:
        raise ModelError("genus must be non-negative", g)
    if g == 0:
        return sphere2()
    basis = [(f"a{i}", 1) for i in range(1, g + 1)]
    basis += [(f"b{i}", 1) for i in range(1, g + 1)]
    basis.append(("vol", 2))
    products = {}
    for i in range(1, g + 1):
        products[(f"a{i}", f"b{i}")] = {"vol": 1}
        products[(f"b{i}", f"a{i}")] = {"vol": -1}
    return make_ring_model(f"surface_g{g}", basis, products, {"vol": 1})


def product(models: Sequence[GradedModel], name: str | None = None) -> GradedModel:
    """Fold :func:`tensor` left to right."""
    if not models:
        return point()
    name = name or " x ".join(m.name for m in models)
    out = reduce(tensor, models)
    out.name = name
    if all(m.recipe is not None for m in models):
        out.recipe = {"schema": 1, "name": name, "kind": "product",
                      "factors": [m.recipe for m in models]}
    return out


_FIXED: dict[str, Callable[[], GradedModel]] = {
    "point": point,
    "sphere2": sphere2,
    "kodaira_thurston": kodaira_thurston,
    "s2xs2": lambda: product([sphere2(), sphere2()], "s2xs2"),
    "s2xs2xs2": lambda: product([sphere2(), sphere2(), sphere2()], "s2xs2xs2"),
    "kt_x_s2": lambda: product([kodaira_thurston(), sphere2()], "kt_x_s2"),
}
_LISTED = [
    "point", "sphere2", "surface_g1", "surface_g2", "surface_g3",
    "torus1", "torus2", "torus3", "kodaira_thurston", "s2xs2", "s2xs2xs2", "kt_x_s2",
]


def names() -> list[str]:
    return list(_LISTED)


def get(name: str) -> GradedModel:
    """Look up a catalog model; ``torus<m>`` and ``surface_g<g>`` are parametric."""
    name = name.lstrip("@")
    if name in _FIXED:
        return _FIXED[name]()
    if m := re.fullmatch(r"torus(\d+)", name):
        return torus(int(m.group(1)))
    if m := re.fullmatch(r"surface_g(\d+)", name):
        model = surface(int(m.group(1)))
        if model.name != name:
            model.name = name
            model.recipe = dict(model.recipe, name=name)
        return model
    raise KeyError(f"unknown catalog model {name!r}")
