"""Built-in model generators.

Two families are constructible from closed-form data: the three-summand
flag spaces (structure constants determined by the dimensions alone, with the
background form normalized against the Killing form so every b_i = 1) and
two-summand spaces where the first summand spans the subalgebra side.  Both
generate exact-rational models that pass validation by construction.

Known spaces with the unconditional-existence structure (a single abelian
line as the only proper subalgebra) are listed by name only; their summand
data is not embedded and must be supplied by the user.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import ModelError, SpaceModel, build_model
from .numbers import parse_number


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    parameters: dict
    model: SpaceModel


#: Spaces known to satisfy the unconditional-existence structure; summand
#: constants are not embedded here and must be supplied by the user.
PLACEHOLDER_SPACES = (
    "SO(2k)/SU(k), k >= 3",
    "SU(k+l)/(SU(k) x SU(l)), k, l >= 2",
    "Sp(k)/SU(k), k >= 3",
    "E7/E6",
)


def flag3(d1: int, d2: int, d3: int) -> SpaceModel:
    """Three-summand flag space from its summand dimensions.

    With the background form set to minus the Killing form, b_i = 1 and the
    only nonzero bracket norms are

        [112] = (d1 d2 + 2 d1 d3 - d2 d3) / (d1 + 4 d2 + 9 d3),
        [123] = (d1 + d2) d3 / (d1 + 4 d2 + 9 d3).

    The Casimir eigenvalues follow from the compatibility law.
    """
    d1, d2, d3 = int(d1), int(d2), int(d3)
    if min(d1, d2, d3) < 1:
        raise ModelError("dimensions must be positive")
    denom = d1 + 4 * d2 + 9 * d3
    t112 = Fraction(d1 * d2 + 2 * d1 * d3 - d2 * d3, denom)
    if t112 < 0:
        raise ModelError(
            f"dims ({d1},{d2},{d3}) give a negative bracket norm [112]={t112}; "
            "invalid parameter combination"
        )
    t123 = Fraction((d1 + d2) * d3, denom)
    triples = {}
    if t112 != 0:
        triples[(1, 1, 2)] = t112
    if t123 != 0:
        triples[(1, 2, 3)] = t123
    return build_model(
        name=f"flag3:{d1},{d2},{d3}",
        dims=(d1, d2, d3),
        killing=(1, 1, 1),
        triples=triples,
        pairwise_inequivalent=True,
    )


def two_summand(
    d1: int,
    d2: int,
    zeta1,
    zeta2,
    t122,
    t111=0,
    t222=0,
    name: str | None = None,
) -> SpaceModel:
    """Two-summand space with the first summand spanning the subalgebra side.

    [112] = 0 is enforced (side 1 closes under the bracket) and [122] must be
    positive (side 2 does not).  Killing coefficients are derived from the
    compatibility law, so validation passes by construction.
    """
    d1, d2 = int(d1), int(d2)
    zeta1, zeta2 = parse_number(zeta1), parse_number(zeta2)
    t111, t122, t222 = parse_number(t111), parse_number(t122), parse_number(t222)
    if min(d1, d2) < 1:
        raise ModelError("dimensions must be positive")
    if t122 <= 0:
        raise ModelError("[122] must be positive (side 2 must not close)")
    if min(zeta1, zeta2) < 0 or t111 < 0 or t222 < 0:
        raise ModelError("casimir eigenvalues and bracket norms must be non-negative")
    for d, z, label in ((d1, zeta1, 1), (d2, zeta2, 2)):
        if z == 0 and d != 1:
            raise ModelError(
                f"summand {label} has zero casimir eigenvalue but dimension {d}; "
                "a trivially-acted summand is a line"
            )
    if d1 == 1 and t111 != 0:
        raise ModelError("[111] must vanish on a 1-dimensional summand")
    if d2 == 1 and t222 != 0:
        raise ModelError("[222] must vanish on a 1-dimensional summand")
    triples = {(1, 2, 2): t122}
    if t111 != 0:
        triples[(1, 1, 1)] = t111
    if t222 != 0:
        triples[(2, 2, 2)] = t222
    return build_model(
        name=name or f"twosum:{d1},{d2}",
        dims=(d1, d2),
        casimir=(zeta1, zeta2),
        triples=triples,
        pairwise_inequivalent=True,
    )


def abelian_line_two_summand(d2: int, zeta2, t122, t222=0) -> SpaceModel:
    """Two-summand space whose subalgebra side is a single abelian line.

    This is the structure under which every positive target form is solvable
    and the Ricci iteration runs unconditionally.
    """
    return two_summand(
        1, d2, 0, zeta2, t122, t111=0, t222=t222, name=f"twosum-line:{d2}"
    )


def entry(kind: str, *params) -> CatalogEntry:
    """Build a named catalog entry: kind "flag3", "twosum" or an alias."""
    if kind == "g2u2":
        model = flag3(4, 2, 4)
        return CatalogEntry("g2u2", {"dims": (4, 2, 4)}, model)
    if kind == "flag3":
        model = flag3(*params)
        return CatalogEntry(model.name, {"dims": tuple(int(p) for p in params)}, model)
    if kind == "twosum":
        model = two_summand(*params)
        return CatalogEntry(model.name, {"params": params}, model)
    raise ModelError(f"unknown catalog kind {kind!r}")
