"""Scalar curvature, its modified companion, and Ricci coefficients.

All operations act on diagonal data: a metric restricted to the summands in
an index set J is just its positive coefficient vector there.  The two
functionals are

    S(x, J)    = 1/2 sum_{i in J} d_i b_i / x_i
                 - 1/4 sum_{i,j,k in J} [ijk] x_k / (x_i x_j),

    Shat(x, J) = S(x, J) - 1/2 sum_{i in J} (sum_{j,k outside J} [ijk]) / x_i,

and the Ricci coefficients relative to the background form are

    r_i = b_i/2 + x_i^2/(4 d_i) sum_{j,k} [jki]/(x_j x_k)
          - 1/(2 d_i) sum_{j,k} [ijk] x_k / x_j,

equivalently r_i = -(x_i^2/d_i) dS/dx_i, so the gradient of S comes for free.

Exact (Fraction) inputs are evaluated exactly; float inputs go through the
kernel backend (compiled when available).  Evaluation tables per (model,
index set) are cached, since the optimizer calls these in a tight loop.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .model import DiagonalForm, SpaceModel
from .numbers import Scalar


class CurvatureError(ValueError):
    """Raised for evaluation requests outside an operation's domain."""


class _Tables:
    """Flat float64 arrays for one (model, index set) pair."""

    __slots__ = ("J", "pos", "d", "b", "db", "ti", "tj", "tk", "tv", "hat_penalty")

    def __init__(self, model: SpaceModel, J: tuple[int, ...]):
        self.J = J
        self.pos = {g: i for i, g in enumerate(J)}
        self.d = np.array([model.dims[g - 1] for g in J], dtype=np.float64)
        self.b = np.array([float(model.killing[g - 1]) for g in J], dtype=np.float64)
        self.db = self.d * self.b
        inside = set(J)
        rows = [
            (self.pos[a], self.pos[bb], self.pos[c], float(v))
            for a, bb, c, v in model.ordered_triples
            if a in inside and bb in inside and c in inside
        ]
        self.ti = np.array([r[0] for r in rows], dtype=np.int64)
        self.tj = np.array([r[1] for r in rows], dtype=np.int64)
        self.tk = np.array([r[2] for r in rows], dtype=np.int64)
        self.tv = np.array([r[3] for r in rows], dtype=np.float64)
        penalty = np.zeros(len(J), dtype=np.float64)
        for a, bb, c, v in model.ordered_triples:
            if a in inside and bb not in inside and c not in inside:
                penalty[self.pos[a]] += float(v)
        self.hat_penalty = penalty


_TABLE_CACHE: "weakref.WeakKeyDictionary[SpaceModel, dict]" = weakref.WeakKeyDictionary()


def tables_for(model: SpaceModel, J: tuple[int, ...]) -> _Tables:
    if model.killing is None:
        raise CurvatureError("model must be validated (killing coefficients missing)")
    per_model = _TABLE_CACHE.setdefault(model, {})
    tab = per_model.get(J)
    if tab is None:
        tab = _Tables(model, J)
        per_model[J] = tab
    return tab


def _resolve_J(model: SpaceModel, x: DiagonalForm, J) -> tuple[int, ...]:
    if J is None:
        J = x.support
    J = tuple(sorted(set(int(i) for i in J)))
    if J and (J[0] < 1 or J[-1] > model.s):
        raise CurvatureError(f"indices {J} out of range for s={model.s}")
    return J


def _use_exact(model: SpaceModel, x: DiagonalForm) -> bool:
    return model.exact and x.exact


def scalar_S(model: SpaceModel, x: DiagonalForm, J: Optional[Sequence[int]] = None) -> Scalar:
    """Scalar curvature of the diagonal metric x restricted to J.

    J defaults to the form's support; an empty J gives 0.
    """
    J = _resolve_J(model, x, J)
    if not J:
        return Fraction(0) if _use_exact(model, x) else 0.0
    xr = x.restrict(J)
    if _use_exact(model, x):
        inside = set(J)
        lin = sum(
            model.dims[i - 1] * model.killing[i - 1] / xr[i] for i in J
        )
        tri = sum(
            v * xr[c] / (xr[a] * xr[b])
            for a, b, c, v in model.ordered_triples
            if a in inside and b in inside and c in inside
        )
        return lin / 2 - tri / 4
    tab = tables_for(model, J)
    xs = np.array([float(xr[i]) for i in J], dtype=np.float64)
    return float(_kernels.scalar_value(tab.db, tab.ti, tab.tj, tab.tk, tab.tv, xs))


def hat_S(model: SpaceModel, x: DiagonalForm, J_k: Optional[Sequence[int]] = None) -> Scalar:
    """Modified scalar curvature on a subalgebra's index set.

    Penalizes S by the bracket mass flowing into the complement; coincides
    with scalar_S when J_k is the full index set.  J_k is expected to be a
    lattice member (not enforced here).
    """
    J_k = _resolve_J(model, x, J_k)
    if not J_k:
        raise CurvatureError("hat_S needs a non-empty index set")
    xr = x.restrict(J_k)
    if _use_exact(model, x):
        inside = set(J_k)
        lin = sum(model.dims[i - 1] * model.killing[i - 1] / xr[i] for i in J_k)
        pen = Fraction(0)
        tri = Fraction(0)
        for a, b, c, v in model.ordered_triples:
            if a in inside:
                if b in inside and c in inside:
                    tri += v * xr[c] / (xr[a] * xr[b])
                elif b not in inside and c not in inside:
                    pen += v / xr[a]
        return lin / 2 - pen / 2 - tri / 4
    tab = tables_for(model, J_k)
    xs = np.array([float(xr[i]) for i in J_k], dtype=np.float64)
    base = _kernels.scalar_value(tab.db, tab.ti, tab.tj, tab.tk, tab.tv, xs)
    return float(base - 0.5 * np.dot(tab.hat_penalty, 1.0 / xs))


def ricci(model: SpaceModel, x: DiagonalForm) -> tuple[Scalar, ...]:
    """Ricci coefficients of the full diagonal metric, relative to Q.

    Scale invariant: ricci(c*x) == ricci(x).  Coefficients may be negative,
    so the result is a plain tuple rather than a DiagonalForm.
    """
    full = tuple(range(1, model.s + 1))
    if x.support != full:
        raise CurvatureError("ricci needs a form on the full index set")
    if _use_exact(model, x):
        s = model.s
        acc_a = [Fraction(0)] * s
        acc_b = [Fraction(0)] * s
        for a, b, c, v in model.ordered_triples:
            acc_a[c - 1] += v / (x[a] * x[b])
            acc_b[a - 1] += v * x[c] / x[b]
        return tuple(
            model.killing[i - 1] / 2
            + x[i] ** 2 * acc_a[i - 1] / (4 * model.dims[i - 1])
            - acc_b[i - 1] / (2 * model.dims[i - 1])
            for i in full
        )
    tab = tables_for(model, full)
    xs = np.array([float(x[i]) for i in full], dtype=np.float64)
    out = np.empty(model.s, dtype=np.float64)
    scratch_a = np.empty(model.s, dtype=np.float64)
    scratch_b = np.empty(model.s, dtype=np.float64)
    _kernels.value_and_ricci(
        tab.db, tab.b, tab.d, tab.ti, tab.tj, tab.tk, tab.tv, xs, out, scratch_a, scratch_b
    )
    return tuple(float(v) for v in out)


def grad_S(model: SpaceModel, x: DiagonalForm) -> tuple[Scalar, ...]:
    """Analytic gradient of scalar_S on the full index set: dS/dx_i = -d_i r_i / x_i^2."""
    r = ricci(model, x)
    return tuple(
        -model.dims[i - 1] * r[i - 1] / (x[i] * x[i]) for i in range(1, model.s + 1)
    )


def form_stats(
    model: SpaceModel, z: DiagonalForm, J: Optional[Sequence[int]] = None
) -> tuple[Scalar, Scalar, Scalar]:
    """(smallest eigenvalue, largest eigenvalue, Q-trace) of z restricted to J."""
    J = _resolve_J(model, z, J)
    if not J:
        raise CurvatureError("form_stats needs a non-empty index set")
    zr = z.restrict(J)
    values = [zr[i] for i in J]
    trace = sum(model.dims[i - 1] * zr[i] for i in J)
    return min(values), max(values), trace


def mt_constraint(
    model: SpaceModel, T: DiagonalForm, x: DiagonalForm, J: Optional[Sequence[int]] = None
) -> Scalar:
    """Value of the normalization sum_{i in J} d_i z_i / x_i (equals 1 on the constraint set)."""
    J = _resolve_J(model, x, J)
    if not J:
        raise CurvatureError("constraint needs a non-empty index set")
    Tr = T.restrict(J)
    xr = x.restrict(J)
    return sum(model.dims[i - 1] * Tr[i] / xr[i] for i in J)


@dataclass(frozen=True)
class CurvatureContext:
    """A model together with a nested pair of subalgebra index sets.

    Houses the derived index sets (complementary and difference blocks) used
    by the chain conditions, plus bracket and trace sums over arbitrary
    blocks.  Both sets are expected to be lattice members when supplied.
    """

    model: SpaceModel
    J_k: Optional[tuple[int, ...]] = None
    J_kprime: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.J_k is not None:
            object.__setattr__(self, "J_k", tuple(sorted(self.J_k)))
        if self.J_kprime is not None:
            object.__setattr__(self, "J_kprime", tuple(sorted(self.J_kprime)))
        if self.J_k is not None and self.J_kprime is not None:
            if not set(self.J_kprime) <= set(self.J_k):
                raise CurvatureError(
                    f"inner set {self.J_kprime} is not contained in {self.J_k}"
                )

    @property
    def full(self) -> tuple[int, ...]:
        return tuple(range(1, self.model.s + 1))

    @cached_property
    def J_l(self) -> tuple[int, ...]:
        return tuple(i for i in (self.J_k or ()) if i not in set(self.J_kprime or ()))

    @cached_property
    def J_j(self) -> tuple[int, ...]:
        outer = set(self.J_k or ())
        return tuple(i for i in self.full if i not in outer)

    @cached_property
    def J_jprime(self) -> tuple[int, ...]:
        inner = set(self.J_kprime or ())
        return tuple(i for i in self.full if i not in inner)

    @property
    def row_sums(self) -> tuple[Scalar, ...]:
        return self.model.row_sums

    def bracket_sum(self, A: Sequence[int], B: Sequence[int], C: Sequence[int]) -> Scalar:
        """Total bracket mass <u v w> = sum_{i in A, j in B, k in C} [ijk]."""
        sa, sb, sc = set(A), set(B), set(C)
        zero = Fraction(0) if self.model.exact else 0.0
        total = zero
        for a, b, c, v in self.model.ordered_triples:
            if a in sa and b in sb and c in sc:
                total = total + v
        return total

    def killing_trace(self, J: Sequence[int]) -> Scalar:
        """Q-trace of the Killing form over the block: -sum d_i b_i."""
        return -sum(self.model.dims[i - 1] * self.model.killing[i - 1] for i in J)
