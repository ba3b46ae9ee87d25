"""Simple chains and the solvability conditions they impose on a target form.

A simple chain is a nested pair of subalgebra index sets (J_k, J_k') with
J_k' proper, non-empty and maximal inside J_k (no lattice member strictly
between).  Each chain carries an obstruction number eta(k, k'), computed two
independent ways and cross-checked:

* the defining form, from Killing traces and bracket masses of the four
  derived blocks,
* the Casimir form, eta = N / (omega * D) with

      N = sum_{j in J_k'} (4 d_j zeta_j + sum_{k,l in J_k'} [jkl]),
      D = sum_{j in J_l}  (4 d_j zeta_j + sum_{k,l in J_l} [jkl]
                           + 4 sum_{k in J_k'} sum_{l in J_l} [jkl]),

  where omega = min_{j in J_k'} d_j.

A positive form T solves the prescribed-curvature problem whenever, for every
chain, min_{i in J_k'} z_i / sum_{i in J_l} d_i z_i exceeds eta.  For two
summands the corresponding threshold is exact: above it solutions exist,
below it they do not.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .curvature import CurvatureContext, ricci as _ricci
from .model import (
    DiagonalForm,
    SpaceModel,
    SubalgebraLattice,
    check_hypothesis,
    enumerate_subalgebras,
)
from .numbers import Scalar, format_number, is_exact

ETA_AGREEMENT_TOL = 1e-10

FLOAT_MARGIN_EPS = 1e-12


class ChainError(ValueError):
    """Raised for chain computations outside their domain."""


class HypothesisViolatedError(ChainError):
    """The model fails the structural requirements; conditions are meaningless."""


class EtaUndefinedError(ChainError):
    """A chain denominator vanished (requirement 2 fails for the model)."""


@dataclass(frozen=True)
class SimpleChain:
    """A maximal nested pair of lattice members with its obstruction number."""

    J_k: tuple[int, ...]
    J_kprime: tuple[int, ...]
    J_l: tuple[int, ...]
    J_j: tuple[int, ...]
    J_jprime: tuple[int, ...]
    omega: int
    eta: Scalar
    eta_numerator: Scalar
    eta_denominator: Scalar

    def to_dict(self) -> dict:
        return {
            "k": list(self.J_k),
            "kprime": list(self.J_kprime),
            "l": list(self.J_l),
            "omega": self.omega,
            "eta": format_number(self.eta),
        }


def _eta_parts(model: SpaceModel, J_k: tuple[int, ...], J_kprime: tuple[int, ...]):
    """Both closed forms of eta; returns (value, numerator, denominator).

    Numerator and denominator are the non-negative Casimir-form quantities
    (denominator already includes the omega factor).
    """
    ctx = CurvatureContext(model, J_k, J_kprime)
    n, l, j, jp = J_kprime, ctx.J_l, ctx.J_j, ctx.J_jprime
    if not n or not l:
        raise ChainError(f"degenerate chain ({J_k}, {J_kprime})")
    omega = min(model.dims[i - 1] for i in n)

    num_def = (
        2 * ctx.killing_trace(n)
        + 2 * ctx.bracket_sum(n, jp, jp)
        + ctx.bracket_sum(n, n, n)
    )
    den_def = omega * (
        2 * ctx.killing_trace(l)
        + ctx.bracket_sum(l, l, l)
        + 2 * ctx.bracket_sum(l, j, j)
    )

    zero = Fraction(0) if model.exact else 0.0
    n_set, l_set = set(n), set(l)
    within_n = {i: zero for i in n}
    within_l = {i: zero for i in l}
    cross = {i: zero for i in l}
    for a, b, c, v in model.ordered_triples:
        if a in n_set and b in n_set and c in n_set:
            within_n[a] = within_n[a] + v
        if a in l_set:
            if b in l_set and c in l_set:
                within_l[a] = within_l[a] + v
            if b in n_set and c in l_set:
                cross[a] = cross[a] + v
    num_z = sum(
        4 * model.dims[i - 1] * model.casimir[i - 1] + within_n[i] for i in n
    )
    den_z = omega * sum(
        4 * model.dims[i - 1] * model.casimir[i - 1] + within_l[i] + 4 * cross[i]
        for i in l
    )

    if den_z == 0:
        raise EtaUndefinedError(
            f"chain ({J_k}, {J_kprime}) has zero denominator; the model violates "
            "requirement 2 (a summand block commutes with the inner subalgebra)"
        )
    value = num_z / den_z
    value_def = num_def / den_def
    if is_exact(value) and is_exact(value_def):
        if value != value_def:
            raise ChainError(
                f"eta forms disagree on chain ({J_k}, {J_kprime}): "
                f"{value_def} vs {value}"
            )
    else:
        if abs(float(value) - float(value_def)) > ETA_AGREEMENT_TOL * max(
            1.0, abs(float(value))
        ):
            raise ChainError(
                f"eta forms disagree on chain ({J_k}, {J_kprime}): "
                f"{value_def} vs {value}"
            )
    return value, num_z, den_z


def enumerate_simple_chains(
    model: SpaceModel, lattice: Optional[SubalgebraLattice] = None
) -> tuple[SimpleChain, ...]:
    """All simple chains of the model's lattice, in deterministic order.

    Raises :class:`HypothesisViolatedError` when the structural requirements
    demonstrably fail (the conditions would be meaningless).
    """
    if lattice is None:
        lattice = enumerate_subalgebras(model)
    verdict = check_hypothesis(model, lattice)
    if verdict.status == "violated":
        raise HypothesisViolatedError(
            f"hypothesis requirement 2 is violated at {verdict.violations}"
        )
    members = lattice.members
    chains = []
    for K in members:
        if not K:
            continue
        K_set = set(K)
        for Kp in members:
            if not Kp or Kp == K or not set(Kp) < K_set:
                continue
            between = any(
                M != K and M != Kp and set(Kp) < set(M) < K_set for M in members
            )
            if between:
                continue
            ctx = CurvatureContext(model, K, Kp)
            value, num, den = _eta_parts(model, K, Kp)
            chains.append(
                SimpleChain(
                    J_k=K,
                    J_kprime=Kp,
                    J_l=ctx.J_l,
                    J_j=ctx.J_j,
                    J_jprime=ctx.J_jprime,
                    omega=min(model.dims[i - 1] for i in Kp),
                    eta=value,
                    eta_numerator=num,
                    eta_denominator=den,
                )
            )
    chains.sort(key=lambda ch: (len(ch.J_k), ch.J_k, len(ch.J_kprime), ch.J_kprime))
    return tuple(chains)


def eta(model: SpaceModel, chain: SimpleChain) -> Scalar:
    """Obstruction number of a chain (recomputed and cross-checked)."""
    value, _, _ = _eta_parts(model, chain.J_k, chain.J_kprime)
    return value


@dataclass(frozen=True)
class ChainCondition:
    """One chain's inequality: lambda_min / trace > threshold.

    For the eigenvalue variant ``trace`` holds the largest eigenvalue over
    the middle block and ``threshold`` is eta * dim(l).
    """

    chain: SimpleChain
    lambda_min: Scalar
    trace: Scalar
    threshold: Scalar
    margin: Scalar
    passed: bool

    def to_dict(self) -> dict:
        out = self.chain.to_dict()
        out.update(
            {
                "lambda_min": float(self.lambda_min),
                "trace": float(self.trace),
                "threshold": format_number(self.threshold),
                "margin": float(self.margin),
                "passed": self.passed,
            }
        )
        return out


@dataclass(frozen=True)
class ConditionReport:
    """Chain-by-chain verdicts plus the overall outcome.

    A failing report never claims nonexistence: for three or more summands
    the conditions are sufficient only, so the existence field is left
    "inconclusive" on failure.
    """

    criterion: str
    passed: bool
    conditions: tuple[ChainCondition, ...]
    failing: Optional[ChainCondition]
    requirement1_unknown: bool

    @property
    def existence(self) -> str:
        return "solvable" if self.passed else "inconclusive"

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "passed": self.passed,
            "existence": self.existence,
            "caveat_requirement1": self.requirement1_unknown,
            "conditions": [c.to_dict() for c in self.conditions],
            "failing": None if self.failing is None else self.failing.to_dict(),
        }


def _strictly_positive(margin: Scalar) -> bool:
    if is_exact(margin):
        return margin > 0
    return margin > FLOAT_MARGIN_EPS


def _prepare_check(model: SpaceModel, T: DiagonalForm, lattice):
    if T.support != tuple(range(1, model.s + 1)):
        raise ChainError("target form must cover the full index set")
    if lattice is None:
        lattice = enumerate_subalgebras(model)
    verdict = check_hypothesis(model, lattice)
    if verdict.status == "violated":
        raise HypothesisViolatedError(
            f"hypothesis requirement 2 is violated at {verdict.violations}"
        )
    return lattice, verdict.status == "unknown"


def check_theorem(
    model: SpaceModel,
    T: DiagonalForm,
    lattice: Optional[SubalgebraLattice] = None,
) -> ConditionReport:
    """Evaluate min z over the inner block / d-weighted trace over the middle
    block > eta for every simple chain.  No chains means an unconditional pass.
    """
    lattice, caveat = _prepare_check(model, T, lattice)
    conditions = []
    failing = None
    for chain in enumerate_simple_chains(model, lattice):
        lam = min(T[i] for i in chain.J_kprime)
        trace = sum(model.dims[i - 1] * T[i] for i in chain.J_l)
        margin = lam / trace - chain.eta
        ok = _strictly_positive(margin)
        cond = ChainCondition(chain, lam, trace, chain.eta, margin, ok)
        conditions.append(cond)
        if not ok and failing is None:
            failing = cond
    return ConditionReport(
        criterion="theorem",
        passed=failing is None,
        conditions=tuple(conditions),
        failing=failing,
        requirement1_unknown=caveat,
    )


def check_corollary_lambda(
    model: SpaceModel,
    T: DiagonalForm,
    lattice: Optional[SubalgebraLattice] = None,
) -> ConditionReport:
    """Eigenvalue-ratio variant: min z over the inner block / max z over the
    middle block > eta * dim(l) per chain.  Stronger than the trace form.
    """
    lattice, caveat = _prepare_check(model, T, lattice)
    conditions = []
    failing = None
    for chain in enumerate_simple_chains(model, lattice):
        lam = min(T[i] for i in chain.J_kprime)
        lam_plus = max(T[i] for i in chain.J_l)
        dim_l = sum(model.dims[i - 1] for i in chain.J_l)
        threshold = chain.eta * dim_l
        margin = lam / lam_plus - threshold
        ok = _strictly_positive(margin)
        cond = ChainCondition(chain, lam, lam_plus, threshold, margin, ok)
        conditions.append(cond)
        if not ok and failing is None:
            failing = cond
    return ConditionReport(
        criterion="corollary",
        passed=failing is None,
        conditions=tuple(conditions),
        failing=failing,
        requirement1_unknown=caveat,
    )


class TwoSummandReport(NamedTuple):
    """Exact existence verdict for two-summand spaces.

    ``ratio > threshold`` (with threshold = d_complement * eta) is both
    sufficient and necessary.  ``trivial`` marks the degenerate lattices
    (both or neither single-index set closed) where the threshold does not
    apply: with no proper subalgebra existence is unconditional, and when
    both sides close every metric has the same Ricci coefficients so
    existence reduces to T being parallel to them.
    """

    eta: Optional[Scalar]
    threshold: Optional[Scalar]
    passed: bool
    trivial: bool
    subalgebra: Optional[int]
    ratio: Optional[Scalar]

    def to_dict(self) -> dict:
        return {
            "eta": None if self.eta is None else format_number(self.eta),
            "threshold": None if self.threshold is None else format_number(self.threshold),
            "passed": self.passed,
            "trivial": self.trivial,
            "subalgebra": self.subalgebra,
            "ratio": None if self.ratio is None else float(self.ratio),
        }


def two_summand_condition(model: SpaceModel, T: DiagonalForm) -> TwoSummandReport:
    """Decide solvability for s = 2 via the exact ratio threshold."""
    if model.s != 2:
        raise ChainError(f"two-summand condition needs s=2, got s={model.s}")
    if T.support != (1, 2):
        raise ChainError("target form must cover both summands")
    lattice = enumerate_subalgebras(model)
    proper = lattice.proper_nontrivial()
    closed = [J[0] for J in proper if len(J) == 1]
    if len(closed) != 1:
        # Degenerate lattice; see the class docstring.
        if not closed:
            return TwoSummandReport(None, None, True, True, None, None)
        x = DiagonalForm.full((1, 1)) if model.exact else DiagonalForm.full((1.0, 1.0))
        r = _ricci(model, x)
        ratios = [r[i] / T[i + 1] for i in range(2)]
        if is_exact(ratios[0]) and is_exact(ratios[1]):
            parallel = ratios[0] == ratios[1] and ratios[0] > 0
        else:
            a, b = float(ratios[0]), float(ratios[1])
            parallel = a > 0 and abs(a - b) <= 1e-9 * max(1.0, abs(a))
        return TwoSummandReport(None, None, parallel, True, None, None)
    a = closed[0]
    o = 3 - a
    full = (1, 2)
    value, _, _ = _eta_parts(model, full, (a,))
    threshold = model.dims[o - 1] * value
    ratio = T[a] / T[o]
    return TwoSummandReport(
        eta=value,
        threshold=threshold,
        passed=_strictly_positive(ratio - threshold),
        trivial=False,
        subalgebra=a,
        ratio=ratio,
    )
