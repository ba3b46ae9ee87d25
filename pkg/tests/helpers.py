"""Shared generators and independent oracles for the test suite.

Random models are Casimir-consistent by construction (Killing coefficients
are derived from the Casimir eigenvalues), have every eigenvalue positive
(so the structural hypothesis holds outright), and carry one or two
deliberately protected index sets so the subalgebra lattice is nontrivial.

The oracles here never share code with the library paths they check: the
scalar-curvature oracle sums over the dense s^3 tensor, the closure oracle
tests subsets against that same dense tensor, and the chain oracle redoes
betweenness with set algebra.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product

import numpy as np

from homricci import DiagonalForm, SpaceModel, build_model, two_summand


def _count_inside(subset, triple) -> int:
    return sum(1 for t in triple if t in subset)


def random_space_model(rng, s=None, exact=False, ensure_proper_subalgebra=True):
    """A validated random model with positive Casimir eigenvalues."""
    if s is None:
        s = int(rng.integers(2, 6))
    dims = [int(rng.integers(1, 6)) for _ in range(s)]
    while sum(dims) < 3:
        dims[int(rng.integers(0, s))] += 1

    protected = []
    if ensure_proper_subalgebra and s >= 2:
        size = int(rng.integers(1, s))
        inner = set(int(i) + 1 for i in rng.choice(s, size=size, replace=False))
        protected.append(inner)
        if len(inner) >= 2 and rng.random() < 0.5:
            sub_size = int(rng.integers(1, len(inner)))
            sub = set(
                int(i)
                for i in rng.choice(sorted(inner), size=sub_size, replace=False)
            )
            protected.append(sub)

    triples = {}
    for i, j, k in combinations_with_repetition(s):
        # a 1-dimensional summand brackets trivially with itself
        if len({i, j, k}) < 3:
            repeated = i if (i == j or i == k) else j
            if dims[repeated - 1] == 1:
                continue
        if rng.random() < 0.45:
            continue
        if any(_count_inside(P, (i, j, k)) == 2 for P in protected):
            continue
        if exact:
            value = Fraction(int(rng.integers(1, 13)), int(rng.integers(1, 13)))
        else:
            value = float(rng.uniform(0.05, 1.2))
        triples[(i, j, k)] = value

    if exact:
        casimir = [Fraction(int(rng.integers(1, 13)), int(rng.integers(1, 25))) for _ in range(s)]
    else:
        casimir = [float(rng.uniform(0.05, 0.8)) for _ in range(s)]

    return build_model(
        name=f"random-s{s}",
        dims=dims,
        casimir=casimir,
        triples=triples,
        pairwise_inequivalent=True,
    )


def combinations_with_repetition(s):
    for i in range(1, s + 1):
        for j in range(i, s + 1):
            for k in range(j, s + 1):
                yield i, j, k


def random_positive_form(rng, s, exact=False, low=0.3, high=3.0):
    if exact:
        values = [Fraction(int(rng.integers(1, 16)), int(rng.integers(1, 8))) for _ in range(s)]
    else:
        values = [float(rng.uniform(low, high)) for _ in range(s)]
    return DiagonalForm.full(values)


def random_two_summand_case(rng, pass_side: bool):
    """A conditional two-summand model plus a target on the requested side.

    The target ratio sits at least 10% away from the exact threshold, so the
    verdict is decisive.
    """
    d1 = int(rng.integers(1, 4))
    d2 = int(rng.integers(1, 5))
    if d1 + d2 < 3:
        d2 += 2
    zeta1 = float(rng.uniform(0.05, 0.5))
    zeta2 = float(rng.uniform(0.05, 0.5))
    t122 = float(rng.uniform(0.2, 1.2))
    t111 = float(rng.uniform(0.05, 0.4)) if (d1 > 1 and rng.random() < 0.5) else 0.0
    t222 = float(rng.uniform(0.05, 0.4)) if (d2 > 1 and rng.random() < 0.5) else 0.0
    model = two_summand(d1, d2, zeta1, zeta2, t122, t111, t222)
    eta_val = (4 * d1 * zeta1 + t111) / (d1 * (4 * d2 * zeta2 + t222 + 4 * t122))
    threshold = d2 * eta_val
    factor = float(rng.uniform(1.1, 3.0)) if pass_side else float(rng.uniform(0.3, 0.9))
    T = DiagonalForm.full((threshold * factor, 1.0))
    return model, T, threshold


# --- independent oracles -----------------------------------------------------


def dense_tensor(model: SpaceModel) -> np.ndarray:
    """The full s^3 symmetric tensor of bracket norms, as floats."""
    s = model.s
    out = np.zeros((s, s, s))
    for i, j, k, v in model.triples:
        for a, b, c in set(permutations((i, j, k))):
            out[a - 1, b - 1, c - 1] = float(v)
    return out


def oracle_scalar_S(model: SpaceModel, x: DiagonalForm, J=None) -> float:
    """Naive dense summation over every ordered index triple."""
    J = tuple(J) if J is not None else x.support
    t = dense_tensor(model)
    lin = sum(
        model.dims[i - 1] * float(model.killing[i - 1]) / float(x[i]) for i in J
    )
    tri = 0.0
    for i, j, k in product(J, repeat=3):
        tri += t[i - 1, j - 1, k - 1] * float(x[k]) / (float(x[i]) * float(x[j]))
    return 0.5 * lin - 0.25 * tri


def oracle_hat_S(model: SpaceModel, x: DiagonalForm, J_k) -> float:
    J_k = tuple(J_k)
    comp = [i for i in range(1, model.s + 1) if i not in set(J_k)]
    t = dense_tensor(model)
    pen = 0.0
    for i in J_k:
        for j, k in product(comp, repeat=2):
            pen += t[i - 1, j - 1, k - 1] / float(x[i])
    return oracle_scalar_S(model, x, J_k) - 0.5 * pen


def fd_grad_S(model: SpaceModel, x: DiagonalForm, step=1e-5):
    """Central finite differences of scalar_S (library path under test is
    the analytic gradient; the S evaluations here go through the oracle-free
    public function, which the dense oracle validates separately)."""
    from homricci import scalar_S

    values = [float(v) for v in x.values]
    grad = []
    for idx in range(len(values)):
        up = values.copy()
        dn = values.copy()
        h = step * max(1.0, abs(values[idx]))
        up[idx] += h
        dn[idx] -= h
        sp = scalar_S(model, DiagonalForm.full(up))
        sm = scalar_S(model, DiagonalForm.full(dn))
        grad.append((sp - sm) / (2 * h))
    return grad


def oracle_lattice(model: SpaceModel):
    """Closure check straight off the dense tensor, one subset at a time."""
    s = model.s
    t = dense_tensor(model)
    members = []
    for size in range(s + 1):
        for combo in combinations(range(1, s + 1), size):
            inside = set(combo)
            closed = True
            for j, k in product(combo, repeat=2):
                for i in range(1, s + 1):
                    if i not in inside and t[i - 1, j - 1, k - 1] != 0.0:
                        closed = False
                        break
                if not closed:
                    break
            if closed:
                members.append(tuple(sorted(combo)))
    return sorted(members, key=lambda J: (len(J), J))


def oracle_simple_chains(members):
    """Betweenness filtering with raw set algebra."""
    sets = [frozenset(J) for J in members]
    chains = []
    for K in sets:
        if not K:
            continue
        for Kp in sets:
            if not Kp or not Kp < K:
                continue
            if any(Kp < M < K for M in sets):
                continue
            chains.append((tuple(sorted(K)), tuple(sorted(Kp))))
    return sorted(chains, key=lambda ck: (len(ck[0]), ck[0], len(ck[1]), ck[1]))
