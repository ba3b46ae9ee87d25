"""Model validation, lattice enumeration, hypothesis and classification."""

from fractions import Fraction

import numpy as np
import pytest

from homricci import (
    DiagonalForm,
    ModelError,
    SpaceModel,
    build_model,
    check_hypothesis,
    classify_cor_all,
    enumerate_subalgebras,
    flag3,
    parse_model,
    serialize_model,
    validate,
)
from helpers import oracle_lattice, random_space_model


def test_single_summand_derives_casimir():
    m = build_model("point", dims=(3,), killing=(1,))
    assert m.casimir == (Fraction(1, 2),)


def test_flag_model_derived_casimir_golden():
    m = flag3(4, 2, 4)
    assert m.row_sums == (Fraction(7, 3), Fraction(5, 3), Fraction(1))
    assert m.casimir == (Fraction(5, 24), Fraction(1, 12), Fraction(3, 8))


def test_conflicting_killing_rejected():
    m = flag3(4, 2, 4)
    raw = SpaceModel(
        name="bad",
        dims=m.dims,
        casimir=m.casimir,
        killing=(Fraction(1), Fraction(1), Fraction(2)),
        triples=m.triples,
    )
    report = validate(raw)
    assert not report.ok
    assert any("i=3" in err for err in report.errors)


def test_float_casimir_tolerance():
    m = flag3(4, 2, 4)
    killing = [float(b) for b in m.killing]
    casimir = [float(z) for z in m.casimir]
    triples = [(i, j, k, float(v)) for i, j, k, v in m.triples]
    ok = validate(
        SpaceModel("f", m.dims, tuple(casimir), tuple(killing), tuple(triples))
    )
    assert ok.ok
    killing[2] += 1e-6
    bad = validate(
        SpaceModel("f", m.dims, tuple(casimir), tuple(killing), tuple(triples))
    )
    assert not bad.ok


def test_structural_rejections():
    with pytest.raises(ModelError):
        build_model("neg", dims=(2, 2), casimir=(1, 1), triples={(1, 2, 2): -1})
    with pytest.raises(ModelError):
        build_model("small", dims=(2,), killing=(1,))
    with pytest.raises(ModelError):
        build_model("none", dims=(3,))
    with pytest.raises(ModelError):
        build_model("derived-neg", dims=(2, 2), killing=(1, 0), triples={(1, 2, 2): 5})


def test_triple_lookup_symmetric():
    m = flag3(4, 2, 4)
    assert m.triple(2, 1, 1) == m.triple(1, 1, 2) == Fraction(2, 3)
    assert m.triple(3, 1, 2) == Fraction(1, 2)
    assert m.triple(2, 2, 3) == 0


def test_parse_rejects_bad_documents():
    good = serialize_model(flag3(4, 2, 4))
    parse_model(good)
    with pytest.raises(ModelError):
        parse_model(good.replace('"name"', '"nom"'))
    with pytest.raises(ModelError):
        parse_model('{"name": "x", "s": 1, "dims": [3], "killing": [1], '
                     '"triples": [], "pairwise_inequivalent": true, "extra": 1}')
    with pytest.raises(ModelError):
        parse_model('{"name": "x", "s": 2, "dims": [2, 2], "killing": [1, 1], '
                     '"triples": [[2, 1, 1, 0.5]], "pairwise_inequivalent": true}')
    with pytest.raises(ModelError):
        parse_model('{"name": "x", "s": 2, "dims": [2, 2], "killing": [1, 1], '
                     '"triples": [[1, 1, 2, 0.5], [1, 1, 2, 0.5]], '
                     '"pairwise_inequivalent": true}')
    with pytest.raises(ModelError):
        parse_model("not json {")


def test_serialize_round_trip_is_byte_identical():
    m = flag3(4, 2, 4)
    text = serialize_model(m)
    again = serialize_model(validate(parse_model(text)).model)
    assert text == again


def test_rational_flag_promotes_float_literals():
    doc = ('{"name": "x", "s": 1, "dims": [3], "casimir": [0.5], '
           '"triples": [], "pairwise_inequivalent": true}')
    m = parse_model(doc, rational=True)
    assert m.casimir == (Fraction(1, 2),)
    assert m.exact
    assert not parse_model(doc).exact


def test_lattice_flag_golden():
    lat = enumerate_subalgebras(flag3(4, 2, 4))
    assert lat.members == ((), (2,), (3,), (1, 2, 3))
    assert lat.member_dims == (0, 2, 4, 10)


def test_lattice_all_triples_zero_gives_power_set():
    m = build_model("free", dims=(1, 2, 2), casimir=(Fraction(1, 4),) * 3)
    lat = enumerate_subalgebras(m)
    assert len(lat.members) == 8


def test_lattice_two_summand_sides():
    # side 2 closed, side 1 open: only the (1,1,2) mass is present
    m = build_model(
        "half", dims=(2, 2), casimir=(Fraction(1, 5), Fraction(1, 5)),
        triples={(1, 1, 2): Fraction(1, 2)},
    )
    lat = enumerate_subalgebras(m)
    assert (2,) in lat
    assert (1,) not in lat


def test_lattice_matches_dense_oracle():
    rng = np.random.default_rng(7)
    for _ in range(40):
        m = random_space_model(rng)
        lat = enumerate_subalgebras(m)
        assert list(lat.members) == oracle_lattice(m)


def test_lattice_closure_restatement():
    rng = np.random.default_rng(11)
    for _ in range(25):
        m = random_space_model(rng)
        lat = enumerate_subalgebras(m)
        for J in lat.members:
            inside = set(J)
            for i, j, k, v in m.ordered_triples:
                if j in inside and k in inside and i not in inside:
                    assert v == 0


def test_lattice_monotone_under_zeroing():
    rng = np.random.default_rng(13)
    for _ in range(25):
        m = random_space_model(rng)
        nonzero = [row for row in m.triples if row[3] != 0]
        if not nonzero:
            continue
        drop = nonzero[int(rng.integers(0, len(nonzero)))][:3]
        before = set(enumerate_subalgebras(m).members)
        reduced = build_model(
            m.name,
            m.dims,
            casimir=m.casimir,
            triples={(i, j, k): v for i, j, k, v in m.triples if (i, j, k) != drop},
        )
        after = set(enumerate_subalgebras(reduced).members)
        assert before <= after


def test_lattice_summand_cap():
    m = build_model("big", dims=(1,) * 25, casimir=(Fraction(1, 4),) * 25)
    with pytest.raises(ModelError):
        enumerate_subalgebras(m)


def test_hypothesis_flag_satisfied():
    verdict = check_hypothesis(flag3(4, 2, 4))
    assert verdict.status == "satisfied"
    assert verdict.requirement1 == "satisfied"
    assert verdict.requirement2 == "satisfied"


def test_hypothesis_violation_detected():
    # summand 1 is an untouched line (zero casimir, no links into {2})
    m = build_model(
        "isolated",
        dims=(1, 2, 2),
        casimir=(0, Fraction(3, 10), Fraction(2, 5)),
        triples={(1, 3, 3): Fraction(1, 2)},
    )
    verdict = check_hypothesis(m)
    assert verdict.status == "violated"
    assert ((2,), 1) in verdict.violations


def test_hypothesis_unknown_without_flag():
    m = build_model(
        "unflagged",
        dims=(4, 2, 4),
        killing=(1, 1, 1),
        triples={(1, 1, 2): Fraction(2, 3), (1, 2, 3): Fraction(1, 2)},
        pairwise_inequivalent=False,
    )
    verdict = check_hypothesis(m)
    assert verdict.requirement1 == "unknown"
    assert verdict.status == "unknown"


def test_classify_unconditional_structure():
    m = build_model(
        "line-plus",
        dims=(1, 4, 4),
        casimir=(0, Fraction(3, 10), Fraction(2, 5)),
        triples={
            (2, 2, 3): Fraction(1, 3),
            (2, 3, 3): Fraction(1, 4),
            (1, 2, 3): Fraction(1, 5),
        },
    )
    lat = enumerate_subalgebras(m)
    assert lat.proper_nontrivial() == ((1,),)
    assert classify_cor_all(m)


def test_classify_rejects_flag_and_positive_casimir():
    assert not classify_cor_all(flag3(4, 2, 4))
    rng = np.random.default_rng(3)
    m = random_space_model(rng)  # all casimir eigenvalues positive
    assert not classify_cor_all(m)


def test_classify_rejects_zero_casimir_on_fat_summand():
    m = build_model(
        "fat-line", dims=(2, 4), casimir=(0, Fraction(1, 3)),
        triples={(1, 2, 2): Fraction(1, 2)},
    )
    assert not classify_cor_all(m)


def test_derived_killing_satisfies_identity():
    rng = np.random.default_rng(17)
    for _ in range(10):
        m = random_space_model(rng)  # float mode, killing derived
        report = validate(m)
        assert report.ok
        assert all(abs(res) <= 1e-12 for res in report.residuals)


def test_diagonal_form_contract():
    f = DiagonalForm.full((1, 2, 3))
    assert f.support == (1, 2, 3)
    assert f[2] == 2
    g = f.restrict((1, 3))
    assert g.support == (1, 3) and g[3] == 3
    with pytest.raises(ModelError):
        f.restrict((4,))
    with pytest.raises(ModelError):
        DiagonalForm.full((1, 0))
    with pytest.raises(ModelError):
        DiagonalForm((1, 2), (2, 1))
    assert f.scale(2).values == (Fraction(2), Fraction(4), Fraction(6))
    with pytest.raises(ModelError):
        f[4]
