from __future__ import annotations

import random
from fractions import Fraction

import pytest

from oracles import sun_identities_q1
from qdual.errors import DomainError
from qdual.exact import LaurentPoly, as_ratfunc, rf_sum
from qdual.harness import (
    CATALOG,
    IDENTITY_IDS,
    SuiteConfig,
    SuiteEntry,
    accepted_variants,
    build_sides,
    check,
    check_theorem2,
    prop2_at_x1_z0,
    run_suite,
    summarize,
)
from qdual.report import IdentityInstance, IdentityReport


def inst(iid, mode="symbolic", variant="as-printed", mutation=None, **p):
    return IdentityInstance.make(iid, p, mode=mode, variant=variant, mutation=mutation)


def test_catalog_is_complete():
    assert len(IDENTITY_IDS) == 22
    assert IDENTITY_IDS[0] == "THM1_1" and IDENTITY_IDS[-1] == "PROP2_3"


def test_thm1_2_trivial_case():
    lhs, rhs = build_sides(inst("THM1_2", k=0, l=0))
    a0 = LaurentPoly.var("a_0", lhs[0].reg)
    assert rf_sum(lhs) == a0 and rf_sum(rhs) == a0
    assert check(inst("THM1_2", k=0, l=0)).holds


def test_examples_from_catalog():
    assert check(inst("EX1_QPROP", i=0, k=1, l=1)).holds
    assert check(inst("THM2_2", k=0, l=0)).holds
    assert check_theorem2(inst("THM2_1", k=2, l=1)).holds
    with pytest.raises(DomainError):
        check_theorem2(inst("THM1_1", k=0, l=0))


@pytest.mark.parametrize("iid", IDENTITY_IDS)
def test_mutation_is_caught(iid):
    e = CATALOG[iid]
    p = {n: 1 for n in e.params}
    for variant in e.variants:
        r = check(inst(iid, variant=variant, mutation="auto", **p))
        assert r.verdict == "fails"
        assert isinstance(r.witness, LaurentPoly) and not r.witness.is_zero()
        assert check(inst(iid, variant=variant, mutation="sign", **p)).verdict == "fails"


def test_qpow_mutation_kinds():
    r = check(inst("THM1_2", k=2, l=1, mutation="qpow"))
    assert not r.holds
    with pytest.raises(DomainError):
        check(inst("THM1_2", k=0, l=0, mutation="bogus"))


def test_domain_errors():
    with pytest.raises(DomainError):
        check(inst("EX1_BASIC", i=3, k=1, l=3))
    with pytest.raises(DomainError):
        check(inst("THM1_1", k=-1, l=0))
    with pytest.raises(DomainError):
        check(inst("THM1_1", k=0))
    with pytest.raises(DomainError):
        check(inst("THM1_1", variant="corrected", k=0, l=0))
    with pytest.raises(DomainError):
        check(inst("NOPE"))


def test_point_mode_matches_symbolic_on_suite_sample():
    # symbolic holds => point holds; printed failures are found pointwise too
    rng = random.Random(5)
    for iid in IDENTITY_IDS:
        e = CATALOG[iid]
        for _ in range(3):
            p = {n: rng.randint(0, min(2, hi)) for n, (lo, hi) in e.ranges.items()}
            if not e.in_domain(p):
                continue
            for v in e.variants:
                s = check(inst(iid, variant=v, **p))
                pt = check(inst(iid, mode="point", variant=v, **p))
                if s.holds:
                    assert pt.holds
                else:
                    assert not pt.holds  # a nonzero rational function is rarely hit
                    assert set(pt.witness) == {"point", "residual"}


def test_point_mode_is_deterministic():
    a = check(inst("PROP1_1", mode="point", k=0, l=1))
    b = check(inst("PROP1_1", mode="point", k=0, l=1))
    assert a.witness == b.witness and not a.holds


def test_report_invariant():
    i = inst("THM1_2", k=0, l=0)
    with pytest.raises(ValueError):
        IdentityReport(i, "fails", None)
    with pytest.raises(ValueError):
        IdentityReport(i, "holds", LaurentPoly.const(1))
    assert "elapsed" not in IdentityReport(i, "holds").to_json()
    assert "elapsed" in IdentityReport(i, "holds").to_json(timing=True)


def test_suite_config_parsing():
    cfg = SuiteConfig.from_json({"identities": [
        {"id": "THM1_2", "k_max": 2, "l_max": 1, "mode": "symbolic"},
        {"id": "PROP1_2", "k_min": 1, "k_max": 1, "l_max": 0, "variant": "corrected"},
    ]})
    insts = cfg.instances()
    assert [i.id for i in insts] == ["PROP1_2"] + ["THM1_2"] * 6
    assert insts[0].variant == "corrected" and insts[0].p == {"k": 1, "l": 0}
    for bad in ({}, {"identities": [{"k_max": 1}]}, {"identities": [{"id": "X"}]},
                {"identities": [{"id": "THM1_2", "m_max": 3}]},
                {"identities": [{"id": "THM1_2", "mode": "fast"}]},
                {"identities": [{"id": "THM1_2", "k_max": "3"}]}):
        with pytest.raises(ValueError):
            SuiteConfig.from_json(bad)


def test_empty_suite():
    assert run_suite(SuiteConfig([])) == []
    assert summarize([])["ok"] is True


def test_parallel_equals_serial():
    cfg = SuiteConfig([SuiteEntry("THM1_1", {"k": (0, 2), "l": (0, 2)}),
                       SuiteEntry("PROP1_2", {"k": (0, 1), "l": (0, 2)})])
    serial = [r.to_json() for r in run_suite(cfg, jobs=1)]
    parallel = [r.to_json() for r in run_suite(cfg, jobs=2)]
    assert serial == parallel
    keys = [(d["id"], d["variant"], sorted(d["params"].items())) for d in serial]
    assert keys == sorted(keys)


def test_variant_policy_names_the_holding_variant():
    cfg = SuiteConfig([SuiteEntry(i) for i in ("EX2", "EX3_1", "EX3_2", "PROP1_1")])
    acc = accepted_variants(run_suite(cfg, jobs=1))
    assert acc == {"EX2": "corrected", "EX3_1": "corrected", "EX3_2": "corrected",
                   "PROP1_1": "corrected"}


def test_printed_bernoulli_failures_sit_at_dual_index_one():
    for k in range(4):
        for l in range(4):
            r = check(inst("PROP1_2", k=k, l=l))
            touches_one = (k == 0 and l >= 1) or (k == 1)
            if not touches_one:
                assert r.holds


@pytest.mark.parametrize("which", [1, 2, 3])
def test_prop1_from_prop2_at_x1_z0(which):
    for k in range(4):
        for l in range(4):
            w2, w1 = prop2_at_x1_z0(which, k, l, "corrected")
            assert w2 == w1 and w1.is_zero()


def test_bracket_identities_at_q1_against_classical_path():
    rng = random.Random(2)
    for k in range(4):
        for l in range(4):
            a = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(k + l + 3)]
            x, z = Fraction(rng.randint(2, 9), 7), Fraction(-rng.randint(2, 9), 5)
            point = {"q": 1, "x": x, "z": z, **{f"a_{i}": v for i, v in enumerate(a)}}
            want = sun_identities_q1(a, x, z, k, l)
            for idx in range(3):
                lhs, rhs = build_sides(inst(f"THM2_{idx + 1}", k=k, l=l))
                got_l = sum(Fraction(as_ratfunc(v).evaluate(point)) for v in lhs)
                got_r = sum(Fraction(as_ratfunc(v).evaluate(point)) for v in rhs)
                assert (got_l, got_r) == want[idx]


def test_ex1_basic_agrees_with_qprop_sidewise():
    for i in range(4):
        for k in range(i, 4):
            for l in range(i, 4):
                p = dict(i=i, k=k, l=l)
                bl, br = build_sides(inst("EX1_BASIC", **p))
                ql, qr = build_sides(inst("EX1_QPROP", **p))
                assert as_ratfunc(rf_sum(bl)) == as_ratfunc(rf_sum(ql))
                assert as_ratfunc(rf_sum(br)) == as_ratfunc(rf_sum(qr))
