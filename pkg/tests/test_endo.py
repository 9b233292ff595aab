import json

import pytest

from hermiwitt.errors import IncomparableTokens, InfeasibleLift, InvalidParameter
from hermiwitt.wittclass import WittClassD
from hermiwitt import endo as en
from hermiwitt import randgen as rg
from hermiwitt import selftest as st


def tok_nn(i, parity, wtd, tag="m"):
    return en.EndoClassToken(f"c{i}", "simple_nonnull", 2, e_parity=1,
                             f_parity=0, min_tag=tag, aniso_parity=parity,
                             wtd_odd=frozenset(wtd))


def test_norm_containment_table():
    assert en.norm_containment(0, 0)
    assert not en.norm_containment(0, 1)
    assert not en.norm_containment(1, 0)
    assert not en.norm_containment(1, 1)


def test_token_validation():
    with pytest.raises(InvalidParameter):
        en.EndoClassToken("x", "simple_null", 2)
    with pytest.raises(InvalidParameter):
        en.EndoClassToken("x", "simple_nonnull", 3)
    with pytest.raises(InvalidParameter):
        en.EndoClassToken("x", "weird", 1)


def test_witt_type_equiv_bullets():
    t1 = tok_nn(1, 1, {"g1"})
    t2 = tok_nn(2, 1, {"g1"}, tag="m")
    assert en.witt_type_equiv(en.WittType.hyperbolic(), en.WittType.hyperbolic(), 1)
    a = en.WittType.simple(t1, 1, 0)
    assert en.witt_type_equiv(a, en.WittType.simple(t2, 1, 0), 1)
    assert not en.witt_type_equiv(a, en.WittType.simple(t2, 1, 1), 1)
    t3 = tok_nn(3, 1, {"gpi"}, tag="m")
    assert not en.witt_type_equiv(a, en.WittType.simple(t3, 1, 0), 1)
    t4 = tok_nn(4, 1, {"g1"}, tag="other")
    with pytest.raises(IncomparableTokens):
        en.witt_type_equiv(a, en.WittType.simple(t4, 1, 0), 1)
    nz = en.WittType.null({"g1"})
    assert en.witt_type_equiv(nz, en.WittType.null({"g1"}), 1)
    assert not en.witt_type_equiv(nz, en.WittType.null({"gpi"}), 1)
    assert not en.witt_type_equiv(nz, a, 1)
    assert en.WittType.null(set()).is_hyp


def test_lift_examples():
    t = tok_nn(1, 1, {"g1"})
    fm = en.EndoParameter(1, 7, WittClassD.of(1, "g1"),
                          ((t, 3, en.WittType.simple(t, 1, 0)),))
    assert en.lift(fm) == {"c1": 7}
    assert en.degree(fm) == 14
    tp = en.EndoClassToken("p", "nonsimple_pair", 3)
    fm2 = en.EndoParameter(1, 6, WittClassD.zero(1),
                           ((tp, 2, en.WittType.hyperbolic()),))
    assert en.lift(fm2) == {"p#1": 2, "p#2": 2}
    assert en.degree(fm2) == 12
    t0 = tok_nn(9, 0, set())
    fm3 = en.EndoParameter(1, 0, WittClassD.zero(1), ())
    assert en.degree(fm3) == 0


def test_degree_additivity():
    t1, t2 = tok_nn(1, 1, {"g1"}), tok_nn(2, 0, set(), tag="n")
    a = en.EndoParameter(1, 0, WittClassD.zero(1),
                         ((t1, 2, en.WittType.simple(t1, 1, 0)),))
    b = en.EndoParameter(1, 0, WittClassD.zero(1),
                         ((t2, 1, en.WittType.hyperbolic()),))
    both = en.EndoParameter(1, 0, WittClassD.zero(1), a.support + b.support)
    assert en.degree(both) == en.degree(a) + en.degree(b)


def test_wt_d_selector_flip_equal():
    t = tok_nn(1, 1, {"galpha"})
    w0 = en.WittType.simple(t, 1, 0)
    w1 = en.WittType.simple(t, 1, 1)
    assert w0.wt_d(1) == w1.wt_d(1) == WittClassD.of(1, "galpha")
    assert en.WittType.hyperbolic().wt_d(1) == WittClassD.zero(1)
    t2 = tok_nn(2, 0, set())
    assert en.WittType.simple(t2, 2).wt_d(1) == WittClassD.zero(1)


def test_validate_diagnostics():
    t = tok_nn(1, 1, {"g1"})
    good = en.EndoParameter(1, 7, WittClassD.of(1, "g1"),
                            ((t, 3, en.WittType.simple(t, 1, 0)),))
    ok, diags = en.validate(good)
    assert ok and not diags
    bad_deg = en.EndoParameter(1, 8, WittClassD.of(1, "g1"), good.support)
    ok, diags = en.validate(bad_deg)
    assert not ok and "degree" in diags
    bad_sum = en.EndoParameter(1, 7, WittClassD.of(1, "gpi"), good.support)
    ok, diags = en.validate(bad_sum)
    assert not ok and "witt_sum" in diags


def test_enumerate_spec_examples():
    t1 = tok_nn(1, 1, {"g1"})
    t2 = tok_nn(2, 1, {"gpi"}, tag="n")
    h = WittClassD.of(1, "g1") + WittClassD.of(1, "gpi")
    out = en.enumerate_parameters([en.LiftEntry(t1, 1), en.LiftEntry(t2, 1)],
                                  1, 2, h)
    assert len(out) == 4
    # three fixed classes, one null -> 4
    t0 = en.EndoClassToken("a0", "simple_null", 1)
    entries = [en.LiftEntry(t1, 1), en.LiftEntry(t2, 1), en.LiftEntry(t0, 6)]
    hh = h + WittClassD.of(1, "galpha")
    out = en.enumerate_parameters(entries, 1, 5, hh)
    assert len(out) == 4
    for fm in out:
        ok, diags = en.validate(fm)
        assert ok, diags
    # only nonsimple pairs -> 1
    tp = en.EndoClassToken("p", "nonsimple_pair", 1)
    out = en.enumerate_parameters([en.LiftEntry(tp, 2)], 1, 2,
                                  WittClassD.zero(1))
    assert len(out) == 1


def test_counting_closed_form_examples():
    toks = [tok_nn(i, 1, {"g1"}, tag=f"t{i}") for i in range(3)]
    h = WittClassD.of(1, "g1")  # xor of three copies of {g1}
    entries = [en.LiftEntry(t, 1) for t in toks]
    assert en.count_parameters(entries, 1, 3, h) == 8
    t0 = en.EndoClassToken("a0", "simple_null", 1)
    out = en.count_parameters([en.LiftEntry(t0, 4)], 1, 2, WittClassD.zero(1))
    assert out == 1
    tp = en.EndoClassToken("p", "nonsimple_pair", 2)
    assert en.count_parameters([en.LiftEntry(tp, 1)], 1, 2,
                               WittClassD.zero(1)) == 1


def test_infeasible_lift():
    t1 = tok_nn(1, 1, {"g1"})
    with pytest.raises(InfeasibleLift):
        en.enumerate_parameters([en.LiftEntry(t1, 2)], 1, 2,
                                WittClassD.zero(1))  # parity mismatch
    with pytest.raises(InfeasibleLift):
        # witt sum cannot match without a null block
        en.enumerate_parameters([en.LiftEntry(t1, 1)], 1, 1,
                                WittClassD.of(1, "gpi"))


def test_enumerate_deterministic_order():
    t1 = tok_nn(1, 1, {"g1"})
    t2 = tok_nn(2, 1, {"gpi"}, tag="n")
    h = WittClassD.of(1, "g1") + WittClassD.of(1, "gpi")
    entries = [en.LiftEntry(t2, 1), en.LiftEntry(t1, 1)]
    out1 = en.enumerate_parameters(entries, 1, 2, h)
    out2 = en.enumerate_parameters(list(reversed(entries)), 1, 2, h)
    assert [en.parameter_to_json(f) for f in out1] == \
        [en.parameter_to_json(f) for f in out2]


def test_random_configs_match_closed_form(cfg5):
    r = rg.rng(127)
    for _ in range(50):
        entries, eps, m, h = st._random_token_config(cfg5, r)
        out = en.enumerate_parameters(entries, eps, m, h)
        assert len(out) == en.closed_form_count(entries)
        for fm in out:
            ok, diags = en.validate(fm)
            assert ok, diags


def test_parameter_json_roundtrip():
    t1 = tok_nn(1, 1, {"g1"})
    t0 = en.EndoClassToken("a0", "simple_null", 1)
    fm = en.EndoParameter(
        1, 4, WittClassD.of(1, "g1", "galpha"),
        ((t1, 1, en.WittType.simple(t1, 1, 1)),
         (t0, 0, en.WittType.null({"galpha"}))))
    ok, diags = en.validate(fm)
    assert ok, diags
    j = json.dumps(en.parameter_to_json(fm), sort_keys=True)
    back = en.parameter_from_json(json.loads(j))
    assert back == fm


def test_wt_d_element_level_cross_check(cfg5):
    # the token-level trace class agrees with the one computed through the
    # category equivalence and the trace transfer, for quadratic generators
    # realized inside D, and is the same for both odd towers
    from hermiwitt.quaternion import QuaternionElement as Q
    from hermiwitt import morita as mo
    from hermiwitt import wittclass as wc

    for gen in (Q.u_elem(cfg5), Q.pi_D(cfg5)):
        data = mo.split(cfg5, gen)
        E = data.E
        u1inv = data.u1.inv()
        for eps in (1, -1):
            classes = []
            for d in (cfg5.f(1), cfg5.pi() if not E.ramified
                      else cfg5.f(cfg5.nonresidue_r)):
                # the two odd towers differ by a non-norm scaling of the line
                entry = E.from_f(d * u1inv) if eps == 1 \
                    else E.gen().scale_f(d * u1inv)
                ed = mo.EDForm(data, eps, ((entry,),))
                cls = mo.e_witt_class(ed.rows(), E, eps)
                assert cls.anisotropic_dim == 1
                classes.append((cls.i_is_norm,
                                wc.class_of_form(mo.trace_transfer(ed))))
            (n0, c0), (n1, c1) = classes
            assert n0 != n1          # genuinely the two distinct odd towers
            assert c0 == c1          # equal trace classes
            tok = en.EndoClassToken(
                "c", "simple_nonnull", 2,
                e_parity=1 if not E.ramified else 0,
                f_parity=0 if not E.ramified else 1,
                min_tag="x", aniso_parity=1, wtd_odd=c0.coords)
            for sel in (0, 1):
                assert en.WittType.simple(tok, 1, sel).wt_d(eps) == c0
