import pytest

from hermiwitt.errors import IndistinguishableZero
from hermiwitt.quaternion import QuaternionElement as Q, congruent_mod_nuD, quat_mul
from hermiwitt import randgen as rg


def test_quat_mul_examples(cfg5):
    pi = Q.pi_D(cfg5)
    u = Q.u_elem(cfg5)
    # square of pi_D is the uniformizer of F
    assert (quat_mul(pi, pi) - cfg5.p).is_zero()
    assert quat_mul(u, pi).same(Q.make(cfg5, 0, cfg5.u()))
    assert quat_mul(pi, u).same(-quat_mul(u, pi))


def test_rho_examples(cfg5):
    pi, u = Q.pi_D(cfg5), Q.u_elem(cfg5)
    assert pi.rho().same(pi)
    assert u.rho().same(u)
    assert (u * pi).rho().same(-(u * pi))


def test_trd_nrd_examples(cfg5):
    one, pi, u = Q.one(cfg5), Q.pi_D(cfg5), Q.u_elem(cfg5)
    assert one.trd().same(2) and one.nrd().same(1)
    assert pi.trd().is_zero() and pi.nrd().same(-cfg5.p)
    assert u.trd().is_zero() and u.nrd().same(-cfg5.nonresidue_r)


def test_nu_D_examples(cfg5):
    pi, u = Q.pi_D(cfg5), Q.u_elem(cfg5)
    assert pi.nu_D() == 1
    assert (pi * pi).nu_D() == 2
    assert (u + pi).nu_D() == 0
    with pytest.raises(IndistinguishableZero):
        Q.zero(cfg5).nu_D()


def test_symmetry_type_examples(cfg5):
    assert (Q.one(cfg5) + Q.make(cfg5, 0, 3)).symmetry_type() == "symmetric"
    assert (Q.u_elem(cfg5) * Q.pi_D(cfg5)).symmetry_type() == "skew"
    u = Q.u_elem(cfg5)
    assert (u + u * Q.pi_D(cfg5)).symmetry_type() == "neither"


def test_congruence_examples(cfg5):
    one, pi = Q.one(cfg5), Q.pi_D(cfg5)
    assert congruent_mod_nuD(one, one + pi)
    assert congruent_mod_nuD(one, one + pi.scale_f(cfg5.pi()))
    assert not congruent_mod_nuD(pi, pi * pi)


def test_rho_antimultiplicative_seeded(cfg5):
    r = rg.rng(13)
    for _ in range(300):
        x, y = rg.rand_quat(cfg5, r), rg.rand_quat(cfg5, r)
        assert ((x * y).rho() - y.rho() * x.rho()).is_zero()
        assert x.rho().rho().same(x)


def test_nrd_trd_properties_seeded(cfg5):
    r = rg.rng(17)
    for _ in range(300):
        x, y = rg.rand_quat(cfg5, r), rg.rand_quat(cfg5, r)
        assert ((x * y).nrd() - x.nrd() * y.nrd()).is_zero()
        assert (x.trd() - x.rho().trd()).is_zero()
        assert (x.nrd() - x.rho().nrd()).is_zero()
        assert x.nu_D() == x.nrd().valuation()


def test_symmetric_skew_decomposition(cfg5):
    r = rg.rng(19)
    half = cfg5.f(1) / 2
    for _ in range(100):
        x = rg.rand_quat(cfg5, r)
        s = (x + x.rho()).scale_f(half)
        k = (x - x.rho()).scale_f(half)
        assert (s + k - x).is_zero()
        assert s.is_zero() or s.symmetry_type() == "symmetric"
        assert k.is_zero() or k.symmetry_type() == "skew"
    for b in (Q.one(cfg5), Q.u_elem(cfg5), Q.pi_D(cfg5)):
        assert b.symmetry_type() == "symmetric"
    assert (Q.u_elem(cfg5) * Q.pi_D(cfg5)).symmetry_type() == "skew"


def test_inverse_and_division(cfg5):
    r = rg.rng(23)
    one = Q.one(cfg5)
    for _ in range(50):
        x = rg.rand_quat(cfg5, r)
        assert (x * x.inv() - one).is_zero()
        assert (x.inv() * x - one).is_zero()


def test_json_roundtrip(cfg5):
    from hermiwitt import serialize as sz

    r = rg.rng(29)
    for _ in range(20):
        q = rg.rand_quat(cfg5, r)
        back = sz.quat_from_json(cfg5, sz.quat_to_json(q))
        assert back.same(q)


def test_trd_nrd_wrapper(cfg5):
    from hermiwitt.quaternion import trd_nrd

    t, n = trd_nrd(Q.pi_D(cfg5))
    assert t.is_zero() and n.same(-cfg5.p)
