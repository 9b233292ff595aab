"""Seeded invariant suites for every module, used by the CLI selftest and
reused by the test suite.  Each suite returns (name, passed, failed)."""

from __future__ import annotations

from .errors import OracleInconclusive
from .hermitian import (
    HermitianForm,
    cayley_isometry,
    dmat_mul,
    dmat_rho_t,
    is_isometry,
    reduced_norm,
    trace_lift_hL,
    hL_evaluate,
    l_coordinates,
    twist,
    validate,
    witt_decompose,
)
from .padic import FieldConfig, tau_conj
from .quaternion import QuaternionElement, congruent_mod_nuD
from . import morita as mo
from . import randgen as rg
from . import wittclass as wc


def _suite(name, checks):
    passed = sum(1 for c in checks if c)
    return {"name": name, "passed": passed, "failed": len(checks) - passed}


def padic_arith(cfg: FieldConfig, seed: int, n=1000):
    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        x, y = rg.rand_f(cfg, r), rg.rand_f(cfg, r)
        checks.append((x * y).valuation() == x.valuation() + y.valuation())
        s = x + y
        if not s.is_zero():
            v = s.valuation()
            ok = v >= min(x.valuation(), y.valuation())
            if x.valuation() != y.valuation():
                ok = ok and v == min(x.valuation(), y.valuation())
            checks.append(ok)
    return _suite("padic_arith", checks)


def padic_tau_norm(cfg: FieldConfig, seed: int, n=1000):
    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        x = rg.rand_l(cfg, r)
        checks.append(tau_conj(tau_conj(x)).same(x))
        checks.append((x * tau_conj(x)).b.is_zero())
        checks.append((x + tau_conj(x)).b.is_zero())
    return _suite("padic_tau_norm", checks)


def padic_squares(cfg: FieldConfig, seed: int, n=300):
    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        x = rg.rand_f(cfg, r)
        sq = x * x
        checks.append(sq.is_square())
        y = sq.sqrt()
        checks.append((y * y - sq).is_zero())
        a, b = rg.rand_f(cfg, r, 0, 0), rg.rand_f(cfg, r, 0, 0)
        checks.append((a * b).is_square() == (a.is_square() == b.is_square()))
    return _suite("padic_squares", checks)


def quaternion_rho(cfg: FieldConfig, seed: int, n=1000):
    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        x, y = rg.rand_quat(cfg, r), rg.rand_quat(cfg, r)
        checks.append(((x * y).rho() - y.rho() * x.rho()).is_zero())
        checks.append((x.rho().rho() - x).is_zero())
    return _suite("quaternion_rho", checks)


def quaternion_nrd(cfg: FieldConfig, seed: int, n=500):
    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        x, y = rg.rand_quat(cfg, r), rg.rand_quat(cfg, r)
        checks.append(((x * y).nrd() - x.nrd() * y.nrd()).is_zero())
        checks.append((x.trd() - x.rho().trd()).is_zero())
        checks.append((x.nrd() - x.rho().nrd()).is_zero())
        checks.append(x.nu_D() == x.nrd().valuation())
    return _suite("quaternion_nrd", checks)


def quaternion_decomp(cfg: FieldConfig, seed: int, n=200):
    r = rg.rng(seed)
    half = cfg.f(1) / 2
    checks = []
    for _ in range(n):
        x = rg.rand_quat(cfg, r)
        s = (x + x.rho()).scale_f(half)
        k = (x - x.rho()).scale_f(half)
        checks.append((s + k - x).is_zero())
        checks.append(s.symmetry_type() in ("symmetric",) or s.is_zero())
        checks.append(k.symmetry_type() in ("skew",) or k.is_zero())
    basis = [QuaternionElement.one(cfg), QuaternionElement.u_elem(cfg),
             QuaternionElement.pi_D(cfg)]
    checks.append(all(b.symmetry_type() == "symmetric" for b in basis))
    checks.append((QuaternionElement.u_elem(cfg)
                   * QuaternionElement.pi_D(cfg)).symmetry_type() == "skew")
    return _suite("quaternion_decomp", checks)


def hermitian_congruence(cfg: FieldConfig, seed: int, n=500):
    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        eps = 1 if r.random() < 0.5 else -1
        rank = r.randint(1, 3)
        diag = rg.rand_diagonal_form(cfg, r, eps, rank)
        S = rg.rand_invertible(cfg, r, rank)
        M2 = dmat_mul(dmat_rho_t(S), dmat_mul(diag.rows(), S))
        f2 = HermitianForm.from_rows(eps, M2)
        i1, a1 = witt_decompose(diag)
        i2, a2 = witt_decompose(f2)
        checks.append(i1 == i2
                      and wc.class_of_diagonal(a1) == wc.class_of_diagonal(a2))
    return _suite("hermitian_congruence", checks)


def hermitian_hyperbolic(cfg: FieldConfig, seed: int, n=100):
    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        eps = 1 if r.random() < 0.5 else -1
        rank = r.randint(1, 2)
        f = rg.rand_diagonal_form(cfg, r, eps, rank)
        i1, a1 = witt_decompose(f)
        g = f.orthogonal_sum(HermitianForm.hyperbolic_plane(cfg, eps))
        i2, a2 = witt_decompose(g)
        checks.append(i2 == i1 + 1
                      and wc.class_of_diagonal(a1) == wc.class_of_diagonal(a2))
    return _suite("hermitian_hyperbolic", checks)


def hermitian_nrd1(cfg: FieldConfig, seed: int, n=200):
    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        eps = 1 if r.random() < 0.5 else -1
        rank = r.randint(1, 3)
        form = rg.rand_form(cfg, r, eps, rank)
        X = rg.rand_skew_adjoint(cfg, r, form)
        g = cayley_isometry(X, form)
        checks.append(is_isometry(g, form))
        nrd = reduced_norm(g)
        diff = nrd - 1
        checks.append(diff.is_zero() or diff.valuation() >= cfg.precision - 8)
    return _suite("hermitian_nrd1", checks)


def hermitian_twist(cfg: FieldConfig, seed: int, n=100):
    # a scalar gamma is sigma_h-(skew-)adjoint only when the Gram entries
    # commute with it, so the suite twists F-entry diagonal forms
    r = rg.rng(seed)
    checks = []
    skew = QuaternionElement.u_elem(cfg) * QuaternionElement.pi_D(cfg)
    for _ in range(n):
        rank = r.randint(1, 2)
        f = HermitianForm.diagonal(
            1, [QuaternionElement.make(cfg, cfg.l(rg.rand_f(cfg, r), 0))
                for _ in range(rank)])
        g = twist(f, skew)
        checks.append(g.epsilon == -1 and validate(g))
        back = twist(g, skew)
        checks.append(back.epsilon == 1
                      and wc.class_of_form(back) == wc.class_of_form(f))
    return _suite("hermitian_twist", checks)


def hermitian_trace_lift(cfg: FieldConfig, seed: int, n=20, pairs=50):
    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        eps = 1 if r.random() < 0.5 else -1
        rank = r.randint(1, 3)
        form = rg.rand_form(cfg, r, eps, rank)
        hL = trace_lift_hL(form)
        checks.append(len(hL) == 2 * rank)
        for _ in range(pairs):
            v = [rg.rand_quat(cfg, r) for _ in range(rank)]
            w = [rg.rand_quat(cfg, r) for _ in range(rank)]
            lhs = hL_evaluate(hL, l_coordinates(v), l_coordinates(w)).trace()
            rhs = form.evaluate(v, w).trd()
            checks.append((lhs - rhs).is_zero())
    return _suite("hermitian_trace_lift", checks)


def wittclass_closure(cfg: FieldConfig, seed: int, n=2000):
    r = rg.rng(seed)
    seen = set()
    for _ in range(n):
        d = rg.rand_symmetric(cfg, r)
        seen.add(wc.classify_line(d, 1).coords)
    group = set(seen)
    changed = True
    while changed:
        changed = False
        for a in list(group):
            for b in list(group):
                c = a ^ b
                if c not in group:
                    group.add(c)
                    changed = True
    seen_skew = set()
    for _ in range(200):
        d = rg.rand_skew(cfg, r)
        seen_skew.add(wc.classify_line(d, -1).coords)
    skew_group = set(seen_skew) | {frozenset()}
    checks = [len(seen) == 3, len(group) == 8, len(skew_group) == 2]
    return _suite("wittclass_closure", checks)


def wittclass_scaling(cfg: FieldConfig, seed: int, n=500):
    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        d = rg.rand_symmetric(cfg, r)
        x = rg.rand_f(cfg, r)
        checks.append(wc.classify_line(d, 1) == wc.classify_line(d.scale_f(x), 1))
        dk = rg.rand_skew(cfg, r)
        checks.append(wc.classify_line(dk, -1) == wc.classify_line(dk.scale_f(x), -1))
    return _suite("wittclass_scaling", checks)


def _perturb(cfg, r, d):
    """d' = d(1 + z) with nu_D(z) >= 1: add a same-type element of strictly
    larger nu_D."""
    s = rg.rand_symmetric(cfg, r) if d.symmetry_type() == "symmetric" \
        else rg.rand_skew(cfg, r)
    need = d.nu_D() + 1 - s.nu_D()
    k = max(0, (need + 1) // 2) + r.randint(0, 1)
    s = s.scale_f(cfg.f(cfg.p) ** k)
    return d + s


def wittclass_congruence(cfg: FieldConfig, seed: int, n=500):
    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        eps = 1 if r.random() < 0.7 else -1
        d = rg.rand_line_entry(cfg, r, eps)
        d2 = _perturb(cfg, r, d)
        checks.append(congruent_mod_nuD(d, d2)
                      and wc.classify_line(d, eps) == wc.classify_line(d2, eps))
    return _suite("wittclass_congruence", checks)


def wittclass_oracle(cfg: FieldConfig, seed: int, n=500):
    from .hermitian import DiagonalForm

    r = rg.rng(seed)
    checks = []
    inconclusive = 0
    for _ in range(n):
        d, d2 = rg.rand_symmetric(cfg, r), rg.rand_symmetric(cfg, r)
        same = wc.classify_line(d, 1) == wc.classify_line(d2, 1)
        try:
            iso = wc.is_isotropic(DiagonalForm(1, (d, -d2), 0))
            checks.append(iso == same)
            eq = wc.equivalence_oracle(d, d2)
            checks.append(eq == same)
        except OracleInconclusive:
            inconclusive += 1
    out = _suite("wittclass_oracle", checks)
    out["inconclusive"] = inconclusive
    return out


def wittclass_form_invariance(cfg: FieldConfig, seed: int, n=200):
    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        eps = 1 if r.random() < 0.5 else -1
        rank = r.randint(1, 3)
        d = rg.rand_diagonal_form(cfg, r, eps, rank)
        S = rg.rand_invertible(cfg, r, rank)
        f2 = HermitianForm.from_rows(
            eps, dmat_mul(dmat_rho_t(S), dmat_mul(d.rows(), S)))
        checks.append(wc.class_of_form(d) == wc.class_of_form(f2))
    return _suite("wittclass_form_invariance", checks)


def _rand_eform(data, r, eps, t):
    cfg, E = data.cfg, data.E
    rows = []
    for i in range(t):
        row = []
        for j in range(t):
            if j < i:
                x = rows[j][i].sigma()
                row.append(x if eps == 1 else -x)
            elif j == i:
                d = rg.rand_f(cfg, r, 0, 1)
                row.append(E.from_f(d) if eps == 1 else E.gen().scale_f(d))
            else:
                row.append(E.el(rg.rand_f(cfg, r, 0, 1, nonzero=False),
                                rg.rand_f(cfg, r, 0, 1, nonzero=False)))
        rows.append(row)
    return rows


def morita_phi_relations(cfg: FieldConfig, seed: int):
    checks = []
    for gen in (QuaternionElement.u_elem(cfg), QuaternionElement.pi_D(cfg)):
        data = mo.split(cfg, gen)
        checks.append(data.validate())
        checks.append(data.e1().validate() and data.e2().validate())
    return _suite("morita_phi_relations", checks)


def morita_fe_sums(cfg: FieldConfig, seed: int, n=100):
    r = rg.rng(seed)
    data = mo.split(cfg, QuaternionElement.u_elem(cfg))
    E = data.E
    checks = []
    for _ in range(n):
        eps = 1 if r.random() < 0.5 else -1
        t1, t2 = r.randint(1, 2), r.randint(1, 2)
        h1 = mo.functor_Ge(_rand_eform(data, r, eps, t1), data, eps)
        h2 = mo.functor_Ge(_rand_eform(data, r, eps, t2), data, eps)
        s = h1.orthogonal_sum(h2)
        c = mo.e_witt_class(mo.functor_Fe(s, data.e1()), E, eps)
        c1 = mo.e_witt_class(mo.functor_Fe(h1, data.e1()), E, eps)
        c2 = mo.e_witt_class(mo.functor_Fe(h2, data.e1()), E, eps)
        checks.append(c == c1 + c2)
    return _suite("morita_fe_sums", checks)


def morita_independence(cfg: FieldConfig, seed: int, n=50):
    r = rg.rng(seed)
    d1 = mo.split(cfg, QuaternionElement.u_elem(cfg), w_choice=0)
    d2 = mo.split(cfg, QuaternionElement.u_elem(cfg), w_choice=1)
    checks = []
    for _ in range(n):
        eps = 1 if r.random() < 0.5 else -1
        t = r.randint(1, 2)
        H = _rand_eform(d1, r, eps, t)
        ed1 = mo.EDForm(d1, eps, tuple(tuple(x) for x in H))
        ed2 = mo.EDForm(d2, eps, tuple(tuple(x) for x in H))
        if not (ed1.validate() and ed2.validate()):
            continue
        h1 = mo.trace_transfer(ed1)
        h2 = mo.trace_transfer(ed2)
        c1 = mo.e_witt_class(mo.functor_Fe(ed1, d1.e1()), d1.E, eps)
        c2 = mo.e_witt_class(mo.functor_Fe(ed2, d2.e1()), d2.E, eps)
        checks.append(c1.anisotropic_dim == c2.anisotropic_dim)
        checks.append(wc.class_of_form(h1) == wc.class_of_form(h2))
    return _suite("morita_independence", checks)


def morita_trl(cfg: FieldConfig, seed: int, n=20):
    r = rg.rng(seed)
    data = mo.split(cfg, QuaternionElement.u_elem(cfg))
    checks = []
    for _ in range(n):
        eps = 1 if r.random() < 0.5 else -1
        t = r.randint(1, 2)
        ed = mo.functor_Ge(_rand_eform(data, r, eps, t), data, eps)
        base = wc.class_of_form(mo.trace_transfer(ed))
        for c in (1, 3, int(cfg.p) + 1):
            scaled = wc.class_of_form(mo.trace_transfer(ed, cfg.f(c)))
            checks.append(scaled == base)
    return _suite("morita_trl", checks)


def endo_count_closed_form(cfg: FieldConfig, seed: int, n=200):
    from . import endo as en

    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        entries, eps, m, h = _random_token_config(cfg, r)
        out = en.enumerate_parameters(entries, eps, m, h)
        checks.append(len(out) == en.closed_form_count(entries))
        checks.append(en.count_parameters(entries, eps, m, h) == len(out))
    return _suite("endo_count_closed_form", checks)


def _random_token_config(cfg, r):
    from . import endo as en

    eps = 1 if r.random() < 0.7 else -1
    gens = ["g1", "galpha", "gpi"] if eps == 1 else ["gskew"]
    entries = []
    total_deg = 0
    hsum = wc.WittClassD.zero(eps)
    n_nonnull = r.randint(0, 3)
    for i in range(n_nonnull):
        deg = r.choice([2, 4])
        parity = r.randint(0, 1)
        wtd = frozenset(r.sample(gens, r.randint(0, min(2, len(gens)))))
        tok = en.EndoClassToken(f"c{i}", "simple_nonnull", deg,
                                e_parity=r.randint(0, 1), f_parity=r.randint(0, 1),
                                min_tag=f"t{i}", aniso_parity=parity,
                                wtd_odd=wtd)
        f = 2 * r.randint(1, 3) + parity
        entries.append(en.LiftEntry(tok, f))
        total_deg += f * deg
        if parity:
            hsum = hsum + wc.WittClassD(eps, wtd)
    for j in range(r.randint(0, 2)):
        deg = r.randint(1, 3)
        tok = en.EndoClassToken(f"p{j}", "nonsimple_pair", deg)
        fac = en.DEG_D // __import__("math").gcd(deg, en.DEG_D)
        f = fac * r.randint(1, 2)
        entries.append(en.LiftEntry(tok, f))
        total_deg += 2 * f * deg
    if r.random() < 0.5 or not entries:
        tok = en.EndoClassToken("z", "simple_null", 1)
        extra = frozenset(r.sample(gens, r.randint(0, len(gens))))
        hsum = hsum + wc.WittClassD(eps, extra)
        f = 2 * (2 * r.randint(0, 2) + len(extra))
        if f == 0:
            f = 4
        entries.append(en.LiftEntry(tok, f))
        total_deg += f
    m = total_deg // 2
    return entries, eps, m, hsum


def endo_equiv_relation(cfg: FieldConfig, seed: int, n=200):
    from . import endo as en

    r = rg.rng(seed)
    checks = []
    toks = []
    for i in range(3):
        toks.append(en.EndoClassToken(
            f"c{i}", "simple_nonnull", 2, e_parity=i % 2, f_parity=(i + 1) % 2,
            min_tag=f"m{i % 2}", aniso_parity=i % 2,
            wtd_odd=frozenset({"g1"} if i % 2 else set())))
    pool = [en.WittType.hyperbolic()]
    for t in toks:
        if t.aniso_parity:
            pool += [en.WittType.simple(t, 1, 0), en.WittType.simple(t, 1, 1)]
        else:
            pool += [en.WittType.simple(t, 2)]
    pool += [en.WittType.null({"g1"}), en.WittType.null({"gpi"})]
    for _ in range(n):
        a, b, c = r.choice(pool), r.choice(pool), r.choice(pool)
        try:
            ab = en.witt_type_equiv(a, b, 1)
            checks.append(en.witt_type_equiv(a, a, 1))
            checks.append(ab == en.witt_type_equiv(b, a, 1))
            if ab and en.witt_type_equiv(b, c, 1):
                checks.append(en.witt_type_equiv(a, c, 1))
        except en.IncomparableTokens:
            checks.append(True)
    return _suite("endo_equiv_relation", checks)


def endo_selector_flip(cfg: FieldConfig, seed: int, n=100):
    from . import endo as en

    r = rg.rng(seed)
    checks = []
    for _ in range(n):
        entries, eps, m, h = _random_token_config(cfg, r)
        out = en.enumerate_parameters(entries, eps, m, h)
        for fm in out:
            for idx, (tok, f1, f2) in enumerate(fm.support):
                if tok.kind != "simple_nonnull" or f2.is_hyp:
                    continue
                if f2.tower[0] != 1:
                    continue
                flipped = en.WittType.simple(tok, 1, 1 - f2.tower[1])
                supp = list(fm.support)
                supp[idx] = (tok, f1, flipped)
                fm2 = en.EndoParameter(eps, m, h, tuple(supp))
                checks.append(en.validate(fm2)[0])
    return _suite("endo_selector_flip", checks)


ALL_SUITES = [
    padic_arith, padic_tau_norm, padic_squares,
    quaternion_rho, quaternion_nrd, quaternion_decomp,
    hermitian_congruence, hermitian_hyperbolic, hermitian_nrd1,
    hermitian_twist, hermitian_trace_lift,
    wittclass_closure, wittclass_scaling, wittclass_congruence,
    wittclass_oracle, wittclass_form_invariance,
    morita_phi_relations, morita_fe_sums, morita_independence, morita_trl,
    endo_count_closed_form, endo_equiv_relation, endo_selector_flip,
]


def run_all(cfg: FieldConfig, seed: int):
    from .errors import HermiwittError

    results = []
    for fn in ALL_SUITES:
        try:
            results.append(fn(cfg, seed))
        except HermiwittError as ex:
            results.append({"name": fn.__name__, "passed": 0, "failed": 1,
                            "error": f"{type(ex).__name__}: {ex}"})
    return results
