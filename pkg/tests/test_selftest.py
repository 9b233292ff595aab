from hermiwitt import selftest as st


def test_all_suites_pass(cfg5):
    results = st.run_all(cfg5, seed=7)
    assert len(results) == len(st.ALL_SUITES)
    bad = [r for r in results if r["failed"]]
    assert not bad, bad
    names = {r["name"] for r in results}
    # one suite per invariant family of every module
    for prefix in ("padic", "quaternion", "hermitian", "wittclass",
                   "morita", "endo"):
        assert any(n.startswith(prefix) for n in names)


def test_suites_deterministic(cfg3):
    a = st.padic_arith(cfg3, 5)
    b = st.padic_arith(cfg3, 5)
    assert a == b
