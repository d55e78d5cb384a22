import random

import pytest
from hypothesis import given, settings, strategies as st

from chram.gf import FieldCtx
from chram.freelie import LieAlgebra, D0
from chram.series import SeriesCtx, AutSpec, WindowOverflow, s_mul


@pytest.fixture(scope="module")
def s3():
    return SeriesCtx(LieAlgebra(FieldCtx(3, 1), c0=3, a_max=6))


@pytest.fixture(scope="module")
def s52():
    return SeriesCtx(LieAlgebra(FieldCtx(5, 2), c0=5, a_max=20))


def test_seed_p3(s3):
    alg = s3.alg
    e = s3.seed()
    want = {
        0: alg.gen_elem(D0),                       # alpha0 = 1 at n0 = 1
        -1: alg.gen_elem(("g", 1, 0)),
        -2: alg.gen_elem(("g", 2, 0)),
        -4: alg.gen_elem(("g", 4, 0)),
        -5: alg.gen_elem(("g", 5, 0)),
    }
    assert e == want
    assert s3.weight_profile_ok(e)
    # sigma multiplies exponents by p termwise; the deep weight-2 terms of
    # the seed leave the window under sigma, which must be reported loudly
    for m, x in e.items():
        if m * 3 >= s3.floor:
            assert s3.sigma({m: x}, 1) == s3.mono(3 * m, alg.el_sigma(x, 1))
    with pytest.raises(OverflowError):
        s3.sigma(e, 1)


def test_bracket_monomial_rule(s3):
    alg = s3.alg
    x, y = alg.gen_elem(("g", 1, 0)), alg.gen_elem(("g", 2, 0))
    got = s3.bracket({-1: x}, {-2: y})
    assert got == {-3: alg.el_bracket(x, y)}


def test_ch_commuting_series(s3):
    alg = s3.alg
    x = alg.gen_elem(("g", 1, 0))
    a, b = {-1: x}, {2: x}
    assert s3.ch(a, b) == s3.add(a, b)


def test_seed_group_inverse(s3):
    e = s3.seed()
    assert s3.ch(e, s3.neg(e)) == {}


def test_window_overflow(s3):
    alg = s3.alg
    x = alg.gen_elem(("g", 1, 0))
    with pytest.raises(OverflowError):
        s3.mono(-7, x)   # below the global floor -(p-1) c0 = -6
    deep = s3.mono(-6, x)
    with pytest.raises(OverflowError):
        s3.sigma(deep, 1)


def test_policy_ceiling(s3):
    alg = s3.alg
    wt2 = alg.gen_elem(("g", 4, 0))
    assert s3.mono(1, wt2) == {}      # weight-2 ceiling is 0
    assert s3.mono(0, wt2) != {}
    wt1 = alg.gen_elem(("g", 1, 0))
    assert s3.mono(4, wt1) == {}      # weight-1 ceiling is 3
    # weight >= p coefficients vanish at any exponent
    top = alg.el_bracket(alg.gen_elem(("g", 4, 0)), alg.gen_elem(("g", 5, 0)))
    assert alg.el_weight(top) >= 3 and s3.mono(-5, top) == {}


def test_sigma_examples(s3, s52):
    alg = s3.alg
    x = alg.gen_elem(("g", 1, 0))
    assert s3.sigma({-1: x}, 1) == {-3: x}
    assert s3.sigma(s3.sigma({-1: x}, 1), -1) == {-1: x}
    with pytest.raises(ValueError):
        s3.sigma({-1: x}, -1)
    f = s52.alg.field
    lam = f.rand(random.Random(1))
    y = s52.alg.gen_elem(("g", 1, 0), lam)
    got = s52.sigma({2: y}, 1)
    assert got == {10: s52.alg.el_sigma(y, 1)}


def test_r_examples(s3):
    alg = s3.alg
    x = alg.gen_elem(("g", 1, 0))
    assert s3.r_op({2: x}) == {}
    got = s3.r_op({-6: x})
    assert got == {-2: alg.el_sigma(x, -1)}
    # t^0: alpha0 * trace
    a = alg.gen_elem(D0, (2,))
    assert s3.r_op({0: a}) == {0: alg.el_scale(alg.field.alpha0(), alg.el_trace(a))}


def test_split_identity_random(s3, s52):
    rng = random.Random(13)
    for sctx, n in ((s3, 250), (s52, 150)):
        for _ in range(n):
            b = sctx.rand_series(rng, 4)
            r, s = sctx.r_op(b), sctx.s_op(b)
            assert sctx.add(r, sctx.sub(sctx.sigma(s, 1), s)) == b


def test_r_idempotent_on_image(s52):
    rng = random.Random(14)
    for _ in range(60):
        b = s52.rand_series(rng, 3)
        r = s52.r_op(b)
        assert s52.r_op(r) == r


def test_rs_respect_filtration(s52):
    """r and s map the shifted filtered submodules into themselves."""
    rng = random.Random(15)
    for _ in range(60):
        b = s52.rand_series(rng, 4)
        i = s52.filt_index(b)
        if i <= 0:
            continue
        assert s52.filt_index(s52.r_op(b)) >= i
        assert s52.filt_index(s52.s_op(b)) >= i


def test_autspec_validation():
    f = FieldCtx(3, 1)
    with pytest.raises(ValueError):
        AutSpec(f, 4, ((1,),))          # c0 not a multiple of p
    with pytest.raises(ValueError):
        AutSpec(f, 3, ((0,), (1,)))     # alphas[0] zero but h != id
    ident = AutSpec(f, 3, ())
    assert ident.identity and ident.eps_coeffs() == ()


def test_eps_coeffs_p3():
    f = FieldCtx(3, 1)
    h = AutSpec(f, 3, ((1,),))
    assert h.eps_coeffs() == ((1,), (1,))   # log(1+t^3) = t^3 - t^6/2 = t^3 + t^6


def test_power_series_law():
    f = FieldCtx(3, 1)
    h = AutSpec(f, 3, ((1,), (2,)))
    prec = 1 + 9
    # h^n(t) = t exp~(n eps) mod t^(1+p c0)
    eps = {3 + 3 * i: c for i, c in enumerate(h.eps_coeffs())}
    cur = {1: f.one}
    for n in range(1, 4):
        cur = h.apply_scalar(cur, prec + 18)
        acc = {0: f.one}
        power = {0: f.one}
        fact = 1
        for k in range(1, 3):
            neps = {e: f.scale(n, c) for e, c in eps.items()}
            power = s_mul(f, power, neps, prec)
            fact *= k
            inv = pow(fact, 1, 3)
            inv = pow(fact, 3 - 2, 3)
            for e, c in power.items():
                acc[e] = f.add(acc.get(e, f.zero), f.scale(inv, c))
        want = {e + 1: c for e, c in acc.items() if e + 1 < prec and not f.is_zero(c)}
        got = {e: c for e, c in cur.items() if e < prec}
        assert got == want, n


def test_substitute_identity(s3):
    rng = random.Random(16)
    ident = AutSpec(s3.alg.field, 3, ())
    for _ in range(20):
        F = s3.rand_series(rng, 3)
        assert s3.substitute(F, ident) == F


def test_substitute_inverse_exponent(s3):
    # h(t^-1) = t^-1 - alpha0(h) t^(c0-1) + higher
    alg = s3.alg
    h = AutSpec(alg.field, 3, ((1,),))
    x = alg.gen_elem(("g", 1, 0))
    got = s3.substitute({-1: x}, h)
    assert got[-1] == x
    assert got[2] == alg.el_neg(x)      # -alpha0 t^2 coefficient
    assert all(e in (-1, 2) or e > 2 for e in got)


def test_substitute_is_bracket_morphism(s52):
    rng = random.Random(17)
    h = AutSpec(s52.alg.field, 5, (s52.alg.field.from_int(2), s52.alg.field.one))
    for _ in range(25):
        F, G = s52.rand_series(rng, 3), s52.rand_series(rng, 3)
        lhs = s52.substitute(s52.bracket(F, G), h)
        rhs = s52.bracket(s52.substitute(F, h), s52.substitute(G, h))
        assert lhs == rhs


def test_substitute_is_exp_of_scaling_operator(s3, s52):
    """On the policy quotient, t -> h(t) acts as exp of the operator
    sending t^m x to m t^m (eps-series) x; powers of h scale it by n."""
    rng = random.Random(19)
    from chram.bch import _fact
    for sctx in (s3, s52):
        alg = sctx.alg
        f = alg.field
        p, c0 = sctx.p, sctx.c0
        aut = AutSpec(f, c0, (f.from_int(1), f.from_int(2)))
        eps = {c0 + p * i: c for i, c in enumerate(aut.eps_coeffs())
               if not f.is_zero(c)}

        def h_op(F):
            out = {}
            for m, x in F.items():
                for e, c in eps.items():
                    piece = alg.el_scale(c, alg.el_scale_int(m, x))
                    if piece:
                        out[m + e] = alg.el_add(out.get(m + e, {}), piece)
            return sctx.truncate(out)

        for _ in range(10):
            F = sctx.rand_series(rng, 3)
            for n in (1, 2):
                acc = sctx.zero()
                term = F
                for k in range(p):
                    inv_fact = pow(_fact(k, p), p - 2, p)
                    acc = sctx.add(acc, sctx.scale_int(inv_fact, term))
                    term = sctx.scale_int(n, h_op(term))
                    if not term:
                        break
                assert sctx.substitute(F, aut.power(n)) == acc


def test_aut_compose_power_inverse():
    f = FieldCtx(5, 2)
    h = AutSpec(f, 5, ((1, 2), (0, 1)))
    hinv = h.inverse()
    assert h.compose(hinv).identity and hinv.compose(h).identity
    h2 = h.power(2)
    assert h2.alphas == h.compose(h).alphas
    assert h.power(0).identity


def test_series_json_roundtrip(s52):
    rng = random.Random(18)
    for _ in range(10):
        F = s52.rand_series(rng, 4)
        data = s52.to_json(F)
        assert s52.from_json(data) == F
