"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
report.  Configurations and tolerances are pinned here; everything is exact
arithmetic, so tolerance always means equality.
"""

import random
import time
from fractions import Fraction

from chram.gf import FieldCtx
from chram.freelie import LieAlgebra
from chram.series import SeriesCtx, AutSpec
from chram import bch, lifts, ramgen
from chram.config import RunConfig
from chram import checks


def _report(num: int, title: str, ok: bool, extra: str = ""):
    tag = "PASS" if ok else "FAIL"
    print(f"[{tag}] criterion {num}: {title}" + (f" ({extra})" if extra else ""))
    assert ok, f"criterion {num} failed: {title}"


def test_criterion_01_ch_group_laws():
    rng = random.Random(101)
    alg = LieAlgebra(FieldCtx(5, 1), c0=5, a_max=19)
    t0 = time.time()
    ok = True
    for _ in range(200):
        x, y, z = (alg.rand_elem(rng, 3) for _ in range(3))
        if bch.ch_mul(alg, bch.ch_mul(alg, x, y), z) != \
                bch.ch_mul(alg, x, bch.ch_mul(alg, y, z)):
            ok = False
            break
        if bch.ch_mul(alg, x, alg.el_neg(x)) != {}:
            ok = False
            break
    dt = time.time() - t0
    _report(1, "CH associativity and inverses, p=5 a_max=19, 200 triples",
            ok and dt < 120, f"{dt:.1f}s")


def test_criterion_02_splitting_identity():
    rng = random.Random(102)
    t0 = time.time()
    ok = True
    for p, n0 in ((3, 1), (5, 1)):
        sctx = SeriesCtx(LieAlgebra(FieldCtx(p, n0), c0=p, a_max=(p - 1) * p))
        for _ in range(500):
            b = sctx.rand_series(rng, 4)
            r, s = sctx.r_op(b), sctx.s_op(b)
            if sctx.add(r, sctx.sub(sctx.sigma(s, 1), s)) != b:
                ok = False
                break
    dt = time.time() - t0
    _report(2, "b = r(b) + (sigma-id)s(b) on 500 random series, p in {3,5}",
            ok and dt < 10, f"{dt:.1f}s")


def test_criterion_03_ramification_numbers():
    alg3 = LieAlgebra(FieldCtx(3, 1), c0=3, a_max=6)
    alg5 = LieAlgebra(FieldCtx(5, 1), c0=5, a_max=20)
    vals = {
        (3, 1): ramgen.max_ram_number(alg3, 1, 2),
        (3, 2): ramgen.max_ram_number(alg3, 2, 2),
        (5, 1): ramgen.max_ram_number(alg5, 1, 2),
        (5, 2): ramgen.max_ram_number(alg5, 2, 2),
    }
    want = {(3, 1): 2, (3, 2): 5, (5, 1): 4, (5, 2): 9}
    ok = all(vals[k] == Fraction(want[k]) for k in want)
    _report(3, "largest ramification numbers v[s] = c0 s - 1",
            ok, f"got {dict((k, str(v)) for k, v in vals.items())}")


def test_criterion_04_closed_form_cross_check():
    ok = True
    for n0 in (1, 2):
        f = FieldCtx(5, n0)
        alg = LieAlgebra(f, c0=5, a_max=20)
        sctx = SeriesCtx(alg)
        aut = AutSpec(f, 5, ((2,) + (1,) * (n0 - 1), (1,) + (0,) * (n0 - 1)))
        lin = lifts.solve_linearized(sctx, aut)
        for a in range(1, 20):
            if a % 5 == 0:
                continue
            got = lifts.project_below_weight(alg, lin.ad_images.get(a, {}), 3)
            want = lifts.project_below_weight(
                alg, lifts.closed_form_ad_image(sctx, aut, a), 3)
            if got != want:
                ok = False
        d_got = lifts.project_below_weight(alg, lin.ad_d0, 3)
        d_want = lifts.project_below_weight(
            alg, lifts.closed_form_ad_d0(sctx, aut), 3)
        ok = ok and d_got == d_want
    _report(4, "solver adjoint images match closed forms below weight 3, "
               "p=5, n0 in {1,2}", ok)


def test_criterion_05_generator_shift():
    rng = random.Random(105)
    ok = True
    for p in (3, 5):
        f = FieldCtx(p, 1)
        alg = LieAlgebra(f, c0=p, a_max=(p - 1) * p)
        sctx = SeriesCtx(alg)
        for _ in range(2):
            alphas = [f.rand(rng), f.rand(rng)]
            if f.is_zero(alphas[0]):
                alphas[0] = f.one
            aut = AutSpec(f, p, tuple(alphas))
            full = lifts.solve_lift(sctx, aut)
            if not lifts.generator_shift_check(sctx, aut, full):
                ok = False
    _report(5, "automorphism images of generators obey the shift congruence, "
               "p in {3,5}, random alpha", ok)


def test_criterion_06_c1_plus_formula():
    ok = True
    for p in (3, 5):
        f = FieldCtx(p, 1)
        alg = LieAlgebra(f, c0=p, a_max=(p - 1) * p)
        sctx = SeriesCtx(alg)
        aut = AutSpec(f, p, (f.from_int(1), f.from_int(2)))
        lin = lifts.solve_linearized(sctx, aut)
        _, _, plus = lin.c1_split(sctx)
        if lifts.c1_plus_formula(sctx, aut, 4) != plus:
            ok = False
    _report(6, "positive part of c1 equals the closed double sum, p in {3,5}", ok)


def test_criterion_07_arithmeticality():
    ok = True
    for n0 in (1, 2):
        f = FieldCtx(3, n0)
        alg = LieAlgebra(f, c0=3, a_max=6)
        alg.eager_build()
        aut = AutSpec(f, 3, ((1,) + (0,) * (n0 - 1), (2,) + (1,) * (n0 - 1)))
        ideal = ramgen.ramification_ideal(alg, Fraction(3), 2)
        n_star = 3
        om = lifts.omega0_element(alg, aut, n_star - 1)
        sol = lifts.solve_relation_equation(alg, om, n_star, ideal=ideal)
        if sol is None or lifts.relation_residual(alg, sol, om, n_star):
            ok = False
            continue
        c1z = lifts.arithmetical_c1_zero(alg, aut, n_star, sol.c0_elem)
        good = lifts.is_arithmetical(alg, ideal, c1z, aut, n_star)
        gen = alg.gen_elem(("g", 1, 0))
        bad = lifts.is_arithmetical(alg, ideal, alg.el_add(c1z, gen), aut, n_star)
        outside = not ideal.contains_elem(alg, gen)
        ok = ok and good and outside and not bad
    _report(7, "relation-equation lift passes the criterion; perturbed t^0 "
               "part fails, p=3, n0 in {1,2}", ok)


def test_criterion_08_top_weight_containment():
    alg = LieAlgebra(FieldCtx(3, 1), c0=3, a_max=9)
    ok = ramgen.top_weight_containment(alg, 2)
    _report(8, "every truncated generator of weight s lies in the c0-ideal "
               "plus degree-s commutators, p=3, a_max=9", ok)


def test_criterion_09_power_sums():
    ok = True
    for p in (3, 5, 7):
        good, _ = checks.check_power_sums(RunConfig(p=p, c0=p), n_max=50)
        ok = ok and good
    _report(9, "power-sum polynomials match brute-force sums for all index "
               "tuples, n <= 50, p in {3,5,7}", ok)


def test_criterion_10_bernoulli_identity():
    ok = True
    for p in (3, 5, 7):
        good, _ = checks.check_bernoulli(RunConfig(p=p, c0=p))
        ok = ok and good
    _report(10, "x = (1 - exp(-x)) sum B_m (-x)^m / m! in F_p[x]/x^p, "
                "p in {3,5,7}", ok)


def test_criterion_11_filtered_orbits():
    ok = True
    for p in (3, 5):
        good, _ = checks.check_orbit_filtration(
            RunConfig(p=p, c0=p, seed=111), trials=100)
        ok = ok and good
    _report(11, "p-fold twisted orbit products of step-1 elements land in "
                "step p, 100 trials, p in {3,5}", ok)


def test_criterion_12_mixed_characteristic():
    rep = ramgen.mixed_char_summary(3, 2, 1)
    ok = (rep["c0"] == 3 and rep["generators"] == 4
          and rep["v"][1] == Fraction(3) and rep["v"][2] == Fraction(11, 3))
    _report(12, "mixed-characteristic summary (3, 2, 1): c0=3, 4 generators, "
                "v = {3, 11/3}", ok)
