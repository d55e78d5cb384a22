#!/usr/bin/env python3
"""Small end-to-end demonstration: solve a lift at p = 3, print the adjoint
images, the split first-order series, and whether the canonical lift data
passes the arithmeticality criterion.

    python scripts/demo_lift.py [p] [c0]
"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from chram.gf import FieldCtx
from chram.freelie import LieAlgebra
from chram.series import SeriesCtx, AutSpec
from chram import lifts, ramgen


def show(alg, x):
    def fmt(i):
        t = alg.word_tree(i)
        return str(t).replace("'", "").replace(": ", "=")
    return " + ".join(f"{c}*{fmt(i)}" for i, c in sorted(x.items())) or "0"


def main():
    p = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    c0 = int(sys.argv[2]) if len(sys.argv) > 2 else p
    f = FieldCtx(p, 1)
    alg = LieAlgebra(f, c0=c0, a_max=(p - 1) * c0)
    sctx = SeriesCtx(alg)
    aut = AutSpec(f, c0, (f.from_int(1), f.from_int(2)))
    print(f"p = {p}, c0 = {c0}, h(t) = t (1 + t^{c0} + 2 t^{c0 + p})")
    print(f"derived exponential coefficients: {[list(a) for a in aut.eps_coeffs()]}")

    lin = lifts.solve_linearized(sctx, aut)
    print("\nadjoint images of the generators:")
    for a in sorted(lin.ad_images):
        print(f"  ad(D_{{{a},0}}) = {show(alg, lin.ad_images[a])}")
    print(f"  ad(D_0)     = {show(alg, lin.ad_d0)}")

    minus, zero, plus = lin.c1_split(sctx)
    print("\nfirst-order series c1:")
    for name, part in (("minus", minus), ("plus", plus)):
        for e, x in sorted(part.items()):
            print(f"  t^{e}: {show(alg, x)}")
    print(f"  t^0: {show(alg, zero)}")

    alg.eager_build()
    ideal = ramgen.ramification_ideal(alg, Fraction(c0), 2)
    print(f"\nramification ideal at c0: dimension {ideal.dim} "
          f"of {alg.num_words() * alg.n0}")
    arith = lifts.is_arithmetical(alg, ideal, zero, aut, 3)
    print(f"canonical lift arithmetical: {arith}")

    n_star = 3
    om = lifts.omega0_element(alg, aut, n_star - 1)
    sol = lifts.solve_relation_equation(alg, om, n_star, ideal=ideal)
    c1z = lifts.arithmetical_c1_zero(alg, aut, n_star, sol.c0_elem)
    print(f"relation-equation t^0 part passes the criterion: "
          f"{lifts.is_arithmetical(alg, ideal, c1z, aut, n_star)}")


if __name__ == "__main__":
    main()
