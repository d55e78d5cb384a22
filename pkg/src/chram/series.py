"""Lie-algebra-valued Laurent series in t over k.

A LieSeries is a sparse map exponent -> LieElem kept in a fixed window: the
global floor is -(p-1)c0, and the truncation policy drops every term that is
congruent to zero modulo the step-(p-1) piece of the canonical filtered
module (a weight-s coefficient survives at exponent m only when
m <= (p-1-s)c0; weight >= p coefficients vanish identically).  A computed
term falling below the floor raises OverflowError instead of being dropped.

The module also carries the scalar-series model of the automorphisms
h(t) = t(1 + sum alpha_i t^{c0+pi}), the substitution action t -> h(t), the
seed series driving the lift recurrences, and the canonical splitting
b = r_op(b) + (sigma - id) s_op(b) used to solve twisted equations degree by
degree.
"""

from __future__ import annotations

from .gf import FieldCtx, Felt
from .freelie import LieAlgebra, D0
from .bch import ch_generic


class WindowOverflow(OverflowError):
    pass


POLICIES = ("m1",)  # "m1": reduce modulo the step-(p-1) filtered piece


# -- scalar Laurent series over k: {exponent: Felt} ------------------------------

def s_add(f: FieldCtx, a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        s = f.add(out.get(e, f.zero), c)
        if f.is_zero(s):
            out.pop(e, None)
        else:
            out[e] = s
    return out


def s_mul(f: FieldCtx, a: dict, b: dict, prec: int | None = None) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            if prec is not None and e >= prec:
                continue
            c = f.mul(c1, c2)
            if f.is_zero(c):
                continue
            s = f.add(out.get(e, f.zero), c)
            if f.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
    return out


def s_scale(f: FieldCtx, c: Felt, a: dict) -> dict:
    if f.is_zero(c):
        return {}
    out = {}
    for e, v in a.items():
        w = f.mul(c, v)
        if not f.is_zero(w):
            out[e] = w
    return out


def s_inv_unit(f: FieldCtx, a: dict, prec: int) -> dict:
    """Inverse of a = 1 + (positive part) as a power series mod t^prec."""
    if a.get(0) != f.one or any(e < 0 for e in a):
        raise ValueError("scalar inverse needs a series 1 + O(t)")
    u = {e: c for e, c in a.items() if e > 0}
    out = {0: f.one}
    power = {0: f.one}
    min_e = min(u) if u else prec
    k = 0
    while (k + 1) * min_e < prec and u:
        power = s_mul(f, power, u, prec)
        if not power:
            break
        k += 1
        sign = -1 if k % 2 else 1
        out = s_add(f, out, {e: f.scale(sign, c) for e, c in power.items()})
    return out


def s_binom_pow(f: FieldCtx, u: dict, m: int, prec_rel: int) -> dict:
    """(1 + u)^m for integer m (generalized binomial), u with positive
    exponents only, truncated at exponent >= prec_rel."""
    from math import comb
    out = {0: f.one}
    power = {0: f.one}
    j = 0
    min_e = min(u) if u else prec_rel
    while u and (j + 1) * min_e < prec_rel:
        power = s_mul(f, power, u, prec_rel)
        if not power:
            break
        j += 1
        c = comb(m, j) if m >= 0 else (-1) ** j * comb(j - m - 1, j)
        cm = c % f.p
        if cm:
            out = s_add(f, out, {e: f.scale(cm, v) for e, v in power.items()})
    return out


# -- automorphism data --------------------------------------------------------------

class AutSpec:
    """h(t) = t(1 + sum_i alphas[i] t^(c0 + p i)); alphas[0] != 0 unless all
    alphas vanish (the identity map).  Carries the derived coefficients A_i
    with t exp~(sum_i A_i t^(c0+pi)) = h(t) mod t^(1+p c0)."""

    def __init__(self, fieldctx: FieldCtx, c0: int, alphas: tuple):
        f = fieldctx
        self.field = f
        self.p = f.p
        self.c0 = c0
        if c0 <= 0 or c0 % f.p:
            raise ValueError("c0 must be a positive multiple of p")
        alphas = tuple(alphas)
        while alphas and f.is_zero(alphas[-1]):
            alphas = alphas[:-1]
        self.alphas = alphas
        self.identity = not alphas
        if not self.identity and f.is_zero(alphas[0]):
            raise ValueError("alphas[0] must be nonzero unless h is the identity")
        self._u = {c0 + f.p * i: a for i, a in enumerate(alphas) if not f.is_zero(a)}
        self._u_pows: dict = {0: {0: f.one}, 1: dict(self._u)}
        self._eps: tuple | None = None
        self._inverse: "AutSpec | None" = None

    def u_pow(self, j: int, prec_rel: int) -> dict:
        got = self._u_pows.get(j)
        if got is None:
            got = s_mul(self.field, self.u_pow(j - 1, prec_rel), self._u)
            self._u_pows[j] = got
        return {e: c for e, c in got.items() if e < prec_rel}

    def eps_coeffs(self) -> tuple:
        """The A_i: truncated log of h(t)/t, read off the t^(c0+pi) grid
        below t^(p c0).  Exponents off the grid must vanish there."""
        if self._eps is None:
            f, p, c0 = self.field, self.p, self.c0
            prec = p * c0
            acc: dict = {}
            power = {0: f.one}
            k = 0
            while self._u and (k + 1) * c0 < prec:
                power = s_mul(f, power, self._u, prec)
                if not power:
                    break
                k += 1
                coeff = (pow(k, p - 2, p)) * (1 if k % 2 else -1) % p
                acc = s_add(f, acc, {e: f.scale(coeff, c) for e, c in power.items()})
            n_terms = (prec - c0 + p - 1) // p
            out = []
            for i in range(n_terms):
                e = c0 + p * i
                out.append(acc.pop(e, f.zero))
            if acc:
                raise ValueError("log of h(t)/t leaves the c0 + p i grid")
            while out and f.is_zero(out[-1]):
                out.pop()
            self._eps = tuple(out)
        return self._eps

    def h_of_t(self, prec: int) -> dict:
        """h(t) as a scalar series mod t^prec."""
        f = self.field
        out = {1: f.one}
        for e, c in self._u.items():
            if 1 + e < prec:
                out[1 + e] = c
        return out

    def apply_scalar(self, s: dict, prec: int) -> dict:
        """Substitute t -> h(t) in a scalar series, mod t^prec."""
        f = self.field
        out: dict = {}
        for m, c in s.items():
            for e, v in s_binom_pow(f, self._u, m, prec - m).items():
                em = m + e
                if em >= prec:
                    continue
                w = f.mul(c, v)
                if f.is_zero(w):
                    continue
                cur = f.add(out.get(em, f.zero), w)
                if f.is_zero(cur):
                    out.pop(em, None)
                else:
                    out[em] = cur
        return out

    def compose(self, other: "AutSpec", prec: int | None = None) -> "AutSpec":
        """Automorphism t -> self(other(t)) (apply `other` first)."""
        f, c0, p = self.field, self.c0, self.p
        prec = prec or (3 * p * c0 + 1)
        ht = other.apply_scalar(self.h_of_t(prec), prec)
        return _aut_from_scalar(f, c0, ht, prec)

    def power(self, n: int, prec: int | None = None) -> "AutSpec":
        if n < 0:
            return self.inverse().power(-n, prec)
        out = AutSpec(self.field, self.c0, ())
        base = self
        while n:
            if n & 1:
                out = base.compose(out, prec)
            base = base.compose(base, prec)
            n >>= 1
        return out

    def inverse(self, prec: int | None = None) -> "AutSpec":
        if self._inverse is not None:
            return self._inverse
        f, c0, p = self.field, self.c0, self.p
        prec = prec or (3 * p * c0 + 1)
        if self.identity:
            self._inverse = self
            return self
        # iterate g <- t * (1 + sum alpha_i g^{c0+pi})^{-1}; gains c0 exponents per pass
        g = {1: f.one}
        for _ in range(prec // c0 + 2):
            acc = {0: f.one}
            for e, a in self._u.items():
                ge = _s_pow(f, g, e, prec)
                acc = s_add(f, acc, s_scale(f, a, ge))
            g = s_mul(f, {1: f.one}, s_inv_unit(f, acc, prec), prec)
        check = self.apply_scalar(g, prec)
        if check != {1: f.one}:
            raise RuntimeError("series reversion failed")
        inv = _aut_from_scalar(f, c0, g, prec)
        self._inverse = inv
        return inv


def _s_pow(f: FieldCtx, s: dict, e: int, prec: int) -> dict:
    out = {0: f.one}
    base = s
    while e:
        if e & 1:
            out = s_mul(f, out, base, prec)
        base = s_mul(f, base, base, prec)
        e >>= 1
    return out


def _aut_from_scalar(f: FieldCtx, c0: int, ht: dict, prec: int) -> AutSpec:
    """Read alphas back from a scalar series of the shape t(1 + sum ...)."""
    if ht.get(1) != f.one:
        raise ValueError("automorphism series must start with t")
    alphas = []
    rest = {e - 1: c for e, c in ht.items() if e != 1}
    if any(e <= 0 for e in rest):
        raise ValueError("automorphism series has terms below t")
    top = max(rest) if rest else 0
    n_terms = max(0, (top - c0) // f.p + 1)
    for i in range(n_terms):
        alphas.append(rest.pop(c0 + f.p * i, f.zero))
    if rest:
        raise ValueError("automorphism series leaves the c0 + p i grid")
    return AutSpec(f, c0, tuple(alphas))


# -- Lie series context --------------------------------------------------------------

class SeriesCtx:
    """Series window and operations over a LieAlgebra in arithmetic mode."""

    def __init__(self, alg: LieAlgebra, policy: str = "m1"):
        if policy not in POLICIES:
            raise ValueError(f"unknown truncation policy {policy!r}")
        self.alg = alg
        self.policy = policy
        self.p = alg.p
        self.c0 = alg.c0
        self.floor = -(alg.p - 1) * alg.c0
        self.max_ceil = (alg.p - 2) * alg.c0  # ceiling for weight 1

    def ceil(self, s: int) -> int:
        return (self.p - 1 - s) * self.c0

    # -- canonicalisation ------------------------------------------------------

    def truncate_term(self, exp: int, x: dict) -> dict:
        alg = self.alg
        kept = {i: c for i, c in x.items()
                if alg.wt[i] < self.p and exp <= self.ceil(alg.wt[i])}
        if kept and exp < self.floor:
            raise WindowOverflow(
                f"term at t^{exp} falls below the series floor {self.floor}")
        return kept

    def truncate(self, terms: dict) -> dict:
        out = {}
        for e, x in terms.items():
            k = self.truncate_term(e, x)
            if k:
                out[e] = k
        return out

    # -- linear structure --------------------------------------------------------

    def zero(self) -> dict:
        return {}

    def add(self, F: dict, G: dict) -> dict:
        alg = self.alg
        out = dict(F)
        for e, x in G.items():
            s = alg.el_add(out.get(e, {}), x)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return out

    def neg(self, F: dict) -> dict:
        return {e: self.alg.el_neg(x) for e, x in F.items()}

    def sub(self, F: dict, G: dict) -> dict:
        return self.add(F, self.neg(G))

    def scale_int(self, n: int, F: dict) -> dict:
        n %= self.p
        if n == 0:
            return {}
        return {e: self.alg.el_scale_int(n, x) for e, x in F.items()}

    def scale(self, c: Felt, F: dict) -> dict:
        out = {}
        for e, x in F.items():
            y = self.alg.el_scale(c, x)
            if y:
                out[e] = y
        return out

    def mono(self, exp: int, x: dict) -> dict:
        k = self.truncate_term(exp, x)
        return {exp: k} if k else {}

    def is_zero(self, F: dict) -> bool:
        return not F

    # -- multiplication-like operations -------------------------------------------

    def bracket(self, F: dict, G: dict) -> dict:
        alg = self.alg
        raw: dict = {}
        for e1, x in F.items():
            for e2, y in G.items():
                b = alg.el_bracket(x, y)
                if b:
                    e = e1 + e2
                    raw[e] = alg.el_add(raw.get(e, {}), b)
        return self.truncate(raw)

    def ch(self, F: dict, G: dict) -> dict:
        return ch_generic(self, F, G)

    def sigma(self, F: dict, e: int = 1) -> dict:
        """sigma^e for e = +-1 (or any positive e by iteration):
        t^m -> t^(pm) with semilinear action on coefficients."""
        alg = self.alg
        if e == 0:
            return F
        if e < 0:
            if e != -1:
                raise ValueError("only sigma^-1 is provided for negative powers")
            out = {}
            for m, x in F.items():
                if m % self.p:
                    raise ValueError("sigma^-1 needs exponents divisible by p")
                out[m // self.p] = alg.el_sigma(x, -1)
            return self.truncate(out)
        out = F
        for _ in range(e):
            nxt = {}
            for m, x in out.items():
                nxt[m * self.p] = alg.el_sigma(x, 1)
            out = self.truncate(nxt)
        return out

    def substitute(self, F: dict, aut: AutSpec) -> dict:
        """Replace t^m by h(t)^m, truncating through the policy."""
        if aut.identity:
            return self.truncate(F)
        f = self.alg.field
        raw: dict = {}
        for m, x in F.items():
            prec_rel = self.max_ceil - m + 1
            for e, c in s_binom_pow(f, aut._u, m, max(prec_rel, 1)).items():
                y = self.alg.el_scale(c, x)
                if y:
                    em = m + e
                    raw[em] = self.alg.el_add(raw.get(em, {}), y)
        return self.truncate(raw)

    # -- seed ----------------------------------------------------------------------

    def seed(self) -> dict:
        """sum_{a in Z+(p), a < a_max} t^(-a) D_{a,0} + alpha0 D0."""
        alg = self.alg
        f = alg.field
        out = {0: alg.gen_elem(D0, f.alpha0())}
        for a in range(1, alg.a_max):
            if a % self.p == 0:
                continue
            out[-a] = alg.gen_elem(("g", a, 0))
        return self.truncate(out)

    # -- canonical splitting b = r_op(b) + (sigma - id) s_op(b) ---------------------

    def r_op(self, b: dict) -> dict:
        alg = self.alg
        f = alg.field
        out: dict = {}
        for n, x in b.items():
            if n > 0:
                continue
            if n == 0:
                t = alg.el_scale(f.alpha0(), alg.el_trace(x))
                if t:
                    out[0] = alg.el_add(out.get(0, {}), t)
            else:
                n1, m = _split_p_power(-n, self.p)
                y = alg.el_sigma(x, -m) if m else x
                out[-n1] = alg.el_add(out.get(-n1, {}), y)
        return self.truncate(out)

    def s_op(self, b: dict) -> dict:
        alg = self.alg
        f = alg.field
        out: dict = {}
        for n, x in b.items():
            if n > 0:
                exp, cur = n, x
                while True:
                    cur = self.truncate_term(exp, cur)
                    if not cur:
                        break
                    out[exp] = alg.el_add(out.get(exp, {}), alg.el_neg(cur))
                    cur = alg.el_sigma(cur, 1)
                    exp *= self.p
            elif n == 0:
                acc = alg.zero()
                a0 = f.alpha0()
                for i in range(1, alg.n0):
                    si = alg.el_sigma(x, i)
                    for j in range(i):
                        acc = alg.el_add(acc, alg.el_scale(f.frob(a0, j), si))
                if acc:
                    out[0] = alg.el_add(out.get(0, {}), acc)
            else:
                n1, m = _split_p_power(-n, self.p)
                e = n
                for i in range(1, m + 1):
                    e //= self.p
                    out[e] = alg.el_add(out.get(e, {}), alg.el_sigma(x, -i))
        return self.truncate({e: x for e, x in out.items() if x})

    # -- misc ------------------------------------------------------------------------

    def weight_profile_ok(self, F: dict) -> bool:
        """Whether every term respects the per-weight principal-part bound
        (membership in the canonical filtered module)."""
        alg = self.alg
        for e, x in F.items():
            for i in x:
                if e < 1 - alg.wt[i] * self.c0:
                    return False
        return True

    def filt_index(self, F: dict) -> int:
        """Largest i with F in the t^(i c0)-shifted filtered module (capped
        at p); used as the filtration degree for orbit contracts."""
        alg = self.alg
        best = self.p
        for e, x in F.items():
            for i in x:
                s = alg.wt[i]
                best = min(best, (e - 1 + s * self.c0) // self.c0)
        return best

    def split_signs(self, F: dict) -> tuple:
        minus = {e: x for e, x in F.items() if e < 0}
        zero = F.get(0, {})
        plus = {e: x for e, x in F.items() if e > 0}
        return minus, zero, plus

    def rand_series(self, rng, terms: int = 4) -> dict:
        """Random series inside the canonical window (for property tests)."""
        alg = self.alg
        out: dict = {}
        words = list(range(alg.num_gens()))
        for _ in range(terms):
            i = rng.choice(words)
            if rng.random() < 0.35:
                j = rng.choice(words)
                x = alg.el_bracket({i: alg.field.one}, {j: alg.field.one})
            else:
                x = {i: alg.field.one}
            x = alg.el_scale(alg.field.rand(rng), x)
            if not x:
                continue
            s = alg.el_weight(x)
            if s >= self.p:
                continue
            e = rng.randrange(1 - s * self.c0, self.ceil(s) + 1)
            got = self.mono(e, x)
            out = self.add(out, got)
        return out

    def to_json(self, F: dict) -> dict:
        return {"policy": self.policy,
                "terms": [{"exp": e, "elem": self.alg.elem_to_json(x)}
                          for e, x in sorted(F.items())]}

    def from_json(self, d: dict) -> dict:
        out = {}
        for t in d["terms"]:
            x = self.alg.elem_from_json(t["elem"])
            if x:
                out[int(t["exp"])] = x
        return self.truncate(out)


def _split_p_power(n: int, p: int) -> tuple:
    """n = n1 * p^m with gcd(n1, p) = 1, n > 0."""
    m = 0
    while n % p == 0:
        n //= p
        m += 1
    return n, m
