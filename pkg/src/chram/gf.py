"""Exact arithmetic in k = F_{p^n0} with Frobenius, trace and the
normalisation element alpha0.

Field elements are immutable coefficient tuples of length n0 over the
polynomial basis 1, w, ..., w^(n0-1).  The defining modulus is the
lexicographically smallest monic irreducible of the requested degree, so
every value derived downstream is reproducible across runs.
"""

from __future__ import annotations

import itertools
from typing import Iterable

Felt = tuple  # coefficient tuple of length n0, entries in [0, p)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- dense polynomial helpers over F_p (coefficient lists, low degree first) --

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df and a:
        c = a[-1] % p
        if c:
            shift = len(a) - 1 - df
            for i, fi in enumerate(f):
                a[shift + i] = (a[shift + i] - c * fi) % p
        a.pop()
    return _ptrim(a)


def _ppowmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    b = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, b, p), f, p)
        b = _pmod(_pmul(b, b, p), f, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        bm = [(c * inv) % p for c in b]
        a, b = b, _pmod(a, bm, p)
    return a


def _is_irreducible(mod_coeffs: Iterable[int], p: int) -> bool:
    m = list(mod_coeffs)
    n0 = len(m)
    f = m + [1]
    x = [0, 1]
    # x^(p^n0) == x mod f, and gcd(x^(p^(n0/q)) - x, f) = 1 for primes q | n0
    if _pmod(_psub(_ppowmod(x, p ** n0, f, p), x, p), f, p):
        return False
    for q in _prime_divisors(n0):
        g = _psub(_ppowmod(x, p ** (n0 // q), f, p), x, p)
        d = _pgcd(g, f, p)
        if len(d) - 1 > 0:
            return False
    return True


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        ai = a[i] if i < len(a) else 0
        bi = b[i] if i < len(b) else 0
        out[i] = (ai - bi) % p
    return _ptrim(out)


def smallest_irreducible(p: int, n0: int) -> tuple:
    """Lexicographically smallest monic irreducible of degree n0 over F_p."""
    for coeffs in itertools.product(range(p), repeat=n0):
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


class FieldCtx:
    """Fixed model of k = F_{p^n0}: modulus, Frobenius tables, alpha0."""

    def __init__(self, p: int, n0: int, modulus: tuple | None = None):
        if not is_prime(p) or p <= 2:
            raise ValueError("p must be an odd prime > 2")
        if n0 < 1:
            raise ValueError("n0 must be >= 1")
        self.p = p
        self.n0 = n0
        if modulus is None:
            modulus = smallest_irreducible(p, n0)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != n0 or not _is_irreducible(modulus, p):
                raise ValueError("modulus must be irreducible of degree n0")
        self.modulus = modulus
        self.zero: Felt = (0,) * n0
        self.one: Felt = (1,) + (0,) * (n0 - 1)
        # reduction table for w^(n0+k), k = 0..n0-2
        f = list(modulus) + [1]
        self._red = []
        cur = [(-c) % p for c in modulus]  # w^n0
        for _ in range(n0 - 1):
            self._red.append(tuple(cur) + (0,) * (n0 - len(cur)))
            cur = [0] + cur
            cur = _pmod(cur, f, p)
            cur = cur + [0] * (n0 - len(cur))
        # Frobenius matrices sigma^e, e = 0..n0-1 (columns: image of w^j)
        self._frob_tables = [tuple(self._basis_vec(j) for j in range(n0))]
        sig1 = tuple(
            tuple(_pad(_pmod(_ppowmod([0, 1], p * 1, f, p) if j == 1 else
                             _ppowmod([0, 1], j * p, f, p), f, p), n0))
            for j in range(n0)
        )
        self._frob_tables.append(sig1)
        for _ in range(n0 - 2):
            prev = self._frob_tables[-1]
            self._frob_tables.append(tuple(self._apply_table(sig1, col) for col in prev))
        if n0 == 1:
            self._frob_tables = [self._frob_tables[0]]
        self._check_frobenius_order()
        self._alpha0: Felt | None = None

    def _basis_vec(self, j: int) -> Felt:
        v = [0] * self.n0
        v[j] = 1
        return tuple(v)

    def _apply_table(self, table, x: Felt) -> Felt:
        n0, p = self.n0, self.p
        out = [0] * n0
        for j, c in enumerate(x):
            if c:
                col = table[j]
                for i in range(n0):
                    out[i] = (out[i] + c * col[i]) % p
        return tuple(out)

    def _check_frobenius_order(self):
        # sigma has multiplicative order exactly n0
        for d in range(1, self.n0):
            if self.n0 % d:
                continue
            if all(self.frob(self._basis_vec(j), d) == self._basis_vec(j)
                   for j in range(self.n0)):
                raise ValueError("frobenius order below n0; modulus not irreducible")
        assert all(self.frob(self._basis_vec(j), self.n0) == self._basis_vec(j)
                   for j in range(self.n0))

    # -- arithmetic -----------------------------------------------------------

    def add(self, a: Felt, b: Felt) -> Felt:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: Felt, b: Felt) -> Felt:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a: Felt) -> Felt:
        p = self.p
        return tuple((-x) % p for x in a)

    def scale(self, c: int, a: Felt) -> Felt:
        p = self.p
        c %= p
        return tuple((c * x) % p for x in a)

    def mul(self, a: Felt, b: Felt) -> Felt:
        n0, p = self.n0, self.p
        if n0 == 1:
            return ((a[0] * b[0]) % p,)
        conv = [0] * (2 * n0 - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] = (conv[i + j] + ai * bj) % p
        out = list(conv[:n0])
        for k in range(n0 - 1):
            c = conv[n0 + k]
            if c:
                red = self._red[k]
                for i in range(n0):
                    out[i] = (out[i] + c * red[i]) % p
        return tuple(out)

    def inv(self, a: Felt) -> Felt:
        if a == self.zero:
            raise ZeroDivisionError("inversion of zero in k")
        return self.pow_int(a, self.p ** self.n0 - 2)

    def pow_int(self, a: Felt, e: int) -> Felt:
        result = self.one
        b = a
        while e:
            if e & 1:
                result = self.mul(result, b)
            b = self.mul(b, b)
            e >>= 1
        return result

    def from_int(self, c: int) -> Felt:
        return (c % self.p,) + (0,) * (self.n0 - 1)

    def is_zero(self, a: Felt) -> bool:
        return a == self.zero

    # -- Frobenius, trace, alpha0 --------------------------------------------

    def frob(self, x: Felt, e: int = 1) -> Felt:
        """sigma^e(x) = x^(p^e), with e taken mod n0."""
        e %= self.n0
        if e == 0:
            return x
        return self._apply_table(self._frob_tables[e], x)

    def trace(self, x: Felt) -> int:
        """Tr_{k/F_p}(x) as a residue mod p."""
        acc = self.zero
        for e in range(self.n0):
            acc = self.add(acc, self.frob(x, e))
        assert all(c == 0 for c in acc[1:]), "trace must land in the prime field"
        return acc[0]

    def alpha0(self) -> Felt:
        """Smallest nonzero element (lexicographic on coeffs) with trace 1."""
        if self._alpha0 is None:
            for coeffs in itertools.product(range(self.p), repeat=self.n0):
                x = tuple(coeffs)
                if x != self.zero and self.trace(x) == 1:
                    self._alpha0 = x
                    break
        return self._alpha0

    def rand(self, rng) -> Felt:
        return tuple(rng.randrange(self.p) for _ in range(self.n0))

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {"p": self.p, "N0": self.n0, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, d: dict) -> "FieldCtx":
        return cls(d["p"], d["N0"], tuple(d["modulus"]))


def _pad(a: list[int], n0: int) -> list[int]:
    return a + [0] * (n0 - len(a))
