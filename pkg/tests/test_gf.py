import pytest
from hypothesis import given, settings, strategies as st

from chram.gf import FieldCtx, smallest_irreducible


@pytest.fixture(scope="module")
def f9():
    return FieldCtx(3, 2)


@pytest.fixture(scope="module")
def f3():
    return FieldCtx(3, 1)


def test_modulus_is_lex_smallest():
    assert FieldCtx(3, 2).modulus == (1, 0)       # w^2 + 1
    assert smallest_irreducible(5, 1) == (0,)     # x itself
    assert FieldCtx(5, 2).modulus == (1, 1)       # x^2 + x + 1


def test_bad_modulus_rejected():
    with pytest.raises(ValueError):
        FieldCtx(3, 2, modulus=(0, 1))   # x^2 + x is reducible
    with pytest.raises(ValueError):
        FieldCtx(4, 1)
    with pytest.raises(ValueError):
        FieldCtx(2, 1)


def test_prime_field_arith(f3):
    assert f3.mul((2,), (2,)) == (1,)
    assert f3.add((2,), (2,)) == (1,)
    assert f3.inv((2,)) == (2,)


def test_w_squared(f9):
    w = (0, 1)
    assert f9.mul(w, w) == (2, 0)   # w^2 = -1


def test_inverse_of_zero(f9):
    with pytest.raises(ZeroDivisionError):
        f9.inv(f9.zero)


def elems(p, n0):
    return st.tuples(*[st.integers(0, p - 1) for _ in range(n0)])


@given(x=elems(3, 2), y=elems(3, 2))
def test_field_axioms(x, y):
    f = FieldCtx(3, 2)
    assert f.mul(x, y) == f.mul(y, x)
    assert f.add(x, y) == f.add(y, x)
    if x != f.zero:
        assert f.mul(x, f.inv(x)) == f.one


@given(x=elems(5, 2), y=elems(5, 2))
@settings(max_examples=40)
def test_frobenius_is_field_morphism(x, y):
    f = FieldCtx(5, 2)
    assert f.frob(f.mul(x, y)) == f.mul(f.frob(x), f.frob(y))
    assert f.frob(f.add(x, y)) == f.add(f.frob(x), f.frob(y))
    assert f.frob(x, f.n0) == x


def test_frobenius_fixed_iff_prime_field(f9):
    fixed = [x for x in _all_elems(f9) if f9.frob(x) == x]
    assert sorted(fixed) == sorted((c, 0) for c in range(3))


def _all_elems(f):
    import itertools
    return [tuple(t) for t in itertools.product(range(f.p), repeat=f.n0)]


def test_frobenius_examples(f9):
    w = (0, 1)
    assert f9.frob(f9.one) == f9.one
    assert f9.frob(w) == (0, 2)          # w^3 = -w
    assert f9.frob(w, -1) == f9.frob(w, 1)   # order 2: inverse = itself


def test_trace(f9, f3):
    assert f3.trace((2,)) == 2          # identity on the prime field
    assert f9.trace(f9.one) == 2        # n0 mod p
    assert f9.trace((0, 1)) == 0        # w + w^3 = 0
    # trace o frob = trace
    for x in _all_elems(f9):
        assert f9.trace(f9.frob(x)) == f9.trace(x)


def test_alpha0(f9, f3):
    assert f3.alpha0() == (1,)
    assert f9.alpha0() == (2, 0)
    assert f9.trace(f9.alpha0()) == 1
    # deterministic across fresh contexts
    assert FieldCtx(3, 2).alpha0() == f9.alpha0()
    f25 = FieldCtx(5, 2)
    assert f25.trace(f25.alpha0()) == 1


def test_serialization_roundtrip(f9):
    data = f9.to_json()
    again = FieldCtx.from_json(data)
    assert again.modulus == f9.modulus and again.p == 3 and again.n0 == 2
