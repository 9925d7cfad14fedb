import pytest
from hypothesis import given, settings, strategies as st

from orbitcat.ffield import FF
from orbitcat.poly import (
    Poly,
    is_irreducible,
    poly_factor,
    poly_gcd,
    squarefree_decomposition,
)


def P(field, *coeffs):
    return Poly(field, coeffs)


def test_poly_normalization():
    F = FF(5)
    assert P(F, 1, 2, 0, 0).codes == (1, 2)
    assert P(F).is_zero()
    assert P(F, 0).is_zero()


def test_ring_ops():
    F = FF(7)
    f = P(F, 1, 1)  # 1 + x
    g = P(F, 6, 1)  # -1 + x
    assert (f * g).codes == (6, 0, 1)  # x^2 - 1
    q, r = divmod(P(F, 6, 0, 1), f)
    assert q == g and r.is_zero()


def test_factor_cube_roots_of_unity_mod_7():
    F = FF(7)
    f = P(F, 6, 0, 0, 1)  # x^3 - 1
    factors = poly_factor(f)
    roots = set()
    for g, mult in factors:
        assert mult == 1
        assert g.degree == 1
        # root is -c0
        roots.add(F.neg(g.codes[0]))
    assert roots == {1, 2, 4}
    for r in roots:
        assert F.pow(r, 3) == 1


def test_factor_x():
    F = FF(5)
    assert poly_factor(P(F, 0, 1)) == [(P(F, 0, 1), 1)]


def test_factor_x2_plus_1_mod_5():
    F = FF(5)
    factors = poly_factor(P(F, 1, 0, 1))
    roots = sorted(F.neg(g.codes[0]) for g, _ in factors)
    assert roots == [2, 3]
    assert F.mul(2, 2) == 4 and F.mul(3, 3) == 4  # both square to -1


def test_factor_zero_errors():
    F = FF(5)
    with pytest.raises(ValueError, match="zero input"):
        poly_factor(Poly.zero(F))


def test_factor_with_multiplicities_char_p():
    F = FF(3)
    # (x - 1)^3 = x^3 - 1 in characteristic 3
    f = P(F, 2, 0, 0, 1)
    factors = poly_factor(f)
    assert factors == [(P(F, 2, 1), 3)]


def test_factor_sorted_and_irreducible():
    F = FF(2)
    # x^6 + x^5 + x^4 + x^3 + x^2 + x = x (x+1)^2 (x^2+x+1) ... check product
    f = P(F, 0, 1, 1, 1, 1, 1, 1)
    factors = poly_factor(f)
    prod = Poly.one(F)
    last_key = None
    for g, m in factors:
        assert is_irreducible(g)
        assert g.is_monic()
        if last_key is not None:
            assert g.sort_key() >= last_key
        last_key = g.sort_key()
        for _ in range(m):
            prod = prod * g
    assert prod == f.monic()


def test_factor_over_extension_field():
    F = FF(2, 2)
    # x^2 + x + 1 splits over F_4 into (x - w)(x - w^2)
    f = P(F, 1, 1, 1)
    factors = poly_factor(f)
    assert len(factors) == 2
    prod = Poly.one(F)
    for g, m in factors:
        assert g.degree == 1 and m == 1
        prod = prod * g
    assert prod == f


def test_squarefree_decomposition_char2():
    F = FF(2)
    # f = (x^2+x+1)^2 has zero derivative
    g = P(F, 1, 1, 1)
    f = g * g
    parts = squarefree_decomposition(f)
    assert parts == [(g, 2)]


@st.composite
def random_poly(draw):
    p = draw(st.sampled_from([2, 3, 5, 7]))
    F = FF(p)
    deg = draw(st.integers(min_value=1, max_value=12))
    codes = [draw(st.integers(min_value=0, max_value=p - 1)) for _ in range(deg)]
    codes.append(draw(st.integers(min_value=1, max_value=p - 1)))
    return Poly(F, codes)


@given(random_poly())
@settings(max_examples=60, deadline=None)
def test_factor_remultiplies_to_input(f):
    factors = poly_factor(f)
    prod = Poly.const(f.field, f.lead())
    for g, m in factors:
        assert is_irreducible(g)
        for _ in range(m):
            prod = prod * g
    assert prod == f


def test_gcd_basics():
    F = FF(5)
    f = P(F, 4, 0, 1)  # (x-1)(x-4)
    g = P(F, 4, 1)  # x + 4 = x - 1
    assert poly_gcd(f, g) == g.monic()
