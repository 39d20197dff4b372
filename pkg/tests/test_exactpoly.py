"""Exact polynomial kernel: arithmetic, composition, matrices."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qlm.exactpoly import (
    DomainError,
    PolyMatrix,
    Polynomial,
    StructuralError,
    content_normalized,
)


def sym(*names):
    return Polynomial.symbols(*names)


class TestArithmetic:
    def test_difference_of_squares(self):
        x, y = sym("x", "y")
        assert (x + y) * (x - y) == x * x - y * y

    def test_additive_identity(self):
        x, y = sym("x", "y")
        p = 3 * x * y - y + 7
        assert p + Polynomial.zero(("x", "y")) == p
        assert p + 0 == p

    def test_binomial_cube_by_repeated_mul(self):
        (x,) = sym("x")
        p = x + 1
        cube = p * p * p
        assert cube == x ** 3 + 3 * x * x + 3 * x + 1

    def test_mismatched_variable_lists_raise(self):
        (x,) = sym("x")
        (y,) = sym("y")
        with pytest.raises(StructuralError):
            x + y
        with pytest.raises(StructuralError):
            x * y

    def test_canonical_no_zero_terms(self):
        x, y = sym("x", "y")
        p = x * y - x * y
        assert p.is_zero()
        assert p.terms == {}
        assert (x - x) + y == y

    def test_scalar_operations(self):
        x, y = sym("x", "y")
        p = Fraction(1, 2) * x + y
        assert 2 * p == x + 2 * y
        assert p - Fraction(1, 2) * x == y
        assert (x / 2) * 2 == x

    def test_pow(self):
        x, y = sym("x", "y")
        assert (x + y) ** 0 == 1
        assert (x + y) ** 1 == x + y
        assert (x + y) ** 2 == x * x + 2 * x * y + y * y
        with pytest.raises(DomainError):
            (x + y) ** -1

    def test_equality_against_scalars(self):
        x, y = sym("x", "y")
        assert Polynomial.constant(("x", "y"), 5) == 5
        assert x - x == 0
        assert not (x == 0)

    def test_hashable_and_immutable(self):
        x, y = sym("x", "y")
        assert hash(x + y) == hash(y.rename_variables({"y": "y"}) + x)
        with pytest.raises(AttributeError):
            x.variables = ("z",)


class TestEvaluate:
    def test_basic_point(self):
        x, y = sym("x", "y")
        assert (x * x + y).evaluate({"x": 2, "y": 1}) == 5

    def test_zero_polynomial(self):
        z = Polynomial.zero(("x", "y"))
        assert z.evaluate({"x": 3, "y": -7}) == 0

    def test_unbound_variable_raises(self):
        x, y = sym("x", "y")
        with pytest.raises(StructuralError):
            (x + y).evaluate({"x": 1})

    def test_extra_bindings_ignored(self):
        (x,) = sym("x")
        assert x.evaluate({"x": Fraction(1, 3), "unrelated": 99}) == Fraction(1, 3)

    def test_returns_exact_fraction(self):
        (x,) = sym("x")
        value = (x / 3).evaluate({"x": 1})
        assert value == Fraction(1, 3) and isinstance(value, Fraction)


class TestSubstitute:
    def test_elimination_to_zero(self):
        x3, x6 = sym("X3", "X6")
        p = x3 * x3 - 2 * x6
        result = p.substitute({"X6": x3.rename_variables({"X3": "X3"}) ** 2 / 2})
        assert result.is_zero()

    def test_empty_bindings_identity(self):
        (x,) = sym("x")
        assert x.substitute({}) == x

    def test_constant_evaluation(self):
        x, y = sym("x", "y")
        result = (x * y).substitute({"x": 2, "y": 3})
        assert result == Polynomial.constant(("x", "y"), 6)

    def test_union_variable_list_order(self):
        x, y = sym("x", "y")
        u, v = sym("u", "v")
        composed = (x + y).substitute({"x": u * v, "y": u + 1})
        assert composed.variables == ("x", "y", "u", "v")

    def test_unknown_binding_raises(self):
        (x,) = sym("x")
        with pytest.raises(StructuralError):
            x.substitute({"nope": 1})

    def test_deep_composition(self):
        x, y = sym("x", "y")
        u, v = sym("u", "v")
        p = x ** 3 - 2 * x * y + y ** 2
        bound = p.substitute({"x": u + v, "y": u - v})
        for pu in range(-3, 4):
            for pv in range(-3, 4):
                direct = p.evaluate({"x": pu + pv, "y": pu - pv})
                assert bound.evaluate({"x": 0, "y": 0, "u": pu, "v": pv}) == direct


class TestLowestDegreePart:
    def test_double_hyperplane_cone(self):
        names = tuple(f"X{i}" for i in range(1, 11))
        c = {n: Polynomial.variable(names, n) for n in names}
        p = c["X10"] ** 2 + 18 * (c["X4"] * c["X5"] * c["X6"] - c["X6"] * c["X7"] ** 2)
        assert p.lowest_degree_part() == c["X10"] ** 2

    def test_z_cone(self):
        z1, z2, z3, z4 = sym("Z1", "Z2", "Z3", "Z4")
        p = z4 * z4 - z1 * z2 * z3
        assert p.lowest_degree_part() == z4 * z4

    def test_homogeneous_fixed_point(self):
        x, y = sym("x", "y")
        p = x * x - 3 * x * y
        assert p.lowest_degree_part() == p

    def test_zero_raises(self):
        with pytest.raises(DomainError):
            Polynomial.zero(("x",)).lowest_degree_part()


class TestVariableSurgery:
    def test_with_variables_superset(self):
        x, y = sym("x", "y")
        p = (x + y).with_variables(("a", "x", "y"))
        assert p.variables == ("a", "x", "y")
        assert p.evaluate({"a": 100, "x": 1, "y": 2}) == 3

    def test_with_variables_missing_used_raises(self):
        x, y = sym("x", "y")
        with pytest.raises(StructuralError):
            (x + y).with_variables(("x",))

    def test_rename_bijective(self):
        x, y = sym("x", "y")
        renamed = (x * x + y).rename_variables({"x": "u"})
        assert renamed.variables == ("u", "y")
        assert str(renamed) == "u^2 + y"

    def test_rename_collision_raises(self):
        x, y = sym("x", "y")
        with pytest.raises(StructuralError):
            (x + y).rename_variables({"x": "y"})

    def test_derivative(self):
        x, y = sym("x", "y")
        p = x ** 3 * y + 2 * x - 5
        assert p.derivative("x") == 3 * x * x * y + 2
        assert p.derivative("y") == x ** 3


class TestCanonicalText:
    def test_graded_lex_descending(self):
        x, y = sym("x", "y")
        p = y + x * x * y - 3 * x + 1
        assert str(p) == "x^2*y - 3*x + y + 1"

    def test_fraction_coefficients(self):
        x, y = sym("x", "y")
        assert str(x / 2 - y) == "1/2*x - y"
        assert str(-x + y) == "-x + y"

    def test_zero(self):
        assert str(Polynomial.zero(("x",))) == "0"

    def test_unit_coefficients_omitted(self):
        x, y = sym("x", "y")
        assert str(x * y - x) == "x*y - x"

    def test_constant_term(self):
        (x,) = sym("x")
        assert str(x - Fraction(7, 3)) == "x - 7/3"


class TestPolyMatrix:
    def test_traceless_generic_2x2(self):
        a, b, c, d = sym("a", "b", "c", "d")
        m = PolyMatrix([[a, b], [c, d]])
        t = m.traceless()
        assert t.entries[0][0] == (a - d) / 2
        assert t.entries[0][1] == b
        assert t.entries[1][0] == c
        assert t.entries[1][1] == (d - a) / 2

    def test_trace_of_traceless_vanishes(self):
        names = tuple(f"m{i}{j}" for i in range(3) for j in range(3))
        m = PolyMatrix(
            [[Polynomial.variable(names, f"m{i}{j}") for j in range(3)] for i in range(3)]
        )
        assert m.traceless().trace().is_zero()

    def test_det3_symmetric_matches_sextic_pattern(self):
        names = ("v11", "v22", "v33", "v12", "v13", "v23")
        v11, v22, v33, v12, v13, v23 = sym(*names)
        gram = PolyMatrix([[v11, v12, v13], [v12, v22, v23], [v13, v23, v33]])
        expected = (
            v11 * v22 * v33
            + 2 * v12 * v13 * v23
            - v33 * v12 ** 2
            - v22 * v13 ** 2
            - v11 * v23 ** 2
        )
        assert gram.det() == expected

    def test_trace_cyclic(self):
        names = tuple(f"{p}{i}{j}" for p in "ab" for i in range(2) for j in range(2))
        A = PolyMatrix(
            [[Polynomial.variable(names, f"a{i}{j}") for j in range(2)] for i in range(2)]
        )
        B = PolyMatrix(
            [[Polynomial.variable(names, f"b{i}{j}") for j in range(2)] for i in range(2)]
        )
        assert (A * B).trace() == (B * A).trace()

    def test_size_mismatch_raises(self):
        (a,) = sym("a")
        one = PolyMatrix([[a]])
        two = PolyMatrix.identity(("a",), 2)
        with pytest.raises(StructuralError):
            one * two

    def test_det_size_limit(self):
        m = PolyMatrix.identity(("a",), 4)
        with pytest.raises(DomainError):
            m.det()
        assert PolyMatrix.identity(("a",), 3).det() == 1

    def test_non_square_raises(self):
        a, b = sym("a", "b")
        with pytest.raises(StructuralError):
            PolyMatrix([[a, b]])


def test_content_normalized():
    x, y = sym("x", "y")
    p = 18 * x * y - 36 * y ** 2
    assert content_normalized(p) == x * y - 2 * y ** 2
    q = x / 2 + Fraction(3, 2) * y
    assert content_normalized(q) == x + 3 * y


# ---------------------------------------------------------------------------
# property tests
# ---------------------------------------------------------------------------

VARS = ("x", "y", "z")


@st.composite
def polys(draw):
    n_terms = draw(st.integers(min_value=0, max_value=5))
    terms = {}
    for _ in range(n_terms):
        exp = tuple(draw(st.integers(min_value=0, max_value=3)) for _ in VARS)
        coeff = Fraction(
            draw(st.integers(min_value=-9, max_value=9)),
            draw(st.integers(min_value=1, max_value=4)),
        )
        terms[exp] = terms.get(exp, 0) + coeff
    return Polynomial(VARS, terms)


@st.composite
def points(draw):
    return {
        v: Fraction(
            draw(st.integers(min_value=-9, max_value=9)),
            draw(st.integers(min_value=1, max_value=3)),
        )
        for v in VARS
    }


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), polys())
def test_ring_distributivity(p, q, r):
    assert (p + q) * r == p * r + q * r


@settings(max_examples=100, deadline=None)
@given(polys(), polys())
def test_ring_commutativity(p, q):
    assert p * q == q * p
    assert p + q == q + p


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), points())
def test_evaluate_is_homomorphism(p, q, point):
    assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)
    assert (p + q).evaluate(point) == p.evaluate(point) + q.evaluate(point)


@settings(max_examples=50, deadline=None)
@given(polys(), polys(), points())
def test_substitute_commutes_with_evaluate(p, binding, point):
    # the binding may use x itself; the union list identifies the two slots
    composed = p.substitute({"x": binding})
    inner = binding.evaluate(point)
    direct = p.evaluate({"x": inner, "y": point["y"], "z": point["z"]})
    assert composed.evaluate(point) == direct


@settings(max_examples=100, deadline=None)
@given(polys())
def test_lowest_degree_part_exactness(p):
    if p.is_zero():
        return
    low = p.lowest_degree_part()
    d = p.min_degree()
    assert low.is_homogeneous()
    assert low.terms == {e: c for e, c in p.terms.items() if sum(e) == d}
