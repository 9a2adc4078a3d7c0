"""Tests for the exact rational-function layer: linear forms, polynomials,
factored rational expressions, and iterated residues.
"""

from fractions import Fraction as Q

import pytest

from jkscatter.exact import (LinForm, Poly, RationalExpr, binom_general,
                             change_vars_linear, in_span, iterated_residue,
                             mat_det, mat_inverse, mat_rank, qify,
                             residue_step, solve_linear, subst_linear_basis)
from jkscatter.errors import SingularBasis, ZeroDenominator


def lf(**coeffs):
    const = coeffs.pop("const", 0)
    out = LinForm.constant(const)
    for name, c in coeffs.items():
        out = out + LinForm.var(name) * Q(c)
    return out


class TestLinearAlgebra:
    def test_qify_rejects_floats(self):
        with pytest.raises(TypeError):
            qify(0.5)

    def test_qify_accepts_ints_and_fractions(self):
        assert qify(3) == Q(3)
        assert qify(Q(2, 7)) == Q(2, 7)

    def test_det(self):
        assert mat_det([[Q(1), Q(2)], [Q(3), Q(4)]]) == -2
        assert mat_det([[Q(1)]]) == 1

    def test_inverse_roundtrip(self):
        m = [[Q(2), Q(1)], [Q(1), Q(1)]]
        inv = mat_inverse(m)
        prod = [[sum(m[i][k] * inv[k][j] for k in range(2)) for j in range(2)]
                for i in range(2)]
        assert prod == [[1, 0], [0, 1]]

    def test_inverse_singular(self):
        assert mat_inverse([[Q(1), Q(2)], [Q(2), Q(4)]]) is None

    def test_solve_linear_unique(self):
        sol = solve_linear([[Q(1), Q(1)], [Q(1), Q(-1)]], [Q(3), Q(1)])
        assert sol == [2, 1]

    def test_solve_linear_inconsistent(self):
        assert solve_linear([[Q(1), Q(1)], [Q(2), Q(2)]], [Q(1), Q(3)]) is None

    def test_rank_and_span(self):
        assert mat_rank([[Q(1), Q(2)], [Q(2), Q(4)]]) == 1
        assert in_span([Q(3), Q(6)], [[Q(1), Q(2)]])
        assert not in_span([Q(1), Q(0)], [[Q(1), Q(2)]])

    def test_binom_general_negative_exponent(self):
        # C(-1, k) = (-1)^k
        assert [binom_general(-1, k) for k in range(4)] == [1, -1, 1, -1]
        assert binom_general(-2, 2) == 3


class TestLinForm:
    def test_arithmetic_and_eval(self):
        f = lf(x=1, y=-2, const=3)
        assert f.evaluate({"x": Q(1), "y": Q(1)}) == 2
        assert (f + f).evaluate({"x": Q(1), "y": Q(0)}) == 8
        assert (-f).evaluate({"x": Q(0), "y": Q(0)}) == -3

    def test_subs(self):
        f = lf(x=1, y=1)
        g = f.subs({"x": lf(u=2), "y": lf(u=-1, const=5)})
        assert g == lf(u=1, const=5)

    def test_canonical_divides_by_lead(self):
        unit, canon = lf(x=2, y=4).canonical()
        assert unit == 2 and canon == lf(x=1, y=2)

    def test_canonical_constant(self):
        unit, canon = LinForm.constant(Q(-5, 3)).canonical()
        assert unit == Q(-5, 3) and canon == LinForm.constant(1)

    def test_translate(self):
        f = lf(x=1, const=1)
        assert f.translate({"x": Q(2)}) == lf(x=1, const=3)


class TestPoly:
    def test_product_and_eval(self):
        p = Poly.from_linform(lf(x=1, const=1)) * Poly.from_linform(lf(x=1, const=-1))
        assert p.evaluate({"x": Q(3)}) == 8

    def test_split_var(self):
        p = Poly.from_linform(lf(x=1, y=1)).power(2)
        parts = p.split_var("x")
        assert set(parts) == {0, 1, 2}
        assert parts[1].evaluate({"y": Q(5)}) == 10

    def test_div_linform_exact(self):
        p = Poly.from_linform(lf(x=1, y=1)) * Poly.from_linform(lf(x=1, y=-1))
        q = p.div_linform(lf(x=1, y=1))
        assert q == Poly.from_linform(lf(x=1, y=-1))

    def test_div_linform_not_divisible(self):
        p = Poly.from_linform(lf(x=1, const=1))
        assert p.div_linform(lf(x=1)) is None


class TestRationalExpr:
    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominator):
            RationalExpr(1, ((LinForm(), -1),))

    def test_merge_proportional_factors(self):
        f = RationalExpr(1, ((lf(x=2), 1), (lf(x=1), -1)))
        assert f.as_fraction() == 2  # 2x / x

    def test_addition_common_denominator(self):
        x = lf(x=1)
        f = RationalExpr(1, ((x, -1),)) + RationalExpr(1, ((x, -1),))
        assert f == RationalExpr(2, ((x, -1),))

    def test_difference_is_zero(self):
        x, y = lf(x=1), lf(y=1)
        a = RationalExpr(1, ((x + y, 1), (x, -1)))
        b = RationalExpr(1, ((x, -1),), Poly.from_linform(x + y))
        assert a == b

    def test_reduce_cancels(self):
        x, y = lf(x=1), lf(y=1)
        f = RationalExpr(1, ((x, -1),), Poly.from_linform(x + y) - Poly.from_linform(y))
        assert f.reduce().as_fraction() == 1

    def test_evaluate(self):
        f = RationalExpr(3, ((lf(x=1, const=1), -2),))
        assert f.evaluate({"x": Q(1)}) == Q(3, 4)

    def test_translate(self):
        f = RationalExpr(1, ((lf(x=1, const=-1), -1),))
        g = f.translate({"x": Q(1)})
        assert g.evaluate({"x": Q(2)}) == Q(1, 2)


class TestResidues:
    def test_simple_pole(self):
        f = RationalExpr(1, ((lf(v=1), -1),))
        assert iterated_residue(f, ["v"]) == 1

    def test_regular_point(self):
        f = RationalExpr(1, ((lf(v=1, const=1), -1),))
        assert iterated_residue(f, ["v"]) == 0

    def test_two_variable_product(self):
        f = RationalExpr(1, ((lf(v1=1), -1), (lf(v2=1), -1)))
        assert iterated_residue(f, ["v1", "v2"]) == 1

    def test_order_sensitive_zero(self):
        # 1/(v1 v2 (v1+v2)): inner residue at v1 leaves a double pole in v2
        f = RationalExpr(1, ((lf(v1=1), -1), (lf(v2=1), -1), (lf(v1=1, v2=1), -1)))
        assert iterated_residue(f, ["v1", "v2"]) == 0

    def test_unit_series_expansion(self):
        # residue_v 1/(v(v-w)) = -1/w: the v-w factor is a unit at v=0
        f = RationalExpr(1, ((lf(v=1), -1), (lf(v=1, w=-1), -1)))
        g = residue_step(f, "v")
        assert g == RationalExpr(-1, ((lf(w=1), -1),))

    def test_square_of_unit(self):
        # residue_v (1 - 1/v)^2 * (-1) applied inside a product
        one_minus = RationalExpr(1, ((lf(v=1), -1),), Poly.from_linform(lf(v=1, const=-1)))
        f = one_minus * one_minus * RationalExpr(-1)
        # -(v-1)^2/v^2 has residue -2*(-1) = 2 at 0
        assert residue_step(f, "v").as_fraction() == 2

    def test_higher_order_pole(self):
        # residue_v v / (v^2 (v - w)) = residue of 1/(v(v-w)) = -1/w
        f = RationalExpr(1, ((lf(v=1), -2), (lf(v=1, w=-1), -1)),
                         Poly.from_linform(lf(v=1)))
        assert residue_step(f, "v") == RationalExpr(-1, ((lf(w=1), -1),))

    def test_extra_variable_kills_constant(self):
        # the w-residue of a w-free function vanishes
        f = RationalExpr(1, ((lf(v=1), -1),))
        assert iterated_residue(f, ["v", "w"]) == 0

    def test_missing_variable_rejected(self):
        f = RationalExpr(1, ((lf(v=1), -1), (lf(w=1), -1)))
        with pytest.raises(ValueError):
            iterated_residue(f, ["v"])


class TestChangeOfVariables:
    def test_substitution_basis(self):
        # x1 = u+w, x2 = u-w diagonalizes 1/((u+w)(u-w))
        f = RationalExpr(1, ((lf(u=1, w=1), -1), (lf(u=1, w=-1), -1)))
        g = subst_linear_basis(f, [lf(u=1, w=1), lf(u=1, w=-1)], var_order=["u", "w"])
        assert iterated_residue(g, ["x1", "x2"]) == 1

    def test_singular_basis_raises(self):
        f = RationalExpr(1, ((lf(u=1), -1),))
        with pytest.raises(SingularBasis):
            subst_linear_basis(f, [lf(u=1, w=1), lf(u=2, w=2)], var_order=["u", "w"])

    def test_jacobian_invariance_under_scaling(self):
        # with the Jacobian factor, rescaling the basis leaves the IR invariant
        f = RationalExpr(1, ((lf(u=1), -1), (lf(w=1), -1)))
        base = change_vars_linear(f, [lf(u=1), lf(w=1)], var_order=["u", "w"])
        scaled = change_vars_linear(f, [lf(u=3), lf(w=Q(1, 5))], var_order=["u", "w"])
        assert iterated_residue(base, ["x1", "x2"]) == \
            iterated_residue(scaled, ["x1", "x2"]) == 1
