import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatcusps.errors import DimensionMismatch, NotNilpotent
from flatcusps.exactlin import (
    IntPolynomial,
    Matrix,
    SymmetricForm,
    char_poly,
    has_integer_solution,
    integer_row_hermite,
    is_positive_definite,
    lattice_basis,
    ldl_signature,
    nilpotent_exp,
    null_space,
)

small_fractions = st.fractions(min_value=-4, max_value=4, max_denominator=4)


def square_matrices(n):
    return st.lists(
        st.lists(small_fractions, min_size=n, max_size=n), min_size=n, max_size=n
    ).map(Matrix)


def _random_invertible(rng, n):
    while True:
        m = Matrix(
            [[F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
        )
        if m.det() != 0:
            return m


class TestMatrix:
    def test_product_and_inverse(self):
        m = Matrix([[1, 2], [3, 4]])
        assert (m * m.inverse()).is_identity()
        assert m.det() == -2

    def test_singular_inverse_raises(self):
        with pytest.raises(ValueError):
            Matrix([[1, 1], [1, 1]]).inverse()

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            Matrix([[1, 2]]) * Matrix([[1, 2]])

    def test_transpose_pow_trace(self):
        m = Matrix([[0, 1], [2, 3]])
        assert m.transpose() == Matrix([[0, 2], [1, 3]])
        assert m**0 == Matrix.identity(2)
        assert m**2 == m * m
        assert m.trace() == 3

    def test_negative_power_uses_inverse(self):
        m = Matrix([[1, 1], [0, 1]])
        assert m**-2 == Matrix([[1, -2], [0, 1]])

    def test_hashable_and_immutable(self):
        m = Matrix([[1, 0], [0, 1]])
        assert hash(m) == hash(Matrix.identity(2))
        with pytest.raises(AttributeError):
            m.rows = 3

    def test_block_diag(self):
        b = Matrix.block_diag(Matrix([[2]]), Matrix.identity(2))
        assert b == Matrix([[2, 0, 0], [0, 1, 0], [0, 0, 1]])

    def test_null_space(self):
        m = Matrix([[1, 2, 3], [2, 4, 6]])
        basis = null_space(m)
        assert len(basis) == 2
        for v in basis:
            assert all(x == 0 for x in m.matvec(v))


class TestSignature:
    def test_diagonal_examples(self):
        assert ldl_signature(SymmetricForm.diagonal([1, 1, -1])) == (2, 1, 0)
        assert ldl_signature(SymmetricForm.identity(4)) == (4, 0, 0)
        model_block = SymmetricForm.identity(2).direct_sum(SymmetricForm.diagonal([1, -1]))
        assert ldl_signature(model_block) == (3, 1, 0)

    def test_zero_diagonal_needs_symmetric_fixup(self):
        hyperbolic = SymmetricForm([[0, 1], [1, 0]])
        assert ldl_signature(hyperbolic) == (1, 1, 0)

    def test_degenerate(self):
        assert ldl_signature(SymmetricForm([[1, 1], [1, 1]])) == (1, 0, 1)
        assert ldl_signature(SymmetricForm([[0, 0], [0, 0]])) == (0, 0, 2)

    def test_positive_definite(self):
        assert is_positive_definite(SymmetricForm([[2, 1], [1, 3]]))
        assert not is_positive_definite(SymmetricForm.diagonal([1, -1]))
        assert not is_positive_definite(SymmetricForm([[1, 1], [1, 1]]))

    @settings(max_examples=40, deadline=None)
    @given(data=st.data(), n=st.integers(min_value=1, max_value=4))
    def test_sylvester_invariance(self, data, n):
        entries = data.draw(
            st.lists(st.lists(small_fractions, min_size=n, max_size=n), min_size=n, max_size=n)
        )
        m = Matrix(entries)
        form = SymmetricForm(m + m.transpose())
        seed = data.draw(st.integers(min_value=0, max_value=10**6))
        s = _random_invertible(random.Random(seed), n)
        congruent = SymmetricForm(s.transpose() * form.matrix * s)
        assert ldl_signature(congruent) == ldl_signature(form)


class TestNilpotentExp:
    def test_zero_matrix(self):
        assert nilpotent_exp(Matrix.zeros(3, 3)) == Matrix.identity(3)

    def test_two_step(self):
        assert nilpotent_exp(Matrix([[0, 1], [0, 0]])) == Matrix([[1, 1], [0, 1]])

    def test_three_step_example(self):
        m = Matrix([[0, 1, -1], [-1, 0, 0], [-1, 0, 0]])
        assert (m**3).is_zero() and not (m**2).is_zero()
        e = nilpotent_exp(m)
        assert e == Matrix([[1, 1, -1], [-1, F(1, 2), F(1, 2)], [-1, F(-1, 2), F(3, 2)]])
        # the exponential preserves the diag(1,1,-1) form
        b = Matrix.diagonal([1, 1, -1])
        assert e.transpose() * b * e == b

    def test_not_nilpotent(self):
        with pytest.raises(NotNilpotent):
            nilpotent_exp(Matrix.identity(2))

    @settings(max_examples=40, deadline=None)
    @given(
        entries=st.lists(small_fractions, min_size=3, max_size=3),
        scale=small_fractions,
    )
    def test_inverse_and_commuting_sum(self, entries, scale):
        a, b, c = entries
        m = Matrix([[0, a, b], [0, 0, c], [0, 0, 0]])
        # a polynomial in m commutes with m and is nilpotent
        other = scale * m + m * m
        assert nilpotent_exp(m) * nilpotent_exp(-m) == Matrix.identity(3)
        assert nilpotent_exp(m + other) == nilpotent_exp(m) * nilpotent_exp(other)


class TestCharPoly:
    def test_examples(self):
        assert char_poly(Matrix([[1, 1], [0, 1]])) == IntPolynomial([1, -2, 1])
        assert char_poly(-Matrix.identity(2)) == IntPolynomial([1, 2, 1])
        assert char_poly(Matrix([[0, -1], [1, 0]])) == IntPolynomial([1, 0, 1])

    def test_monic_and_integral(self):
        p = char_poly(Matrix([[2, 3], [5, 7]]))
        assert p.is_monic() and p.is_integral()
        assert p == IntPolynomial([-1, -9, 1])  # det 14 - 15, trace 9

    def test_fractional_entries(self):
        p = char_poly(Matrix([[F(1, 2), 0], [0, F(1, 3)]]))
        assert p == IntPolynomial([F(1, 6), F(-5, 6), 1])

    @settings(max_examples=30, deadline=None)
    @given(data=st.data(), n=st.integers(min_value=1, max_value=3))
    def test_similarity_invariance(self, data, n):
        m = data.draw(square_matrices(n))
        seed = data.draw(st.integers(min_value=0, max_value=10**6))
        s = _random_invertible(random.Random(seed), n)
        assert char_poly(s.inverse() * m * s) == char_poly(m)

    @settings(max_examples=25, deadline=None)
    @given(m=square_matrices(3))
    def test_matches_sympy(self, m):
        import sympy

        sym = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row]
                            for row in m.entries])
        t = sympy.Symbol("t")
        expected = sympy.Poly(sym.charpoly(t).as_expr(), t).all_coeffs()
        ours = list(reversed([F(str(c)) for c in expected]))
        assert char_poly(m) == IntPolynomial(ours)


class TestPolynomial:
    def test_arithmetic(self):
        p = IntPolynomial([-1, 1])  # t - 1
        assert p * p == IntPolynomial([1, -2, 1])
        assert (p**3).degree == 3
        assert str(IntPolynomial([1, -2, 1])) == "t^2 - 2*t + 1"

    def test_divmod_exact(self):
        num = IntPolynomial([-1, 0, 0, 0, 1])  # t^4 - 1
        den = IntPolynomial([1, 0, 1])  # t^2 + 1
        q, r = divmod(num, den)
        assert r.is_zero() and q == IntPolynomial([-1, 0, 1])

    def test_reduce_mod(self):
        p = IntPolynomial([1, -2, 1])
        assert p.reduce_mod(5) == (1, 3, 1)
        with pytest.raises(ValueError):
            IntPolynomial([F(1, 5)]).reduce_mod(5)

    def test_trailing_zeros_trimmed(self):
        assert IntPolynomial([1, 2, 0, 0]).degree == 1
        assert IntPolynomial([0, 0]).is_zero()


class TestIntegerLattice:
    def test_hermite_spans_same_lattice(self):
        rows = [[2, 0], [0, 2], [1, 1]]
        h = integer_row_hermite(rows)
        assert len(h) == 2
        # (1,1) and (0,2) generate the same index-2 sublattice
        dets = h[0][0] * h[1][1] - h[0][1] * h[1][0]
        assert abs(dets) == 2

    def test_lattice_basis_rational(self):
        basis = lattice_basis([(F(1), F(0)), (F(0), F(1)), (F(1, 2), F(1, 2))], 2)
        assert len(basis) == 2
        m = Matrix.from_columns(basis)
        assert abs(m.det()) == F(1, 2)

    def test_lattice_basis_rank_deficient(self):
        assert len(lattice_basis([(F(1), F(0)), (F(2), F(0))], 2)) == 1

    def test_integer_solvability(self):
        assert has_integer_solution([[2]], [4])
        assert not has_integer_solution([[2]], [3])
        assert has_integer_solution([[2, 0], [0, 3]], [4, 6])
        assert not has_integer_solution([[2, 0], [0, 3]], [4, 7])
        assert has_integer_solution([], [])
        # inconsistent zero row
        assert not has_integer_solution([[0, 0]], [1])
        # 2x + 4y = 6 solvable, = 5 not
        assert has_integer_solution([[2, 4]], [6])
        assert not has_integer_solution([[2, 4]], [5])

    @settings(max_examples=40, deadline=None)
    @given(
        a=st.lists(st.lists(st.integers(-6, 6), min_size=2, max_size=2), min_size=2, max_size=2),
        x=st.lists(st.integers(-5, 5), min_size=2, max_size=2),
    )
    def test_solvability_complete_on_constructed_systems(self, a, x):
        b = [sum(r[j] * x[j] for j in range(2)) for r in a]
        assert has_integer_solution(a, b)
