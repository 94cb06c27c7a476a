"""Generic dense polynomials and 2x2 matrices over them."""
from fractions import Fraction

from dstlab.poly import Mat2, Poly, poly_mat


def test_basic_arithmetic():
    p = Poly([1, 2])          # 1 + 2x
    q = Poly([0, 0, 3])       # 3x^2
    assert (p + q).c == [1, 2, 3]
    assert (p * q).c == [0, 0, 3, 6]
    assert (p - p).c == []
    assert p(2) == 5
    assert p.degree == 1 and Poly().degree == -1


def test_trimming_and_equality():
    assert Poly([1, 0, 0]) == Poly([1])
    assert Poly([0, 0]) == 0
    assert Poly([5]) == 5


def test_flip_and_shift():
    p = Poly([1, 2, 3])
    assert p.flip().c == [1, -2, 3]
    assert p.shift_up(2).c == [0, 0, 1, 2, 3]
    assert p.flip().flip() == p


def test_exact_coefficients():
    p = Poly([Fraction(1, 3), Fraction(1, 2)])
    q = p * p
    assert q.c == [Fraction(1, 9), Fraction(1, 3), Fraction(1, 4)]
    assert p(Fraction(2)) == Fraction(4, 3)


def test_mat2_products_and_det():
    a = poly_mat(Poly([0, 1]), 1, 0, 1)     # [[x, 1], [0, 1]]
    b = poly_mat(1, 0, Poly([2]), 1)
    ab = a @ b
    assert ab.a11.c == [2, 1]
    assert a.det().c == [0, 1]
    i = Mat2.identity()
    assert (i @ i).trace() == 2


def test_mat2_eval_and_norm():
    m = poly_mat(Poly([1, 1]), 0, 0, Poly([-1, 2]))
    e = m.eval(3.0)
    assert e.a11 == 4.0 and e.a22 == 5.0
    assert m.max_abs() == 2
