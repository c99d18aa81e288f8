from fractions import Fraction

import pytest

from qsatkit.fields import GF, QI, int_gcd, is_exact, one_like, zero_like


def _as_pair(x):
    return (x.real, x.imag)


def test_qi_matches_fraction_reference(rng):
    for _ in range(300):
        a1, b1, a2, b2 = (int(x) for x in rng.integers(-30, 31, size=4))
        d1, d2 = (int(x) for x in rng.integers(1, 12, size=2))
        x = QI(a1, b1, d1)
        y = QI(a2, b2, d2)
        fx = (Fraction(a1, d1), Fraction(b1, d1))
        fy = (Fraction(a2, d2), Fraction(b2, d2))
        assert _as_pair(x + y) == (fx[0] + fy[0], fx[1] + fy[1])
        assert _as_pair(x - y) == (fx[0] - fy[0], fx[1] - fy[1])
        assert _as_pair(x * y) == (fx[0] * fy[0] - fx[1] * fy[1],
                                   fx[0] * fy[1] + fx[1] * fy[0])
        if y:
            div = x / y
            assert _as_pair(div * y) == _as_pair(x)


def test_qi_normalization_and_equality():
    assert QI(2, 4, 6) == QI(1, 2, 3)
    assert hash(QI(2, 4, 6)) == hash(QI(1, 2, 3))
    assert QI(1, 0, -2) == QI(-1, 0, 2)
    assert QI(3) == 3
    assert not QI(0, 0, 5)
    assert QI(0, 1) * QI(0, 1) == QI(-1)


def test_qi_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QI(1) / QI(0)
    with pytest.raises(ZeroDivisionError):
        QI(1, 0, 0)


def test_qi_conjugate_and_complex():
    z = QI(3, -4, 5)
    assert z.conjugate() == QI(3, 4, 5)
    assert complex(z) == complex(0.6, -0.8)


def test_gf_field_axioms(rng):
    p = 101
    F = GF(p)
    for _ in range(100):
        a = F(int(rng.integers(0, p)))
        b = F(int(rng.integers(1, p)))
        assert (a + b) - b == a
        assert (a * b) / b == a
        assert a * F(1) == a
    assert not F(0)
    assert F(p) == F(0)


def test_helpers():
    assert one_like(QI(5)) == QI(1)
    assert zero_like(QI(5)) == QI(0)
    assert one_like(1j) == 1 + 0j
    assert is_exact(QI(1)) and is_exact(GF(7)(1)) and not is_exact(1j)
    assert int_gcd(12, 18) == 6
