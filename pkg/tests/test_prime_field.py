"""
Unit tests for prime-field arithmetic.

Covers primality, element arithmetic, rational literals, Legendre symbols,
square roots and the residue laws used by the order-6 constructions.
"""

import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from supreg.exceptions import (
    DegenerateLinear, DenominatorZeroModP, InvalidModulus, ModulusMismatch, NonResidue,
    ParseError, ZeroInverse,
)
from supreg.prime_field import (
    PrimeField, is_prime, legendre, parse_rational, rational_alias, residue_law_holds,
    solve_linear, sqrt_mod,
)

SMALL_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73]


class TestPrimality(unittest.TestCase):
    """Test cases for is_prime."""

    def test_small_numbers(self):
        primes = [n for n in range(100) if is_prime(n)]
        self.assertEqual(primes, [2] + SMALL_PRIMES + [79, 83, 89, 97])

    def test_large_numbers(self):
        self.assertTrue(is_prime(2_147_483_647))
        self.assertFalse(is_prime(2_147_483_647 * 3))
        # Carmichael number
        self.assertFalse(is_prime(561))


class TestPrimeField(unittest.TestCase):
    """Test cases for PrimeField and FieldElement."""

    def setUp(self):
        self.f13 = PrimeField(13)

    def test_rejects_bad_moduli(self):
        for p in (2, 9, 1, 0, -7):
            with self.assertRaises(InvalidModulus):
                PrimeField(p)

    def test_canonical_representatives(self):
        self.assertEqual(self.f13(-1).value, 12)
        self.assertEqual(self.f13(27).value, 1)
        self.assertEqual(self.f13(18), 5)
        self.assertNotEqual(self.f13(5), 18)

    def test_hash_agrees_with_int_equality(self):
        x = self.f13(3)
        self.assertEqual(x, 3)
        self.assertEqual(hash(x), hash(3))
        self.assertEqual(len({x, 3}), 1)
        self.assertEqual({3: 'three'}[x], 'three')
        self.assertIn(x, {3, 4})

    def test_arithmetic(self):
        a, b = self.f13(7), self.f13(9)
        self.assertEqual((a + b).value, 3)
        self.assertEqual((a - b).value, 11)
        self.assertEqual((a * b).value, 11)
        self.assertEqual((a / b) * b, a)
        self.assertEqual((-a).value, 6)
        self.assertEqual((2 * a).value, 1)
        self.assertEqual((1 - a).value, 7)
        self.assertEqual((a ** -1) * a, self.f13.one)

    def test_inverse_of_zero(self):
        with self.assertRaises(ZeroInverse):
            self.f13.zero ** -1
        with self.assertRaises(ZeroInverse):
            self.f13.inv_int(26)

    def test_modulus_mismatch(self):
        with self.assertRaises(ModulusMismatch):
            self.f13(1) + PrimeField(11)(1)

    def test_elements_and_nonresidue(self):
        self.assertEqual([e.value for e in PrimeField(5).elements()], [0, 1, 2, 3, 4])
        self.assertEqual(PrimeField(7).nonresidue(), 3)
        self.assertEqual(self.f13.nonresidue(), 2)


class TestRationalLiterals(unittest.TestCase):
    """Test cases for parse_rational and rational_alias."""

    def test_parse(self):
        self.assertEqual(parse_rational("1/2", PrimeField(13)).value, 7)
        self.assertEqual(parse_rational("-3/8", PrimeField(17)).value, 6)
        self.assertEqual(parse_rational("-1", PrimeField(11)).value, 10)
        self.assertEqual(parse_rational("40", PrimeField(11)).value, 7)

    def test_malformed(self):
        f = PrimeField(11)
        for text in ("", "1/", "/2", "1.5", "a", "1 /2", "+1", "1/2/3"):
            with self.assertRaises(ParseError):
                parse_rational(text, f)
        with self.assertRaises(ParseError):
            parse_rational("1/0", f)

    def test_denominator_divisible_by_p(self):
        with self.assertRaises(DenominatorZeroModP):
            parse_rational("1/22", PrimeField(11))

    def test_alias(self):
        f = PrimeField(13)
        self.assertEqual(rational_alias(f(7)), "1/2")
        self.assertEqual(rational_alias(f(12)), "-1")
        self.assertEqual(rational_alias(f(0)), "0")

    @given(st.sampled_from(SMALL_PRIMES), st.integers(-30, 30), st.integers(1, 30))
    def test_alias_parses_back(self, p, num, den):
        f = PrimeField(p)
        if den % p == 0:
            return
        x = parse_rational(f"{num}/{den}", f)
        alias = rational_alias(x)
        self.assertIsNotNone(alias)
        self.assertEqual(parse_rational(alias, f), x)


class TestSquareRoots(unittest.TestCase):
    """Test cases for Legendre symbols and Tonelli-Shanks."""

    def test_known_roots(self):
        self.assertEqual([r.value for r in sqrt_mod(PrimeField(13)(-1))], [5, 8])
        self.assertEqual([r.value for r in sqrt_mod(PrimeField(37)(-1))], [6, 31])
        self.assertEqual([r.value for r in sqrt_mod(PrimeField(17)(2))], [6, 11])
        self.assertEqual([r.value for r in sqrt_mod(PrimeField(23)(3))], [7, 16])

    def test_non_residue(self):
        with self.assertRaises(NonResidue):
            sqrt_mod(PrimeField(7)(-1))

    def test_zero(self):
        f = PrimeField(11)
        self.assertEqual(sqrt_mod(f.zero), (f.zero, f.zero))
        self.assertEqual(legendre(f.zero), 0)

    @settings(max_examples=200)
    @given(st.sampled_from(SMALL_PRIMES + [97, 193, 257, 401, 433, 449, 577, 641, 673, 769]),
           st.integers(1, 10_000))
    def test_roots_square_back(self, p, n):
        u = PrimeField(p)(n)
        if u.value == 0:
            return
        if legendre(u) == 1:
            lo, hi = sqrt_mod(u)
            self.assertEqual(lo * lo, u)
            self.assertEqual(hi * hi, u)
            self.assertLess(lo.value, hi.value)
        else:
            with self.assertRaises(NonResidue):
                sqrt_mod(u)

    def test_residue_laws(self):
        for p in range(3, 1000):
            if not is_prime(p):
                continue
            f = PrimeField(p)
            for u in (-1, 2, 3, -3, 5):
                if f(u).value == 0:
                    continue
                with self.subTest(p=p, u=u):
                    self.assertEqual(residue_law_holds(u, p), legendre(f(u)) == 1)

    def test_unknown_residue_law(self):
        with self.assertRaises(ValueError):
            residue_law_holds(7, 11)


class TestSolveLinear(unittest.TestCase):
    """Test cases for solve_linear."""

    def test_root(self):
        f = PrimeField(11)
        x = solve_linear(f(3), f(5))
        self.assertEqual(f(3) * x + f(5), f.zero)

    def test_degenerate(self):
        f = PrimeField(11)
        with self.assertRaises(DegenerateLinear) as ctx:
            solve_linear(f.zero, f.zero)
        self.assertTrue(ctx.exception.constant_is_zero)
        with self.assertRaises(DegenerateLinear) as ctx:
            solve_linear(f.zero, f(4))
        self.assertFalse(ctx.exception.constant_is_zero)


if __name__ == '__main__':
    unittest.main()
