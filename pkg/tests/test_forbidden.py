"""
Unit tests for forbidden-set evaluation.

The numeric evaluator is checked against brute-force substitution, the
vectorised evaluator against the numeric one, and the closed forms against
both on small orders.
"""

import unittest

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from supreg.exceptions import DeadPrefix, DenominatorVanishes, InvalidPrefix, PrefixLengthMismatch
from supreg.forbidden import (
    PAPER_EXPRESSIONS, extension_candidates, forbidden_by_substitution, forbidden_set,
    forbidden_values_batch, inverse_table, paper_expressions, paper_set,
)
from supreg.prime_field import PrimeField, is_prime, parse_rational
from supreg.toeplitz import ToeplitzLT, is_superregular_incremental

PRIMES = [p for p in range(5, 32) if is_prime(p)]


def rationals(field, *texts):
    return [parse_rational(t, field) for t in texts]


def superregular_prefixes(max_len=5, normalized=False):
    """Hypothesis strategy: (field, prefix) with an LT-superregular prefix."""
    def build(p):
        head = [st.just(1), st.just(1)] if normalized else [st.integers(1, p - 1), st.integers(1, p - 1)]
        return st.integers(2, max_len).flatmap(
            lambda n: st.tuples(*(head + [st.integers(0, p - 1)] * (n - 2))).map(
                lambda xs: (PrimeField(p), list(xs))
            )
        )
    return st.sampled_from(PRIMES).flatmap(build).filter(
        lambda fp: is_superregular_incremental(ToeplitzLT(fp[0], tuple(fp[1]))).verdict
    )


class TestForbiddenSet(unittest.TestCase):
    """Test cases for the numeric evaluator."""

    def test_half_over_thirteen(self):
        f = PrimeField(13)
        fs = forbidden_set(rationals(f, "1", "1", "1/2"), 4)
        self.assertEqual([v.value for v in fs.values], [0, 7, 10])
        self.assertEqual(len(fs), 3)
        self.assertIn(7, fs)
        self.assertEqual([c.value for c in extension_candidates(fs)],
                         [v for v in range(13) if v not in (0, 7, 10)])

    def test_order_four_half_has_three_values(self):
        for p in [p for p in range(5, 200) if is_prime(p)]:
            f = PrimeField(p)
            self.assertEqual(len(forbidden_set(rationals(f, "1", "1", "1/2"), 4)), 3)

    def test_order_five_over_eleven(self):
        f = PrimeField(11)
        fs = forbidden_set(rationals(f, "1", "1", "1/2", "1"), 5)
        self.assertEqual(len(fs), 10)
        self.assertEqual([c.value for c in extension_candidates(fs)], [5])

    def test_order_five_counts(self):
        for p in [p for p in range(7, 500) if is_prime(p)]:
            f = PrimeField(p)
            for a3, a4 in (("1/4", "-1/8"), ("3/4", "3/8")):
                prefix = rationals(f, "1", "1", a3, a4)
                if not is_superregular_incremental(ToeplitzLT(f, tuple(prefix))).verdict:
                    continue
                with self.subTest(p=p, a3=a3, a4=a4):
                    self.assertIn(len(forbidden_set(prefix, 5)), (6, 7))

    def test_order_six_three_halves_admissible(self):
        for p in [p for p in range(23, 300) if is_prime(p)]:
            f = PrimeField(p)
            fs = forbidden_set(rationals(f, "1", "1", "1/2", "1", "-1/2"), 6)
            with self.subTest(p=p):
                self.assertLessEqual(len(fs), 22)
                self.assertNotIn(parse_rational("3/2", f), fs)

    def test_order_six_over_thirteen(self):
        f = PrimeField(13)
        s = f(5)
        prefix = [f.one, f.one, parse_rational("1/2", f), (1 + s) / 4, (1 + 2 * s) / 8]
        self.assertEqual(len(forbidden_set(prefix, 6)), 12)

    def test_provenance(self):
        f = PrimeField(13)
        fs = forbidden_set(rationals(f, "1", "1", "1/2"), 4)
        self.assertEqual(sorted(fs.provenance), [0, 7, 10])
        self.assertEqual(sum(len(m) for m in fs.provenance.values()), 5)
        payload = fs.to_dict(provenance=True, symbolic=True)
        self.assertEqual(payload['values'], [0, 7, 10])
        self.assertEqual(payload['aliases']['7'], '1/2')
        self.assertEqual(payload['aliases']['10'], '-3')
        self.assertIn('provenance', payload)

    def test_dead_prefix(self):
        fs = forbidden_set([1, 1, 1, 1], 5, PrimeField(7))
        self.assertTrue(fs.dead)
        self.assertTrue(fs.dead_minors)
        with self.assertRaises(DeadPrefix):
            extension_candidates(fs)
        payload = fs.to_dict()
        self.assertNotIn('candidates', payload)
        self.assertIn('dead_minors', payload)

    def test_errors(self):
        f = PrimeField(7)
        with self.assertRaises(PrefixLengthMismatch):
            forbidden_set([1, 1], 4, f)
        with self.assertRaises(InvalidPrefix):
            forbidden_set([0, 1], 3, f)
        with self.assertRaises(InvalidPrefix):
            forbidden_set([1, 1], 3)

    @settings(max_examples=150, deadline=None)
    @given(superregular_prefixes())
    def test_matches_brute_force(self, case):
        field, prefix = case
        gamma = len(prefix) + 1
        fs = forbidden_set(prefix, gamma, field)
        self.assertFalse(fs.dead)
        self.assertEqual(list(fs.values), forbidden_by_substitution(prefix, gamma, field))


class TestBatchEvaluation(unittest.TestCase):
    """Test cases for forbidden_values_batch."""

    def test_inverse_table(self):
        inv = inverse_table(13)
        self.assertEqual(inv[0], 0)
        for x in range(1, 13):
            self.assertEqual(x * int(inv[x]) % 13, 1)

    def test_single_prefix(self):
        forbidden, dead = forbidden_values_batch(np.array([[1, 1, 7]]), 4, 13)
        self.assertEqual(list(np.flatnonzero(forbidden[0])), [0, 7, 10])
        self.assertFalse(dead[0])

    def test_dead_flag(self):
        _, dead = forbidden_values_batch(np.array([[1, 1, 1, 1], [1, 1, 3, 2]]), 5, 7)
        self.assertTrue(dead[0])

    def test_order_three(self):
        forbidden, dead = forbidden_values_batch(np.array([[1, 1]]), 3, 7)
        self.assertEqual(list(np.flatnonzero(forbidden[0])), [0, 1])
        self.assertFalse(dead[0])

    def test_errors(self):
        with self.assertRaises(PrefixLengthMismatch):
            forbidden_values_batch(np.array([[1, 1, 2]]), 5, 7)
        with self.assertRaises(InvalidPrefix):
            forbidden_values_batch(np.array([[2, 1, 2]]), 4, 7)

    @settings(max_examples=100, deadline=None)
    @given(superregular_prefixes(max_len=6, normalized=True))
    def test_matches_numeric(self, case):
        field, prefix = case
        gamma = len(prefix) + 1
        forbidden, dead = forbidden_values_batch(np.array([prefix]), gamma, field.p)
        fs = forbidden_set(prefix, gamma, field)
        self.assertEqual(bool(dead[0]), fs.dead)
        self.assertEqual(list(np.flatnonzero(forbidden[0])), [v.value for v in fs.values])


class TestClosedForms(unittest.TestCase):
    """Test cases for the closed-form expressions."""

    def test_expression_counts(self):
        self.assertEqual({g: len(e) for g, e in PAPER_EXPRESSIONS.items()}, {3: 2, 4: 4, 5: 10, 6: 26})

    def test_order_three(self):
        f = PrimeField(7)
        self.assertEqual({v.value for v in paper_set(3, [1, 1], f)}, {0, 1})

    def test_order_four_direct_evaluation(self):
        self.assertEqual({v.value for v in paper_set(4, [3], PrimeField(7))}, {0, 3, 2, 5})

    def test_order_five_collapse(self):
        f = PrimeField(1009)
        values = [v for _, _, v in paper_expressions(5, rationals(f, "1/4", "-1/8"))]
        self.assertEqual(len(values), 10)
        self.assertEqual(len(set(values)), 7)

    def test_order_six_at_most_twenty(self):
        f = PrimeField(101)
        self.assertLessEqual(len(paper_set(6, rationals(f, "3/4", "3/8", "1/4"))), 20)

    def test_accepts_free_entries_only(self):
        f = PrimeField(13)
        self.assertEqual(paper_set(4, [7], f), paper_set(4, [1, 1, 7], f))

    def test_vanishing_denominator(self):
        with self.assertRaises(DenominatorVanishes) as ctx:
            paper_expressions(5, [0, 1], PrimeField(11))
        self.assertEqual(ctx.exception.index, 5)
        self.assertEqual(ctx.exception.expression, 'a4^2/a3')

    def test_not_normalised(self):
        with self.assertRaises(InvalidPrefix):
            paper_expressions(4, [2, 1, 3], PrimeField(7))
        with self.assertRaises(PrefixLengthMismatch):
            paper_expressions(7, [1, 1, 2, 3, 4, 5], PrimeField(7))

    @settings(max_examples=150, deadline=None)
    @given(superregular_prefixes(max_len=4, normalized=True))
    def test_matches_numeric_small_orders(self, case):
        field, prefix = case
        gamma = len(prefix) + 1
        assume(gamma >= 3)
        try:
            closed = paper_set(gamma, prefix, field)
        except DenominatorVanishes:
            assume(False)
        self.assertEqual(closed, set(forbidden_set(prefix, gamma, field).values))

    @settings(max_examples=100, deadline=None)
    @given(st.sampled_from([p for p in range(23, 102) if is_prime(p)]).flatmap(
        lambda p: st.tuples(st.just(PrimeField(p)), st.lists(st.integers(0, p - 1), min_size=3, max_size=3))
    ))
    def test_order_six_matches_numeric(self, case):
        field, tail = case
        prefix = [1, 1] + tail
        assume(is_superregular_incremental(ToeplitzLT(field, tuple(prefix))).verdict)
        try:
            closed = paper_set(6, prefix, field)
        except DenominatorVanishes:
            assume(False)
        self.assertEqual(closed, set(forbidden_set(prefix, 6, field).values))


if __name__ == '__main__':
    unittest.main()
