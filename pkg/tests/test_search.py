"""
Unit tests for the search engine.
"""

import os
import shutil
import tempfile
import unittest
from itertools import product
from unittest import mock

from supreg.core import expected_min_s6
from supreg.exceptions import DeadEnd, InvalidModulus, InvalidPrefix, VerificationFailed
from supreg.prime_field import PrimeField, is_prime
from supreg.search import (
    SearchTask, conjecture_scan, exhaustive, greedy_extend, min_field, min_forbidden,
    partition_roots, random_prefix,
)
from supreg.toeplitz import ToeplitzLT, is_superregular

SLOW = os.environ.get('SUPREG_SLOW') == '1'


def brute_force(gamma, p):
    """Every normalised LT-superregular A_gamma over F_p, by direct filtering."""
    field = PrimeField(p)
    found = []
    for tail in product(range(p), repeat=gamma - 2):
        entries = (1, 1) + tail
        if is_superregular(ToeplitzLT(field, entries)).verdict:
            found.append(entries)
    return found


class TestSearchTask(unittest.TestCase):
    """Test cases for SearchTask validation."""

    def test_rejects_bad_parameters(self):
        with self.assertRaises(ValueError):
            SearchTask(gamma=5, p=7, mode='bogus')
        with self.assertRaises(ValueError):
            SearchTask(gamma=5, p=7, prefix_policy='clever')
        with self.assertRaises(ValueError):
            SearchTask(gamma=2, p=7)
        with self.assertRaises(InvalidModulus):
            SearchTask(gamma=5, p=9)


class TestExhaustive(unittest.TestCase):
    """Test cases for the pruned exhaustive search."""

    def test_matches_brute_force(self):
        for gamma in (3, 4, 5):
            for p in (3, 5, 7, 11, 13):
                expected = brute_force(gamma, p)
                with self.subTest(gamma=gamma, p=p):
                    record = exhaustive(SearchTask(gamma=gamma, p=p, mode='enumerate'))
                    self.assertEqual(record.matches, expected)
                    self.assertEqual(record.count, len(expected))
                    counted = exhaustive(SearchTask(gamma=gamma, p=p, mode='count'))
                    self.assertEqual(counted.count, len(expected))

    def test_first_is_lexicographic(self):
        record = exhaustive(SearchTask(gamma=5, p=11, mode='first'))
        self.assertEqual(record.matches, brute_force(5, 11)[:1])
        self.assertEqual(record.count, 1)

    def test_order_seven_counts(self):
        self.assertEqual(exhaustive(SearchTask(gamma=7, p=17, mode='count')).count, 8)
        self.assertEqual(exhaustive(SearchTask(gamma=7, p=19, mode='count')).count, 82)

    def test_order_seven_over_twenty_three(self):
        record = exhaustive(SearchTask(gamma=7, p=23, mode='enumerate'))
        self.assertEqual(record.matches, [(1, 1, 4, 19, 6, 4, 8), (1, 1, 4, 19, 6, 4, 15)])

    def test_no_matrix_below_minimum_field(self):
        record = exhaustive(SearchTask(gamma=6, p=7, mode='first'))
        self.assertEqual(record.matches, [])
        self.assertTrue(record.complete)

    def test_total_count(self):
        record = exhaustive(SearchTask(gamma=7, p=17, mode='count'))
        self.assertEqual(record.total_count, 8 * 16 * 16)
        payload = record.to_dict()
        self.assertEqual(payload['count'], 8)
        self.assertIn('nodes_per_depth', payload)
        self.assertIn('pruned_per_depth', payload)

    def test_worker_invariance(self):
        single = exhaustive(SearchTask(gamma=6, p=13, mode='enumerate', workers=1))
        for workers in (2, 5):
            with self.subTest(workers=workers):
                multi = exhaustive(SearchTask(gamma=6, p=13, mode='enumerate', workers=workers))
                self.assertEqual(multi.matches, single.matches)
                self.assertGreater(multi.subtrees, 1)

    def test_partition_roots(self):
        self.assertEqual(partition_roots(6, 13, 1), [(1, 1)])
        roots = partition_roots(6, 13, 4)
        self.assertTrue(all(len(r) == 3 for r in roots))
        self.assertEqual(sorted(roots), roots)
        self.assertNotIn((1, 1, 0), roots)
        self.assertNotIn((1, 1, 1), roots)

    def test_budget_marks_incomplete(self):
        record = exhaustive(SearchTask(gamma=7, p=19, mode='count', node_budget=10))
        self.assertFalse(record.complete)
        self.assertLess(record.count, 82)

    def test_checkpoint_resume(self):
        tmp = tempfile.mkdtemp()
        try:
            path = os.path.join(tmp, 'run.jsonl')
            task = SearchTask(gamma=6, p=13, mode='count', workers=3, checkpoint_path=path)
            first = exhaustive(task)
            self.assertEqual(first.resumed_subtrees, 0)
            second = exhaustive(SearchTask(gamma=6, p=13, mode='count', workers=3, checkpoint_path=path))
            self.assertEqual(second.resumed_subtrees, second.subtrees)
            self.assertEqual(second.count, first.count)

            other = exhaustive(SearchTask(gamma=6, p=17, mode='count', workers=3, checkpoint_path=path))
            self.assertEqual(other.resumed_subtrees, 0)
        finally:
            shutil.rmtree(tmp)

    def test_streaming_callback(self):
        seen = []
        record = exhaustive(SearchTask(gamma=7, p=23, mode='enumerate'), on_match=seen.append)
        self.assertEqual(sorted(seen), record.matches)


class TestMinimumField(unittest.TestCase):
    """Test cases for min_field."""

    def test_small_orders(self):
        for gamma, p in ((3, 3), (4, 5), (5, 7), (6, 11), (7, 17)):
            with self.subTest(gamma=gamma):
                result = min_field(gamma, 40)
                self.assertEqual(result.p, p)
                m = ToeplitzLT(PrimeField(p), result.matrix)
                self.assertTrue(is_superregular(m).verdict)

    def test_not_found(self):
        result = min_field(6, 7)
        self.assertFalse(result.found)
        self.assertEqual(result.tried, [3, 5, 7])
        self.assertEqual(result.to_dict()['status'], 'not found below 7')

    @unittest.skipUnless(SLOW, "set SUPREG_SLOW=1 for the order-8 minimum field")
    def test_order_eight(self):
        self.assertEqual(min_field(8, 40, workers=4).p, 31)


class TestMinForbidden(unittest.TestCase):
    """Test cases for min_forbidden and conjecture_scan."""

    def test_order_six_minimum(self):
        for p in (11, 13, 17, 19, 23, 29):
            with self.subTest(p=p):
                record = min_forbidden(6, PrimeField(p))
                self.assertTrue(record.complete)
                self.assertEqual(record.min_size, expected_min_s6(p))
                self.assertGreater(record.argmin_count, 0)
                self.assertLessEqual(len(record.argmin), record.argmin_count)

    def test_order_seven_minimum(self):
        for p, expected in ((17, 16), (19, 18), (23, 21)):
            with self.subTest(p=p):
                self.assertEqual(min_forbidden(7, PrimeField(p)).min_size, expected)

    @unittest.skipUnless(SLOW, "set SUPREG_SLOW=1 for the order-7 minimum over F_29")
    def test_order_seven_minimum_over_twenty_nine(self):
        self.assertEqual(min_forbidden(7, PrimeField(29), workers=4).min_size, 24)

    @unittest.skipUnless(SLOW, "set SUPREG_SLOW=1 for the order-6 scan up to 200")
    def test_order_six_scan(self):
        for p in [p for p in range(11, 201) if is_prime(p)]:
            with self.subTest(p=p):
                self.assertEqual(min_forbidden(6, PrimeField(p)).min_size, expected_min_s6(p))

    def test_witness_limit(self):
        record = min_forbidden(6, PrimeField(29), witness_limit=2)
        self.assertLessEqual(len(record.argmin), 2)
        self.assertEqual(record.argmin, sorted(record.argmin))

    def test_rejects_small_gamma(self):
        with self.assertRaises(ValueError):
            min_forbidden(3, PrimeField(7))

    def test_conjecture(self):
        report = conjecture_scan(6, PrimeField(11))
        self.assertEqual(report.min_size, 10)
        self.assertEqual(report.bound, 15)
        self.assertTrue(report.satisfied)
        self.assertTrue(report.to_dict()['complete'])


class TestGreedy(unittest.TestCase):
    """Test cases for greedy_extend."""

    def test_smallest_policy(self):
        m = greedy_extend([1, 1], 4, field=PrimeField(5))
        self.assertEqual(m.values, (1, 1, 2, 1))
        self.assertTrue(is_superregular(m).verdict)

    def test_dead_end(self):
        with self.assertRaises(DeadEnd) as ctx:
            greedy_extend([1, 1], 6, field=PrimeField(7))
        err = ctx.exception
        self.assertGreaterEqual(err.depth, 4)
        self.assertEqual(len(err.prefix), err.depth - 1)

    def test_random_policy_is_seeded(self):
        f = PrimeField(101)
        first = greedy_extend([1, 1], 6, policy='random', seed=3, field=f)
        second = greedy_extend([1, 1], 6, policy='random', seed=3, field=f)
        self.assertEqual(first.values, second.values)
        self.assertTrue(is_superregular(first).verdict)

    def test_invalid_prefix(self):
        with self.assertRaises(InvalidPrefix):
            greedy_extend([1, 1, 1], 5, field=PrimeField(11))
        with self.assertRaises(ValueError):
            greedy_extend([1, 1], 5, policy='largest', field=PrimeField(11))


class TestRandomPrefix(unittest.TestCase):
    """Test cases for random_prefix."""

    def test_deterministic(self):
        task = dict(gamma=7, p=29, prefix_policy='random', seed=7, trials=12, tail_depth=2)
        first = random_prefix(SearchTask(**task))
        second = random_prefix(SearchTask(**task))
        self.assertEqual(first.matches, second.matches)
        self.assertEqual(first.hits, second.hits)
        self.assertEqual(first.relative_frequency, first.hits / 12)

    def test_trial_set_independent_of_workers(self):
        task = dict(gamma=7, p=29, prefix_policy='random', seed=11, trials=9, tail_depth=2)
        single = random_prefix(SearchTask(workers=1, **task))
        multi = random_prefix(SearchTask(workers=3, **task))
        self.assertEqual(single.matches, multi.matches)
        self.assertEqual(single.hits, multi.hits)

    def test_hits_are_superregular(self):
        record = random_prefix(SearchTask(gamma=7, p=37, prefix_policy='random', seed=1, trials=10, tail_depth=3))
        field = PrimeField(37)
        for match in record.matches:
            self.assertTrue(is_superregular(ToeplitzLT(field, match)).verdict)
        payload = record.to_dict()
        self.assertEqual(payload['generator'], 'numpy.PCG64')
        self.assertEqual(payload['trials'], 10)

    def test_bad_tail_depth(self):
        with self.assertRaises(ValueError):
            random_prefix(SearchTask(gamma=6, p=13, prefix_policy='random', tail_depth=4))

    def test_order_eight_same_seed_same_hits(self):
        task = dict(gamma=8, p=31, prefix_policy='random', seed=5, tail_depth=2)
        first = random_prefix(SearchTask(trials=6, **task))
        second = random_prefix(SearchTask(trials=6, **task))
        self.assertEqual(first.matches, second.matches)
        self.assertEqual(first.hits, second.hits)
        shorter = random_prefix(SearchTask(trials=3, **task))
        self.assertEqual(first.matches[:len(shorter.matches)], shorter.matches)

    def test_every_hit_is_verified(self):
        task = SearchTask(gamma=5, p=13, prefix_policy='random', seed=0, trials=3, tail_depth=2)
        self.assertEqual(random_prefix(task).hits, 3)
        with mock.patch('supreg.search.is_superregular', return_value=mock.Mock(verdict=False)) as check:
            with self.assertRaises(VerificationFailed):
                random_prefix(task)
        check.assert_called_once()

    @unittest.skipUnless(SLOW, "set SUPREG_SLOW=1 for the order-10 randomised search")
    def test_order_ten_frequency(self):
        task = dict(gamma=10, p=257, prefix_policy='random', seed=42, tail_depth=3, workers=4)
        record = random_prefix(SearchTask(trials=1000, **task))
        published = 0.053
        self.assertGreater(record.hits, 0)
        self.assertGreaterEqual(record.relative_frequency, published / 3)
        self.assertLessEqual(record.relative_frequency, published * 3)
        field = PrimeField(257)
        for match in record.matches:
            self.assertTrue(is_superregular(ToeplitzLT(field, match)).verdict)

        rerun = random_prefix(SearchTask(trials=200, **task))
        self.assertEqual(record.matches[:len(rerun.matches)], rerun.matches)


if __name__ == '__main__':
    unittest.main()
