"""
Unit tests for closed-form constructions and the witness tables.
"""

import os
import shutil
import tempfile
import unittest

from supreg.constructions import (
    COVER_FAMILIES, FAMILIES, MIN_FIELD, WITNESS_FILE, construct, explicit_matrices,
    family_cover, family_prefix, family_s6_count, load_witnesses, verify_witness_file,
    witness, witnesses,
)
from supreg.exceptions import ChecksumMismatch, FieldTooSmall, NoWitness, VariantInapplicable
from supreg.forbidden import forbidden_set
from supreg.prime_field import PrimeField, is_prime, sqrt_mod
from supreg.toeplitz import is_superregular

SLOW = os.environ.get('SUPREG_SLOW') == '1'


def primes_between(lo, hi):
    return [p for p in range(lo, hi + 1) if is_prime(p)]


class TestConstruct(unittest.TestCase):
    """Test cases for construct."""

    def test_soundness_small_primes(self):
        for gamma in (3, 4, 5, 6):
            for p in primes_between(MIN_FIELD[gamma], 400):
                with self.subTest(gamma=gamma, p=p):
                    m = construct(gamma, PrimeField(p))
                    self.assertEqual(m.gamma, gamma)
                    self.assertTrue(is_superregular(m).verdict)

    @unittest.skipUnless(SLOW, "set SUPREG_SLOW=1 for the sweep up to 10000")
    def test_soundness_sweep(self):
        for gamma in (3, 4, 5, 6):
            for p in primes_between(MIN_FIELD[gamma], 10000):
                with self.subTest(gamma=gamma, p=p):
                    self.assertTrue(is_superregular(construct(gamma, PrimeField(p))).verdict)

    def test_order_six_over_eleven(self):
        self.assertEqual(construct(6, PrimeField(11)).values, (1, 1, 6, 1, 5, 4))

    def test_smallest_fields(self):
        self.assertEqual(construct(3, PrimeField(3)).gamma, 3)
        self.assertEqual(construct(4, PrimeField(5)).gamma, 4)
        self.assertEqual(construct(5, PrimeField(7)).gamma, 5)

    def test_field_too_small(self):
        for gamma, p in ((4, 3), (5, 5), (6, 7)):
            with self.subTest(gamma=gamma, p=p):
                with self.assertRaises(FieldTooSmall):
                    construct(gamma, PrimeField(p))

    def test_variants(self):
        m = construct(5, PrimeField(11), 'T23-4')
        self.assertEqual(m.values, (1, 1, 6, 1, 5))
        self.assertEqual(construct(6, PrimeField(37), 'T24-5').values, (1, 1, 19, 33, 19, 10))

    def test_inapplicable_variants(self):
        with self.assertRaises(VariantInapplicable):
            construct(7, PrimeField(17))
        with self.assertRaises(VariantInapplicable):
            construct(6, PrimeField(13), 'T24-1')
        with self.assertRaises(VariantInapplicable):
            construct(6, PrimeField(19), 'T24-1')
        with self.assertRaises(VariantInapplicable):
            construct(5, PrimeField(11), 'T24-1')
        with self.assertRaises(VariantInapplicable):
            construct(6, PrimeField(29), 'no-such-variant')

    def test_explicit_matrices(self):
        for m in explicit_matrices():
            with self.subTest(m=m.values, p=m.p):
                self.assertTrue(is_superregular(m).verdict)


class TestOrderSixFamilies(unittest.TestCase):
    """Test cases for the residue-indexed order-6 families."""

    def test_cover_examples(self):
        self.assertEqual(family_cover(PrimeField(13)), ['T24-1', 'T24-3', 'T24-5'])
        self.assertEqual(family_cover(PrimeField(83)), ['T24-5'])
        self.assertEqual(family_cover(PrimeField(11)), ['T24-4', 'T24-5'])

    def test_cover_is_never_empty(self):
        for p in primes_between(11, 3000):
            self.assertTrue(family_cover(PrimeField(p)), p)

    def test_family_prefix(self):
        f = PrimeField(13)
        prefix = family_prefix('T24-1', f, root=5)
        self.assertEqual(len(prefix), 5)
        self.assertEqual(prefix[2].value, 7)
        with self.assertRaises(VariantInapplicable):
            family_prefix('T24-1', f, root=4)

    def test_stated_s6_counts(self):
        for fid in COVER_FAMILIES:
            family = FAMILIES[fid]
            for p in primes_between(11, 500):
                f = PrimeField(p)
                if fid not in family_cover(f):
                    continue
                lo, hi = sqrt_mod(f(family.residue))
                for root in {lo.value, hi.value}:
                    prefix = family_prefix(fid, f, root=root)
                    with self.subTest(family=fid, p=p, root=root):
                        self.assertEqual(len(forbidden_set(prefix, 6)), family_s6_count(fid, p))

    def test_s6_count_lookup(self):
        self.assertEqual(family_s6_count('T24-1', 13), 12)
        self.assertEqual(family_s6_count('T24-1', 29), 13)
        self.assertEqual(family_s6_count('T24-5', 83), 14)
        with self.assertRaises(VariantInapplicable):
            family_s6_count('T22', 11)


class TestWitnesses(unittest.TestCase):
    """Test cases for the embedded witness tables."""

    def test_every_witness_is_superregular(self):
        for record in load_witnesses():
            with self.subTest(gamma=record.gamma, p=record.p):
                m = record.matrix()
                self.assertEqual(m.gamma, record.gamma)
                self.assertTrue(is_superregular(m).verdict)

    def test_table_contents(self):
        self.assertEqual(len(witnesses(7, source_table='table5')), 10)
        self.assertEqual(len(witnesses(gamma=7, p=23)), 2)
        self.assertEqual(witness(7, PrimeField(29)).values, (1, 1, 15, 19, 8, 22, 1))
        self.assertEqual(witness(9, PrimeField(59)).values, (1, 1, 5, 28, 58, 56, 26, 18, 19))
        self.assertEqual(witness(10, PrimeField(173)).values, (1, 1, 156, 131, 142, 64, 96, 4, 107, 34))

    def test_missing_witness(self):
        with self.assertRaises(NoWitness):
            witness(7, PrimeField(13))

    def test_checksum(self):
        self.assertEqual(len(verify_witness_file()), 64)

    def test_tampered_file(self):
        tmp = tempfile.mkdtemp()
        try:
            path = os.path.join(tmp, 'witnesses.json')
            shutil.copy(WITNESS_FILE, path)
            shutil.copy(WITNESS_FILE + '.sha256', path + '.sha256')
            with open(path, 'a') as f:
                f.write('\n')
            with self.assertRaises(ChecksumMismatch):
                verify_witness_file(path)
        finally:
            shutil.rmtree(tmp)


if __name__ == '__main__':
    unittest.main()
