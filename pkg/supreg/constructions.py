"""
Closed-form LT-superregular Toeplitz matrices for orders 3 to 6, and the
embedded witness tables for orders 7 to 10.

Every matrix handed out is re-verified with the full minor check before it
is returned.
"""

import os
import json
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from .exceptions import (
    ChecksumMismatch, ConstructionFailed, FieldError, FieldTooSmall, NoWitness,
    VariantInapplicable,
)
from .forbidden import extension_candidates, forbidden_set
from .prime_field import FieldElement, PrimeField, residue_law_holds, sqrt_mod
from .toeplitz import ToeplitzLT, is_superregular
from .utils import FileUtils

logger = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')
WITNESS_FILE = os.path.join(DATA_DIR, 'witnesses.json')

# Smallest prime admitting an LT-superregular A_gamma
MIN_FIELD = {3: 3, 4: 5, 5: 7, 6: 11, 7: 17, 8: 31, 9: 59}

# Stated |S_6| at the order-6 family prefixes: (generic, {p: exception})
S6_EXCEPTIONS: Dict[str, Tuple[int, Dict[int, int]]] = {
    'T24-1': (13, {13: 12, 17: 12}),
    'T24-2': (13, {23: 12}),
    'T24-3': (13, {13: 11}),
    'T24-4': (13, {11: 11}),
    'T24-5': (14, {11: 10, 13: 12, 23: 13, 61: 13}),
}

# Roots of x^2 = u under which the a_6 = 1/4 choice is safe at the listed primes
ROOT_OVERRIDES: Dict[str, Dict[int, int]] = {
    'T24-1': {37: 6},
    'T24-2': {17: 6},
    'T24-3': {37: 16},
    'T24-5': {23: 16, 73: 52},
}

EntryBuilder = Callable[[PrimeField, Optional[FieldElement]], List[FieldElement]]


def _q(field: PrimeField, num: int, den: int = 1) -> FieldElement:
    return field.element(num) / den


def _rational(*values: str) -> EntryBuilder:
    fractions = [Fraction(v) for v in values]

    def build(field: PrimeField, root: Optional[FieldElement]) -> List[FieldElement]:
        return [field.one, field.one] + [_q(field, f.numerator, f.denominator) for f in fractions]

    return build


def _family_order6(a4: Callable, a5: Callable, a6: Optional[Callable] = None) -> EntryBuilder:
    """(1, 1, 1/2, a4(s), a5(s), a6(s)) for a square root s."""

    def build(field: PrimeField, s: Optional[FieldElement]) -> List[FieldElement]:
        last = a6(field, s) if a6 else _q(field, 1, 4)
        return [field.one, field.one, _q(field, 1, 2), a4(field, s), a5(field, s), last]

    return build


@dataclass(frozen=True)
class Family:
    """A construction variant: entry formulas, applicability and overrides."""
    id: str
    gamma: int
    description: str
    builder: EntryBuilder
    min_p: int
    residue: Optional[int] = None
    entry_overrides: Dict[int, Tuple[int, ...]] = dc_field(default_factory=dict)
    only_p: Optional[int] = None
    both_roots: bool = True

    def applies(self, p: int) -> bool:
        if self.only_p is not None:
            return p == self.only_p
        if p < self.min_p:
            return False
        if self.residue is not None and not residue_law_holds(self.residue, p):
            return False
        return True

    def roots(self, field: PrimeField) -> List[Optional[FieldElement]]:
        """Square roots to try, override first, then smaller before larger."""
        if self.residue is None:
            return [None]
        lo, hi = sqrt_mod(field.element(self.residue))
        ordered = [lo, hi]
        override = ROOT_OVERRIDES.get(self.id, {}).get(field.p)
        if override is not None:
            ordered.sort(key=lambda r: r.value != override)
        if lo == hi or not self.both_roots:
            return ordered[:1]
        return ordered

    def candidates(self, field: PrimeField) -> Iterator[ToeplitzLT]:
        if field.p in self.entry_overrides:
            yield ToeplitzLT(field, tuple(field.element(v) for v in self.entry_overrides[field.p]))
            return
        for root in self.roots(field):
            yield ToeplitzLT(field, tuple(self.builder(field, root)))


FAMILIES: Dict[str, Family] = {}


def _register(family: Family) -> Family:
    FAMILIES[family.id] = family
    return family


_register(Family('S21-neg1', 3, 'a_3 = -1', _rational('-1'), min_p=3))
_register(Family('S21-half', 3, 'a_3 = 1/2', _rational('1/2'), min_p=3))
_register(Family('T22', 4, '(a_3, a_4) = (1/2, 1)', _rational('1/2', '1'), min_p=5))
_register(Family('T23-4', 5, '(1/2, 1, -1/2)', _rational('1/2', '1', '-1/2'), min_p=11))
_register(Family('T23-3a', 5, '(1/4, -1/8, 1/4)', _rational('1/4', '-1/8', '1/4'), min_p=7))
_register(Family('T23-3b', 5, '(3/4, 3/8, 1/4)', _rational('3/4', '3/8', '1/4'), min_p=7))

_register(Family('P11', 6, 'explicit matrix over F_11', _rational(), min_p=11, only_p=11,
                 entry_overrides={11: (1, 1, 6, 1, 5, 4)}))
for _n, _entries in enumerate([(1, 1, 7, 8, 3, 2), (1, 1, 7, 4, 12, 9),
                               (1, 1, 7, 6, 1, 2), (1, 1, 7, 6, 1, 4)], 1):
    _register(Family(f'P13-{_n}', 6, 'explicit matrix over F_13', _rational(), min_p=13, only_p=13,
                     entry_overrides={13: _entries}))

_register(Family(
    'T24-1', 6, 'p = 1 mod 4: a4 = (1+s)/4, a5 = (1+2s)/8, s^2 = -1',
    _family_order6(lambda f, s: (1 + s) / 4, lambda f, s: (1 + 2 * s) / 8),
    min_p=17, residue=-1,
))
_register(Family(
    'T24-2', 6, 'p = +-1 mod 8: a4 = (s+2)/8, a5 = (s+1)/8, s^2 = 2',
    _family_order6(lambda f, s: (s + 2) / 8, lambda f, s: (s + 1) / 8),
    min_p=17, residue=2,
))
_register(Family(
    'T24-3', 6, 'p = 1 mod 3: a4 = (3+s)/8, a5 = (2+s)/8, s^2 = -3',
    _family_order6(lambda f, s: (3 + s) / 8, lambda f, s: (2 + s) / 8),
    min_p=19, residue=-3,
))
_register(Family(
    'T24-4', 6, 'p = +-1 mod 5: a4 = (1+s)/8, a5 = s/8, s^2 = 5',
    _family_order6(lambda f, s: (1 + s) / 8, lambda f, s: s / 8),
    min_p=19, residue=5,
))
_register(Family(
    'T24-5', 6, 'p = +-1 mod 12: a4 = (s-1)/4, a5 = (2s-3)/8, s^2 = 3',
    _family_order6(lambda f, s: (s - 1) / 4, lambda f, s: (2 * s - 3) / 8),
    min_p=23, residue=3, entry_overrides={37: (1, 1, 19, 33, 19, 10)},
))
_register(Family(
    'R26', 6, 'p = 1 mod 4: T24-1 prefix with a6 = s/2, s < p/2',
    _family_order6(lambda f, s: (1 + s) / 4, lambda f, s: (1 + 2 * s) / 8, lambda f, s: s / 2),
    min_p=17, residue=-1, both_roots=False,
))
_register(Family('E27-1', 6, '(1/4, -1/8, 1/4, -1/4)', _rational('1/4', '-1/8', '1/4', '-1/4'), min_p=23))
_register(Family('E27-2', 6, '(3/4, 3/8, 1/4, -5/16)', _rational('3/4', '3/8', '1/4', '-5/16'), min_p=23))
_register(Family('E27-3', 6, '(1/2, 1, -1/2, 3/2)', _rational('1/2', '1', '-1/2', '3/2'), min_p=23))

DEFAULT_ORDER: Dict[int, List[str]] = {
    3: ['S21-neg1', 'S21-half'],
    4: ['T22'],
    5: ['T23-4', 'T23-3a', 'T23-3b'],
    6: ['P11', 'P13-1', 'T24-1', 'T24-2', 'T24-3', 'T24-4', 'T24-5', 'R26', 'E27-1', 'E27-2', 'E27-3'],
}

COVER_FAMILIES = ['T24-1', 'T24-2', 'T24-3', 'T24-4', 'T24-5']


def family_cover(field: PrimeField) -> List[str]:
    """Order-6 families whose residue condition holds at p."""
    return [fid for fid in COVER_FAMILIES if residue_law_holds(FAMILIES[fid].residue, field.p)]


def family_prefix(family_id: str, field: PrimeField, root: Optional[int] = None) -> List[FieldElement]:
    """
    (1, 1, a_3, ..., a_{gamma-1}) of a family, ignoring the p bound.

    `root` picks the square root; by default the smaller one.
    """
    family = _get_family(family_id)
    s = None
    if family.residue is not None:
        lo, hi = sqrt_mod(field.element(family.residue))
        s = lo if root is None else field.element(root)
        if s * s != field.element(family.residue):
            raise VariantInapplicable(f"{root} is not a square root of {family.residue} mod {field.p}")
    return family.builder(field, s)[:-1]


def family_s6_count(family_id: str, p: int) -> int:
    """|S_6| stated for an order-6 family prefix at p."""
    if family_id not in S6_EXCEPTIONS:
        raise VariantInapplicable(f"no stated |S_6| for {family_id}")
    generic, exceptions = S6_EXCEPTIONS[family_id]
    return exceptions.get(p, generic)


def _get_family(family_id: str) -> Family:
    try:
        return FAMILIES[family_id]
    except KeyError:
        raise VariantInapplicable(f"unknown variant {family_id!r}; known: {sorted(FAMILIES)}")


def _verified(m: ToeplitzLT) -> bool:
    report = is_superregular(m)
    if not report.verdict:
        logger.debug(f"candidate {m} fails at {report.first_failure}")
    return report.verdict


def construct(gamma: int, field: PrimeField, variant: Optional[str] = None) -> ToeplitzLT:
    """
    A verified LT-superregular A_gamma over F_p for 3 <= gamma <= 6.

    Without `variant` the applicable families are tried in default order,
    and if every closed form fails the smallest admissible a_gamma at a
    superregular family prefix is used.
    """
    if gamma not in DEFAULT_ORDER:
        raise VariantInapplicable(f"closed forms cover gamma 3..6; use witness() for gamma={gamma}")
    p = field.p
    if p < MIN_FIELD[gamma]:
        raise FieldTooSmall(f"no LT-superregular A_{gamma} exists over F_{p} (needs p >= {MIN_FIELD[gamma]})")

    if variant is not None:
        family = _get_family(variant)
        if family.gamma != gamma or not family.applies(p):
            raise VariantInapplicable(f"variant {variant} does not apply to gamma={gamma}, p={p}")
        families = [family]
    else:
        families = [FAMILIES[fid] for fid in DEFAULT_ORDER[gamma] if FAMILIES[fid].applies(p)]

    for family in families:
        try:
            for m in family.candidates(field):
                if _verified(m):
                    logger.debug(f"construct gamma={gamma} p={p}: {family.id} -> {m.values}")
                    return m
        except FieldError as e:
            logger.debug(f"{family.id} unusable at p={p}: {e}")

    if variant is None:
        for family in families:
            rescued = _extend_family_prefix(family, field)
            if rescued is not None:
                logger.warning(f"construct gamma={gamma} p={p}: closed forms failed, extended {family.id} prefix")
                return rescued

    raise ConstructionFailed(f"no verified construction for gamma={gamma}, p={p}, variant={variant}")


def _extend_family_prefix(family: Family, field: PrimeField) -> Optional[ToeplitzLT]:
    for m in family.candidates(field):
        prefix = m.leading(m.gamma - 1)
        if not is_superregular(prefix).verdict:
            continue
        fs = forbidden_set(list(prefix.entries), m.gamma)
        if fs.dead:
            continue
        for value in extension_candidates(fs):
            extended = ToeplitzLT(field, prefix.entries + (value,))
            if _verified(extended):
                return extended
    return None


@dataclass(frozen=True)
class WitnessRecord:
    gamma: int
    p: int
    entries: Tuple[int, ...]
    source_table: str
    different_minors: Optional[int] = None
    relative_frequency: Optional[float] = None

    def matrix(self) -> ToeplitzLT:
        field = PrimeField(self.p)
        return ToeplitzLT(field, tuple(field.element(v) for v in self.entries))


def verify_witness_file(path: str = WITNESS_FILE) -> str:
    """Check the data file against its recorded sha256; returns the digest."""
    with open(path + '.sha256', 'r') as f:
        expected = f.read().split()[0].strip()
    actual = FileUtils.generate_file_hash(path, 'sha256')
    if actual != expected:
        raise ChecksumMismatch(f"{path}: sha256 {actual} does not match recorded {expected}")
    return actual


@lru_cache(maxsize=4)
def load_witnesses(path: str = WITNESS_FILE) -> Tuple[WitnessRecord, ...]:
    verify_witness_file(path)
    with open(path, 'r') as f:
        payload = json.load(f)
    records = tuple(
        WitnessRecord(
            gamma=item['gamma'], p=item['p'], entries=tuple(item['entries']),
            source_table=item['source_table'],
            different_minors=item.get('different_minors'),
            relative_frequency=item.get('relative_frequency'),
        )
        for item in payload['witnesses']
    )
    logger.debug(f"loaded {len(records)} witnesses from {path}")
    return records


def witnesses(gamma: Optional[int] = None, p: Optional[int] = None,
              source_table: Optional[str] = None) -> List[WitnessRecord]:
    return [
        w for w in load_witnesses()
        if (gamma is None or w.gamma == gamma) and (p is None or w.p == p)
        and (source_table is None or w.source_table == source_table)
    ]


def witness(gamma: int, field: PrimeField) -> ToeplitzLT:
    """The tabulated witness for (gamma, p), first one when several exist."""
    found = witnesses(gamma, field.p)
    if not found:
        available = sorted({(w.gamma, w.p) for w in load_witnesses()})
        raise NoWitness(f"no witness for gamma={gamma}, p={field.p}; available: {available}")
    return found[0].matrix()


def explicit_matrices() -> List[ToeplitzLT]:
    """Every fixed matrix named by the constructions (small-prime lists and fixed rational instances)."""
    out = []
    for fid in ('P11', 'P13-1', 'P13-2', 'P13-3', 'P13-4'):
        family = FAMILIES[fid]
        out.extend(family.candidates(PrimeField(family.only_p)))
    out.append(construct(5, PrimeField(11), 'T23-4'))
    out.append(construct(5, PrimeField(7), 'T23-3a'))
    out.append(construct(5, PrimeField(7), 'T23-3b'))
    out.append(construct(6, PrimeField(37), 'T24-5'))
    return out

