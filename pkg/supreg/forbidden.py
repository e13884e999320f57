"""
Forbidden sets S_gamma: the values of a_gamma that make some minor through
a_gamma vanish, for a fixed prefix (a_1, ..., a_{gamma-1}).

Three evaluators live here:

* ``forbidden_set`` works on one (possibly un-normalised) prefix with exact
  numeric determinants and keeps per-value provenance.
* ``forbidden_values_batch`` evaluates the compiled normalised minor table
  over a numpy batch of prefixes; the search engine runs on it.
* ``paper_set`` evaluates the closed-form expressions listed for
  gamma = 3..6 literally. Expression numbers are 1-based and follow the
  printed reading order, so for gamma = 6 expression 13 is
  ``-1 + 4a3 - 3a4 - 3a3^2 + 2a5 + 2a3a4``.
"""

import logging
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from .exceptions import (
    DeadPrefix, DenominatorVanishes, InvalidPrefix, PrefixLengthMismatch,
)
from .prime_field import FieldElement, PrimeField, rational_alias
from .symbolic import linear_minor_table
from .toeplitz import MinorIndex, corner_minors, det_mod, minors_involving_last

logger = logging.getLogger(__name__)

PrefixLike = Sequence[Union[int, FieldElement]]


@dataclass(frozen=True)
class ForbiddenSet:
    gamma: int
    field: PrimeField
    prefix: Tuple[FieldElement, ...]
    values: Tuple[FieldElement, ...]
    provenance: Dict[int, List[MinorIndex]] = dc_field(default_factory=dict, compare=False)
    dead: bool = False
    dead_minors: Tuple[MinorIndex, ...] = ()

    def __len__(self):
        return len(self.values)

    def __contains__(self, value) -> bool:
        return self.field.element(value) in self.values

    def to_dict(self, provenance: bool = False, symbolic: bool = False,
                max_den: int = 64) -> Dict:
        payload = {
            'gamma': self.gamma,
            'p': self.field.p,
            'prefix': [e.value for e in self.prefix],
            'values': [v.value for v in self.values],
            'size': len(self.values),
            'dead': self.dead,
        }
        if not self.dead:
            payload['candidates'] = [c.value for c in extension_candidates(self)]
        if self.dead_minors:
            payload['dead_minors'] = [m.to_dict() for m in self.dead_minors]
        if provenance:
            payload['provenance'] = {
                str(v): [m.to_dict() for m in minors] for v, minors in self.provenance.items()
            }
        if symbolic:
            payload['aliases'] = {str(v.value): rational_alias(v, max_den) for v in self.values}
        return payload


def _as_prefix(prefix: PrefixLike, field: Optional[PrimeField]) -> Tuple[PrimeField, Tuple[FieldElement, ...]]:
    if field is None:
        field = next((e.field for e in prefix if isinstance(e, FieldElement)), None)
        if field is None:
            raise InvalidPrefix("pass `field` when the prefix holds plain integers")
    return field, tuple(field.element(e) for e in prefix)


def forbidden_set(prefix: PrefixLike, gamma: int, field: Optional[PrimeField] = None) -> ForbiddenSet:
    """
    S_gamma for a concrete prefix of length gamma - 1.

    For each minor of L_gamma the determinant is c * a_gamma + d, with
    c = (-1)^(k+1) det(complement) and d its value at a_gamma = 0. A root
    -d/c is forbidden; c = d = 0 marks the prefix dead; c = 0 != d imposes
    nothing.
    """
    field, prefix = _as_prefix(prefix, field)
    if len(prefix) != gamma - 1:
        raise PrefixLengthMismatch(f"gamma={gamma} needs {gamma - 1} prefix entries, got {len(prefix)}")
    if prefix and prefix[0].value == 0:
        raise InvalidPrefix("a_1 must be nonzero")

    p = field.p
    a = [e.value for e in prefix] + [0]
    provenance: Dict[int, List[MinorIndex]] = {}
    dead_minors = []
    for idx in minors_involving_last(gamma):
        k = idx.size
        if k == 1:
            c, d = 1, 0
        else:
            comp = [[a[i - j] if i >= j else 0 for j in idx.cols[1:]] for i in idx.rows[:-1]]
            c = det_mod(comp, p) * (1 if k % 2 else -1) % p
            full = [[a[i - j] if i >= j else 0 for j in idx.cols] for i in idx.rows]
            d = det_mod(full, p)
        if c == 0:
            if d == 0:
                dead_minors.append(idx)
            continue
        root = (-d * pow(c, -1, p)) % p
        provenance.setdefault(root, []).append(idx)

    values = tuple(field.element(v) for v in sorted(provenance))
    if dead_minors:
        logger.debug(f"prefix {[e.value for e in prefix]} over F_{p} is dead at {dead_minors[0]}")
    return ForbiddenSet(
        gamma=gamma, field=field, prefix=prefix, values=values,
        provenance=provenance, dead=bool(dead_minors), dead_minors=tuple(dead_minors),
    )


def extension_candidates(fs: ForbiddenSet) -> List[FieldElement]:
    """F_p minus S_gamma, ascending."""
    if fs.dead:
        raise DeadPrefix(
            f"prefix {[e.value for e in fs.prefix]} is dead: {fs.dead_minors[0]} vanishes for every a_{fs.gamma}"
        )
    taken = {v.value for v in fs.values}
    return [fs.field.element(v) for v in range(fs.field.p) if v not in taken]


def forbidden_by_substitution(prefix: PrefixLike, gamma: int,
                              field: Optional[PrimeField] = None) -> List[FieldElement]:
    """Brute force: every v for which A_gamma(prefix, v) has a zero minor through (gamma, 1)."""
    field, prefix = _as_prefix(prefix, field)
    p = field.p
    corner = list(corner_minors(gamma))
    bad = []
    for v in range(p):
        a = [e.value for e in prefix] + [v]
        for idx in corner:
            sub = [[a[i - j] if i >= j else 0 for j in idx.cols] for i in idx.rows]
            if det_mod(sub, p) == 0:
                bad.append(field.element(v))
                break
    return bad


# Vectorised evaluation over batches of normalised prefixes

@dataclass
class CompiledTable:
    """The normalised linear-minor table of L_gamma as dense integer arrays."""
    gamma: int
    exponents: np.ndarray       # (n_mono, gamma - 3) exponents of x_3 .. x_{gamma-1}
    c_coeffs: np.ndarray        # (n_linear, n_mono)
    d_coeffs: np.ndarray        # (n_linear, n_mono)
    provenance: List[List[MinorIndex]]

    @property
    def n_linear(self) -> int:
        return self.c_coeffs.shape[0]


@lru_cache(maxsize=None)
def compiled_table(gamma: int) -> CompiledTable:
    table = linear_minor_table(gamma)
    free = slice(2, gamma - 1)
    monomials: Dict[Tuple[int, ...], int] = {}
    for entry in table.entries:
        for poly in (entry.c, entry.d):
            for exps in poly.terms:
                monomials.setdefault(exps[free], len(monomials))
    if not monomials:
        monomials[()] = 0

    c_coeffs = np.zeros((len(table), len(monomials)), dtype=np.int64)
    d_coeffs = np.zeros_like(c_coeffs)
    for row, entry in enumerate(table.entries):
        for target, poly in ((c_coeffs, entry.c), (d_coeffs, entry.d)):
            for exps, coef in poly.terms.items():
                target[row, monomials[exps[free]]] = coef

    exponents = np.array(list(monomials), dtype=np.int64).reshape(len(monomials), max(gamma - 3, 0))
    return CompiledTable(
        gamma=gamma, exponents=exponents, c_coeffs=c_coeffs, d_coeffs=d_coeffs,
        provenance=[entry.minors for entry in table.entries],
    )


@lru_cache(maxsize=32)
def inverse_table(p: int) -> np.ndarray:
    """inv[x] = x^-1 mod p, with inv[0] = 0."""
    inv = [0] * p
    if p > 1:
        inv[1] = 1
    for x in range(2, p):
        inv[x] = (p - (p // x) * inv[p % x] % p) % p
    return np.array(inv, dtype=np.int64)


def _monomial_values(heads: np.ndarray, exponents: np.ndarray, p: int) -> np.ndarray:
    n, m = heads.shape
    out = np.ones((n, exponents.shape[0]), dtype=np.int64)
    if m == 0 or exponents.size == 0:
        return out
    max_e = int(exponents.max())
    powers = np.ones((max_e + 1, n, m), dtype=np.int64)
    for e in range(1, max_e + 1):
        powers[e] = powers[e - 1] * heads % p
    for v in range(m):
        out = out * powers[exponents[:, v], :, v].T % p
    return out


def _apply(mono: np.ndarray, coeffs: np.ndarray, p: int) -> np.ndarray:
    reduced = coeffs % p
    n_mono = max(coeffs.shape[1], 1)
    if p * p * n_mono < 2 ** 62:
        return mono @ reduced.T % p
    acc = np.zeros((mono.shape[0], coeffs.shape[0]), dtype=np.int64)
    for j in range(coeffs.shape[1]):
        acc = (acc + mono[:, j:j + 1] * reduced[:, j][None, :]) % p
    return acc


def forbidden_values_batch(prefixes: np.ndarray, gamma: int, p: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Evaluate S_gamma for many normalised prefixes at once.

    Args:
        prefixes: (n, gamma - 1) array of residues with a_1 = a_2 = 1
        gamma: order of the extended matrix (>= 3)
        p: the prime

    Returns:
        (forbidden, dead): an (n, p) boolean mask of forbidden a_gamma values
        and an (n,) boolean array flagging dead prefixes
    """
    prefixes = np.asarray(prefixes, dtype=np.int64)
    if prefixes.ndim != 2 or prefixes.shape[1] != gamma - 1:
        raise PrefixLengthMismatch(f"expected shape (n, {gamma - 1}), got {prefixes.shape}")
    if prefixes.shape[0] and not (prefixes[:, :2] == 1).all():
        raise InvalidPrefix("batched evaluation needs normalised prefixes (a_1 = a_2 = 1)")

    table = compiled_table(gamma)
    heads = prefixes[:, 2:] % p
    mono = _monomial_values(heads, table.exponents, p)
    c = _apply(mono, table.c_coeffs, p)
    d = _apply(mono, table.d_coeffs, p)

    live = c != 0
    dead = ((~live) & (d == 0)).any(axis=1)
    roots = (p - d) % p * inverse_table(p)[c] % p

    forbidden = np.zeros((prefixes.shape[0], p), dtype=bool)
    rows, cols = np.nonzero(live)
    forbidden[rows, roots[rows, cols]] = True
    return forbidden, dead


# Closed-form S-sets, written in a_3, a_4, a_5

Expression = Tuple[str, Callable, Optional[Callable]]

PAPER_EXPRESSIONS: Dict[int, List[Expression]] = {
    3: [
        ('0', lambda a3, a4, a5: 0, None),
        ('1', lambda a3, a4, a5: 1, None),
    ],
    4: [
        ('0', lambda a3, a4, a5: 0, None),
        ('a3', lambda a3, a4, a5: a3, None),
        ('a3^2', lambda a3, a4, a5: a3 * a3, None),
        ('2a3-1', lambda a3, a4, a5: 2 * a3 - 1, None),
    ],
    5: [
        ('0', lambda a3, a4, a5: 0, None),
        ('a4', lambda a3, a4, a5: a4, None),
        ('a3a4', lambda a3, a4, a5: a3 * a4, None),
        ('a3^2', lambda a3, a4, a5: a3 * a3, None),
        ('a4^2/a3', lambda a3, a4, a5: a4 * a4, lambda a3, a4, a5: a3),
        ('a3^2-a3+a4', lambda a3, a4, a5: a3 * a3 - a3 + a4, None),
        ('-a3^2+a3a4+a4', lambda a3, a4, a5: -a3 * a3 + a3 * a4 + a4, None),
        ('2a4-a3', lambda a3, a4, a5: 2 * a4 - a3, None),
        ('(a3^3-2a3a4+a4^2)/(a3-1)',
         lambda a3, a4, a5: a3 ** 3 - 2 * a3 * a4 + a4 * a4, lambda a3, a4, a5: a3 - 1),
        ('a3^2-3a3+2a4+1', lambda a3, a4, a5: a3 * a3 - 3 * a3 + 2 * a4 + 1, None),
    ],
    6: [
        ('0', lambda a3, a4, a5: 0, None),
        ('a5', lambda a3, a4, a5: a5, None),
        ('a3a4', lambda a3, a4, a5: a3 * a4, None),
        ('a4^2', lambda a3, a4, a5: a4 * a4, None),
        ('a5^2/a4', lambda a3, a4, a5: a5 * a5, lambda a3, a4, a5: a4),
        ('(a5^2-2a3a4a5+a4^3)/(a4-a3^2)',
         lambda a3, a4, a5: a5 * a5 - 2 * a3 * a4 * a5 + a4 ** 3,
         lambda a3, a4, a5: a4 - a3 * a3),
        ('(a3a5-a4^2+a4a5)/a3',
         lambda a3, a4, a5: a3 * a5 - a4 * a4 + a4 * a5, lambda a3, a4, a5: a3),
        ('a5-a3a4+a4^2', lambda a3, a4, a5: a5 - a3 * a4 + a4 * a4, None),
        ('a5-a3a4+a3a5', lambda a3, a4, a5: a5 - a3 * a4 + a3 * a5, None),
        ('(a4a5+a3^2a5-a3a4^2-a5^2)/(a3-a4)',
         lambda a3, a4, a5: a4 * a5 + a3 * a3 * a5 - a3 * a4 * a4 - a5 * a5,
         lambda a3, a4, a5: a3 - a4),
        ('(a3a5+a4^2-a3^2a4-a4a5)/(1-a3)',
         lambda a3, a4, a5: a3 * a5 + a4 * a4 - a3 * a3 * a4 - a4 * a5,
         lambda a3, a4, a5: 1 - a3),
        ('(a5-2a3a4+a3^3+2a4^2-a3^2a4-a4a5)/(1-a3)',
         lambda a3, a4, a5: a5 - 2 * a3 * a4 + a3 ** 3 + 2 * a4 * a4 - a3 * a3 * a4 - a4 * a5,
         lambda a3, a4, a5: 1 - a3),
        ('-1+4a3-3a4-3a3^2+2a5+2a3a4',
         lambda a3, a4, a5: -1 + 4 * a3 - 3 * a4 - 3 * a3 * a3 + 2 * a5 + 2 * a3 * a4, None),
        ('a3a5', lambda a3, a4, a5: a3 * a5, None),
        ('a3(2a5-a3a4)', lambda a3, a4, a5: a3 * (2 * a5 - a3 * a4), None),
        ('a3(a4-a3^2+a5)', lambda a3, a4, a5: a3 * (a4 - a3 * a3 + a5), None),
        ('a4a5/a3', lambda a3, a4, a5: a4 * a5, lambda a3, a4, a5: a3),
        ('-(a4-a3^2-a5+a3^3-a3a5)',
         lambda a3, a4, a5: -(a4 - a3 * a3 - a5 + a3 ** 3 - a3 * a5), None),
        ('-(a4-a3^2-2a5+2a3a4-a4^2)',
         lambda a3, a4, a5: -(a4 - a3 * a3 - 2 * a5 + 2 * a3 * a4 - a4 * a4), None),
        ('-a3^2+2a3a4', lambda a3, a4, a5: -a3 * a3 + 2 * a3 * a4, None),
        ('-a4+2a5', lambda a3, a4, a5: -a4 + 2 * a5, None),
        ('-a3^2+a5+a3a4', lambda a3, a4, a5: -a3 * a3 + a5 + a3 * a4, None),
        ('-a4+a5+a3a4', lambda a3, a4, a5: -a4 + a5 + a3 * a4, None),
        ('a3-2a4-a3^2+2a5+a3a4',
         lambda a3, a4, a5: a3 - 2 * a4 - a3 * a3 + 2 * a5 + a3 * a4, None),
        ('a3-a4-2a3^2+a5+2a3a4',
         lambda a3, a4, a5: a3 - a4 - 2 * a3 * a3 + a5 + 2 * a3 * a4, None),
        ('(2a3a5+a4^2-3a3^2a4+a3^4-2a4a5-2a3^2a5+2a3a4^2+a5^2)/(1-2a3+a4)',
         lambda a3, a4, a5: (2 * a3 * a5 + a4 * a4 - 3 * a3 * a3 * a4 + a3 ** 4 - 2 * a4 * a5
                             - 2 * a3 * a3 * a5 + 2 * a3 * a4 * a4 + a5 * a5),
         lambda a3, a4, a5: 1 - 2 * a3 + a4),
    ],
}


def paper_expressions(gamma: int, prefix: PrefixLike,
                      field: Optional[PrimeField] = None) -> List[Tuple[int, str, FieldElement]]:
    """
    Evaluate the closed-form S_gamma expressions in order.

    `prefix` is either the full normalised prefix (1, 1, a_3, ..., a_{gamma-1})
    or only (a_3, ..., a_{gamma-1}).

    Returns:
        (1-based expression number, expression text, value) triples
    """
    if gamma not in PAPER_EXPRESSIONS:
        raise PrefixLengthMismatch(f"closed forms exist for gamma in 3..6, not {gamma}")
    field, prefix = _as_prefix(prefix, field)
    if len(prefix) == gamma - 1:
        if prefix[0].value != 1 or prefix[1].value != 1:
            raise InvalidPrefix("closed forms need a_1 = a_2 = 1")
        prefix = prefix[2:]
    elif len(prefix) != gamma - 3:
        raise PrefixLengthMismatch(
            f"gamma={gamma} needs {gamma - 3} free entries or a normalised prefix of {gamma - 1}"
        )

    args = list(prefix) + [field.zero] * (3 - len(prefix))
    evaluated = []
    for number, (text, numerator, denominator) in enumerate(PAPER_EXPRESSIONS[gamma], 1):
        value = field.element(numerator(*args))
        if denominator is not None:
            den = field.element(denominator(*args))
            if den.value == 0:
                raise DenominatorVanishes(gamma, number, text)
            value = value / den
        evaluated.append((number, text, value))
    return evaluated


def paper_set(gamma: int, prefix: PrefixLike, field: Optional[PrimeField] = None) -> Set[FieldElement]:
    """The closed-form S_gamma as a set of field elements."""
    return {value for _, _, value in paper_expressions(gamma, prefix, field)}
