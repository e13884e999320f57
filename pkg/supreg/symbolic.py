"""
Exact integer polynomials in the indeterminates x_1, ..., x_gamma.

Minors of the indeterminate Toeplitz matrix X_gamma are expanded here,
the sets L_gamma / L'_gamma are counted, and the linear minors are
compiled into (c, d) pairs with det = c * x_gamma + d after normalising
x_1 = x_2 = 1.

Canonical text form orders terms by total degree (highest first) and then
in reverse lexicographic order, e.g. ``x3^2 - x2*x4``.
"""

import logging
import time
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exceptions import CensusMismatch, DegreeTooHigh, MatrixIndexError
from .toeplitz import MinorIndex, minors_involving_last

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]

# Distinct-polynomial counts that differ from N_gamma
KNOWN_DISTINCT = {8: 231, 10: 2489}

MAX_SUPPORTED_GAMMA = 10


class MultiPoly:
    """Sparse polynomial: exponent vector (e_1, ..., e_n) -> nonzero integer coefficient."""

    __slots__ = ('nvars', 'terms', '_key')

    def __init__(self, nvars: int, terms: Optional[Mapping[Exponents, int]] = None):
        self.nvars = nvars
        cleaned = {}
        for exps, coef in (terms or {}).items():
            if len(exps) != nvars:
                raise MatrixIndexError(f"exponent vector {exps} does not have {nvars} entries")
            if coef:
                cleaned[tuple(exps)] = int(coef)
        self.terms = dict(sorted(cleaned.items(), key=lambda kv: _term_order(kv[0])))
        self._key = None

    @classmethod
    def constant(cls, nvars: int, value: int) -> 'MultiPoly':
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int) -> 'MultiPoly':
        """x_index (1-based)."""
        exps = [0] * nvars
        exps[index - 1] = 1
        return cls(nvars, {tuple(exps): 1})

    @classmethod
    def from_monomials(cls, nvars: int, monomials: Mapping[Tuple[int, ...], int]) -> 'MultiPoly':
        """Build from monomials written as sorted tuples of 1-based variable indices."""
        terms = {}
        for mono, coef in monomials.items():
            exps = [0] * nvars
            for v in mono:
                exps[v - 1] += 1
            terms[tuple(exps)] = coef
        return cls(nvars, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree_in(self, var: int) -> int:
        return max((e[var - 1] for e in self.terms), default=0)

    def canonical_key(self) -> Tuple:
        if self._key is None:
            self._key = (self.nvars, tuple(self.terms.items()))
        return self._key

    def leading_coefficient(self) -> int:
        return next(iter(self.terms.values()), 0)

    def _combine(self, other: 'MultiPoly', sign: int) -> 'MultiPoly':
        if self.nvars != other.nvars:
            raise MatrixIndexError("polynomials over different variable counts")
        out = dict(self.terms)
        for exps, coef in other.terms.items():
            out[exps] = out.get(exps, 0) + sign * coef
        return MultiPoly(self.nvars, out)

    def __add__(self, other: 'MultiPoly') -> 'MultiPoly':
        return self._combine(other, 1)

    def __sub__(self, other: 'MultiPoly') -> 'MultiPoly':
        return self._combine(other, -1)

    def __neg__(self) -> 'MultiPoly':
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> 'MultiPoly':
        if isinstance(other, int):
            return MultiPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        if self.nvars != other.nvars:
            raise MatrixIndexError("polynomials over different variable counts")
        out: Dict[Exponents, int] = defaultdict(int)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def substitute(self, assignment: Mapping[int, int]) -> 'MultiPoly':
        """Replace x_v by an integer constant for every v in `assignment`."""
        out: Dict[Exponents, int] = defaultdict(int)
        for exps, coef in self.terms.items():
            new = list(exps)
            for v, value in assignment.items():
                e = new[v - 1]
                if e:
                    coef *= value ** e
                    new[v - 1] = 0
            out[tuple(new)] += coef
        return MultiPoly(self.nvars, out)

    def evaluate(self, values: Sequence[int], p: Optional[int] = None) -> int:
        """Value at x = values (1-based order), reduced mod p when given."""
        total = 0
        for exps, coef in self.terms.items():
            term = coef
            for v, e in enumerate(exps):
                if e:
                    term *= pow(values[v], e, p) if p else values[v] ** e
            total += term
        return total % p if p else total

    def __str__(self):
        if not self.terms:
            return '0'
        pieces = []
        for exps, coef in self.terms.items():
            factors = [f"x{v + 1}" + (f"^{e}" if e > 1 else '') for v, e in enumerate(exps) if e]
            body = '*'.join(factors)
            magnitude = abs(coef)
            if not body:
                text = str(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{magnitude}*{body}"
            if not pieces:
                pieces.append(('-' if coef < 0 else '') + text)
            else:
                pieces.append(('- ' if coef < 0 else '+ ') + text)
        return ' '.join(pieces)

    def __repr__(self):
        return f"MultiPoly({self})"


def _term_order(exps: Exponents) -> Tuple:
    return (-sum(exps), tuple(reversed(exps)))


@dataclass
class CensusResult:
    """Counts of the minors of X_gamma that are linear in x_gamma."""
    gamma: int
    count_L: int
    count_Lsym: int
    n_gamma: int
    distinct: int
    distinct_raw: int = 0
    distinct_up_to_sign: int = 0
    n_gamma_closed_form: int = 0
    expected_distinct: int = 0
    matching_variant: Optional[str] = None
    elapsed: float = 0.0

    def to_dict(self) -> Dict:
        return {
            'gamma': self.gamma,
            'count_L': self.count_L,
            'count_Lsym': self.count_Lsym,
            'n_gamma': self.n_gamma,
            'distinct': self.distinct,
            'distinct_raw': self.distinct_raw,
            'distinct_up_to_sign': self.distinct_up_to_sign,
            'expected_distinct': self.expected_distinct,
            'matching_variant': self.matching_variant,
            'elapsed_seconds': round(self.elapsed, 3),
        }


@lru_cache(maxsize=None)
def _det_monomials(rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Dict[Tuple[int, ...], int]:
    """
    Determinant of rows x cols of X as {sorted variable indices: coefficient}.

    Cofactor expansion along the first column. Keys are translated so that
    cols[0] = 1, which is exact because X is Toeplitz.
    """
    shift = cols[0] - 1
    if shift:
        return _det_monomials(tuple(r - shift for r in rows), tuple(c - shift for c in cols))
    if any(c > r for r, c in zip(rows, cols)):
        return {}
    if len(rows) == 1:
        return {(rows[0],): 1}

    result: Dict[Tuple[int, ...], int] = defaultdict(int)
    rest_cols = cols[1:]
    for pos, r in enumerate(rows):
        sub = _det_monomials(rows[:pos] + rows[pos + 1:], rest_cols)
        if not sub:
            continue
        sign = -1 if pos % 2 else 1
        for mono, coef in sub.items():
            result[tuple(sorted(mono + (r,)))] += sign * coef
    return {m: c for m, c in result.items() if c}


def sym_det(idx: MinorIndex, gamma: int) -> MultiPoly:
    """Determinant polynomial of the selected submatrix of X_gamma."""
    idx.check_bounds(gamma)
    return MultiPoly.from_monomials(gamma, _det_monomials(idx.rows, idx.cols))


def substitute_ones(poly: MultiPoly) -> MultiPoly:
    """Normalise x_1 = x_2 = 1."""
    assignment = {v: 1 for v in (1, 2) if v <= poly.nvars}
    return poly.substitute(assignment)


def linear_split(poly: MultiPoly, var: int) -> Tuple[MultiPoly, MultiPoly]:
    """Write poly = c * x_var + d with c and d free of x_var."""
    if poly.degree_in(var) > 1:
        raise DegreeTooHigh(f"{poly} has degree {poly.degree_in(var)} in x{var}")
    c_terms, d_terms = {}, {}
    for exps, coef in poly.terms.items():
        if exps[var - 1]:
            reduced = list(exps)
            reduced[var - 1] = 0
            c_terms[tuple(reduced)] = coef
        else:
            d_terms[exps] = coef
    return MultiPoly(poly.nvars, c_terms), MultiPoly(poly.nvars, d_terms)


def is_antidiag_symmetric(idx: MinorIndex, gamma: int) -> bool:
    """True iff the submatrix pattern equals its reflection in the antidiagonal."""
    idx.check_bounds(gamma)
    k = idx.size
    rows, cols = idx.rows, idx.cols
    return all(
        rows[l] - cols[m] == rows[k - 1 - m] - cols[k - 1 - l]
        for l in range(k) for m in range(k)
    )


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def n_gamma_closed_form(gamma: int) -> int:
    """N_gamma = (Catalan(gamma - 1) + C(gamma - 1, floor((gamma - 1) / 2))) / 2."""
    return (catalan(gamma - 1) + comb(gamma - 1, (gamma - 1) // 2)) // 2


def census(gamma: int) -> CensusResult:
    """Enumerate L_gamma, L'_gamma and count distinct minor polynomials."""
    if gamma < 1:
        raise MatrixIndexError("gamma must be at least 1")
    if gamma > MAX_SUPPORTED_GAMMA:
        logger.warning(f"census for gamma={gamma} is unsupported and may take very long")

    start = time.time()
    members = list(minors_involving_last(gamma))
    count_L = len(members)
    count_Lsym = sum(1 for idx in members if is_antidiag_symmetric(idx, gamma))
    n_gamma = (count_L + count_Lsym) // 2
    closed = n_gamma_closed_form(gamma)
    if (count_L + count_Lsym) % 2 or n_gamma != closed:
        raise CensusMismatch(
            f"census gamma={gamma}: |L|={count_L}, |L'|={count_Lsym} disagree with N={closed}"
        )

    raw, normalized, up_to_sign = set(), set(), set()
    for done, idx in enumerate(members, 1):
        poly = sym_det(idx, gamma)
        raw.add(poly)
        unit = substitute_ones(poly)
        normalized.add(unit)
        up_to_sign.add(unit if unit.leading_coefficient() > 0 else -unit)
        if done % 1000 == 0:
            logger.info(f"census gamma={gamma}: expanded {done}/{count_L} minors")

    expected = KNOWN_DISTINCT.get(gamma, n_gamma)
    variants = (('raw', len(raw)), ('normalized', len(normalized)), ('up_to_sign', len(up_to_sign)))
    matching = next((name for name, count in variants if count == expected), None)
    if matching is None:
        logger.warning(f"census gamma={gamma}: no distinct-count variant equals {expected}")

    result = CensusResult(
        gamma=gamma,
        count_L=count_L,
        count_Lsym=count_Lsym,
        n_gamma=n_gamma,
        distinct=len(normalized),
        distinct_raw=len(raw),
        distinct_up_to_sign=len(up_to_sign),
        n_gamma_closed_form=closed,
        expected_distinct=expected,
        matching_variant=matching,
        elapsed=time.time() - start,
    )
    logger.info(f"census gamma={gamma}: {result.to_dict()}")
    return result


@dataclass
class LinearMinor:
    """One distinct normalised minor c * x_gamma + d, with the minors producing it."""
    c: MultiPoly
    d: MultiPoly
    minors: List[MinorIndex] = field(default_factory=list)


@dataclass
class LinearMinorTable:
    gamma: int
    entries: List[LinearMinor]

    def __len__(self):
        return len(self.entries)

    def variables(self) -> List[int]:
        """Free variables of the table (x_3 .. x_{gamma-1})."""
        return list(range(3, self.gamma))


@lru_cache(maxsize=None)
def linear_minor_table(gamma: int) -> LinearMinorTable:
    """
    Deduplicated (c, d) pairs of L_gamma after x_1 = x_2 = 1.

    Pairs equal up to a common sign give the same root and share an entry.
    """
    if gamma < 3:
        raise MatrixIndexError("linear minor tables start at gamma = 3")
    grouped: Dict[Tuple, LinearMinor] = {}
    for idx in minors_involving_last(gamma):
        c, d = linear_split(substitute_ones(sym_det(idx, gamma)), gamma)
        if c.leading_coefficient() < 0:
            c, d = -c, -d
        key = (c.canonical_key(), d.canonical_key())
        if key not in grouped:
            grouped[key] = LinearMinor(c, d)
        grouped[key].minors.append(idx)
    logger.debug(f"linear minor table gamma={gamma}: {len(grouped)} distinct pairs")
    return LinearMinorTable(gamma, list(grouped.values()))


def distinct_polynomials(gamma: int, normalized: bool = True) -> List[MultiPoly]:
    """Distinct minor polynomials of L_gamma in canonical order of first appearance."""
    seen: Dict[MultiPoly, None] = {}
    for idx in minors_involving_last(gamma):
        poly = sym_det(idx, gamma)
        seen.setdefault(substitute_ones(poly) if normalized else poly, None)
    return list(seen)


def format_polys(polys: Iterable[MultiPoly]) -> List[str]:
    return [str(p) for p in polys]
