"""
Lower-triangular Toeplitz matrices over F_p and their minors.

A matrix A_gamma is determined by its first column (a_1, ..., a_gamma);
entry (i, j) is a_{i-j+1} on and below the diagonal and 0 above it
(indices are 1-based throughout). A minor is non-trivial when at least one
Leibniz term avoids the zero triangle, which for this support is the same
as j_l <= i_l for every position l of the sorted index lists.
"""

import logging
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .exceptions import MatrixIndexError, ZeroScalar
from .prime_field import FieldElement, PrimeField, parse_rational

logger = logging.getLogger(__name__)

EntryLike = Union[int, str, FieldElement]


@dataclass(frozen=True)
class MinorIndex:
    """Sorted row and column index lists selecting a square submatrix."""
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]

    def __post_init__(self):
        rows, cols = tuple(self.rows), tuple(self.cols)
        object.__setattr__(self, 'rows', rows)
        object.__setattr__(self, 'cols', cols)
        if not rows or len(rows) != len(cols):
            raise MatrixIndexError(f"rows {rows} and cols {cols} must be non-empty and equal length")
        for name, seq in (('rows', rows), ('cols', cols)):
            if seq[0] < 1 or any(a >= b for a, b in zip(seq, seq[1:])):
                raise MatrixIndexError(f"{name} {seq} must be strictly increasing and >= 1")

    @property
    def size(self) -> int:
        return len(self.rows)

    def check_bounds(self, gamma: int):
        if self.rows[-1] > gamma or self.cols[-1] > gamma:
            raise MatrixIndexError(f"{self} does not fit a {gamma}x{gamma} matrix")

    def complement(self) -> Optional['MinorIndex']:
        """Rows without the last one and columns without the first one."""
        if self.size == 1:
            return None
        return MinorIndex(self.rows[:-1], self.cols[1:])

    def to_dict(self) -> Dict:
        return {'rows': list(self.rows), 'cols': list(self.cols)}

    def __str__(self):
        return f"rows{list(self.rows)}xcols{list(self.cols)}"


@dataclass(frozen=True)
class ToeplitzLT:
    """The gamma x gamma lower-triangular Toeplitz matrix with first column `entries`."""
    field: PrimeField
    entries: Tuple[FieldElement, ...]

    def __post_init__(self):
        entries = tuple(self.field.element(e) for e in self.entries)
        if not entries:
            raise MatrixIndexError("a Toeplitz matrix needs at least one entry")
        object.__setattr__(self, 'entries', entries)

    @property
    def gamma(self) -> int:
        return len(self.entries)

    @property
    def p(self) -> int:
        return self.field.p

    @cached_property
    def values(self) -> Tuple[int, ...]:
        return tuple(e.value for e in self.entries)

    def leading(self, k: int) -> 'ToeplitzLT':
        """The leading principal k x k block, itself an LT Toeplitz matrix."""
        return ToeplitzLT(self.field, self.entries[:k])

    def rows(self) -> List[List[int]]:
        g, a = self.gamma, self.values
        return [[a[i - j] if i >= j else 0 for j in range(g)] for i in range(g)]

    def normalized(self) -> 'ToeplitzLT':
        """Equivalent matrix with a_1 = a_2 = 1 (needs a_1, a_2 nonzero)."""
        a1 = self.entries[0]
        unit = ToeplitzLT(self.field, tuple(e / a1 for e in self.entries))
        if self.gamma == 1:
            return unit
        return scale(unit, unit.field.one / unit.entries[1])

    def to_dict(self) -> Dict:
        return {'p': self.p, 'gamma': self.gamma, 'entries': list(self.values)}

    def __str__(self):
        return f"A_{self.gamma}({', '.join(map(str, self.values))}) over F_{self.p}"


@dataclass
class SuperregularityReport:
    """Outcome of a superregularity check."""
    verdict: bool
    checked_minors: int
    first_failure: Optional[MinorIndex] = None
    failure_determinant: Optional[int] = None
    method: str = 'full'
    stats: Dict = dc_field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            'superregular': self.verdict,
            'checked_minors': self.checked_minors,
            'method': self.method,
            'first_failure': (
                dict(self.first_failure.to_dict(), determinant=self.failure_determinant)
                if self.first_failure else None
            ),
        }


def from_first_column(field: PrimeField, entries: Sequence[EntryLike]) -> ToeplitzLT:
    """Build A_gamma from ints, rational literals or field elements."""
    converted = []
    for e in entries:
        if isinstance(e, str):
            converted.append(parse_rational(e, field))
        else:
            converted.append(field.element(e))
    return ToeplitzLT(field, tuple(converted))


def entry(m: ToeplitzLT, i: int, j: int) -> FieldElement:
    """Entry (i, j), 1-based: a_{i-j+1} on or below the diagonal, else 0."""
    if not (1 <= i <= m.gamma and 1 <= j <= m.gamma):
        raise MatrixIndexError(f"({i}, {j}) outside a {m.gamma}x{m.gamma} matrix")
    if i < j:
        return m.field.zero
    return m.entries[i - j]


def is_nontrivial(idx: MinorIndex, gamma: int) -> bool:
    """True iff some Leibniz term of the minor avoids the zero triangle."""
    idx.check_bounds(gamma)
    return all(j <= i for i, j in zip(idx.rows, idx.cols))


def has_perfect_matching(idx: MinorIndex) -> bool:
    """Bipartite-matching oracle: rows matched to columns through support positions."""
    k = idx.size
    match_of_col = [-1] * k

    def augment(r: int, seen: List[bool]) -> bool:
        for c in range(k):
            if idx.rows[r] >= idx.cols[c] and not seen[c]:
                seen[c] = True
                if match_of_col[c] < 0 or augment(match_of_col[c], seen):
                    match_of_col[c] = r
                    return True
        return False

    return all(augment(r, [False] * k) for r in range(k))


def det_mod(matrix: List[List[int]], p: int) -> int:
    """Determinant of an integer matrix mod p by Gaussian elimination."""
    a = [row[:] for row in matrix]
    n = len(a)
    result = 1
    for c in range(n):
        pivot = next((r for r in range(c, n) if a[r][c] % p), None)
        if pivot is None:
            return 0
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            result = -result
        pivot_value = a[c][c] % p
        result = result * pivot_value % p
        pivot_inv = pow(pivot_value, -1, p)
        row_c = a[c]
        for r in range(c + 1, n):
            factor = a[r][c] % p
            if factor:
                factor = factor * pivot_inv % p
                row_r = a[r]
                for k in range(c, n):
                    row_r[k] = (row_r[k] - factor * row_c[k]) % p
    return result % p


def submatrix(m: ToeplitzLT, idx: MinorIndex) -> List[List[int]]:
    a = m.values
    return [[a[i - j] if i >= j else 0 for j in idx.cols] for i in idx.rows]


def det(m: ToeplitzLT, idx: MinorIndex) -> FieldElement:
    """Exact determinant of the selected submatrix over F_p."""
    idx.check_bounds(m.gamma)
    return m.field.element(det_mod(submatrix(m, idx), m.p))


def _dominated_columns(rows: Tuple[int, ...], lowest: int = 1) -> Iterator[Tuple[int, ...]]:
    """Increasing column tuples with cols[l] <= rows[l], in lexicographic order."""
    if not rows:
        yield ()
        return
    for j in range(lowest, rows[0] + 1):
        for rest in _dominated_columns(rows[1:], j + 1):
            yield (j,) + rest


@lru_cache(maxsize=None)
def _nontrivial_minors(gamma: int) -> Tuple[MinorIndex, ...]:
    found = []
    for k in range(1, gamma + 1):
        for rows in combinations(range(1, gamma + 1), k):
            for cols in _dominated_columns(rows):
                found.append(MinorIndex(rows, cols))
    return tuple(found)


def nontrivial_minors(gamma: int) -> Iterator[MinorIndex]:
    """Every non-trivial minor index of a gamma x gamma matrix, by size then lexicographically."""
    return iter(_nontrivial_minors(gamma))


@lru_cache(maxsize=None)
def _minors_involving_last(gamma: int) -> Tuple[MinorIndex, ...]:
    found = []
    for k in range(1, gamma + 1):
        for head in combinations(range(1, gamma), k - 1):
            # complement is rows `head` x cols `tail`, tail drawn from 2..gamma
            for tail in _dominated_columns(head, 2):
                found.append(MinorIndex(head + (gamma,), (1,) + tail))
    return tuple(found)


def minors_involving_last(gamma: int) -> Iterator[MinorIndex]:
    """
    Minors whose determinant is linear in a_gamma with a nonzero coefficient.

    These contain row gamma and column 1 and have a non-trivial complement;
    there are Catalan(gamma - 1) of them.
    """
    return iter(_minors_involving_last(gamma))


@lru_cache(maxsize=None)
def _corner_minors(gamma: int) -> Tuple[MinorIndex, ...]:
    return tuple(
        idx for idx in _nontrivial_minors(gamma)
        if idx.rows[-1] == gamma and idx.cols[0] == 1
    )


def corner_minors(gamma: int) -> Iterator[MinorIndex]:
    """Non-trivial minors containing position (gamma, 1)."""
    return iter(_corner_minors(gamma))


def _first_zero(m: ToeplitzLT, indices) -> Tuple[int, Optional[MinorIndex]]:
    checked = 0
    for idx in indices:
        checked += 1
        if det_mod(submatrix(m, idx), m.p) == 0:
            return checked, idx
    return checked, None


def is_superregular(m: ToeplitzLT) -> SuperregularityReport:
    """Check every non-trivial minor, reporting the first vanishing one."""
    checked, failure = _first_zero(m, nontrivial_minors(m.gamma))
    if failure is not None:
        logger.debug(f"{m}: minor {failure} vanishes")
    return SuperregularityReport(
        verdict=failure is None,
        checked_minors=checked,
        first_failure=failure,
        failure_determinant=0 if failure is not None else None,
        method='full',
    )


def is_superregular_incremental(m: ToeplitzLT) -> SuperregularityReport:
    """
    Superregularity via leading blocks: for k = 1..gamma only the minors of
    A_k through (k, 1) are new, every other non-trivial minor of A_k being a
    minor of A_{k-1} up to translation.
    """
    total = 0
    for k in range(1, m.gamma + 1):
        checked, failure = _first_zero(m, corner_minors(k))
        total += checked
        if failure is not None:
            logger.debug(f"{m}: minor {failure} of the leading {k}x{k} block vanishes")
            return SuperregularityReport(
                verdict=False, checked_minors=total, first_failure=failure,
                failure_determinant=0, method='incremental', stats={'depth': k},
            )
    return SuperregularityReport(verdict=True, checked_minors=total, method='incremental')


def scale(m: ToeplitzLT, alpha: Union[int, FieldElement]) -> ToeplitzLT:
    """alpha (x) A: first column (a_1, alpha a_2, ..., alpha^{gamma-1} a_gamma)."""
    alpha = m.field.element(alpha)
    if alpha.value == 0:
        raise ZeroScalar("diagonal scaling needs a nonzero scalar")
    return ToeplitzLT(m.field, tuple(a * alpha ** i for i, a in enumerate(m.entries)))


def column_weight_check(m: ToeplitzLT, coeffs: Mapping[int, Union[int, FieldElement]]) -> bool:
    """
    Weight bound for a combination of columns (0-based, b_0 ... b_{n-1}).

    Returns True iff wt(sum c_i b_i) >= (n - i_1) - N + 1 where i_1 is the
    first selected column and N the number of selected columns.
    """
    n, p = m.gamma, m.p
    selected = sorted((int(i), int(c) % p) for i, c in coeffs.items())
    if not selected:
        raise MatrixIndexError("select at least one column")
    if any(not 0 <= i < n for i, _ in selected):
        raise MatrixIndexError(f"column indices must lie in [0, {n - 1}]")
    if any(c == 0 for _, c in selected):
        raise MatrixIndexError("coefficients must be nonzero")

    a = m.values
    weight = 0
    for r in range(n):
        s = sum(c * a[r - i] for i, c in selected if r >= i) % p
        weight += s != 0
    first = selected[0][0]
    return weight >= (n - first) - len(selected) + 1


def find_weight_violation(m: ToeplitzLT, max_columns: Optional[int] = None) -> Optional[Dict[int, int]]:
    """
    First combination of columns breaking the weight bound, or None.

    The leading coefficient is fixed to 1 since scaling a combination does
    not change its weight.
    """
    n, p = m.gamma, m.p
    limit = n if max_columns is None else min(n, max_columns)
    for size in range(1, limit + 1):
        for cols in combinations(range(n), size):
            for rest in product(range(1, p), repeat=size - 1):
                coeffs = dict(zip(cols, (1,) + rest))
                if not column_weight_check(m, coeffs):
                    return coeffs
    return None
