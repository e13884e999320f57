"""
Exact arithmetic in the prime field F_p for odd primes p.

Provides field elements with canonical representatives in [0, p-1],
inverses, Legendre symbols, Tonelli-Shanks square roots, linear solving
and parsing of rational literals such as "1/2" or "-3/8".
"""

import re
import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple, Union

from .exceptions import (
    DegenerateLinear, DenominatorZeroModP, InvalidModulus, ModulusMismatch,
    NonResidue, ParseError, ZeroInverse,
)

logger = logging.getLogger(__name__)

# Deterministic Miller-Rabin bases, valid for every n < 3.3 * 10^24
MILLER_RABIN_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

RATIONAL_PATTERN = re.compile(r'^(-?)([0-9]+)(?:/([0-9]+))?$')

# Residue laws: u -> predicate on p deciding solvability of x^2 = u
RESIDUE_LAWS = {
    -1: lambda p: p % 4 == 1,
    2: lambda p: p % 8 in (1, 7),
    3: lambda p: p % 12 in (1, 11),
    -3: lambda p: p % 3 == 1,
    5: lambda p: p % 5 in (1, 4),
}


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test."""
    if n < 2:
        return False
    for q in MILLER_RABIN_BASES:
        if n % q == 0:
            return n == q

    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1

    for a in MILLER_RABIN_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = pow(x, 2, n)
            if x == n - 1:
                break
        else:
            return False
    return True


def residue_law_holds(u: int, p: int) -> bool:
    """Congruence prediction for solvability of x^2 = u mod p (u in -1, 2, 3, -3, 5)."""
    if u not in RESIDUE_LAWS:
        raise ValueError(f"no residue law recorded for u={u}")
    return RESIDUE_LAWS[u](p)


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for an odd prime p."""
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise InvalidModulus(f"modulus must be an integer, got {self.p!r}")
        if self.p == 2:
            raise InvalidModulus("p = 2 is not supported: constructions need odd characteristic")
        if not is_prime(self.p):
            raise InvalidModulus(f"{self.p} is not prime")

    def __call__(self, value: Union[int, 'FieldElement']) -> 'FieldElement':
        return self.element(value)

    def element(self, value: Union[int, 'FieldElement']) -> 'FieldElement':
        if isinstance(value, FieldElement):
            _check_same(self, value.field)
            return value
        return FieldElement(int(value) % self.p, self)

    @property
    def zero(self) -> 'FieldElement':
        return FieldElement(0, self)

    @property
    def one(self) -> 'FieldElement':
        return FieldElement(1, self)

    def elements(self) -> Iterator['FieldElement']:
        for v in range(self.p):
            yield FieldElement(v, self)

    def inv_int(self, a: int) -> int:
        """Inverse of an integer residue, returned as an integer."""
        a %= self.p
        if a == 0:
            raise ZeroInverse(f"0 has no inverse in F_{self.p}")
        return pow(a, -1, self.p)

    def nonresidue(self) -> int:
        """Smallest quadratic non-residue."""
        z = 2
        while pow(z, (self.p - 1) // 2, self.p) != self.p - 1:
            z += 1
        return z

    def parse(self, text: str) -> 'FieldElement':
        return parse_rational(text, self)

    def __str__(self):
        return f"F_{self.p}"


@dataclass(frozen=True)
class FieldElement:
    """An element of F_p held by its canonical representative."""
    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            object.__setattr__(self, 'value', self.value % self.field.p)

    @property
    def p(self) -> int:
        return self.field.p

    def _coerce(self, other) -> 'FieldElement':
        if isinstance(other, FieldElement):
            _check_same(self.field, other.field)
            return other
        if isinstance(other, int):
            return FieldElement(other % self.field.p, self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return sub(other, self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, inv(other))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(other, inv(self))

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return FieldElement(pow(inv(self).value, -exponent, self.p), self.field)
        return FieldElement(pow(self.value, exponent, self.p), self.field)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            # ints compare by canonical representative only
            return self.value == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, FieldElement):
            _check_same(self.field, other.field)
            return self.value < other.value
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"FieldElement({self.value} mod {self.field.p})"

    def __str__(self):
        return str(self.value)


def _check_same(f: PrimeField, g: PrimeField):
    if f.p != g.p:
        raise ModulusMismatch(f"cannot combine elements of F_{f.p} and F_{g.p}")


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    _check_same(x.field, y.field)
    return FieldElement((x.value + y.value) % x.p, x.field)


def sub(x: FieldElement, y: FieldElement) -> FieldElement:
    _check_same(x.field, y.field)
    return FieldElement((x.value - y.value) % x.p, x.field)


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    _check_same(x.field, y.field)
    return FieldElement((x.value * y.value) % x.p, x.field)


def neg(x: FieldElement) -> FieldElement:
    return FieldElement((-x.value) % x.p, x.field)


def inv(x: FieldElement) -> FieldElement:
    """Multiplicative inverse; raises ZeroInverse for 0."""
    return FieldElement(x.field.inv_int(x.value), x.field)


def parse_rational(text: str, field: PrimeField) -> FieldElement:
    """
    Parse a literal of the form ``[-]digits[/digits]`` into F_p.

    Args:
        text: ASCII literal without whitespace, e.g. "7", "-1/2"
        field: Target prime field

    Returns:
        numerator * denominator^-1 with the sign applied
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string literal, got {text!r}")
    match = RATIONAL_PATTERN.match(text)
    if not match:
        raise ParseError(f"malformed rational literal: {text!r}")

    sign, numerator, denominator = match.groups()
    num = int(numerator)
    den = int(denominator) if denominator is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    if den % field.p == 0:
        raise DenominatorZeroModP(f"denominator of {text!r} vanishes mod {field.p}")

    value = num * field.inv_int(den)
    if sign == '-':
        value = -value
    return FieldElement(value % field.p, field)


def legendre(u: FieldElement) -> int:
    """Legendre symbol (u / p) in {-1, 0, 1} via Euler's criterion."""
    if u.value == 0:
        return 0
    ls = pow(u.value, (u.p - 1) // 2, u.p)
    return -1 if ls == u.p - 1 else 1


def _tonelli_shanks(n: int, p: int) -> int:
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)

    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1

    z = PrimeField(p).nonresidue()
    m = s
    c = pow(z, q, p)
    t = pow(n, q, p)
    r = pow(n, (q + 1) // 2, p)

    while t != 1:
        i, x = 1, (t * t) % p
        while x != 1:
            x = (x * x) % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = (r * b) % p
        c = (b * b) % p
        t = (t * c) % p
        m = i
    return r


def sqrt_mod(u: FieldElement) -> Tuple[FieldElement, FieldElement]:
    """
    Both square roots of u, smaller representative first.

    Raises NonResidue when u is a non-residue; u = 0 gives (0, 0).
    """
    symbol = legendre(u)
    if symbol == 0:
        return u.field.zero, u.field.zero
    if symbol == -1:
        raise NonResidue(f"{u.value} is not a square mod {u.p}")

    r = _tonelli_shanks(u.value, u.p)
    lo, hi = sorted((r, u.p - r))
    return FieldElement(lo, u.field), FieldElement(hi, u.field)


def solve_linear(c: FieldElement, d: FieldElement) -> FieldElement:
    """Root of c*x + d = 0; raises DegenerateLinear when c = 0."""
    _check_same(c.field, d.field)
    if c.value == 0:
        raise DegenerateLinear(
            "leading coefficient vanishes", constant_is_zero=(d.value == 0)
        )
    return FieldElement((-d.value * c.field.inv_int(c.value)) % c.p, c.field)


def rational_alias(x: FieldElement, max_den: int = 64) -> Optional[str]:
    """
    Smallest-height fraction a/b (|a|, b <= max_den) equal to x, as text.

    Returns None when no such fraction exists.
    """
    p = x.p
    best = None
    for b in range(1, min(max_den, p - 1) + 1):
        a = (x.value * b) % p
        if a > p // 2:
            a -= p
        if abs(a) > max_den:
            continue
        key = (max(abs(a), b), b)
        if best is None or key < best[0]:
            best = (key, a, b)
    if best is None:
        return None
    _, a, b = best
    return str(a) if b == 1 else f"{a}/{b}"
