"""Exact coefficient rings behind one Euclidean-domain contract.

Every ring is a small immutable object that knows how to operate on *raw*
payloads: ``int`` for Z and Z/p, :class:`fractions.Fraction` for Q and
Z[1/S], and :class:`GaussianInteger` pairs for Z[i].  The linear algebra
works directly on raw payloads for speed; :class:`Scalar` wraps a payload
together with its ring for the public value-level API.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd as _igcd
from typing import Any, NamedTuple


class RingError(ValueError):
    """Raised on ring mismatch, bad payloads or division by zero."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _round_half_toward_zero(num: int, den: int) -> int:
    # nearest integer to num/den (den > 0); ties go toward zero
    q, r = divmod(num, den)
    twice = 2 * r
    if twice > den:
        return q + 1
    if twice == den:
        return q if q >= 0 else q + 1
    return q


class GaussianInteger(NamedTuple):
    re: int
    im: int

    def __str__(self) -> str:
        return format_gaussian(self)


def format_gaussian(z: GaussianInteger) -> str:
    a, b = z
    if b == 0:
        return str(a)
    if a == 0:
        return f"{b}i"
    sign = "+" if b > 0 else "-"
    return f"{a}{sign}{abs(b)}i"


_GAUSS_RE = re.compile(r"^\s*([+-]?\d+)?\s*(?:([+-])\s*(\d*)\s*i)?\s*$")
_PURE_IMAG_RE = re.compile(r"^\s*([+-]?)\s*(\d*)\s*i\s*$")


def parse_gaussian(text: str) -> GaussianInteger:
    m = _PURE_IMAG_RE.match(text)
    if m:
        mag = int(m.group(2)) if m.group(2) else 1
        return GaussianInteger(0, -mag if m.group(1) == "-" else mag)
    m = _GAUSS_RE.match(text)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise RingError(f"not a Gaussian integer: {text!r}")
    re_part = int(m.group(1)) if m.group(1) is not None else 0
    im_part = 0
    if m.group(2):
        mag = int(m.group(3)) if m.group(3) else 1
        im_part = mag if m.group(2) == "+" else -mag
    return GaussianInteger(re_part, im_part)


class RingSpec:
    """Base class for the exact Euclidean rings.

    Subclasses are frozen dataclasses, so specs compare and hash by value.
    """

    is_field = False
    token = "?"

    # -- construction -------------------------------------------------
    @property
    def zero(self) -> Any:
        return self.coerce(0)

    @property
    def one(self) -> Any:
        return self.coerce(1)

    def coerce(self, value: Any) -> Any:
        raise NotImplementedError

    def from_int(self, n: int) -> Any:
        return self.coerce(n)

    # -- arithmetic ---------------------------------------------------
    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def is_zero(self, x) -> bool:
        return x == 0

    def eq(self, x, y) -> bool:
        return x == y

    def norm(self, x) -> int:
        """Euclidean norm; 0 exactly for zero."""
        raise NotImplementedError

    def divmod(self, x, y):
        raise NotImplementedError

    def unit_inverse(self, x):
        """Inverse of ``x`` if it is a unit, else ``None``."""
        raise NotImplementedError

    def is_unit(self, x) -> bool:
        return self.unit_inverse(x) is not None

    def normalize(self, x):
        """Return ``(u, y)`` with ``u`` a unit and ``y = u*x`` the canonical associate."""
        raise NotImplementedError

    def gcd(self, x, y):
        while not self.is_zero(y):
            x, y = y, self.divmod(x, y)[1]
        return self.normalize(x)[1]

    def divides(self, x, y) -> bool:
        """True iff ``x`` divides ``y``."""
        if self.is_zero(x):
            return self.is_zero(y)
        return self.is_zero(self.divmod(y, x)[1])

    def exact_div(self, y, x):
        q, r = self.divmod(y, x)
        if not self.is_zero(r):
            raise RingError(f"{self.format(x)} does not divide {self.format(y)}")
        return q

    def format(self, x) -> str:
        return str(x)

    def parse(self, text: str):
        raise NotImplementedError

    def __str__(self) -> str:
        return self.token


@dataclass(frozen=True)
class IntegerRing(RingSpec):
    token = "Z"

    def coerce(self, value):
        if isinstance(value, bool):
            return int(value)
        if isinstance(value, int):
            return value
        if isinstance(value, Fraction) and value.denominator == 1:
            return int(value)
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Scalar):
            return self.coerce(value.value)
        raise RingError(f"cannot coerce {value!r} into Z")

    def norm(self, x):
        return abs(x)

    def divmod(self, x, y):
        if y == 0:
            raise RingError("division by zero")
        return divmod(x, y)

    def unit_inverse(self, x):
        return x if x in (1, -1) else None

    def normalize(self, x):
        return (-1, -x) if x < 0 else (1, x)

    def gcd(self, x, y):
        return _igcd(x, y)

    def parse(self, text):
        try:
            return int(text.strip())
        except ValueError:
            raise RingError(f"not an integer: {text!r}") from None


@dataclass(frozen=True)
class RationalField(RingSpec):
    token = "Q"
    is_field = True

    def coerce(self, value):
        if isinstance(value, Scalar):
            value = value.value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return Fraction(value)
        raise RingError(f"cannot coerce {value!r} into Q")

    def norm(self, x):
        return 0 if x == 0 else 1

    def divmod(self, x, y):
        if y == 0:
            raise RingError("division by zero")
        return x / y, Fraction(0)

    def unit_inverse(self, x):
        return None if x == 0 else 1 / x

    def normalize(self, x):
        if x == 0:
            return Fraction(1), x
        return 1 / x, Fraction(1)

    def parse(self, text):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            raise RingError(f"not a rational: {text!r}") from None


@dataclass(frozen=True)
class ModPField(RingSpec):
    p: int = 2
    is_field = True

    def __post_init__(self):
        if not is_prime(self.p):
            raise RingError(f"Z/{self.p}: modulus must be prime")

    @property
    def token(self):
        return f"Z/{self.p}"

    def coerce(self, value):
        if isinstance(value, Scalar):
            value = value.value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise RingError(f"{value} has no image in Z/{self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        if isinstance(value, int):
            return value % self.p
        raise RingError(f"cannot coerce {value!r} into Z/{self.p}")

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return x * y % self.p

    def neg(self, x):
        return -x % self.p

    def norm(self, x):
        return 0 if x == 0 else 1

    def divmod(self, x, y):
        if y == 0:
            raise RingError("division by zero")
        return x * pow(y, -1, self.p) % self.p, 0

    def unit_inverse(self, x):
        return None if x == 0 else pow(x, -1, self.p)

    def normalize(self, x):
        if x == 0:
            return 1, 0
        return pow(x, -1, self.p), 1

    def parse(self, text):
        try:
            return int(text.strip()) % self.p
        except ValueError:
            raise RingError(f"not a residue: {text!r}") from None


@dataclass(frozen=True)
class LocalizedIntegers(RingSpec):
    """Z[1/S]: rationals whose denominators only involve the primes in S."""

    primes: tuple[int, ...] = ()

    def __post_init__(self):
        for q in self.primes:
            if not is_prime(q):
                raise RingError(f"Z[1/S]: {q} is not prime")
        object.__setattr__(self, "primes", tuple(sorted(set(self.primes))))

    @property
    def token(self):
        return "Z[" + ",".join(f"1/{q}" for q in self.primes) + "]"

    def _strip(self, n: int) -> tuple[int, int]:
        # split |n| into (S-part, S-free part)
        n = abs(n)
        s = 1
        for q in self.primes:
            while n and n % q == 0:
                n //= q
                s *= q
        return s, n

    def coerce(self, value):
        if isinstance(value, Scalar):
            value = value.value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            v = Fraction(value)
            if self._strip(v.denominator)[1] != 1:
                raise RingError(f"{v} is not in {self.token}")
            return v
        raise RingError(f"cannot coerce {value!r} into {self.token}")

    def norm(self, x):
        return self._strip(x.numerator)[1]

    def divmod(self, x, y):
        if y == 0:
            raise RingError("division by zero")
        m = self.norm(y)
        if m == 1:
            return x / y, Fraction(0)
        r = x.numerator * pow(x.denominator, -1, m) % m
        return (x - r) / y, Fraction(r)

    def unit_inverse(self, x):
        if x == 0 or self.norm(x) != 1:
            return None
        return 1 / x

    def normalize(self, x):
        if x == 0:
            return Fraction(1), x
        m = self.norm(x)
        return Fraction(m) / x, Fraction(m)

    def parse(self, text):
        try:
            return self.coerce(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError):
            raise RingError(f"not an element of {self.token}: {text!r}") from None


_GAUSS_UNITS = (
    GaussianInteger(1, 0),
    GaussianInteger(0, 1),
    GaussianInteger(-1, 0),
    GaussianInteger(0, -1),
)


@dataclass(frozen=True)
class GaussianIntegers(RingSpec):
    token = "Z[i]"

    def coerce(self, value):
        if isinstance(value, Scalar):
            value = value.value
        if isinstance(value, GaussianInteger):
            return value
        if isinstance(value, tuple) and len(value) == 2:
            return GaussianInteger(int(value[0]), int(value[1]))
        if isinstance(value, complex):
            if value.real != int(value.real) or value.imag != int(value.imag):
                raise RingError(f"{value} is not a Gaussian integer")
            return GaussianInteger(int(value.real), int(value.imag))
        if isinstance(value, int) and not isinstance(value, bool):
            return GaussianInteger(value, 0)
        if isinstance(value, str):
            return self.parse(value)
        raise RingError(f"cannot coerce {value!r} into Z[i]")

    def add(self, x, y):
        return GaussianInteger(x[0] + y[0], x[1] + y[1])

    def sub(self, x, y):
        return GaussianInteger(x[0] - y[0], x[1] - y[1])

    def mul(self, x, y):
        a, b = x
        c, d = y
        return GaussianInteger(a * c - b * d, a * d + b * c)

    def neg(self, x):
        return GaussianInteger(-x[0], -x[1])

    def is_zero(self, x):
        return x[0] == 0 and x[1] == 0

    def norm(self, x):
        return x[0] * x[0] + x[1] * x[1]

    def divmod(self, x, y):
        n = self.norm(y)
        if n == 0:
            raise RingError("division by zero")
        a, b = x
        c, d = y
        # x * conj(y) = (ac + bd) + (bc - ad) i
        q = GaussianInteger(
            _round_half_toward_zero(a * c + b * d, n),
            _round_half_toward_zero(b * c - a * d, n),
        )
        return q, self.sub(x, self.mul(q, y))

    def unit_inverse(self, x):
        if self.norm(x) != 1:
            return None
        return GaussianInteger(x[0], -x[1])

    def normalize(self, x):
        if self.is_zero(x):
            return _GAUSS_UNITS[0], x
        for u in _GAUSS_UNITS:
            y = self.mul(u, x)
            if y[0] > 0 and y[1] >= 0:
                return u, y
        raise AssertionError("unreachable")

    def format(self, x):
        return format_gaussian(x)

    def parse(self, text):
        return parse_gaussian(text)


ZZ = IntegerRing()
QQ = RationalField()
ZI = GaussianIntegers()


def mod(p: int) -> ModPField:
    return ModPField(p)


def localized(*primes: int) -> LocalizedIntegers:
    return LocalizedIntegers(tuple(primes))


_LOC_RE = re.compile(r"^Z\[(.*)\]$")


def parse_ring(token: str) -> RingSpec:
    """Parse a ring token: ``Z``, ``Q``, ``Z/p``, ``Z[1/n,...]`` or ``Z[i]``."""
    t = token.strip().replace(" ", "")
    if t == "Z":
        return ZZ
    if t == "Q":
        return QQ
    if t == "Z[i]":
        return ZI
    if t.startswith("Z/"):
        try:
            return ModPField(int(t[2:]))
        except ValueError:
            raise RingError(f"bad ring token {token!r}") from None
    m = _LOC_RE.match(t)
    if m:
        primes: list[int] = []
        for part in m.group(1).split(","):
            part = part[2:] if part.startswith("1/") else part
            try:
                n = int(part)
            except ValueError:
                raise RingError(f"bad ring token {token!r}") from None
            if n < 2:
                raise RingError(f"bad ring token {token!r}")
            primes.extend(prime_factors(n))
        return LocalizedIntegers(tuple(primes))
    raise RingError(f"unknown ring token {token!r}")


@dataclass(frozen=True)
class Scalar:
    """An exact ring element tagged with its ring."""

    ring: RingSpec
    value: Any = field(compare=True)

    def __post_init__(self):
        object.__setattr__(self, "value", self.ring.coerce(self.value))

    def _check(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            return Scalar(self.ring, other)
        if other.ring != self.ring:
            raise RingError(f"ring mismatch: {self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        o = self._check(other)
        return Scalar(self.ring, self.ring.add(self.value, o.value))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return Scalar(self.ring, self.ring.sub(self.value, o.value))

    def __mul__(self, other):
        o = self._check(other)
        return Scalar(self.ring, self.ring.mul(self.value, o.value))

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.ring, self.ring.neg(self.value))

    def __bool__(self):
        return not self.ring.is_zero(self.value)

    def norm(self) -> int:
        return self.ring.norm(self.value)

    def __str__(self):
        return self.ring.format(self.value)

    def __repr__(self):
        return f"Scalar({self.ring.token}, {self.ring.format(self.value)})"


def arithmetic(op: str, x: Scalar, y: Scalar | None = None) -> Scalar:
    """Apply ``add``, ``mul``, ``sub`` or ``neg`` to scalars of one ring."""
    if op == "neg":
        return -x
    if y is None:
        raise RingError(f"{op} needs two operands")
    if x.ring != y.ring:
        raise RingError(f"ring mismatch: {x.ring} vs {y.ring}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise RingError(f"unknown operation {op!r}")


def euclidean_divmod(x: Scalar, y: Scalar) -> tuple[Scalar, Scalar]:
    if x.ring != y.ring:
        raise RingError(f"ring mismatch: {x.ring} vs {y.ring}")
    q, r = x.ring.divmod(x.value, y.value)
    return Scalar(x.ring, q), Scalar(x.ring, r)


def gcd(x: Scalar, y: Scalar) -> Scalar:
    if x.ring != y.ring:
        raise RingError(f"ring mismatch: {x.ring} vs {y.ring}")
    return Scalar(x.ring, x.ring.gcd(x.value, y.value))


def is_unit(x: Scalar) -> tuple[bool, Scalar | None]:
    inv = x.ring.unit_inverse(x.value)
    if inv is None:
        return False, None
    return True, Scalar(x.ring, inv)


# -- group rings -------------------------------------------------------


@dataclass(frozen=True)
class GroupRingElement:
    """Element of R[G] for a finite group G given by its multiplication table.

    ``support`` is a sorted tuple of ``(element index, raw coefficient)``
    pairs with no zero coefficients.
    """

    base: RingSpec
    order: int
    support: tuple[tuple[int, Any], ...] = ()

    def __post_init__(self):
        acc: dict[int, Any] = {}
        for g, c in self.support:
            if not 0 <= g < self.order:
                raise IndexError(f"group element {g} out of range for order {self.order}")
            c = self.base.coerce(c)
            acc[g] = self.base.add(acc[g], c) if g in acc else c
        clean = tuple(sorted((g, c) for g, c in acc.items() if not self.base.is_zero(c)))
        object.__setattr__(self, "support", clean)

    @classmethod
    def from_dict(cls, base, order, coeffs: dict[int, Any]) -> "GroupRingElement":
        return cls(base, order, tuple(coeffs.items()))

    def as_dict(self) -> dict[int, Any]:
        return dict(self.support)

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(self.base, self.order, self.support + other.support)

    def __neg__(self):
        return GroupRingElement(self.base, self.order, tuple((g, self.base.neg(c)) for g, c in self.support))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "GroupRingElement":
        c = self.base.coerce(c)
        return GroupRingElement(self.base, self.order, tuple((g, self.base.mul(c, x)) for g, x in self.support))

    def is_zero(self) -> bool:
        return not self.support


def group_ring_mul(u: GroupRingElement, v: GroupRingElement, cayley) -> GroupRingElement:
    """Convolution product through the multiplication table of ``cayley``."""
    if u.base != v.base or u.order != v.order:
        raise RingError("group ring elements over different rings or groups")
    if u.order != cayley.order:
        raise IndexError("group ring element does not match the Cayley table")
    mult = cayley.mult
    R = u.base
    acc: dict[int, Any] = {}
    for g, a in u.support:
        row = mult[g]
        for h, b in v.support:
            k = row[h]
            p = R.mul(a, b)
            acc[k] = R.add(acc[k], p) if k in acc else p
    return GroupRingElement.from_dict(R, u.order, acc)


def augment(u: GroupRingElement) -> Scalar:
    R = u.base
    total = R.zero
    for _, c in u.support:
        total = R.add(total, c)
    return Scalar(R, total)
