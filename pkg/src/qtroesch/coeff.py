"""Exact scalars at a primitive root of unity.

Two backends share one small interface:

* ``CyclotomicField(ell)`` -- Q(zeta_ell), elements stored as a tuple of
  integer numerators in the power basis 1, q, ..., q^(phi-1) followed by a
  positive common denominator.  The representation is canonical, so raw
  elements can be compared and hashed directly.
* ``PrimeField(p, ell)`` -- F_p with q the smallest residue of order ell.

Hot loops (elimination, matrix products) work on the raw representation via
the field's methods; ``Scalar`` is the user-facing wrapper with operators.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from sympy import Poly, cyclotomic_poly, isprime, symbols, totient

from .errors import DomainError, FieldSpecError, NoRootError

__all__ = [
    "FieldSpec",
    "CyclotomicField",
    "PrimeField",
    "Scalar",
    "get_field",
    "parse_field",
    "make_root",
    "qint",
    "qbinom",
    "qint_raw",
    "qbinom_raw",
]


@dataclass(frozen=True, order=True)
class FieldSpec:
    kind: str = "cyclotomic"
    ell: int = 3
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("cyclotomic", "prime"):
            raise FieldSpecError(f"unknown field kind {self.kind!r}")
        if not isinstance(self.ell, int) or self.ell < 3 or self.ell % 2 == 0:
            raise FieldSpecError(f"ell must be an odd integer >= 3, got {self.ell!r}")
        if self.kind == "prime":
            if self.p is None or not isprime(self.p):
                raise FieldSpecError(f"p must be prime, got {self.p!r}")
        elif self.p is not None:
            raise FieldSpecError("cyclotomic fields take no modulus")

    def __str__(self):
        return "cyclotomic" if self.kind == "cyclotomic" else f"fp:{self.p}"

    def to_json(self):
        return {"kind": self.kind, "ell": self.ell, "p": self.p}


def parse_field(text: str, ell: int = 3) -> FieldSpec:
    """Parse the command-line syntax ``cyclotomic`` or ``fp:<p>``."""
    text = text.strip()
    if text == "cyclotomic":
        return FieldSpec("cyclotomic", ell)
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise FieldSpecError(f"bad prime in field spec {text!r}") from None
        return FieldSpec("prime", ell, p)
    raise FieldSpecError(f"field spec must be 'cyclotomic' or 'fp:<p>', got {text!r}")


class CyclotomicField:
    kind = "cyclotomic"

    def __init__(self, ell: int):
        self.spec = FieldSpec("cyclotomic", ell)
        self.ell = ell
        x = symbols("x")
        minpoly = [int(c) for c in Poly(cyclotomic_poly(ell, x), x).all_coeffs()][::-1]
        self.minpoly = tuple(minpoly)
        self.phi = phi = len(minpoly) - 1
        assert phi == int(totient(ell))
        # _xpow[k] = q^k reduced, for every k we can meet (products, conjugates)
        table = []
        cur = [1] + [0] * (phi - 1)
        for _ in range(max(ell, 2 * phi - 1) + 1):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [c - top * minpoly[i] for i, c in enumerate(cur)]
        self._xpow = table
        self.zero = (0,) * phi + (1,)
        self.one = (1,) + (0,) * (phi - 1) + (1,)
        self._qpow = [tuple(table[k]) + (1,) for k in range(ell)]
        self.q = self._qpow[1]
        self._units = [j for j in range(2, ell) if math.gcd(j, ell) == 1]
        if ell == 3:
            self.mul = self._mul3

    # -- representation helpers -------------------------------------------
    @staticmethod
    def _norm(nums, den):
        if den < 0:
            nums = [-c for c in nums]
            den = -den
        if den != 1:
            g = math.gcd(den, *nums)
            if g != 1:
                nums = [c // g for c in nums]
                den //= g
        return tuple(nums) + (den,)

    def from_int(self, n: int):
        return (n,) + (0,) * (self.phi - 1) + (1,)

    def from_fraction(self, num: int, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return self._norm([num] + [0] * (self.phi - 1), den)

    def qpow(self, k: int):
        return self._qpow[k % self.ell]

    # -- arithmetic ---------------------------------------------------------
    def is_zero(self, a) -> bool:
        return a == self.zero

    def add(self, a, b):
        da, db = a[-1], b[-1]
        if da == db:
            nums = [x + y for x, y in zip(a[:-1], b[:-1])]
            if da == 1:
                return tuple(nums) + (1,)
            return self._norm(nums, da)
        nums = [x * db + y * da for x, y in zip(a[:-1], b[:-1])]
        return self._norm(nums, da * db)

    def neg(self, a):
        return tuple(-c for c in a[:-1]) + (a[-1],)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        phi = self.phi
        prod = [0] * (2 * phi - 1)
        for i in range(phi):
            x = a[i]
            if x:
                for j in range(phi):
                    y = b[j]
                    if y:
                        prod[i + j] += x * y
        nums = prod[:phi]
        for k in range(phi, 2 * phi - 1):
            c = prod[k]
            if c:
                row = self._xpow[k]
                for i in range(phi):
                    nums[i] += c * row[i]
        den = a[-1] * b[-1]
        if den == 1:
            return tuple(nums) + (1,)
        return self._norm(nums, den)

    def _mul3(self, a, b):
        # q^2 = -1 - q
        a0, a1, da = a
        b0, b1, db = b
        t = a1 * b1
        n0 = a0 * b0 - t
        n1 = a0 * b1 + a1 * b0 - t
        den = da * db
        if den == 1:
            return (n0, n1, 1)
        return self._norm([n0, n1], den)

    def _conjugate(self, a, j):
        nums = [0] * self.phi
        for i in range(self.phi):
            c = a[i]
            if c:
                row = self._xpow[(i * j) % self.ell]
                for t in range(self.phi):
                    nums[t] += c * row[t]
        return tuple(nums) + (a[-1],)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        b = self.one
        for j in self._units:
            b = self.mul(b, self._conjugate(a, j))
        norm = self.mul(a, b)
        assert not any(norm[1:-1]), "norm must be rational"
        # a^{-1} = b / norm
        num, den = norm[0], norm[-1]
        return self.mul(b, self.from_fraction(den, num))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        result = self.one
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    # -- display / evaluation ----------------------------------------------
    def fmt(self, a) -> str:
        terms = []
        for i, c in enumerate(a[:-1]):
            if not c:
                continue
            mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        if a[-1] != 1:
            return f"({body})/{a[-1]}"
        return body

    def evaluate(self, a, target: "PrimeField"):
        """Image of ``a`` under the ring map q -> target.q (target.ell must match)."""
        if target.ell != self.ell:
            raise DomainError("evaluation needs matching ell")
        p, r = target.p, target.q
        acc = 0
        for i, c in enumerate(a[:-1]):
            acc += c * pow(r, i, p)
        den = a[-1] % p
        if den == 0:
            raise ZeroDivisionError(f"denominator divisible by {p}")
        return acc * pow(den, -1, p) % p

    def __reduce__(self):
        return (get_field, (self.spec,))

    def __repr__(self):
        return f"CyclotomicField(ell={self.ell})"


class PrimeField:
    kind = "prime"

    def __init__(self, p: int, ell: int):
        self.spec = FieldSpec("prime", ell, p)
        self.p = p
        self.ell = ell
        if (p - 1) % ell:
            raise NoRootError(f"F_{p} has no element of order {ell} ({ell} does not divide {p - 1})")
        self.q = next(r for r in range(2, p) if _order_mod(r, p) == ell)
        self.zero = 0
        self.one = 1
        self._qpow = [pow(self.q, k, p) for k in range(ell)]

    def from_int(self, n):
        return n % self.p

    def from_fraction(self, num, den=1):
        return num * pow(den, -1, self.p) % self.p

    def qpow(self, k):
        return self._qpow[k % self.ell]

    def is_zero(self, a):
        return a == 0

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return -a % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def pow(self, a, k):
        return pow(a, k, self.p)

    def fmt(self, a):
        return str(a)

    def __reduce__(self):
        return (get_field, (self.spec,))

    def __repr__(self):
        return f"PrimeField(p={self.p}, ell={self.ell})"


def _order_mod(r, p):
    k, x = 1, r % p
    while x != 1:
        x = x * r % p
        k += 1
    return k


@functools.lru_cache(maxsize=None)
def get_field(spec: FieldSpec):
    """Return the (shared) field object for ``spec``."""
    if spec.kind == "cyclotomic":
        return CyclotomicField(spec.ell)
    return PrimeField(spec.p, spec.ell)


class Scalar:
    """A field element bundled with its field, supporting ``+ - * / **``."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field:
                raise DomainError("scalars from different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field.div(self.value, o))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        return Scalar(self.field, self.field.pow(self.value, k))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.value == o

    def __hash__(self):
        return hash((self.field.spec, self.value))

    def is_zero(self):
        return self.field.is_zero(self.value)

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Scalar({self.field.fmt(self.value)})"

    def __str__(self):
        return self.field.fmt(self.value)


def make_root(spec: FieldSpec) -> Scalar:
    """The distinguished primitive ell-th root of unity q of ``spec``."""
    field = get_field(spec)
    return Scalar(field, field.q)


def qint_raw(field, k: int, t):
    """(k)_t = 1 + t + ... + t^(k-1) on raw field elements."""
    if k < 0:
        raise DomainError("quantum integers need k >= 0")
    acc, term = field.zero, field.one
    for _ in range(k):
        acc = field.add(acc, term)
        term = field.mul(term, t)
    return acc


def qint(k: int, t: Scalar) -> Scalar:
    """Quantum integer (k)_t = 1 + t + ... + t^(k-1); (0)_t = 0."""
    return Scalar(t.field, qint_raw(t.field, k, t.value))


def qbinom_raw(field, n: int, k: int, t):
    if n < 0 or k < 0 or k > n:
        raise DomainError(f"qbinom needs 0 <= k <= n, got n={n}, k={k}")
    return _qbinom_row(field, t, n)[k]


@functools.lru_cache(maxsize=4096)
def _qbinom_row(field, t, n):
    if n == 0:
        return (field.one,)
    prev = _qbinom_row(field, t, n - 1)
    row = [field.one]
    tk = field.one
    for k in range(1, n):
        tk = field.mul(tk, t)
        # [n,k] = [n-1,k-1] + t^k [n-1,k]
        row.append(field.add(prev[k - 1], field.mul(tk, prev[k])))
    row.append(field.one)
    return tuple(row)


def qbinom(n: int, k: int, t: Scalar) -> Scalar:
    """Gaussian binomial [n choose k]_t via the q-Pascal recurrence."""
    return Scalar(t.field, qbinom_raw(t.field, n, k, t.value))
