"""The one-variable model: B_d(1) for ell = 3.

A basis label of B_d(1) is an exponent triple ``(k1, k2, k3)`` standing for
e^k1 | e^k2 | e^k3, of weight k1 + k2 + k3 and degree k2 + 2*k3.  The
differential is

    delta(k1, k2, k3) = (k1)_{q^2} (k1-1, k2+1, k3) + q^(2 k2) (k2)_{q^2} (k1, k2-1, k3+1).

The product on B(1) is obtained by expanding the three braiding moves of the
twisted product (move b1 past a3, then past a2, then move b2 past a3) with the
one-variable braiding R(e^a | e^b) = q^(c a b) e^b | e^a, times the prefactor
q^((|a2| + |a3|) |b1|).  ``calibrate_line_braiding`` selects c as the unique
exponent making the product satisfy the twisted Leibniz rule; the result,
c = 1, is frozen in :data:`LINE_BRAIDING`.
"""

from __future__ import annotations

import functools

from .coeff import Scalar, qint_raw
from .errors import DomainError, PreconditionError
from .linalg import axpy
from .ncomplex import ComplexMorphism, LComplex, shift

__all__ = [
    "LINE_BRAIDING",
    "slot_monomials",
    "weight",
    "degree",
    "format_monomial",
    "parse_monomial",
    "line_delta",
    "build_B1",
    "line_product",
    "line_product_raw",
    "multiply_elements",
    "calibrate_line_braiding",
    "leibniz_failures",
    "right_multiplication",
    "embed",
]

LINE_BRAIDING = 1


def slot_monomials(d: int, ell: int = 3) -> list[tuple]:
    """All ell-slot exponent tuples of total weight d, in lexicographic order."""
    if d < 0:
        raise DomainError("weight must be non-negative")

    def rec(rest, parts):
        if parts == 1:
            yield (rest,)
            return
        for k in range(rest + 1):
            for tail in rec(rest - k, parts - 1):
                yield (k,) + tail

    return sorted(rec(d, ell))


def weight(m) -> int:
    return sum(m)


def degree(m) -> int:
    return sum(i * k for i, k in enumerate(m))


def format_monomial(m) -> str:
    return "|".join("1" if k == 0 else f"e^{k}" for k in m)


def parse_monomial(text: str) -> tuple:
    out = []
    for part in text.split("|"):
        part = part.strip()
        if part == "1":
            out.append(0)
        elif part == "e":
            out.append(1)
        elif part.startswith("e^"):
            out.append(int(part[2:].strip("{}")))
        else:
            raise ValueError(f"bad slot {part!r}")
    return tuple(out)


def _check_ell3(field):
    if field.ell != 3:
        raise DomainError(f"B_d(1) is defined here for q of order 3, field has ell={field.ell}")


def line_delta(field, m) -> dict:
    """delta of a single monomial of B(1), as ``{monomial: raw}``."""
    k1, k2, k3 = m
    t = field.qpow(2)
    out = {}
    if k1:
        c = qint_raw(field, k1, t)
        if not field.is_zero(c):
            out[(k1 - 1, k2 + 1, k3)] = c
    if k2:
        c = field.mul(field.qpow(2 * k2), qint_raw(field, k2, t))
        if not field.is_zero(c):
            out[(k1, k2 - 1, k3 + 1)] = c
    return out


@functools.lru_cache(maxsize=None)
def build_B1(d: int, field) -> LComplex:
    """The 3-complex B_d(1); raises NilpotencyError if delta^3 != 0 (it never is)."""
    _check_ell3(field)
    basis = {}
    for m in slot_monomials(d):
        basis.setdefault(degree(m), []).append(m)
    return LComplex.from_function(field, 3, basis, lambda m, i: line_delta(field, m))


def line_product_raw(field, a, b, c: int = LINE_BRAIDING):
    """(raw scalar, monomial) with a*b = scalar * monomial in B(1)."""
    a1, a2, a3 = a
    b1, b2, b3 = b
    # prefactor, then R(a3|b1), R(a2|r1(b1)), R(r1(a3)|b2); R(e^x|e^y) = q^(c x y)
    exponent = (a2 + a3) * b1 + c * (a3 * b1) + c * (a2 * b1) + c * (a3 * b2)
    return field.qpow(exponent), (a1 + b1, a2 + b2, a3 + b3)


def line_product(a, b, field, c: int = LINE_BRAIDING) -> tuple[Scalar, tuple]:
    s, m = line_product_raw(field, a, b, c)
    return Scalar(field, s), m


def multiply_elements(field, x: dict, y: dict, c: int = LINE_BRAIDING) -> dict:
    """Bilinear extension of the monomial product to ``{monomial: raw}`` elements."""
    out: dict = {}
    for a, u in x.items():
        for b, v in y.items():
            s, m = line_product_raw(field, a, b, c)
            axpy(field, out, field.mul(s, field.mul(u, v)), {m: field.one})
    return out


def leibniz_failures(field, max_weight: int, c: int = LINE_BRAIDING, first_only: bool = False):
    """Monomial pairs (a, b), weight(a) + weight(b) <= max_weight, violating

        delta(ab) = delta(a) b + q^(2 a2 + 4 a3) a delta(b).
    """
    bad = []
    for total in range(max_weight + 1):
        for wa in range(total + 1):
            for a in slot_monomials(wa):
                for b in slot_monomials(total - wa):
                    s, m = line_product_raw(field, a, b, c)
                    lhs = {k: field.mul(s, v) for k, v in line_delta(field, m).items()}
                    rhs = multiply_elements(field, line_delta(field, a), {b: field.one}, c)
                    tw = field.qpow(2 * a[1] + 4 * a[2])
                    axpy(field, rhs, tw, multiply_elements(field, {a: field.one}, line_delta(field, b), c))
                    if lhs != rhs:
                        bad.append((a, b))
                        if first_only:
                            return bad
    return bad


def calibrate_line_braiding(field, max_weight: int = 6, candidates=(0, 1, 2)) -> list[int]:
    """Braiding exponents c for which the twisted Leibniz rule holds up to ``max_weight``."""
    _check_ell3(field)
    return [c for c in candidates if not leibniz_failures(field, max_weight, c, first_only=True)]


def right_multiplication(d: int, k: tuple, field, check_chain: bool = False) -> ComplexMorphism:
    """a -> a * (e^k1 | e^k2 | e^k3) from B_d(1)[k2 + 2 k3] to B_{d+|k|}(1)."""
    _check_ell3(field)
    k = tuple(k)
    src = shift(build_B1(d, field), degree(k))
    tgt = build_B1(d + weight(k), field)

    def image(m, i):
        s, prod = line_product_raw(field, m, k)
        return {prod: s}

    return ComplexMorphism.from_function(src, tgt, image)


def embed(d: int, k: tuple, field) -> ComplexMorphism:
    """The injective chain map psi: B_d(1)[k2 + 2 k3] -> B_{d+|k|}(1), a -> a (e^k1|e^k2|e^k3).

    Needs 3 | k1 and 3 | k2, which makes delta(e^k1|e^k2|e^k3) vanish.
    """
    k1, k2, _ = k
    if k1 % 3 or k2 % 3:
        raise PreconditionError(f"embed needs 3 | k1 and 3 | k2, got k={tuple(k)}")
    return right_multiplication(d, k, field)
