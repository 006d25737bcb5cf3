"""The quantum symmetric algebra S_q(n) and the direct construction of B_d(n).

Monomials are exponent tuples of length n, always normal ordered
x_1^a_1 ... x_n^a_n.  All structure maps are determined by a
:class:`Convention`:

* product: x_j x_i = q^c1 x_i x_j for i < j;
* braiding R on V (x) V (V = span of the x_i): R(x_i|x_i) = q^c2 x_i|x_i and,
  for i != j, either a diagonal rule R(x_i|x_j) = q^u x_j|x_i (i < j),
  q^v x_j|x_i (i > j), or a Hecke rule
  R(x_i|x_j) = x_j|x_i + [i > j] (q^c2 - q^-c2) x_i|x_j  ("hecke_gt"; "hecke_lt"
  puts the correction on i < j);
* braidings of higher symmetric powers are generated from R through the
  product compatibilities, and the coproduct from primitivity of the x_i plus
  the twisted algebra-map rule Delta(xy) = sum q^(|x''||y'|) x' r(y') | r(x'') y''.

:func:`calibrate` picks the convention; see its docstring.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field

from .coeff import FieldSpec, get_field, qint_raw
from .errors import DomainError, NotCalibratedError
from .linalg import SparseMatrix, axpy, kernel_basis
from .ncomplex import ComplexMorphism, LComplex, check_nilpotency

__all__ = [
    "Convention",
    "QSym",
    "get_algebra",
    "monomials",
    "product",
    "coproduct",
    "braiding",
    "braiding_matrix",
    "verify_relations",
    "RELATIONS",
    "weight_of",
    "weight_decompose",
    "phi_kernel",
    "build_B_direct",
    "mu_B",
    "mu_B_failures",
    "exponential_iso",
    "calibrate",
    "calibrated_convention",
    "candidate_conventions",
]


@dataclass(frozen=True, order=True)
class Convention:
    c1: int = 1
    c2: int = 1
    cross: str = "hecke_gt"
    u: int = 0
    v: int = 0
    calibrated: bool = dc_field(default=False, compare=False)

    def __post_init__(self):
        if self.cross not in ("hecke_gt", "hecke_lt", "diag"):
            raise DomainError(f"unknown cross-braiding form {self.cross!r}")

    def descriptor(self) -> str:
        s = f"c1={self.c1},c2={self.c2},cross={self.cross}"
        if self.cross == "diag":
            s += f",u={self.u},v={self.v}"
        return s

    def to_json(self):
        out = {"c1": self.c1, "c2": self.c2, "cross": self.cross}
        if self.cross == "diag":
            out.update(u=self.u, v=self.v)
        return out

    def key(self):
        return (self.c1, self.c2, self.cross, self.u, self.v)


def monomials(d: int, n: int) -> list[tuple]:
    """Exponent vectors of total degree d in n variables, lexicographically sorted."""
    if d < 0 or n < 0:
        raise DomainError("degree and number of variables must be non-negative")
    if n == 0:
        return [()] if d == 0 else []
    out = []
    for head in range(d + 1):
        for tail in monomials(d - head, n - 1):
            out.append((head,) + tail)
    return sorted(out)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _deg(m):
    return sum(m)


def _unit(n, k):
    return tuple(1 if i == k else 0 for i in range(n))


class QSym:
    """S_q(n) for a fixed field and convention, with memoised structure maps."""

    def __init__(self, field, n: int, conv: Convention):
        self.F = field
        self.n = n
        self.conv = conv
        self.one = (0,) * n
        self._braid = {}
        self._coprod = {}

    # -- product -------------------------------------------------------------
    def mul(self, x, y):
        """x * y = q^e x^(x+y) with e = c1 * #{(j > i) : x_j y_i}; returns (raw, monomial)."""
        e = 0
        for i in range(self.n):
            if y[i]:
                e += y[i] * sum(x[i + 1 :])
        return self.F.qpow(self.conv.c1 * e), _add(x, y)

    # -- braiding ------------------------------------------------------------
    def _braid_gen(self, i, j):
        F, c = self.F, self.conv
        xi, xj = _unit(self.n, i), _unit(self.n, j)
        if i == j:
            return {(xi, xi): F.qpow(c.c2)}
        if c.cross == "diag":
            return {(xj, xi): F.qpow(c.u if i < j else c.v)}
        out = {(xj, xi): F.one}
        if (c.cross == "hecke_gt" and i > j) or (c.cross == "hecke_lt" and i < j):
            corr = F.sub(F.qpow(c.c2), F.qpow(-c.c2))
            if not F.is_zero(corr):
                out[(xi, xj)] = corr
        return out

    def braid(self, x, y) -> dict:
        """R(x | y) = sum r(y) | r(x), as ``{(y', x'): raw}``."""
        key = (x, y)
        hit = self._braid.get(key)
        if hit is not None:
            return hit
        F = self.F
        dx, dy = _deg(x), _deg(y)
        if dx == 0 or dy == 0:
            out = {(y, x): F.one}
        elif dx == 1 and dy == 1:
            out = self._braid_gen(x.index(1), y.index(1))
        elif dy > 1:
            # y = y1 * x_k with k the last variable of y; switch x past y1, then past x_k
            k = max(i for i in range(self.n) if y[i])
            v = _unit(self.n, k)
            y1 = tuple(e - (i == k) for i, e in enumerate(y))
            out = {}
            for (u, xt), c in self.braid(x, y1).items():
                for (w, xtt), c2 in self.braid(xt, v).items():
                    s, uw = self.mul(u, w)
                    axpy(F, out, F.mul(s, F.mul(c, c2)), {(uw, xtt): F.one})
        else:
            # x = x1 * x_k; switch x_k past y, then x1 past the result
            k = max(i for i in range(self.n) if x[i])
            w = _unit(self.n, k)
            x1 = tuple(e - (i == k) for i, e in enumerate(x))
            out = {}
            for (yt, wt), c in self.braid(w, y).items():
                for (ytt, x1t), c2 in self.braid(x1, yt).items():
                    s, xw = self.mul(x1t, wt)
                    axpy(F, out, F.mul(s, F.mul(c, c2)), {(ytt, xw): F.one})
        self._braid[key] = out
        return out

    # -- coproduct -----------------------------------------------------------
    def tensor_mul(self, a, b) -> dict:
        """(a'|a'')(b'|b'') = q^(|a''||b'|) sum a' r(b') | r(a'') b''."""
        F = self.F
        (a1, a2), (b1, b2) = a, b
        pre = F.qpow(_deg(a2) * _deg(b1))
        out = {}
        for (rb, ra), c in self.braid(a2, b1).items():
            s1, m1 = self.mul(a1, rb)
            s2, m2 = self.mul(ra, b2)
            axpy(F, out, F.mul(pre, F.mul(c, F.mul(s1, s2))), {(m1, m2): F.one})
        return out

    def coproduct(self, x) -> dict:
        """Full coproduct, all splittings: ``{(x', x''): raw}``."""
        hit = self._coprod.get(x)
        if hit is not None:
            return hit
        F = self.F
        if _deg(x) == 0:
            out = {(x, x): F.one}
        else:
            k = max(i for i in range(self.n) if x[i])
            v = _unit(self.n, k)
            y = tuple(e - (i == k) for i, e in enumerate(x))
            dv = {(v, self.one): F.one, (self.one, v): F.one}
            out = {}
            for left, c in self.coproduct(y).items():
                for right, c2 in dv.items():
                    axpy(F, out, F.mul(c, c2), self.tensor_mul(left, right))
        self._coprod[x] = out
        return out

    def coproduct_split(self, x, d1: int) -> dict:
        return {k: v for k, v in self.coproduct(x).items() if _deg(k[0]) == d1}

    # -- operators on tensor vectors {(m_0, ..., m_r): raw} --------------------
    def v_mu(self, vec, pos):
        F, out = self.F, {}
        for t, c in vec.items():
            s, m = self.mul(t[pos], t[pos + 1])
            axpy(F, out, F.mul(c, s), {t[:pos] + (m,) + t[pos + 2 :]: F.one})
        return out

    def v_R(self, vec, pos):
        F, out = self.F, {}
        for t, c in vec.items():
            for (a, b), s in self.braid(t[pos], t[pos + 1]).items():
                axpy(F, out, F.mul(c, s), {t[:pos] + (a, b) + t[pos + 2 :]: F.one})
        return out

    def v_delta(self, vec, pos):
        F, out = self.F, {}
        for t, c in vec.items():
            for (a, b), s in self.coproduct(t[pos]).items():
                axpy(F, out, F.mul(c, s), {t[:pos] + (a, b) + t[pos + 1 :]: F.one})
        return out

    def v_twist(self, vec, exponent):
        F = self.F
        return {t: F.mul(c, F.qpow(exponent(t))) for t, c in vec.items()}

    # -- the complex B_d(n) ---------------------------------------------------
    def b_delta(self, m) -> dict:
        """delta(m1|m2|m3) = sum m1'|m1'' m2|m3 + q^(2|m2|) sum m1|m2'|m2'' m3."""
        F = self.F
        m1, m2, m3 = m
        out = {}
        d1, d2 = _deg(m1), _deg(m2)
        if d1:
            for (a, v), c in self.coproduct_split(m1, d1 - 1).items():
                s, vm2 = self.mul(v, m2)
                axpy(F, out, F.mul(c, s), {(a, vm2, m3): F.one})
        if d2:
            tw = F.qpow(2 * d2)
            for (a, v), c in self.coproduct_split(m2, d2 - 1).items():
                s, vm3 = self.mul(v, m3)
                axpy(F, out, F.mul(tw, F.mul(c, s)), {(m1, a, vm3): F.one})
        return out

    def mu_B(self, a, b) -> dict:
        """Twisted product of monomial triples a, b of B(n)."""
        F = self.F
        a1, a2, a3 = a
        b1, b2, b3 = b
        pre = F.qpow((_deg(a2) + _deg(a3)) * _deg(b1))
        out = {}
        for (u, a3t), c1 in self.braid(a3, b1).items():
            for (u2, a2t), c2 in self.braid(a2, u).items():
                for (b2t, a3tt), c3 in self.braid(a3t, b2).items():
                    s1, m1 = self.mul(a1, u2)
                    s2, m2 = self.mul(a2t, b2t)
                    s3, m3 = self.mul(a3tt, b3)
                    coef = F.mul(F.mul(pre, F.mul(c1, F.mul(c2, c3))), F.mul(s1, F.mul(s2, s3)))
                    axpy(F, out, coef, {(m1, m2, m3): F.one})
        return out

    def mu_B_elements(self, x: dict, y: dict) -> dict:
        F, out = self.F, {}
        for a, u in x.items():
            for b, v in y.items():
                axpy(F, out, F.mul(u, v), self.mu_B(a, b))
        return out

    def b_delta_element(self, x: dict) -> dict:
        F, out = self.F, {}
        for m, c in x.items():
            axpy(F, out, c, self.b_delta(m))
        return out


@functools.lru_cache(maxsize=None)
def get_algebra(field, n: int, conv: Convention) -> QSym:
    return QSym(field, n, conv)


def _default_field(field):
    return field if field is not None else get_field(FieldSpec("cyclotomic", 3))


def product(a, b, conv: Convention, field=None):
    """Normal-ordered product of two monomials: (raw scalar, monomial)."""
    F = _default_field(field)
    return get_algebra(F, len(a), conv).mul(tuple(a), tuple(b))


def coproduct(d1: int, d2: int, x, conv: Convention, field=None) -> dict:
    """Delta^(d1,d2)(x) for a monomial x of degree d1 + d2."""
    x = tuple(x)
    if _deg(x) != d1 + d2:
        raise DomainError(f"coproduct ({d1},{d2}) applied to a monomial of degree {_deg(x)}")
    F = _default_field(field)
    return get_algebra(F, len(x), conv).coproduct_split(x, d1)


def braiding(x, y, conv: Convention, field=None) -> dict:
    F = _default_field(field)
    return get_algebra(F, len(x), conv).braid(tuple(x), tuple(y))


def braiding_matrix(d1: int, d2: int, n: int, conv: Convention, field=None) -> SparseMatrix:
    """R^(d1,d2): S^d1 (x) S^d2 -> S^d2 (x) S^d1 in the lexicographic monomial-pair bases."""
    F = _default_field(field)
    A = get_algebra(F, n, conv)
    src = [(x, y) for x in monomials(d1, n) for y in monomials(d2, n)]
    tgt = {(y, x): k for k, (y, x) in enumerate((y, x) for y in monomials(d2, n) for x in monomials(d1, n))}
    cols = [{tgt[t]: v for t, v in A.braid(x, y).items()} for x, y in src]
    return SparseMatrix(len(tgt), len(src), cols)


# -- relations ----------------------------------------------------------------


def _rel_detwist(A, x, y):
    F = A.F
    lhs = A.v_mu(A.v_R({(x, y): F.one}, 0), 0)
    s, m = A.mul(x, y)
    rhs = {(m,): F.mul(s, F.qpow(_deg(x) * _deg(y)))}
    return lhs, rhs


def _rel_switchprodbc(A, x, y, z):
    v = {(x, y, z): A.F.one}
    lhs = A.v_mu(A.v_R(A.v_R(v, 0), 1), 0)
    rhs = A.v_R(A.v_mu(v, 1), 0)
    return lhs, rhs


def _rel_switchprodab(A, x, y, z):
    v = {(x, y, z): A.F.one}
    lhs = A.v_mu(A.v_R(A.v_R(v, 1), 0), 1)
    rhs = A.v_R(A.v_mu(v, 0), 0)
    return lhs, rhs


def _rel_switchcoproda(A, x, y):
    v = {(x, y): A.F.one}
    lhs = A.v_R(A.v_R(A.v_delta(v, 0), 1), 0)
    rhs = A.v_delta(A.v_R(v, 0), 1)
    return lhs, rhs


def _rel_switchcoprodb(A, x, y):
    v = {(x, y): A.F.one}
    lhs = A.v_R(A.v_R(A.v_delta(v, 1), 0), 1)
    rhs = A.v_delta(A.v_R(v, 0), 0)
    return lhs, rhs


def _rel_dumbbell(A, x, y):
    v = {(x, y): A.F.one}
    lhs = A.v_delta(A.v_mu(v, 0), 0)
    w = A.v_delta(A.v_delta(v, 0), 2)  # x' | x'' | y' | y''
    w = A.v_twist(w, lambda t: _deg(t[1]) * _deg(t[2]))
    rhs = A.v_mu(A.v_mu(A.v_R(w, 1), 0), 1)
    return lhs, rhs


def _rel_dumbbell1(A, x, y):
    F = A.F
    v = {(x, y): F.one}
    lhs = {t: c for t, c in A.v_delta(A.v_mu(v, 0), 0).items() if _deg(t[1]) == 1}
    first = {t: c for t, c in A.v_delta(v, 1).items() if _deg(t[2]) == 1}
    rhs = A.v_mu(first, 0)
    second = {t: c for t, c in A.v_delta(v, 0).items() if _deg(t[1]) == 1}
    second = A.v_mu(A.v_R(second, 1), 0)
    axpy(F, rhs, F.qpow(_deg(y)), second)
    return lhs, rhs


def _rel_coassoc(A, x):
    v = {(x,): A.F.one}
    d = A.v_delta(v, 0)
    return A.v_delta(d, 0), A.v_delta(d, 1)


RELATIONS = {
    "detwist": (2, _rel_detwist),
    "switchprodbc": (3, _rel_switchprodbc),
    "switchprodab": (3, _rel_switchprodab),
    "switchcoproda": (2, _rel_switchcoproda),
    "switchcoprodb": (2, _rel_switchcoprodb),
    "dumbbell": (2, _rel_dumbbell),
    "dumbbell1": (2, _rel_dumbbell1),
    "coassociativity": (1, _rel_coassoc),
}
# relation labels (2)-(8) of the braided-structure list, and the extra check
RELATION_NUMBERS = {
    "detwist": "2",
    "switchprodbc": "3",
    "switchprodab": "4",
    "switchcoproda": "5",
    "switchcoprodb": "6",
    "dumbbell": "7",
    "dumbbell1": "8",
    "coassociativity": "coassoc",
}


@dataclass
class RelationResult:
    name: str
    passed: bool
    checked: int
    counterexample: tuple | None = None
    sides: tuple | None = None  # (lhs, rhs) rendered, for a failing input


@dataclass
class RelationReport:
    convention: Convention
    n: int
    dmax: int
    results: dict

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def failed(self) -> list[str]:
        return [k for k, r in self.results.items() if not r.passed]

    def to_json(self):
        return {
            "convention": self.convention.to_json(),
            "n": self.n,
            "dmax": self.dmax,
            "relations": {
                k: {
                    "label": RELATION_NUMBERS[k],
                    "passed": r.passed,
                    "checked": r.checked,
                    "counterexample": None if r.counterexample is None else [list(m) for m in r.counterexample],
                    "sides": None if r.sides is None else list(r.sides),
                }
                for k, r in self.results.items()
            },
        }


def _render(F, vec) -> str:
    if not vec:
        return "0"
    terms = []
    for t in sorted(vec):
        mon = " | ".join("x^" + "".join(map(str, m)) for m in t)
        terms.append(f"({F.fmt(vec[t])}) {mon}")
    return " + ".join(terms)


def _inputs(arity, n, dmax):
    monos = [m for d in range(dmax + 1) for m in monomials(d, n)]
    for combo in itertools.product(monos, repeat=arity):
        if sum(_deg(m) for m in combo) <= dmax:
            yield combo


def verify_relations(n: int, dmax: int, conv: Convention, field=None, relations=None, stop_early=False):
    """Check each braided-structure relation on every monomial input of total degree <= dmax."""
    F = _default_field(field)
    A = get_algebra(F, n, conv)
    names = list(relations) if relations is not None else list(RELATIONS)
    results = {}
    for name in names:
        arity, fn = RELATIONS[name]
        checked, bad, sides = 0, None, None
        for args in _inputs(arity, n, dmax):
            lhs, rhs = fn(A, *args)
            checked += 1
            if lhs != rhs:
                bad, sides = args, (_render(F, lhs), _render(F, rhs))
                break
        results[name] = RelationResult(name, bad is None, checked, bad, sides)
        if stop_early and bad is not None:
            break
    return RelationReport(conv, n, dmax, results)


# -- weights, Frobenius kernel ------------------------------------------------


def weight_of(label) -> tuple:
    """Total exponent vector of a monomial or of a tuple of monomials."""
    if label and isinstance(label[0], tuple):
        return tuple(map(sum, zip(*label)))
    return tuple(label)


def weight_decompose(labels) -> dict:
    """Group basis labels by weight (composition alpha)."""
    out = {}
    for lab in labels:
        out.setdefault(weight_of(lab), []).append(lab)
    return {w: out[w] for w in sorted(out)}


def phi_kernel(d: int, n: int, field=None, conv: Convention | None = None, ell: int = 3) -> list[dict]:
    """Basis of ker Delta^(ell d - 1, 1) inside S^(ell d)_q(n), as ``{monomial: raw}`` vectors."""
    F = _default_field(field)
    conv = conv or calibrated_convention(F)
    D = ell * d
    src = monomials(D, n)
    if D == 0:
        return [{src[0]: F.one}]
    A = get_algebra(F, n, conv)
    rows = {}
    cols = []
    for m in src:
        col = {}
        for t, v in A.coproduct_split(m, D - 1).items():
            col[rows.setdefault(t, len(rows))] = v
        cols.append(col)
    return [{src[j]: v for j, v in vec.items()} for vec in kernel_basis(F, cols)]


# -- B_d(n), mu_B, exponential map -------------------------------------------


def b_basis(d: int, n: int) -> dict:
    """Basis of B_d(n) by degree: triples (m1, m2, m3) with |m1|+|m2|+|m3| = d."""
    basis = {}
    for a1 in range(d + 1):
        for a2 in range(d - a1 + 1):
            a3 = d - a1 - a2
            deg = a2 + 2 * a3
            for m1 in monomials(a1, n):
                for m2 in monomials(a2, n):
                    for m3 in monomials(a3, n):
                        basis.setdefault(deg, []).append((m1, m2, m3))
    return basis


def build_B_direct(d: int, n: int, conv: Convention, field=None, check: bool = True) -> LComplex:
    """B_d(n) = sum over alpha of S^a1 (x) S^a2 (x) S^a3 with the twisted coproduct differential."""
    F = _default_field(field)
    if F.ell != 3:
        raise DomainError("the direct model is defined for q of order 3")
    A = get_algebra(F, n, conv)
    return LComplex.from_function(F, 3, b_basis(d, n), lambda m, i: A.b_delta(m), check=check)


def mu_B(a, b, conv: Convention, field=None) -> dict:
    """Product of two monomial triples (or of two ``{triple: raw}`` elements)."""
    F = _default_field(field)
    if isinstance(a, dict):
        n = len(next(iter(a))[0]) if a else len(next(iter(b))[0])
        return get_algebra(F, n, conv).mu_B_elements(a, b)
    return get_algebra(F, len(a[0]), conv).mu_B(tuple(a), tuple(b))


def mu_B_failures(n: int, max_total: int, conv: Convention, field=None, first_only=False):
    """Pairs (a, b) of basis triples, deg total <= max_total, violating
    mu_B(delta_tensor(a|b)) = delta(mu_B(a|b)).
    """
    F = _default_field(field)
    A = get_algebra(F, n, conv)
    bad = []
    for total in range(max_total + 1):
        for d1 in range(total + 1):
            B1 = [m for labs in b_basis(d1, n).values() for m in labs]
            B2 = [m for labs in b_basis(total - d1, n).values() for m in labs]
            for a in B1:
                deg_a = _deg(a[1]) + 2 * _deg(a[2])
                da = A.b_delta(a)
                for b in B2:
                    lhs = A.b_delta_element(A.mu_B(a, b))
                    rhs = A.mu_B_elements(da, {b: F.one})
                    axpy(F, rhs, F.qpow(2 * deg_a), A.mu_B_elements({a: F.one}, A.b_delta(b)))
                    if lhs != rhs:
                        bad.append((a, b))
                        if first_only:
                            return bad
    return bad


def _iota(k, n, i):
    """Image of a B(1) exponent triple under x -> x_i."""
    return tuple(tuple(e if j == i else 0 for j in range(n)) for e in k)


def exponential_iso(d: int, n: int, conv: Convention, field=None) -> ComplexMorphism:
    """b_1 | ... | b_n -> iota_1(b_1) ... iota_n(b_n), from the tensor model to the direct model."""
    from .troesch import tensor_model

    F = _default_field(field)
    A = get_algebra(F, n, conv)
    src = tensor_model(d, n, F)
    tgt = build_B_direct(d, n, conv, F)

    def image(lab, i):
        acc = {(A.one, A.one, A.one): F.one}
        for var, k in enumerate(lab):
            acc = A.mu_B_elements(acc, {_iota(k, n, var): F.one})
        return acc

    return ComplexMorphism.from_function(src, tgt, image)


# -- calibration ---------------------------------------------------------------


def candidate_conventions(ell: int = 3):
    """The finite family searched by :func:`calibrate`, in lexicographic order."""
    out = []
    for c1 in range(ell):
        for c2 in range(ell):
            for cross in ("diag", "hecke_gt", "hecke_lt"):
                if cross == "diag":
                    for u in range(ell):
                        for v in range(ell):
                            out.append(Convention(c1, c2, cross, u, v))
                else:
                    out.append(Convention(c1, c2, cross))
    return sorted(out)


@dataclass
class CalibrationResult:
    chosen: Convention
    passers: list
    rejected: dict

    def to_json(self):
        return {
            "chosen": self.chosen.to_json(),
            "passers": [c.to_json() for c in self.passers],
            "rejected": {c.descriptor(): why for c, why in self.rejected.items()},
        }


def _one_variable_coefficient_ok(F, conv, kmax=6):
    A = QSym(F, 1, conv)
    t = F.qpow(2)
    for k in range(1, kmax + 1):
        got = A.coproduct_split((k,), k - 1)
        want = qint_raw(F, k, t)
        expected = {} if F.is_zero(want) else {((k - 1,), (1,)): want}
        if got != expected:
            return False
    return True


def calibrate(field=None, rel_n: int = 2, rel_dmax: int = 3, nil_dmax: int = 4, nil_n: int = 2) -> CalibrationResult:
    """Select the structure-map convention.

    A candidate passes when (i) the one-variable coproduct coefficient of
    Delta^(k-1,1)(e^k) is (k)_{q^2}, (ii) every braided relation holds for
    n <= rel_n up to total degree rel_dmax, and (iii) the direct B_d(nil_n)
    is a 3-complex for d <= nil_dmax.  The lexicographically least passer is
    chosen.
    """
    F = _default_field(field)
    passers, rejected = [], {}
    for conv in candidate_conventions(F.ell):
        if not _one_variable_coefficient_ok(F, conv):
            rejected[conv] = "one-variable coproduct coefficient"
            continue
        why = None
        for n in range(1, rel_n + 1):
            rep = verify_relations(n, rel_dmax, conv, F, stop_early=True)
            if not rep.passed:
                why = f"relation {RELATION_NUMBERS[rep.failed()[0]]} at n={n}"
                break
        if why is None:
            for d in range(nil_dmax + 1):
                if not check_nilpotency(build_B_direct(d, nil_n, conv, F, check=False)):
                    why = f"delta^3 != 0 on B_{d}({nil_n})"
                    break
        if why is None:
            passers.append(conv)
        else:
            rejected[conv] = why
    if not passers:
        raise NotCalibratedError("no candidate convention passes calibration")
    chosen = passers[0]
    chosen = Convention(chosen.c1, chosen.c2, chosen.cross, chosen.u, chosen.v, calibrated=True)
    return CalibrationResult(chosen, passers, rejected)


_CALIBRATION = {}


def calibrated_convention(field=None) -> Convention:
    """Run :func:`calibrate` once per field and return the frozen choice."""
    F = _default_field(field)
    if F.spec not in _CALIBRATION:
        _CALIBRATION[F.spec] = calibrate(F)
    return _CALIBRATION[F.spec].chosen
