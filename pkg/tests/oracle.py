"""Independent reference computations built on sympy only.

Nothing here touches the package's arithmetic or elimination code; the tests
compare against these (and against values frozen from them).
"""

from itertools import product

from sympy import GF, QQ, Poly, Rational, cyclotomic_poly, expand, exp, pi, I, sqrt, symbols, sympify
from sympy.polys.matrices import DomainMatrix

z = symbols("z")
K3 = QQ.algebraic_field(sqrt(-3))
Q3 = (-1 + sqrt(-3)) / 2  # a primitive cube root of unity


def raw_to_poly(raw, ell):
    """Cyclotomic raw element (numerators..., denominator) -> sympy polynomial in z."""
    *nums, den = raw
    return sum(Rational(c, den) * z**i for i, c in enumerate(nums))


def reduce_cyclotomic(expr, ell):
    """Canonical coefficient list of expr mod Phi_ell(z), length phi(ell)."""
    phi = Poly(cyclotomic_poly(ell, z), z)
    r = Poly(expand(expr), z).rem(phi)
    coeffs = r.all_coeffs()[::-1]
    return [Rational(c) for c in coeffs] + [Rational(0)] * (phi.degree() - len(coeffs))


def raw_coeffs(raw):
    *nums, den = raw
    return [Rational(c, den) for c in nums]


def qbinom_product(n, k, t):
    """Gaussian binomial as a sympy polynomial in t from the product formula."""
    tt = symbols("tt")
    num, den = 1, 1
    for j in range(1, k + 1):
        num *= 1 - tt ** (n - j + 1)
        den *= 1 - tt**j
    quo = Poly(expand(num), tt).exquo(Poly(expand(den), tt))
    return expand(quo.as_expr().subs(tt, t))


def _line_delta(k1, k2, k3, q):
    """delta on B(1), written straight from the formula with q a sympy number."""
    t = q**2
    out = {}
    if k1:
        out[(k1 - 1, k2 + 1, k3)] = sum(t**j for j in range(k1))
    if k2:
        out[(k1, k2 - 1, k3 + 1)] = t**k2 * sum(t**j for j in range(k2))
    return out


def line_basis(d):
    return sorted((a, b, d - a - b) for a in range(d + 1) for b in range(d - a + 1))


def line_matrices(d, q=Q3):
    """{degree: (rows, cols, dense sympy matrix)} for B_d(1)."""
    basis = {}
    for m in line_basis(d):
        basis.setdefault(m[1] + 2 * m[2], []).append(m)
    mats = {}
    for i, src in basis.items():
        tgt = basis.get(i + 1, [])
        rows = [[0] * len(src) for _ in tgt]
        for j, m in enumerate(src):
            for m2, c in _line_delta(*m, q).items():
                rows[tgt.index(m2)][j] = c
        mats[i] = rows
    return basis, mats


def dense_rank(rows, ncols, domain="cyclotomic3", p=None):
    if not rows or not ncols:
        return 0
    if domain == "cyclotomic3":
        K = K3
        data = [[K.from_sympy(expand(sympify(x))) for x in r] for r in rows]
    else:
        K = GF(p)
        data = [[K(int(x)) for x in r] for r in rows]
    return DomainMatrix(data, (len(rows), ncols), K).rank()


def matmul(a, b):
    """Dense product of nested lists (a is m x k, b is k x n)."""
    if not a or not b:
        return []
    n = len(b[0])
    return [[expand(sum(a[i][t] * b[t][j] for t in range(len(b)))) for j in range(n)] for i in range(len(a))]


def homology_table(basis, mats, ell=3):
    """{(i, s): dim} from dense ranks of composed differentials."""
    dims = {i: len(v) for i, v in basis.items()}
    top = max(dims)

    def power(i, p):
        m = None
        for step in range(p):
            blk = mats.get(i + step)
            if blk is None or not dims.get(i + step + 1):
                return None
            m = blk if m is None else matmul(blk, m)
        return m

    def rk(i, p):
        if i < 0 or not dims.get(i):
            return 0
        m = power(i, p)
        return 0 if m is None else dense_rank(m, dims[i])

    out = {}
    for i in range(top + 1):
        for s in range(1, ell):
            out[(i, s)] = dims.get(i, 0) - rk(i, s) - rk(i - ell + s, ell - s)
    return out


def primitive_root_mod(p, ell):
    """Smallest residue of multiplicative order exactly ell, by brute force."""
    for r in range(2, p):
        if pow(r, ell, p) == 1 and all(pow(r, j, p) != 1 for j in range(1, ell)):
            return r
    return None


def numeric_root(ell):
    return complex(exp(2 * pi * I / ell).evalf(30))


def ansatz_delta(k, coeffs, base, q, ell):
    """One application of a candidate differential to the slot monomial k, written from the formula."""
    t = q**base
    out = {}
    for i in range(ell - 1):
        c = coeffs[i]
        if c is None or not k[i]:
            continue
        lam = q ** ((c[0] + sum(a * b for a, b in zip(c[1:], k))) % ell)
        tgt = list(k)
        tgt[i] -= 1
        tgt[i + 1] += 1
        tgt = tuple(tgt)
        out[tgt] = out.get(tgt, 0) + lam * sum(t**j for j in range(k[i]))
    return out


def ansatz_power_vanishes(d, coeffs, base, ell, q=None):
    """True when delta^ell kills every weight-d monomial with ell slots."""
    q = sympify(exp(2 * pi * I / ell)) if q is None else q
    monos = [m for m in product(range(d + 1), repeat=ell) if sum(m) == d]
    for m in monos:
        vec = {m: 1}
        for _ in range(ell):
            nxt = {}
            for src, a in vec.items():
                for tgt, b in ansatz_delta(src, coeffs, base, q, ell).items():
                    nxt[tgt] = nxt.get(tgt, 0) + a * b
            vec = nxt
        for v in vec.values():
            if abs(complex(sympify(v).evalf(30))) > 1e-20:
                return False
    return True
