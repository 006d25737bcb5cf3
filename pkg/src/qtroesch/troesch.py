"""Troesch 3-complexes B_d(n): assembly, homology, coresolutions and checks.

The default model is the tensor model

    B_d(n) = sum over alpha in Omega(d, n) of B_a1(1) (x) ... (x) B_an(1)

with the twisted tensor differential; a basis label is a tuple of n slot
triples (one per variable).  The direct model (:func:`qpoly.build_B_direct`)
needs a calibrated :class:`~qtroesch.qpoly.Convention` and is used as a
cross-check.
"""

from __future__ import annotations

import functools
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb

from .coeff import FieldSpec, get_field
from .errors import DomainError, NotCalibratedError, PreconditionError
from .line import build_B1, embed, line_delta, line_product_raw, right_multiplication, slot_monomials
from .linalg import rank
from .ncomplex import (
    ComplexMorphism,
    HomologyTable,
    LComplex,
    classify,
    contract,
    induced_morphism,
    quotient,
    shift,
    tensor,
)

__all__ = [
    "TroeschSpec",
    "tensor_model",
    "build_B",
    "troesch_homology",
    "homology_tables",
    "expected_h0",
    "coresolution",
    "CoresolutionResult",
    "degree0_kernel_matches_phi",
    "EGrading",
    "E_graded_dims",
    "B_graded_dims",
    "divisible_slice",
    "compositions",
    "LadderStep",
    "proof_ladder",
    "kunneth_check",
]


@dataclass(frozen=True)
class TroeschSpec:
    d: int
    n: int = 1
    model: str = "tensor"
    field: FieldSpec = FieldSpec("cyclotomic", 3)
    convention: object = None

    def __post_init__(self):
        if self.d < 0 or self.n < 0:
            raise DomainError("d and n must be non-negative")
        if self.model not in ("tensor", "direct"):
            raise DomainError(f"unknown model {self.model!r}")
        if self.field.ell != 3:
            raise DomainError("Troesch complexes are built here for q of order 3")

    def to_json(self):
        out = {"d": self.d, "n": self.n, "model": self.model, "field": self.field.to_json()}
        out["convention"] = None if self.convention is None else self.convention.to_json()
        return out


def compositions(d: int, parts: int) -> list[tuple]:
    """Omega(d, parts): tuples of `parts` non-negative integers summing to d, lexicographic."""
    return slot_monomials(d, parts) if parts else ([()] if d == 0 else [])


def _slot_degree(k):
    return k[1] + 2 * k[2]


@functools.lru_cache(maxsize=None)
def tensor_model(d: int, n: int, field) -> LComplex:
    """The tensor model of B_d(n); delta on factor j carries q^(2 * degree of factors before j)."""
    basis = {}
    for alpha in compositions(d, n):
        for labels in itertools.product(*(slot_monomials(a) for a in alpha)):
            deg = sum(_slot_degree(k) for k in labels)
            basis.setdefault(deg, []).append(tuple(labels))

    def image(lab, i):
        out = {}
        before = 0
        for j, k in enumerate(lab):
            tw = field.qpow(2 * before)
            for k2, c in line_delta(field, k).items():
                out[lab[:j] + (k2,) + lab[j + 1 :]] = field.mul(tw, c)
            before += _slot_degree(k)
        return out

    return LComplex.from_function(field, 3, basis, image)


def build_B(spec: TroeschSpec) -> LComplex:
    F = get_field(spec.field)
    if spec.model == "tensor":
        return tensor_model(spec.d, spec.n, F)
    conv = spec.convention
    if conv is None or not getattr(conv, "calibrated", False):
        raise NotCalibratedError("the direct model needs a calibrated convention")
    from .qpoly import build_B_direct

    return build_B_direct(spec.d, spec.n, conv, F)


def expected_h0(d: int, n: int) -> int:
    """binomial(n + d/3 - 1, d/3) when 3 | d, else 0."""
    if d % 3:
        return 0
    return comb(n + d // 3 - 1, d // 3)


def troesch_homology(spec: TroeschSpec) -> HomologyTable:
    return classify(build_B(spec))


def _table_job(spec):
    return spec, troesch_homology(spec)


def homology_tables(specs, jobs: int = 1) -> list[tuple]:
    """(spec, HomologyTable) pairs in input order; ``jobs > 1`` uses a process pool."""
    specs = list(specs)
    if jobs <= 1 or len(specs) <= 1:
        return [_table_job(s) for s in specs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_table_job, specs))


# -- coresolutions --------------------------------------------------------------


@dataclass
class CoresolutionResult:
    complex: LComplex
    s: int
    position_dims: dict
    homology: dict

    @property
    def exact_in_positive_positions(self) -> bool:
        return all(h == 0 for p, h in self.homology.items() if p > 0)

    @property
    def h0(self) -> int:
        return self.homology.get(0, 0)


def coresolution(spec: TroeschSpec, s: int) -> CoresolutionResult:
    """The contraction C_[s] of B_d(n), with its ordinary homology per position."""
    if spec.d % 3:
        raise DomainError(f"coresolution needs 3 | d, got d={spec.d}")
    if s not in (1, 2):
        raise DomainError(f"s must be 1 or 2, got {s}")
    C = contract(build_B(spec), s)
    hom = {p: C.homology(1, p) for p in C.degrees()}
    return CoresolutionResult(C, s, C.graded_dims(), hom)


def _degree0_monomial(label, model):
    """Degree-0 basis label -> exponent vector in S^d(n)."""
    if model == "tensor":
        return tuple(k[0] for k in label)  # ((a1,0,0), ..., (an,0,0))
    return tuple(label[0])  # (m, 1, 1)


def degree0_kernel_matches_phi(spec: TroeschSpec, s: int = 1) -> bool:
    """ker(delta^s) on B^0 equals phi_kernel(d/3, n) as a subspace of S^d(n).

    Degree 0 of B_d(n) is S^d(n); in the tensor model the exponential map is the
    identity on these monomials.
    """
    from .qpoly import calibrated_convention, phi_kernel

    if spec.d % 3:
        raise DomainError("needs 3 | d")
    F = get_field(spec.field)
    B = build_B(spec)
    ker = [{_degree0_monomial(lab, spec.model): v for lab, v in vec.items()} for vec in B.kernel(0, s)]
    conv = spec.convention or calibrated_convention(F)
    phi = phi_kernel(spec.d // 3, spec.n, F, conv)
    keys = {m: i for i, m in enumerate(sorted({m for v in ker + phi for m in v}))}

    def idx(vs):
        return [{keys[m]: a for m, a in v.items()} for v in vs]

    r1, r2 = rank(F, idx(ker)), rank(F, idx(phi))
    return r1 == r2 == rank(F, idx(ker) + idx(phi))


# -- graded dimensions ------------------------------------------------------------


@dataclass
class EGrading:
    """Graded dimensions {degree: dim} of S^d_E (even degrees only)."""

    d: int
    ell: int
    dims: dict

    def as_list(self):
        return [(k, self.dims[k]) for k in sorted(self.dims)]

    def total(self) -> int:
        return sum(self.dims.values())


def _alpha_degree(alpha):
    return sum(i * a for i, a in enumerate(alpha))


def E_graded_dims(d: int, ell: int = 3) -> EGrading:
    """Number of alpha in Omega(d, ell) with deg(alpha) = k, placed in degree 2k."""
    if d < 0:
        raise DomainError("d must be non-negative")
    if ell < 3 or ell % 2 == 0:
        raise DomainError(f"ell must be odd and >= 3, got {ell}")
    dims = {}
    for alpha in compositions(d, ell):
        k = 2 * _alpha_degree(alpha)
        dims[k] = dims.get(k, 0) + 1
    return EGrading(d, ell, dict(sorted(dims.items())))


def B_graded_dims(d: int, n: int) -> dict:
    """Graded dimensions of B_d(n) from counting alone: sum over alpha of prod dim S^a_i(n)."""
    dims = {}
    for alpha in compositions(d, 3):
        size = 1
        for a in alpha:
            size *= comb(a + n - 1, a) if n else int(a == 0)
        if size:
            k = _alpha_degree(alpha)
            dims[k] = dims.get(k, 0) + size
    return dict(sorted(dims.items()))


def divisible_slice(d: int, n: int) -> dict:
    """Count of basis triples (m1, m2, m3) of B_d(n) with every exponent divisible by 3, by degree."""
    if d % 3:
        raise DomainError(f"divisible_slice needs 3 | d, got d={d}")
    from .qpoly import b_basis

    dims = {}
    for deg, labs in b_basis(d, n).items():
        c = sum(1 for m in labs if all(e % 3 == 0 for slot in m for e in slot))
        if c:
            dims[deg] = c
    return dict(sorted(dims.items()))


# -- the inductive proof, step by step ------------------------------------------


@dataclass
class LadderStep:
    name: str
    complex: LComplex
    expected_dims: dict
    expected_class: str
    table: HomologyTable

    @property
    def dims(self) -> dict:
        return {k: v for k, v in self.complex.graded_dims().items() if v}

    @property
    def ok(self) -> bool:
        return self.dims == self.expected_dims and self.table.classification == self.expected_class


def _step(name, C, dims, cls):
    return LadderStep(name, C, {k: v for k, v in dims.items() if v}, cls, classify(C))


def _right_mult(src: LComplex, tgt: LComplex, k, field) -> ComplexMorphism:
    def image(m, i):
        s, prod = line_product_raw(field, m, k)
        return {prod: s}

    return ComplexMorphism.from_function(src, tgt, image)


def proof_ladder(d: int, field=None) -> list[LadderStep]:
    """Rebuild the quotients used in the induction for B_d(1), d >= 2.

    d = 2, 0 mod 3: Q = coker(B_{d-1}[2] -> B_d, times 1|1|e).
    d = 1 mod 3:    Q0 = coker(Psi0), Q1 = coker(B_{d-3}[2] -> B_{d-2}),
                    Q2 = coker(Psi1 : Q1[3] -> Q0), Q3 = coker(Psi2 : B_1 -> Q2).
    """
    F = field if field is not None else get_field(FieldSpec("cyclotomic", 3))
    if d < 2:
        raise PreconditionError("the ladder starts at d = 2")
    line = {k: 1 for k in range(d + 1)}
    steps = []
    if d % 3 in (0, 2):
        Q, _ = quotient(embed(d - 1, (0, 0, 1), F))
        steps.append(_step("Q", Q, line, "acyclic" if d % 3 == 2 else "coresolution"))
        steps.append(_step("B", build_B1(d, F), dict(build_B1(d, F).graded_dims()), steps[0].expected_class))
        return steps

    Bd = build_B1(d, F)
    psi0 = embed(d - 2, (0, 0, 2), F)
    Q0, p0 = quotient(psi0)
    q0_dims = {k: (1 if k in (0, 1, d + 1) else 2) for k in range(d + 2)}
    steps.append(_step("Q0", Q0, q0_dims, "acyclic"))

    # Q1 lives inside B_{d-2}[3], built directly on the shifted object so Psi1 can reuse it
    S = shift(build_B1(d - 2, F), 3)
    Q1, p1 = quotient(_right_mult(shift(build_B1(d - 3, F), 5), S, (0, 0, 1), F))
    steps.append(_step("Q1[3]", Q1, {k + 3: 1 for k in range(d - 1)}, "acyclic"))

    lift = _right_mult(S, Bd, (0, 1, 1), F)
    psi1 = induced_morphism(lift, p1, p0)
    Q2, p2 = quotient(psi1)
    steps.append(_step("Q2", Q2, {k: (2 if k == 2 else 1) for k in range(d + 1)}, "acyclic"))

    psi2 = p2.compose(p0.compose(right_multiplication(1, (d - 1, 0, 0), F)))
    Q3, _ = quotient(psi2)
    steps.append(_step("Q3", Q3, {k: 1 for k in range(2, d + 1)}, "acyclic"))
    steps.append(_step("B", Bd, dict(Bd.graded_dims()), "acyclic"))
    return steps


def kunneth_check(a: int, b: int, field=None) -> HomologyTable:
    """classify(B_{3a}(1) (x) B_{3b}(1))."""
    F = field if field is not None else get_field(FieldSpec("cyclotomic", 3))
    return classify(tensor(build_B1(3 * a, F), build_B1(3 * b, F)))
