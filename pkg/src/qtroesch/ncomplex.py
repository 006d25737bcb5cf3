"""Finite ell-complexes (delta^ell = 0) with explicit bases.

An :class:`LComplex` holds, for every non-zero degree, a canonically sorted
tuple of hashable basis labels and the sparse matrix of delta from that degree
to the next.  Slice homology

    H^i_[s] = ker(delta^s : C^i -> C^{i+s}) / im(delta^{ell-s} : C^{i-ell+s} -> C^i)

is computed from exact ranks of composite powers of delta.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import (
    DomainError,
    IncompatibleError,
    NilpotencyError,
    NotChainMapError,
    NotInjectiveError,
)
from .linalg import EchelonBasis, SparseMatrix, axpy, kernel_basis, rank

__all__ = [
    "LComplex",
    "ComplexMorphism",
    "HomologyTable",
    "Projection",
    "check_nilpotency",
    "homology",
    "classify",
    "shift",
    "shift_morphism",
    "tensor",
    "direct_sum",
    "contract",
    "quotient",
    "induced_morphism",
    "point_complex",
    "staircase",
    "zero_complex",
]


class LComplex:
    def __init__(self, field, ell: int, basis: dict, diff: dict | None = None, check: bool = True):
        if ell < 2:
            raise DomainError("ell-complexes need ell >= 2")
        self.field = field
        self.ell = ell
        self.basis = {i: tuple(sorted(labels)) for i, labels in basis.items() if len(labels)}
        if any(i < 0 for i in self.basis):
            raise DomainError("degrees must be non-negative")
        self._index = {i: {lab: k for k, lab in enumerate(labs)} for i, labs in self.basis.items()}
        for i, labs in self.basis.items():
            if len(self._index[i]) != len(labs):
                raise ValueError(f"repeated basis label in degree {i}")
        self.diff = {}
        for i, m in (diff or {}).items():
            if i in self.basis and not m.is_zero():
                if (m.ncols, m.nrows) != (self.dim(i), self.dim(i + 1)):
                    raise ValueError(f"differential at degree {i} has wrong shape")
                self.diff[i] = m
        self._powers = {}
        self._ranks = {}
        if check:
            bad = self.nilpotency_failure()
            if bad is not None:
                raise NilpotencyError(f"delta^{ell} != 0 starting in degree {bad}", degree=bad)

    @classmethod
    def from_function(cls, field, ell, basis, image, check=True):
        """Build delta from ``image(label, degree) -> {label: raw}`` (labels of degree + 1)."""
        basis = {i: tuple(sorted(labs)) for i, labs in basis.items() if len(labs)}
        diff = {}
        for i, labs in basis.items():
            target = basis.get(i + 1, ())
            index = {lab: k for k, lab in enumerate(target)}
            cols = []
            for lab in labs:
                col = {}
                for t, v in image(lab, i).items():
                    if field.is_zero(v):
                        continue
                    try:
                        k = index[t]
                    except KeyError:
                        raise ValueError(f"image of {lab!r} hits {t!r}, not a basis label of degree {i + 1}") from None
                    if k in col:
                        v = field.add(col[k], v)
                        if field.is_zero(v):
                            del col[k]
                            continue
                    col[k] = v
                cols.append(col)
            diff[i] = SparseMatrix(len(target), len(labs), cols)
        return cls(field, ell, basis, diff, check=check)

    # -- shape ---------------------------------------------------------------
    def dim(self, i: int) -> int:
        return len(self.basis.get(i, ()))

    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def top_degree(self) -> int:
        return max(self.basis) if self.basis else -1

    def total_dim(self) -> int:
        return sum(len(v) for v in self.basis.values())

    def graded_dims(self) -> dict[int, int]:
        return {i: len(self.basis[i]) for i in sorted(self.basis)}

    def labels(self, i: int) -> tuple:
        return self.basis.get(i, ())

    def index(self, i: int, label) -> int:
        return self._index[i][label]

    def degree_of(self, label):
        for i, idx in self._index.items():
            if label in idx:
                return i
        raise KeyError(label)

    # -- differential --------------------------------------------------------
    def matrix(self, i: int) -> SparseMatrix:
        m = self.diff.get(i)
        if m is None:
            return SparseMatrix.zero(self.dim(i + 1), self.dim(i))
        return m

    def power(self, i: int, p: int) -> SparseMatrix:
        """delta^p : C^i -> C^{i+p}."""
        if p == 0:
            return SparseMatrix.identity(self.field, self.dim(i))
        key = (i, p)
        m = self._powers.get(key)
        if m is None:
            if p == 1:
                m = self.matrix(i)
            else:
                m = self.matrix(i + p - 1).compose(self.field, self.power(i, p - 1))
            self._powers[key] = m
        return m

    def rank(self, i: int, p: int) -> int:
        if self.dim(i) == 0 or self.dim(i + p) == 0:
            return 0
        key = (i, p)
        r = self._ranks.get(key)
        if r is None:
            r = self.power(i, p).rank(self.field)
            self._ranks[key] = r
        return r

    def image(self, label, i: int | None = None) -> dict:
        """delta(label) as ``{label: raw}``."""
        if i is None:
            i = self.degree_of(label)
        col = self.matrix(i).cols[self._index[i][label]]
        target = self.basis.get(i + 1, ())
        return {target[k]: v for k, v in col.items()}

    def apply(self, vec: dict, i: int, p: int = 1) -> dict:
        """delta^p of a vector ``{label: raw}`` living in degree i."""
        idx = self._index.get(i, {})
        v = {idx[lab]: a for lab, a in vec.items()}
        out = self.power(i, p).apply(self.field, v)
        target = self.basis.get(i + p, ())
        return {target[k]: a for k, a in out.items()}

    def nilpotency_failure(self):
        for i in self.degrees():
            if self.dim(i + self.ell) and not self.power(i, self.ell).is_zero():
                return i
        return None

    # -- homology ------------------------------------------------------------
    def homology(self, s: int, i: int) -> int:
        if not 1 <= s <= self.ell - 1:
            raise DomainError(f"s must lie in 1..{self.ell - 1}, got {s}")
        dim_ker = self.dim(i) - self.rank(i, s)
        r_in = self.rank(i - self.ell + s, self.ell - s) if i - self.ell + s >= 0 else 0
        h = dim_ker - r_in
        assert h >= 0, "image exceeds kernel: complex is not nilpotent"
        return h

    def kernel(self, i: int, s: int) -> list[dict]:
        """Basis of ker(delta^s) in degree i, as ``{label: raw}`` vectors."""
        labs = self.labels(i)
        if self.dim(i + s) == 0:
            return [{lab: self.field.one} for lab in labs]
        return [{labs[k]: v for k, v in vec.items()} for vec in self.power(i, s).kernel(self.field)]

    def homology_representatives(self, s: int, i: int) -> list[dict]:
        """Kernel vectors of delta^s at degree i completing im(delta^(ell-s)) to the kernel."""
        F = self.field
        idx = self._index.get(i, {})
        span = EchelonBasis(F)
        j = i - self.ell + s
        if j >= 0:
            for col in self.power(j, self.ell - s).cols:
                span.add(col)
        reps = []
        for vec in self.kernel(i, s):
            if span.add({idx[lab]: a for lab, a in vec.items()}):
                reps.append(vec)
        return reps

    def __repr__(self):
        return f"LComplex(ell={self.ell}, dims={self.graded_dims()})"


@dataclass
class HomologyTable:
    ell: int
    entries: dict = field(default_factory=dict)
    classification: str = "acyclic"
    degree0: tuple = ()

    def dim(self, i, s):
        return self.entries.get((i, s), 0)

    def to_json(self):
        return {
            "ell": self.ell,
            "entries": [{"i": i, "s": s, "dim": d} for (i, s), d in sorted(self.entries.items())],
            "class": self.classification,
            "h0": list(self.degree0),
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    def to_csv_rows(self):
        rows = [("i", "s", "dim")]
        rows += [(i, s, d) for (i, s), d in sorted(self.entries.items())]
        return rows


def check_nilpotency(C: LComplex) -> bool:
    return C.nilpotency_failure() is None


def homology(C: LComplex, s: int, i: int) -> int:
    if not 1 <= s <= C.ell - 1:
        raise DomainError(f"s must lie in 1..{C.ell - 1}, got {s}")
    if i < 0:
        return 0
    return C.homology(s, i)


def classify(C: LComplex) -> HomologyTable:
    ell = C.ell
    entries = {}
    for i in range(0, C.top_degree() + 1):
        for s in range(1, ell):
            entries[(i, s)] = C.homology(s, i) if C.dim(i) else 0
    deg0 = tuple(entries.get((0, s), 0) for s in range(1, ell))
    higher = any(d for (i, _), d in entries.items() if i > 0)
    if not any(entries.values()):
        cls = "acyclic"
    elif not higher and deg0[0] > 0 and len(set(deg0)) == 1:
        cls = "coresolution"
    else:
        cls = "other"
    return HomologyTable(ell, entries, cls, deg0)


def zero_complex(field, ell):
    return LComplex(field, ell, {})


def point_complex(field, ell, degree=0, label="1"):
    """The base field concentrated in one degree."""
    return LComplex(field, ell, {degree: (label,)})


def staircase(field, ell, length=None, start=0):
    """K -> K -> ... -> K (``length`` copies, identity maps); length defaults to ell."""
    length = ell if length is None else length
    basis = {start + k: (k,) for k in range(length)}
    return LComplex.from_function(
        field, ell, basis, lambda lab, i: {lab + 1: field.one} if lab + 1 < length else {}
    )


def shift(C: LComplex, t: int) -> LComplex:
    """C[t]^i = C^{i-t}; same labels and matrices."""
    if t < 0:
        raise DomainError("shift amount must be non-negative")
    if t == 0:
        return C
    basis = {i + t: labs for i, labs in C.basis.items()}
    diff = {i + t: m for i, m in C.diff.items()}
    return LComplex(C.field, C.ell, basis, diff, check=False)


def _same_ground(C, D):
    if C.ell != D.ell:
        raise IncompatibleError(f"ell mismatch: {C.ell} vs {D.ell}")
    if C.field is not D.field:
        raise IncompatibleError("complexes live over different fields")


def tensor(C: LComplex, D: LComplex, check=True) -> LComplex:
    """Twisted tensor product: delta(c x d) = delta(c) x d + q^(2 deg c) c x delta(d)."""
    _same_ground(C, D)
    F = C.field
    basis = {}
    for i, ls in C.basis.items():
        for j, ms in D.basis.items():
            basis.setdefault(i + j, []).extend((a, b) for a in ls for b in ms)

    deg_of = {lab: i for i, labs in C.basis.items() for lab in labs}
    if len(deg_of) != C.total_dim():
        raise ValueError("tensor needs labels of the left factor to be distinct across degrees")

    def image(lab, k):
        a, b = lab
        i = deg_of[a]
        j = k - i
        out = {}
        for a2, v in C.image(a, i).items():
            out[(a2, b)] = v
        tw = F.qpow(2 * i)
        for b2, v in D.image(b, j).items():
            key = (a, b2)
            val = F.mul(tw, v)
            if key in out:
                val = F.add(out[key], val)
            out[key] = val
        return out

    return LComplex.from_function(F, C.ell, basis, image, check=check)


def direct_sum(*complexes: LComplex) -> LComplex:
    """Labels become ``(summand index, label)``."""
    if not complexes:
        raise DomainError("direct_sum needs at least one summand")
    first = complexes[0]
    for C in complexes[1:]:
        _same_ground(first, C)
    basis = {}
    for k, C in enumerate(complexes):
        for i, labs in C.basis.items():
            basis.setdefault(i, []).extend((k, lab) for lab in labs)

    def image(lab, i):
        k, inner = lab
        return {(k, t): v for t, v in complexes[k].image(inner, i).items()}

    return LComplex.from_function(first.field, first.ell, basis, image)


def contract(C: LComplex, s: int) -> LComplex:
    """Ordinary complex C^0 -(delta^s)-> C^s -(delta^(ell-s))-> C^ell -> ...

    Returned as a 2-complex whose degree p is the position p of the
    contraction, so ``homology(result, 1, p)`` is ordinary homology.
    """
    ell = C.ell
    if not 1 <= s <= ell - 1:
        raise DomainError(f"s must lie in 1..{ell - 1}, got {s}")

    def source_degree(p):
        return (p // 2) * ell + (s if p % 2 else 0)

    top = C.top_degree()
    basis, diff = {}, {}
    p = 0
    while source_degree(p) <= top:
        basis[p] = C.labels(source_degree(p))
        p += 1
    for p in basis:
        step = s if p % 2 == 0 else ell - s
        m = C.power(source_degree(p), step)
        if p + 1 in basis:
            diff[p] = m
    out = LComplex(C.field, 2, {p: labs for p, labs in basis.items()}, diff, check=False)
    if out.nilpotency_failure() is not None:
        raise NilpotencyError("contraction is not a complex", degree=out.nilpotency_failure())
    return out


class ComplexMorphism:
    """Degree-preserving linear map between two complexes (not necessarily a chain map)."""

    def __init__(self, source: LComplex, target: LComplex, maps: dict):
        _same_ground(source, target)
        self.source = source
        self.target = target
        self.maps = {}
        for i in source.degrees():
            m = maps.get(i)
            if m is None:
                m = SparseMatrix.zero(target.dim(i), source.dim(i))
            if (m.nrows, m.ncols) != (target.dim(i), source.dim(i)):
                raise ValueError(f"morphism block at degree {i} has wrong shape")
            self.maps[i] = m

    @classmethod
    def from_function(cls, source, target, image):
        """``image(label, degree) -> {target label: raw}``."""
        F = source.field
        maps = {}
        for i, labs in source.basis.items():
            cols = []
            for lab in labs:
                col = {}
                for t, v in image(lab, i).items():
                    if F.is_zero(v):
                        continue
                    k = target.index(i, t)
                    if k in col:
                        v = F.add(col[k], v)
                        if F.is_zero(v):
                            del col[k]
                            continue
                    col[k] = v
                cols.append(col)
            maps[i] = SparseMatrix(target.dim(i), len(labs), cols)
        return cls(source, target, maps)

    def matrix(self, i):
        return self.maps.get(i) or SparseMatrix.zero(self.target.dim(i), self.source.dim(i))

    def image(self, label, i) -> dict:
        col = self.maps[i].cols[self.source.index(i, label)]
        labs = self.target.labels(i)
        return {labs[k]: v for k, v in col.items()}

    def apply(self, vec: dict, i: int) -> dict:
        idx = self.source._index.get(i, {})
        out = self.matrix(i).apply(self.source.field, {idx[lab]: a for lab, a in vec.items()})
        labs = self.target.labels(i)
        return {labs[k]: a for k, a in out.items()}

    def chain_failure(self):
        """First degree i with delta f != f delta on C^i, or None."""
        F = self.source.field
        for i in self.source.degrees():
            lhs = self.target.matrix(i).compose(F, self.matrix(i))
            rhs = self.matrix(i + 1).compose(F, self.source.matrix(i))
            if lhs != rhs:
                return i
        return None

    def is_chain_map(self) -> bool:
        return self.chain_failure() is None

    def is_injective(self) -> bool:
        F = self.source.field
        return all(self.maps[i].rank(F) == self.source.dim(i) for i in self.source.degrees())

    def is_isomorphism(self) -> bool:
        degs = set(self.source.degrees()) | set(self.target.degrees())
        return all(self.source.dim(i) == self.target.dim(i) for i in degs) and self.is_injective()

    def compose(self, other: "ComplexMorphism") -> "ComplexMorphism":
        """self after other."""
        if other.target is not self.source:
            raise IncompatibleError("morphisms are not composable")
        F = self.source.field
        maps = {i: self.matrix(i).compose(F, other.matrix(i)) for i in other.source.degrees()}
        return ComplexMorphism(other.source, self.target, maps)


class Projection(ComplexMorphism):
    """Quotient map C -> C/im(f); remembers the spans it kills per degree."""

    def __init__(self, source, target, maps, kernel_spans):
        super().__init__(source, target, maps)
        self.kernel_spans = kernel_spans


def shift_morphism(f: ComplexMorphism, t: int) -> ComplexMorphism:
    src, tgt = shift(f.source, t), shift(f.target, t)
    return ComplexMorphism(src, tgt, {i + t: m for i, m in f.maps.items()})


def quotient(f: ComplexMorphism, check: bool = True):
    """Cokernel of an injective chain map, with its projection.

    The quotient's basis is the set of target labels that are not pivots of the
    image, so every class is written [label] with label a basis element of the
    target; delta of the quotient is delta of the target reduced modulo the
    image.
    """
    F = f.source.field
    C = f.target
    if check:
        for i in f.source.degrees():
            if f.maps[i].rank(F) != f.source.dim(i):
                raise NotInjectiveError(f"morphism is not injective in degree {i}")
        bad = f.chain_failure()
        if bad is not None:
            raise NotChainMapError(f"morphism does not commute with delta in degree {bad}")
    spans = {}
    for i in C.degrees():
        span = EchelonBasis(F)
        if i in f.maps:
            for col in f.maps[i].cols:
                span.add(col)
        spans[i] = span
    basis = {i: [lab for k, lab in enumerate(C.labels(i)) if k not in spans[i].pivots] for i in C.degrees()}

    def residual(i, vec):
        return spans[i].reduce(vec) if i in spans else {}

    def image(lab, i):
        col = C.matrix(i).cols[C.index(i, lab)]
        res = residual(i + 1, col)
        labs = C.labels(i + 1)
        return {labs[k]: v for k, v in res.items()}

    Q = LComplex.from_function(F, C.ell, basis, image, check=check)

    def project(lab, i):
        res = residual(i, {C.index(i, lab): F.one})
        labs = C.labels(i)
        return {labs[k]: v for k, v in res.items()}

    proj = ComplexMorphism.from_function(C, Q, project)
    return Q, Projection(C, Q, proj.maps, spans)


def induced_morphism(f: ComplexMorphism, source_proj: Projection, target_proj: Projection, check=True):
    """Map between quotients induced by ``f`` (which need not be a chain map).

    ``f`` must send the span killed by ``source_proj`` into the span killed by
    ``target_proj``; the result sends [a] to target_proj(f(a)).
    """
    F = f.source.field
    if f.source is not source_proj.source or f.target is not target_proj.source:
        raise IncompatibleError("projections do not match the morphism's ends")
    if check:
        for i, span in source_proj.kernel_spans.items():
            for vec in span.pivots.values():
                img = f.matrix(i).apply(F, vec)
                if img and target_proj.kernel_spans[i].reduce(img):
                    raise NotChainMapError(f"map does not descend to the quotient in degree {i}")
    QA, QC = source_proj.target, target_proj.target

    def image(lab, i):
        v = f.image(lab, i)
        return target_proj.apply(v, i)

    return ComplexMorphism.from_function(QA, QC, image)
