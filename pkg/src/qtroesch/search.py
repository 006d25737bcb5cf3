"""Bounded, exact search for Troesch-type differentials on B_d(1) for odd ell.

A candidate is a :class:`DifferentialAnsatz`: on ell-slot monomials
e^k = e^k1 | ... | e^k_ell it acts by

    delta(e^k) = sum_i lambda_i(k) (k_i)_base e^(k - u_i + u_(i+1)),
    lambda_i(k) = q^(c_i0 + sum_j c_ij k_j)   (or lambda_i = 0),

and survives when, for every d <= dmax, delta^ell = 0 and the homology is
zero for ell not dividing d and one-dimensional in degree 0 (every slice)
otherwise.  Every verdict comes from an exact rank computation.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .coeff import FieldSpec, get_field, qint_raw
from .errors import DomainError
from .line import slot_monomials
from .ncomplex import LComplex, classify

__all__ = [
    "DifferentialAnsatz",
    "SearchResult",
    "SearchSummary",
    "known_family",
    "instantiate",
    "validate",
    "recertify",
    "enumerate_ansatze",
    "search_differentials",
]

VERDICTS = ("nilpotent+coresolution", "nilpotent only", "fails")


@dataclass(frozen=True)
class DifferentialAnsatz:
    """``coeffs[i]`` is None (lambda_(i+1) = 0) or a tuple (c_0, c_1, ..., c_ell) read mod ell."""

    ell: int
    coeffs: tuple
    base: int = 2  # quantum integers are taken at t = q^base

    def __post_init__(self):
        if self.ell < 3 or self.ell % 2 == 0:
            raise DomainError(f"ell must be odd and >= 3, got {self.ell}")
        if len(self.coeffs) != self.ell - 1:
            raise DomainError(f"need {self.ell - 1} coefficient families, got {len(self.coeffs)}")
        for c in self.coeffs:
            if c is not None and len(c) != self.ell + 1:
                raise DomainError(f"each family needs {self.ell + 1} exponents, got {c!r}")

    def lam_exponent(self, i: int, k) -> int | None:
        c = self.coeffs[i]
        if c is None:
            return None
        return (c[0] + sum(a * b for a, b in zip(c[1:], k))) % self.ell

    def to_json(self):
        return {
            "ell": self.ell,
            "base": self.base,
            "coeffs": [None if c is None else list(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(obj["ell"], tuple(None if c is None else tuple(c) for c in obj["coeffs"]), obj["base"])


def known_family() -> DifferentialAnsatz:
    """lambda_1 = 1, lambda_2 = q^(2 k_2), base q^2: the ell = 3 Troesch differential."""
    return DifferentialAnsatz(3, ((0, 0, 0, 0), (0, 0, 2, 0)), base=2)


def _field_for(ell):
    return get_field(FieldSpec("cyclotomic", ell))


def instantiate(ansatz: DifferentialAnsatz, d: int, field=None) -> LComplex:
    """Candidate complex on the weight-d monomials; nilpotency is not checked."""
    F = field if field is not None else _field_for(ansatz.ell)
    ell = ansatz.ell
    t = F.qpow(ansatz.base)
    basis = {}
    for m in slot_monomials(d, ell):
        basis.setdefault(sum(i * k for i, k in enumerate(m)), []).append(m)

    def image(k, deg):
        out = {}
        for i in range(ell - 1):
            if not k[i]:
                continue
            e = ansatz.lam_exponent(i, k)
            if e is None:
                continue
            c = F.mul(F.qpow(e), qint_raw(F, k[i], t))
            if F.is_zero(c):
                continue
            tgt = list(k)
            tgt[i] -= 1
            tgt[i + 1] += 1
            out[tuple(tgt)] = c
        return out

    return LComplex.from_function(F, ell, basis, image, check=False)


@dataclass
class SearchResult:
    index: int
    ansatz: DifferentialAnsatz
    dmax: int
    verdict: str
    witness_d: int | None = None
    reason: str | None = None

    @property
    def survivor(self) -> bool:
        return self.verdict == VERDICTS[0]

    def to_json(self):
        return {
            "index": self.index,
            "ansatz": self.ansatz.to_json(),
            "certified_to": self.dmax,
            "verdict": self.verdict,
            "witness_d": self.witness_d,
            "reason": self.reason,
        }


def _homology_ok(C: LComplex, d: int, ell: int) -> bool:
    table = classify(C)
    if d % ell:
        return table.classification == "acyclic"
    return table.classification == "coresolution" and table.degree0[0] == 1


def validate(ansatz: DifferentialAnsatz, dmax: int, field=None, index: int = 0) -> SearchResult:
    """Verdict certified for d <= dmax; nilpotency is checked first at every d, then homology."""
    F = field if field is not None else _field_for(ansatz.ell)
    built = {}
    for d in range(dmax + 1):
        C = built[d] = instantiate(ansatz, d, F)
        bad = C.nilpotency_failure()
        if bad is not None:
            return SearchResult(index, ansatz, dmax, "fails", d, f"delta^{ansatz.ell} != 0 from degree {bad}")
    for d in range(dmax + 1):
        if not _homology_ok(built[d], d, ansatz.ell):
            return SearchResult(index, ansatz, dmax, "nilpotent only", d, "homology pattern")
    return SearchResult(index, ansatz, dmax, VERDICTS[0])


def recertify(result: SearchResult) -> bool:
    """Re-derive a survivor's verdict on freshly built complexes (no shared caches)."""
    ansatz = result.ansatz
    F = _field_for(ansatz.ell)
    for d in range(result.dmax + 1):
        C = instantiate(ansatz, d, F)
        C = LComplex(F, C.ell, C.basis, C.diff, check=True)
        if not _homology_ok(C, d, ansatz.ell):
            return False
    return True


def enumerate_ansatze(ell: int, values=None, bases=(2, 1), allow_zero: bool = True):
    """Deterministic enumeration: base outermost, then each lambda_i in product order."""
    values = tuple(range(ell)) if values is None else tuple(values)
    family = list(itertools.product(values, repeat=ell + 1))
    if allow_zero:
        family = [None] + family
    for base in bases:
        for coeffs in itertools.product(family, repeat=ell - 1):
            yield DifferentialAnsatz(ell, coeffs, base)


@dataclass
class SearchSummary:
    ell: int
    dmax: int
    examined: int
    total: int
    incomplete: bool
    survivors: list
    counts: dict

    def gauge_classes(self):
        """Survivors grouped by everything except the constant exponents c_i0."""
        groups = {}
        for r in self.survivors:
            a = r.ansatz
            key = (a.base, tuple(None if c is None else c[1:] for c in a.coeffs))
            groups.setdefault(key, []).append(r.index)
        return [idx for idx in groups.values()]

    def to_json(self):
        return {
            "ell": self.ell,
            "dmax": self.dmax,
            "examined": self.examined,
            "total": self.total,
            "incomplete": self.incomplete,
            "counts": self.counts,
            "survivors": [r.to_json() for r in self.survivors],
            "gauge_classes": self.gauge_classes(),
            "product_compatibility": "not examined",
        }


def _validate_job(args):
    index, ansatz, dmax = args
    return validate(ansatz, dmax, index=index)


def _run(pool, work, batch: int = 4096):
    """Ordered results; a pool only ever holds one bounded batch of the (possibly huge) work stream."""
    if pool is None:
        yield from map(_validate_job, work)
        return
    while True:
        chunk = list(itertools.islice(work, batch))
        if not chunk:
            return
        yield from pool.map(_validate_job, chunk, chunksize=64)


def search_differentials(
    ell: int,
    dmax: int,
    values=None,
    bases=(2, 1),
    budget: int | None = None,
    allow_zero: bool = True,
    jobs: int = 1,
    stream=None,
) -> SearchSummary:
    """Validate every candidate in enumeration order, at most ``budget`` of them.

    ``stream`` (a text file) receives one JSON line per candidate as soon as it
    is decided.
    """
    if ell < 3 or ell % 2 == 0:
        raise DomainError(f"ell must be odd and >= 3, got {ell}")
    if dmax < 0:
        raise DomainError("dmax must be non-negative")
    nvals = len(tuple(range(ell)) if values is None else tuple(values))
    total = len(bases) * (nvals ** (ell + 1) + int(allow_zero)) ** (ell - 1)
    cands = enumerate_ansatze(ell, values, bases, allow_zero)
    if budget is not None:
        cands = itertools.islice(cands, budget)
    work = ((i, a, dmax) for i, a in enumerate(cands))

    survivors, counts, examined = [], {v: 0 for v in VERDICTS}, 0
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for r in _run(pool, work):
            examined += 1
            counts[r.verdict] += 1
            if r.survivor:
                survivors.append(r)
            if stream is not None:
                stream.write(json.dumps(r.to_json(), sort_keys=True) + "\n")
                stream.flush()
    finally:
        if pool:
            pool.shutdown()
    return SearchSummary(ell, dmax, examined, total, examined < total, survivors, counts)
