"""Sparse exact linear algebra over the raw elements of a field.

Vectors are ``dict[int, raw]`` with zero entries never stored.  Matrices are
column lists: ``cols[j]`` is the image of the j-th source basis vector.
"""

from __future__ import annotations

__all__ = ["SparseMatrix", "EchelonBasis", "axpy", "scale", "rank", "kernel_basis"]


def axpy(F, y: dict, a, x: dict) -> None:
    """y += a * x, in place."""
    if F.is_zero(a):
        return
    one = F.one
    for k, v in x.items():
        term = v if a == one else F.mul(a, v)
        old = y.get(k)
        if old is None:
            y[k] = term
        else:
            new = F.add(old, term)
            if F.is_zero(new):
                del y[k]
            else:
                y[k] = new


def scale(F, a, x: dict) -> dict:
    if F.is_zero(a):
        return {}
    if a == F.one:
        return dict(x)
    return {k: F.mul(a, v) for k, v in x.items()}


class EchelonBasis:
    """Incrementally built echelon basis of a subspace.

    Every stored vector has its pivot as its smallest index and entry 1 there,
    so reducing a vector never revisits a pivot: the residual returned by
    :meth:`reduce` is supported off the pivot set and is the canonical
    representative of the vector modulo the span.
    """

    def __init__(self, F, track=False):
        self.F = F
        self.track = track
        self.pivots: dict[int, dict] = {}
        self.combos: dict[int, dict] = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, v: dict, combo: dict | None = None):
        F = self.F
        v = dict(v)
        pivots = self.pivots
        while True:
            hit = [k for k in v if k in pivots]
            if not hit:
                break
            k = min(hit)
            a = F.neg(v[k])
            axpy(F, v, a, pivots[k])
            if combo is not None:
                axpy(F, combo, a, self.combos[k])
        return v if combo is None else (v, combo)

    def add(self, v: dict, label=None) -> bool:
        """Insert ``v``; return True when it was independent of the span.

        With ``track=True`` the basis records each stored vector as a
        combination of the inserted ones (keyed by ``label``) and remembers
        dependent insertions in :attr:`relations`.
        """
        F = self.F
        if self.track:
            v, combo = self.reduce(v, {label: F.one})
        else:
            v, combo = self.reduce(v), None
        if not v:
            if self.track:
                self.relations.append(combo)
            return False
        k = min(v)
        inv = F.inv(v[k])
        self.pivots[k] = scale(F, inv, v)
        if self.track:
            self.combos[k] = scale(F, inv, combo)
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    @property
    def relations(self):
        if not hasattr(self, "_relations"):
            self._relations = []
        return self._relations


class SparseMatrix:
    """An ``nrows x ncols`` matrix stored column by column."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols=None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = cols if cols is not None else [{} for _ in range(ncols)]
        assert len(self.cols) == ncols

    @classmethod
    def zero(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, F, n):
        return cls(n, n, [{j: F.one} for j in range(n)])

    def is_zero(self) -> bool:
        return not any(self.cols)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def apply(self, F, vec: dict) -> dict:
        out: dict = {}
        for j, a in vec.items():
            axpy(F, out, a, self.cols[j])
        return out

    def compose(self, F, other: "SparseMatrix") -> "SparseMatrix":
        """Return ``self @ other`` (apply ``other`` first)."""
        if other.nrows != self.ncols:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        return SparseMatrix(self.nrows, other.ncols, [self.apply(F, c) for c in other.cols])

    def add(self, F, other: "SparseMatrix") -> "SparseMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        cols = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            axpy(F, c, F.one, b)
            cols.append(c)
        return SparseMatrix(self.nrows, self.ncols, cols)

    def scaled(self, F, a) -> "SparseMatrix":
        return SparseMatrix(self.nrows, self.ncols, [scale(F, a, c) for c in self.cols])

    def transpose(self) -> "SparseMatrix":
        cols = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                cols[i][j] = v
        return SparseMatrix(self.ncols, self.nrows, cols)

    def rank(self, F) -> int:
        return rank(F, self.cols)

    def kernel(self, F) -> list[dict]:
        return kernel_basis(F, self.cols)

    def to_dense(self, F):
        rows = [[F.zero] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                rows[i][j] = v
        return rows

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.cols) == (other.nrows, other.ncols, other.cols)

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def rank(F, vectors) -> int:
    basis = EchelonBasis(F)
    for v in vectors:
        basis.add(v)
    return len(basis)


def kernel_basis(F, cols) -> list[dict]:
    """Basis of {x : sum_j x_j cols[j] = 0}, as sparse vectors over the column indices."""
    basis = EchelonBasis(F, track=True)
    for j, c in enumerate(cols):
        basis.add(c, label=j)
    return basis.relations
