"""Exact linear algebra over the rationals.

Matrices and vectors are numpy object arrays holding :class:`fractions.Fraction`
entries. Elimination runs fraction-free on sparse integer rows (each row is
kept primitive by dividing out its content) and is converted back to
fractions only at the end, which keeps the intermediate numbers small.

All representative choices are deterministic:

* :func:`rref` is the (unique) reduced row-echelon form,
* :func:`solve` sets every free variable to zero,
* :func:`quotient_basis` extends by the earliest admissible basis vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Subspace",
    "LinearSolver",
    "as_fraction_array",
    "column_space",
    "matmul",
    "nullspace",
    "quotient_basis",
    "rank",
    "rref",
    "solve",
    "zeros",
]

ZERO = Fraction(0)
ONE = Fraction(1)


def zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(ZERO)
    return out


def as_fraction_array(data, ndim: int | None = None) -> np.ndarray:
    """Copy ``data`` into an object array of Fractions.

    Strings such as ``"3/4"`` are accepted; floats are rejected because they
    cannot be represented exactly in general.
    """
    arr = np.array(data, dtype=object)
    if ndim is not None and arr.ndim != ndim:
        if arr.size == 0 and ndim == 2:
            arr = arr.reshape(arr.shape[0] if arr.ndim else 0, 0)
        else:
            raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat_out = out.reshape(-1)
    for idx, x in enumerate(flat_in):
        flat_out[idx] = _to_fraction(x)
    return out


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        return Fraction(int(x))
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        raise TypeError(f"floating point value {x!r} is not allowed in exact arithmetic")
    return Fraction(x)


# ---------------------------------------------------------------------------
# sparse integer rows
# ---------------------------------------------------------------------------

def _int_row(row: Iterable) -> dict[int, int]:
    """Scale a rational row to a primitive integer row (sparse)."""
    nz = [(j, _to_fraction(x)) for j, x in enumerate(row) if x != 0]
    if not nz:
        return {}
    den = math.lcm(*(f.denominator for _, f in nz))
    out = {j: f.numerator * (den // f.denominator) for j, f in nz}
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = math.gcd(*row.values())
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


def _eliminate(row: dict[int, int], basis_row: dict[int, int], col: int) -> dict[int, int]:
    """Return a primitive multiple of ``row`` with column ``col`` cleared."""
    a = basis_row[col]
    b = row[col]
    g = math.gcd(a, b)
    sa, sb = a // g, b // g
    out = {j: sa * v for j, v in row.items()}
    for j, v in basis_row.items():
        w = out.get(j, 0) - sb * v
        if w:
            out[j] = w
        else:
            out.pop(j, None)
    return _primitive(out) if out else out


class _Echelon:
    """Incrementally maintained reduced echelon basis on sparse integer rows.

    Each stored row is primitive, has its pivot at its smallest column, and
    is zero in every other row's pivot column.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict[int, int]] = {}  # pivot column -> row

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        for col in sorted(c for c in row if c in self.rows):
            if col in row:
                row = _eliminate(row, self.rows[col], col)
        return row

    def add(self, row: dict[int, int]) -> bool:
        row = self.reduce(dict(row))
        if not row:
            return False
        pivot = min(row)
        if row[pivot] < 0:
            row = {j: -v for j, v in row.items()}
        for col, other in list(self.rows.items()):
            if pivot in other:
                self.rows[col] = _eliminate(other, row, pivot)
        self.rows[pivot] = row
        return True

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def fraction_rows(self) -> list[tuple[Fraction, ...]]:
        out = []
        for col in self.pivots:
            row = self.rows[col]
            p = row[col]
            dense = [ZERO] * self.ncols
            for j, v in row.items():
                dense[j] = Fraction(v, p)
            out.append(tuple(dense))
        return out


def _rows_of(m) -> tuple[list[dict[int, int]], int, int]:
    arr = np.asarray(m, dtype=object)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {arr.shape}")
    nrows, ncols = arr.shape
    return [_int_row(arr[i]) for i in range(nrows)], nrows, ncols


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def rref(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and pivot columns of ``m``.

    Zero rows are kept at the bottom so the result has the shape of ``m``.
    """
    rows, nrows, ncols = _rows_of(m)
    ech = _Echelon(ncols)
    for row in rows:
        if row:
            ech.add(row)
    out = zeros((nrows, ncols))
    for i, r in enumerate(ech.fraction_rows()):
        out[i, :] = r
    return out, ech.pivots


def rank(m) -> int:
    return len(rref(m)[1])


def nullspace(m) -> "Subspace":
    """Canonical basis of ``{v : m v = 0}``."""
    arr = np.asarray(m, dtype=object)
    ncols = arr.shape[1]
    reduced, pivots = rref(arr)
    free = [j for j in range(ncols) if j not in set(pivots)]
    vectors = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -reduced[i, f]
        vectors.append(v)
    return Subspace.span(vectors, ncols)


def column_space(m) -> "Subspace":
    arr = np.asarray(m, dtype=object)
    return Subspace.span(arr.T, arr.shape[0])


class LinearSolver:
    """Reusable solver for ``m x = b`` with many right-hand sides.

    The matrix is reduced once together with an identity block, which records
    the row operations.  Rows whose pivot falls inside the identity block are
    left-kernel vectors and give the consistency conditions.
    """

    def __init__(self, m):
        arr = np.asarray(m, dtype=object)
        if arr.ndim != 2:
            raise ValueError(f"expected a matrix, got shape {arr.shape}")
        self.nrows, self.ncols = arr.shape
        ech = _Echelon(self.ncols + self.nrows)
        for i in range(self.nrows):
            row = {j: _to_fraction(x) for j, x in enumerate(arr[i]) if x != 0}
            row[self.ncols + i] = ONE
            ech.add(_int_row_sparse(row))
        self._solution_rows: list[tuple[int, dict[int, Fraction]]] = []
        self._checks: list[dict[int, Fraction]] = []
        for col in ech.pivots:
            row = ech.rows[col]
            p = row[col]
            tail = {j - self.ncols: Fraction(v, p) for j, v in row.items() if j >= self.ncols}
            if col < self.ncols:
                self._solution_rows.append((col, tail))
            else:
                self._checks.append(tail)
        self.pivots = [c for c, _ in self._solution_rows]

    @property
    def rank(self) -> int:
        return len(self._solution_rows)

    def solve(self, b) -> np.ndarray | None:
        bvec = np.asarray(b, dtype=object).reshape(-1)
        if bvec.shape[0] != self.nrows:
            raise ValueError(f"right-hand side has length {bvec.shape[0]}, expected {self.nrows}")
        nz = {i: _to_fraction(x) for i, x in enumerate(bvec) if x != 0}
        for check in self._checks:
            if sum((c * nz[i] for i, c in check.items() if i in nz), ZERO) != 0:
                return None
        x = zeros(self.ncols)
        for col, tail in self._solution_rows:
            x[col] = sum((c * nz[i] for i, c in tail.items() if i in nz), ZERO)
        return x


def _int_row_sparse(row: dict[int, Fraction]) -> dict[int, int]:
    row = {j: f for j, f in row.items() if f != 0}
    if not row:
        return {}
    den = math.lcm(*(f.denominator for f in row.values()))
    return _primitive({j: f.numerator * (den // f.denominator) for j, f in row.items()})


def solve(m, b) -> np.ndarray | None:
    """One solution of ``m x = b`` (free variables zero), or None."""
    return LinearSolver(m).solve(b)


def matmul(a, b) -> np.ndarray:
    """Exact product of two rational matrices (or matrix and vector)."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"shapes {a.shape} and {b.shape} are not aligned")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[:-1] + b.shape[1:])
    da, ia = _integer_scaled(a)
    db, ib = _integer_scaled(b)
    prod = np.dot(ia, ib)
    den = da * db
    out = np.empty(prod.shape, dtype=object)
    flat_in = np.asarray(prod).reshape(-1)
    flat_out = out.reshape(-1)
    for idx, v in enumerate(flat_in):
        flat_out[idx] = Fraction(int(v), den)
    return out


def _integer_scaled(a: np.ndarray) -> tuple[int, np.ndarray]:
    flat = [_to_fraction(x) for x in a.reshape(-1)]
    den = math.lcm(*(f.denominator for f in flat)) if flat else 1
    ints = np.empty(a.shape, dtype=object)
    ints.reshape(-1)[:] = [f.numerator * (den // f.denominator) for f in flat]
    return den, ints


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim stored by its reduced row-echelon basis.

    Two subspaces are equal as sets exactly when the dataclasses compare
    equal, so ``==`` is set equality.
    """

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        ech = _Echelon(ambient_dim)
        for v in vectors:
            v = list(v)
            if len(v) != ambient_dim:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            row = _int_row(v)
            if row:
                ech.add(row)
        return cls(ambient_dim, tuple(ech.fraction_rows()))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls.span(np.identity(ambient_dim, dtype=int).astype(object), ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(v) if x != 0) for v in self.basis)

    @cached_property
    def _echelon(self) -> _Echelon:
        ech = _Echelon(self.ambient_dim)
        for v in self.basis:
            ech.add(_int_row(v))
        return ech

    def matrix(self) -> np.ndarray:
        """Basis vectors as the rows of a matrix."""
        out = zeros((self.dim, self.ambient_dim))
        for i, v in enumerate(self.basis):
            out[i, :] = v
        return out

    def __contains__(self, v) -> bool:
        v = list(v)
        if len(v) != self.ambient_dim:
            raise ValueError("vector has the wrong length")
        return not self._echelon.reduce(_int_row(v))

    def contains_all(self, vectors: Iterable[Sequence]) -> bool:
        return all(v in self for v in vectors)

    def issubspace(self, other: "Subspace") -> bool:
        return self.ambient_dim == other.ambient_dim and other.contains_all(self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def coordinates(self, v) -> tuple[Fraction, ...] | None:
        """Coordinates of ``v`` against this basis, or None if ``v`` is outside."""
        if v not in self:
            return None
        # the basis is in rref, so the coordinate is the entry at each pivot
        return tuple(_to_fraction(v[p]) for p in self.pivots)


def quotient_basis(sub: Subspace, within: Subspace) -> tuple[tuple[Fraction, ...], ...]:
    """Vectors of ``within`` completing a basis of ``sub`` to one of ``within``.

    The complement is built from the canonical basis of ``within`` in order,
    keeping each vector that is independent of ``sub`` and of those already
    kept.  The vectors themselves are returned (not re-echelonised) because
    callers use them as representatives.
    """
    if not sub.issubspace(within):
        raise ValueError("sub is not contained in within")
    ech = _Echelon(within.ambient_dim)
    for v in sub.basis:
        ech.add(_int_row(v))
    chosen = []
    for v in within.basis:
        if ech.add(_int_row(v)):
            chosen.append(v)
    return tuple(chosen)
