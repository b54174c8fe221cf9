"""Leibniz algebras, their representations and Leibniz cohomology.

A Leibniz algebra here is a right Leibniz algebra: right multiplication is a
derivation,

    [x, [y, z]] = [[x, y], z] - [[x, z], y].

Cochains ``CL^q(L; M) = Hom(L^{(x)q}, M)`` are dense tensors indexed by
``(i_1, ..., i_q, b)`` and flattened row-major.  The coboundary is

    (d f)(x_1..x_{q+1}) = [x_1, f(x_2..x_{q+1})]
                          + sum_{i=2}^{q+1} (-1)^i [f(x_1..^x_i..x_{q+1}), x_i]
                          + sum_{i<j} (-1)^{j+1} f(x_1..x_{i-1}, [x_i, x_j], x_{i+1}..^x_j..x_{q+1})

with ``(d m)(x) = [x, m]`` in degree 0.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .exact_linalg import (
    LinearSolver,
    Subspace,
    as_fraction_array,
    column_space,
    nullspace,
    quotient_basis,
    zeros,
)

__all__ = [
    "Cochain",
    "CohomologyData",
    "LeibnizAlgebra",
    "NotLeibnizError",
    "Representation",
    "Verdict",
    "Violation",
    "adjoint",
    "coboundary",
    "coboundary_matrix",
    "cohomology",
    "is_cocycle",
    "solve_coboundary",
    "trivial_representation",
    "verify_leibniz",
    "verify_representation",
]


class NotLeibnizError(ValueError):
    """Raised when an operation needs a valid Leibniz algebra and gets none."""

    def __init__(self, algebra: "LeibnizAlgebra", verdict: "Verdict"):
        self.algebra = algebra
        self.verdict = verdict
        first = verdict.violations[0]
        super().__init__(
            f"{algebra.name or 'algebra'} violates the Leibniz identity at {first.where}"
        )


def _tensor(data, shape: tuple[int, ...], what: str) -> np.ndarray:
    arr = as_fraction_array(data)
    if arr.shape != shape:
        raise ValueError(f"{what} must have shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


def _key(arr: np.ndarray) -> tuple:
    return tuple(arr.reshape(-1).tolist())


@dataclass(frozen=True, eq=False)
class LeibnizAlgebra:
    """Finite-dimensional algebra given by structure constants.

    ``constants[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.
    Validity is not enforced here; use :func:`verify_leibniz`.
    """

    constants: np.ndarray
    labels: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        arr = np.asarray(self.constants, dtype=object)
        if arr.ndim != 3 or not (arr.shape[0] == arr.shape[1] == arr.shape[2]):
            raise ValueError(f"structure constants must have shape (n, n, n), got {arr.shape}")
        n = arr.shape[0]
        if n == 0:
            raise ValueError("the zero algebra is not supported")
        object.__setattr__(self, "constants", _tensor(arr, (n, n, n), "constants"))
        labels = tuple(self.labels) or tuple(f"e{i + 1}" for i in range(n))
        if len(labels) != n:
            raise ValueError(f"expected {n} labels, got {len(labels)}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, **kwargs) -> "LeibnizAlgebra":
        """Build from ``{(i, j): {k: value}}`` with 0-based indices."""
        c = zeros((dim, dim, dim))
        for (i, j), value in brackets.items():
            for k, v in value.items():
                c[i, j, k] = Fraction(v)
        return cls(c, **kwargs)

    @classmethod
    def abelian(cls, dim: int, **kwargs) -> "LeibnizAlgebra":
        return cls(zeros((dim, dim, dim)), **kwargs)

    @property
    def dim(self) -> int:
        return self.constants.shape[0]

    def bracket(self, x, y) -> np.ndarray:
        x = as_fraction_array(x)
        y = as_fraction_array(y)
        return np.einsum("i,j,ijk->k", x, y, self.constants)

    @cached_property
    def _hash_key(self) -> tuple:
        return (self.dim, _key(self.constants))

    def __eq__(self, other):
        if not isinstance(other, LeibnizAlgebra):
            return NotImplemented
        return self._hash_key == other._hash_key

    def __hash__(self):
        return hash(self._hash_key)

    def is_abelian(self) -> bool:
        return all(x == 0 for x in self.constants.reshape(-1))


@dataclass(frozen=True, eq=False)
class Representation:
    """A representation ``M`` of a Leibniz algebra.

    ``left[i, a, b]`` is the coefficient of ``f_b`` in ``[e_i, f_a]`` and
    ``right[a, i, b]`` the coefficient of ``f_b`` in ``[f_a, e_i]``.
    """

    algebra_dim: int
    module_dim: int
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        n, m = self.algebra_dim, self.module_dim
        if m < 1:
            raise ValueError("module dimension must be positive")
        object.__setattr__(self, "left", _tensor(self.left, (n, m, m), "left action"))
        object.__setattr__(self, "right", _tensor(self.right, (m, n, m), "right action"))

    @cached_property
    def _hash_key(self) -> tuple:
        return (self.algebra_dim, self.module_dim, _key(self.left), _key(self.right))

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return self._hash_key == other._hash_key

    def __hash__(self):
        return hash(self._hash_key)


def adjoint(alg: LeibnizAlgebra) -> Representation:
    """``L`` as a representation of itself, both actions given by the bracket."""
    return Representation(alg.dim, alg.dim, alg.constants, alg.constants)


def trivial_representation(alg: LeibnizAlgebra, module_dim: int = 1) -> Representation:
    n, m = alg.dim, module_dim
    return Representation(n, m, zeros((n, m, m)), zeros((m, n, m)))


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    """One basis triple where an identity fails; ``lhs`` and ``rhs`` are vectors."""

    kind: str
    where: tuple[int, ...]
    lhs: tuple[Fraction, ...]
    rhs: tuple[Fraction, ...]


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def _collect(kind: str, lhs: np.ndarray, rhs: np.ndarray) -> list[Violation]:
    out = []
    for idx in itertools.product(*(range(s) for s in lhs.shape[:-1])):
        a, b = lhs[idx], rhs[idx]
        if any(x != y for x, y in zip(a, b)):
            out.append(Violation(kind, tuple(idx), tuple(a), tuple(b)))
    return out


def verify_leibniz(alg: LeibnizAlgebra) -> Verdict:
    """Check ``[x,[y,z]] = [[x,y],z] - [[x,z],y]`` on all basis triples."""
    c = alg.constants
    lhs = np.einsum("jkp,ipm->ijkm", c, c)
    rhs = np.einsum("ijp,pkm->ijkm", c, c) - np.einsum("ikp,pjm->ijkm", c, c)
    return Verdict(tuple(_collect("leibniz", lhs, rhs)))


def verify_representation(alg: LeibnizAlgebra, rep: Representation) -> Verdict:
    """Check the three mixed identities (one argument in ``M``)."""
    if rep.algebra_dim != alg.dim:
        raise ValueError("representation is for an algebra of another dimension")
    c, l, r = alg.constants, rep.left, rep.right
    out = []
    # [m,[x,y]] = [[m,x],y] - [[m,y],x]
    lhs = np.einsum("ijk,akb->aijb", c, r)
    rhs = np.einsum("aic,cjb->aijb", r, r) - np.einsum("ajc,cib->aijb", r, r)
    out += _collect("MLL", lhs, rhs)
    # [x,[m,y]] = [[x,m],y] - [[x,y],m]
    lhs = np.einsum("ajc,icb->iajb", r, l)
    rhs = np.einsum("iac,cjb->iajb", l, r) - np.einsum("ijk,kab->iajb", c, l)
    out += _collect("LML", lhs, rhs)
    # [x,[y,m]] = [[x,y],m] - [[x,m],y]
    lhs = np.einsum("jac,icb->ijab", l, l)
    rhs = np.einsum("ijk,kab->ijab", c, l) - np.einsum("iac,cjb->ijab", l, r)
    out += _collect("LLM", lhs, rhs)
    return Verdict(tuple(out))


# ---------------------------------------------------------------------------
# cochains
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Cochain:
    """An element of ``Hom(L^{(x)q}, M)``.

    ``coeffs[i_1, ..., i_q, b]`` is the coefficient of ``f_b`` in
    ``f(e_{i_1}, ..., e_{i_q})``.
    """

    degree: int
    algebra_dim: int
    module_dim: int
    coeffs: np.ndarray

    def __post_init__(self):
        shape = (self.algebra_dim,) * self.degree + (self.module_dim,)
        arr = np.asarray(self.coeffs, dtype=object)
        if arr.size != int(np.prod(shape)):
            raise ValueError(f"degree-{self.degree} cochain needs {int(np.prod(shape))} coefficients")
        object.__setattr__(self, "coeffs", _tensor(arr.reshape(shape), shape, "coefficients"))

    @classmethod
    def zero(cls, degree: int, algebra_dim: int, module_dim: int) -> "Cochain":
        return cls(degree, algebra_dim, module_dim, zeros((algebra_dim,) * degree + (module_dim,)))

    @classmethod
    def from_flat(cls, degree: int, algebra_dim: int, module_dim: int, flat) -> "Cochain":
        return cls(degree, algebra_dim, module_dim, np.asarray(flat, dtype=object))

    @classmethod
    def identity(cls, algebra_dim: int) -> "Cochain":
        return cls(1, algebra_dim, algebra_dim, np.identity(algebra_dim, dtype=int).astype(object))

    @property
    def size(self) -> int:
        return self.coeffs.size

    def flat(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    def value(self, *args: int) -> tuple[Fraction, ...]:
        """``f(e_{args[0]}, ..., e_{args[q-1]})`` as a coefficient vector."""
        if len(args) != self.degree:
            raise ValueError(f"expected {self.degree} arguments")
        return tuple(self.coeffs[args])

    def _check(self, other: "Cochain"):
        if (self.degree, self.algebra_dim, self.module_dim) != (
            other.degree, other.algebra_dim, other.module_dim
        ):
            raise ValueError("cochains live in different spaces")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        return Cochain(self.degree, self.algebra_dim, self.module_dim, self.coeffs + other.coeffs)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        return Cochain(self.degree, self.algebra_dim, self.module_dim, self.coeffs - other.coeffs)

    def __neg__(self) -> "Cochain":
        return Cochain(self.degree, self.algebra_dim, self.module_dim, -self.coeffs)

    def __mul__(self, scalar) -> "Cochain":
        s = Fraction(scalar)
        return Cochain(self.degree, self.algebra_dim, self.module_dim, self.coeffs * s)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.degree, self.algebra_dim, self.module_dim) == (
            other.degree, other.algebra_dim, other.module_dim
        ) and bool(np.all(self.coeffs == other.coeffs))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.flat())

    def __repr__(self) -> str:
        nz = {
            idx: v for idx, v in np.ndenumerate(self.coeffs) if v != 0
        }
        return f"Cochain(degree={self.degree}, nonzero={nz})"


def _check_dims(alg: LeibnizAlgebra, rep: Representation, f: Cochain | None = None):
    if rep.algebra_dim != alg.dim:
        raise ValueError("representation does not match the algebra")
    if f is not None and (f.algebra_dim, f.module_dim) != (alg.dim, rep.module_dim):
        raise ValueError(
            f"cochain dimensions ({f.algebra_dim}, {f.module_dim}) do not match "
            f"({alg.dim}, {rep.module_dim})"
        )


def coboundary(alg: LeibnizAlgebra, rep: Representation, f: Cochain) -> Cochain:
    """Apply the Leibniz coboundary to ``f`` by tensor contraction."""
    _check_dims(alg, rep, f)
    q = f.degree
    F = f.coeffs
    c, left, right = alg.constants, rep.left, rep.right
    # [x_1, f(x_2, ..., x_{q+1})]
    out = np.moveaxis(np.tensordot(left, F, axes=([1], [q])), 1, -1)
    # (-1)^i [f(x_1, .., ^x_i, .., x_{q+1}), x_i]
    t = np.tensordot(F, right, axes=([q], [0]))
    for i in range(2, q + 2):
        out = out + (-1) ** i * np.moveaxis(t, q, i - 1)
    # (-1)^{j+1} f(.., [x_i, x_j] in slot i, .., ^x_j, ..)
    for i in range(1, q + 2):
        for j in range(i + 1, q + 2):
            t = np.tensordot(c, F, axes=([2], [i - 1]))
            labels = [i, j] + list(range(1, i)) + [p for p in range(i + 1, q + 2) if p != j]
            labels.append("b")
            order = [labels.index(p) for p in list(range(1, q + 2)) + ["b"]]
            out = out + (-1) ** (j + 1) * np.transpose(t, order)
    return Cochain(q + 1, alg.dim, rep.module_dim, out)


@lru_cache(maxsize=256)
def coboundary_matrix(alg: LeibnizAlgebra, rep: Representation, q: int) -> np.ndarray:
    """Matrix of the coboundary from ``CL^q`` to ``CL^{q+1}`` (flattened bases).

    Assembled entry by entry from the formula, independently of
    :func:`coboundary`.
    """
    if q < 0:
        raise ValueError("degree must be non-negative")
    _check_dims(alg, rep)
    n, m = alg.dim, rep.module_dim
    c, left, right = alg.constants, rep.left, rep.right
    brackets = [
        [[(k, c[i, j, k]) for k in range(n) if c[i, j, k] != 0] for j in range(n)] for i in range(n)
    ]
    left_nz = [[(a, b, left[i, a, b]) for a in range(m) for b in range(m) if left[i, a, b] != 0]
               for i in range(n)]
    right_nz = [[(a, b, right[a, i, b]) for a in range(m) for b in range(m) if right[a, i, b] != 0]
                for i in range(n)]

    def col(args: Sequence[int], a: int) -> int:
        idx = 0
        for x in args:
            idx = idx * n + x
        return idx * m + a

    mat = zeros((n ** (q + 1) * m, n ** q * m))
    for xs in itertools.product(range(n), repeat=q + 1):
        base_row = col(xs, 0)
        for a, b, v in left_nz[xs[0]]:
            mat[base_row + b, col(xs[1:], a)] += v
        for i in range(2, q + 2):
            rest = xs[: i - 1] + xs[i:]
            sign = (-1) ** i
            for a, b, v in right_nz[xs[i - 1]]:
                mat[base_row + b, col(rest, a)] += sign * v
        for i in range(1, q + 2):
            for j in range(i + 1, q + 2):
                sign = (-1) ** (j + 1)
                for k, v in brackets[xs[i - 1]][xs[j - 1]]:
                    args = xs[: i - 1] + (k,) + tuple(
                        xs[p - 1] for p in range(i + 1, q + 2) if p != j
                    )
                    for b in range(m):
                        mat[base_row + b, col(args, b)] += sign * v
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=256)
def _coboundary_solver(alg: LeibnizAlgebra, rep: Representation, q: int) -> LinearSolver:
    return LinearSolver(coboundary_matrix(alg, rep, q))


@lru_cache(maxsize=256)
def _sparse_rows(alg: LeibnizAlgebra, rep: Representation, q: int) -> tuple[tuple[tuple[int, Fraction], ...], ...]:
    mat = coboundary_matrix(alg, rep, q)
    rows = []
    for r in range(mat.shape[0]):
        nz = tuple((j, v) for j, v in enumerate(mat[r]) if v != 0)
        if nz:
            rows.append(nz)
    return tuple(rows)


def is_cocycle(alg: LeibnizAlgebra, rep: Representation, f: Cochain) -> bool:
    """``d f = 0``, evaluated with the cached sparse coboundary matrix."""
    _check_dims(alg, rep, f)
    flat = f.flat()
    return all(sum(v * flat[j] for j, v in row) == 0 for row in _sparse_rows(alg, rep, f.degree))


def solve_coboundary(alg: LeibnizAlgebra, rep: Representation, g: Cochain) -> Cochain | None:
    """A cochain ``r`` with ``d r = g`` (free variables zero), or None."""
    _check_dims(alg, rep, g)
    if g.degree < 1:
        raise ValueError("degree-0 cochains are never coboundaries")
    x = _coboundary_solver(alg, rep, g.degree - 1).solve(g.flat())
    if x is None:
        return None
    return Cochain.from_flat(g.degree - 1, alg.dim, rep.module_dim, x)


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CohomologyData:
    """``HL^q(L; M)`` with chosen cocycle representatives."""

    degree: int
    betti: int
    cocycle_space: Subspace
    coboundary_space: Subspace
    representatives: tuple[Cochain, ...]
    algebra: LeibnizAlgebra = field(repr=False)
    representation: Representation = field(repr=False)

    @cached_property
    def _class_solver(self) -> LinearSolver:
        cols = [r.flat() for r in self.representatives] + list(self.coboundary_space.basis)
        size = self.cocycle_space.ambient_dim
        mat = zeros((size, len(cols)))
        for j, v in enumerate(cols):
            mat[:, j] = v
        return LinearSolver(mat)

    def coordinates(self, f: Cochain) -> tuple[Fraction, ...]:
        """Class coordinates of the cocycle ``f`` against the representatives."""
        if f.degree != self.degree:
            raise ValueError(f"expected a degree-{self.degree} cochain")
        if self.betti == 0 and self.coboundary_space.dim == 0:
            if not f.is_zero():
                raise ValueError("not a cocycle")
            return ()
        x = self._class_solver.solve(f.flat())
        if x is None:
            raise ValueError("not a cocycle")
        return tuple(x[: self.betti])

    def decompose(self, f: Cochain) -> tuple[tuple[Fraction, ...], Cochain]:
        """Split a cocycle as ``sum c_h mu_h + d rho``; returns ``(c, rho)``."""
        coords = self.coordinates(f)
        residual = f
        for c, mu in zip(coords, self.representatives):
            if c != 0:
                residual = residual - c * mu
        if self.degree == 0:
            return coords, Cochain.zero(0, f.algebra_dim, f.module_dim)
        rho = solve_coboundary(self.algebra, self.representation, residual)
        assert rho is not None
        return coords, rho

    def representative(self, coords: Sequence) -> Cochain:
        out = Cochain.zero(self.degree, self.algebra.dim, self.representation.module_dim)
        for c, mu in zip(coords, self.representatives):
            out = out + Fraction(c) * mu
        return out


@lru_cache(maxsize=128)
def cohomology(alg: LeibnizAlgebra, rep: Representation, q: int) -> CohomologyData:
    """Cocycles, coboundaries and canonical representatives in degree ``q``."""
    if q < 0:
        raise ValueError("degree must be non-negative")
    _check_dims(alg, rep)
    n, m = alg.dim, rep.module_dim
    cocycles = nullspace(coboundary_matrix(alg, rep, q))
    if q == 0:
        coboundaries = Subspace.zero(m)
    else:
        coboundaries = column_space(coboundary_matrix(alg, rep, q - 1))
    reps = quotient_basis(coboundaries, cocycles)
    representatives = tuple(Cochain.from_flat(q, n, m, np.array(v, dtype=object)) for v in reps)
    return CohomologyData(
        degree=q,
        betti=cocycles.dim - coboundaries.dim,
        cocycle_space=cocycles,
        coboundary_space=coboundaries,
        representatives=representatives,
        algebra=alg,
        representation=rep,
    )
