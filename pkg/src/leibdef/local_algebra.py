"""Truncated commutative local algebras and Harrison cohomology.

A :class:`TruncatedLocalAlgebra` is ``Q[g_1..g_n] / (I + m^{K+1})`` where ``m``
is the ideal generated by the variables and ``I`` lies in ``m^2``.  The ideal
is kept as one saturated, canonical subspace of the span of all monomials of
degree at most ``K``.  Columns of that span are ordered from the largest
monomial down (graded, then lexicographic with ``g_1 > g_2 > ...``), so the
pivot of each echelon row is its leading monomial and the non-pivot monomials
form the normal-form basis of the quotient.  Relations need not be
homogeneous.

Harrison cohomology is available two ways: from a presentation, where
``H^2(A; Q)`` is dual to ``I/mI``, and by brute force from the Hochschild
complex restricted to cochains that vanish on shuffle products.  The second
one is an oracle for small algebras only.

The Hochschild coboundary used by the oracle is the standard one for a
commutative algebra acting on both sides of ``M`` through the augmentation:

    (d f)(a_1..a_{q+1}) = a_1 f(a_2..a_{q+1})
                          + sum_{i=1}^{q} (-1)^i f(a_1..a_i a_{i+1}..a_{q+1})
                          + (-1)^{q+1} f(a_1..a_q) a_{q+1}.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exact_linalg import (
    LinearSolver,
    Subspace,
    _Echelon,
    _primitive,
    as_fraction_array,
    matmul,
    nullspace,
    rank,
    zeros,
)

__all__ = [
    "AlgebraMap",
    "ExtensionDatum",
    "LocalElement",
    "Polynomial",
    "TruncatedLocalAlgebra",
    "UniversalExtension",
    "format_monomial",
    "format_polynomial",
    "ground_field",
    "harrison_cohomology_bruteforce",
    "harrison_h2_presented",
    "monomials",
    "one_dim_extensions",
    "parse_polynomial",
    "tangent_space_dim",
    "universal_extension",
    "variable_names",
]

Monomial = tuple  # exponent vector
Polynomial = dict  # Monomial -> Fraction, zero coefficients omitted

ORACLE_MAX_DIM = 6
ORACLE_MAX_DEGREE = 3


# ---------------------------------------------------------------------------
# monomials and polynomials
# ---------------------------------------------------------------------------

def degree(mono: Monomial) -> int:
    return sum(mono)


def monomials_of_degree(n: int, d: int) -> list[Monomial]:
    """Degree-``d`` monomials, largest first (lex with ``g_1 > g_2 > ...``)."""
    out = []
    for combo in itertools.combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def monomials(n: int, max_degree: int) -> list[Monomial]:
    """Display order: by degree, and within a degree largest first."""
    return [m for d in range(max_degree + 1) for m in monomials_of_degree(n, d)]


def variable(n: int, i: int) -> Monomial:
    e = [0] * n
    e[i] = 1
    return tuple(e)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def sort_key(mono: Monomial) -> tuple:
    """Key realising the display order of :func:`monomials`."""
    return (degree(mono), tuple(-x for x in mono))


def variable_names(n: int) -> tuple[str, ...]:
    return ("t",) if n == 1 else tuple(f"g{i + 1}" for i in range(n))


def format_monomial(mono: Monomial, names: Sequence[str] | None = None) -> str:
    names = names or variable_names(len(mono))
    parts = []
    for name, e in zip(names, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) or "1"


def format_polynomial(poly: Mapping[Monomial, Fraction], names: Sequence[str] | None = None) -> str:
    """Terms in display order, e.g. ``g1^2 - 1/2*g2^3``."""
    terms = [(m, Fraction(c)) for m, c in poly.items() if c != 0]
    if not terms:
        return "0"
    terms.sort(key=lambda mc: sort_key(mc[0]))
    out = []
    for k, (m, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = format_monomial(m, names)
        if mono == "1":
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if k == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_polynomial(text: str, n: int, names: Sequence[str] | None = None) -> Polynomial:
    """Inverse of :func:`format_polynomial` (also accepts ``**`` for powers)."""
    names = list(names or variable_names(n))
    index = {name: i for i, name in enumerate(names)}
    text = text.replace("**", "^").strip()
    if not text:
        raise ValueError("empty polynomial")
    poly: dict[Monomial, Fraction] = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r} at position {pos}")
        sign, body = m.group(1), m.group(2).strip()
        if pos > 0 and sign is None:
            raise ValueError(f"missing operator in {text!r}")
        coeff = Fraction(-1 if sign == "-" else 1)
        exps = [0] * n
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"empty factor in {text!r}")
            if factor[0].isdigit():
                coeff *= Fraction(factor)
                continue
            name, _, power = factor.partition("^")
            if name not in index:
                raise ValueError(f"unknown variable {name!r} in {text!r}")
            exps[index[name]] += int(power) if power else 1
        key = tuple(exps)
        poly[key] = poly.get(key, Fraction(0)) + coeff
        pos = m.end()
    return {k: v for k, v in poly.items() if v != 0}


def poly_degree_range(poly: Mapping[Monomial, Fraction]) -> tuple[int, int]:
    ds = [degree(m) for m, c in poly.items() if c != 0]
    return (min(ds), max(ds)) if ds else (0, 0)


# ---------------------------------------------------------------------------
# truncated local algebras
# ---------------------------------------------------------------------------

class TruncatedLocalAlgebra:
    """``Q[g_1..g_n] / (I + m^{K+1})`` with ``I`` inside ``m^2``.

    ``relations`` are polynomials (dicts from exponent tuples to rationals,
    or strings in the variable names).  Terms of degree above ``K`` are
    dropped, and the ideal they generate is saturated under multiplication by
    the variables.
    """

    def __init__(self, num_vars: int, order: int, relations: Iterable = ()):
        if num_vars < 0 or order < 0:
            raise ValueError("number of variables and order must be non-negative")
        self.num_vars = num_vars
        self.order = order
        # column order: largest monomial first
        self._columns = [m for d in range(order, -1, -1) for m in monomials_of_degree(num_vars, d)]
        self._column_of = {m: j for j, m in enumerate(self._columns)}
        polys = [self._coerce_poly(r) for r in relations]
        for p in polys:
            low = [m for m, c in p.items() if c != 0 and degree(m) < 2]
            if low:
                raise ValueError(
                    "relations must lie in m^2; got a term "
                    f"{format_monomial(low[0])} of degree {degree(low[0])}"
                )
        # canonical ideal basis: pivot column -> primitive integer row, fully reduced
        self._rows: dict[int, dict[int, int]] = self._saturate(polys).rows
        self._key = tuple((p, tuple(sorted(self._rows[p].items()))) for p in sorted(self._rows))
        self.basis: tuple[Monomial, ...] = tuple(
            sorted((m for j, m in enumerate(self._columns) if j not in self._rows), key=sort_key)
        )
        self.index = {m: k for k, m in enumerate(self.basis)}
        self._reduction: dict[Monomial, dict[int, Fraction]] = {}
        for m in self.basis:
            self._reduction[m] = {self.index[m]: Fraction(1)}
        for p, row in self._rows.items():
            lead = row[p]
            self._reduction[self._columns[p]] = {
                self.index[self._columns[j]]: Fraction(-v, lead) for j, v in row.items() if j != p
            }
        self._products: dict[tuple[int, int], dict[int, Fraction]] = {}

    # construction helpers -------------------------------------------------

    def _coerce_poly(self, r) -> Polynomial:
        if isinstance(r, str):
            return parse_polynomial(r, self.num_vars)
        if isinstance(r, LocalElement):
            return r.to_polynomial()
        out = {}
        for m, c in dict(r).items():
            m = tuple(m)
            if len(m) != self.num_vars:
                raise ValueError(f"monomial {m} has the wrong number of variables")
            if c != 0:
                out[m] = Fraction(c)
        return out

    def _row(self, poly: Mapping[Monomial, Fraction]) -> dict[int, int]:
        dense = {self._column_of[m]: Fraction(c) for m, c in poly.items() if degree(m) <= self.order and c != 0}
        if not dense:
            return {}
        den = math.lcm(*(c.denominator for c in dense.values()))
        return _primitive({j: c.numerator * (den // c.denominator) for j, c in dense.items()})

    def _times_var(self, row: dict[int, int], i: int) -> dict[int, int]:
        out = {}
        for j, v in row.items():
            m = self._columns[j]
            if degree(m) < self.order:
                out[self._column_of[mono_mul(m, variable(self.num_vars, i))]] = v
        return out

    def _saturate(self, polys: Sequence[Polynomial]) -> _Echelon:
        ech = _Echelon(len(self._columns))
        queue = [self._row(p) for p in polys]
        while queue:
            row = ech.reduce(queue.pop())
            if not row:
                continue
            ech.add(row)
            queue.extend(self._times_var(row, i) for i in range(self.num_vars))
        return ech

    def _poly(self, row: Mapping[int, int], pivot: int | None = None) -> Polynomial:
        lead = row[min(row) if pivot is None else pivot]
        return {self._columns[j]: Fraction(v, lead) for j, v in sorted(row.items())}

    @cached_property
    def ideal(self) -> Subspace:
        """The saturated ideal as a subspace of the span of monomials of degree <= K."""
        ech = _Echelon(len(self._columns))
        ech.rows = dict(self._rows)
        return Subspace(len(self._columns), tuple(ech.fraction_rows()))

    # basic data -----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def names(self) -> tuple[str, ...]:
        return variable_names(self.num_vars)

    @property
    def unit(self) -> Monomial:
        return (0,) * self.num_vars

    def maximal_ideal_basis(self) -> tuple[Monomial, ...]:
        return self.basis[1:]

    def ideal_polynomials(self) -> list[Polynomial]:
        """The canonical basis of the saturated ideal, as polynomials."""
        return [self._poly(self._rows[p], p) for p in sorted(self._rows)]

    def ideal_degree_part(self, d: int) -> Subspace:
        """Homogeneous elements of degree ``d`` in the ideal, over :func:`monomials_of_degree`."""
        monos = monomials_of_degree(self.num_vars, d)
        if d > self.order:
            return Subspace.full(len(monos))
        keep = {self._column_of[m] for m in monos}
        others = [j for j in range(len(self._columns)) if j not in keep]
        # solve for combinations of basis rows that vanish outside degree d
        mat = zeros((len(others), self.ideal.dim))
        for k, row in enumerate(self.ideal.basis):
            for r, j in enumerate(others):
                mat[r, k] = row[j]
        vecs = []
        for comb in nullspace(mat).basis:
            v = [sum(c * row[self._column_of[m]] for c, row in zip(comb, self.ideal.basis)) for m in monos]
            vecs.append(v)
        return Subspace.span(vecs, len(monos))

    def reduce_polynomial(self, poly: Mapping[Monomial, Fraction]) -> tuple[Fraction, ...]:
        """Normal-form coordinates of a polynomial (degree > K dropped)."""
        out = [Fraction(0)] * self.dim
        for m, c in self._coerce_poly(poly).items():
            if degree(m) > self.order:
                continue
            for k, v in self._reduction[m].items():
                out[k] += c * v
        return tuple(out)

    def element(self, data) -> "LocalElement":
        if isinstance(data, LocalElement):
            if data.algebra is not self and not data.algebra.same_presentation(self):
                raise ValueError("element belongs to another algebra")
            return LocalElement(self, data.coeffs)
        if isinstance(data, (str, dict)):
            return LocalElement(self, self.reduce_polynomial(data))
        coeffs = tuple(Fraction(x) for x in data)
        if len(coeffs) != self.dim:
            raise ValueError(f"expected {self.dim} coefficients, got {len(coeffs)}")
        return LocalElement(self, coeffs)

    def one(self) -> "LocalElement":
        return self.element({self.unit: 1})

    def zero(self) -> "LocalElement":
        return LocalElement(self, (Fraction(0),) * self.dim)

    def gen(self, i: int) -> "LocalElement":
        return self.element({variable(self.num_vars, i): 1})

    def basis_element(self, k: int) -> "LocalElement":
        return LocalElement(self, tuple(Fraction(int(j == k)) for j in range(self.dim)))

    def product(self, a: int, b: int) -> dict[int, Fraction]:
        """Sparse normal form of ``u_a * u_b`` for basis indices ``a``, ``b``."""
        key = (a, b) if a <= b else (b, a)
        hit = self._products.get(key)
        if hit is None:
            m = mono_mul(self.basis[a], self.basis[b])
            hit = {} if degree(m) > self.order else self._reduction[m]
            self._products[key] = hit
        return hit

    def multiplication_table(self) -> np.ndarray:
        """Dense structure constants ``T[a, b, c]`` of the normal-form basis."""
        t = zeros((self.dim,) * 3)
        for a in range(self.dim):
            for b in range(self.dim):
                for c, v in self.product(a, b).items():
                    t[a, b, c] = v
        return t

    # comparisons and order changes -----------------------------------------

    def extend_order(self, order: int) -> "TruncatedLocalAlgebra":
        """The same algebra presented with a larger truncation order."""
        if order < self.order:
            raise ValueError("use trimmed() to lower the order")
        if order == self.order:
            return self
        tail = [{m: 1} for d in range(self.order + 1, order + 1) for m in monomials_of_degree(self.num_vars, d)]
        return TruncatedLocalAlgebra(self.num_vars, order, self.ideal_polynomials() + tail)

    def trimmed(self) -> "TruncatedLocalAlgebra":
        """Same algebra at the smallest order ``K'`` with ``m^{K'+1}`` inside the ideal."""
        for d in range(1, self.order + 1):
            if all(not self._reduction[m] for m in monomials_of_degree(self.num_vars, d)):
                keep = [
                    {m: c for m, c in p.items() if degree(m) < d} for p in self.ideal_polynomials()
                ]
                return TruncatedLocalAlgebra(self.num_vars, d - 1, [p for p in keep if p])
        return self

    def same_presentation(self, other: "TruncatedLocalAlgebra") -> bool:
        return (
            isinstance(other, TruncatedLocalAlgebra)
            and (self.num_vars, self.order) == (other.num_vars, other.order)
            and self._key == other._key
        )

    def same_algebra(self, other: "TruncatedLocalAlgebra") -> bool:
        """Equal as quotients of the power series ring in the same variables."""
        if self.num_vars != other.num_vars:
            return False
        k = max(self.order, other.order)
        return self.extend_order(k)._key == other.extend_order(k)._key

    def __eq__(self, other):
        if not isinstance(other, TruncatedLocalAlgebra):
            return NotImplemented
        return self.same_presentation(other)

    def __hash__(self):
        return hash((self.num_vars, self.order, self._key))

    # presentation data ---------------------------------------------------

    def _maximal_times(self, rows: Iterable[dict[int, int]]) -> list[dict[int, int]]:
        return [self._times_var(r, i) for r in rows for i in range(self.num_vars)]

    def _maximal_ideal_echelon(self) -> _Echelon:
        """Echelon basis of ``m I`` (inside the order-``K`` span)."""
        ech = _Echelon(len(self._columns))
        for r in self._maximal_times(self._rows.values()):
            if r:
                ech.add(r)
        return ech

    def _complement(self, sub: _Echelon) -> list[Polynomial]:
        """Canonical ideal rows completing ``sub`` to a basis of the ideal; consumes ``sub``."""
        return [self._poly(self._rows[p], p) for p in sorted(self._rows) if sub.add(self._rows[p])]

    def minimal_generators(self) -> list[Polynomial]:
        """Polynomials spanning ``I/mI`` computed at order ``K`` (no truncation tails)."""
        return self._complement(self._maximal_ideal_echelon())

    def __repr__(self) -> str:
        return f"TruncatedLocalAlgebra({str(self)!r}, order={self.order})"

    def __str__(self) -> str:
        if self.num_vars == 0 or self.order == 0:
            return "Q"
        _, gens = harrison_h2_presented(self)
        body = ", ".join(format_polynomial(p, self.names) for p in gens)
        return f"Q[{','.join(self.names)}]/({body})"


def ground_field() -> TruncatedLocalAlgebra:
    return TruncatedLocalAlgebra(0, 0)


@dataclass(frozen=True, eq=False)
class LocalElement:
    """An element in normal form; ``coeffs`` index the algebra's ``basis``."""

    algebra: TruncatedLocalAlgebra
    coeffs: tuple[Fraction, ...]

    def _other(self, other) -> "LocalElement":
        if isinstance(other, LocalElement):
            if other.algebra is not self.algebra and not other.algebra.same_presentation(self.algebra):
                raise ValueError("elements belong to different algebras")
            return other
        return self.algebra.one() * Fraction(other)

    def __add__(self, other) -> "LocalElement":
        o = self._other(other)
        return LocalElement(self.algebra, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "LocalElement":
        return LocalElement(self.algebra, tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> "LocalElement":
        return self + (-self._other(other))

    def __mul__(self, other) -> "LocalElement":
        if not isinstance(other, LocalElement):
            s = Fraction(other)
            return LocalElement(self.algebra, tuple(a * s for a in self.coeffs))
        o = self._other(other)
        out = [Fraction(0)] * self.algebra.dim
        for a, x in enumerate(self.coeffs):
            if x == 0:
                continue
            for b, y in enumerate(o.coeffs):
                if y == 0:
                    continue
                for c, v in self.algebra.product(a, b).items():
                    out[c] += x * y * v
        return LocalElement(self.algebra, tuple(out))

    def __rmul__(self, other) -> "LocalElement":
        return self * other

    def __pow__(self, k: int) -> "LocalElement":
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def epsilon(self) -> Fraction:
        """The augmentation: the constant term."""
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def to_polynomial(self) -> Polynomial:
        return {m: c for m, c in zip(self.algebra.basis, self.coeffs) if c != 0}

    def __eq__(self, other):
        if not isinstance(other, LocalElement):
            return NotImplemented
        return self.algebra.same_presentation(other.algebra) and self.coeffs == other.coeffs

    __hash__ = None

    def __str__(self) -> str:
        return format_polynomial(self.to_polynomial(), self.algebra.names)

    def __repr__(self) -> str:
        return f"LocalElement({str(self)!r})"


def tangent_space_dim(alg: TruncatedLocalAlgebra) -> int:
    """``dim m/m^2``: variables minus independent linear parts of the ideal."""
    linear = [alg._column_of[variable(alg.num_vars, i)] for i in range(alg.num_vars)] if alg.order >= 1 else []
    parts = [[Fraction(row.get(j, 0), row[p]) for j in linear] for p, row in alg._rows.items()]
    lin_rank = rank(np.array(parts, dtype=object)) if parts and linear else 0
    return (alg.num_vars if alg.order >= 1 else 0) - lin_rank


# ---------------------------------------------------------------------------
# algebra maps
# ---------------------------------------------------------------------------

class AlgebraMap:
    """Unital algebra map given by the images of the source variables.

    Images must lie in the maximal ideal of the target (so the map respects
    the augmentations) and must kill the source relations.
    """

    def __init__(self, source: TruncatedLocalAlgebra, target: TruncatedLocalAlgebra, images: Sequence):
        if len(images) != source.num_vars:
            raise ValueError(f"need {source.num_vars} images, got {len(images)}")
        self.source = source
        self.target = target
        self.images = tuple(target.element(x) for x in images)
        for i, x in enumerate(self.images):
            if x.epsilon() != 0:
                raise ValueError(
                    f"image of {source.names[i]} has constant term {x.epsilon()}; "
                    "the map would not respect the augmentations"
                )
        self._cache: dict[Monomial, LocalElement] = {source.unit: target.one()}
        for p in source.ideal_polynomials():
            if not self.evaluate(p).is_zero():
                raise ValueError(f"relation {format_polynomial(p, source.names)} does not map to zero")
        for m in monomials_of_degree(source.num_vars, source.order + 1):
            if not self._monomial(m).is_zero():
                raise ValueError(f"truncation {format_monomial(m, source.names)} does not map to zero")

    @classmethod
    def identity(cls, alg: TruncatedLocalAlgebra) -> "AlgebraMap":
        return cls(alg, alg, [alg.gen(i) for i in range(alg.num_vars)])

    @classmethod
    def augmentation(cls, alg: TruncatedLocalAlgebra) -> "AlgebraMap":
        k = ground_field()
        return cls(alg, k, [k.zero() for _ in range(alg.num_vars)])

    @classmethod
    def projection(cls, source: TruncatedLocalAlgebra, target: TruncatedLocalAlgebra) -> "AlgebraMap":
        """``g_i -> g_i`` between two quotients in the same variables."""
        if source.num_vars != target.num_vars:
            raise ValueError("projection needs the same variables")
        return cls(source, target, [target.gen(i) for i in range(target.num_vars)])

    def _monomial(self, m: Monomial) -> LocalElement:
        hit = self._cache.get(m)
        if hit is None:
            i = next(k for k, e in enumerate(m) if e)
            rest = tuple(e - (k == i) for k, e in enumerate(m))
            hit = self.images[i] * self._monomial(rest)
            self._cache[m] = hit
        return hit

    def evaluate(self, poly: Mapping[Monomial, Fraction]) -> LocalElement:
        out = self.target.zero()
        for m, c in poly.items():
            if c != 0:
                out = out + self._monomial(tuple(m)) * Fraction(c)
        return out

    def __call__(self, x: LocalElement) -> LocalElement:
        return self.evaluate(self.source.element(x).to_polynomial())

    @cached_property
    def matrix(self) -> np.ndarray:
        """``M[c, a]``: coefficient of target basis ``c`` in the image of source basis ``a``."""
        out = zeros((self.target.dim, self.source.dim))
        for a, m in enumerate(self.source.basis):
            out[:, a] = self._monomial(m).coeffs
        return out

    def linear_part(self) -> np.ndarray:
        """``J[i, j]``: coefficient of target variable ``j`` in the image of ``g_i``."""
        out = zeros((self.source.num_vars, self.target.num_vars))
        t = self.target
        for i, x in enumerate(self.images):
            for j in range(t.num_vars):
                k = t.index.get(variable(t.num_vars, j))
                if k is not None:
                    out[i, j] = x.coeffs[k]
        return out

    def compose(self, after: "AlgebraMap") -> "AlgebraMap":
        """``after`` applied after ``self``."""
        if not after.source.same_presentation(self.target):
            raise ValueError("maps are not composable")
        return AlgebraMap(self.source, after.target, [after(x) for x in self.images])

    def __repr__(self) -> str:
        imgs = ", ".join(f"{n} -> {x}" for n, x in zip(self.source.names, self.images))
        return f"AlgebraMap({imgs})"


# ---------------------------------------------------------------------------
# extensions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ExtensionDatum:
    """A small extension ``0 -> M -> B -> A -> 0`` with ``m_B M = 0``.

    ``B = A + M`` as a vector space with product
    ``(a1, k1)(a2, k2) = (a1 a2, e(a1) k2 + e(a2) k1 + f(a1, a2))``.
    ``f[a, b, r]`` gives the ``r``-th fiber coordinate on the basis pair
    ``(u_a, u_b)`` of ``A``.
    """

    base: TruncatedLocalAlgebra
    fiber_dim: int
    f: np.ndarray

    def __post_init__(self):
        n = self.base.dim
        f = np.asarray(self.f, dtype=object)
        if f.shape != (n, n, self.fiber_dim):
            raise ValueError(f"cocycle must have shape {(n, n, self.fiber_dim)}, got {f.shape}")
        if not all(isinstance(x, Fraction) for x in f.reshape(-1)):
            f = as_fraction_array(f)
        else:
            f = f.copy()
        if any(x != 0 for x in f[0].reshape(-1)) or any(x != 0 for x in f[:, 0].reshape(-1)):
            raise ValueError("the section must be normalised: f(1, -) = 0")
        if not np.all(f == f.transpose(1, 0, 2)):
            raise ValueError("cocycle must be symmetric")
        f.setflags(write=False)
        object.__setattr__(self, "f", f)

    @property
    def total_dim(self) -> int:
        return self.base.dim + self.fiber_dim

    def fiber_index(self, r: int) -> int:
        """Index of the ``r``-th fiber basis vector in the basis of ``B``."""
        return self.base.dim + r

    def product(self, a: int, b: int) -> dict[int, Fraction]:
        """Sparse product of basis vectors of ``B`` (``A``'s basis, then the fiber)."""
        na = self.base.dim
        if a < na and b < na:
            out = dict(self.base.product(a, b))
            for r in range(self.fiber_dim):
                v = self.f[a, b, r]
                if v != 0:
                    out[na + r] = v
            return out
        if a < na:
            return {b: Fraction(1)} if a == 0 else {}
        if b < na:
            return {a: Fraction(1)} if b == 0 else {}
        return {}

    def satisfies_cocycle_condition(self) -> bool:
        """Associativity of ``B``: ``f(a,b) e(c) - f(a,bc) + f(ab,c) - e(a) f(b,c) = 0`` in ``M``."""
        na = self.base.dim
        for a, b, c in itertools.product(range(na), repeat=3):
            lhs = [Fraction(0)] * self.fiber_dim
            for r in range(self.fiber_dim):
                lhs[r] += self.f[a, b, r] * int(c == 0) - self.f[b, c, r] * int(a == 0)
            for k, v in self.base.product(b, c).items():
                for r in range(self.fiber_dim):
                    lhs[r] -= v * self.f[a, k, r]
            for k, v in self.base.product(a, b).items():
                for r in range(self.fiber_dim):
                    lhs[r] += v * self.f[k, c, r]
            if any(x != 0 for x in lhs):
                return False
        return True

    def pullback(self, phi: AlgebraMap) -> "ExtensionDatum":
        """Extension of ``phi.source`` with ``f'(u, v) = f(phi u, phi v)``."""
        if not phi.target.same_presentation(self.base):
            raise ValueError("map does not land in the base of this extension")
        m = phi.matrix
        f2 = np.einsum("ca,db,cdr->abr", m, m, self.f) if self.fiber_dim else zeros(
            (phi.source.dim, phi.source.dim, 0)
        )
        return ExtensionDatum(phi.source, self.fiber_dim, f2)

    def component(self, r: int) -> "ExtensionDatum":
        return ExtensionDatum(self.base, 1, self.f[:, :, r : r + 1])


@dataclass(frozen=True, eq=False)
class UniversalExtension:
    """``0 -> I/mI -> Q[g]/mI -> A -> 0`` for ``A = Q[g]/I``.

    ``kernel_basis`` lists polynomials whose classes form the chosen basis of
    ``I/mI`` (computed one degree beyond the order of ``A``).  ``datum``
    describes the same extension through the section sending each normal
    monomial of ``A`` to itself.
    """

    base: TruncatedLocalAlgebra
    total: TruncatedLocalAlgebra
    kernel_basis: tuple[Polynomial, ...]
    datum: ExtensionDatum

    @property
    def dim(self) -> int:
        return len(self.kernel_basis)


def _lifted_ideal(alg: TruncatedLocalAlgebra) -> tuple[TruncatedLocalAlgebra, list[Polynomial], list[Polynomial]]:
    """For ``J = I + m^{K+1}`` at order ``K+1``: the algebra ``Q[g]/J``,
    the canonical basis of ``mJ``, and canonical representatives of ``J/mJ``."""
    hit = alg.__dict__.get("_lifted")
    if hit is not None:
        return hit
    top = alg.order + 1
    tail = [{m: 1} for m in monomials_of_degree(alg.num_vars, top)]
    lifted = TruncatedLocalAlgebra(alg.num_vars, top, alg.ideal_polynomials() + tail)
    m_ech = lifted._maximal_ideal_echelon()
    m_basis = [lifted._poly(m_ech.rows[p], p) for p in sorted(m_ech.rows)]
    chosen = lifted._complement(m_ech)
    out = (lifted, m_basis, chosen)
    alg._lifted = out
    return out


def harrison_h2_presented(alg: TruncatedLocalAlgebra) -> tuple[int, list[Polynomial]]:
    """``dim H^2(A; Q) = dim I/mI`` and a canonical basis of ``I/mI``.

    The ideal here is the full ``I + m^{K+1}``, so truncation generators of
    degree ``K+1`` are included.
    """
    _, _, gens = _lifted_ideal(alg)
    return len(gens), [dict(p) for p in gens]


def universal_extension(alg: TruncatedLocalAlgebra) -> UniversalExtension:
    """The extension of ``A`` by ``I/mI`` with total algebra ``Q[g]/mI``."""
    _, m_basis, chosen = _lifted_ideal(alg)
    kernel = tuple(dict(p) for p in chosen)
    total = TruncatedLocalAlgebra(alg.num_vars, alg.order + 1, m_basis)
    s = len(kernel)
    na = alg.dim
    f = zeros((na, na, s))
    if s:
        kmat = zeros((total.dim, s))
        for j, p in enumerate(kernel):
            kmat[:, j] = total.reduce_polynomial(p)
        solver = LinearSolver(kmat)
        section = [total.index[m] for m in alg.basis]
        for a in range(na):
            for b in range(a, na):
                diff = [Fraction(0)] * total.dim
                for k, v in total.product(section[a], section[b]).items():
                    diff[k] += v
                for k, v in alg.product(a, b).items():
                    diff[section[k]] -= v
                if any(diff):
                    x = solver.solve(np.array(diff, dtype=object))
                    if x is None:  # pragma: no cover - the section is a splitting
                        raise RuntimeError("product defect left the kernel")
                    f[a, b, :] = x
                    f[b, a, :] = x
    return UniversalExtension(alg, total, kernel, ExtensionDatum(alg, s, f))


def one_dim_extensions(alg: TruncatedLocalAlgebra) -> list[ExtensionDatum]:
    """One extension by ``Q`` per basis direction of ``I/mI``."""
    ext = universal_extension(alg)
    return [ext.datum.component(r) for r in range(ext.dim)]


# ---------------------------------------------------------------------------
# brute-force Harrison cohomology
# ---------------------------------------------------------------------------

def _shuffles(p: int, q: int):
    """(sign, permutation) for the (p, q-p) shuffles, as index tuples."""
    for first in itertools.combinations(range(q), p):
        second = [i for i in range(q) if i not in first]
        # position -> original index
        order = [None] * q
        for pos, idx in zip(first, range(p)):
            order[pos] = idx
        for pos, idx in zip(second, range(p, q)):
            order[pos] = idx
        inversions = sum(1 for i in range(q) for j in range(i + 1, q) if order[i] > order[j])
        yield (-1) ** inversions, tuple(order)


def _hochschild_matrix(table: np.ndarray, eps: Sequence[Fraction], m: int, q: int) -> np.ndarray:
    n = table.shape[0]

    def col(args, b):
        idx = 0
        for x in args:
            idx = idx * n + x
        return idx * m + b

    prod = [[[(c, table[a, b, c]) for c in range(n) if table[a, b, c] != 0] for b in range(n)] for a in range(n)]
    mat = zeros((n ** (q + 1) * m, n ** q * m))
    for xs in itertools.product(range(n), repeat=q + 1):
        base = col(xs, 0)
        for b in range(m):
            row = base + b
            if eps[xs[0]] != 0:
                mat[row, col(xs[1:], b)] += eps[xs[0]]
            for i in range(q):
                for c, v in prod[xs[i]][xs[i + 1]]:
                    mat[row, col(xs[:i] + (c,) + xs[i + 2 :], b)] += (-1) ** (i + 1) * v
            if eps[xs[-1]] != 0:
                mat[row, col(xs[:-1], b)] += (-1) ** (q + 1) * eps[xs[-1]]
    return mat


def _shuffle_matrix(n: int, m: int, q: int) -> np.ndarray:
    """Rows evaluate a cochain on every shuffle product of basis tuples."""
    rows = []
    for xs in itertools.product(range(n), repeat=q):
        for p in range(1, q):
            terms: dict[tuple, int] = {}
            for sign, order in _shuffles(p, q):
                key = tuple(xs[k] for k in order)
                terms[key] = terms.get(key, 0) + sign
            for b in range(m):
                row = [Fraction(0)] * (n ** q * m)
                for key, s in terms.items():
                    idx = 0
                    for x in key:
                        idx = idx * n + x
                    row[idx * m + b] += s
                if any(row):
                    rows.append(row)
    if not rows:
        return zeros((0, n ** q * m))
    return np.array(rows, dtype=object)


def harrison_cohomology_bruteforce(alg, q: int, module_dim: int = 1) -> int:
    """``dim H^q_Harr(A; M)`` for ``M = Q^module_dim`` with ``m M = 0``.

    ``alg`` is a :class:`TruncatedLocalAlgebra` or a multiplication table
    ``T[a, b, c]`` whose basis vector 0 is the unit and the rest span the
    maximal ideal.  Limited to ``dim A <= 6`` and ``q <= 3``.
    """
    table = alg.multiplication_table() if isinstance(alg, TruncatedLocalAlgebra) else np.asarray(alg, dtype=object)
    n = table.shape[0]
    if n > ORACLE_MAX_DIM or q > ORACLE_MAX_DEGREE:
        raise ValueError(
            f"oracle limited to dim A <= {ORACLE_MAX_DIM} and q <= {ORACLE_MAX_DEGREE} "
            f"(got dim {n}, q {q})"
        )
    if q < 0 or module_dim < 1:
        raise ValueError("degree must be non-negative and the module non-zero")
    eps = [Fraction(int(a == 0)) for a in range(n)]
    m = module_dim

    def harrison_space(k: int) -> Subspace:
        s = _shuffle_matrix(n, m, k)
        return nullspace(s) if s.shape[0] else Subspace.full(n ** k * m)

    d_q = _hochschild_matrix(table, eps, m, q)
    s_q = _shuffle_matrix(n, m, q)
    stacked = np.concatenate([d_q, s_q], axis=0) if s_q.shape[0] else d_q
    cocycles = nullspace(stacked).dim
    if q == 0:
        return cocycles
    prev = harrison_space(q - 1)
    d_prev = _hochschild_matrix(table, eps, m, q - 1)
    if prev.dim == 0:
        return cocycles
    images = matmul(d_prev, prev.matrix().T)
    return cocycles - rank(images)
