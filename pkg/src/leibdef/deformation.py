"""Deformations of a Leibniz algebra over local bases.

A deformation over ``A`` is the bracket

    [1(x)x, 1(x)y] = 1(x)[x, y] + sum_m m (x) psi_m(x, y)

on ``A (x) L``, with ``m`` running over the normal-form monomials of the
maximal ideal and each ``psi_m`` a 2-cochain with values in ``L``.  Whether
this bracket satisfies the Leibniz identity is a checkable property, not a
type invariant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .exact_linalg import zeros
from .leibniz import (
    Cochain,
    CohomologyData,
    LeibnizAlgebra,
    NotLeibnizError,
    adjoint,
    cohomology,
    is_cocycle,
    verify_leibniz,
)
from .local_algebra import (
    AlgebraMap,
    ExtensionDatum,
    Monomial,
    TruncatedLocalAlgebra,
    UniversalExtension,
    format_polynomial,
    sort_key,
)

__all__ = [
    "DefectVerdict",
    "Deformation",
    "DifferentialMap",
    "ObstructionClass",
    "alpha_cochain",
    "check_deformation",
    "differential",
    "equivalent_infinitesimal",
    "leibniz_defect",
    "obstruction",
    "push_out",
    "universal_infinitesimal",
]


@dataclass(frozen=True, eq=False)
class Deformation:
    """``algebra`` deformed over ``base`` with coefficients ``psi``.

    ``psi`` maps normal-form monomials of the maximal ideal to 2-cochains.
    Zero coefficients are dropped; missing monomials have ``psi_m = 0``.
    """

    algebra: LeibnizAlgebra
    base: TruncatedLocalAlgebra
    psi: Mapping[Monomial, Cochain] = field(default_factory=dict)

    def __post_init__(self):
        n = self.algebra.dim
        clean = {}
        for m, c in self.psi.items():
            m = tuple(m)
            if m not in self.base.index:
                raise ValueError(f"{m} is not a normal-form monomial of the base")
            if m == self.base.unit:
                raise ValueError("the unit monomial carries the undeformed bracket")
            if (c.degree, c.algebra_dim, c.module_dim) != (2, n, n):
                raise ValueError("coefficients must be 2-cochains with values in the algebra")
            if not c.is_zero():
                clean[m] = c
        ordered = dict(sorted(clean.items(), key=lambda mc: sort_key(mc[0])))
        object.__setattr__(self, "psi", ordered)

    @classmethod
    def trivial(cls, algebra: LeibnizAlgebra, base: TruncatedLocalAlgebra) -> "Deformation":
        return cls(algebra, base, {})

    @classmethod
    def from_terms(cls, algebra: LeibnizAlgebra, base: TruncatedLocalAlgebra, terms: Mapping) -> "Deformation":
        """``terms`` maps polynomials (or their strings) to cochains; reduced to normal form."""
        acc: dict[Monomial, Cochain] = {}
        for poly, cochain in terms.items():
            elem = base.element(poly if not isinstance(poly, tuple) else {poly: 1})
            if elem.epsilon() != 0:
                raise ValueError("coefficients must lie in the maximal ideal")
            for m, c in zip(base.basis, elem.coeffs):
                if c != 0:
                    acc[m] = acc[m] + c * cochain if m in acc else c * cochain
        return cls(algebra, base, acc)

    def coefficient(self, m: Monomial) -> Cochain:
        n = self.algebra.dim
        return self.psi.get(tuple(m), Cochain.zero(2, n, n))

    def tensors(self) -> list[tuple[int, np.ndarray]]:
        """``(basis index, constants)`` pairs, the unit carrying the bracket of ``L``."""
        out = [(0, self.algebra.constants)]
        out += [(self.base.index[m], c.coeffs) for m, c in self.psi.items()]
        return out

    def same_as(self, other: "Deformation") -> bool:
        return (
            self.algebra == other.algebra
            and self.base.same_presentation(other.base)
            and list(self.psi) == list(other.psi)
            and all(self.psi[m] == other.psi[m] for m in self.psi)
        )

    def __eq__(self, other):
        if not isinstance(other, Deformation):
            return NotImplemented
        return self.same_as(other)

    __hash__ = None

    def bracket_polynomials(self) -> dict[tuple[int, int], dict[int, dict]]:
        """``(i, j) -> k -> polynomial``: the coefficient of ``e_k`` in ``[e_i, e_j]``."""
        n = self.algebra.dim
        out: dict[tuple[int, int], dict[int, dict]] = {}
        terms = [(self.base.unit, self.algebra.constants)] + [(m, c.coeffs) for m, c in self.psi.items()]
        for i in range(n):
            for j in range(n):
                entry: dict[int, dict] = {}
                for m, t in terms:
                    for k in range(n):
                        if t[i, j, k] != 0:
                            entry.setdefault(k, {})[m] = t[i, j, k]
                if entry:
                    out[(i, j)] = entry
        return out

    def format_brackets(self) -> list[str]:
        labels = self.algebra.labels
        lines = []
        for (i, j), entry in self.bracket_polynomials().items():
            parts = []
            for k, poly in sorted(entry.items()):
                coeff = format_polynomial(poly, self.base.names)
                if len(poly) > 1:
                    coeff = f"({coeff})"
                parts.append(labels[k] if coeff == "1" else f"{coeff}*{labels[k]}")
            lines.append(f"[{labels[i]},{labels[j]}] = " + " + ".join(parts))
        return lines

    def __repr__(self) -> str:
        return f"Deformation(base={self.base}, brackets={self.format_brackets()})"


# ---------------------------------------------------------------------------
# the Leibniz defect
# ---------------------------------------------------------------------------

def _integer_tensors(items: Sequence[tuple[int, np.ndarray]]) -> tuple[int, list[tuple[int, np.ndarray]]]:
    """Scale every tensor by one common denominator; entries become Python ints."""
    dens = [Fraction(x).denominator for _, t in items for x in t.reshape(-1) if x != 0]
    den = math.lcm(*dens) if dens else 1
    out = []
    for idx, t in items:
        if all(x == 0 for x in t.reshape(-1)):
            continue
        flat = [int(Fraction(x) * den) for x in t.reshape(-1)]
        arr = np.empty(t.shape, dtype=object)
        arr.reshape(-1)[:] = flat
        out.append((idx, arr))
    return den, out


def _defect_components(
    items: Sequence[tuple[int, np.ndarray]],
    product: Callable[[int, int], Mapping[int, Fraction]],
    n: int,
) -> dict[int, np.ndarray]:
    """Leibniz defect of ``sum_a u_a (x) Psi_a`` per output basis index.

    For each ordered pair ``(a, b)`` the product ``u_a u_b`` weights

        Psi_a(x, Psi_b(y, z)) - Psi_a(Psi_b(x, y), z) + Psi_a(Psi_b(x, z), y).
    """
    den, ints = _integer_tensors(items)
    acc: dict[int, np.ndarray] = {}
    for a, pa in ints:
        for b, pb in ints:
            prod = product(a, b)
            if not prod:
                continue
            term = (
                np.einsum("jlk,ikm->ijlm", pb, pa)
                - np.einsum("ijk,klm->ijlm", pb, pa)
                + np.einsum("ilk,kjm->ijlm", pb, pa)
            )
            if not any(term.reshape(-1)):
                continue
            for c, v in prod.items():
                if c in acc:
                    acc[c] = acc[c] + term * v
                else:
                    acc[c] = term * v
    scale = Fraction(1, den * den)
    out = {}
    for c, t in acc.items():
        if any(x != 0 for x in t.reshape(-1)):
            arr = np.empty(t.shape, dtype=object)
            arr.reshape(-1)[:] = [Fraction(x) * scale for x in t.reshape(-1)]
            out[c] = arr
    return out


def leibniz_defect(lam: Deformation) -> dict[Monomial, Cochain]:
    """Nonzero normal-form components of the Leibniz defect over the base."""
    n = lam.algebra.dim
    comps = _defect_components(lam.tensors(), lam.base.product, n)
    return {
        lam.base.basis[c]: Cochain(3, n, n, t)
        for c, t in sorted(comps.items())
    }


@dataclass(frozen=True)
class DefectVerdict:
    defects: Mapping[Monomial, Cochain]

    @property
    def ok(self) -> bool:
        return not self.defects

    def __bool__(self) -> bool:
        return self.ok


def check_deformation(lam: Deformation) -> DefectVerdict:
    """Expand the Leibniz identity of the deformed bracket over the base."""
    return DefectVerdict(leibniz_defect(lam))


# ---------------------------------------------------------------------------
# first order
# ---------------------------------------------------------------------------

def _checked(alg: LeibnizAlgebra) -> None:
    verdict = verify_leibniz(alg)
    if not verdict.ok:
        raise NotLeibnizError(alg, verdict)


def universal_infinitesimal(alg: LeibnizAlgebra) -> Deformation:
    """The deformation over ``Q[g_1..g_h]/m^2`` with ``psi_{g_i}`` the canonical HL^2 basis."""
    _checked(alg)
    data = cohomology(alg, adjoint(alg), 2)
    base = TruncatedLocalAlgebra(data.betti, 1)
    psi = {base.basis[i + 1]: mu for i, mu in enumerate(data.representatives)}
    return Deformation(alg, base, psi)


def push_out(lam: Deformation, phi: AlgebraMap) -> Deformation:
    """Apply ``phi`` to the coefficients: ``sum_m phi(m) (x) psi_m``."""
    if not phi.source.same_presentation(lam.base):
        raise ValueError("map does not start at the base of the deformation")
    mat = phi.matrix
    target = phi.target
    acc: dict[Monomial, Cochain] = {}
    for m, c in lam.psi.items():
        a = lam.base.index[m]
        if mat[0, a] != 0:
            raise ValueError("map does not respect the augmentations")
        for k in range(1, target.dim):
            v = mat[k, a]
            if v != 0:
                tm = target.basis[k]
                acc[tm] = acc[tm] + v * c if tm in acc else v * c
    return Deformation(lam.algebra, target, acc)


def alpha_cochain(lam: Deformation, xi) -> Cochain:
    """``sum_m xi(m) psi_m`` for a functional ``xi`` on the base with ``xi(1) = 0``.

    ``xi`` is a mapping from monomials (or a sequence over the normal-form
    basis) to rationals.
    """
    base = lam.base
    if isinstance(xi, Mapping):
        values = {tuple(m): Fraction(v) for m, v in xi.items()}
    else:
        seq = list(xi)
        if len(seq) != base.dim:
            raise ValueError(f"functional needs {base.dim} values")
        values = {m: Fraction(v) for m, v in zip(base.basis, seq)}
    if values.get(base.unit, 0) != 0:
        raise ValueError("the functional must vanish on 1")
    n = lam.algebra.dim
    out = Cochain.zero(2, n, n)
    for m, v in values.items():
        if v != 0 and m in lam.psi:
            out = out + v * lam.psi[m]
    return out


@dataclass(frozen=True, eq=False)
class DifferentialMap:
    """``matrix[h, i]``: class coordinate ``h`` of the cocycle attached to ``g_i``."""

    matrix: np.ndarray
    variable_names: tuple[str, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def is_identity(self) -> bool:
        r, c = self.matrix.shape
        return r == c and all(
            self.matrix[i, j] == int(i == j) for i in range(r) for j in range(c)
        )

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.matrix.reshape(-1))

    def __eq__(self, other):
        if not isinstance(other, DifferentialMap):
            return NotImplemented
        return self.matrix.shape == other.matrix.shape and bool(np.all(self.matrix == other.matrix))

    __hash__ = None


def _h2(alg: LeibnizAlgebra) -> CohomologyData:
    return cohomology(alg, adjoint(alg), 2)


def differential(lam: Deformation) -> DifferentialMap:
    """Classes of the first-order coefficients after pushing to ``A/m^2``."""
    base = lam.base
    first = TruncatedLocalAlgebra(base.num_vars, min(base.order, 1))
    pushed = push_out(lam, AlgebraMap.projection(base, first))
    data = _h2(lam.algebra)
    mat = zeros((data.betti, base.num_vars))
    for i in range(base.num_vars if first.order else 0):
        xi = {first.basis[i + 1]: 1}
        mat[:, i] = data.coordinates(alpha_cochain(pushed, xi)) if data.betti else ()
    return DifferentialMap(mat, base.names)


def _is_infinitesimal(base: TruncatedLocalAlgebra) -> bool:
    return base.trimmed().order <= 1


def equivalent_infinitesimal(lam1: Deformation, lam2: Deformation) -> bool:
    """First-order equivalence: every coefficient difference is a coboundary."""
    if lam1.algebra != lam2.algebra:
        raise ValueError("deformations of different algebras")
    if not lam1.base.same_presentation(lam2.base):
        raise ValueError("deformations over different bases")
    if not _is_infinitesimal(lam1.base):
        raise ValueError("equivalence is only decided over bases with m^2 = 0")
    alg = lam1.algebra
    rep = adjoint(alg)
    data = _h2(alg)
    for m in lam1.base.maximal_ideal_basis():
        a, b = lam1.coefficient(m), lam2.coefficient(m)
        if not (is_cocycle(alg, rep, a) and is_cocycle(alg, rep, b)):
            raise ValueError("not an infinitesimal deformation: coefficient is not a cocycle")
        if tuple((a - b).flat()) not in data.coboundary_space:
            return False
    return True


# ---------------------------------------------------------------------------
# obstructions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ObstructionClass:
    """Obstruction to lifting a deformation along a small extension.

    For each fiber direction ``r``: the fiber part ``phi_bar[r]`` of the
    defect of the chosen lifting, its coordinates in HL^3, and a 2-cochain
    ``correction[r]`` with ``d correction = phi_bar - sum_h coords_h nu_h``
    (``nu_h`` the canonical HL^3 representatives).
    """

    extension: ExtensionDatum
    lifting: tuple[Cochain, ...]
    phi_bar: tuple[Cochain, ...]
    coordinates: tuple[tuple[Fraction, ...], ...]
    correction: tuple[Cochain, ...]

    @property
    def vanishes(self) -> bool:
        return all(c == 0 for row in self.coordinates for c in row)

    def direction_vanishes(self, r: int) -> bool:
        return all(c == 0 for c in self.coordinates[r])

    @property
    def rho(self) -> tuple[Cochain | None, ...]:
        """``rho`` with ``d rho = phi_bar`` where the class vanishes, else None."""
        return tuple(
            c if self.direction_vanishes(r) else None for r, c in enumerate(self.correction)
        )

    def class_matrix(self) -> np.ndarray:
        """``C[r, h]``: coordinate ``h`` of the class in direction ``r``."""
        h = len(self.coordinates[0]) if self.coordinates else 0
        out = zeros((len(self.coordinates), h))
        for r, row in enumerate(self.coordinates):
            out[r, :] = row
        return out

    def corrected_lifting(self) -> tuple[Cochain, ...]:
        """Lifting ``chi - rho`` whose defect vanishes (needs a vanishing class)."""
        if not self.vanishes:
            raise ValueError("the obstruction does not vanish; no lifting exists")
        return tuple(chi - rho for chi, rho in zip(self.lifting, self.correction))


def lifted_defect(lam: Deformation, ext: ExtensionDatum, lifting: Sequence[Cochain]) -> dict[int, np.ndarray]:
    """Defect of the lifted bracket over the total algebra of ``ext`` (all components)."""
    items = lam.tensors() + [(ext.fiber_index(r), chi.coeffs) for r, chi in enumerate(lifting)]
    return _defect_components(items, ext.product, lam.algebra.dim)


def obstruction(
    lam: Deformation,
    ext: ExtensionDatum | UniversalExtension,
    lifting: Sequence[Cochain] | None = None,
) -> ObstructionClass:
    """Obstruction classes of ``lam`` along ``ext`` for a given lifting (default zero)."""
    if isinstance(ext, UniversalExtension):
        ext = ext.datum
    if not ext.base.same_presentation(lam.base):
        raise ValueError("extension is of a different base algebra")
    alg = lam.algebra
    n = alg.dim
    _checked(alg)
    verdict = check_deformation(lam)
    if not verdict.ok:
        raise ValueError("deformation does not satisfy the Leibniz identity over its base")
    if lifting is None:
        lifting = tuple(Cochain.zero(2, n, n) for _ in range(ext.fiber_dim))
    lifting = tuple(lifting)
    if len(lifting) != ext.fiber_dim:
        raise ValueError(f"lifting needs {ext.fiber_dim} cochains")
    comps = lifted_defect(lam, ext, lifting)
    rep = adjoint(alg)
    h3 = cohomology(alg, rep, 3)
    phi_bar, coords, corrections = [], [], []
    for r in range(ext.fiber_dim):
        t = comps.get(ext.fiber_index(r))
        pb = Cochain(3, n, n, t) if t is not None else Cochain.zero(3, n, n)
        if not is_cocycle(alg, rep, pb):  # pragma: no cover - would contradict the theory
            raise RuntimeError("fiber defect is not a 3-cocycle")
        c, rho = h3.decompose(pb)
        phi_bar.append(pb)
        coords.append(c)
        corrections.append(rho)
    return ObstructionClass(ext, lifting, tuple(phi_bar), tuple(coords), tuple(corrections))
