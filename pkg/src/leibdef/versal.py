"""Order-by-order construction of the versal deformation.

Starting from the universal infinitesimal deformation over
``C_1 = Q[g_1..g_h]/m^2`` (``h = dim HL^2``), each step

1. forms the universal extension ``Q[g]/m I_k`` of ``C_k``,
2. lifts the bracket with zero coefficients on the new kernel directions,
3. splits each fiber defect into its HL^3 class and a coboundary ``d rho``,
4. adds the combinations of kernel directions hit by the classes back into
   the ideal, and
5. corrects the bracket by ``-rho`` on the directions that survive.

When a step adds nothing (``C_{k+1} = C_k``) every later step repeats it,
so the tower is reported as stabilized and simply re-presented at the
requested order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .deformation import (
    Deformation,
    ObstructionClass,
    _checked,
    check_deformation,
    differential,
    equivalent_infinitesimal,
    obstruction,
    push_out,
    universal_infinitesimal,
)
from .leibniz import Cochain, LeibnizAlgebra
from .local_algebra import (
    AlgebraMap,
    Monomial,
    Polynomial,
    TruncatedLocalAlgebra,
    degree,
    format_polynomial,
    poly_degree_range,
    universal_extension,
)

__all__ = [
    "VersalResult",
    "VersalStep",
    "VersalVerdict",
    "compare_pushout",
    "push_down",
    "versal_step",
    "versal_truncation",
    "verify_versal",
]


@dataclass(frozen=True, eq=False)
class VersalStep:
    """What happened when passing from order ``order`` to ``order + 1``."""

    order: int
    kernel_basis: tuple[Polynomial, ...]
    obstruction: ObstructionClass
    new_relations: tuple[Polynomial, ...]
    corrections: dict[Monomial, Cochain]
    stabilized: bool

    @property
    def class_matrix(self) -> np.ndarray:
        return self.obstruction.class_matrix()


@dataclass(frozen=True, eq=False)
class VersalResult:
    algebra: LeibnizAlgebra
    order: int
    base: TruncatedLocalAlgebra
    bracket: Deformation
    relation_generators: tuple[Polynomial, ...]
    history: tuple[VersalStep, ...]
    tower: tuple[Deformation, ...] = field(repr=False)

    @property
    def stabilized(self) -> bool:
        return any(s.stabilized for s in self.history)

    @property
    def stabilized_at(self) -> int | None:
        for s in self.history:
            if s.stabilized:
                return s.order
        return None

    def relation_strings(self) -> list[str]:
        return [format_polynomial(p, self.base.names) for p in self.relation_generators]

    def relation_degrees(self) -> list[int]:
        return [poly_degree_range(p)[0] for p in self.relation_generators]

    def at_order(self, k: int) -> Deformation:
        """``eta_k`` over ``C_k`` from the recorded tower."""
        if not 1 <= k <= len(self.tower):
            raise ValueError(f"order {k} is not in the tower (1..{len(self.tower)})")
        return self.tower[k - 1]


def _normal_form_corrections(
    target: TruncatedLocalAlgebra, kernel: tuple[Polynomial, ...], rhos: list[Cochain]
) -> dict[Monomial, Cochain]:
    out: dict[Monomial, Cochain] = {}
    for poly, rho in zip(kernel, rhos):
        if rho.is_zero():
            continue
        coeffs = target.reduce_polynomial(poly)
        for m, c in zip(target.basis, coeffs):
            if c != 0:
                term = (-c) * rho
                out[m] = out[m] + term if m in out else term
    return {m: c for m, c in out.items() if not c.is_zero()}


def versal_step(eta: Deformation) -> tuple[Deformation, VersalStep]:
    """One step ``(C_k, eta_k) -> (C_{k+1}, eta_{k+1})``."""
    base = eta.base
    ext = universal_extension(base)
    obs = obstruction(eta, ext)
    cls = obs.class_matrix()
    s, h = cls.shape if cls.size else (ext.dim, 0)
    new_rel = []
    for j in range(h):
        poly: dict[Monomial, Fraction] = {}
        for r in range(s):
            c = cls[r, j]
            if c == 0:
                continue
            for m, v in ext.kernel_basis[r].items():
                poly[m] = poly.get(m, Fraction(0)) + c * v
        poly = {m: v for m, v in poly.items() if v != 0}
        if poly:
            new_rel.append(poly)
    m_ideal = ext.total.ideal_polynomials()
    target = TruncatedLocalAlgebra(base.num_vars, base.order + 1, m_ideal + new_rel)
    corrections = _normal_form_corrections(target, ext.kernel_basis, list(obs.correction))
    psi: dict[Monomial, Cochain] = {m: c for m, c in eta.psi.items()}
    for m, c in corrections.items():
        psi[m] = psi[m] + c if m in psi else c
    lifted = Deformation(eta.algebra, target, psi)
    stabilized = target.same_algebra(base)
    step = VersalStep(
        order=base.order,
        kernel_basis=ext.kernel_basis,
        obstruction=obs,
        new_relations=tuple(new_rel),
        corrections=corrections,
        stabilized=stabilized,
    )
    return lifted, step


def _present_at(eta: Deformation, order: int) -> Deformation:
    base = eta.base.extend_order(order)
    return Deformation(eta.algebra, base, dict(eta.psi))


def versal_truncation(alg: LeibnizAlgebra, order: int) -> VersalResult:
    """The order-``order`` truncation of the versal deformation of ``alg``."""
    if order < 1:
        raise ValueError("order must be at least 1")
    _checked(alg)
    eta = universal_infinitesimal(alg)
    tower = [eta]
    history = []
    while eta.base.order < order:
        lifted, step = versal_step(eta)
        history.append(step)
        if step.stabilized:
            break
        eta = lifted
        tower.append(eta)
    while len(tower) < order:
        tower.append(_present_at(eta, len(tower) + 1))
    final = tower[-1]
    return VersalResult(
        algebra=alg,
        order=order,
        base=final.base,
        bracket=final,
        relation_generators=tuple(final.base.minimal_generators()),
        history=tuple(history),
        tower=tuple(tower),
    )


def push_down(eta: Deformation, base: TruncatedLocalAlgebra) -> Deformation:
    """Push along ``g_i -> g_i`` to a quotient in the same variables."""
    return push_out(eta, AlgebraMap.projection(eta.base, base))


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VersalVerdict:
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


def verify_versal(result: VersalResult) -> VersalVerdict:
    """Re-check the invariants of a result independently of how it was built."""
    failures = []
    base = result.base
    defects = check_deformation(result.bracket).defects
    if defects:
        degs = sorted({degree(m) for m in defects})
        failures.append(f"Leibniz identity fails over the base in degrees {degs}")
    d = differential(result.bracket)
    if not d.is_identity():
        failures.append("differential is not the identity")
    for p in result.relation_generators:
        if poly_degree_range(p)[0] < 2:
            failures.append(f"relation {format_polynomial(p, base.names)} is not in m^2")
    rebuilt = TruncatedLocalAlgebra(base.num_vars, base.order, list(result.relation_generators))
    if not rebuilt.same_presentation(base):
        failures.append("relation generators do not generate the ideal of the base")
    elif not TruncatedLocalAlgebra(base.num_vars, base.order, rebuilt.ideal_polynomials()).same_presentation(
        rebuilt
    ):
        failures.append("ideal saturation is not a fixpoint")
    else:
        rebracket = Deformation(result.algebra, rebuilt, dict(result.bracket.psi))
        if check_deformation(rebracket).defects:
            failures.append("bracket fails over the base rebuilt from the relations")
    for low, high in zip(result.tower, result.tower[1:]):
        try:
            down = push_down(high, low.base)
        except ValueError as exc:
            failures.append(f"order {high.base.order} does not map to order {low.base.order}: {exc}")
            continue
        if not down.same_as(low):
            failures.append(f"pushing order {high.base.order} down does not give order {low.base.order}")
    return VersalVerdict(tuple(failures))


def compare_pushout(result: VersalResult, lam: Deformation) -> AlgebraMap:
    """The base map ``C -> A`` inducing ``lam`` at first order, certified.

    Only infinitesimal ``lam`` (``m_A^2 = 0``) are supported, where the map is
    ``g_j -> sum_i d(lam)[j, i] s_i`` and is unique.
    """
    if lam.algebra != result.algebra:
        raise ValueError("deformation of a different algebra")
    verdict = check_deformation(lam)
    if not verdict.ok:
        raise ValueError("deformation does not satisfy the Leibniz identity over its base")
    a = lam.base
    if a.trimmed().order > 1:
        raise ValueError("only bases with m^2 = 0 are supported")
    d = differential(lam).matrix
    images = []
    for j in range(result.base.num_vars):
        poly = {}
        for i in range(a.num_vars):
            if d[j, i] != 0:
                e = [0] * a.num_vars
                e[i] = 1
                poly[tuple(e)] = d[j, i]
        images.append(a.element(poly))
    phi = AlgebraMap(result.base, a, images)
    if not equivalent_infinitesimal(push_out(result.bracket, phi), lam):  # pragma: no cover
        raise RuntimeError("induced deformation is not equivalent to the given one")
    return phi
