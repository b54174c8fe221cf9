"""Every first-order deformation is pulled back from the versal one.

Run: python3 demos/04_universality.py
"""
from __future__ import annotations

from fractions import Fraction

from leibdef import (
    Cochain,
    Deformation,
    TruncatedLocalAlgebra,
    adjoint,
    coboundary,
    compare_pushout,
    cohomology,
    equivalent_infinitesimal,
    load_algebra,
    push_out,
    versal_truncation,
)

alg = load_algebra("nilp2")
rep = adjoint(alg)
mu = cohomology(alg, rep, 2).representatives[0]

# A deformation over Q[g1,g2]/m^2 whose coefficients are the HL^2 class with
# weights 3 and -1/2, disguised by coboundaries.
base = TruncatedLocalAlgebra(2, 1)
rho = Cochain.from_flat(1, 2, 2, [1, 2, 0, -1])
lam = Deformation(
    alg,
    base,
    {
        (1, 0): Fraction(3) * mu + coboundary(alg, rep, rho),
        (0, 1): Fraction(-1, 2) * mu,
    },
)

# The map from the versal base Q[t]/(t^4) sends t to the class coordinates.
versal = versal_truncation(alg, 3)
phi = compare_pushout(versal, lam)
print("versal base:", versal.base)
print("t maps to", phi.images[0])

# Pushing the versal bracket along that map recovers lam up to equivalence.
print("equivalent:", equivalent_infinitesimal(push_out(versal.bracket, phi), lam))
