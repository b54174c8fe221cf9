"""Leibniz cohomology of a few small algebras with adjoint coefficients.

Run: python3 demos/01_cohomology.py
"""
from __future__ import annotations

from leibdef import adjoint, cohomology, load_algebra, verify_leibniz
from leibdef.fileformat import encode_cochain

# The catalog holds the algebras used throughout the tests.  nonleibniz1 is
# there on purpose: its bracket [e,e] = e breaks the identity at (e,e,e).
for name in ("abelian1", "abelian2", "nilp2", "sl2", "nonleibniz1"):
    alg = load_algebra(name)
    verdict = verify_leibniz(alg)
    if not verdict.ok:
        print(f"{name}: not a Leibniz algebra, first failure at {verdict.violations[0].where}")
        continue
    bettis = [cohomology(alg, adjoint(alg), q).betti for q in range(4)]
    print(f"{name}: dim HL^0..3 = {bettis}")

# For an abelian algebra the coboundary vanishes identically, so every
# cochain is a cocycle and HL^2 has dimension n^3.
print()
print("abelian2: HL^2 has", cohomology(load_algebra("abelian2"), adjoint(load_algebra("abelian2")), 2).betti, "classes")

# nilp2 ([e2,e2] = e1) has a one-dimensional HL^2; its representative is
# the direction in which the algebra deforms.
nilp2 = load_algebra("nilp2")
rep = cohomology(nilp2, adjoint(nilp2), 2).representatives[0]
print("nilp2: HL^2 representative", encode_cochain(nilp2, rep))

# sl2 is semisimple: no infinitesimal deformations and no obstructions.
sl2 = load_algebra("sl2")
print("sl2: HL^2, HL^3 =", [cohomology(sl2, adjoint(sl2), q).betti for q in (2, 3)])
