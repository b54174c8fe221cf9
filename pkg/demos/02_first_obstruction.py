"""Following the first obstruction for the one-dimensional abelian algebra.

Run: python3 demos/02_first_obstruction.py
"""
from __future__ import annotations

from leibdef import (
    LeibnizAlgebra,
    check_deformation,
    obstruction,
    universal_extension,
    universal_infinitesimal,
    versal_truncation,
)

alg = LeibnizAlgebra.abelian(1)

# HL^2 is spanned by e (x) e -> e, so the universal infinitesimal deformation
# lives over Q[t]/(t^2) with bracket [e,e] = t e.
eta = universal_infinitesimal(alg)
print("universal infinitesimal deformation over", eta.base)
for line in eta.format_brackets():
    print("   ", line)

# To go to second order we extend the base by I/mI.  Here I = (t^2), so the
# extension is Q[t]/(t^3) with kernel spanned by t^2.
ext = universal_extension(eta.base)
print("universal extension:", ext.total, "kernel", [str(ext.total.element(p)) for p in ext.kernel_basis])

# Keeping the same bracket over Q[t]/(t^3) fails in the t^2 direction:
# [e,[e,e]] - [[e,e],e] + [[e,e],e] = t^2 e.
obs = obstruction(eta, ext)
print("class coordinates in HL^3:", [[str(c) for c in row] for row in obs.coordinates])
print("obstruction vanishes:", obs.vanishes)

# The class is nonzero, so t^2 must stay in the ideal and the base stops
# growing: the versal base is Q[t]/(t^2) at every order.
for k in (1, 2, 4):
    res = versal_truncation(alg, k)
    print(f"order {k}: base {res.base}, relations {res.relation_strings()}, stabilized at {res.stabilized_at}")
    assert check_deformation(res.bracket).ok
