"""The second-order versal deformation of the two-dimensional abelian algebra.

Run: python3 demos/03_versal_abelian2.py
"""
from __future__ import annotations

import time

from leibdef import LeibnizAlgebra, verify_versal, versal_truncation

alg = LeibnizAlgebra.abelian(2)

# HL^2 has dimension 8, one variable for each structure constant.  At second
# order the obstruction has rank 15 on the 36 quadratic directions, so 15
# quadratic relations cut out the base.
start = time.perf_counter()
res = versal_truncation(alg, 2)
elapsed = time.perf_counter() - start

print(f"versal base to order 2 ({elapsed:.2f} s): dim {res.base.dim}, {len(res.relation_generators)} relations")
for rel in res.relation_strings():
    print("   ", rel, "= 0")
print("bracket:")
for line in res.bracket.format_brackets():
    print("   ", line)

# No corrections were needed: the bracket is the generic one in g1..g8 and
# the relations come from its Leibniz identity, which is quadratic in g.
verdict = verify_versal(res)
print("independent re-check:", "ok" if verdict.ok else verdict.failures)

# At third order the same 15 quadrics still generate the ideal.
res3 = versal_truncation(alg, 3)
print(f"order 3: dim {res3.base.dim}, {len(res3.relation_generators)} relations of degrees {sorted(set(res3.relation_degrees()))}")
print("same relations as order 2:", res3.relation_strings() == res.relation_strings())
