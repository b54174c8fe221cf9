from __future__ import annotations

import dataclasses
import random

import pytest

from leibdef.deformation import (
    Deformation,
    check_deformation,
    differential,
    universal_infinitesimal,
)
from leibdef.leibniz import Cochain, LeibnizAlgebra, adjoint, coboundary
from leibdef.local_algebra import TruncatedLocalAlgebra
from leibdef.versal import compare_pushout, push_down, verify_versal, versal_truncation

from helpers import NILP2, SL2, random_vector

AB1 = LeibnizAlgebra.abelian(1)
AB2 = LeibnizAlgebra.abelian(2)


def summary(result):
    return (
        str(result.base),
        result.relation_strings(),
        result.bracket.format_brackets(),
        result.base.ideal,
    )


@pytest.mark.parametrize("order", [2, 5])
def test_abelian1(order):
    r = versal_truncation(AB1, order)
    assert str(r.base) == "Q[t]/(t^2)"
    assert r.relation_strings() == ["t^2"]
    assert r.bracket.format_brackets() == ["[e1,e1] = t*e1"]
    assert r.stabilized_at == 1
    assert verify_versal(r).ok


def test_order_one_is_universal_infinitesimal():
    r = versal_truncation(NILP2, 1)
    assert r.bracket == universal_infinitesimal(NILP2)
    assert r.relation_generators == () and r.history == ()


def test_rigid_algebra():
    for order in (1, 2, 3):
        r = versal_truncation(SL2, order)
        assert r.base.num_vars == 0 and str(r.base) == "Q"
        assert r.bracket.psi == {} and r.relation_generators == ()
        assert all(str(e.base) == "Q" for e in r.tower)
        assert verify_versal(r).ok


def test_order_validation():
    with pytest.raises(ValueError):
        versal_truncation(AB1, 0)
    with pytest.raises(ValueError):
        versal_truncation(LeibnizAlgebra.from_brackets(1, {(0, 0): {0: 1}}), 2)


def test_nilp2_is_unobstructed():
    # [e2,e2] = e1, [e1,e2] = t e1 is a Leibniz algebra for every t
    r = versal_truncation(NILP2, 4)
    assert r.relation_generators == ()
    assert str(r.base) == "Q[t]/(t^5)"
    assert r.bracket.format_brackets() == ["[e1,e2] = t*e1", "[e2,e2] = e1"]
    assert verify_versal(r).ok


def test_abelian2_quadratic_relations():
    # 36 quadratic kernel directions, obstruction rank 15 (independent oracle)
    r = versal_truncation(AB2, 2)
    assert len(r.relation_generators) == 15
    assert set(r.relation_degrees()) == {2}
    assert r.base.dim == 1 + 8 + 21
    assert verify_versal(r).ok


def test_relation_deleted_brings_back_defect():
    r = versal_truncation(AB1, 3)
    loose = TruncatedLocalAlgebra(1, 3)
    broken = dataclasses.replace(r, relation_generators=())
    assert not verify_versal(broken).ok
    defects = check_deformation(Deformation(AB1, loose, dict(r.bracket.psi))).defects
    assert sorted(defects) == [(2,)]


def test_perturbed_bracket_fails():
    rng = random.Random(3)
    r = versal_truncation(NILP2, 3)
    for _ in range(5):
        c = Cochain.from_flat(2, 2, 2, random_vector(rng, 8, 1, 2))
        psi = dict(r.bracket.psi)
        psi[(2,)] = psi[(2,)] + c if (2,) in psi else c
        bad = dataclasses.replace(r, bracket=Deformation(NILP2, r.base, psi))
        verdict = verify_versal(bad)
        assert not verdict.ok
        assert any("Leibniz identity" in f for f in verdict.failures)


def test_tower_coherence_and_differential():
    for alg in (AB1, NILP2, AB2):
        r = versal_truncation(alg, 3)
        for k in range(1, 3):
            low = r.at_order(k)
            assert push_down(r.at_order(k + 1), low.base) == low
            assert differential(r.at_order(k)).is_identity()
        # a run at a lower order is the truncation of a higher one
        assert versal_truncation(alg, 2).bracket == r.at_order(2)


def test_determinism():
    a, b = versal_truncation(AB2, 2), versal_truncation(AB2, 2)
    assert summary(a) == summary(b)
    assert a.bracket == b.bracket


def test_ideal_chain():
    r = versal_truncation(AB2, 3)
    for low, high in zip(r.tower, r.tower[1:]):
        # C_{k+1} -> C_k exists, so I_{k+1} lies in I_k
        push_down(high, low.base)
        assert all(min(sum(m) for m in p) >= 2 for p in high.base.ideal_polynomials())


def test_compare_pushout_examples():
    r = versal_truncation(NILP2, 3)
    eta1 = universal_infinitesimal(NILP2)
    phi = compare_pushout(r, eta1)
    assert [str(x) for x in phi.images] == ["t"]
    s2 = TruncatedLocalAlgebra(1, 1)
    zero = compare_pushout(r, Deformation.trivial(NILP2, s2))
    assert all(x.is_zero() for x in zero.images)
    rng = random.Random(0)
    rho = Cochain.from_flat(1, 2, 2, random_vector(rng, 4, 1, 3))
    moved = Deformation(NILP2, eta1.base, {(1,): eta1.psi[(1,)] + coboundary(NILP2, adjoint(NILP2), rho)})
    assert [str(x) for x in compare_pushout(r, moved).images] == ["t"]


def test_compare_pushout_rejects_thick_base():
    r = versal_truncation(NILP2, 2)
    lam = Deformation.trivial(NILP2, TruncatedLocalAlgebra(1, 2))
    with pytest.raises(ValueError):
        compare_pushout(r, lam)
