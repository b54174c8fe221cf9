from __future__ import annotations

import random
from fractions import Fraction

import pytest

from leibdef.deformation import (
    Deformation,
    alpha_cochain,
    check_deformation,
    differential,
    equivalent_infinitesimal,
    leibniz_defect,
    obstruction,
    push_out,
    universal_infinitesimal,
)
from leibdef.exact_linalg import as_fraction_array, matmul
from leibdef.leibniz import (
    Cochain,
    LeibnizAlgebra,
    NotLeibnizError,
    adjoint,
    coboundary,
    cohomology,
    is_cocycle,
)
from leibdef.local_algebra import (
    AlgebraMap,
    ExtensionDatum,
    TruncatedLocalAlgebra,
    universal_extension,
)

from helpers import NILP2, SL2, random_cocycle, random_infinitesimal, random_leibniz, random_vector

AB1 = LeibnizAlgebra.abelian(1)
AB2 = LeibnizAlgebra.abelian(2)
MU = Cochain.from_flat(2, 1, 1, [1])  # e (x) e -> e


def test_universal_infinitesimal_examples():
    eta = universal_infinitesimal(AB1)
    assert eta.base.same_presentation(TruncatedLocalAlgebra(1, 1))
    assert eta.format_brackets() == ["[e1,e1] = t*e1"]
    rigid = universal_infinitesimal(SL2)
    assert rigid.base.num_vars == 0 and rigid.psi == {}
    eta2 = universal_infinitesimal(AB2)
    assert eta2.base.num_vars == 8
    flats = sorted(tuple(c.flat()) for c in eta2.psi.values())
    assert flats == sorted(tuple(int(k == i) for k in range(8)) for i in range(8))


def test_universal_infinitesimal_rejects_non_leibniz():
    with pytest.raises(NotLeibnizError):
        universal_infinitesimal(LeibnizAlgebra.from_brackets(1, {(0, 0): {0: 1}}))


def test_check_deformation_examples():
    assert check_deformation(universal_infinitesimal(NILP2)).ok
    over_t3 = Deformation.from_terms(AB1, TruncatedLocalAlgebra(1, 2), {"t": MU})
    defects = check_deformation(over_t3).defects
    assert list(defects) == [(2,)]
    assert defects[(2,)].value(0, 0, 0) == (1,)
    assert check_deformation(Deformation.from_terms(AB1, TruncatedLocalAlgebra(1, 1), {"t": MU})).ok
    assert check_deformation(Deformation.trivial(SL2, TruncatedLocalAlgebra(2, 3))).ok


def test_non_cocycle_coefficient_has_defect():
    rng = random.Random(4)
    base = TruncatedLocalAlgebra(1, 1)
    for _ in range(10):
        alg = random_leibniz(rng, 2)
        c = Cochain.from_flat(2, 2, 2, random_vector(rng, 8))
        lam = Deformation(alg, base, {(1,): c})
        assert check_deformation(lam).ok == is_cocycle(alg, adjoint(alg), c)


def test_defect_of_invalid_algebra_sits_on_unit():
    bad = LeibnizAlgebra.from_brackets(1, {(0, 0): {0: 1}})
    defects = leibniz_defect(Deformation.trivial(bad, TruncatedLocalAlgebra(1, 1)))
    assert list(defects) == [(0,)]


def test_push_out_examples():
    eta = universal_infinitesimal(NILP2)
    assert push_out(eta, AlgebraMap.identity(eta.base)) == eta
    eps = push_out(eta, AlgebraMap.augmentation(eta.base))
    assert eps.psi == {} and eps.base.num_vars == 0


def test_push_out_functorial():
    rng = random.Random(8)
    alg = NILP2
    a = TruncatedLocalAlgebra(2, 2)
    lam = Deformation(alg, a, {(1, 0): random_cocycle(rng, alg), (0, 1): random_cocycle(rng, alg)})
    b = TruncatedLocalAlgebra(2, 2)
    c = TruncatedLocalAlgebra(1, 2)
    for _ in range(5):
        phi = AlgebraMap(a, b, [b.element({(1, 0): rng.randint(-2, 2), (0, 1): rng.randint(-2, 2),
                                           (1, 1): rng.randint(-2, 2)}) for _ in range(2)])
        psi = AlgebraMap(b, c, [c.element({(1,): rng.randint(-2, 2), (2,): rng.randint(-2, 2)})
                                for _ in range(2)])
        assert push_out(push_out(lam, phi), psi) == push_out(lam, phi.compose(psi))


def test_push_out_rejects_wrong_source():
    eta = universal_infinitesimal(AB1)
    with pytest.raises(ValueError):
        push_out(eta, AlgebraMap.identity(TruncatedLocalAlgebra(1, 2)))


def test_alpha_examples():
    eta = universal_infinitesimal(NILP2)
    assert alpha_cochain(eta, {(1,): 0}).is_zero()
    (mu,) = cohomology(NILP2, adjoint(NILP2), 2).representatives
    assert alpha_cochain(eta, {(1,): 1}) == mu
    assert alpha_cochain(eta, [0, 1]) == mu
    with pytest.raises(ValueError):
        alpha_cochain(eta, {(0,): 1})


def test_differential_examples():
    for alg in (AB1, NILP2, AB2):
        assert differential(universal_infinitesimal(alg)).is_identity()
    assert differential(Deformation.trivial(AB2, TruncatedLocalAlgebra(2, 1))).is_zero()


def test_differential_chain_rule():
    rng = random.Random(13)
    for _ in range(8):
        alg = random_leibniz(rng, 2)
        lam = random_infinitesimal(rng, alg, 2)
        target = TruncatedLocalAlgebra(3, 1)
        imgs = [target.element({(1, 0, 0): rng.randint(-2, 2), (0, 1, 0): rng.randint(-2, 2),
                                (0, 0, 1): rng.randint(-2, 2)}) for _ in range(2)]
        phi = AlgebraMap(lam.base, target, imgs)
        lhs = differential(push_out(lam, phi)).matrix
        rhs = matmul(differential(lam).matrix, phi.linear_part())
        assert lhs.tolist() == rhs.tolist()


def test_equivalence_examples():
    rng = random.Random(2)
    eta = universal_infinitesimal(NILP2)
    assert equivalent_infinitesimal(eta, eta)
    rho = Cochain.from_flat(1, 2, 2, random_vector(rng, 4, 1, 3))
    moved = Deformation(NILP2, eta.base, {(1,): eta.psi[(1,)] + coboundary(NILP2, adjoint(NILP2), rho)})
    assert not moved.same_as(eta)
    assert equivalent_infinitesimal(eta, moved)
    assert not equivalent_infinitesimal(eta, Deformation.trivial(NILP2, eta.base))


def test_equivalence_requires_infinitesimal_base():
    lam = Deformation.trivial(NILP2, TruncatedLocalAlgebra(1, 2))
    with pytest.raises(ValueError):
        equivalent_infinitesimal(lam, lam)
    with pytest.raises(ValueError):
        equivalent_infinitesimal(lam, Deformation.trivial(NILP2, TruncatedLocalAlgebra(1, 1)))


def test_equivalence_is_an_equivalence_relation():
    rng = random.Random(21)
    for _ in range(10):
        alg = random_leibniz(rng, 2)
        base = TruncatedLocalAlgebra(1, 1)
        data = cohomology(alg, adjoint(alg), 2)
        # few classes so that equivalent pairs actually occur
        def draw():
            c = data.representative([Fraction(rng.randint(0, 1)) for _ in range(data.betti)])
            rho = Cochain.from_flat(1, alg.dim, alg.dim, random_vector(rng, alg.dim ** 2))
            return Deformation(alg, base, {(1,): c + coboundary(alg, adjoint(alg), rho)})
        x, y, z = draw(), draw(), draw()
        assert equivalent_infinitesimal(x, x)
        assert equivalent_infinitesimal(x, y) == equivalent_infinitesimal(y, x)
        if equivalent_infinitesimal(x, y) and equivalent_infinitesimal(y, z):
            assert equivalent_infinitesimal(x, z)


def test_representative_choice_does_not_matter():
    rng = random.Random(6)
    for _ in range(5):
        alg = random_leibniz(rng)
        eta = universal_infinitesimal(alg)
        n = alg.dim
        moved = Deformation(alg, eta.base, {
            m: c + coboundary(alg, adjoint(alg), Cochain.from_flat(1, n, n, random_vector(rng, n * n)))
            for m, c in eta.psi.items()
        })
        assert equivalent_infinitesimal(eta, moved)


def test_obstruction_example_abelian1():
    eta = universal_infinitesimal(AB1)
    obs = obstruction(eta, universal_extension(eta.base))
    (pb,) = obs.phi_bar
    assert pb.value(0, 0, 0) == (1,)
    assert obs.coordinates == ((1,),)
    assert not obs.vanishes and obs.rho == (None,)
    with pytest.raises(ValueError):
        obs.corrected_lifting()


def test_obstruction_trivial_deformation():
    base = TruncatedLocalAlgebra(2, 1)
    lam = Deformation.trivial(NILP2, base)
    obs = obstruction(lam, universal_extension(base))
    assert obs.vanishes
    assert all(r is not None and r.is_zero() for r in obs.rho)


def test_obstruction_rejects_invalid_deformation():
    lam = Deformation.from_terms(AB1, TruncatedLocalAlgebra(1, 2), {"t": MU})
    with pytest.raises(ValueError):
        obstruction(lam, universal_extension(lam.base))


def test_corrected_lifting_kills_defect():
    from leibdef.deformation import lifted_defect

    eta = universal_infinitesimal(NILP2)
    ext = universal_extension(eta.base).datum
    obs = obstruction(eta, ext)
    assert obs.vanishes
    comps = lifted_defect(eta, ext, obs.corrected_lifting())
    assert all(ext.fiber_index(r) not in comps for r in range(ext.fiber_dim))


def test_lifting_choice_changes_defect_by_coboundary():
    rng = random.Random(17)
    for _ in range(6):
        alg = random_leibniz(rng)
        eta = universal_infinitesimal(alg)
        ext = universal_extension(eta.base).datum
        if ext.fiber_dim == 0 or ext.fiber_dim > 40:
            continue
        n = alg.dim
        chi = [Cochain.from_flat(2, n, n, random_vector(rng, n ** 3)) for _ in range(ext.fiber_dim)]
        a = obstruction(eta, ext)
        b = obstruction(eta, ext, chi)
        assert a.coordinates == b.coordinates
        for pa, pb, c in zip(a.phi_bar, b.phi_bar, chi):
            assert pb - pa == coboundary(alg, adjoint(alg), c)
            assert is_cocycle(alg, adjoint(alg), pb)


def naturality_case(a1, a2, c1, c2):
    """Obstruction classes of both sides of the naturality square."""
    src = TruncatedLocalAlgebra(2, 1)
    tgt = TruncatedLocalAlgebra(1, 1)
    lam2 = Deformation(AB1, src, {(1, 0): c1 * MU, (0, 1): c2 * MU})
    phi = AlgebraMap(src, tgt, [tgt.element({(1,): a1}), tgt.element({(1,): a2})])
    lam1 = push_out(lam2, phi)
    ext1 = universal_extension(tgt).datum
    ext2 = ext1.pullback(phi)
    return obstruction(lam1, ext1).coordinates, obstruction(lam2, ext2).coordinates


def test_obstruction_naturality():
    for a1, a2, c1, c2 in [(1, 0, 1, 0), (2, -1, 1, 3), (0, 0, 1, 1), (Fraction(1, 2), 3, -2, 1)]:
        left, right = naturality_case(a1, a2, c1, c2)
        assert left == right
        assert left == ((Fraction(a1 * c1 + a2 * c2) ** 2,),)


def test_pullback_of_explicit_datum():
    tgt = TruncatedLocalAlgebra(1, 1)
    f = as_fraction_array([[[0], [0]], [[0], [1]]])
    ext = ExtensionDatum(tgt, 1, f)
    assert ext.satisfies_cocycle_condition()
