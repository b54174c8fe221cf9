"""Random inputs shared by the test modules."""
from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from leibdef.exact_linalg import as_fraction_array, matmul, solve, zeros
from leibdef.leibniz import LeibnizAlgebra, verify_leibniz


SL2 = LeibnizAlgebra.from_brackets(
    3,
    {(1, 0): {0: 2}, (0, 1): {0: -2}, (0, 2): {1: 1}, (2, 0): {1: -1}, (1, 2): {2: -2}, (2, 1): {2: 2}},
)
HEISENBERG = LeibnizAlgebra.from_brackets(3, {(0, 1): {2: 1}, (1, 0): {2: -1}})
NILP2 = LeibnizAlgebra.from_brackets(2, {(1, 1): {0: 1}})


def unimodular(n: int, rng: random.Random) -> np.ndarray:
    """Product of random elementary matrices; inverse has integer entries."""
    p = as_fraction_array(np.identity(n, dtype=int))
    for _ in range(2 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        e = as_fraction_array(np.identity(n, dtype=int))
        if i != j:
            e[i, j] = rng.choice([-1, 1])
        p = matmul(e, p)
    return p


def change_basis(alg: LeibnizAlgebra, p: np.ndarray) -> LeibnizAlgebra:
    """Constants in the basis ``e'_i = sum_a p[i, a] e_a``."""
    q = inverse(p)
    c = np.einsum("ia,jb,abd,dk->ijk", p, p, alg.constants, q)
    return LeibnizAlgebra(c, name=alg.name)


def inverse(p: np.ndarray) -> np.ndarray:
    n = p.shape[0]
    q = zeros((n, n))
    for k in range(n):
        q[:, k] = solve(p, as_fraction_array(np.identity(n, dtype=int)[:, k]))
    return q


def _sparse_leibniz(rng: random.Random, n: int, max_tries: int = 500) -> LeibnizAlgebra:
    for _ in range(max_tries):
        c = zeros((n, n, n))
        for _ in range(rng.randint(0, n + 1)):
            c[rng.randrange(n), rng.randrange(n), rng.randrange(n)] = Fraction(rng.choice([-1, 1, 2]))
        alg = LeibnizAlgebra(c)
        if verify_leibniz(alg).ok:
            return alg
    return LeibnizAlgebra.abelian(n)  # pragma: no cover


def random_leibniz(rng: random.Random, dim: int | None = None) -> LeibnizAlgebra:
    """A random valid Leibniz algebra of dimension at most 3, in a scrambled basis."""
    n = dim or rng.choice([1, 2, 2, 3, 3])
    if n == 3 and rng.random() < 0.3:
        alg = rng.choice([SL2, HEISENBERG])
    else:
        alg = _sparse_leibniz(rng, n)
    alg = change_basis(alg, unimodular(n, rng))
    scale = Fraction(rng.choice([1, 2, -1]), rng.choice([1, 3]))
    return LeibnizAlgebra(alg.constants * scale)


def random_vector(rng: random.Random, size: int, lo: int = -2, hi: int = 2) -> np.ndarray:
    return as_fraction_array([Fraction(rng.randint(lo, hi)) for _ in range(size)])


def random_cocycle(rng: random.Random, alg: LeibnizAlgebra, scale: int = 2):
    """Random combination of HL^2 representatives plus a random coboundary."""
    from leibdef.leibniz import Cochain, adjoint, coboundary, cohomology

    n = alg.dim
    data = cohomology(alg, adjoint(alg), 2)
    out = data.representative([Fraction(rng.randint(-scale, scale)) for _ in range(data.betti)])
    rho = Cochain.from_flat(1, n, n, random_vector(rng, n * n))
    return out + coboundary(alg, adjoint(alg), rho)


def random_infinitesimal(rng: random.Random, alg: LeibnizAlgebra, num_vars: int | None = None):
    """Deformation over ``Q[s_1..s_d]/m^2`` with random cocycle coefficients."""
    from leibdef.deformation import Deformation
    from leibdef.local_algebra import TruncatedLocalAlgebra

    d = num_vars if num_vars is not None else rng.randint(1, 3)
    base = TruncatedLocalAlgebra(d, 1)
    return Deformation(alg, base, {base.basis[i + 1]: random_cocycle(rng, alg) for i in range(d)})
