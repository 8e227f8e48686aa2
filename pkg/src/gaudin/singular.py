"""Singular vectors of the tensor module: vectors annihilated by the total E.

Two independent routes are provided.  The Gordan-type construction builds,
for each composition (k_1..k_{N-1}) of m, an explicit vector by repeatedly
adjoining one site with the bilinear covariant-style operator

    P_k(u (x) v_lam) = sum_j (-1)^j C(k,j) (k-j-lam)_j / (-mu)_j  F_tot^j u (x) F^{k-j} v_lam,

where mu is the SL(2) weight of the left factor u and (x)_j is the rising
factorial.  The kernel route computes the exact rational nullspace of the
total raising operator and is valid for every m, including the truncated
regime m > min(weights) where the Gordan route is not offered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .rational_linalg import nullspace
from .sl2 import (
    build_total_generator,
    enumerate_weight_space,
    _weights_of,
)


class GordanSingularityError(ValueError):
    """Coefficient denominators vanish: the left weight is smaller than the step count."""


class UnsupportedRegimeError(ValueError):
    """Gordan construction requested for m > min(weights)."""


def pochhammer(x, k: int) -> Fraction:
    """Rising factorial x (x+1) ... (x+k-1), with empty product 1."""
    out = Fraction(1)
    x = Fraction(x)
    for i in range(k):
        out *= x + i
    return out


def singular_dimension_formula(n_sites: int, m: int) -> int:
    """Untruncated dimension C(m+N-2, m) of the singular subspace of V_m."""
    return math.comb(m + n_sites - 2, m)


@dataclass(frozen=True)
class GordanCoefficients:
    m: int
    lambda1: Fraction
    lambda2: Fraction
    coeffs: tuple


def gordan_coefficients(m: int, lambda1, lambda2) -> GordanCoefficients:
    """Coefficients c_k = (-1)^k C(m,k) (m-k-lambda2)_k / (-lambda1)_k, k = 0..m.

    Defined only for lambda1 >= m; otherwise a denominator factor vanishes and
    the construction leaves its unique-solution regime.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    l1 = Fraction(lambda1)
    l2 = Fraction(lambda2)
    if l1 < m:
        raise GordanSingularityError(
            f"left weight {l1} smaller than m={m}: coefficient denominators vanish"
        )
    coeffs = []
    for k in range(m + 1):
        den = pochhammer(-l1, k)
        if den == 0:
            raise GordanSingularityError(f"denominator (-{l1})_{k} vanishes")
        num = pochhammer(m - k - l2, k)
        coeffs.append(Fraction((-1) ** k * math.comb(m, k)) * num / den)
    return GordanCoefficients(m, l1, l2, tuple(coeffs))


def apply_P(spec_or_weights, k: int, u, m: int):
    """Adjoin the last site to a weight vector of the first N-1 sites.

    u is an exact coordinate vector over the degree-(m-k) weight space of
    weights[:-1]; the result is the coordinate vector of

        sum_j c_j (F_tot^j u) (x) F^{k-j} v_{lam_N}

    in the full degree-m space, with Gordan coefficients at (k, mu, lam_N)
    where mu = sum(weights[:-1]) - 2(m-k) is the SL(2) weight of u.
    """
    weights = _weights_of(spec_or_weights)
    prefix = weights[:-1]
    lam_last = weights[-1]
    if not 0 <= k <= m:
        raise ValueError("need 0 <= k <= m")
    degree = m - k
    dom = enumerate_weight_space(prefix, degree)
    u = [Fraction(x) for x in u]
    if len(u) != dom.dim:
        raise ValueError("u does not match the prefix weight space dimension")
    if all(x == 0 for x in u):
        raise ValueError("u must be nonzero")
    mu = sum(prefix) - 2 * degree
    cg = gordan_coefficients(k, mu, lam_last)

    target = enumerate_weight_space(weights, m)
    out = [Fraction(0)] * target.dim
    cur = u
    cur_space = dom
    for j in range(k + 1):
        n_last = k - j
        if n_last <= lam_last and cg.coeffs[j] != 0:
            cj = cg.coeffs[j]
            for idx, val in enumerate(cur):
                if val == 0:
                    continue
                pos = target.index.get(cur_space.states[idx] + (n_last,))
                if pos is not None:
                    out[pos] += cj * val
        if j < k:
            f_op = build_total_generator("F", prefix, degree + j)
            cur = f_op.apply(cur)
            cur_space = f_op.codomain
    return out


def compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative integers summing to `total`, lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class SingularBasis:
    """Exact basis vectors of the singular subspace of V_m.

    labels holds one composition (k_1..k_{N-1}) per vector for the Gordan
    route and is None for the kernel route.  Coordinates are ordered by the
    weight space enumeration.
    """

    m: int
    labels: tuple | None
    vectors: tuple

    @property
    def count(self) -> int:
        return len(self.vectors)


def singular_basis_gordan(spec_or_weights, m: int) -> SingularBasis:
    """One singular vector per composition of m into N-1 parts.

    Iterates apply_P over site prefixes: the composition entry k_1 is used
    when adjoining site 2, k_2 when adjoining site 3, and so on.  Only valid
    for m <= min(weights); the kernel route covers the truncated regime.
    """
    weights = _weights_of(spec_or_weights)
    if m > min(weights):
        raise UnsupportedRegimeError(
            f"Gordan construction requires m <= min(weights) = {min(weights)}, got m={m}"
        )
    n = len(weights)
    labels = []
    vectors = []
    for comp in compositions(m, n - 1):
        u = [Fraction(1)]
        degree = 0
        for j in range(2, n + 1):
            degree += comp[j - 2]
            u = apply_P(weights[:j], comp[j - 2], u, degree)
        labels.append(comp)
        vectors.append(tuple(u))
    return SingularBasis(m, tuple(labels), tuple(vectors))


def singular_basis_kernel(spec_or_weights, m: int) -> SingularBasis:
    """Exact nullspace of the total raising operator on V_m (canonical basis)."""
    weights = _weights_of(spec_or_weights)
    space = enumerate_weight_space(weights, m)
    e_op = build_total_generator("E", weights, m)
    vectors = nullspace(e_op.rows(), n_cols=space.dim)
    return SingularBasis(m, None, tuple(tuple(v) for v in vectors))
