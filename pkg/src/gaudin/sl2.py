"""Finite-dimensional SL(2) highest-weight modules and their tensor products.

A site of integer weight lam carries the (lam+1)-dimensional module spanned by
v_n = F^n v_lam, n = 0..lam, with

    H v_n = (lam - 2n) v_n,
    E v_n = n (lam - n + 1) v_{n-1},
    F v_n = v_{n+1},        F^{lam+1} v_lam = 0.

The tensor product of N sites is graded by the spin deviation m = sum(n_i);
this module enumerates the weight subspaces V_m and builds exact rational
sparse matrices of the site-local and total generator actions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

# default RNG seed shared by every randomized routine, for reproducible runs
DEFAULT_SEED = 1729

# degree shift of the codomain relative to the domain, per generator
_DEGREE_STEP = {"E": -1, "F": +1, "H": 0}


@dataclass(frozen=True)
class ModelSpec:
    """Problem instance: N site weights and pairwise-distinct rational site points."""

    weights: tuple[int, ...]
    z: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "z", tuple(Fraction(x) for x in self.z))
        if len(self.weights) < 2:
            raise ValueError("need at least two sites")
        if len(self.z) != len(self.weights):
            raise ValueError("weights and z must have the same length")
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive integers")
        if len(set(self.z)) != len(self.z):
            raise ValueError("site parameters z must be pairwise distinct")

    @property
    def n_sites(self) -> int:
        return len(self.weights)

    @property
    def min_weight(self) -> int:
        return min(self.weights)

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    @classmethod
    def from_json(cls, text: str) -> "ModelSpec":
        """Parse {"weights": [...], "z": ["p/q", ...]} with exact rational z."""
        data = json.loads(text)
        return cls(tuple(data["weights"]), tuple(Fraction(s) for s in data["z"]))

    def to_json(self) -> str:
        return json.dumps({"weights": list(self.weights), "z": [str(x) for x in self.z]})


def _weights_of(spec_or_weights) -> tuple[int, ...]:
    if isinstance(spec_or_weights, ModelSpec):
        return spec_or_weights.weights
    return tuple(int(w) for w in spec_or_weights)


@dataclass(frozen=True, eq=False)
class WeightSpace:
    """All occupation vectors (n_1..n_N) with sum m and n_i <= lam_i, in lex order."""

    weights: tuple[int, ...]
    m: int
    states: tuple[tuple[int, ...], ...]
    index: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def __eq__(self, other):
        return (
            isinstance(other, WeightSpace)
            and self.weights == other.weights
            and self.m == other.m
        )


def _space(weights: tuple[int, ...], m: int) -> WeightSpace:
    if 0 <= m <= sum(weights):
        states = tuple(
            s for s in product(*(range(w + 1) for w in weights)) if sum(s) == m
        )
    else:
        states = ()
    return WeightSpace(weights, m, states, {s: i for i, s in enumerate(states)})


def enumerate_weight_space(spec_or_weights, m: int) -> WeightSpace:
    """Weight subspace of spin deviation m, states sorted lexicographically.

    The count equals C(N+m-1, m) while m <= min(weights); beyond that the
    occupation bound n_i <= lam_i truncates the enumeration.
    """
    weights = _weights_of(spec_or_weights)
    if not 0 <= m <= sum(weights):
        raise ValueError(f"spin deviation m={m} outside 0..{sum(weights)}")
    return _space(weights, m)


def weight_space_dimension_formula(n_sites: int, m: int) -> int:
    """Untruncated dimension C(N+m-1, m) of the degree-m subspace."""
    return math.comb(n_sites + m - 1, m)


def apply_site_generator(gen: str, site: int, state: tuple[int, ...], weights):
    """Act with E, F or H on one tensor factor of a basis state.

    Returns (coefficient, new_state), or None when the image vanishes
    (E on n=0, or F past the top of the finite-dimensional module).
    """
    weights = _weights_of(weights)
    n = state[site]
    lam = weights[site]
    if gen == "H":
        return Fraction(lam - 2 * n), state
    if gen == "E":
        if n == 0:
            return None
        return Fraction(n * (lam - n + 1)), state[:site] + (n - 1,) + state[site + 1 :]
    if gen == "F":
        if n == lam:
            return None
        return Fraction(1), state[:site] + (n + 1,) + state[site + 1 :]
    raise ValueError(f"unknown generator {gen!r}")


class SparseOperator:
    """Exact sparse linear map between weight spaces, stored column-wise.

    Entries are Fractions; zero entries are never stored.  Supports the small
    algebra needed here: +, -, scalar multiple, composition (@), application
    to coordinate vectors, and dense conversions.
    """

    __slots__ = ("domain", "codomain", "cols")

    def __init__(self, domain: WeightSpace, codomain: WeightSpace, cols=None):
        self.domain = domain
        self.codomain = codomain
        self.cols = [dict() for _ in range(domain.dim)] if cols is None else cols

    @classmethod
    def zero(cls, domain: WeightSpace, codomain: WeightSpace) -> "SparseOperator":
        return cls(domain, codomain)

    def add_term(self, row: int, col: int, value) -> None:
        if value == 0:
            return
        colmap = self.cols[col]
        new = colmap.get(row, 0) + value
        if new == 0:
            colmap.pop(row, None)
        else:
            colmap[row] = new

    def _check_same_shape(self, other: "SparseOperator") -> None:
        if self.domain != other.domain or self.codomain != other.codomain:
            raise ValueError("operator shapes do not match")

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        self._check_same_shape(other)
        out = SparseOperator(self.domain, self.codomain)
        for col in range(self.domain.dim):
            for row, val in self.cols[col].items():
                out.add_term(row, col, val)
            for row, val in other.cols[col].items():
                out.add_term(row, col, val)
        return out

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        return self + other.scaled(-1)

    def __neg__(self) -> "SparseOperator":
        return self.scaled(-1)

    def scaled(self, factor) -> "SparseOperator":
        factor = Fraction(factor)
        out = SparseOperator(self.domain, self.codomain)
        if factor == 0:
            return out
        out.cols = [{r: factor * v for r, v in colmap.items()} for colmap in self.cols]
        return out

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        if self.domain != other.codomain:
            raise ValueError("operator composition shapes do not match")
        out = SparseOperator(other.domain, self.codomain)
        for col in range(other.domain.dim):
            for mid, v1 in other.cols[col].items():
                for row, v2 in self.cols[mid].items():
                    out.add_term(row, col, v2 * v1)
        return out

    def is_zero(self) -> bool:
        return all(not colmap for colmap in self.cols)

    @property
    def nnz(self) -> int:
        return sum(len(colmap) for colmap in self.cols)

    def apply(self, vec):
        """Apply to a coordinate vector (exact Fractions or floats/complex)."""
        if len(vec) != self.domain.dim:
            raise ValueError("vector length does not match operator domain")
        out = [Fraction(0)] * self.codomain.dim
        for col, x in enumerate(vec):
            if x == 0:
                continue
            for row, val in self.cols[col].items():
                out[row] = out[row] + val * x
        return out

    def entries(self):
        """Yield (row, col, value) sorted by (row, col)."""
        items = []
        for col, colmap in enumerate(self.cols):
            for row, val in colmap.items():
                items.append((row, col, val))
        items.sort(key=lambda t: (t[0], t[1]))
        return items

    def rows(self):
        """Dense rational matrix as a list of row lists."""
        mat = [[Fraction(0)] * self.domain.dim for _ in range(self.codomain.dim)]
        for col, colmap in enumerate(self.cols):
            for row, val in colmap.items():
                mat[row][col] = val
        return mat

    def to_array(self, dtype=float) -> np.ndarray:
        arr = np.zeros((self.codomain.dim, self.domain.dim), dtype=dtype)
        for col, colmap in enumerate(self.cols):
            for row, val in colmap.items():
                arr[row, col] = float(val)
        return arr


def build_site_operator(gen: str, site: int, spec_or_weights, m: int) -> SparseOperator:
    """Matrix of the single-site generator X^(site) restricted to V_m."""
    weights = _weights_of(spec_or_weights)
    dom = enumerate_weight_space(weights, m)
    cod = _space(weights, m + _DEGREE_STEP[gen])
    op = SparseOperator.zero(dom, cod)
    for col, state in enumerate(dom.states):
        hit = apply_site_generator(gen, site, state, weights)
        if hit is None:
            continue
        coeff, new_state = hit
        row = cod.index.get(new_state)
        if row is not None:
            op.add_term(row, col, coeff)
    return op


def build_total_generator(gen: str, spec_or_weights, m: int) -> SparseOperator:
    """Matrix of sum_i X^(i) on V_m.

    E maps V_m -> V_{m-1}, F maps V_m -> V_{m+1}, H is diagonal with constant
    entry sum(weights) - 2m.  At the boundary degrees (E on V_0, F on the top
    subspace) the codomain is the zero space and the map is the zero map.
    """
    weights = _weights_of(spec_or_weights)
    dom = enumerate_weight_space(weights, m)
    cod = _space(weights, m + _DEGREE_STEP[gen])
    op = SparseOperator.zero(dom, cod)
    for col, state in enumerate(dom.states):
        for site in range(len(weights)):
            hit = apply_site_generator(gen, site, state, weights)
            if hit is None:
                continue
            coeff, new_state = hit
            row = cod.index.get(new_state)
            if row is not None:
                op.add_term(row, col, coeff)
    return op
