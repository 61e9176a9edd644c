"""Entropies and signed transmissions over contingency tables, in bits.

All quantities are plug-in (relative frequency) estimates with base-2
logarithms:

    H(S)      = -sum_s p(s) log2 p(s)  over the marginal for subset S
    T(S)      = sum over non-empty U within S of (-1)^(|U|+1) H(U)
    T(a,b|c)  = H(ac) + H(bc) - H(c) - H(abc)

T of two dimensions is the ordinary mutual information and never
negative; T of three or four dimensions is signed, with negative values
indicating a net reduction of uncertainty (synergy). Sums use
math.fsum, so every value is independent of cell iteration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import fsum, log2
from typing import Iterable, Mapping

from .tables import ContingencyTable, marginal, normalize_subset

DIM_NAMES = "wxyz"

# Fixed output schema: every subset of the four dimensions, smallest
# first, lexicographic within each size. Reports from 3-dimension data
# occupy the same 26 slots with zeros in every z-involving entry.
H_SCHEMA: tuple[tuple[int, ...], ...] = tuple(
    subset for size in range(1, 5) for subset in combinations(range(4), size)
)
T_SCHEMA: tuple[tuple[int, ...], ...] = tuple(s for s in H_SCHEMA if len(s) >= 2)


def subset_name(subset: Iterable[int]) -> str:
    """Display name of a dimension subset, e.g. (0, 2) -> "WY"."""
    return "".join(DIM_NAMES[d] for d in sorted(subset)).upper()


def parse_subset(text: str) -> tuple[int, ...]:
    """Turn a dimension string like "wxz" or "w,x,z" into sorted indices."""
    cleaned = text.replace(",", "").replace(" ", "").lower()
    if not cleaned:
        raise ValueError("empty dimension subset")
    dims = []
    for ch in cleaned:
        if ch not in DIM_NAMES:
            raise ValueError(f"unknown dimension {ch!r}; use letters from {DIM_NAMES!r}")
        dims.append(DIM_NAMES.index(ch))
    if len(set(dims)) != len(dims):
        raise ValueError(f"duplicate dimension in {text!r}")
    return tuple(sorted(dims))


def _entropy_of_counts(counts: Iterable[int], total: int) -> float:
    n = float(total)
    h = -fsum(c / n * log2(c / n) for c in counts)
    return h + 0.0  # normalize -0.0


def entropy(table: ContingencyTable, subset: Iterable[int]) -> float:
    """Shannon entropy in bits of the marginal distribution for `subset`."""
    if table.total < 1:
        raise ValueError("entropy of an empty table is undefined")
    dims = normalize_subset(subset, table.arity)
    if len(dims) == table.arity:
        counts = table.counts.values()
    else:
        counts = marginal(table, dims).counts.values()
    return _entropy_of_counts(counts, table.total)


def _transmission_from_entropies(
    dims: tuple[int, ...], h: Mapping[tuple[int, ...], float]
) -> float:
    terms = []
    for size in range(1, len(dims) + 1):
        sign = 1.0 if size % 2 == 1 else -1.0
        terms.extend(sign * h[u] for u in combinations(dims, size))
    return fsum(terms) + 0.0


def transmission(table: ContingencyTable, subset: Iterable[int]) -> float:
    """Signed transmission T(S), by inclusion-exclusion over subset entropies."""
    dims = normalize_subset(subset, table.arity)
    if len(dims) < 2:
        raise ValueError("transmission needs at least two distinct dimensions")
    h = {
        u: entropy(table, u)
        for size in range(1, len(dims) + 1)
        for u in combinations(dims, size)
    }
    return _transmission_from_entropies(dims, h)


def conditional_transmission(table: ContingencyTable, a: int, b: int, given: int) -> float:
    """Mutual information of dimensions a and b conditioned on `given`; never negative."""
    if len({a, b, given}) != 3:
        raise ValueError("the two target dimensions and the conditioning dimension must be distinct")
    return fsum(
        (
            entropy(table, (a, given)),
            entropy(table, (b, given)),
            -entropy(table, (given,)),
            -entropy(table, (a, b, given)),
        )
    ) + 0.0


@dataclass(frozen=True)
class EntropyReport:
    """Every subset entropy and transmission of one table, in bits.

    `h` maps each non-empty dimension subset (sorted index tuples) to
    its entropy, `t` each subset of size >= 2 to its transmission: 15
    and 11 entries for 4-dimension data, 7 and 4 for 3-dimension data.
    """

    arity: int
    n_cases: int
    h: Mapping[tuple[int, ...], float]
    t: Mapping[tuple[int, ...], float]

    def schema_values(self) -> tuple[float, ...]:
        """The 26 values of the fixed 4-dimension schema, H block then T block.

        For 3-dimension data every entry involving the absent fourth
        dimension is exactly 0.
        """
        hs = tuple(self.h.get(s, 0.0) for s in H_SCHEMA)
        ts = tuple(self.t.get(s, 0.0) for s in T_SCHEMA)
        return hs + ts


def full_report(table: ContingencyTable) -> EntropyReport:
    """Compute H for every subset and T for every subset of size >= 2."""
    dims = range(table.arity)
    h: dict[tuple[int, ...], float] = {}
    for size in range(1, table.arity + 1):
        for subset in combinations(dims, size):
            h[subset] = entropy(table, subset)
    t: dict[tuple[int, ...], float] = {}
    for size in range(2, table.arity + 1):
        for subset in combinations(dims, size):
            t[subset] = _transmission_from_entropies(subset, h)
    return EntropyReport(arity=table.arity, n_cases=table.total, h=h, t=t)
