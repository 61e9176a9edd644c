"""Maximum-entropy fit to all two-way margins of a three-way table.

Cyclic proportional scaling starts from a uniform joint, restricted to
cells that no zero two-way margin forces to zero, and rescales toward
the observed AB, AC, and BC margins until the largest absolute margin
deviation falls at or below `tolerance`. The divergence of the
observed joint from the fitted joint isolates whatever three-way
structure the pairwise associations cannot account for; unlike the
signed three-way transmission it is never negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import fsum, log2
from typing import Mapping

import numpy as np

from .errors import NotConvergedError
from .infocalc import transmission
from .tables import ContingencyTable

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_ITERATIONS = 1000

_PAIRS = ((0, 1), (0, 2), (1, 2))
_SUM_AXIS = {(0, 1): 2, (0, 2): 1, (1, 2): 0}


@dataclass(frozen=True)
class IpfResult:
    """Outcome of the two-way-margin fit of a three-way table.

    `fitted` covers the full cross-product of the observed alphabets
    (zero cells included) and sums to 1. `max_margin_error` is the
    largest absolute deviation, on the probability scale, of any fitted
    two-way margin from its observed counterpart after the last
    iteration.
    """

    fitted: Mapping[tuple[str, str, str], float]
    iterations: int
    max_margin_error: float
    interaction_bits: float
    converged: bool


def _interaction_bits(observed: np.ndarray, fitted: np.ndarray) -> float:
    obs = observed.ravel()
    fit = fitted.ravel()
    cells = obs > 0
    # Every observed cell has positive two-way margins, so the fit
    # cannot have zeroed it; a violation is a bug, not bad data.
    assert np.all(fit[cells] > 0), "fitted joint lost mass on an observed cell"
    return fsum(p * log2(p / q) for p, q in zip(obs[cells], fit[cells])) + 0.0


def ipf_fit(
    table: ContingencyTable,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> IpfResult:
    """Fit the maximum-entropy joint matching all three two-way margins.

    One iteration scales toward each of the three margins once. Stops
    as soon as max_margin_error <= tolerance; a result that exhausts
    max_iterations first is returned flagged non-converged.
    """
    if table.arity != 3:
        raise ValueError("the two-way-margin fit is defined for three-dimension tables")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if table.total < 1:
        raise ValueError("cannot fit an empty table")

    alphabets = table.alphabets
    index = [{label: i for i, label in enumerate(alpha)} for alpha in alphabets]
    observed = np.zeros(tuple(len(alpha) for alpha in alphabets))
    for labels, count in table.counts.items():
        observed[index[0][labels[0]], index[1][labels[1]], index[2][labels[2]]] = count
    observed /= table.total

    margins = {pair: observed.sum(axis=_SUM_AXIS[pair]) for pair in _PAIRS}

    support = (
        (margins[(0, 1)] > 0)[:, :, None]
        & (margins[(0, 2)] > 0)[:, None, :]
        & (margins[(1, 2)] > 0)[None, :, :]
    )
    fitted = support / support.sum()

    def margin_error(q: np.ndarray) -> float:
        return float(
            max(np.abs(q.sum(axis=_SUM_AXIS[p]) - margins[p]).max() for p in _PAIRS)
        )

    iterations = 0
    error = margin_error(fitted)
    while error > tolerance and iterations < max_iterations:
        for pair in _PAIRS:
            axis = _SUM_AXIS[pair]
            current = fitted.sum(axis=axis)
            ratio = np.divide(
                margins[pair], current, out=np.zeros_like(current), where=current > 0
            )
            fitted *= np.expand_dims(ratio, axis)
        iterations += 1
        error = margin_error(fitted)

    fitted_map = {
        labels: float(fitted[index[0][labels[0]], index[1][labels[1]], index[2][labels[2]]])
        for labels in product(*alphabets)
    }
    return IpfResult(
        fitted=fitted_map,
        iterations=iterations,
        max_margin_error=error,
        interaction_bits=_interaction_bits(observed, fitted),
        converged=error <= tolerance,
    )


def krippendorff_interaction(table: ContingencyTable, ipf: IpfResult) -> float:
    """Divergence in bits of the observed joint from the fitted joint.

    Equals sum_t p(t) log2(p(t) / fitted(t)) over observed cells, which
    coincides with H(fitted) - H(observed) whenever the fit matches all
    two-way margins. Refuses a non-converged fit.
    """
    if not ipf.converged:
        raise NotConvergedError(ipf.max_margin_error, ipf.iterations)
    n = float(table.total)
    terms = []
    for labels, count in table.counts.items():
        q = ipf.fitted.get(labels)
        if q is None:
            raise ValueError(f"fit does not cover cell {labels!r}; was it made from this table?")
        assert q > 0, "fitted joint lost mass on an observed cell"
        p = count / n
        terms.append(p * log2(p / q))
    return fsum(terms) + 0.0


def redundancy_bits(table: ContingencyTable, ipf: IpfResult) -> float:
    """Experimental: interaction bits minus the signed three-way transmission.

    Splits the balance between uncertainty added by the three-way
    interaction and the net synergy the signed transmission reports.
    Interpretation of this derived quantity is still unsettled; treat
    it as a diagnostic, not an indicator.
    """
    return krippendorff_interaction(table, ipf) - transmission(table, (0, 1, 2))
