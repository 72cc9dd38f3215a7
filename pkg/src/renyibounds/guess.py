"""Guessing moments: optimal ranking, moment bounds, and clustering gains.

The optimal guesser asks atoms in order of decreasing mass; its rho-th
moment is sandwiched between two single-letter expressions in the Renyi
entropy of order 1/(1+rho).  Clustering the alphabet from n to m atoms
reduces the moment, and the reduction per symbol is bracketed by entropy
differences of the two extremal coarsenings plus vanishing log terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .aggregate import _require_shape, flattest_coarsening
from .errors import DomainError, InstanceTooLargeError
from .extremal import aggregation_penalty
from .pmf import Pmf, type_classes
from .renyi import check_base, renyi_entropy

ENUMERATION_CAP = 10**7
_RANK_CHUNK = 1 << 20


@dataclass(frozen=True)
class GuessBoundReport:
    """Per-symbol bracket on the log moment reduction from clustering."""

    k: int
    rho_g: float
    lower: float
    upper: float


def ranking_permutation(p: Pmf) -> tuple:
    """Rank of each atom under the optimal guessing order (1-based).

    Atoms are ranked by non-increasing mass; ties resolve toward the
    smaller original index.  Element i-1 is the rank of atom i.
    """
    order = sorted(range(p.n), key=lambda i: (-p.masses[i], i))
    ranks = [0] * p.n
    for rank, i in enumerate(order, start=1):
        ranks[i] = rank
    return tuple(ranks)


def _check_moment_order(rho_g: float) -> float:
    rho_g = float(rho_g)
    if not rho_g > 0 or math.isnan(rho_g) or math.isinf(rho_g):
        raise DomainError("moment order rho_g must be finite and positive")
    return rho_g


def exact_guessing_moment(p: Pmf, rho_g: float, k: int = 1) -> float:
    """E[rank^rho_g] of the optimal guesser on k-blocks — exact.

    Enumerates the product space by value type classes, so sequences
    sharing a mass contribute one vectorized run of consecutive ranks.
    Refuses when support**k exceeds 10**7.
    """
    rho_g = _check_moment_order(rho_g)
    if k < 1:
        raise DomainError("block length k must be >= 1")
    n = p.support_size
    if n**k > ENUMERATION_CAP:
        raise InstanceTooLargeError(
            f"{n}**{k} sequences exceed the enumeration cap {ENUMERATION_CAP:g}"
        )
    classes = sorted(type_classes(p, k), key=lambda c: -c[1])
    total = -math.inf
    rank = 0
    for _, log_prob, log_count in classes:
        count = int(round(math.exp(log_count)))
        for start in range(rank, rank + count, _RANK_CHUNK):
            stop = min(start + _RANK_CHUNK, rank + count)
            ranks = np.arange(start + 1, stop + 1, dtype=float)
            block = log_prob + rho_g * np.log(ranks)
            top = float(block.max())
            chunk_log = top + math.log(np.exp(block - top).sum())
            total = float(np.logaddexp(total, chunk_log))
        rank += count
    return math.exp(total)


def arikan_bounds(p: Pmf, rho_g: float, k: int = 1, base: float = 2.0):
    """Single-letter bracket for (1/k) log E[rank^rho_g] on k-blocks.

    Returns (lower, upper) in the chosen log base: upper is rho_g times
    the Renyi entropy of order 1/(1+rho_g), lower subtracts the
    rho_g*log(1 + k ln n)/k correction, which vanishes as k grows.
    """
    rho_g = _check_moment_order(rho_g)
    if k < 1:
        raise DomainError("block length k must be >= 1")
    b = check_base(base)
    alpha = 1.0 / (1.0 + rho_g)
    upper = rho_g * renyi_entropy(p, alpha, base=b)
    n = p.support_size
    correction = rho_g * math.log1p(k * math.log(n)) / (k * math.log(b))
    return upper - correction, upper


def clustering_gain_bounds(
    p: Pmf, m: int, rho_g: float, k: int = 1, base: float = 2.0
) -> GuessBoundReport:
    """Bracket on the per-symbol log moment ratio E[rank of X^k] over
    E[rank of f(X)^k] when f clusters n atoms into m.

    The lower bound holds for every aggregation f; the upper bound is
    achieved by the Huffman-merge construction.  Both use the entropy of
    the flattest coarsening and the order 1/(1+rho_g).
    """
    rho_g = _check_moment_order(rho_g)
    if k < 1:
        raise DomainError("block length k must be >= 1")
    b = check_base(base)
    _require_shape(p, m)
    alpha = 1.0 / (1.0 + rho_g)
    h_x = renyi_entropy(p, alpha, base=b)
    h_tilde = renyi_entropy(flattest_coarsening(p, m), alpha, base=b)
    v = aggregation_penalty(alpha, base=b)
    log_b = math.log(b)
    n = p.support_size
    lower = rho_g * (h_x - h_tilde) - rho_g * math.log1p(k * math.log(n)) / (
        k * log_b
    )
    upper = rho_g * (h_x - h_tilde + v) + rho_g * math.log1p(
        k * math.log(m)
    ) / (k * log_b)
    return GuessBoundReport(k=k, rho_g=rho_g, lower=lower, upper=upper)
