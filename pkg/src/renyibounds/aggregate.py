"""Aggregating n atoms into m: entropy extremes over deterministic maps.

For a sorted pmf p and a target alphabet size m < n, the Renyi entropy of
f(X) over all surjective maps f is bracketed by two explicit coarsenings:
the flattest one (keep the big atoms, flatten the tail) gives the upper
end, the peakiest one (fuse the n-m+1 largest atoms) attains the minimum
exactly, and a Huffman-style merge of smallest masses lands within the
aggregation penalty of the top for every order at once.  A brute-force
oracle over all surjections is included for validation on tiny instances.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .errors import DomainError, InstanceTooLargeError, RenyiBoundsError
from .extremal import aggregation_penalty
from .pmf import Pmf
from .renyi import NEAR_ONE_WINDOW, Order, OrderLike, as_order, check_base, renyi_entropy

SORTED_TOLERANCE = 1e-15
EXHAUSTIVE_CAP = 10**7
_CHUNK = 1 << 16


@dataclass(frozen=True)
class Aggregation:
    """A surjective map from n input atoms onto m output atoms (1-based)."""

    mapping: tuple
    n: int
    m: int

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(int(j) for j in self.mapping))
        if len(self.mapping) != self.n:
            raise DomainError("mapping length must equal n")
        if not 1 <= self.m <= self.n:
            raise DomainError("need 1 <= m <= n")
        hit = set(self.mapping)
        if not hit == set(range(1, self.m + 1)):
            raise DomainError("mapping must be surjective onto {1..m}")

    def induced(self, p: Pmf) -> Pmf:
        """Output pmf: q(j) sums the input masses mapped to j."""
        if p.n != self.n:
            raise DomainError("pmf size does not match the aggregation")
        buckets = [[] for _ in range(self.m)]
        for mass, j in zip(p.masses, self.mapping):
            buckets[j - 1].append(mass)
        return Pmf([math.fsum(b) for b in buckets])


@dataclass(frozen=True)
class HuffmanTrace:
    """Record of the n-m merges and the resulting sorted output masses.

    Each merge entry is (index_a, index_b, mass): the largest original
    1-based atom index inside each merged group and the combined mass.
    prefix_index counts the leading outputs that are untouched original
    atoms; every later output is a node built from at least one merge.
    """

    merges: tuple
    prefix_index: int
    output_masses: tuple


class EntropyRange(NamedTuple):
    lower: float
    upper: float
    min_value: float


class ExhaustiveExtrema(NamedTuple):
    max_value: float
    argmax: Aggregation
    min_value: float
    argmin: Aggregation


def _require_shape(p: Pmf, m: int) -> tuple:
    masses = p.masses
    for k in range(len(masses) - 1):
        if masses[k] < masses[k + 1] - SORTED_TOLERANCE:
            raise DomainError("input pmf must be sorted non-increasing")
    if not 2 <= m < p.n:
        raise DomainError(f"need 2 <= m < n, got m={m}, n={p.n}")
    return p.sorted_masses


def flattest_coarsening(p: Pmf, m: int) -> Pmf:
    """The m-atom coarsening with maximal entropy reach.

    If the top mass is below 1/m the output is uniform.  Otherwise the
    n_star largest atoms pass through, where n_star is the largest
    i < m with (m - i) * p(i) at least the tail mass beyond i, and that
    tail is spread evenly over the remaining m - n_star outputs.
    """
    s = _require_shape(p, m)
    if s[0] < 1.0 / m:
        return Pmf.uniform(m)
    tails = [math.fsum(s[i:]) for i in range(m)]
    for i in range(m - 1, 0, -1):
        if (m - i) * s[i - 1] >= tails[i]:
            n_star = i
            break
    else:
        # unreachable: i=1 always qualifies once s[0] >= 1/m
        raise RenyiBoundsError("no feasible split index found")
    spread = tails[n_star] / (m - n_star)
    return Pmf(list(s[:n_star]) + [spread] * (m - n_star))


def peakiest_coarsening(p: Pmf, m: int) -> Pmf:
    """The m-atom coarsening attaining the minimal entropy: fuse the
    n - m + 1 largest atoms into one and pass the rest through."""
    s = _require_shape(p, m)
    cut = p.n - m + 1
    return Pmf([math.fsum(s[:cut])] + list(s[cut:]))


def huffman_aggregation(p: Pmf, m: int):
    """Merge the two smallest masses until m remain; return the map.

    Ties are broken toward the masses with the largest original indices.
    The resulting map is independent of the entropy order, and its output
    entropy sits within the aggregation penalty of the flattest
    coarsening's entropy for every order simultaneously.

    Returns (Aggregation, HuffmanTrace).
    """
    s = _require_shape(p, m)
    n = p.n
    # heap entries: (mass, -max_original_index, seq, members)
    heap = [(mass, -(k + 1), k, [k + 1]) for k, mass in enumerate(s)]
    heapq.heapify(heap)
    seq = n
    merges = []
    for _ in range(n - m):
        mass_a, neg_a, _, members_a = heapq.heappop(heap)
        mass_b, neg_b, _, members_b = heapq.heappop(heap)
        mass = mass_a + mass_b
        merges.append((-neg_a, -neg_b, mass))
        heapq.heappush(
            heap, (mass, min(neg_a, neg_b), seq, members_a + members_b)
        )
        seq += 1
    groups = [(mass, members) for mass, _, _, members in heap]
    # sorted outputs; singleton originals precede merged nodes of equal
    # mass, where "equal" tolerates the rounding picked up by merging
    # (0.2 + 0.1 floats strictly above an untouched 0.3)
    groups.sort(key=lambda g: (-g[0], 0 if len(g[1]) == 1 else 1, min(g[1])))
    out = []
    k = 0
    while k < len(groups):
        j = k + 1
        while j < len(groups) and groups[j - 1][0] - groups[j][0] <= SORTED_TOLERANCE * 10:
            j += 1
        cluster = sorted(
            groups[k:j], key=lambda g: (0 if len(g[1]) == 1 else 1, min(g[1]))
        )
        out.extend(cluster)
        k = j
    groups = out

    prefix_index = 0
    for mass, members in groups:
        if len(members) > 1:
            break
        prefix_index += 1
    # a merged node always exists among the outputs, so the prefix is < m

    mapping = [0] * n
    for j, (_, members) in enumerate(groups, start=1):
        for k in members:
            mapping[k - 1] = j
    agg = Aggregation(tuple(mapping), n=n, m=m)
    trace = HuffmanTrace(
        merges=tuple(merges),
        prefix_index=prefix_index,
        output_masses=tuple(mass for mass, _ in groups),
    )
    return agg, trace


def aggregation_entropy_range(
    p: Pmf, m: int, alpha: OrderLike, base: float = 2.0
) -> EntropyRange:
    """Bracket for the maximal output entropy, plus the exact minimum.

    upper is attained-or-nearly by the flattest coarsening, lower is
    upper minus the aggregation penalty, and min_value (the peakiest
    coarsening's entropy) is the exact minimum over all surjections.
    """
    order = as_order(alpha)
    if order.is_zero:
        raise DomainError("entropy range needs order alpha > 0")
    b = check_base(base)
    upper = renyi_entropy(flattest_coarsening(p, m), order, base=b)
    lower = upper - aggregation_penalty(order, base=b)
    min_value = renyi_entropy(peakiest_coarsening(p, m), order, base=b)
    return EntropyRange(lower=lower, upper=upper, min_value=min_value)


def _entropy_rows_nats(rows: np.ndarray, order: Order) -> np.ndarray:
    """Renyi entropy in nats of each row of a stochastic matrix."""
    if order.is_zero:
        return np.log((rows > 0).sum(axis=1))
    if order.is_infinite:
        return -np.log(rows.max(axis=1))
    pos = rows > 0
    safe = np.where(pos, rows, 1.0)
    logs = np.log(safe)
    if order.is_one or abs(order.value - 1.0) < NEAR_ONE_WINDOW:
        m1 = (rows * logs).sum(axis=1)
        if order.is_one:
            return -m1
        m2 = (rows * logs * logs).sum(axis=1)
        return -m1 - 0.5 * (order.value - 1.0) * (m2 - m1 * m1)
    a = order.value
    terms = np.where(pos, a * logs, -np.inf)
    top = terms.max(axis=1)
    lse = top + np.log(np.exp(terms - top[:, None]).sum(axis=1))
    return lse / (1.0 - a)


def _map_chunks(n: int, m: int, chunk: int) -> Iterator[np.ndarray]:
    source = itertools.product(range(m), repeat=n)
    while True:
        block = list(itertools.islice(source, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64)


def exhaustive_extrema(
    p: Pmf, m: int, alpha: OrderLike, base: float = 2.0
) -> ExhaustiveExtrema:
    """Exact entropy extrema over every surjective map, by enumeration.

    Only for validation on tiny instances: refuses when m**n > 10**7.
    """
    order = as_order(alpha)
    b = check_base(base)
    _require_shape(p, m)
    n = p.n
    if m**n > EXHAUSTIVE_CAP:
        raise InstanceTooLargeError(
            f"{m}**{n} maps exceed the enumeration cap {EXHAUSTIVE_CAP:g}"
        )
    masses = np.array(p.masses, dtype=float)
    labels = np.arange(m)
    best_v = -math.inf
    worst_v = math.inf
    best_map = worst_map = None
    for block in _map_chunks(n, m, _CHUNK):
        onehot = block[:, :, None] == labels[None, None, :]
        surjective = onehot.any(axis=1).all(axis=1)
        if not surjective.any():
            continue
        block = block[surjective]
        induced = np.einsum("knm,n->km", onehot[surjective].astype(float), masses)
        values = _entropy_rows_nats(induced, order)
        k_max = int(values.argmax())
        k_min = int(values.argmin())
        if values[k_max] > best_v:
            best_v = float(values[k_max])
            best_map = tuple(int(j) + 1 for j in block[k_max])
        if values[k_min] < worst_v:
            worst_v = float(values[k_min])
            worst_map = tuple(int(j) + 1 for j in block[k_min])
    log_base = math.log(b)
    return ExhaustiveExtrema(
        max_value=best_v / log_base,
        argmax=Aggregation(best_map, n=n, m=m),
        min_value=worst_v / log_base,
        argmin=Aggregation(worst_map, n=n, m=m),
    )
