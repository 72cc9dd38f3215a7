"""Cumulant-optimal source coding: length design, cumulants, and bounds.

The length assignment l = ceil(-a log_D P + log_D Q_k) with a = 1/(1+rho)
is Kraft-feasible and sits within 1/k of the converse for the scaled
cumulant (1/k) log_D E[D^{rho l}].  Everything here works on type classes
over the distinct mass values, so block lengths far beyond naive
enumeration stay exact; explicit codeword tables are materialized only on
demand for small instances.  Also includes the fixed-to-variable rate
bound for dictionary codes driven by the finite-n entropy gap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .aggregate import _require_shape, flattest_coarsening
from .errors import DegenerateBoundError, DomainError, InstanceTooLargeError
from .extremal import aggregation_penalty, max_entropy_gap, max_entropy_gap_limit
from .pmf import Pmf, count_type_classes, distinct_positive_masses, type_classes
from .renyi import renyi_entropy

KRAFT_TOLERANCE = 1e-12
TYPE_CLASS_CAP = 10**7
CODEBOOK_CAP = 1 << 20
_LENGTH_SNAP = 1e-9
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class ClassLength(NamedTuple):
    counts: tuple  # composition over distinct positive values, value-desc
    log_prob: float  # log-probability (nats) of each sequence in the class
    log_count: float  # log of the number of sequences in the class
    length: int


class TunstallBound(NamedTuple):
    bound: float
    loose_bound: float


@dataclass(frozen=True)
class CodeSpec:
    """A per-type-class length assignment for k-blocks over base D."""

    D: int
    k: int
    rho_c: float
    classes: tuple
    log_qk: float  # log (nats) of the length normalizer
    support_labels: tuple  # original 1-based indices of the positive atoms
    value_index: tuple  # per support atom, index into the distinct values
    values: tuple = ()  # distinct positive masses, descending

    def __post_init__(self):
        if self.D < 2:
            raise DomainError("code alphabet size D must be >= 2")
        if self.k < 1:
            raise DomainError("block length k must be >= 1")
        if not self.rho_c > 0:
            raise DomainError("cumulant order rho_c must be positive")
        if any(c.length < 1 for c in self.classes):
            raise DomainError("codeword lengths must be >= 1")
        log_d = math.log(self.D)
        terms = np.array(
            [c.log_count - c.length * log_d for c in self.classes]
        )
        top = terms.max()
        kraft_log = top + math.log(np.exp(terms - top).sum())
        if kraft_log > math.log1p(KRAFT_TOLERANCE):
            raise DomainError(
                f"length assignment violates the Kraft inequality "
                f"(sum = {math.exp(kraft_log)!r})"
            )


def _check_cumulant_order(rho_c: float) -> float:
    rho_c = float(rho_c)
    if not rho_c > 0 or math.isnan(rho_c) or math.isinf(rho_c):
        raise DomainError("cumulant order rho_c must be finite and positive")
    return rho_c


def campbell_lengths(p: Pmf, rho_c: float, k: int = 1, D: int = 2) -> CodeSpec:
    """Length assignment l = ceil(-a log_D P + log_D Q_k), a = 1/(1+rho_c).

    P is constant on each type class, so lengths are stored per class.
    Values within 1e-9 of an integer are snapped before the ceiling so
    that double rounding cannot inflate a length.
    """
    rho_c = _check_cumulant_order(rho_c)
    if D < 2:
        raise DomainError("code alphabet size D must be >= 2")
    if k < 1:
        raise DomainError("block length k must be >= 1")
    if p.support_size < 1:
        raise DomainError("pmf has empty support")
    n_classes = count_type_classes(p, k)
    if n_classes > TYPE_CLASS_CAP:
        raise InstanceTooLargeError(
            f"{n_classes} type classes exceed the cap {TYPE_CLASS_CAP:g}; "
            "reduce the block length k or the number of distinct masses"
        )
    alpha = 1.0 / (1.0 + rho_c)
    values, mults = distinct_positive_masses(p)
    weighted = [
        alpha * math.log(v) + math.log(mult) for v, mult in zip(values, mults)
    ]
    top = max(weighted)
    log_q1 = top + math.log(math.fsum(math.exp(w - top) for w in weighted))
    log_qk = k * log_q1
    log_d = math.log(D)

    rows = []
    for counts, log_prob, log_count in type_classes(p, k):
        value = (-alpha * log_prob + log_qk) / log_d
        nearest = round(value)
        if abs(value - nearest) <= _LENGTH_SNAP:
            value = float(nearest)
        rows.append(
            ClassLength(counts, log_prob, log_count, max(1, math.ceil(value)))
        )

    labels = tuple(
        i + 1 for i, mass in enumerate(p.masses) if mass > 0.0
    )
    value_pos = {v: t for t, v in enumerate(values)}
    value_index = tuple(value_pos[p.masses[i - 1]] for i in labels)
    return CodeSpec(
        D=D,
        k=k,
        rho_c=rho_c,
        classes=tuple(rows),
        log_qk=log_qk,
        support_labels=labels,
        value_index=value_index,
        values=tuple(values),
    )


def _check_spec_matches(spec: CodeSpec, p: Pmf) -> None:
    labels = tuple(i + 1 for i, mass in enumerate(p.masses) if mass > 0.0)
    if labels != spec.support_labels:
        raise DomainError("code spec was built over a different pmf")
    if spec.values:
        values, _ = distinct_positive_masses(p)
        value_pos = {v: t for t, v in enumerate(values)}
        value_index = tuple(value_pos[p.masses[i - 1]] for i in labels)
        if tuple(values) != spec.values or value_index != spec.value_index:
            raise DomainError("code spec was built over a different pmf")
    total = math.fsum(
        math.exp(c.log_count + c.log_prob) for c in spec.classes
    )
    if abs(total - 1.0) > 1e-9:
        raise DomainError("code spec classes do not cover the pmf")


def scaled_cumulant(spec: CodeSpec, p: Pmf, rho: float = None) -> float:
    """Exact (1/k) log_D E[D^{rho l(X^k)}], by type-class aggregation.

    rho defaults to the order the spec was designed for; passing another
    value evaluates the same length assignment at a different order.
    """
    _check_spec_matches(spec, p)
    rho = spec.rho_c if rho is None else _check_cumulant_order(rho)
    log_d = math.log(spec.D)
    terms = np.array(
        [
            c.log_count + c.log_prob + rho * c.length * log_d
            for c in spec.classes
        ]
    )
    top = terms.max()
    lse = top + math.log(np.exp(terms - top).sum())
    return lse / (spec.k * log_d)


def expected_length(spec: CodeSpec, p: Pmf) -> float:
    """Exact E[l(X^k)] for one k-block (not normalized per symbol)."""
    _check_spec_matches(spec, p)
    return math.fsum(
        math.exp(c.log_count + c.log_prob) * c.length for c in spec.classes
    )


def campbell_bounds(p: Pmf, rho_c: float, D: int = 2, k: int = 1):
    """(converse, achievability) for the normalized cumulant over UD codes.

    Both in log-base-D units per symbol: every Kraft-feasible assignment
    has cumulant/rho_c at least the converse, and the campbell_lengths
    assignment reaches within 1/k of it.
    """
    rho_c = _check_cumulant_order(rho_c)
    if D < 2:
        raise DomainError("code alphabet size D must be >= 2")
    if k < 1:
        raise DomainError("block length k must be >= 1")
    converse = renyi_entropy(p, 1.0 / (1.0 + rho_c), base=float(D))
    return converse, converse + 1.0 / k


def clustering_cumulant_bounds(
    p: Pmf, m: int, rho_c: float, D: int = 2, k: int = 1
):
    """Bracket on the cumulant reduction when coding f(X) instead of X.

    Returns (lower, upper) in log-base-D units for the difference of the
    two normalized cumulants; the bracket width is exactly
    rho_c * penalty / log D + 2 rho_c / k.
    """
    rho_c = _check_cumulant_order(rho_c)
    if D < 2:
        raise DomainError("code alphabet size D must be >= 2")
    if k < 1:
        raise DomainError("block length k must be >= 1")
    _require_shape(p, m)
    alpha = 1.0 / (1.0 + rho_c)
    h_x = renyi_entropy(p, alpha, base=float(D))
    h_tilde = renyi_entropy(flattest_coarsening(p, m), alpha, base=float(D))
    v = aggregation_penalty(alpha, base=float(D))
    lower = rho_c * (h_x - h_tilde) - rho_c / k
    upper = rho_c * (h_x - h_tilde + v) + rho_c / k
    return lower, upper


def _render_codeword(code: int, length: int, D: int) -> str:
    digits = []
    for _ in range(length):
        code, r = divmod(code, D)
        digits.append(_DIGITS[r])
    return "".join(reversed(digits))


def canonical_codewords(lengths, D: int):
    """Standard Kraft construction: sorted by length, consecutive numerals.

    Input order is preserved in the output; the integer-exact feasibility
    check rejects length sets whose Kraft sum exceeds 1.
    """
    if D < 2:
        raise DomainError("code alphabet size D must be >= 2")
    if D > len(_DIGITS):
        raise DomainError(f"codeword rendering supports D <= {len(_DIGITS)}")
    order = sorted(range(len(lengths)), key=lambda i: (lengths[i], i))
    words = [None] * len(lengths)
    code = 0
    prev_len = None
    for i in order:
        length = int(lengths[i])
        if length < 1:
            raise DomainError("codeword lengths must be >= 1")
        if prev_len is None:
            code = 0
        else:
            code = (code + 1) * D ** (length - prev_len)
        if code >= D**length:
            raise DomainError("length set violates the Kraft inequality")
        words[i] = _render_codeword(code, length, D)
        prev_len = length
    return words


def build_prefix_code(spec: CodeSpec, p: Pmf):
    """Materialize the canonical prefix code for every k-block.

    Returns a list of (symbols, codeword) pairs where symbols is the
    k-tuple of original 1-based atom indices; refuses above 2**20 rows.
    """
    _check_spec_matches(spec, p)
    n = len(spec.support_labels)
    if n**spec.k > CODEBOOK_CAP:
        raise InstanceTooLargeError(
            f"{n}**{spec.k} codewords exceed the cap {CODEBOOK_CAP}; "
            "lengths remain available per type class"
        )
    by_counts = {c.counts: c.length for c in spec.classes}
    d = len(spec.classes[0].counts)
    rows = []
    for seq in itertools.product(range(n), repeat=spec.k):
        counts = [0] * d
        for pos in seq:
            counts[spec.value_index[pos]] += 1
        length = by_counts[tuple(counts)]
        symbols = tuple(spec.support_labels[pos] for pos in seq)
        rows.append((symbols, length))
    words = canonical_codewords([r[1] for r in rows], spec.D)
    return [(symbols, word) for (symbols, _), word in zip(rows, words)]


def tunstall_rate_bound(p: Pmf, n_cw: int) -> TunstallBound:
    """Rate bound for fixed-to-variable dictionary codes with n_cw words.

    ceil(log2 n_cw) * H(X) / (log2 n_cw - c) bits per source symbol,
    where c is the finite-n entropy gap of the class with ratio 1/p_min
    at order 1.  loose_bound uses the asymptotic gap instead (infinite if
    that variant degenerates); the main bound degenerating is an error.
    """
    if n_cw < 2:
        raise DomainError("need at least two dictionary words")
    if p.support_size != p.n:
        raise DomainError("rate bound needs a strictly positive pmf")
    rho = 1.0 / p.p_min
    if not math.isfinite(rho):
        raise DegenerateBoundError(
            "mass ratio 1/p_min overflows; the entropy gap reaches "
            "log2 of every dictionary size and the bound is vacuous"
        )
    h1 = renyi_entropy(p, 1, base=2.0)
    ceil_log2 = float((n_cw - 1).bit_length())
    log2_ncw = math.log2(n_cw)
    gap = max_entropy_gap(n_cw, rho, 1, base=2.0).gap
    denom = log2_ncw - gap
    if denom <= 0:
        raise DegenerateBoundError(
            "entropy gap reaches log2 of the dictionary size; "
            "the rate bound is vacuous at this size"
        )
    bound = ceil_log2 * h1 / denom
    loose_denom = log2_ncw - max_entropy_gap_limit(rho, 1, base=2.0)
    loose = ceil_log2 * h1 / loose_denom if loose_denom > 0 else math.inf
    return TunstallBound(bound=bound, loose_bound=loose)
