"""Renyi entropy and divergence of arbitrary extended order.

Orders live on [0, oo] with the three special points (0, 1, oo) represented
exactly, never by proximity.  All internal arithmetic is in the natural-log
domain; the requested log base is applied once at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import DomainError
from .pmf import Pmf

# Below this distance from 1 (but not exactly 1) the generic formula loses
# ~7 digits to cancellation, so a first-order expansion around the Shannon
# point is used instead.
NEAR_ONE_WINDOW = 1e-7


@dataclass(frozen=True)
class Order:
    """Extended Renyi order alpha in [0, oo].

    The float values 0.0, 1.0 and inf are exact, so equality against them
    distinguishes the closed-form limit cases from generic orders.
    """

    value: float

    def __post_init__(self):
        v = float(self.value)
        if math.isnan(v) or v < 0.0:
            raise DomainError(f"order must be in [0, oo], got {self.value!r}")
        object.__setattr__(self, "value", v)

    @property
    def is_zero(self) -> bool:
        return self.value == 0.0

    @property
    def is_one(self) -> bool:
        return self.value == 1.0

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    def __str__(self) -> str:
        return "inf" if self.is_infinite else format(self.value, "g")


OrderLike = Union[Order, float, int, str]


def as_order(alpha: OrderLike) -> Order:
    """Coerce a float, int, or string (e.g. "inf", "0.5") to an Order."""
    if isinstance(alpha, Order):
        return alpha
    if isinstance(alpha, str):
        return Order(float(alpha))
    return Order(float(alpha))


def check_base(base: float) -> float:
    base = float(base)
    if not base > 1.0:
        raise DomainError(f"log base must exceed 1, got {base!r}")
    return base


def _logsumexp(values: np.ndarray) -> float:
    top = float(np.max(values))
    if math.isinf(top) and top < 0:
        return -math.inf
    return top + math.log(float(np.sum(np.exp(values - top))))


def entropy_nats(masses: Iterable[float], order: Order) -> float:
    """Renyi entropy in nats of a positive mass vector (zeros are dropped).

    Low-level entry point shared by the bound modules and the brute-force
    oracles; accepts any mass iterable so callers in hot loops can skip Pmf
    construction.
    """
    pos = np.asarray([x for x in masses if x > 0.0], dtype=float)
    if pos.size == 0:
        raise DomainError("entropy needs at least one positive mass")
    if order.is_zero:
        return math.log(pos.size)
    if order.is_infinite:
        return -math.log(float(np.max(pos)))
    logs = np.log(pos)
    shannon = -float(np.dot(pos, logs))
    if order.is_one:
        return shannon
    a = order.value
    if abs(a - 1.0) < NEAR_ONE_WINDOW:
        # First-order expansion: H_a = H_1 - (a-1)/2 * Var[-ln p] + O((a-1)^2)
        variance = float(np.dot(pos, logs * logs)) - shannon * shannon
        return shannon - 0.5 * (a - 1.0) * variance
    return _logsumexp(a * logs) / (1.0 - a)


def renyi_entropy(p: Pmf, alpha: OrderLike, base: float = 2.0) -> float:
    """Renyi entropy H_alpha(p) in the requested log base (default bits).

    alpha=0 counts the support, alpha=1 is Shannon entropy, alpha=oo is the
    min-entropy -log p_max; generic orders evaluate
    H_alpha = log(sum p^alpha) / (1-alpha) via log-sum-exp.
    """
    order = as_order(alpha)
    b = check_base(base)
    return entropy_nats(p.positive_masses, order) / math.log(b)


def _divergence_nats(pm: np.ndarray, qm: np.ndarray, order: Order) -> float:
    p_support = pm > 0.0
    if order.is_zero:
        covered = float(np.sum(qm[p_support]))
        return math.inf if covered <= 0.0 else -math.log(covered)
    support_ok = bool(np.all(qm[p_support] > 0.0))
    if order.is_infinite:
        if not support_ok:
            return math.inf
        return float(np.max(np.log(pm[p_support]) - np.log(qm[p_support])))
    a = order.value
    if a >= 1.0 and not support_ok:
        return math.inf
    if order.is_one or (abs(a - 1.0) < NEAR_ONE_WINDOW and support_ok):
        log_ratio = np.log(pm[p_support]) - np.log(qm[p_support])
        kl = float(np.dot(pm[p_support], log_ratio))
        if order.is_one:
            return kl
        second = float(np.dot(pm[p_support], log_ratio * log_ratio))
        return kl + 0.5 * (a - 1.0) * (second - kl * kl)
    both = p_support & (qm > 0.0)
    if not np.any(both):
        return math.inf  # disjoint supports, alpha in (0,1)
    terms = a * np.log(pm[both]) + (1.0 - a) * np.log(qm[both])
    nats = _logsumexp(terms) / (a - 1.0)
    if -1e-9 < nats < 0.0:
        nats = 0.0
    return nats


def renyi_divergence(p: Pmf, q: Pmf, alpha: OrderLike, base: float = 2.0) -> float:
    """Renyi divergence D_alpha(p || q) in the requested log base.

    Atoms are matched by original index; the shorter pmf is zero-padded.
    Infinities are legal return values (support of p not covered by q at
    alpha >= 1, or disjoint supports).
    """
    order = as_order(alpha)
    b = check_base(base)
    length = max(p.n, q.n)
    pm = np.zeros(length)
    qm = np.zeros(length)
    pm[: p.n] = p.masses
    qm[: q.n] = q.masses
    nats = _divergence_nats(pm, qm, order)
    return nats / math.log(b) if math.isfinite(nats) else nats
