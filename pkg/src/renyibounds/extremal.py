"""Extremal distributions under a mass-ratio constraint.

Within the class of pmfs on n atoms whose positive masses stay within a
factor rho of each other, the Renyi entropy of any order is minimized by a
member of a one-parameter family: i atoms at rho*beta, one middle atom, and
the rest at beta, where beta is the smallest mass.  This module builds that
family, the majorant that witnesses it, and the resulting maximal entropy
gap below log n — both for finite n (a one-dimensional search) and in the
n -> oo limit (closed form), including the rho=2 special case that serves
as the aggregation penalty everywhere downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .pmf import MassRatioClass, Pmf, in_ratio_class
from .renyi import NEAR_ONE_WINDOW, Order, OrderLike, as_order, check_base

BETA_TOLERANCE = 1e-12
GOLDEN_MAX_ITER = 200
# Supplemental per-subinterval seed grid; golden-section still refines, the
# grid just guards against a non-unimodal stretch hiding a lower basin.
_SEED_POINTS = 9
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

# The asymptotic gap switches to the order-1 closed form inside this
# window; probes at alpha = 1 +/- 1e-4 must land on the exact limit, so
# the window sits just above that offset.
_LIMIT_NEAR_ONE = 2e-4


@dataclass(frozen=True)
class BetaWindow:
    """Feasible range of the smallest mass beta for the extremal family."""

    lower: float
    upper: float

    def contains(self, beta: float, tolerance: float = BETA_TOLERANCE) -> bool:
        slack = tolerance * max(1.0, abs(beta))
        return self.lower - slack <= beta <= self.upper + slack


@dataclass(frozen=True)
class ExtremalProfile:
    """Maximal entropy gap of the ratio class, with its witness."""

    n: int
    rho: float
    alpha: Order
    base: float
    gap: float
    beta_star: float
    q_beta_star: Pmf


def beta_window(n: int, rho: float) -> BetaWindow:
    if n < 1:
        raise DomainError("beta window needs n >= 1")
    if not rho >= 1.0:
        raise DomainError("beta window needs rho >= 1")
    return BetaWindow(lower=1.0 / (1.0 + (n - 1) * rho), upper=1.0 / n)


def _shape_index(n: int, rho: float, beta: float) -> int:
    """Number of atoms at rho*beta; floor formula with an fp nudge.

    The middle mass 1 - i*rho*beta - (n-1-i)*beta is decreasing in i and
    must land in [beta, rho*beta]; rounding in the floor argument can miss
    by one at breakpoints, so the index is nudged until the middle fits.
    """
    i = int(math.floor((1.0 - n * beta) / ((rho - 1.0) * beta)))
    i = min(max(i, 0), n - 1)

    def middle(j: int) -> float:
        return 1.0 - j * rho * beta - (n - 1 - j) * beta

    while i < n - 1 and middle(i) > rho * beta * (1.0 + 1e-9):
        i += 1
    while i > 0 and middle(i) < beta * (1.0 - 1e-9):
        i -= 1
    return i


def extremal_pmf(n: int, rho: float, beta: float) -> Pmf:
    """Family member with smallest mass beta: masses (rho*beta, .., mid, .., beta).

    The middle mass is computed as one minus the sum of the others, so the
    vector sums to 1 exactly; it is snapped onto a boundary when floating
    dust leaves it within 1e-13 outside [beta, rho*beta].
    """
    if n < 1:
        raise DomainError("extremal pmf needs n >= 1")
    if not rho > 1.0:
        raise DomainError("extremal pmf needs rho > 1")
    window = beta_window(n, rho)
    if not window.contains(beta):
        raise DomainError(
            f"beta={beta!r} outside [{window.lower!r}, {window.upper!r}]"
        )
    beta = min(max(beta, window.lower), window.upper)
    i = _shape_index(n, rho, beta)
    high = rho * beta
    others = [high] * i + [beta] * (n - 1 - i)
    middle = 1.0 - math.fsum(others)
    if middle < beta:
        if beta - middle > 1e-13:
            raise DomainError(f"beta={beta!r} yields no valid middle mass")
        middle = beta
    elif middle > high:
        if middle - high > 1e-13 * max(1.0, high):
            raise DomainError(f"beta={beta!r} yields no valid middle mass")
        middle = high
    return Pmf([high] * i + [middle] + [beta] * (n - 1 - i))


def ratio_class_majorant(p: Pmf, rho: float) -> Pmf:
    """The canonical member of p's ratio class that majorizes p.

    Keeps p's smallest positive mass, piles as much as allowed (a factor
    rho) onto the leading atoms, and leaves one middle atom to balance.
    Every pmf of the class with the same minimum is majorized by it.
    """
    if not rho >= 1.0:
        raise DomainError("mass ratio must satisfy rho >= 1")
    n = p.support_size
    if n < 2:
        return Pmf([1.0])
    if not in_ratio_class(p, MassRatioClass(n, rho)):
        raise DomainError(f"pmf with ratio {p.p_max / p.p_min!r} not in class rho={rho!r}")
    if rho == 1.0:
        return Pmf.uniform(n)
    p_min = p.p_min
    i = _shape_index(n, rho, p_min)
    high = rho * p_min
    others = [high] * i + [p_min] * (n - 1 - i)
    middle = 1.0 - math.fsum(others)
    middle = min(max(middle, p_min), high)
    return Pmf([high] * i + [middle] + [p_min] * (n - 1 - i))


# -- finite-n gap -----------------------------------------------------------


def _family_entropy_nats(
    beta: np.ndarray, idx: np.ndarray, n: int, rho: float, order: Order
) -> np.ndarray:
    """H_alpha in nats of the family member at (beta, shape index idx).

    Closed-form in the three mass levels, so a search step costs O(1) per
    point regardless of n.
    """
    beta = np.asarray(beta, dtype=float)
    idx = np.asarray(idx, dtype=float)
    high = rho * beta
    tail = n - 1.0 - idx
    mid = 1.0 - idx * high - tail * beta
    mid = np.clip(mid, beta, high)  # kill breakpoint dust; H is continuous
    if order.is_infinite:
        p_max = np.where(idx > 0, high, mid)
        return -np.log(p_max)
    log_high = np.log(high)
    log_mid = np.log(mid)
    log_beta = np.log(beta)
    if order.is_one or abs(order.value - 1.0) < NEAR_ONE_WINDOW:
        m1 = idx * high * log_high + mid * log_mid + tail * beta * log_beta
        if order.is_one:
            return -m1
        m2 = (
            idx * high * log_high**2
            + mid * log_mid**2
            + tail * beta * log_beta**2
        )
        return -m1 - 0.5 * (order.value - 1.0) * (m2 - m1 * m1)
    a = order.value
    with np.errstate(divide="ignore"):
        terms = np.stack(
            [
                np.log(idx) + a * log_high,
                a * log_mid,
                np.log(tail) + a * log_beta,
            ]
        )
    top = np.max(terms, axis=0)
    lse = top + np.log(np.sum(np.exp(terms - top), axis=0))
    return lse / (1.0 - a)


def _golden_minimize(f, lo: np.ndarray, hi: np.ndarray):
    """Vectorized golden-section minimization on [lo, hi] per lane."""
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = f(c)
    fd = f(d)
    for _ in range(GOLDEN_MAX_ITER):
        if np.all(b - a <= BETA_TOLERANCE):
            break
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        c = b - _INVPHI * (b - a)
        d = a + _INVPHI * (b - a)
        fresh = np.where(left, c, d)
        f_fresh = f(fresh)
        fc, fd = (
            np.where(left, f_fresh, fd),
            np.where(left, fc, f_fresh),
        )
    x = 0.5 * (a + b)
    return x, f(x)


def max_entropy_gap(
    n: int, rho: float, alpha: OrderLike, base: float = 2.0
) -> ExtremalProfile:
    """Largest deficit of H_alpha below log n over the ratio class.

    The family entropy is piecewise-smooth in beta with breakpoints at
    1/(n + i*(rho-1)) where the shape index changes; each subinterval is
    searched by golden section with the index held fixed (plus a coarse
    seed grid), all breakpoints are evaluated, and the global minimum wins.
    """
    order = as_order(alpha)
    b = check_base(base)
    if n < 1:
        raise DomainError("gap needs n >= 1")
    log_base = math.log(b)
    if n == 1:
        # Convention: a single-atom class has zero gap.
        return ExtremalProfile(n, float(rho), order, b, 0.0, 1.0, Pmf([1.0]))
    if rho <= 1.0 or order.is_zero:
        # rho <= 1 collapses the class to the uniform pmf; order 0 sees
        # log n for every strictly positive member.
        return ExtremalProfile(
            n, float(rho), order, b, 0.0, 1.0 / n, Pmf.uniform(n)
        )
    if math.isinf(rho):
        raise DomainError("gap needs a finite rho; it tends to log n")
    rho = float(rho)

    shape_idx = np.arange(0, n, dtype=float)
    breakpoints = 1.0 / (n + shape_idx * (rho - 1.0))  # descending in i
    candidate_beta = [breakpoints]
    candidate_value = [
        _family_entropy_nats(breakpoints, shape_idx, n, rho, order)
    ]

    highs = breakpoints[:-1]
    lows = breakpoints[1:]
    sub_idx = np.arange(0, n - 1, dtype=float)

    def objective(beta_arr: np.ndarray) -> np.ndarray:
        return _family_entropy_nats(beta_arr, sub_idx, n, rho, order)

    if n >= 2:
        for t in np.linspace(0.0, 1.0, _SEED_POINTS + 2)[1:-1]:
            seed = lows + t * (highs - lows)
            candidate_beta.append(seed)
            candidate_value.append(objective(seed))
        golden_beta, golden_value = _golden_minimize(objective, lows, highs)
        candidate_beta.append(golden_beta)
        candidate_value.append(golden_value)

    betas = np.concatenate(candidate_beta)
    values = np.concatenate(candidate_value)
    best = int(np.argmin(values))
    beta_star = float(betas[best])
    min_entropy = float(values[best])
    gap_nats = max(math.log(n) - min_entropy, 0.0)
    q_star = extremal_pmf(n, rho, beta_star)
    return ExtremalProfile(
        n, rho, order, b, gap_nats / log_base, beta_star, q_star
    )


# -- asymptotic (n -> oo) gap ----------------------------------------------


def _ln_abs_expm1(g: float) -> float:
    """log|exp(g) - 1|, stable over the whole real line."""
    if g > 36.0:
        return g + math.log1p(-math.exp(-g))
    if g < -36.0:
        return math.log1p(-math.exp(g))
    return math.log(abs(math.expm1(g)))


def _limit_gap_nats_at_one(rho: float) -> float:
    # rho*log rho/(rho-1) - 1 - log(rho*log rho/(rho-1)), the order-1 form.
    ratio = rho * math.log(rho) / (rho - 1.0)
    return ratio - 1.0 - math.log(ratio)


def _limit_gap_nats(rho: float, a: float) -> float:
    log_rho = math.log(rho)
    g = (a - 1.0) * log_rho
    s = 1.0 / (a - 1.0)
    ln_abs_am1 = math.log(abs(a - 1.0))
    ln_em1_g = _ln_abs_expm1(g)
    t1 = s * (log_rho + ln_em1_g - ln_abs_am1 - math.log(rho - 1.0))
    t2 = (a * s) * (
        math.log(a)
        - ln_abs_am1
        + log_rho
        + ln_em1_g
        - _ln_abs_expm1(a * log_rho)
    )
    return t1 - t2


def max_entropy_gap_limit(rho: float, alpha: OrderLike, base: float = 2.0) -> float:
    """The n -> oo limit of the maximal entropy gap, in base units.

    Closed form, evaluated in a rearranged log-domain form so that huge
    alpha*log(rho) exponents cannot overflow; tends to log rho as
    alpha -> oo and to 0 as rho -> 1.
    """
    order = as_order(alpha)
    b = check_base(base)
    rho = float(rho)
    if rho <= 1.0 or order.is_zero:
        return 0.0
    log_base = math.log(b)
    if order.is_infinite:
        return math.log(rho) / log_base
    a = order.value
    if abs(a - 1.0) < _LIMIT_NEAR_ONE:
        nats = _limit_gap_nats_at_one(rho)
    else:
        nats = _limit_gap_nats(rho, a)
    return max(nats, 0.0) / log_base


def aggregation_penalty(alpha: OrderLike, base: float = 2.0) -> float:
    """Entropy loss cap of the two-level (rho=2) asymptotic class.

    This is the additive penalty appearing in every aggregation, guessing,
    and coding bound downstream; approximately 0.08607 bits at order 1.
    """
    return max_entropy_gap_limit(2.0, alpha, base)


def interior_maximizer(rho: float, alpha: OrderLike) -> float:
    """Stationary point x* in (0,1) behind the asymptotic closed form.

    Diagnostic: the limit gap equals log(f(x*))/(alpha-1) for the scalar
    objective f(x) = (1 + (rho^a - 1) x) / (1 + (rho-1) x)^a.
    """
    order = as_order(alpha)
    rho = float(rho)
    if not rho > 1.0:
        raise DomainError("interior maximizer needs rho > 1")
    if order.is_zero:
        raise DomainError("interior maximizer needs alpha > 0")
    if order.is_infinite:
        return 0.0
    a = order.value
    log_rho = math.log(rho)
    if abs(a - 1.0) < _LIMIT_NEAR_ONE:
        return (rho * log_rho - (rho - 1.0)) / (rho - 1.0) ** 2
    if a < 1.0:
        num = 1.0 + a * (rho - 1.0) - rho**a
        den = (1.0 - a) * (rho - 1.0) * (rho**a - 1.0)
        return num / den
    # a > 1: same quantity with both signs flipped, in the log domain so
    # rho**a cannot overflow.
    g = a * log_rho
    if g > 36.0:
        # convexity keeps the correction strictly below 1
        correction = (1.0 + a * (rho - 1.0)) * math.exp(-g) if g < 745.0 else 0.0
        log_num = g + math.log1p(-correction)
    else:
        log_num = math.log(rho**a - 1.0 - a * (rho - 1.0))
    log_den = math.log(a - 1.0) + math.log(rho - 1.0) + _ln_abs_expm1(g)
    return math.exp(log_num - log_den)
