"""Finite probability mass functions and the majorization preorder.

The `Pmf` is the universal input object of the package: an immutable finite
mass vector with a cached descending sort, partial-sum curves, the max/min
positive masses, and product constructions for i.i.d. blocks.  The module
also hosts the mass-ratio class (all pmfs on n atoms whose positive masses
stay within a factor rho of each other), the majorization test, and the
type-class enumeration used for exact computations on k-fold products.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import DomainError

SUM_TOLERANCE = 1e-12
MAJORIZATION_TOLERANCE = 1e-12
RATIO_TOLERANCE = 1e-12

# Negative dust below this magnitude is treated as an exact zero; anything
# more negative is rejected as an invalid mass.
_NEGATIVE_DUST = 1e-12


class Pmf:
    """An immutable finite probability mass function.

    Parameters
    ----------
    masses : iterable of float
        Probabilities in original atom order (atom i is 1-based index i).
        Zeros are allowed; the vector must sum to 1 within 1e-12.

    Notes
    -----
    Masses are kept both in original order (`masses`) and sorted descending
    (`sorted_masses`); every downstream formula consumes the sorted order,
    while divergences and aggregation maps need the original atom identity.
    """

    __slots__ = ("masses", "n", "sorted_masses", "_positive_sorted")

    def __init__(self, masses: Iterable[float]):
        values = [float(x) for x in masses]
        if not values:
            raise DomainError("a pmf needs at least one atom")
        cleaned = []
        for x in values:
            if math.isnan(x) or x < -_NEGATIVE_DUST or x > 1.0 + SUM_TOLERANCE:
                raise DomainError(f"mass {x!r} is not a probability")
            cleaned.append(0.0 if x < 0.0 else x)
        total = math.fsum(cleaned)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise DomainError(f"masses sum to {total!r}, not 1")
        self.masses: tuple[float, ...] = tuple(cleaned)
        self.n: int = len(cleaned)
        self.sorted_masses: tuple[float, ...] = tuple(
            sorted(cleaned, reverse=True)
        )
        self._positive_sorted: tuple[float, ...] = tuple(
            x for x in self.sorted_masses if x > 0.0
        )

    # -- basic views ---------------------------------------------------

    @property
    def positive_masses(self) -> tuple[float, ...]:
        """Strictly positive masses, sorted descending."""
        return self._positive_sorted

    @property
    def support_size(self) -> int:
        return len(self._positive_sorted)

    @property
    def p_max(self) -> float:
        return self._positive_sorted[0]

    @property
    def p_min(self) -> float:
        """Minimal strictly positive mass (zeros are excluded)."""
        return self._positive_sorted[-1]

    @property
    def is_sorted(self) -> bool:
        return self.masses == self.sorted_masses

    def partial_sum(self, k: int) -> float:
        """Sum of the k largest masses."""
        if not 1 <= k <= self.n:
            raise DomainError(f"k={k} out of range 1..{self.n}")
        return math.fsum(self.sorted_masses[:k])

    # -- constructors ---------------------------------------------------

    @classmethod
    def uniform(cls, n: int) -> "Pmf":
        if n < 1:
            raise DomainError("uniform pmf needs n >= 1")
        return cls([1.0 / n] * n)

    @classmethod
    def geometric(cls, a: float, n: int) -> "Pmf":
        """Truncated geometric: mass proportional to a**(j-1), j = 1..n."""
        if not 0.0 < a < 1.0:
            raise DomainError("geometric ratio must satisfy 0 < a < 1")
        if n < 1:
            raise DomainError("geometric pmf needs n >= 1")
        weights = [a ** (j - 1) for j in range(1, n + 1)]
        total = math.fsum(weights)
        return cls([w / total for w in weights])

    def product(self, other: "Pmf") -> "Pmf":
        """Joint pmf of two independent draws, row-major atom order."""
        return Pmf([x * y for x in self.masses for y in other.masses])

    def power(self, k: int) -> "Pmf":
        """k-fold i.i.d. product; materializes n**k atoms."""
        if k < 1:
            raise DomainError("power needs k >= 1")
        out = self
        for _ in range(k - 1):
            out = out.product(self)
        return out

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        inside = ", ".join(format(x, ".6g") for x in self.masses[:8])
        if self.n > 8:
            inside += f", ... ({self.n} atoms)"
        return f"Pmf([{inside}])"


@dataclass(frozen=True)
class MassRatioClass:
    """Pmfs on n atoms whose positive masses satisfy p_max/p_min <= rho."""

    n: int
    rho: float

    def __post_init__(self):
        if self.n < 2:
            raise DomainError("mass-ratio class needs n >= 2")
        if not self.rho >= 1.0:
            raise DomainError("mass-ratio class needs rho >= 1")


def partial_sum_curve(p: Pmf, k: int) -> float:
    """Sum of the k largest masses of p (non-decreasing and concave in k)."""
    return p.partial_sum(k)


def majorizes(q: Pmf, p: Pmf, tolerance: float = MAJORIZATION_TOLERANCE) -> bool:
    """True iff q majorizes p: every top-k sum of p is dominated by q's.

    The shorter pmf is zero-padded to the longer length first, so pmfs on
    different alphabet sizes compare directly.
    """
    length = max(p.n, q.n)
    sum_p = 0.0
    sum_q = 0.0
    for k in range(length - 1):
        sum_p += p.sorted_masses[k] if k < p.n else 0.0
        sum_q += q.sorted_masses[k] if k < q.n else 0.0
        if sum_p > sum_q + tolerance:
            return False
    return True


def in_ratio_class(p: Pmf, c: MassRatioClass) -> bool:
    """Membership of p in the class: support size n and mass ratio <= rho."""
    if p.support_size != c.n:
        raise DomainError(
            f"support size {p.support_size} does not match class n={c.n}"
        )
    return p.p_max <= c.rho * p.p_min * (1.0 + RATIO_TOLERANCE)


# -- distinct values and type classes ------------------------------------


def distinct_positive_masses(p: Pmf) -> tuple[tuple[float, ...], tuple[int, ...]]:
    """Distinct strictly positive mass values (descending) with multiplicities.

    Grouping is by exact float equality: repeated masses produced by the
    parametric families and the extremal constructions are bit-identical.
    """
    values: list[float] = []
    counts: list[int] = []
    for x in p.positive_masses:
        if values and x == values[-1]:
            counts[-1] += 1
        else:
            values.append(x)
            counts.append(1)
    return tuple(values), tuple(counts)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` non-negative ints summing to `total`, lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def count_type_classes(p: Pmf, k: int) -> int:
    """Number of value-level type classes of the k-fold product of p."""
    d = len(distinct_positive_masses(p)[0])
    return math.comb(k + d - 1, d - 1)


def type_classes(p: Pmf, k: int) -> Iterator[tuple[tuple[int, ...], float, float]]:
    """Enumerate the k-fold product of p by type class over distinct values.

    Yields (counts, log_prob, log_count) per class, where `counts` says how
    many coordinates of the sequence carry each distinct mass value,
    `log_prob` is the natural log of the (constant) probability of any one
    sequence in the class, and `log_count` is the natural log of the number
    of sequences in the class.  Sequences with a zero-mass atom are excluded;
    they carry no probability and no optimal code or ranking touches them.
    """
    if k < 1:
        raise DomainError("type classes need k >= 1")
    values, mult = distinct_positive_masses(p)
    log_values = [math.log(v) for v in values]
    log_mult = [math.log(m) for m in mult]
    lgamma_k = math.lgamma(k + 1)
    for counts in _compositions(k, len(values)):
        log_prob = 0.0
        log_count = lgamma_k
        for c, lv, lm in zip(counts, log_values, log_mult):
            log_prob += c * lv
            log_count += c * lm - math.lgamma(c + 1)
        yield counts, log_prob, log_count


# -- parsing ---------------------------------------------------------------

_FAMILY_RE = re.compile(r"^\s*(uniform|geometric)\s*\(([^)]*)\)\s*$")


def _parse_number(text: str) -> float:
    """Parse a float, allowing simple fractions like 24/25."""
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        return float(num) / float(den)
    return float(text)


def parse_pmf(spec: str) -> Pmf:
    """Build a Pmf from a CLI/JSON spec string.

    Accepted forms: a family name `uniform(n)` or `geometric(a,n)` (a may be
    a fraction such as 24/25), an inline comma list `0.5,0.25,0.25`, or a
    path to a JSON file holding {"masses": [..]}.
    """
    match = _FAMILY_RE.match(spec)
    if match:
        family, args_text = match.groups()
        args = [s for s in args_text.split(",") if s.strip()]
        if family == "uniform":
            if len(args) != 1:
                raise DomainError("uniform takes one argument: uniform(n)")
            return Pmf.uniform(int(args[0]))
        if len(args) != 2:
            raise DomainError("geometric takes two arguments: geometric(a,n)")
        return Pmf.geometric(_parse_number(args[0]), int(args[1]))
    if "," in spec:
        return Pmf([_parse_number(tok) for tok in spec.split(",")])
    path = Path(spec)
    if path.is_file():
        payload = json.loads(path.read_text())
        if not isinstance(payload, dict) or "masses" not in payload:
            raise DomainError(f"{spec}: JSON pmf must be {{\"masses\": [..]}}")
        return Pmf(payload["masses"])
    raise DomainError(f"cannot parse pmf spec {spec!r}")


def load_masses(values: Sequence[float]) -> Pmf:
    """Thin alias used by JSON ingestion."""
    return Pmf(values)
