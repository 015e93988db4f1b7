"""Integer-bounded time intervals with open/closed ends.

Bounds are naturals (upper bound may be infinite, encoded as None).  Ages are
exact rationals; no floats are accepted anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: Optional[int]  # None = unbounded
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError("interval bounds must be natural numbers")
        if self.hi is not None and self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}:{self.hi}]")

    def _key(self):
        return (self.lo, self.hi is None, self.hi or 0, self.lo_open, self.hi_open)

    def __lt__(self, other: "Interval") -> bool:
        return self._key() < other._key()

    def __str__(self) -> str:
        left = "(" if self.lo_open else "["
        right = ")" if (self.hi is None or self.hi_open) else "]"
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{left}{self.lo},{hi}{right}"

    def contains(self, age: Rational) -> bool:
        return age_in(age, self)

    def max_bound(self) -> int:
        """Largest finite constant appearing in this interval."""
        return self.lo if self.hi is None else max(self.lo, self.hi)


def closed(lo: int, hi: Optional[int]) -> Interval:
    return Interval(lo, hi)


def age_in(age: Rational, iv: Interval) -> bool:
    """Exact membership test of a nonnegative rational age in an interval."""
    age = Fraction(age)
    if age < 0:
        raise ValueError("ages are nonnegative")
    if iv.lo_open:
        if age <= iv.lo:
            return False
    elif age < iv.lo:
        return False
    if iv.hi is None:
        return True
    if iv.hi_open:
        return age < iv.hi
    return age <= iv.hi


def frac_match(level: int, iv: Interval) -> bool:
    """Does level + eps lie in iv for every eps in (0,1)?

    With integer bounds this is independent of the choice of eps and of the
    open/closed flags: it holds iff lo <= level and level < hi.
    """
    if level < 0:
        raise ValueError("levels are nonnegative")
    if level < iv.lo:
        return False
    return iv.hi is None or level < iv.hi


def parse_interval(text: str) -> Interval:
    """Parse '[a,b]', '(a,b]', '[a,inf)' style interval syntax."""
    text = text.strip()
    if len(text) < 3 or text[0] not in "[(" or text[-1] not in ")]":
        raise ValueError(f"malformed interval {text!r}")
    lo_open = text[0] == "("
    hi_open = text[-1] == ")"
    body = text[1:-1]
    sep = "," if "," in body else ":"
    parts = body.split(sep)
    if len(parts) != 2:
        raise ValueError(f"malformed interval {text!r}")
    lo = int(parts[0])
    hi_txt = parts[1].strip()
    hi = None if hi_txt in ("inf", "oo", "∞") else int(hi_txt)
    if hi is None and not hi_open:
        hi_open = True  # an infinite end is always open
    return Interval(lo, hi, lo_open, hi_open)
