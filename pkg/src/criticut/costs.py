"""Fixed-point attacker costs.

Costs are stored as an integer number of thousandths ("milli-units") so that
fractional values like 3.2 sum exactly and ties are never broken by float
rounding noise. Infinity marks components that cannot be compromised.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering

MILLI = 1000

_FINITE_RE = re.compile(r"^(\d+)(?:\.(\d{1,3}))?$")


class CostError(ValueError):
    """Raised for unparsable or out-of-range cost values."""


@total_ordering
@dataclass(frozen=True)
class Cost:
    """A nonnegative attacker cost: finite milli-units, or infinite.

    ``milli`` is ``None`` for the infinite cost.
    """

    milli: int | None

    def __post_init__(self) -> None:
        if self.milli is not None and self.milli < 0:
            raise CostError(f"cost must be nonnegative, got {self.milli} milli-units")

    @property
    def is_infinite(self) -> bool:
        return self.milli is None

    @property
    def is_zero(self) -> bool:
        return self.milli == 0

    @staticmethod
    def infinite() -> "Cost":
        return Cost(None)

    @staticmethod
    def of(value: "int | float | str | Cost") -> "Cost":
        if isinstance(value, Cost):
            return value
        if isinstance(value, str):
            return Cost.parse(value)
        if isinstance(value, bool):
            raise CostError("boolean is not a cost")
        if isinstance(value, int):
            if value < 0:
                raise CostError(f"cost must be nonnegative, got {value}")
            return Cost(value * MILLI)
        if isinstance(value, float):
            if value == float("inf"):
                return Cost.infinite()
            return Cost.parse(repr(value))
        raise CostError(f"cannot interpret {value!r} as a cost")

    @staticmethod
    def parse(text: str) -> "Cost":
        """Parse a decimal cost string with at most 3 fractional digits, or "inf"."""
        text = text.strip()
        if text == "inf":
            return Cost.infinite()
        m = _FINITE_RE.match(text)
        if m is None:
            if re.match(r"^\d+\.\d{4,}$", text):
                raise CostError(f"cost {text!r} has more than 3 fractional digits")
            raise CostError(f"invalid cost value {text!r}")
        whole, frac = m.group(1), m.group(2) or ""
        return Cost(int(whole) * MILLI + int(frac.ljust(3, "0")))

    def __add__(self, other: "Cost") -> "Cost":
        if self.is_infinite or other.is_infinite:
            return Cost.infinite()
        return Cost(self.milli + other.milli)  # type: ignore[operator]

    def __lt__(self, other: "Cost") -> bool:
        if self.is_infinite:
            return False
        if other.is_infinite:
            return True
        return self.milli < other.milli  # type: ignore[operator]

    def scaled(self, factor: int) -> "Cost":
        """Multiply a cost by a positive integer factor."""
        if factor <= 0:
            raise CostError("scale factor must be positive")
        if self.is_infinite:
            return self
        return Cost(self.milli * factor)  # type: ignore[operator]

    def text(self) -> str:
        """Canonical decimal form: "2", "3.2", "0.005", or "inf"."""
        if self.milli is None:
            return "inf"
        whole, frac = divmod(self.milli, MILLI)
        if frac == 0:
            return str(whole)
        return f"{whole}.{frac:03d}".rstrip("0")

    def display(self, precision: int | None = None) -> str:
        """Report form: always shows a decimal point ("4.0", "3.2")."""
        if self.milli is None:
            return "inf"
        if precision is not None:
            return f"{self.milli / MILLI:.{precision}f}"
        whole, frac = divmod(self.milli, MILLI)
        if frac == 0:
            return f"{whole}.0"
        return f"{whole}.{frac:03d}".rstrip("0")

    def json_number(self) -> float:
        """Lossless JSON number for values of ≤3 fractional digits."""
        if self.milli is None:
            raise CostError("infinite cost has no JSON number form")
        if self.milli % MILLI == 0:
            return float(self.milli // MILLI)
        return self.milli / MILLI

    def __str__(self) -> str:
        return self.text()


ZERO = Cost(0)
INF = Cost.infinite()


def total(costs) -> Cost:
    """Exact fixed-point sum of an iterable of costs."""
    result = ZERO
    for c in costs:
        result = result + c
    return result
