"""Percentage rounding: half-up to one decimal, exact in decimal arithmetic."""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal


def percent_round_half_up(count: int, total: int) -> float:
    """100 * count / total, rounded half-up to one decimal; 0.0 when total = 0."""
    if total == 0:
        return 0.0
    ratio = Decimal(100 * count) / Decimal(total)
    return float(ratio.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))
