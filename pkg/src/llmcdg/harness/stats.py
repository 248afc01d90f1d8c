"""Summary statistics for repeated trials."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

QUANTILES = (25.0, 50.0, 75.0)


def percentile(values: Sequence[float], q: float) -> float:
    """Linear-interpolation percentile (rank ``q/100 * (n-1)`` on sorted data)."""
    if len(values) == 0:
        raise ValueError("percentile of an empty sample")
    if not 0.0 <= q <= 100.0:
        raise ValueError("q must be within [0, 100]")
    return float(np.percentile(np.asarray(values, dtype=np.float64), q, method="linear"))


def quartiles(values: Sequence[float]) -> Optional[tuple[float, float, float]]:
    """(p25, median, p75), or None for an empty sample."""
    if len(values) == 0:
        return None
    return tuple(percentile(values, q) for q in QUANTILES)  # type: ignore[return-value]
