from __future__ import annotations

import numpy as np

from app.exceptions.usage_error import UsageError

_DECIMALS = 10


def parse_grid(text: str) -> list[float]:
    """Parse ``start:stop:step`` (stop inclusive), ``a,b,c`` or a single value."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise UsageError(f"grid {text!r} must be start:stop:step")
            start, stop, step = parts
            if step <= 0:
                raise UsageError(f"grid step must be positive in {text!r}")
            if stop < start:
                raise UsageError(f"grid stop is below start in {text!r}")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            values = start + step * np.arange(count)
        else:
            values = np.array([float(p) for p in text.split(",") if p.strip()])
    except ValueError as e:
        raise UsageError(f"malformed grid {text!r}: {e}") from e

    if values.size == 0:
        raise UsageError(f"grid {text!r} is empty")
    grid = [round(float(v), _DECIMALS) for v in values]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise UsageError(f"grid {text!r} must be strictly increasing")
    return grid
