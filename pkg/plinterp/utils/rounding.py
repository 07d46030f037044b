import numpy as np


def round_half_up(x: np.ndarray) -> np.ndarray:
    """Nearest integer with .5 rounded towards +inf (numpy's rint rounds half to even)."""
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5).astype(np.int64)
