"""Runtime defaults shared by the library and the CLI."""

import os

DEFAULT_DEGREE_CAP = 1 << 21
DEFAULT_EXCLUSION = 1e-6
BOUNDARY_TOL = 1e-12


def fft_workers() -> int:
    """Thread count for FFTs, capped by ``CBAR_THREADS`` (default 1)."""
    raw = os.environ.get("CBAR_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)
