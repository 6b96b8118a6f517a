"""Thread-count control for the batched transform kernels.

The environment variable ``TAUPINT_NUM_THREADS`` sets how many workers the
FFT/DST kernels may use. Unset or invalid values fall back to 1.
"""

import os

_ENV_VAR = "TAUPINT_NUM_THREADS"


def fft_workers() -> int:
    raw = os.environ.get(_ENV_VAR, "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return n if n >= 1 else 1
