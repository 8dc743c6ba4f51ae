"""Backend switch for the numeric kernels.

numba is used when it can be imported and the environment variable
``TKFIT_NO_NUMBA`` is unset (or ``0``). Setting ``TKFIT_NO_NUMBA=1`` selects
the pure-numpy implementations in :mod:`tkfit._kernels._numpy`.
"""

import os

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("TKFIT_NO_NUMBA", "0").strip() in ("", "0")


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
