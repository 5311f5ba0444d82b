import os

DEFAULT_DENSE_LIMIT = 10
SCAN_LIMIT = 8


def dense_limit():
    """Largest n for which 2^n x 2^n matrices are built (env ``BP_DENSE_LIMIT``)."""
    value = os.environ.get("BP_DENSE_LIMIT")
    if not value:
        return DEFAULT_DENSE_LIMIT
    return int(value)
