"""Input validation helpers.

These play the role of ``sklearn.utils.validation`` for the grid-shaped,
possibly complex, arrays used throughout the package (scikit-learn's own
``check_array`` rejects complex input).
"""
import numbers
import os

import numpy as np

from .exceptions import DimensionError, DomainError, ParityError, ResourceError

DEFAULT_BUDGET_CELLS = 10_000_000


def budget_cells():
    """Cell budget from ``HEATLAB_BUDGET_CELLS`` (falls back to 10**7)."""
    raw = os.environ.get("HEATLAB_BUDGET_CELLS")
    if raw is None:
        return DEFAULT_BUDGET_CELLS
    try:
        value = int(raw)
    except ValueError as exc:
        raise DomainError(f"HEATLAB_BUDGET_CELLS must be an integer, got {raw!r}") from exc
    if value < 1:
        raise DomainError("HEATLAB_BUDGET_CELLS must be positive")
    return value


def check_budget(cells, what="construction", budget=None):
    budget = budget_cells() if budget is None else budget
    if cells > budget:
        raise ResourceError(f"{what} needs {cells} cells, budget is {budget}")


def check_int(value, name, minimum=None, maximum=None):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise DomainError(f"{name} must be <= {maximum}, got {value}")
    return value


def check_even(value, name="eta"):
    if value % 2:
        raise ParityError(f"{name} must be even, got {value}")
    return value


def check_vector(values, length, name="values", dtype=complex):
    arr = np.asarray(values, dtype=dtype)
    if arr.ndim != 1 or arr.shape[0] != length:
        raise DimensionError(f"{name} must have shape ({length},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite entries")
    return arr


def check_grid_array(X, n_features=None, allow_complex=True):
    """Validate a 2-D sample matrix, one grid function per row.

    Parameters
    ----------
    X : array-like of shape (n_samples, n_features)
    n_features : int, optional
        Required number of columns.
    allow_complex : bool
        If False, complex input with nonzero imaginary part is rejected.

    Returns
    -------
    ndarray
        ``complex128`` if the input is complex, else ``float64``.
    """
    arr = np.asarray(X)
    if arr.ndim == 1:
        raise DimensionError(
            "Expected 2D array, got 1D array instead; reshape with "
            "X.reshape(1, -1) for a single sample"
        )
    if arr.ndim != 2:
        raise DimensionError(f"Expected 2D array, got {arr.ndim}D")
    if np.iscomplexobj(arr):
        if not allow_complex and np.any(arr.imag != 0):
            raise DomainError("complex input not supported here")
        arr = arr.astype(complex) if allow_complex else arr.real.astype(float)
    else:
        arr = arr.astype(float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("input contains NaN or infinity")
    if n_features is not None and arr.shape[1] != n_features:
        raise DimensionError(f"X has {arr.shape[1]} features, expected {n_features}")
    return arr
