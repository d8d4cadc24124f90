"""scikit-learn compatible transformers.

Each sample is one function on the grid (or one mass vector on the chain),
stored as a row of ``X``.  The transformers are stateless apart from
validation, so ``fit`` only records the input width, but they plug into
``Pipeline``, ``clone`` and grid search like any other estimator.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .chain import CyclicChain
from .exceptions import DimensionError, DomainError, StabilityError
from .fourier import FourierCoeffs, fourier_coeffs, inverse
from .grid import CircleGrid, GridFunction
from .heat import SchemeParams, solve_spectral, solve_time_domain, time_index
from .validation import check_grid_array


class _GridTransformer(TransformerMixin, BaseEstimator):
    def _validate(self, X, reset):
        X = check_grid_array(X, None if reset else self.n_features_in_)
        if reset:
            if X.shape[1] % 2:
                raise DimensionError(f"grid functions have an even number of cells, got {X.shape[1]}")
            if self.eta is not None and X.shape[1] != 2 * self.eta:
                raise DimensionError(f"X has {X.shape[1]} columns, expected 2*eta = {2 * self.eta}")
            self.n_features_in_ = X.shape[1]
            self.eta_ = X.shape[1] // 2
        return X

    def fit(self, X, y=None):
        self._validate(X, reset=True)
        return self


class HeatPropagator(_GridTransformer):
    """Evolve each row under the discrete heat equation up to time ``t``.

    Parameters
    ----------
    nu : int
        Time steps per unit time.
    t : float
        Final time; the solver takes ``floor(nu * t)`` steps.
    eta : int, optional
        Grid parameter; inferred from ``X`` (``n_features = 2 eta``) if None.
    method : {"spectral", "explicit"}
        Closed-form propagator or explicit stepping.
    allow_unstable : bool
        Permit ``eta**2 > 2 pi**2 nu``.
    """

    def __init__(self, nu=256, t=1.0, eta=None, method="spectral", allow_unstable=False):
        self.nu = nu
        self.t = t
        self.eta = eta
        self.method = method
        self.allow_unstable = allow_unstable

    def fit(self, X, y=None):
        super().fit(X, y)
        if self.method not in ("spectral", "explicit"):
            raise DomainError(f"method must be 'spectral' or 'explicit', got {self.method!r}")
        self.params_ = SchemeParams(self.eta_, self.nu)
        if not (self.params_.stable or self.allow_unstable):
            raise StabilityError(f"eta={self.eta_}, nu={self.nu} is unstable (eta**2 > 2 pi**2 nu)")
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        X = self._validate(X, reset=False)
        grid = CircleGrid(self.eta_)
        k = time_index(self.nu, self.t)
        out = np.empty(X.shape, dtype=complex)
        for i, row in enumerate(X):
            f = GridFunction(grid, row)
            if self.method == "spectral":
                out[i] = solve_spectral(f, self.params_, self.t).values
            else:
                out[i] = solve_time_domain(f, self.params_, k, snapshots=()).final.values
        return out if np.iscomplexobj(X) else out.real


class DiscreteFourierTransformer(_GridTransformer):
    """Rows to discrete Fourier coefficients ``m = -eta..eta-1`` and back."""

    def __init__(self, eta=None, method="direct"):
        self.eta = eta
        self.method = method

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = self._validate(X, reset=False)
        grid = CircleGrid(self.eta_)
        return np.stack([fourier_coeffs(GridFunction(grid, row), self.method).coeffs for row in X])

    def inverse_transform(self, C):
        check_is_fitted(self, "n_features_in_")
        C = check_grid_array(C, self.n_features_in_)
        return np.stack([inverse(FourierCoeffs(self.eta_, row), self.method).values for row in C])


class CyclicChainPropagator(TransformerMixin, BaseEstimator):
    """Push each row (a mass vector on ``N`` states) through ``n_steps`` chain steps."""

    def __init__(self, n_steps=1):
        self.n_steps = n_steps

    def fit(self, X, y=None):
        X = check_grid_array(X, allow_complex=False)
        if X.shape[1] < 2:
            raise DimensionError("need at least two states")
        if np.any(X < 0):
            raise DomainError("mass vectors must be nonnegative")
        self.n_features_in_ = X.shape[1]
        self.chain_ = CyclicChain(X.shape[1])
        return self

    def transform(self, X):
        check_is_fitted(self, "chain_")
        X = check_grid_array(X, self.n_features_in_, allow_complex=False)
        out = X.copy()
        for _ in range(self.n_steps):
            out = (np.roll(out, 1, axis=1) + out + np.roll(out, -1, axis=1)) / 3
        return out
