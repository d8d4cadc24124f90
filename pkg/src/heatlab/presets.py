"""Named initial conditions shared by the CLI and the tests."""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import DomainError
from .grid import CircleGrid, GridFunction, sample


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    smooth: bool
    func: object = None

    def grid_function(self, eta):
        grid = CircleGrid(eta)
        if self.name == "delta":
            return GridFunction.indicator(grid, [0])
        return sample(self.func, grid)

    def distribution(self, n_states):
        """Exact weight vector on ``n_states`` chain states."""
        if self.name == "delta":
            return [Fraction(1)] + [Fraction(0)] * (n_states - 1)
        if self.name == "uniform":
            return [Fraction(1)] * n_states
        raise DomainError(f"preset {self.name!r} has no chain distribution")


def _cos_halfcos2(x):
    return np.cos(x) + 0.5 * np.cos(2 * x)


def _expcos(x):
    return np.exp(np.cos(x))


def _uniform(x):
    return np.ones_like(np.asarray(x, dtype=float))


_PRESETS = {
    "cos": Preset("cos", "x -> cos x", True, np.cos),
    "cos+halfcos2": Preset("cos+halfcos2", "x -> cos x + cos(2x)/2", True, _cos_halfcos2),
    "expcos": Preset("expcos", "x -> exp(cos x)", True, _expcos),
    "delta": Preset("delta", "indicator of grid cell 0", False),
    "uniform": Preset("uniform", "constant 1", True, _uniform),
}


def presets():
    return list(_PRESETS.values())


def get_preset(name):
    try:
        return _PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; choose from {sorted(_PRESETS)}") from None
