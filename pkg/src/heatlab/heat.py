"""Explicit and spectral solvers for the heat equation on the circle grid.

One explicit step is ``F <- F + (1/nu) F''`` with the central second
difference.  Written out it is a three-point stencil on points two cells
apart,

    out_j = w f_{j+2} + (1 - 2w) f_j + w f_{j-2},   w = eta**2 / (4 pi**2 nu),

so even and odd cells never interact.  The stencil is a convex combination
(and the scheme is stable) iff ``w <= 1/2``, i.e. ``eta**2 <= 2 pi**2 nu``.
Each ``exp(i x m)`` is an eigenvector with eigenvalue
``1 - 4 w sin(pi m/eta)**2``, which is ``1 + theta(m)/nu`` for the default weight.
"""
import math
import time
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chain import CyclicChain, Distribution, evolve
from .exceptions import DimensionError, DomainError, DomainWarning, StabilityError
from .fourier import FourierCoeffs, fourier_coeffs, inverse, modes
from .grid import CircleGrid, GridFunction, SpaceTimeField, TimeGrid, d_dx, d2_dx2, integrate, restrict, sample
from .validation import check_budget, check_even, check_int

MARKOV_WEIGHT = Fraction(1, 3)
# snaps nu*t to the grid before flooring, so t=0.29, nu=100 gives 29 steps
_SNAP = 1e-9


@dataclass(frozen=True)
class SchemeParams:
    """Grid parameters of the explicit scheme.

    ``weight`` defaults to ``eta**2 / (4 pi**2 nu)``.  Passing it explicitly
    pins the stencil weight, e.g. to exactly 1/3 for the Markov regime.
    """

    eta: int
    nu: int
    weight: object = None

    def __post_init__(self):
        check_int(self.eta, "eta", minimum=1)
        check_int(self.nu, "nu", minimum=1)
        if self.weight is None:
            object.__setattr__(self, "weight", self.eta**2 / (4 * math.pi**2 * self.nu))
        elif self.weight < 0:
            raise DomainError("stencil weight must be nonnegative")

    @classmethod
    def markov(cls, eta, nu=None):
        """Weight pinned to exactly 1/3; ``nu`` defaults to ``3 eta**2 / (4 pi**2)``."""
        if nu is None:
            nu = max(1, round(markov_equivalent_nu(eta)))
        return cls(eta, nu, weight=MARKOV_WEIGHT)

    @property
    def grid(self):
        return CircleGrid(self.eta)

    @property
    def stable(self):
        return self.weight <= Fraction(1, 2) if isinstance(self.weight, Fraction) else self.weight <= 0.5

    @property
    def is_markov(self):
        return self.weight == MARKOV_WEIGHT

    def multipliers(self, ms=None):
        """Per-step amplification of mode ``m`` for every ``m`` in ``Z_eta``."""
        ms = modes(self.eta) if ms is None else np.asarray(ms)
        return 1 - 4 * float(self.weight) * np.sin(np.pi * ms / self.eta) ** 2


def markov_equivalent_nu(eta):
    """``nu`` at which the default weight equals 1/3: ``3 eta**2 / (4 pi**2)``."""
    return 3 * eta**2 / (4 * math.pi**2)


def markov_step_count(eta):
    """Full horizon ``nu**2 = 9 eta**4 / (16 pi**4)`` at the Markov ``nu``."""
    return markov_equivalent_nu(eta) ** 2


def time_index(nu, t):
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    return int(math.floor(nu * t + _SNAP))


def ftcs_step(f, params):
    if f.eta != params.eta:
        raise DimensionError(f"grid eta={f.eta} does not match params eta={params.eta}")
    w = params.weight
    v = f.values
    if isinstance(w, Fraction):
        # divide by 3 rather than multiply by a rounded float(1/3)
        if w == MARKOV_WEIGHT:
            return GridFunction(f.grid, (np.roll(v, -2) + v + np.roll(v, 2)) / 3)
        w = float(w)
    return GridFunction(f.grid, w * np.roll(v, -2) + (1 - 2 * w) * v + w * np.roll(v, 2))


@dataclass(frozen=True)
class HeatSolution:
    """Stored rows of an explicit solve.

    ``steps[r]`` is the time index of ``values[r]``.  When every step is kept
    (the default) ``field`` exposes the result as a :class:`SpaceTimeField`.
    """

    params: SchemeParams
    initial: GridFunction
    steps: tuple
    values: np.ndarray

    @property
    def n_steps(self):
        return self.steps[-1]

    @property
    def times(self):
        return np.array(self.steps) / self.params.nu

    @property
    def is_complete(self):
        return self.steps == tuple(range(len(self.steps)))

    @property
    def field(self):
        if not self.is_complete:
            raise DomainError("streamed solution does not hold every time row")
        return SpaceTimeField(self.initial.grid, TimeGrid(self.params.nu, self.n_steps), self.values)

    def at(self, k):
        return GridFunction(self.initial.grid, self.values[self.steps.index(k)])

    @property
    def final(self):
        return GridFunction(self.initial.grid, self.values[-1])


def solve_time_domain(f, params, n_steps, snapshots=None, budget=None):
    """Iterate :func:`ftcs_step` ``n_steps`` times.

    With ``snapshots=None`` every row is kept, subject to the cell budget
    (``HEATLAB_BUDGET_CELLS``).  Otherwise only the listed time indices plus
    the final row are stored, in constant memory.
    """
    n_steps = check_int(n_steps, "n_steps", minimum=0)
    if snapshots is None:
        check_budget((n_steps + 1) * f.grid.size, "time-domain solve", budget)
        keep = None
    else:
        keep = {int(k) for k in snapshots if 0 <= int(k) <= n_steps} | {n_steps}
        check_budget(len(keep) * f.grid.size, "time-domain snapshots", budget)
    rows, steps = [], []
    cur = f
    for k in range(n_steps + 1):
        if keep is None or k in keep:
            rows.append(cur.values)
            steps.append(k)
        if k < n_steps:
            cur = ftcs_step(cur, params)
    return HeatSolution(params, f, tuple(steps), np.stack(rows))


def solve_spectral(f, params, t):
    """Closed form: each coefficient is multiplied by its per-step factor to the power ``floor(nu t)``."""
    if f.eta != params.eta:
        raise DimensionError(f"grid eta={f.eta} does not match params eta={params.eta}")
    k = time_index(params.nu, t)
    if k == 0:
        return f
    c = fourier_coeffs(f)
    factor = params.multipliers() ** k
    return inverse(FourierCoeffs(c.eta, c.coeffs * factor))


# --- classical solution ----------------------------------------------------


@dataclass(frozen=True)
class ClassicalSolution:
    """Truncated Fourier series ``sum_{|m|<=M} exp(-m**2 t) c(m) exp(i m x)``."""

    coeffs: dict
    M_max: int
    decay_const: float
    tail_bound: float

    def __call__(self, x, t):
        return self.evaluate(x, t)

    def evaluate(self, x, t):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for m, c in self.coeffs.items():
            out = out + np.exp(-(m**2) * t) * c * np.exp(1j * m * x)
        return out

    @property
    def mean(self):
        return self.coeffs[0]


def classical_solution(g, M_max, resolution=None):
    """Fourier coefficients of a smooth periodic ``g`` by trapezoidal quadrature.

    Uses ``max(16 M_max, 64)`` equispaced nodes unless ``resolution`` is
    given.  ``decay_const`` is the measured ``C = max_{m != 0} m**2 |c(m)|``
    and ``tail_bound = 2 C / M_max`` bounds ``sum_{|m| > M_max} C / m**2``.
    """
    M_max = check_int(M_max, "M_max", minimum=1)
    q = resolution or max(16 * M_max, 64)
    if abs(complex(g(np.array([-math.pi]))[0]) - complex(g(np.array([math.pi]))[0])) > 1e-8:
        warnings.warn("g(-pi) != g(pi): data is not periodic", DomainWarning, stacklevel=2)
    x = -math.pi + 2 * math.pi * np.arange(q) / q
    gx = np.asarray(g(x), dtype=complex)
    if gx.ndim == 0:
        gx = np.full(q, gx, dtype=complex)
    ms = np.arange(-M_max, M_max + 1)
    c = np.exp(-1j * np.outer(ms, x)) @ gx / q
    coeffs = {int(m): complex(cm) for m, cm in zip(ms, c)}
    C = max(m * m * abs(cm) for m, cm in coeffs.items() if m != 0)
    return ClassicalSolution(coeffs, M_max, float(C), 2 * float(C) / M_max)


def compare_to_classical(g, params, t, M_max=64):
    """Sup-norm gap on the grid between the spectral discrete solution and the classical one."""
    return comparison_report(g, params, t, M_max)["sup_error"]


def comparison_report(g, params, t, M_max=64, timing=True):
    """``{eta, nu, t, sup_error, stable, runtime_ms}`` for :func:`compare_to_classical`."""
    if not params.stable:
        raise StabilityError(
            f"eta={params.eta}, nu={params.nu} violates eta**2 <= 2 pi**2 nu (weight {float(params.weight):.4f})"
        )
    start = time.perf_counter()
    f = sample(g, params.eta)
    discrete = solve_spectral(f, params, t)
    G = classical_solution(g, M_max)
    exact = G.evaluate(f.grid.points, t)
    err = float(np.max(np.abs(discrete.values - exact)))
    runtime = (time.perf_counter() - start) * 1e3
    return {
        "eta": params.eta,
        "nu": params.nu,
        "t": t,
        "sup_error": err,
        "stable": params.stable,
        "runtime_ms": runtime if timing else None,
    }


def equilibrium_gap(f, params, t):
    """``sup_x |F(x, t) - (1/2pi) integral f|``.

    The explicit stencil preserves the even- and odd-sublattice means
    separately, so the gap tends to half their difference, which is
    negligible for sampled smooth data.
    """
    if not params.stable:
        raise StabilityError("equilibrium_gap needs stable parameters")
    mean = integrate(f) / (2 * math.pi)
    return float(np.max(np.abs(solve_spectral(f, params, t).values - mean)))


def sublattice_means(f):
    """Means of ``f`` over the even and the odd cells; both are conserved by stepping."""
    return complex(np.mean(f.values[::2])), complex(np.mean(f.values[1::2]))


@dataclass(frozen=True)
class EquivalenceReport:
    eta: int
    n_steps: int
    max_deviation: float
    odd_max_deviation: float
    tol: float

    @property
    def passed(self):
        return self.max_deviation <= self.tol and self.odd_max_deviation <= self.tol

    def as_dict(self):
        return {
            "eta": self.eta,
            "n_steps": self.n_steps,
            "max_deviation": self.max_deviation,
            "odd_max_deviation": self.odd_max_deviation,
            "tol": self.tol,
            "passed": self.passed,
        }


def markov_equivalence_check(eta, n_steps, initial=None, seed=0, tol=1e-12):
    """Compare weight-1/3 heat stepping with the ``eta``-state cyclic chain.

    The full grid has ``2 eta`` cells; each parity class is a cycle of
    ``eta`` points on which the stencil is exactly the chain kernel.  The
    initial condition must be a nonnegative real vector (a mass
    distribution); the default is a seeded uniform-random one.
    """
    eta = check_int(eta, "eta", minimum=2)
    check_even(eta)
    n_steps = check_int(n_steps, "n_steps", minimum=0)
    grid = CircleGrid(eta)
    if initial is None:
        initial = np.random.default_rng(seed).random(grid.size)
    f = initial if isinstance(initial, GridFunction) else GridFunction(grid, initial)
    if np.any(np.abs(f.values.imag) > 0) or np.any(f.values.real < 0):
        raise DomainError("initial condition must be real and nonnegative (a chain distribution)")
    params = SchemeParams.markov(eta)
    chain = CyclicChain(eta)
    even = Distribution(tuple(f.values[::2].real))
    odd = Distribution(tuple(f.values[1::2].real))
    cur = f
    dev_even = dev_odd = 0.0
    for _ in range(n_steps):
        cur = ftcs_step(cur, params)
        even = evolve(chain, even, 1)
        odd = evolve(chain, odd, 1)
        dev_even = max(dev_even, float(np.max(np.abs(restrict(cur).values - even.as_array()))))
        dev_odd = max(dev_odd, float(np.max(np.abs(cur.values[1::2] - odd.as_array()))))
    return EquivalenceReport(eta, n_steps, dev_even, dev_odd, tol)


def derivative_sup(f):
    """``(sup|f|, sup|f'|, sup|f''|)``."""
    return f.sup(), d_dx(f).sup(), d2_dx2(f).sup()
