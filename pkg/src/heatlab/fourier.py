"""Discrete Fourier analysis on the circle grid.

Modes are indexed by ``m`` in ``Z_eta = {-eta, ..., eta-1}`` and the
coefficients use the counting measure,

    c(m) = (1/2pi) * sum_j f(x_j) exp(-i x_j m) * (pi/eta),

so that ``f(x_j) = sum_m c(m) exp(i x_j m)`` exactly.  The exponential is the
ordinary one sampled at grid points.  With that choice the central
difference acts on ``exp(i x m)`` as multiplication by ``-phi(m)``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, RangeError
from .grid import CircleGrid, GridFunction, d2_dx2, d_dx, restrict
from .validation import check_even, check_int

# rows of the direct-sum matrix evaluated per block
_BLOCK = 512


def modes(eta):
    return np.arange(-eta, eta)


def _check_mode(eta, m, limit, name):
    if not -limit <= m <= limit:
        raise RangeError(f"{name}: mode m={m} outside [-{limit}, {limit}] for eta={eta}")


@dataclass(frozen=True)
class FourierCoeffs:
    """Coefficients ``c(m)`` for ``m = -eta..eta-1`` (stored in that order)."""

    eta: int
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=complex)
        if arr.shape != (2 * self.eta,):
            raise DimensionError(f"expected {2 * self.eta} coefficients, got {arr.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def modes(self):
        return modes(self.eta)

    def __getitem__(self, m):
        if not -self.eta <= m < self.eta:
            raise RangeError(f"mode {m} outside Z_{self.eta}")
        return complex(self.coeffs[m + self.eta])

    def __len__(self):
        return 2 * self.eta

    def items(self):
        return zip(self.modes.tolist(), self.coeffs.tolist())


def exp_grid(eta, m):
    """Grid sampling of ``x -> exp(i x m)`` for ``m`` in ``Z_eta``."""
    if not -eta <= m < eta:
        raise RangeError(f"mode m={m} outside Z_{eta} = [-{eta}, {eta - 1}]")
    grid = CircleGrid(eta)
    return GridFunction(grid, np.exp(1j * m * grid.points))


def fourier_coeffs(f, method="direct"):
    """Discrete Fourier coefficients of a grid function.

    ``method="direct"`` evaluates the defining O(eta**2) sum (blocked over
    ``m``); ``method="fft"`` uses ``numpy.fft`` and the identity
    ``exp(-i x_j m) = (-1)**m exp(-2 pi i j m / 2eta)``.
    """
    eta = f.eta
    n = 2 * eta
    if method == "fft":
        raw = np.fft.fft(f.values) / n
        ms = modes(eta)
        return FourierCoeffs(eta, np.where(ms % 2, -1.0, 1.0) * raw[ms % n])
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    x = f.grid.points
    ms = modes(eta)
    out = np.empty(n, dtype=complex)
    for lo in range(0, n, _BLOCK):
        block = ms[lo : lo + _BLOCK]
        out[lo : lo + _BLOCK] = np.exp(-1j * np.outer(block, x)) @ f.values
    # (1/2pi) * (pi/eta) = 1/(2 eta)
    return FourierCoeffs(eta, out / n)


def inverse(c, method="direct"):
    """``f(x_j) = sum_m c(m) exp(i x_j m)``."""
    eta = c.eta
    n = 2 * eta
    grid = CircleGrid(eta)
    if method == "fft":
        ms = modes(eta)
        spread = np.zeros(n, dtype=complex)
        spread[ms % n] = np.where(ms % 2, -1.0, 1.0) * c.coeffs
        return GridFunction(grid, np.fft.ifft(spread) * n)
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    x = grid.points
    ms = modes(eta)
    out = np.empty(n, dtype=complex)
    for lo in range(0, n, _BLOCK):
        xs = x[lo : lo + _BLOCK]
        out[lo : lo + _BLOCK] = np.exp(1j * np.outer(xs, ms)) @ c.coeffs
    return GridFunction(grid, out)


# --- multipliers -----------------------------------------------------------


def phi(eta, m):
    """Symbol of the central difference: ``-(i eta/pi) sin(pi m/eta)``."""
    _check_mode(eta, m, eta, "phi")
    return eta / (2 * math.pi) * (np.exp(-1j * m * math.pi / eta) - np.exp(1j * m * math.pi / eta))


def psi(eta, m):
    """Restricted-grid difference symbol ``(eta/2pi)(1 - exp(2 pi i m/eta))``."""
    _check_mode(eta, m, eta / 2, "psi")
    return eta / (2 * math.pi) * (1 - np.exp(2j * math.pi * m / eta))


def u(eta, m):
    """Index-shift symbol ``exp(-2 pi i m / eta)``."""
    _check_mode(eta, m, eta / 2, "u")
    return np.exp(-2j * math.pi * m / eta)


def theta(eta, m):
    """Second-difference symbol ``psi**2 * u``, real: ``-(eta/pi)**2 sin(pi m/eta)**2``."""
    _check_mode(eta, m, eta / 2, "theta")
    return -((eta / math.pi) ** 2) * math.sin(math.pi * m / eta) ** 2


def theta_full(eta, ms):
    """``phi(m)**2`` on the whole of ``Z_eta`` (vectorised); equals theta where both exist."""
    ms = np.asarray(ms)
    return -((eta / math.pi) ** 2) * np.sin(np.pi * ms / eta) ** 2


@dataclass(frozen=True)
class SymbolValues:
    eta: int
    m: int
    phi: complex
    psi: complex
    u: complex
    theta: float


def symbols(eta, m):
    """All four multipliers at mode ``m``.

    ``phi`` is defined for ``|m| <= eta``; the restricted-grid symbols
    ``psi``, ``u`` and ``theta`` need ``|m| <= eta/2`` and are ``None`` for
    ``eta/2 < |m| <= eta``.
    """
    check_int(eta, "eta", minimum=1)
    _check_mode(eta, m, eta, "symbols")
    if abs(m) <= eta / 2:
        return SymbolValues(eta, m, complex(phi(eta, m)), complex(psi(eta, m)), complex(u(eta, m)), theta(eta, m))
    return SymbolValues(eta, m, complex(phi(eta, m)), None, None, None)


# --- identity checks -------------------------------------------------------


@dataclass(frozen=True)
class IdentityReport:
    name: str
    residual: float
    tol: float

    @property
    def passed(self):
        return self.residual <= self.tol

    def as_dict(self):
        return {"name": self.name, "residual": self.residual, "tol": self.tol, "passed": self.passed}


def derivative_coeff_identity_check(f, tol=1e-10):
    """Max residual of ``c(f')(m) = -phi(m) c(f)(m)`` and ``c(f'')(m) = phi(m)**2 c(f)(m)``."""
    eta = f.eta
    ms = modes(eta)
    ph = np.array([phi(eta, int(m)) for m in ms])
    cf = fourier_coeffs(f).coeffs
    c1 = fourier_coeffs(d_dx(f)).coeffs
    c2 = fourier_coeffs(d2_dx2(f)).coeffs
    r1 = float(np.max(np.abs(c1 + ph * cf)))
    r2 = float(np.max(np.abs(c2 - ph**2 * cf)))
    return {
        "first": IdentityReport("first_derivative", r1, tol),
        "second": IdentityReport("second_derivative", r2, tol),
    }


def restricted_coeffs(f):
    """Half-grid coefficients of ``restrict(f)`` for ``m`` in ``Z_{eta/2}``."""
    check_even(f.eta)
    return fourier_coeffs(restrict(f))


def restricted_coeff_identity_check(f, tol=1e-10):
    """Max residual of ``c(restrict f'')(m) = psi(m)**2 u(m) c(restrict f)(m)``.

    Coefficients are on the half grid, ``m = -eta/2 .. eta/2 - 1``.
    """
    check_even(f.eta)
    eta = f.eta
    half_modes = modes(eta // 2)
    mult = np.array([psi(eta, int(m)) ** 2 * u(eta, int(m)) for m in half_modes])
    lhs = restricted_coeffs(d2_dx2(f)).coeffs
    rhs = mult * restricted_coeffs(f).coeffs
    return IdentityReport("restricted_second_derivative", float(np.max(np.abs(lhs - rhs))), tol)


@dataclass(frozen=True)
class DecayReport:
    F_const: float
    violations: list
    checked: int

    @property
    def passed(self):
        return not self.violations


def decay_report(f, rtol=1e-12, noise=1e-13):
    """Check ``|c(restrict f)(m)| <= (pi**2/4) F / m**2`` for ``m != 0``.

    ``F`` is the largest restricted coefficient of ``f''``.  The constant
    ``pi**2/4`` comes from ``|psi(m)| >= 2|m|/pi`` on ``|m| <= eta/2``.  The
    bound is attained at ``m = -eta/2``, so a relative slack ``rtol`` absorbs
    rounding there; coefficients below ``noise * max|c|`` are summation
    round-off and are not tested.
    """
    check_even(f.eta)
    half_modes = modes(f.eta // 2)
    c = np.abs(restricted_coeffs(f).coeffs)
    F = float(np.max(np.abs(restricted_coeffs(d2_dx2(f)).coeffs)))
    floor = noise * float(np.max(c))
    violations = []
    for m, cm in zip(half_modes.tolist(), c.tolist()):
        if m == 0:
            continue
        bound = (math.pi**2 / 4) * F / m**2
        if cm > bound * (1 + rtol) and cm > floor:
            violations.append((m, cm, bound))
    return DecayReport(F, violations, len(half_modes) - 1)
