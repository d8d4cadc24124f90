"""Uniform grids on the circle and in time, with discrete calculus.

The circle grid with parameter ``eta`` has the ``2*eta`` points
``x_j = -pi + pi*j/eta`` on ``[-pi, pi)``; each carries counting-measure
weight ``pi/eta``.  All index arithmetic is cyclic (mod ``2*eta``), which
covers the wrap-around at ``-pi`` and ``pi - pi/eta`` without special cases.
"""
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import DimensionError, DomainError
from .validation import check_even, check_int, check_vector

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class CircleGrid:
    eta: int

    def __post_init__(self):
        check_int(self.eta, "eta", minimum=1)

    @property
    def size(self):
        return 2 * self.eta

    @property
    def spacing(self):
        return math.pi / self.eta

    @property
    def weight(self):
        return math.pi / self.eta

    @cached_property
    def points(self):
        pts = -math.pi + math.pi * np.arange(self.size) / self.eta
        pts.flags.writeable = False
        return pts

    @property
    def total_measure(self):
        return self.size * self.weight

    def half(self):
        """The grid seen by :func:`restrict` (every second point)."""
        check_even(self.eta)
        return CircleGrid(self.eta // 2)


@dataclass(frozen=True)
class TimeGrid:
    """Times ``k/nu`` for ``k = 0..n_steps``; ``n_steps`` defaults to ``nu**2``."""

    nu: int
    n_steps: int = None

    def __post_init__(self):
        check_int(self.nu, "nu", minimum=1)
        if self.n_steps is None:
            object.__setattr__(self, "n_steps", self.nu**2)
        check_int(self.n_steps, "n_steps", minimum=0)

    @property
    def dt(self):
        return 1.0 / self.nu

    @property
    def times(self):
        return np.arange(self.n_steps + 1) / self.nu


class GridFunction:
    """Complex values on the cells of a :class:`CircleGrid`.

    Instances are immutable; arithmetic returns new objects.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid, values):
        arr = check_vector(values, grid.size, name="values").copy()
        arr.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("GridFunction is immutable")

    @classmethod
    def constant(cls, grid, c):
        return cls(grid, np.full(grid.size, c, dtype=complex))

    @classmethod
    def indicator(cls, grid, cells):
        v = np.zeros(grid.size, dtype=complex)
        v[np.asarray(cells) % grid.size] = 1.0
        return cls(grid, v)

    @property
    def eta(self):
        return self.grid.eta

    @property
    def real(self):
        return self.values.real

    def __len__(self):
        return self.grid.size

    def _other(self, other):
        if isinstance(other, GridFunction):
            if other.grid != self.grid:
                raise DimensionError("grid functions live on different grids")
            return other.values
        return other

    def __add__(self, other):
        return GridFunction(self.grid, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return GridFunction(self.grid, self.values - self._other(other))

    def __rsub__(self, other):
        return GridFunction(self.grid, self._other(other) - self.values)

    def __mul__(self, other):
        return GridFunction(self.grid, self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return GridFunction(self.grid, self.values / self._other(other))

    def __neg__(self):
        return GridFunction(self.grid, -self.values)

    def conj(self):
        return GridFunction(self.grid, np.conj(self.values))

    def sup(self):
        return float(np.max(np.abs(self.values)))

    def allclose(self, other, atol=1e-12):
        return bool(np.max(np.abs(self.values - self._other(other)), initial=0.0) <= atol)

    def __repr__(self):
        return f"GridFunction(eta={self.eta}, values={self.values!r})"


def d_dx(f):
    """Central difference ``(eta/2pi)(f(x_{j+1}) - f(x_{j-1}))``."""
    v = f.values
    return GridFunction(f.grid, f.eta / (2 * math.pi) * (np.roll(v, -1) - np.roll(v, 1)))


def d2_dx2(f):
    return d_dx(d_dx(f))


def shift(f, direction):
    """``left``: ``f(x_{j+1})``; ``right``: ``f(x_{j-1})``."""
    if direction == LEFT:
        return GridFunction(f.grid, np.roll(f.values, -1))
    if direction == RIGHT:
        return GridFunction(f.grid, np.roll(f.values, 1))
    raise DomainError(f"direction must be 'left' or 'right', got {direction!r}")


def integrate(f):
    return complex(f.grid.weight * np.sum(f.values))


def restrict(f):
    """Keep the even-index points; the result lives on ``CircleGrid(eta/2)``."""
    half = f.grid.half()
    return GridFunction(half, f.values[::2])


def sample(g, eta):
    """Pointwise sampling of a vectorised callable at the grid points."""
    grid = CircleGrid(eta) if isinstance(eta, int) else eta
    vals = np.asarray(g(grid.points), dtype=complex)
    if vals.ndim == 0:
        vals = np.full(grid.size, vals, dtype=complex)
    return GridFunction(grid, vals)


class SpaceTimeField:
    """Space-time array; row ``k`` is the slice at time ``k/nu``."""

    __slots__ = ("grid", "tgrid", "values")

    def __init__(self, grid, tgrid, values):
        arr = np.asarray(values, dtype=complex)
        expected = (tgrid.n_steps + 1, grid.size)
        if arr.shape != expected:
            raise DimensionError(f"field must have shape {expected}, got {arr.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "tgrid", tgrid)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("SpaceTimeField is immutable")

    @classmethod
    def from_rows(cls, rows, nu):
        rows = list(rows)
        grid = rows[0].grid
        return cls(grid, TimeGrid(nu, len(rows) - 1), np.stack([r.values for r in rows]))

    def row(self, k):
        return GridFunction(self.grid, self.values[k])

    def rows(self):
        return [self.row(k) for k in range(self.values.shape[0])]

    def _new(self, values):
        return SpaceTimeField(self.grid, self.tgrid, values)

    def __add__(self, other):
        return self._new(self.values + _field_values(other))

    def __sub__(self, other):
        return self._new(self.values - _field_values(other))

    def __mul__(self, other):
        return self._new(self.values * _field_values(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.values)


def _field_values(other):
    return other.values if isinstance(other, SpaceTimeField) else other


def d_dt(F):
    """Forward difference scaled by ``nu``; the terminal row is set to 0."""
    if F.tgrid.n_steps < 1:
        raise DomainError("d_dt needs at least one time step")
    v = F.values
    out = np.zeros_like(v)
    out[:-1] = F.tgrid.nu * (v[1:] - v[:-1])
    return F._new(out)


def d_dx_field(F):
    v = F.values
    return F._new(F.grid.eta / (2 * math.pi) * (np.roll(v, -1, axis=1) - np.roll(v, 1, axis=1)))


def shift_x(F, direction):
    step = {LEFT: -1, RIGHT: 1}.get(direction)
    if step is None:
        raise DomainError(f"direction must be 'left' or 'right', got {direction!r}")
    return F._new(np.roll(F.values, step, axis=1))


def shift_t(F, direction):
    """Cyclic shift in time (the last row wraps to row 0)."""
    step = {LEFT: -1, RIGHT: 1}.get(direction)
    if step is None:
        raise DomainError(f"direction must be 'left' or 'right', got {direction!r}")
    return F._new(np.roll(F.values, step, axis=0))


def integrate_field(F):
    """Integral against the product counting measure ``(pi/eta) x (1/nu)``."""
    return complex(F.grid.weight * F.tgrid.dt * np.sum(F.values))


def calculus_identity_residuals(g, h):
    """Residuals of the summation-by-parts identity suite for ``g``, ``h``.

    Keys name the identity; values are absolute residuals.  Restricted
    identities (``restricted_*``) are included when ``eta`` is even.
    """
    gp, hp = d_dx(g), d_dx(h)
    gpp, hpp = d_dx(gp), d_dx(hp)
    res = {
        "integral_of_derivative": abs(integrate(gp)),
        "product_rule": (d_dx(g * h) - (gp * shift(h, LEFT) + shift(g, RIGHT) * hp)).sup(),
        "parts": abs(integrate(gp * h) + integrate(g * hp)),
        "shift_invariance": max(abs(integrate(shift(g, LEFT)) - integrate(g)), abs(integrate(shift(g, RIGHT)) - integrate(g))),
        "shift_commutes": max(
            (shift(gp, RIGHT) - d_dx(shift(g, RIGHT))).sup(),
            (shift(gp, LEFT) - d_dx(shift(g, LEFT))).sup(),
        ),
        "second_parts": abs(integrate(gpp * h) - integrate(g * hpp)),
    }
    if g.eta % 2 == 0:
        res["restricted_integral_of_derivative"] = abs(integrate(restrict(gp)))
        res["restricted_product_rule"] = (
            restrict(d_dx(g * h)) - (restrict(gp) * restrict(shift(h, LEFT)) + restrict(shift(g, RIGHT)) * restrict(hp))
        ).sup()
        res["restricted_parts"] = abs(
            integrate(restrict(gp * h)) + integrate(restrict(shift(g, RIGHT) * shift(hp, RIGHT)))
        )
    return res


def field_identity_residuals(G, H):
    """Space-time versions of the identity suite, using ``d_dx_field`` and ``shift_x``."""
    Gp, Hp = d_dx_field(G), d_dx_field(H)
    Gpp, Hpp = d_dx_field(Gp), d_dx_field(Hp)

    def sup(F):
        return float(np.max(np.abs(F.values)))

    return {
        "field_integral_of_derivative": abs(integrate_field(Gp)),
        "field_product_rule": sup(d_dx_field(G * H) - (Gp * shift_x(H, LEFT) + shift_x(G, RIGHT) * Hp)),
        "field_parts": abs(integrate_field(Gp * H) + integrate_field(G * Hp)),
        "field_shift_invariance": max(
            abs(integrate_field(shift_x(G, LEFT)) - integrate_field(G)),
            abs(integrate_field(shift_x(G, RIGHT)) - integrate_field(G)),
        ),
        "field_shift_commutes": max(
            sup(shift_x(Gp, LEFT) - d_dx_field(shift_x(G, LEFT))),
            sup(shift_x(Gp, RIGHT) - d_dx_field(shift_x(G, RIGHT))),
        ),
        "field_second_parts": abs(integrate_field(Gpp * H) - integrate_field(G * Hpp)),
    }
