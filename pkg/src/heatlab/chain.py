"""The N-state lazy random walk on a cycle.

From state ``i`` the walk moves to ``i-1``, ``i`` or ``i+1`` (mod N), each
with probability 1/3.  Everything here exists in two flavours: float64
arithmetic, and exact arithmetic with :class:`fractions.Fraction`.  The
transition kernel is circulant and symmetric, so ``P**n`` is determined by
its first row, which in exact mode is an integer vector over ``3**n``.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Integral, Rational

import mpmath
import numpy as np

from .exceptions import DimensionError, DomainError, InvalidVariantError, ResourceError
from .validation import check_int

GENERAL = "general"
ODD = "odd"
VARIANTS = (GENERAL, ODD)

MAX_COUPLING_STATES = 40
# trials per Monte Carlo partition; fixed so results do not depend on worker count
MC_CHUNK = 1 << 14


@dataclass(frozen=True)
class CyclicChain:
    n_states: int

    def __post_init__(self):
        check_int(self.n_states, "n_states", minimum=2)

    def kernel(self, exact=False):
        """Transition matrix, rows summing to one."""
        return n_step_matrix(self, 1, exact=exact)

    def step(self, weights):
        """One step ``d -> d P`` for a 1-D float or Fraction sequence."""
        n = self.n_states
        if isinstance(weights, np.ndarray) and weights.dtype != object:
            return (np.roll(weights, 1) + weights + np.roll(weights, -1)) / 3
        return [
            (weights[(j - 1) % n] + weights[j] + weights[(j + 1) % n]) / 3 for j in range(n)
        ]


def _first_row_counts(n_states, n):
    """Integer path counts c with ``(P**n)[0, j] == c[j] / 3**n``."""
    counts = [0] * n_states
    counts[0] = 1
    for _ in range(n):
        counts = [
            counts[(j - 1) % n_states] + counts[j] + counts[(j + 1) % n_states]
            for j in range(n_states)
        ]
    return counts


def _circulant(row):
    n = len(row)
    return [[row[(j - i) % n] for j in range(n)] for i in range(n)]


def n_step_matrix(chain, n, exact=False):
    """Return ``P**n``.

    In exact mode the result is an object array of ``Fraction``; otherwise
    float64.  ``n == 0`` gives the identity.
    """
    n = check_int(n, "n", minimum=0)
    counts = _first_row_counts(chain.n_states, n)
    if exact:
        denom = 3**n
        row = [Fraction(c, denom) for c in counts]
        return np.array(_circulant(row), dtype=object)
    # counts/3**n overflows float for large n; iterate in floats instead
    row = np.zeros(chain.n_states)
    row[0] = 1.0
    for _ in range(n):
        row = chain.step(row)
    return np.array(_circulant(list(row)), dtype=float)


@dataclass(frozen=True)
class Distribution:
    """Nonnegative weight vector with its total mass.

    ``exact`` distributions hold ``Fraction`` entries and an exact mass.
    """

    weights: tuple
    mass: object = None
    exact: bool = field(default=False)

    def __post_init__(self):
        weights = tuple(self.weights)
        if self.exact:
            weights = tuple(Fraction(w) for w in weights)
            mass = sum(weights, Fraction(0))
        else:
            weights = tuple(float(w) for w in weights)
            mass = math.fsum(weights)
        if any(w < 0 for w in weights):
            raise DomainError("distribution weights must be nonnegative")
        if self.mass is not None:
            given = Fraction(self.mass) if self.exact else float(self.mass)
            ok = given == mass if self.exact else abs(given - mass) <= 1e-12 * max(1.0, abs(mass))
            if not ok:
                raise DomainError(f"mass {self.mass} does not match entry sum {mass}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "mass", mass)

    @classmethod
    def from_values(cls, values):
        """Exact if every entry is an int or Fraction, float otherwise."""
        values = list(values)
        exact = all(isinstance(v, (Integral, Rational)) and not isinstance(v, bool) for v in values)
        return cls(tuple(values), exact=exact)

    @classmethod
    def uniform(cls, n_states, mass=1, exact=True):
        w = Fraction(mass) / n_states if exact else float(mass) / n_states
        return cls((w,) * n_states, exact=exact)

    @classmethod
    def delta(cls, n_states, state=0, mass=1, exact=True):
        zero = Fraction(0) if exact else 0.0
        w = [zero] * n_states
        w[state % n_states] = Fraction(mass) if exact else float(mass)
        return cls(tuple(w), exact=exact)

    def __len__(self):
        return len(self.weights)

    def as_array(self):
        return np.array(self.weights, dtype=object if self.exact else float)


def evolve(chain, d, n):
    """Return ``d P**n``; mass is preserved (exactly in exact mode)."""
    n = check_int(n, "n", minimum=0)
    if len(d) != chain.n_states:
        raise DimensionError(f"distribution has length {len(d)}, chain has {chain.n_states} states")
    if d.exact:
        w = list(d.weights)
        for _ in range(n):
            w = chain.step(w)
        return Distribution(tuple(w), exact=True)
    w = np.array(d.weights, dtype=float)
    for _ in range(n):
        w = chain.step(w)
    return Distribution(tuple(w), exact=False)


def tv_gap(chain, n, exact=False):
    """``max_ij |p_ij^(n) - 1/N|``.  Circulant, so row 0 is enough."""
    n = check_int(n, "n", minimum=0)
    N = chain.n_states
    if exact:
        denom = 3**n
        return max(abs(Fraction(c, denom) - Fraction(1, N)) for c in _first_row_counts(N, n))
    row = n_step_matrix(chain, n)[0]
    return float(np.max(np.abs(row - 1.0 / N)))


@dataclass(frozen=True)
class MixingBound:
    """Geometric mixing bound ``(1 - rho)**(n / block_m - 1)``.

    ``general``: block ``N-1``, ``rho = 3**-(N-1)``.
    ``odd`` (odd N only): block ``(N-1)/2``, ``rho = 3**-((N-1)/2)``.
    """

    N: int
    variant: str = GENERAL

    def __post_init__(self):
        check_int(self.N, "N", minimum=2)
        if self.variant not in VARIANTS:
            raise InvalidVariantError(f"unknown variant {self.variant!r}")
        if self.variant == ODD and self.N % 2 == 0:
            raise InvalidVariantError(f"odd variant requires odd N, got N={self.N}")
        if self.variant == ODD and self.N < 3:
            raise InvalidVariantError("odd variant requires N >= 3")

    @property
    def block_m(self):
        return self.N - 1 if self.variant == GENERAL else (self.N - 1) // 2

    @property
    def rho(self):
        return Fraction(1, 3**self.block_m)

    def __call__(self, n):
        return mixing_bound(self, n)

    def holds_exact(self, gap, n):
        """Exact test of ``gap <= (1-rho)**(n/m - 1)`` for rational ``gap``.

        Both sides are raised to the power ``m`` so that only integer
        exponents occur.
        """
        m = self.block_m
        gap = Fraction(gap)
        if gap < 0:
            raise DomainError("gap must be nonnegative")
        return gap**m <= (1 - self.rho) ** (n - m)


def mixing_bound(b, n):
    n = check_int(n, "n", minimum=1)
    exponent = n / b.block_m - 1
    return math.exp(exponent * math.log1p(-(3.0 ** -b.block_m)))


def eps_n(N, n):
    return mixing_bound(MixingBound(N, GENERAL), n)


def delta_n(N, n):
    return mixing_bound(MixingBound(N, ODD), n)


def steps_to_equilibrium(eta, eps, variant=GENERAL):
    """Smallest n with ``n >= m (1 + log eps / log(1 - 3**-m))``.

    ``m = eta - 1`` (general) or ``(eta - 1) / 2`` (odd).  The denominator is
    evaluated as ``log1p(-3**-m)``; once ``3**-m`` underflows a float the
    evaluation switches to mpmath at a precision that resolves it.
    """
    eta = check_int(eta, "eta", minimum=2)
    eps = float(eps)
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    m = MixingBound(eta, variant).block_m
    if m <= 600:
        value = m * (1 + math.log(eps) / math.log1p(-(3.0**-m)))
        return max(m, math.ceil(value))
    digits = int(m * math.log10(3)) + 30
    with mpmath.workdps(digits):
        value = m * (1 + mpmath.log(eps) / mpmath.log1p(-mpmath.mpf(3) ** (-m)))
        return max(m, int(mpmath.ceil(value)))


@dataclass(frozen=True)
class CouplingTail:
    N: int
    tail: tuple

    def __getitem__(self, n):
        return self.tail[n]

    def __len__(self):
        return len(self.tail)

    def as_float(self):
        return np.array([float(p) for p in self.tail])


def coupling_tail_exact(N, n_max, start=0):
    """Exact ``P(T > n)`` for ``n = 0..n_max``.

    The product chain ``(X, Y)`` starts from ``delta_start x uniform``; the
    diagonal is absorbing from step 1 on (``T >= 1`` by definition).  Mass is
    tracked as integers scaled by ``N * 9**n``.
    """
    N = check_int(N, "N", minimum=2)
    n_max = check_int(n_max, "n_max", minimum=1)
    if N > MAX_COUPLING_STATES:
        raise ResourceError(f"coupling product chain limited to N <= {MAX_COUPLING_STATES}")
    mass = np.zeros((N, N), dtype=object)
    mass[:] = 0
    mass[start % N, :] = 1
    diag = np.eye(N, dtype=bool)
    tail = [Fraction(1)]
    scale = N
    for _ in range(n_max):
        nxt = np.zeros((N, N), dtype=object)
        nxt[:] = 0
        for dx in (-1, 0, 1):
            shifted = np.roll(mass, dx, axis=0)
            for dy in (-1, 0, 1):
                nxt = nxt + np.roll(shifted, dy, axis=1)
        nxt[diag] = 0
        mass = nxt
        scale *= 9
        tail.append(Fraction(int(mass.sum()), scale))
    return CouplingTail(N, tuple(tail))


def simulate_meeting_time(N, trials, seed, n_max=None, start=0):
    """Monte Carlo estimate of ``P(T > n)``, ``n = 0..n_max``.

    Trials are split into fixed-size partitions, each driven by its own
    ``SeedSequence((seed, partition))`` stream, so the estimate is the same
    whatever order or worker the partitions run on.
    """
    N = check_int(N, "N", minimum=2)
    trials = check_int(trials, "trials", minimum=1)
    n_max = 4 * N if n_max is None else check_int(n_max, "n_max", minimum=0)
    survivors = np.zeros(n_max + 1, dtype=np.int64)
    for part, lo in enumerate(range(0, trials, MC_CHUNK)):
        size = min(MC_CHUNK, trials - lo)
        rng = np.random.default_rng(np.random.SeedSequence([seed, part]))
        survivors += _meeting_chunk(rng, N, size, n_max, start)
    return survivors / trials


def _meeting_chunk(rng, N, size, n_max, start):
    x = np.full(size, start % N, dtype=np.int64)
    y = rng.integers(0, N, size=size)
    alive = np.ones(size, dtype=bool)
    counts = np.zeros(n_max + 1, dtype=np.int64)
    counts[0] = size
    for n in range(1, n_max + 1):
        x = (x + rng.integers(-1, 2, size=size)) % N
        y = (y + rng.integers(-1, 2, size=size)) % N
        alive &= x != y
        counts[n] = alive.sum()
    return counts
