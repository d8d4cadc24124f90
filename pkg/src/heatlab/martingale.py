"""Exact reverse-martingale extension of the cyclic-chain density process.

A nonnegative vector on ``eta`` states is pushed through the lazy cyclic
walk for ``nu`` steps, giving ``F(i, j)``.  The unit interval is refined
ternarily: time index ``t`` carries the algebra generated by the
``3**(nu - t) * eta`` intervals of length ``1 / (3**(nu - t) eta)``, so later
times see coarser algebras.  Going one level finer, every cell splits into
three; the left child keeps the parent's state ``s`` (first kind), the middle
and right children get ``s - 1`` and ``s + 1`` mod ``eta`` (second kind).
The extended process copies ``F`` through that association.

All arithmetic uses :class:`fractions.Fraction`; every check is an exact
equality.  Cell positions are integers ``k`` standing for ``k / (3**r eta)``
where ``r = nu - t`` is the number of refinements.
"""
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .chain import CyclicChain, Distribution, evolve
from .exceptions import DimensionError, DomainError
from .validation import check_budget, check_int

FIRST = "first"
SECOND = "second"


def _as_fraction(v):
    # floats go through their repr so that 0.1 means 1/10
    return Fraction(repr(v)) if isinstance(v, float) else Fraction(v)


@dataclass(frozen=True)
class ProcessGrid:
    """``columns[j][i] = F(i/eta, j/nu)`` for ``j = 0..nu``."""

    eta: int
    nu: int
    columns: tuple

    def F(self, state, j):
        return self.columns[j][state % self.eta]

    @property
    def mass(self):
        return sum(self.columns[0], Fraction(0))

    def column(self, j):
        return self.columns[j]

    def equilibrium_deviation(self):
        """``max_i |F(i, nu) - mass/eta|``; small only once ``nu`` is large."""
        target = self.mass / self.eta
        return max(abs(v - target) for v in self.columns[self.nu])


def build_process(initial, eta=None, nu=1):
    values = [_as_fraction(v) for v in initial]
    eta = len(values) if eta is None else check_int(eta, "eta", minimum=2)
    nu = check_int(nu, "nu", minimum=0)
    if len(values) != eta:
        raise DimensionError(f"initial vector has length {len(values)}, expected eta={eta}")
    if eta < 2:
        raise DomainError("need at least two states")
    if any(v < 0 for v in values):
        raise DomainError("initial vector must be nonnegative")
    chain = CyclicChain(eta)
    d = Distribution(tuple(values), exact=True)
    cols = [d.weights]
    for _ in range(nu):
        d = evolve(chain, d, 1)
        cols.append(d.weights)
    return ProcessGrid(eta, nu, tuple(cols))


@dataclass(frozen=True)
class AssociationTable:
    """Special points per refinement depth.

    ``rows[r]`` lists ``(kind, state)`` for each of the ``3**r eta`` cells at
    time index ``nu - r``; ``state`` is the original point the cell copies.
    """

    eta: int
    nu: int
    rows: tuple

    def level(self, t_index):
        return self.rows[self.nu - t_index]

    def states(self, r):
        return [s for _, s in self.rows[r]]

    def counts(self, r):
        """Number of special points at depth ``r`` associated to each state."""
        c = Counter(self.states(r))
        return [c.get(i, 0) for i in range(self.eta)]

    def records(self):
        """Flat ``(level, k, kind, state)`` tuples, ``level`` being the time index."""
        for r, row in enumerate(self.rows):
            for k, (kind, state) in enumerate(row):
                yield self.nu - r, k, kind, state


def build_association(eta, nu, budget=None):
    """Special points for every depth ``r = 0..nu``.

    ``budget`` caps the total number of cells; None uses ``HEATLAB_BUDGET_CELLS``.
    """
    eta = check_int(eta, "eta", minimum=2)
    nu = check_int(nu, "nu", minimum=0)
    total = eta * (3 ** (nu + 1) - 1) // 2
    check_budget(total, "association table", budget)
    row = tuple((FIRST, i) for i in range(eta))
    rows = [row]
    for _ in range(nu):
        nxt = []
        for _, s in row:
            nxt.append((FIRST, s))
            nxt.append((SECOND, (s - 1) % eta))
            nxt.append((SECOND, (s + 1) % eta))
        row = tuple(nxt)
        rows.append(row)
    return AssociationTable(eta, nu, tuple(rows))


@dataclass(frozen=True)
class ExtendedProcess:
    """``rows[t]`` holds the extended process at time ``t/nu`` on its ``3**(nu-t) eta`` cells."""

    eta: int
    nu: int
    rows: tuple

    def row(self, t_index):
        return self.rows[t_index]

    def n_cells(self, t_index):
        return 3 ** (self.nu - t_index) * self.eta

    def value(self, x, t_index):
        """Value at ``x`` in ``[0, 1)``: the cell containing ``x`` at that level."""
        x = Fraction(x)
        if not 0 <= x < 1:
            raise DomainError("x must lie in [0, 1)")
        return self.rows[t_index][int(x * self.n_cells(t_index))]

    def value_at(self, x, y):
        """Step-function extension to real time ``y`` in ``[0, 1]`` (floor of ``nu y``)."""
        y = Fraction(y)
        if not 0 <= y <= 1:
            raise DomainError("y must lie in [0, 1]")
        return self.value(x, int(y * self.nu))

    def finest_row(self, t_index):
        """Row ``t`` written on the finest algebra (each cell repeated ``3**t`` times)."""
        rep = 3**t_index
        return [v for v in self.rows[t_index] for _ in range(rep)]


def extend_process(P, A):
    if (P.eta, P.nu) != (A.eta, A.nu):
        raise DimensionError(f"process (eta={P.eta}, nu={P.nu}) vs association (eta={A.eta}, nu={A.nu})")
    rows = tuple(tuple(P.F(s, t) for s in A.states(P.nu - t)) for t in range(P.nu + 1))
    return ExtendedProcess(P.eta, P.nu, rows)


def conditional_expectation(E, from_level, to_level=None):
    """``E(row_from | algebra_to)`` as a row on the ``to`` level.

    Each coarse cell is the union of ``3**(to - from)`` consecutive cells of
    the finer level, all of equal measure, so the conditional expectation is
    their plain average.
    """
    to_level = from_level + 1 if to_level is None else to_level
    if not 0 <= from_level <= to_level <= E.nu:
        raise DomainError(f"need 0 <= from_level <= to_level <= nu, got {from_level}, {to_level}")
    block = 3 ** (to_level - from_level)
    row = E.rows[from_level]
    return tuple(sum(row[k : k + block], Fraction(0)) / block for k in range(0, len(row), block))


def gamma_integral(values, cells, n_finest):
    """Integral over a union of finest cells, each of measure ``1 / n_finest``."""
    return sum((values[k] for k in cells), Fraction(0)) / n_finest


@dataclass
class MartingaleReport:
    one_step: bool = True
    all_pairs: bool = True
    adapted: bool = True
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return self.one_step and self.all_pairs and self.adapted


def verify_reverse_martingale(E):
    """Check ``E(row_j | algebra_i) == row_i`` for all ``j <= i``.

    Adjacent pairs go through :func:`conditional_expectation`.  Every pair is
    also checked independently from the definition: for each cell ``U`` of
    the coarser algebra, ``integral_U row_j dgamma == row_i(U) gamma(U)``,
    computed on the finest algebra.
    """
    report = MartingaleReport()
    n_finest = 3**E.nu * E.eta
    finest = [E.finest_row(t) for t in range(E.nu + 1)]
    for t in range(E.nu + 1):
        block = 3**t
        row = finest[t]
        for start in range(0, n_finest, block):
            if any(v != row[start] for v in row[start : start + block]):
                report.adapted = False
                report.violations.append(("adapted", t, start // block))
                break
    for i in range(E.nu):
        got = conditional_expectation(E, i, i + 1)
        for k, (a, b) in enumerate(zip(got, E.rows[i + 1])):
            if a != b:
                report.one_step = False
                report.violations.append(("one_step", i, i + 1, k, a, b))
    for i in range(E.nu + 1):
        block = 3**i
        measure = Fraction(block, n_finest)
        for j in range(i + 1):
            for cell, target in enumerate(E.rows[i]):
                lhs = gamma_integral(finest[j], range(cell * block, (cell + 1) * block), n_finest)
                if lhs != target * measure:
                    report.all_pairs = False
                    report.violations.append(("all_pairs", j, i, cell, lhs / measure, target))
    return report


@dataclass
class DistributionReport:
    t_index: int
    masses: dict
    scaling_ok: bool

    @property
    def passed(self):
        return self.scaling_ok and all(a == b for a, b in self.masses.values())


def verify_distribution_equality(P, E, t_index):
    """Compare ``gamma(F_t = a)`` with ``gamma(Fbar_t = a)`` for every value ``a``.

    Also checks ``3**(nu - t) * #{F_t = a} == #{Fbar_t = a}``.
    """
    t_index = check_int(t_index, "t_index", minimum=0, maximum=P.nu)
    r = P.nu - t_index
    orig = Counter(P.column(t_index))
    ext = Counter(E.row(t_index))
    masses = {}
    scaling_ok = True
    for alpha in set(orig) | set(ext):
        masses[alpha] = (Fraction(orig.get(alpha, 0), P.eta), Fraction(ext.get(alpha, 0), 3**r * P.eta))
        if 3**r * orig.get(alpha, 0) != ext.get(alpha, 0):
            scaling_ok = False
    return DistributionReport(t_index, masses, scaling_ok)


def cdf(row, x):
    """``gamma(F_t <= x)`` for a row of equal-measure cells."""
    x = Fraction(x)
    return Fraction(sum(1 for v in row if v <= x), len(row))


def counting_lemma_holds(A):
    """Each state owns exactly ``3**r`` special points at depth ``r``."""
    return all(A.counts(r) == [3**r] * A.eta for r in range(A.nu + 1))


def mass_identity_holds(P, E):
    """``integral Fbar_t dgamma == (1/eta) sum_i F(i, t)`` for every ``t``."""
    for t in range(P.nu + 1):
        row = E.row(t)
        if sum(row, Fraction(0)) / len(row) != sum(P.column(t), Fraction(0)) / P.eta:
            return False
    return True
