"""Counting sequences, growth constants and symmetrization bounds.

Four sequences indexed by noncrossing partitions:

* ``a_n``: sum of ``|mu(sigma, 1)|`` over ``NC_n`` (large Schröder numbers)
* ``atilde_n``: the same sum over partitions without singletons
* ``b_n(N)``: sum over singleton-free ``pi`` of ``N^|pi| a_pi``
* ``btilde_n(N)``: sum over all ``pi`` of ``N^|pi| atilde_pi``

Each is computed by enumeration and, independently, from a generating
function.  The growth rate of ``btilde`` is governed by the smallest
positive zero of a quartic factor of a resultant; exact root isolation
certifies how it compares with ``2 sqrt(N) / (1 - 1/sqrt(N))``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from math import isqrt, prod
from typing import NamedTuple

from .errors import DomainError, SizeLimitError
from .incidence import mobius_nc
from .partitions import (
    NONCROSSING,
    Partition,
    enumerate_partitions,
    is_noncrossing,
    kernel,
    leq,
    meet,
    quotient,
)
from .rational import fmt
from .report import Report
from .series import (
    BivariatePolynomial,
    Polynomial,
    PowerSeries,
    convolve_zeta,
    count_roots,
    isolate_positive_roots,
    ps_implicit_solve,
    ps_sqrt,
    resultant,
)

KINDS = ("a", "atilde", "b", "btilde")
ENUMERATION_LIMIT = 10
SERIES_LIMIT = 64
DEFAULT_PRECISION = Fraction(1, 10**12)


def _check_kind(kind: str, N: int) -> None:
    if kind not in KINDS:
        raise DomainError(f"unknown sequence {kind!r}; expected one of {', '.join(KINDS)}")
    if N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")


# enumeration -----------------------------------------------------------------


@lru_cache(maxsize=None)
def _abs_mobius_sum(n: int, singleton_free: bool) -> int:
    top = Partition.top(n)
    return sum(
        abs(mobius_nc(s, top))
        for s in enumerate_partitions(n, NONCROSSING)
        if not (singleton_free and any(len(b) == 1 for b in s.blocks))
    )


def sequence_by_enumeration(kind: str, n: int, N: int = 1) -> list[Fraction]:
    """Values for ``1..n`` by direct summation over noncrossing partitions."""
    _check_kind(kind, N)
    if not 1 <= n <= ENUMERATION_LIMIT:
        raise SizeLimitError(f"enumeration supports 1 <= n <= {ENUMERATION_LIMIT}, got {n}")
    if kind == "a":
        return [Fraction(_abs_mobius_sum(k, False)) for k in range(1, n + 1)]
    if kind == "atilde":
        return [Fraction(_abs_mobius_sum(k, True)) for k in range(1, n + 1)]
    inner = "a" if kind == "b" else "atilde"
    base = sequence_by_enumeration(inner, n)
    out = []
    for k in range(1, n + 1):
        total = Fraction(0)
        for pi in enumerate_partitions(k, NONCROSSING):
            sizes = [len(b) for b in pi.blocks]
            if kind == "b" and 1 in sizes:
                continue
            total += Fraction(N) ** pi.size * prod((base[s - 1] for s in sizes), start=Fraction(1))
        out.append(total)
    return out


# generating functions ----------------------------------------------------------


def schroeder_series(order: int) -> PowerSeries:
    """``(1 - z - sqrt(1 - 6z + z^2)) / 2``."""
    root = ps_sqrt(PowerSeries.from_coeffs([1, -6, 1], order))
    return (PowerSeries.from_coeffs([1, -1], order) - root) * Fraction(1, 2)


def schroeder_tail_series(order: int) -> PowerSeries:
    """``(1 - 3z - sqrt(1 - 6z + z^2)) / 2``: the Schröder series with ``a_1`` removed."""
    root = ps_sqrt(PowerSeries.from_coeffs([1, -6, 1], order))
    return (PowerSeries.from_coeffs([1, -3], order) - root) * Fraction(1, 2)


def b_series(N: int, order: int) -> PowerSeries:
    """``2(N+1) / (N + 2 + 3Nz + N sqrt(1 - 6z + (1-8N) z^2)) - 1``."""
    N = Fraction(N)
    root = ps_sqrt(PowerSeries.from_coeffs([1, -6, 1 - 8 * N], order))
    denom = PowerSeries.from_coeffs([N + 2, 3 * N], order) + root * N
    return denom.reciprocal() * (2 * (N + 1)) - 1


def b_series_by_zeta(N: int, order: int) -> PowerSeries:
    """``b = (N * atilde_ring) ⊠ zeta`` solved through the zeta relation."""
    return convolve_zeta(schroeder_tail_series(order) * N)


def atilde_equation() -> BivariatePolynomial:
    """``y (1 - y)(1 - y - z) - z^2`` in the variables ``(x=y, z)``."""
    y, z = BivariatePolynomial.x(), BivariatePolynomial.z()
    return y * (1 - y) * (1 - y - z) - z * z


def g_polynomial(N: int) -> BivariatePolynomial:
    """``(x/N)(1 - x/N)(1 - x/N - z(x+1)) - z^2 (x+1)^2``; its root ``x(z)`` is ``phi_btilde``."""
    x, z = BivariatePolynomial.x(), BivariatePolynomial.z()
    y = x * Fraction(1, N)
    return y * (1 - y) * (1 - y - z * (x + 1)) - z * z * (x + 1) ** 2


def sequence_by_series(kind: str, n: int, N: int = 1) -> list[Fraction]:
    """Values for ``1..n`` read off the generating function."""
    _check_kind(kind, N)
    if not 1 <= n <= SERIES_LIMIT:
        raise SizeLimitError(f"series route supports 1 <= n <= {SERIES_LIMIT}, got {n}")
    if kind == "a":
        s = schroeder_series(n)
    elif kind == "atilde":
        s = ps_implicit_solve(atilde_equation(), n)
    elif kind == "b":
        s = b_series(N, n)
    else:
        s = ps_implicit_solve(g_polynomial(N), n)
    return list(s.coeffs[1:])


@dataclass(frozen=True)
class SequenceReport:
    kind: str
    N: int
    enumeration: tuple | None
    series: tuple

    @property
    def agree(self) -> bool:
        if self.enumeration is None:
            return True
        return self.series[: len(self.enumeration)] == self.enumeration

    def rows(self) -> list[dict]:
        out = []
        for i, s in enumerate(self.series):
            e = self.enumeration[i] if self.enumeration and i < len(self.enumeration) else None
            out.append(
                {
                    "kind": self.kind,
                    "n": i + 1,
                    "N": self.N,
                    "enumeration": "" if e is None else fmt(e),
                    "series": fmt(s),
                    "match": "" if e is None else str(e == s).lower(),
                }
            )
        return out


def sequence_report(kind: str, n: int, N: int = 1, enumerate_up_to: int = ENUMERATION_LIMIT) -> SequenceReport:
    series = tuple(sequence_by_series(kind, n, N))
    m = min(n, enumerate_up_to)
    enum = tuple(sequence_by_enumeration(kind, m, N)) if m >= 1 else None
    return SequenceReport(kind, N, enum, series)


# resultant and growth constants --------------------------------------------------


def quartic_factor(N: int) -> Polynomial:
    """``-5 + (8-2N) z + (32+26N-N^2) z^2 + (-4+16N+10N^2) z^3 + (4N^3-N^2) z^4``."""
    if N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    return Polynomial(
        (-5, 8 - 2 * N, 32 + 26 * N - N * N, -4 + 16 * N + 10 * N * N, 4 * N**3 - N * N)
    )


def discriminant_resultant(N: int) -> Polynomial:
    """``Res_x(g, dg/dx)`` for the equation of ``phi_btilde``."""
    g = g_polynomial(N)
    return resultant(g, g.derivative_x())


def quartic_divides_resultant(N: int) -> tuple[bool, Polynomial]:
    """Whether the quartic divides the resultant, and the cofactor."""
    q, r = divmod(discriminant_resultant(N), quartic_factor(N))
    return r.is_zero(), q


def khinchin_constant(N: int, digits: int = 40) -> Decimal:
    """``2 sqrt(N) / (1 - 1/sqrt(N))`` (equivalently ``2N / (sqrt(N) - 1)``)."""
    if N < 2:
        raise DomainError("the Khinchin-type constant divides by zero at N = 1")
    with localcontext() as ctx:
        ctx.prec = digits
        return 2 * Decimal(N) / (Decimal(N).sqrt() - 1)


def negativity_bound(N: int) -> Fraction:
    """A rational ``U >= (1 - 1/sqrt(N)) / (2 sqrt(N)) = (sqrt(N) - 1) / (2N)``, tight to 1e-30."""
    scale = 10**30
    s_hi = Fraction(isqrt(N * scale * scale - 1) + 1, scale)  # >= sqrt(N)
    return (s_hi - 1) / (2 * N)


def exceeds_khinchin_radius(z: Fraction, N: int) -> bool:
    """Exact test ``z >= (sqrt(N) - 1) / (2N)``, i.e. ``1/z <= 2N / (sqrt(N) - 1)``."""
    if z <= 0:
        return False
    return (2 * N * z + 1) ** 2 >= N


@dataclass(frozen=True)
class GrowthConstants:
    N: int
    z0_lo: Fraction
    z0_hi: Fraction
    z0: float
    khinchin: Decimal | None
    b_growth: float
    b_growth_exact: Fraction | None
    pisier: float | None

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "z0": self.z0,
            "z0_lo": fmt(self.z0_lo),
            "z0_hi": fmt(self.z0_hi),
            "inverse_z0": 1 / self.z0,
            "khinchin": None if self.khinchin is None else str(self.khinchin),
            "b_growth": self.b_growth,
            "b_growth_exact": None if self.b_growth_exact is None else fmt(self.b_growth_exact),
            "pisier": self.pisier,
        }


def b_growth_radicand(N: int) -> Polynomial:
    """``1 - 6z + (1 - 8N) z^2``, whose smallest positive zero sets the growth of ``b_n``."""
    return Polynomial((1, -6, 1 - 8 * N))


def b_growth(N: int) -> tuple[float, Fraction | None]:
    """Reciprocal of the smallest positive zero of the radicand: ``3 + sqrt(8(N+1))``.

    The exact value is returned as well when ``8(N+1)`` is a perfect square.
    """
    d = 8 * (N + 1)
    s = isqrt(d)
    exact = Fraction(3 + s) if s * s == d else None
    return 3 + math.sqrt(d), exact


def growth_constants(N: int, precision=DEFAULT_PRECISION) -> GrowthConstants:
    if N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    roots = isolate_positive_roots(quartic_factor(N), precision)
    if not roots:
        raise DomainError(f"the quartic factor has no positive zero at N = {N}")
    z0 = roots[0]
    growth, exact = b_growth(N)
    return GrowthConstants(
        N=N,
        z0_lo=z0.lo,
        z0_hi=z0.hi,
        z0=z0.approx,
        khinchin=khinchin_constant(N) if N >= 2 else None,
        b_growth=growth,
        b_growth_exact=exact,
        pisier=3 * math.pi / (4 * z0.approx) if N == 1 else None,
    )


def negativity_check(N: int, grid: int | None = None) -> Report:
    """Certify that the quartic factor has no zero on ``[0, (1 - 1/sqrt N) / (2 sqrt N)]``.

    The interval is enlarged to a rational ``U`` above the exact endpoint and
    a Sturm count on ``(0, U]`` plus the sign at 0 decides.  With ``grid``, the
    sign is also evaluated at ``grid + 1`` equally spaced rational points.
    """
    if N < 2:
        raise DomainError("the negativity interval is degenerate for N < 2")
    r = quartic_factor(N)
    upper = negativity_bound(N)
    report = Report("negativity", {"N": N, "grid": grid})
    zeros = count_roots(r, 0, upper) + (1 if r(Fraction(0)) == 0 else 0)
    report.check(zeros == 0, f"N={N}: {zeros} zero(s) of the quartic in [0, {float(upper):.6g}]")
    if grid:
        for i in range(grid + 1):
            z = upper * i / grid
            if r(z) >= 0:
                report.fail(f"N={N}: quartic is not negative at z={fmt(z)}")
                break
    roots = isolate_positive_roots(r)
    z0_lo = roots[0].lo if roots else None
    above = z0_lo is not None and exceeds_khinchin_radius(z0_lo, N)
    report.check(above, f"N={N}: smallest zero not certified above the Khinchin radius")
    report.rows.append(
        {
            "N": N,
            "z0_lo": fmt(z0_lo) if z0_lo is not None else "",
            "z0_hi": fmt(roots[0].hi) if roots else "",
            "khinchin": str(khinchin_constant(N, 20)),
            "certified": str(report.passed).lower(),
        }
    )
    return report


def btilde_ratio(N: int, n: int = 24) -> float:
    """``btilde_(n+1) / btilde_n`` from the series route."""
    values = sequence_by_series("btilde", n + 1, N)
    return float(values[n] / values[n - 1])


# the elementary product bound ------------------------------------------------------


class BoundCheck(NamedTuple):
    lhs: Fraction
    rhs: Fraction
    holds: bool


def elementary_bound(j: int, p: int, N: int) -> BoundCheck:
    """``1 - prod_{i<p} (1 - j/(N-i))`` against ``p j / (N - p + 1)``, compared exactly."""
    if not (1 <= j <= N and 1 <= p <= N):
        raise DomainError(f"need 1 <= j, p <= N, got j={j}, p={p}, N={N}")
    lhs = 1 - prod((1 - Fraction(j, N - i) for i in range(p)), start=Fraction(1))
    rhs = Fraction(p * j, N - p + 1)
    return BoundCheck(lhs, rhs, lhs <= rhs)


# symmetrization over index functions ------------------------------------------------


def falling(N: int, k: int) -> int:
    return math.perm(N, k) if k <= N else 0


@dataclass(frozen=True)
class IndexDistribution:
    """Blockwise-uniform distribution of ``h : [p] -> [N]``.

    Each block of ``grouping`` (a partition of ``{1..p}``) receives an
    independent uniformly random injective labelling; the weight of ``h``
    depends only on its kernel.  A single block gives the uniform law on
    injective maps.
    """

    N: int
    grouping: Partition

    @property
    def p(self) -> int:
        return self.grouping.n

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.grouping.blocks)

    def class_weight(self, kappa: Partition) -> Fraction:
        """Weight of each ``h`` with ``ker h = kappa``."""
        if meet(kappa, self.grouping) != Partition.bottom(self.p):
            return Fraction(0)
        return Fraction(1, prod(falling(self.N, s) for s in self.block_sizes))

    def class_count(self, kappa: Partition) -> int:
        """Number of ``h : [p] -> [N]`` with kernel ``kappa``."""
        return falling(self.N, kappa.size)

    def weight(self, h) -> Fraction:
        if len(h) != self.p or not all(1 <= v <= self.N for v in h):
            raise DomainError(f"{h} is not a map [{self.p}] -> [{self.N}]")
        return self.class_weight(kernel(h))

    def total(self) -> Fraction:
        return sum(
            (self.class_count(k) * self.class_weight(k) for k in enumerate_partitions(self.p)),
            Fraction(0),
        )

    def items(self, limit: int = 10**6):
        """Materialize ``(h, weight)`` over the support (at most ``limit`` maps scanned)."""
        if self.N**self.p > limit:
            raise SizeLimitError(f"{self.N}^{self.p} index functions exceed the limit {limit}")
        for h in itertools.product(range(1, self.N + 1), repeat=self.p):
            w = self.class_weight(kernel(h))
            if w:
                yield h, w


def _check_fixture(pi: Partition, rho: Partition, N: int) -> Partition:
    if pi.n != rho.n:
        raise DomainError("pi and rho must partition the same set")
    if not is_noncrossing(rho):
        raise DomainError(f"rho = {rho} must be noncrossing")
    if not leq(pi, rho):
        raise DomainError(f"rho = {rho} must lie above pi = {pi}")
    if N < pi.size:
        raise DomainError(f"need N >= p = {pi.size}, got N = {N}")
    return quotient(rho, pi)


def psiN_distributions(pi: Partition, rho: Partition, N: int) -> tuple[IndexDistribution, IndexDistribution]:
    """``(d1, d2)``: full symmetrization over injective maps, and blockwise along ``rho/pi``."""
    rho_t = _check_fixture(pi, rho, N)
    return IndexDistribution(N, Partition.top(pi.size)), IndexDistribution(N, rho_t)


class TVCheck(NamedTuple):
    tv: Fraction
    bound: Fraction
    holds: bool


def total_variation(d1: IndexDistribution, d2: IndexDistribution) -> Fraction:
    """``sum_h |d1(h) - d2(h)|`` grouped by kernel class."""
    return sum(
        (
            d1.class_count(k) * abs(d1.class_weight(k) - d2.class_weight(k))
            for k in enumerate_partitions(d1.p)
        ),
        Fraction(0),
    )


def definetti_tv(pi: Partition, rho: Partition, N: int) -> TVCheck:
    d1, d2 = psiN_distributions(pi, rho, N)
    p, r = pi.size, rho.size
    tv = total_variation(d1, d2)
    bound = Fraction((2 * r - 1) * p * p, N - p + 1)
    return TVCheck(tv, bound, tv <= bound)


def definetti_fixtures(max_n: int = 5):
    """Every ``(pi, rho)`` with ``pi`` in ``Pi_n`` (``n <= max_n``) and noncrossing ``rho >= pi``."""
    for n in range(1, max_n + 1):
        for pi in enumerate_partitions(n):
            for rho in enumerate_partitions(n, NONCROSSING):
                if leq(pi, rho):
                    yield pi, rho
