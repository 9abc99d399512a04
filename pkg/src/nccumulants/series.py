"""Truncated power series and polynomials over the rationals.

Series carry their order ``M`` (coefficients ``c_0..c_M`` are exact); binary
operations truncate to the smaller order.  Compositional inverse, square
root, the zeta relation and implicit equations are all solved by Newton
iteration with precision doubling.  Polynomials support exact division,
Sturm sequences and Sylvester resultants with polynomial coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

from .errors import DomainError, OrderError, SolverError
from .incidence import MultiplicativeFunction
from .rational import fmt, to_fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


# power series -------------------------------------------------------------


@dataclass(frozen=True)
class PowerSeries:
    """``c_0 + c_1 z + ... + c_M z^M + O(z^(M+1))``."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(to_fraction(c) for c in self.coeffs)
        if not coeffs:
            raise OrderError("a power series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, order: int | None = None) -> "PowerSeries":
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        coeffs = (coeffs + [0] * (order + 1))[: order + 1]
        return cls(tuple(coeffs))

    @classmethod
    def constant(cls, c, order: int) -> "PowerSeries":
        return cls.from_coeffs([c], order)

    @classmethod
    def z(cls, order: int) -> "PowerSeries":
        return cls.from_coeffs([0, 1], order)

    @classmethod
    def from_characteristic(cls, f: MultiplicativeFunction, order: int | None = None) -> "PowerSeries":
        """The characteristic series ``sum f_n z^n``."""
        order = f.order if order is None else order
        if order > f.order:
            raise OrderError(f"characteristic known to order {f.order}, asked for {order}")
        return cls.from_coeffs([0, *f.characteristic[:order]], order)

    def characteristic(self) -> MultiplicativeFunction:
        return MultiplicativeFunction(self.coeffs[1:])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        if k > self.order:
            raise OrderError(f"coefficient {k} beyond order {self.order}")
        return self.coeffs[k]

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise OrderError(f"cannot raise order {self.order} to {order}")
        return PowerSeries(self.coeffs[: order + 1])

    def pad(self, order: int) -> "PowerSeries":
        """Re-declare the order, filling with zeros or truncating (caller vouches for validity)."""
        return PowerSeries.from_coeffs(self.coeffs, order)

    def _coerce(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries.constant(to_fraction(other), self.order)

    def __add__(self, other) -> "PowerSeries":
        other = self._coerce(other)
        m = min(self.order, other.order)
        return PowerSeries(tuple(a + b for a, b in zip(self.coeffs[: m + 1], other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> "PowerSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PowerSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            c = to_fraction(other)
            return PowerSeries(tuple(c * a for a in self.coeffs))
        m = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        nz_a = [(i, x) for i, x in enumerate(a[: m + 1]) if x]
        out = [_ZERO] * (m + 1)
        for i, x in nz_a:
            for j in range(m + 1 - i):
                y = b[j]
                if y:
                    out[i + j] += x * y
        return PowerSeries(tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return self * other.reciprocal()
        return self * (_ONE / to_fraction(other))

    def __pow__(self, k: int) -> "PowerSeries":
        out = PowerSeries.constant(1, self.order)
        for _ in range(k):
            out = out * self
        return out

    def reciprocal(self) -> "PowerSeries":
        a = self.coeffs
        if a[0] == 0:
            raise DomainError("series with zero constant term has no reciprocal")
        inv0 = _ONE / a[0]
        b = [inv0]
        for n in range(1, self.order + 1):
            b.append(-inv0 * sum((a[k] * b[n - k] for k in range(1, n + 1) if a[k]), _ZERO))
        return PowerSeries(tuple(b))

    def derivative(self) -> "PowerSeries":
        if self.order == 0:
            raise OrderError("derivative of an order-0 series is unknown")
        return PowerSeries(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def shift_down(self) -> "PowerSeries":
        """Divide by ``z``; the order drops by one."""
        if self.coeffs[0] != 0:
            raise DomainError("constant term must vanish to divide by z")
        if self.order == 0:
            raise OrderError("nothing left after dividing an order-0 series by z")
        return PowerSeries(self.coeffs[1:])

    def shift_up(self, k: int = 1) -> "PowerSeries":
        """Multiply by ``z^k``; the order rises by ``k``."""
        return PowerSeries((_ZERO,) * k + self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [fmt(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "PowerSeries":
        coeffs = data["coeffs"]
        order = int(data.get("order", len(coeffs) - 1))
        if order != len(coeffs) - 1:
            raise DomainError(f"order {order} disagrees with {len(coeffs)} coefficients")
        return cls(tuple(coeffs))


def ps_compose(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """``f(g(z))`` to order ``min(f.order, g.order)``; ``g`` must have no constant term."""
    if g.coeffs[0] != 0:
        raise DomainError("composition requires g(0) = 0")
    m = min(f.order, g.order)
    g = g.truncate(m)
    out = PowerSeries.constant(f.coeffs[m], m)
    for k in range(m - 1, -1, -1):
        out = out * g + f.coeffs[k]
    return out


def _newton(
    residual: Callable[[PowerSeries, int], PowerSeries],
    slope: Callable[[PowerSeries, int], PowerSeries],
    start: PowerSeries,
    correct_through: int,
    order: int,
) -> PowerSeries:
    """Newton iteration ``x <- x - residual/slope`` with precision doubling.

    ``start`` must be correct through ``z^correct_through``; each step doubles
    the number of correct coefficients.  The result is checked exactly.
    """
    x = start.pad(max(correct_through, 0))
    p = correct_through
    while p < order:
        p = min(2 * p + 1, order)
        x = x.pad(p)
        d = slope(x, p)
        if d.coeffs[0] == 0:
            raise SolverError("degenerate Newton step: derivative vanishes at the origin")
        x = x - residual(x, p) * d.reciprocal()
    x = x.pad(order)
    if not residual(x, order).is_zero():
        raise SolverError(f"no series solution at order {order}")
    return x


def ps_compositional_inverse(f: PowerSeries) -> PowerSeries:
    """``h`` with ``f(h(z)) = z`` to ``f.order``."""
    if f.order < 1 or f.coeffs[0] != 0 or f.coeffs[1] == 0:
        raise DomainError("compositional inverse needs f(0) = 0 and f'(0) != 0")
    m = f.order
    df = f.derivative().pad(m)  # high coefficient is never used below order m

    def residual(h, p):
        return ps_compose(f.truncate(p), h) - PowerSeries.z(p)

    def slope(h, p):
        return ps_compose(df.truncate(p), h)

    start = PowerSeries.from_coeffs([0, _ONE / f.coeffs[1]], 1)
    return _newton(residual, slope, start, 1, m)


def lagrange_inverse(f: PowerSeries) -> PowerSeries:
    """Compositional inverse via Lagrange inversion ``[z^n] h = [w^(n-1)] (w/f)^n / n``."""
    if f.order < 1 or f.coeffs[0] != 0 or f.coeffs[1] == 0:
        raise DomainError("compositional inverse needs f(0) = 0 and f'(0) != 0")
    m = f.order
    ratio = f.shift_down().reciprocal()  # w / f(w), known to order m-1
    coeffs = [_ZERO]
    power = PowerSeries.constant(1, m - 1)
    for n in range(1, m + 1):
        power = power * ratio
        coeffs.append(power.coeffs[n - 1] / n)
    return PowerSeries(tuple(coeffs))


def ps_sqrt(f: PowerSeries) -> PowerSeries:
    """Square root with constant term 1 (requires ``f(0) = 1``)."""
    if f.coeffs[0] != 1:
        raise DomainError("ps_sqrt picks the branch s(0) = 1 and needs f(0) = 1")

    def residual(s, p):
        return s * s - f.truncate(p)

    def slope(s, p):
        return s * 2

    return _newton(residual, slope, PowerSeries.constant(1, 0), 0, f.order)


def fourier(f: MultiplicativeFunction, order: int) -> PowerSeries:
    """``F_f(z) = phi_f^<-1>(z) / z`` to ``order`` (needs ``f_1 = 1`` and ``f`` to ``order + 1``)."""
    if f.order < order + 1:
        raise OrderError(f"fourier to order {order} needs the characteristic to order {order + 1}")
    if f[1] != 1:
        raise DomainError(f"normalization error: f_1 = {f[1]}, expected 1")
    phi = PowerSeries.from_characteristic(f, order + 1)
    return ps_compositional_inverse(phi).shift_down()


def from_fourier(F: PowerSeries) -> MultiplicativeFunction:
    """Inverse of :func:`fourier`: characteristic to order ``F.order + 1``."""
    if F.coeffs[0] != 1:
        raise DomainError("a Fourier transform of a normalized function starts with 1")
    return ps_compositional_inverse(F.shift_up()).characteristic()


def solve_zeta_relation(phi_g: PowerSeries) -> PowerSeries:
    """``phi_f`` solving ``phi_f(z (1 + phi_g(z))) = phi_g(z)``, i.e. ``f = g ⊠ mu``."""
    if phi_g.coeffs[0] != 0:
        raise DomainError("phi_g must have zero constant term")
    m = phi_g.order
    w = (PowerSeries.constant(1, m) + phi_g).shift_up().truncate(m)
    return ps_compose(phi_g, ps_compositional_inverse(w))


def convolve_zeta(phi_f: PowerSeries) -> PowerSeries:
    """``phi_g`` for ``g = f ⊠ zeta``: the series solution of ``x = phi_f(z (1 + x))``."""
    if phi_f.coeffs[0] != 0:
        raise DomainError("phi_f must have zero constant term")
    m = phi_f.order
    dphi = phi_f.derivative().pad(m)

    def arg(x, p):
        return (PowerSeries.constant(1, p) + x).shift_up().truncate(p)

    def residual(x, p):
        return ps_compose(phi_f.truncate(p), arg(x, p)) - x

    def slope(x, p):
        return ps_compose(dphi.truncate(p), arg(x, p)).shift_up().truncate(p) - 1

    return _newton(residual, slope, PowerSeries.constant(0, 0), 0, m)


# polynomials --------------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Dense univariate polynomial, lowest degree first, trailing zeros stripped."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        c = [to_fraction(v) for v in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        """Degree, ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def _coerce(self, other) -> "Polynomial":
        return other if isinstance(other, Polynomial) else Polynomial.constant(to_fraction(other))

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Polynomial(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-x for x in self.coeffs))

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [_ZERO] * max(len(rem) - dq, 0)
        lead = other.lead
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lead
            quot[k] = c
            if c:
                for j, y in enumerate(other.coeffs):
                    rem[k + j] -= c * y
        return Polynomial(tuple(quot)), Polynomial(tuple(rem[:dq]))

    def __floordiv__(self, other) -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Polynomial":
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise DomainError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "Polynomial") -> bool:
        """True iff ``self`` divides ``other``."""
        return (other % self).is_zero()

    def __call__(self, x):
        acc = x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self * (_ONE / self.lead)

    def to_series(self, order: int) -> PowerSeries:
        return PowerSeries.from_coeffs(self.coeffs or (0,), order)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{fmt(c)}" + ("" if k == 0 else "*z" if k == 1 else f"*z^{k}"))
        return " + ".join(terms)

    def to_json(self) -> dict:
        return {"var": "z", "coeffs": [fmt(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "Polynomial":
        return cls(tuple(data["coeffs"]))


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


@dataclass(frozen=True)
class BivariatePolynomial:
    """``sum_j c_j(z) x^j`` with ``coeffs[j] = c_j`` a :class:`Polynomial` in ``z``."""

    coeffs: tuple[Polynomial, ...]

    def __post_init__(self) -> None:
        c = [p if isinstance(p, Polynomial) else Polynomial(tuple(p)) for p in self.coeffs]
        while c and c[-1].is_zero():
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def x(cls) -> "BivariatePolynomial":
        return cls((Polynomial(), Polynomial.constant(1)))

    @classmethod
    def z(cls) -> "BivariatePolynomial":
        return cls((Polynomial.monomial(1),))

    @classmethod
    def constant(cls, c) -> "BivariatePolynomial":
        return cls((Polynomial.constant(c),))

    @property
    def degree_x(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def _coerce(self, other) -> "BivariatePolynomial":
        if isinstance(other, BivariatePolynomial):
            return other
        if isinstance(other, Polynomial):
            return BivariatePolynomial((other,))
        return BivariatePolynomial.constant(to_fraction(other))

    def __add__(self, other) -> "BivariatePolynomial":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return BivariatePolynomial(tuple(p + (b[i] if i < len(b) else Polynomial()) for i, p in enumerate(a)))

    __radd__ = __add__

    def __neg__(self) -> "BivariatePolynomial":
        return BivariatePolynomial(tuple(-p for p in self.coeffs))

    def __sub__(self, other) -> "BivariatePolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "BivariatePolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "BivariatePolynomial":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return BivariatePolynomial(())
        out = [Polynomial()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, p in enumerate(self.coeffs):
            for j, q in enumerate(other.coeffs):
                out[i + j] = out[i + j] + p * q
        return BivariatePolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "BivariatePolynomial":
        out = BivariatePolynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def derivative_x(self) -> "BivariatePolynomial":
        return BivariatePolynomial(tuple(p * k for k, p in enumerate(self.coeffs) if k))

    def derivative_z(self) -> "BivariatePolynomial":
        return BivariatePolynomial(tuple(p.derivative() for p in self.coeffs))

    def eval_series(self, x: PowerSeries, order: int) -> PowerSeries:
        """Substitute the series ``x(z)`` (Horner in ``x``)."""
        x = x.pad(order) if x.order < order else x.truncate(order)
        acc = PowerSeries.constant(0, order)
        for p in reversed(self.coeffs):
            acc = acc * x + p.to_series(order)
        return acc

    def __call__(self, x, z):
        acc = x * 0
        for p in reversed(self.coeffs):
            acc = acc * x + p(z)
        return acc

    def to_json(self) -> dict:
        return {"vars": ["x", "z"], "coeffs": [[fmt(c) for c in p.coeffs] for p in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "BivariatePolynomial":
        return cls(tuple(Polynomial(tuple(row)) for row in data["coeffs"]))


def ps_implicit_solve(g: BivariatePolynomial, order: int) -> PowerSeries:
    """The series ``x(z)`` with ``x(0) = 0`` and ``g(x(z), z) = 0`` to ``order``."""
    if g.is_zero() or g(_ZERO, _ZERO) != 0:
        raise SolverError("ps_implicit_solve needs g(0, 0) = 0")
    gx = g.derivative_x()
    if gx(_ZERO, _ZERO) == 0:
        raise SolverError("degenerate Jacobian: dg/dx vanishes at (0, 0)")
    return _newton(
        lambda x, p: g.eval_series(x, p),
        lambda x, p: gx.eval_series(x, p),
        PowerSeries.constant(0, 0),
        0,
        order,
    )


def _as_bivariate(p) -> BivariatePolynomial:
    if isinstance(p, BivariatePolynomial):
        return p
    if isinstance(p, Polynomial):
        # univariate input is read as a polynomial in x with constant coefficients
        return BivariatePolynomial(tuple(Polynomial.constant(c) for c in p.coeffs))
    raise DomainError(f"cannot take a resultant of {type(p).__name__}")


def sylvester_matrix(p: BivariatePolynomial, q: BivariatePolynomial) -> list[list[Polynomial]]:
    m, n = p.degree_x, q.degree_x
    size = m + n
    rows = []
    hp = list(reversed(p.coeffs))
    hq = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([Polynomial()] * i + hp + [Polynomial()] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Polynomial()] * i + hq + [Polynomial()] * (size - n - 1 - i))
    return rows


def bareiss_determinant(matrix: list[list[Polynomial]]) -> Polynomial:
    """Fraction-free elimination over ``Q[z]``; every division is exact."""
    a = [list(row) for row in matrix]
    size = len(a)
    if size == 0:
        return Polynomial.constant(1)
    sign = 1
    prev = Polynomial.constant(1)
    for k in range(size - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, size) if not a[i][k].is_zero()), None)
            if swap is None:
                return Polynomial()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
            a[i][k] = Polynomial()
        prev = a[k][k]
    return a[-1][-1] * sign


def resultant(p, q) -> Polynomial:
    """``Res_x(p, q)`` as a polynomial in ``z`` (Sylvester determinant)."""
    p, q = _as_bivariate(p), _as_bivariate(q)
    if p.is_zero() or q.is_zero():
        raise DomainError("resultant of a zero polynomial")
    if p.degree_x == 0 and q.degree_x == 0:
        return Polynomial.constant(1)
    return bareiss_determinant(sylvester_matrix(p, q))


# real roots -----------------------------------------------------------------


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _sign_changes(seq: list[Polynomial], x: Fraction) -> int:
    signs = [s for s in (q(x) for q in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(p: Polynomial, lo, hi, seq: list[Polynomial] | None = None) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``."""
    if p.is_zero():
        raise DomainError("the zero polynomial has no isolated roots")
    seq = seq or sturm_sequence(squarefree_part(p))
    return _sign_changes(seq, Fraction(lo)) - _sign_changes(seq, Fraction(hi))


def squarefree_part(p: Polynomial) -> Polynomial:
    if p.degree < 1:
        return p
    return p.exact_div(poly_gcd(p, p.derivative()))


def cauchy_bound(p: Polynomial) -> Fraction:
    return 1 + max((abs(c / p.lead) for c in p.coeffs[:-1]), default=_ZERO)


class RootInterval(NamedTuple):
    lo: Fraction
    hi: Fraction
    approx: float
    dominant: bool

    @property
    def exact(self) -> bool:
        return self.lo == self.hi


def isolate_positive_roots(r: Polynomial, precision=Fraction(1, 10**12)) -> list[RootInterval]:
    """Every root in ``(0, inf)`` inside an exact interval of width ``<= precision``.

    Bisection driven by Sturm counts; all decisions are exact rational sign
    evaluations.  Sorted ascending; the first root is flagged ``dominant``.
    """
    if r.is_zero():
        raise DomainError("the zero polynomial has no isolated roots")
    precision = to_fraction(precision) if not isinstance(precision, float) else Fraction(precision)
    if precision <= 0:
        raise DomainError("precision must be positive")
    sq = squarefree_part(r)
    if sq.degree < 1:
        return []
    seq = sturm_sequence(sq)
    isolated = []
    stack = [(_ZERO, cauchy_bound(sq))]
    while stack:
        lo, hi = stack.pop()
        k = count_roots(sq, lo, hi, seq)
        if k == 0:
            continue
        if k == 1:
            isolated.append(_refine(sq, seq, lo, hi, precision))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    isolated.sort()
    return [
        RootInterval(lo, hi, float((lo + hi) / 2), i == 0) for i, (lo, hi) in enumerate(isolated)
    ]


def _refine(p: Polynomial, seq, lo: Fraction, hi: Fraction, precision: Fraction) -> tuple[Fraction, Fraction]:
    if p(hi) == 0:
        return hi, hi
    while hi - lo > precision:
        mid = (lo + hi) / 2
        if p(mid) == 0:
            return mid, mid
        if count_roots(p, lo, mid, seq) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi
