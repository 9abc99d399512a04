"""Möbius functions of the two partition lattices and the reduced incidence algebra.

A multiplicative function on intervals of NC is fixed by its characteristic
sequence ``f_1, f_2, ...``; on ``[0, pi]`` it evaluates to the product of
``f_|B|`` over the blocks ``B`` of ``pi``.  Convolution is

    (f * g)_n = sum over pi in NC_n of f_pi * g_K(pi)

with ``K`` the Kreweras complement.  Everything is exact rational arithmetic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
import itertools
from typing import Callable, Iterable, Iterator, Sequence

from .errors import DomainError, OrderError
from .partitions import (
    ALL,
    NONCROSSING,
    Partition,
    enumerate_partitions,
    is_noncrossing,
    kernel,
    kreweras,
    leq,
    lower_interval,
    normalize_family,
    quotient,
    restrict,
)
from .rational import fmt, to_fraction


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


@dataclass(frozen=True)
class MultiplicativeFunction:
    """Characteristic sequence ``(f_1, ..., f_M)``; stored 0-based, indexed 1-based."""

    characteristic: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "characteristic", tuple(to_fraction(v) for v in self.characteristic)
        )

    @property
    def order(self) -> int:
        return len(self.characteristic)

    def __getitem__(self, n: int) -> Fraction:
        if n < 1:
            raise DomainError(f"characteristic sequences start at n=1, got {n}")
        if n > self.order:
            raise OrderError(f"f_{n} requested but the characteristic is known to order {self.order}")
        return self.characteristic[n - 1]

    def truncate(self, order: int) -> "MultiplicativeFunction":
        if order > self.order:
            raise OrderError(f"cannot extend order {self.order} to {order}")
        return MultiplicativeFunction(self.characteristic[:order])

    def scaled(self, c) -> "MultiplicativeFunction":
        """The function with characteristic ``c * f_n`` (so ``(c f)_pi = c^|pi| f_pi``)."""
        c = to_fraction(c)
        return MultiplicativeFunction(tuple(c * v for v in self.characteristic))

    def to_json(self) -> dict:
        return {"order": self.order, "characteristic": [fmt(v) for v in self.characteristic]}

    @classmethod
    def from_json(cls, data: dict) -> "MultiplicativeFunction":
        values = data["characteristic"]
        if "order" in data and int(data["order"]) != len(values):
            raise DomainError(f"order {data['order']} disagrees with {len(values)} values")
        return cls(tuple(values))


def _from_rule(rule: Callable[[int], int], order: int) -> MultiplicativeFunction:
    return MultiplicativeFunction(tuple(Fraction(rule(n)) for n in range(1, order + 1)))


def zeta(order: int) -> MultiplicativeFunction:
    return _from_rule(lambda n: 1, order)


def mobius_function(order: int) -> MultiplicativeFunction:
    """Signed Catalan numbers ``(-1)^(n-1) C_(n-1)``."""
    return _from_rule(lambda n: (-1) ** (n - 1) * catalan(n - 1), order)


def abs_mobius(order: int) -> MultiplicativeFunction:
    return _from_rule(lambda n: catalan(n - 1), order)


def delta(order: int) -> MultiplicativeFunction:
    return _from_rule(lambda n: 1 if n == 1 else 0, order)


def zeta_without_singletons(order: int) -> MultiplicativeFunction:
    """``0, 1, 1, 1, ...``: the zeta function of noncrossing partitions without singletons."""
    return _from_rule(lambda n: 0 if n == 1 else 1, order)


def mult_eval(f: MultiplicativeFunction, pi: Partition) -> Fraction:
    """``f_pi``: product of ``f_|B|`` over the blocks of ``pi``."""
    return prod((f[len(b)] for b in pi.blocks), start=Fraction(1))


# Möbius functions ---------------------------------------------------------


@lru_cache(maxsize=None)
def _mu_full_nc(k: int) -> int:
    return (-1) ** (k - 1) * catalan(k - 1)


@lru_cache(maxsize=1 << 16)
def mobius_nc(sigma: Partition, pi: Partition) -> int:
    """Möbius function of ``NC_n`` on ``[sigma, pi]``.

    ``[sigma, pi]`` splits as a product over the blocks ``B`` of ``pi`` of the
    upper intervals ``[sigma|B, 1]``; each of those is dual to ``[0, K(sigma|B)]``,
    which in turn is a product of full lattices ``NC_p``, one per block.
    """
    if not (is_noncrossing(sigma) and is_noncrossing(pi)):
        raise DomainError("mobius_nc needs noncrossing arguments")
    if not leq(sigma, pi):
        raise DomainError(f"{sigma} is not below {pi}")
    result = 1
    for block in pi.blocks:
        for kb in kreweras(restrict(sigma, block)).blocks:
            result *= _mu_full_nc(len(kb))
    return result


@lru_cache(maxsize=1 << 16)
def mobius_set(sigma: Partition, pi: Partition) -> int:
    """Möbius function of the full partition lattice on ``[sigma, pi]``.

    ``[sigma, pi]`` is a product of full lattices ``Pi_m`` (``m`` = number of
    ``sigma``-blocks inside a ``pi``-block), each with ``mu = (-1)^(m-1) (m-1)!``.
    """
    if not leq(sigma, pi):
        raise DomainError(f"{sigma} is not below {pi}")
    counts = Counter(quotient(pi, sigma).rgs)
    return prod((-1) ** (m - 1) * factorial(m - 1) for m in counts.values())


def mobius(sigma: Partition, pi: Partition, lattice: str) -> int:
    if normalize_family(lattice) == NONCROSSING:
        return mobius_nc(sigma, pi)
    return mobius_set(sigma, pi)


@lru_cache(maxsize=None)
def _mu_to_top(part: Partition, family: str) -> int:
    return mobius(part, Partition.top(part.n), family)


def lower_interval_mobius(pi: Partition, lattice: str) -> Iterator[tuple[Partition, int]]:
    """Pairs ``(sigma, mu(sigma, pi))`` for all ``sigma <= pi`` in the lattice.

    Both lattices factor ``[0, pi]`` over the blocks of ``pi``, so ``mu`` is the
    product of the full-lattice values of the pieces chosen inside each block.
    """
    family = normalize_family(lattice)
    if family == NONCROSSING and not is_noncrossing(pi):
        raise DomainError(f"{pi} is crossing; its noncrossing interval does not factor")
    blocks = pi.blocks
    choices = [
        [(part, _mu_to_top(part, family)) for part in enumerate_partitions(len(b), family, limit=max(len(b), 14))]
        for b in blocks
    ]
    labels = [0] * pi.n
    for combo in itertools.product(*choices):
        offset = 0
        mu = 1
        for block, (part, m) in zip(blocks, combo):
            for e, lab in zip(block, part.rgs):
                labels[e - 1] = offset + lab
            offset += part.size
            mu *= m
        yield kernel(labels), mu


def poset_mobius(elements: Sequence, le: Callable[[object, object], bool], bottom) -> dict:
    """Generic recursion ``mu(b, b) = 1``, ``mu(b, x) = -sum_{b <= y < x} mu(b, y)``.

    Returns ``{x: mu(bottom, x)}`` for every ``x >= bottom`` in ``elements``.
    """
    up = [x for x in elements if le(bottom, x)]
    # a linear extension: sort by the number of elements below
    below = {x: [y for y in up if y != x and le(y, x)] for x in up}
    up.sort(key=lambda x: len(below[x]))
    mu: dict = {}
    for x in up:
        mu[x] = 1 if x == bottom else -sum(mu[y] for y in below[x])
    return mu


def mobius_recursive(sigma: Partition, pi: Partition, lattice: str) -> int:
    """Möbius value from the defining recursion over the explicit interval."""
    family = normalize_family(lattice)
    if not leq(sigma, pi):
        raise DomainError(f"{sigma} is not below {pi}")
    interval = [t for t in lower_interval(pi, family) if leq(sigma, t)]
    return poset_mobius(interval, leq, sigma)[pi]


# convolution ---------------------------------------------------------------


def _profile(pi: Partition) -> tuple[int, ...]:
    return tuple(sorted(len(b) for b in pi.blocks))


@lru_cache(maxsize=None)
def _nc_profile_pairs(n: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]:
    pairs = Counter(
        (_profile(pi), _profile(kreweras(pi))) for pi in enumerate_partitions(n, NONCROSSING)
    )
    return tuple((a, b, c) for (a, b), c in sorted(pairs.items()))


def _eval_profile(f: MultiplicativeFunction, profile: Iterable[int]) -> Fraction:
    return prod((f[p] for p in profile), start=Fraction(1))


def convolve_nc(f: MultiplicativeFunction, g: MultiplicativeFunction, order: int) -> MultiplicativeFunction:
    """Characteristic of ``f ⊠ g`` to ``order`` by summing over ``NC_n``.

    Summands only depend on the block-size profiles of ``pi`` and ``K(pi)``,
    so the lattice sum is grouped by profile pairs (cached per ``n``).
    """
    if order > min(f.order, g.order):
        raise OrderError(f"order {order} exceeds the known characteristics ({f.order}, {g.order})")
    out = []
    for n in range(1, order + 1):
        total = Fraction(0)
        for pa, pb, count in _nc_profile_pairs(n):
            total += count * _eval_profile(f, pa) * _eval_profile(g, pb)
        out.append(total)
    return MultiplicativeFunction(tuple(out))


def convolve_nc_direct(f: MultiplicativeFunction, g: MultiplicativeFunction, order: int) -> MultiplicativeFunction:
    """Same as :func:`convolve_nc` without profile grouping (one term per partition)."""
    if order > min(f.order, g.order):
        raise OrderError(f"order {order} exceeds the known characteristics ({f.order}, {g.order})")
    return MultiplicativeFunction(
        tuple(
            sum(
                (mult_eval(f, pi) * mult_eval(g, kreweras(pi)) for pi in enumerate_partitions(n, NONCROSSING)),
                Fraction(0),
            )
            for n in range(1, order + 1)
        )
    )


__all__ = [
    "ALL",
    "NONCROSSING",
    "MultiplicativeFunction",
    "abs_mobius",
    "catalan",
    "convolve_nc",
    "convolve_nc_direct",
    "delta",
    "lower_interval_mobius",
    "mobius",
    "mobius_function",
    "mobius_nc",
    "mobius_recursive",
    "mobius_set",
    "mult_eval",
    "poset_mobius",
    "zeta",
    "zeta_without_singletons",
]
