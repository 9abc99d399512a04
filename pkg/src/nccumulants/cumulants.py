"""Moment/cumulant transforms, the product formula and cumulants of cumulants.

Cumulants are Möbius inversions of partitioned moments,

    K_pi = sum over sigma <= pi of phi_sigma * mu(sigma, pi),

taken over the set-partition lattice (classical) or over noncrossing
partitions (free).  The lattice is always an explicit argument.

Identities between such sums are checked coefficient-wise on
:class:`FormalCombo` values, whose indeterminates carry no relations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Iterable, Sequence

from .errors import DomainError, MissingDataError, SizeLimitError
from .incidence import lower_interval_mobius, mobius
from .partitions import (
    ALL,
    NONCROSSING,
    Partition,
    connected_neighbours,
    enumerate_partitions,
    induced_grouping,
    is_noncrossing,
    join,
    lattice_label,
    lower_interval,
    merge_neighbours,
    normalize_family,
    pair_partition,
)
from .rational import fmt, to_fraction
from .report import Report


# formal linear combinations -------------------------------------------------


def _key_str(key) -> str:
    if isinstance(key, Partition):
        return f"phi[{key}]"
    if isinstance(key, tuple) and len(key) == 2:
        return f"u[{key[0]};{key[1]}]"
    return str(key)


class FormalCombo:
    """Finite rational linear combination of symbols; zero coefficients are dropped.

    Symbols are partitions (``phi[tau]``) or pairs ``(rho, tau)`` (``u[rho;tau]``).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None) -> None:
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def symbol(cls, key, coeff=1) -> "FormalCombo":
        return cls({key: coeff})

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[object, object]]) -> "FormalCombo":
        """Sum of ``coeff * key`` over ``(key, coeff)`` pairs."""
        acc: dict = {}
        for key, coeff in pairs:
            acc[key] = acc.get(key, 0) + coeff
        return cls(acc)

    def __add__(self, other) -> "FormalCombo":
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        if not isinstance(other, FormalCombo):
            return NotImplemented
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return FormalCombo(acc)

    __radd__ = __add__

    def __neg__(self) -> "FormalCombo":
        return FormalCombo({k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "FormalCombo":
        return self + (-other)

    def __mul__(self, c) -> "FormalCombo":
        if isinstance(c, FormalCombo):
            return NotImplemented
        c = to_fraction(c)
        return FormalCombo({k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        return isinstance(other, FormalCombo) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def nonzero_terms(self) -> list[list[str]]:
        """``[[symbol, coefficient], ...]`` sorted by symbol text."""
        return sorted([_key_str(k), fmt(v)] for k, v in self.terms.items())

    def __repr__(self) -> str:
        if not self.terms:
            return "FormalCombo(0)"
        return "FormalCombo(" + " + ".join(f"{c}*{s}" for s, c in self.nonzero_terms()) + ")"


def _linear_sum(terms: Iterable[tuple[int, object]]):
    """``sum coeff * value`` for rational or formal values."""
    total = None
    for coeff, value in terms:
        if coeff == 0:
            continue
        term = value if coeff == 1 else -value if coeff == -1 else value * coeff
        total = term if total is None else total + term
    return Fraction(0) if total is None else total


# moment and cumulant assignments --------------------------------------------


class MomentAssignment:
    """Partitioned moments ``phi_pi`` for partitions of ``{1..k}``, ``k <= n``.

    Sequence mode derives ``phi_pi = prod m_|B|`` from ``m_1..m_n``; table mode
    stores values per partition (rationals or :class:`FormalCombo`).
    """

    label = "moments"

    def __init__(self, n: int, *, sequence: Sequence | None = None, table: dict | None = None) -> None:
        if (sequence is None) == (table is None):
            raise DomainError("give exactly one of sequence= or table=")
        self.n = n
        if sequence is not None:
            seq = tuple(to_fraction(v) for v in sequence)
            if len(seq) != n:
                raise DomainError(f"expected {n} sequence values, got {len(seq)}")
            self.sequence = seq
            self.table = None
            self._by_profile: dict = {}
        else:
            self.sequence = None
            self.table = {
                p: (v if isinstance(v, FormalCombo) else to_fraction(v)) for p, v in table.items()
            }

    @property
    def mode(self) -> str:
        return "sequence" if self.sequence is not None else "table"

    @classmethod
    def from_sequence(cls, values: Sequence) -> "MomentAssignment":
        return cls(len(values), sequence=values)

    @classmethod
    def from_table(cls, table: dict, n: int | None = None) -> "MomentAssignment":
        if n is None:
            n = max((p.n for p in table), default=0)
        return cls(n, table=table)

    def __getitem__(self, pi: Partition):
        if pi.n > self.n:
            raise MissingDataError(f"{self.label} only given up to n={self.n}, asked for {pi}")
        if self.sequence is not None:
            profile = tuple(sorted(len(b) for b in pi.blocks))
            value = self._by_profile.get(profile)
            if value is None:
                value = prod((self.sequence[s - 1] for s in profile), start=Fraction(1))
                self._by_profile[profile] = value
            return value
        try:
            return self.table[pi]
        except KeyError:
            raise MissingDataError(f"no value for partition {pi}") from None

    def __contains__(self, pi: Partition) -> bool:
        if self.sequence is not None:
            return pi.n <= self.n
        return pi in self.table

    def to_json(self) -> dict:
        if self.sequence is not None:
            return {"n": self.n, "mode": "sequence", self.label: [fmt(v) for v in self.sequence]}
        entries = []
        for p in sorted(self.table, key=lambda q: (q.n, q.sort_key())):
            v = self.table[p]
            if isinstance(v, FormalCombo):
                raise DomainError("formal values have no JSON form")
            entries.append({"partition": str(p), "value": fmt(v)})
        return {"n": self.n, "mode": "table", "entries": entries}

    @classmethod
    def from_json(cls, data: dict):
        if not isinstance(data, dict):
            raise DomainError("top level: expected a JSON object")
        mode = data.get("mode")
        if mode == "sequence":
            if cls.label not in data:
                raise DomainError(f"field '{cls.label}': missing")
            values = data[cls.label]
            if not isinstance(values, list):
                raise DomainError(f"field '{cls.label}': expected a list")
            n = int(data.get("n", len(values)))
            if n != len(values):
                raise DomainError(f"field 'n': {n} disagrees with {len(values)} values")
            try:
                return cls(n, sequence=values)
            except DomainError as exc:
                raise DomainError(f"field '{cls.label}': {exc}") from None
        if mode == "table":
            table = {}
            for i, entry in enumerate(data.get("entries", [])):
                try:
                    table[Partition.parse(entry["partition"])] = to_fraction(entry["value"])
                except (KeyError, TypeError, ValueError) as exc:
                    raise DomainError(f"field 'entries[{i}]': {exc}") from None
            n = int(data.get("n", max((p.n for p in table), default=0)))
            return cls(n, table=table)
        raise DomainError(f"field 'mode': expected 'sequence' or 'table', got {mode!r}")


class CumulantTable(MomentAssignment):
    """Same shape as :class:`MomentAssignment`, holding ``K_pi``."""

    label = "cumulants"


def _lattice_below(pi: Partition, lattice: str) -> Iterable[Partition]:
    return lower_interval(pi, normalize_family(lattice))


def moments_to_cumulants(m: MomentAssignment, pi: Partition, lattice: str):
    """``K_pi = sum_{sigma <= pi} phi_sigma mu(sigma, pi)`` over the chosen lattice."""
    family = normalize_family(lattice)
    if family == NONCROSSING and not is_noncrossing(pi):
        raise DomainError(f"free cumulants are indexed by noncrossing partitions; {pi} crosses")
    return _linear_sum((mu, m[s]) for s, mu in lower_interval_mobius(pi, family))


def cumulants_to_moments(k: MomentAssignment, pi: Partition, lattice: str):
    """``phi_pi = sum of K_sigma`` over ``sigma <= pi`` in the lattice (``pi`` may cross)."""
    return _linear_sum((1, k[s]) for s in _lattice_below(pi, lattice))


def transform_all(data: MomentAssignment, n: int, lattice: str, direction: str) -> MomentAssignment:
    """Apply a transform to every partition of ``{1..n}`` in the lattice; returns a table."""
    family = normalize_family(lattice)
    if direction == "m2k":
        return CumulantTable(
            n, table={p: moments_to_cumulants(data, p, family) for p in enumerate_partitions(n, family)}
        )
    if direction == "k2m":
        return MomentAssignment(
            n, table={p: cumulants_to_moments(data, p, family) for p in enumerate_partitions(n, family)}
        )
    raise DomainError(f"direction must be 'm2k' or 'k2m', got {direction!r}")


def formal_moments(n: int, vanish=lambda p: False) -> MomentAssignment:
    """Table of independent symbols ``phi[pi]`` for all ``pi`` in ``Pi_n``; ``vanish(pi)`` forces 0."""
    return MomentAssignment(
        n,
        table={
            p: (FormalCombo() if vanish(p) else FormalCombo.symbol(p))
            for p in enumerate_partitions(n, ALL)
        },
    )


# product formula ------------------------------------------------------------


def _classical_expansion(pi: Partition, sizes: Sequence[int] | None = None) -> FormalCombo:
    """``K_pi`` of grouped variables in fine ``phi`` symbols (set lattice)."""
    if sizes is None:
        sizes = (1,) * pi.n
    return FormalCombo.from_pairs(
        (induced_grouping(s, sizes), mu) for s, mu in lower_interval_mobius(pi, ALL)
    )


def product_formula_sides(pi: Partition, sizes: Sequence[int]) -> tuple[FormalCombo, FormalCombo]:
    """Both sides of the cumulant product formula, expanded into fine ``phi`` symbols.

    ``lhs`` is the classical cumulant ``K_pi`` of the products of consecutive
    groups of variables; ``rhs`` sums ``K_sigma`` of the fine variables over all
    ``sigma`` whose join with the interval grouping equals the induced partition.
    """
    sizes = tuple(sizes)
    if len(sizes) != pi.n or any(s < 1 for s in sizes):
        raise DomainError(f"need {pi.n} positive group sizes, got {sizes}")
    n = sum(sizes)
    target = induced_grouping(pi, sizes)
    grouping = induced_grouping(Partition.bottom(pi.n), sizes)
    lhs = _classical_expansion(pi, sizes)
    rhs = FormalCombo()
    for sigma in product_formula_terms(target, grouping, n):
        rhs = rhs + _classical_expansion(sigma)
    return lhs, rhs


def product_formula_terms(target: Partition, grouping: Partition, n: int) -> list[Partition]:
    return [s for s in enumerate_partitions(n, ALL) if join(s, grouping) == target]


# reduction to alternating partitions -----------------------------------------


@dataclass(frozen=True)
class ReductionStep:
    """One rewrite ``K_pi = K_merged(..., X_k X_(k+1), ...) - sum K_rho``."""

    pi: Partition
    k: int
    merged: Partition
    corrections: tuple[Partition, ...]
    certified: bool


def alternating_reduction(pi: Partition, k: int) -> ReductionStep:
    if not 1 <= k < pi.n or not pi.same_block(k, k + 1):
        raise DomainError(f"{k} and {k + 1} are not in a common block of {pi}")
    nu = pair_partition(pi.n, k)
    merged = merge_neighbours(pi, k)
    corrections = tuple(
        r for r in lower_interval(pi, ALL) if r != pi and join(r, nu) == pi
    )
    cn = connected_neighbours(pi)
    certified = connected_neighbours(merged) == cn - 1 and all(
        connected_neighbours(r) <= cn - 1 for r in corrections
    )
    return ReductionStep(pi, k, merged, tuple(sorted(corrections, key=Partition.sort_key)), certified)


def _first_neighbour(pi: Partition) -> int | None:
    return next((k for k in range(1, pi.n) if pi.same_block(k, k + 1)), None)


def reduce_to_alternating(pi: Partition) -> dict[tuple[Partition, tuple[int, ...]], Fraction]:
    """Rewrite ``K_pi`` as a combination of alternating cumulants of grouped variables.

    Terms are keyed ``(rho, sizes)``: the cumulant ``K_rho`` applied to products
    of consecutive groups of the given sizes.  Always reduces at the smallest
    connected pair.
    """
    pending = {(pi, (1,) * pi.n): Fraction(1)}
    done: dict = {}
    while pending:
        (rho, sizes), c = pending.popitem()
        if c == 0:
            continue
        k = _first_neighbour(rho)
        if k is None:
            done[(rho, sizes)] = done.get((rho, sizes), 0) + c
            continue
        step = alternating_reduction(rho, k)
        if not step.certified:
            raise DomainError(f"reduction of {rho} at {k} does not lower the neighbour count")
        new_sizes = sizes[: k - 1] + (sizes[k - 1] + sizes[k],) + sizes[k + 1 :]
        for key, coeff in [((step.merged, new_sizes), c)] + [((r, sizes), -c) for r in step.corrections]:
            pending[key] = pending.get(key, 0) + coeff
    return {key: c for key, c in done.items() if c}


def expand_reduction(terms: dict) -> FormalCombo:
    total = FormalCombo()
    for (rho, sizes), c in terms.items():
        total = total + _classical_expansion(rho, sizes) * c
    return total


# cumulants of cumulants -------------------------------------------------------


BRILLINGER_LIMITS = {NONCROSSING: 6, ALL: 5}


class _Lattice:
    """Index tables for one lattice: order relation and Möbius values."""

    def __init__(self, n: int, family: str) -> None:
        self.n = n
        self.family = family
        self.elements = list(enumerate_partitions(n, family))
        self.index = {p: i for i, p in enumerate(self.elements)}
        size = len(self.elements)
        self.below = [[] for _ in range(size)]
        self.above = [[] for _ in range(size)]
        self.mu: dict[tuple[int, int], int] = {}
        for j, q in enumerate(self.elements):
            for s in lower_interval(q, family):
                i = self.index[s]
                self.below[j].append(i)
                self.above[i].append(j)
                self.mu[(i, j)] = mobius(s, q, family)
        self.top = self.index[Partition.top(n)]
        self._e2: dict = {}

    def le(self, i: int, j: int) -> bool:
        return (i, j) in self.mu

    def between(self, i: int, j: int) -> list[int]:
        return [x for x in self.above[i] if (x, j) in self.mu]

    def e1(self, s: int, p: int) -> dict:
        return {(s, t): self.mu[(t, p)] for t in self.below[p]}

    def e2(self, r: int, p: int) -> dict:
        key = (r, p)
        if key not in self._e2:
            acc: dict = {}
            mid = self.between(p, r)
            for t in self.below[p]:
                mtp = self.mu[(t, p)]
                for rp in mid:
                    acc[(rp, t)] = acc.get((rp, t), 0) + self.mu[(rp, r)] * mtp
            self._e2[key] = {k: v for k, v in acc.items() if v}
        return self._e2[key]

    def cphi(self) -> dict:
        return {(p, p): self.mu[(p, self.top)] for p in range(len(self.elements))}


@lru_cache(maxsize=8)
def _lattice(n: int, family: str) -> _Lattice:
    return _Lattice(n, family)


def _combo(lat: _Lattice, terms: dict) -> FormalCombo:
    el = lat.elements
    return FormalCombo({(el[a], el[b]): c for (a, b), c in terms.items()})


def _add_into(acc: dict, terms: dict, sign: int = 1) -> None:
    for k, v in terms.items():
        acc[k] = acc.get(k, 0) + sign * v


def _nonzero(acc: dict) -> dict:
    return {k: v for k, v in acc.items() if v}


def brillinger_expand(kind: str, args: Sequence[Partition], n: int, lattice: str) -> FormalCombo:
    """Conditioned-cumulant expansions over ``u[rho;tau]``.

    * ``E1`` with ``(sigma, pi)``, ``pi <= sigma``: ``sum_{tau <= pi} u[sigma;tau] mu(tau, pi)``
    * ``E2`` with ``(rho, pi)``, ``pi <= rho``: ``sum_{tau <= pi} sum_{pi <= rho' <= rho}
      u[rho';tau] mu(rho', rho) mu(tau, pi)``
    * ``Cphi`` with no arguments: ``sum_pi u[pi;pi] mu(pi, 1)``
    """
    family = normalize_family(lattice)
    lat = _lattice(n, family)
    kind = kind.lower()
    if kind == "cphi":
        if args:
            raise DomainError("Cphi takes no partition arguments")
        return _combo(lat, lat.cphi())
    if kind not in ("e1", "e2"):
        raise DomainError(f"unknown expansion {kind!r}; expected E1, E2 or Cphi")
    if len(args) != 2:
        raise DomainError(f"{kind.upper()} needs two partitions")
    try:
        hi, lo = (lat.index[a] for a in args)
    except KeyError:
        raise DomainError(f"arguments must be partitions of {n} in the {family} lattice") from None
    if not lat.le(lo, hi):
        raise DomainError(f"{args[1]} is not below {args[0]}")
    return _combo(lat, lat.e1(hi, lo) if kind == "e1" else lat.e2(hi, lo))


def brillinger_check(n: int, lattice: str) -> Report:
    """Check the total cumulant against the sum of cumulants of cumulants, plus intermediates."""
    family = normalize_family(lattice)
    limit = BRILLINGER_LIMITS[family]
    if not 1 <= n <= limit:
        raise SizeLimitError(f"brillinger_check supports 1 <= n <= {limit} on the {family} lattice")
    lat = _lattice(n, family)
    label = lattice_label(family)
    report = Report("brillinger", {"n": n, "lattice": label})
    size = len(lat.elements)

    diff = dict(lat.cphi())
    for s in range(size):
        _add_into(diff, lat.e2(lat.top, s), -1)
    diff = _nonzero(diff)
    main = _combo(lat, diff)
    report.check(not diff, f"total cumulant differs from the sum by {main.nonzero_terms()}")

    bad_e1 = 0
    pairs = 0
    for s in range(size):
        for p in lat.below[s]:
            pairs += 1
            acc = dict(lat.e1(s, p))
            for r in lat.between(p, s):
                _add_into(acc, lat.e2(r, p), -1)
            if _nonzero(acc):
                bad_e1 += 1
                report.fail(f"E1({lat.elements[s]}, {lat.elements[p]}) != sum of E2")

    bad_tel = 0
    for p in range(size):
        acc: dict = {}
        for s in lat.below[p]:
            _add_into(acc, lat.e1(p, s))
        acc[(p, p)] = acc.get((p, p), 0) - 1
        if _nonzero(acc):
            bad_tel += 1
            report.fail(f"telescoping fails at {lat.elements[p]}")

    report.rows = [
        {"identity": "total", "cells": 1, "failures": 0 if not diff else 1},
        {"identity": "E1=sum E2", "cells": pairs, "failures": bad_e1},
        {"identity": "telescoping", "cells": size, "failures": bad_tel},
    ]
    report.extra = {"identity": "brillinger", "n": n, "lattice": label, "nonzero_terms": main.nonzero_terms()}
    return report


# singleton conditions -----------------------------------------------------------


def _singletons(pi: Partition) -> set[int]:
    return {b[0] for b in pi.blocks if len(b) == 1}


def singleton_lemma_check(n: int) -> Report:
    """Every noncrossing refinement of an alternating partition has a singleton."""
    report = Report("singleton-lemma", {"n": n})
    checked = 0
    for pi in enumerate_partitions(n, ALL):
        if connected_neighbours(pi):
            continue
        for sigma in lower_interval(pi, NONCROSSING):
            checked += 1
            if not _singletons(sigma):
                report.fail(f"{sigma} <= {pi} has no singleton")
    report.rows.append({"check": "singleton-lemma", "n": n, "pairs": checked})
    return report


def weak_singleton_check(n: int, lattice: str) -> Report:
    """Moments vanishing whenever ``{j}`` is a block force cumulants with ``{j}`` to vanish."""
    family = normalize_family(lattice)
    report = Report("weak-singleton", {"n": n, "lattice": lattice_label(family)})
    for j in range(1, n + 1):
        m = formal_moments(n, vanish=lambda p: j in _singletons(p))
        for pi in enumerate_partitions(n, family):
            if j in _singletons(pi):
                k = moments_to_cumulants(m, pi, family)
                if k != 0:
                    report.fail(f"K_{pi} = {k!r} with singleton {{{j}}}")
    report.rows.append({"check": "weak-singleton", "n": n, "lattice": lattice_label(family)})
    return report


def singleton_corollary_check(n: int) -> Report:
    """Cumulants living on noncrossing singleton-free partitions sum to 0 below alternating kernels."""
    report = Report("singleton-corollary", {"n": n})
    table = {
        p: (FormalCombo.symbol(p) if is_noncrossing(p) and not _singletons(p) else FormalCombo())
        for p in enumerate_partitions(n, ALL)
    }
    cumulants = CumulantTable(n, table=table)
    kernels = 0
    for h in enumerate_partitions(n, ALL):
        if connected_neighbours(h):
            continue
        kernels += 1
        total = cumulants_to_moments(cumulants, h, NONCROSSING)
        if total != 0:
            report.fail(f"moment at alternating kernel {h} is {total!r}")
    report.rows.append({"check": "singleton-corollary", "n": n, "kernels": kernels})
    return report
