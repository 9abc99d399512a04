"""Verification suites: each one sweeps a property over a parameter range.

Every suite returns a :class:`Report`; rows are emitted in a stable order
determined by the parameters alone.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable, Iterable

from . import bounds, cumulants
from .errors import DomainError
from .incidence import abs_mobius, convolve_nc, zeta
from .partitions import (
    ALL,
    NONCROSSING,
    enumerate_partitions,
    kreweras,
    kreweras_by_interweave,
    lattice_label,
    leq,
    lower_interval,
    quotient,
    upper_interval,
)
from .rational import fmt
from .report import Report
from .series import Polynomial


def brillinger(n: int = 5, lattice: str = NONCROSSING) -> Report:
    return cumulants.brillinger_check(n, lattice)


def product_formula(m_max: int = 3, max_size: int = 2) -> Report:
    report = Report("product-formula", {"m": m_max, "max_size": max_size})
    for m in range(1, m_max + 1):
        for pi in enumerate_partitions(m):
            for sizes in itertools.product(range(1, max_size + 1), repeat=m):
                lhs, rhs = cumulants.product_formula_sides(pi, sizes)
                diff = lhs - rhs
                report.check(diff.is_zero(), f"pi={pi} sizes={sizes}: {diff.nonzero_terms()}")
                report.rows.append(
                    {"pi": str(pi), "sizes": ",".join(map(str, sizes)), "terms": len(lhs), "match": diff.is_zero()}
                )
    return report


def kreweras_suite(n: int = 8, order_n: int = 7) -> Report:
    report = Report("kreweras", {"n": n, "order_n": order_n})
    for k in range(1, n + 1):
        nc = list(enumerate_partitions(k, NONCROSSING))
        comp = {p: kreweras(p) for p in nc}
        oracle_bad = sum(1 for p in nc if comp[p] != kreweras_by_interweave(p))
        size_bad = sum(1 for p in nc if p.size + comp[p].size != k + 1)
        report.check(oracle_bad == 0, f"n={k}: {oracle_bad} complements differ from the interweave oracle")
        report.check(size_bad == 0, f"n={k}: {size_bad} complements violate |pi|+|K(pi)|=n+1")
        row = {"n": k, "partitions": len(nc), "oracle_mismatch": oracle_bad, "size_mismatch": size_bad}
        if k <= order_n:
            order_bad = sum(
                1 for s in nc for p in nc if leq(s, p) and not leq(comp[p], comp[s])
            )
            interval_bad = sum(
                1
                for p in nc
                if sum(1 for _ in upper_interval(p, NONCROSSING))
                != sum(1 for _ in lower_interval(comp[p], NONCROSSING))
            )
            report.check(order_bad == 0, f"n={k}: {order_bad} comparable pairs not reversed")
            report.check(interval_bad == 0, f"n={k}: {interval_bad} interval cardinalities differ")
            row.update(order_mismatch=order_bad, interval_mismatch=interval_bad)
        report.rows.append(row)
    return report


def schroeder(n: int = 10) -> Report:
    report = Report("schroeder", {"n": n})
    enum = bounds.sequence_by_enumeration("a", n)
    series = bounds.sequence_by_series("a", n)
    conv = list(convolve_nc(abs_mobius(n), zeta(n), n).characteristic)
    for k in range(n):
        ok = enum[k] == series[k] == conv[k]
        report.check(ok, f"a_{k + 1}: enumeration {enum[k]}, series {series[k]}, convolution {conv[k]}")
        report.rows.append(
            {"kind": "a", "n": k + 1, "N": 1, "enumeration": fmt(enum[k]), "series": fmt(series[k]), "match": str(ok).lower()}
        )
    return report


TRACIAL_QUARTIC = Polynomial((-5, 6, 57, 22, 3))


def lp_constants(Ns: Iterable[int] = range(1, 11), precision=bounds.DEFAULT_PRECISION) -> Report:
    Ns = list(Ns)
    report = Report("lp-constants", {"N": Ns})
    for N in Ns:
        divides, _ = bounds.quartic_divides_resultant(N)
        report.check(divides, f"N={N}: quartic does not divide the resultant")
        g = bounds.growth_constants(N, precision)
        row = {"N": N, "divides": divides, **g.to_json()}
        if N == 1:
            report.check(
                bounds.quartic_factor(1) == TRACIAL_QUARTIC,
                "N=1: quartic differs from 3z^4+22z^3+57z^2+6z-5",
            )
            report.check(g.b_growth_exact == 7, f"N=1: b growth {g.b_growth} != 7")
        if N >= 2:
            report.check(
                bounds.exceeds_khinchin_radius(g.z0_lo, N),
                f"N={N}: 1/z0 not certified below the Khinchin constant",
            )
        report.rows.append(row)
    return report


def negativity(Ns: Iterable[int] = range(2, 201), grid: int | None = None) -> Report:
    Ns = list(Ns)
    report = Report("negativity", {"N": [Ns[0], Ns[-1]] if Ns else [], "grid": grid})
    for N in Ns:
        report.merge(bounds.negativity_check(N, grid))
    return report


def definetti(n: int = 5, N_max: int = 30, N_small: int = 10, N_large: int = 100) -> Report:
    report = Report("definetti", {"n": n, "N_max": N_max, "decay": [N_small, N_large]})
    for pi, rho in bounds.definetti_fixtures(n):
        p = pi.size
        for N in range(p, N_max + 1):
            tv, bound, holds = bounds.definetti_tv(pi, rho, N)
            report.check(holds, f"pi={pi} rho={rho} N={N}: tv {tv} > bound {bound}")
            report.rows.append(
                {"piN": str(pi), "rho": str(rho), "N": N, "tv": fmt(tv), "bound": fmt(bound), "holds": str(holds).lower()}
            )
        small = bounds.definetti_tv(pi, rho, N_small).tv
        large = bounds.definetti_tv(pi, rho, N_large).tv
        # the two symmetrizations coincide exactly when rho/pi has a single block
        single_block = quotient(rho, pi).size == 1
        if small > 0:
            report.check(large < small, f"pi={pi} rho={rho}: tv does not decrease ({small} -> {large})")
        else:
            report.check(large == 0 and single_block, f"pi={pi} rho={rho}: unexpected zero tv")
    return report


def lemma_bound(N_max: int = 40) -> Report:
    report = Report("lemma-bound", {"N_max": N_max})
    cells = 0
    for N in range(1, N_max + 1):
        for p in range(1, N + 1):
            for j in range(1, N + 1):
                cells += 1
                lhs, rhs, holds = bounds.elementary_bound(j, p, N)
                report.check(holds, f"j={j} p={p} N={N}: {lhs} > {rhs}")
    report.rows.append({"N_max": N_max, "cells": cells})
    return report


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def roundtrip(n: int = 8, seed: int | None = None, formal_n: int = 6) -> Report:
    """Moment -> cumulant -> moment on seeded random data, both lattices."""
    if seed is None:
        raise DomainError("the roundtrip suite is randomized; pass an explicit seed")
    rng = random.Random(seed)
    report = Report("roundtrip", {"n": n, "seed": seed, "formal_n": formal_n})
    for lattice in (ALL, NONCROSSING):
        for k in range(1, n + 1):
            cases = [
                ("sequence", cumulants.MomentAssignment.from_sequence([_random_rational(rng) for _ in range(k)])),
                (
                    "table",
                    cumulants.MomentAssignment(
                        k, table={p: _random_rational(rng) for p in enumerate_partitions(k, lattice)}
                    ),
                ),
            ]
            if k <= formal_n:
                cases.append(("formal", cumulants.formal_moments(k)))
            for mode, m in cases:
                kt = cumulants.transform_all(m, k, lattice, "m2k")
                back = cumulants.transform_all(kt, k, lattice, "k2m")
                bad = [p for p in enumerate_partitions(k, lattice) if back[p] != m[p]]
                report.check(not bad, f"{lattice} n={k} {mode}: mismatch at {[str(p) for p in bad[:3]]}")
                report.rows.append({"lattice": lattice_label(lattice), "n": k, "mode": mode, "match": not bad})
    return report


def singleton(n: int = 8) -> Report:
    report = Report("singleton", {"n": n})
    for k in range(1, n + 1):
        report.merge(cumulants.singleton_lemma_check(k))
        if k <= 8:
            report.merge(cumulants.singleton_corollary_check(k))
        if k <= 6:
            for lattice in (ALL, NONCROSSING):
                report.merge(cumulants.weak_singleton_check(k, lattice))
    return report


SUITES: dict[str, Callable[..., Report]] = {
    "brillinger": brillinger,
    "product-formula": product_formula,
    "kreweras": kreweras_suite,
    "schroeder": schroeder,
    "lp-constants": lp_constants,
    "negativity": negativity,
    "definetti": definetti,
    "lemma-bound": lemma_bound,
    "roundtrip": roundtrip,
    "singleton": singleton,
}
