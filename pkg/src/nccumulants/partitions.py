"""Set partitions of ``{1..n}``, the noncrossing sublattice and Kreweras complementation.

A :class:`Partition` is stored as its restricted-growth string (RGS): entry
``i`` is the label of the block containing element ``i + 1``, blocks being
numbered ``0, 1, 2, ...`` in order of first appearance.  The RGS is a unique
key, so equality and hashing are plain tuple operations.  Elements are
1-based everywhere in the public interface.

Text form: blocks separated by ``|``, elements comma separated, e.g.
``1,3|2|4``.  JSON form: a list of lists in the same order.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import DomainError, SizeLimitError

#: default enumeration ceiling; Bell(14) is roughly 1.9e8
MAX_N = 14

ALL = "all"
NONCROSSING = "nc"

_FAMILY_ALIASES = {
    "all": ALL,
    "set": ALL,
    "nc": NONCROSSING,
    "noncrossing": NONCROSSING,
}


def normalize_family(family: str) -> str:
    """Map ``all``/``set`` and ``nc``/``noncrossing`` onto the two canonical names."""
    try:
        return _FAMILY_ALIASES[family.lower()]
    except (KeyError, AttributeError):
        raise DomainError(f"unknown partition family {family!r}") from None


def lattice_label(family: str) -> str:
    """Display name used in reports: ``set`` or ``nc``."""
    return "nc" if normalize_family(family) == NONCROSSING else "set"


@dataclass(frozen=True)
class Partition:
    """A set partition of ``{1..n}`` in restricted-growth form."""

    rgs: tuple[int, ...]

    def __post_init__(self) -> None:
        rgs = tuple(self.rgs)
        object.__setattr__(self, "rgs", rgs)
        if not rgs:
            raise DomainError("a partition needs a nonempty ground set")
        top = -1
        for label in rgs:
            if not isinstance(label, int) or label < 0 or label > top + 1:
                raise DomainError(f"{rgs!r} is not a restricted-growth string")
            top = max(top, label)

    @classmethod
    def _trusted(cls, rgs: tuple[int, ...]) -> "Partition":
        """Skip validation for strings built canonically by this module."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "rgs", rgs)
        return obj

    # construction -----------------------------------------------------

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "Partition":
        blocks = [sorted(int(e) for e in b) for b in blocks]
        if any(not b for b in blocks):
            raise DomainError("blocks must be nonempty")
        elements = sorted(e for b in blocks for e in b)
        if n is None:
            n = len(elements)
        if elements != list(range(1, n + 1)):
            raise DomainError(f"blocks {blocks!r} do not partition 1..{n}")
        owner = [0] * n
        for idx, b in enumerate(blocks):
            for e in b:
                owner[e - 1] = idx
        return kernel(owner)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse the ``1,3|2|4`` text form."""
        try:
            blocks = [[int(tok) for tok in part.split(",")] for part in text.strip().split("|")]
        except ValueError:
            raise DomainError(f"malformed partition text {text!r}") from None
        return cls.from_blocks(blocks)

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]]) -> "Partition":
        return cls.from_blocks(data)

    @classmethod
    def bottom(cls, n: int) -> "Partition":
        """The finest partition (all singletons)."""
        return cls(tuple(range(n)))

    @classmethod
    def top(cls, n: int) -> "Partition":
        """The one-block partition."""
        return cls((0,) * n)

    # views --------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.rgs)

    @property
    def size(self) -> int:
        """Number of blocks."""
        return max(self.rgs) + 1

    @cached_property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.size)]
        for i, label in enumerate(self.rgs, start=1):
            out[label].append(i)
        return tuple(tuple(b) for b in out)

    def same_block(self, i: int, j: int) -> bool:
        return self.rgs[i - 1] == self.rgs[j - 1]

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def __str__(self) -> str:
        return "|".join(",".join(map(str, b)) for b in self.blocks)

    def __repr__(self) -> str:
        return f"Partition({str(self)!r})"

    def sort_key(self) -> tuple:
        return (self.n, self.rgs)


def kernel(h: Sequence) -> Partition:
    """Partition of positions by equal values of the index function ``h``."""
    labels: dict = {}
    rgs = tuple([labels.setdefault(v, len(labels)) for v in h])
    if not rgs:
        raise DomainError("a partition needs a nonempty ground set")
    return Partition._trusted(rgs)


def canonical_index(pi: Partition) -> tuple[int, ...]:
    """The index function sending each element to the (1-based) number of its block."""
    return tuple(label + 1 for label in pi.rgs)


# enumeration ------------------------------------------------------------


def _check_size(n: int, limit: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"ground set size must be an integer, got {n!r}")
    if not 1 <= n <= limit:
        raise SizeLimitError(f"n={n} is outside the enumeration range 1..{limit}")


def enumerate_partitions(n: int, family: str = ALL, limit: int = MAX_N) -> Iterator[Partition]:
    """Yield every partition of ``{1..n}`` once, lexicographically by RGS.

    ``family="nc"`` restricts to noncrossing partitions; they are generated
    directly (not filtered) by refusing to extend a block across an open one.
    """
    family = normalize_family(family)
    _check_size(n, limit)
    nc = family == NONCROSSING
    a = [0] * n
    first = [0] * n  # first element index of each block label
    last = [0] * n  # last element index placed so far in each block

    def extend_ok(i: int, b: int) -> bool:
        j = last[b]
        return all(first[a[k]] > j for k in range(j + 1, i))

    def rec(i: int, m: int) -> Iterator[Partition]:
        if i == n:
            yield Partition(tuple(a))
            return
        for b in range(m + 1):
            if b < m:
                if nc and not extend_ok(i, b):
                    continue
                saved = last[b]
                a[i] = b
                last[b] = i
                yield from rec(i + 1, m)
                last[b] = saved
            else:
                a[i] = b
                first[b] = last[b] = i
                yield from rec(i + 1, m + 1)

    yield from rec(1, 1)


def is_noncrossing(pi: Partition) -> bool:
    """True iff there is no ``i<j<k<l`` with ``i~k``, ``j~l`` in different blocks.

    Single left-to-right pass: an element of an already opened block must
    find that block on top of the stack of open blocks.
    """
    return labels_noncrossing(pi.rgs)


def labels_noncrossing(labels: Sequence) -> bool:
    """Noncrossing test on any sequence of hashable block labels."""
    last = {}
    for i, label in enumerate(labels):
        last[label] = i
    stack: list = []
    seen = set()
    for i, label in enumerate(labels):
        if label in seen:
            if not stack or stack[-1] != label:
                return False
        else:
            seen.add(label)
            stack.append(label)
        if last[label] == i:
            stack.pop()
    return True


# lattice structure --------------------------------------------------------


class MeetJoin(NamedTuple):
    meet: Partition
    join: Partition
    leq: bool


def _same_n(pi: Partition, sigma: Partition) -> None:
    if pi.n != sigma.n:
        raise DomainError(f"ground sets differ: {pi.n} vs {sigma.n}")


def meet(pi: Partition, sigma: Partition) -> Partition:
    _same_n(pi, sigma)
    return kernel(list(zip(pi.rgs, sigma.rgs)))


def join(pi: Partition, sigma: Partition) -> Partition:
    _same_n(pi, sigma)
    parent = list(range(pi.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in (pi, sigma):
        for block in p.blocks:
            root = find(block[0] - 1)
            for e in block[1:]:
                parent[find(e - 1)] = root
    return kernel([find(i) for i in range(pi.n)])


def leq(pi: Partition, sigma: Partition) -> bool:
    """Refinement order: every block of ``pi`` lies inside a block of ``sigma``."""
    _same_n(pi, sigma)
    image: dict[int, int] = {}
    for a, b in zip(pi.rgs, sigma.rgs):
        if image.setdefault(a, b) != b:
            return False
    return True


def lattice_meet_join(pi: Partition, sigma: Partition) -> MeetJoin:
    return MeetJoin(meet(pi, sigma), join(pi, sigma), leq(pi, sigma))


def restrict(pi: Partition, elements: Sequence[int]) -> Partition:
    """Restriction of ``pi`` to ``elements``, relabelled ``1..len`` in increasing order."""
    return kernel([pi.rgs[e - 1] for e in sorted(elements)])


def quotient(rho: Partition, pi: Partition) -> Partition:
    """``rho/pi``: the partition of the blocks of ``pi`` (numbered by minimum) induced by ``rho``."""
    if not leq(pi, rho):
        raise DomainError(f"{pi} is not finer than {rho}")
    return kernel([rho.rgs[b[0] - 1] for b in pi.blocks])


def lower_interval(pi: Partition, family: str = ALL) -> Iterator[Partition]:
    """All ``sigma <= pi`` in the given family.

    Works blockwise: a refinement is a choice of partition inside each block.
    When ``pi`` itself crosses, the noncrossing refinements are filtered.
    """
    family = normalize_family(family)
    blocks = pi.blocks
    choices = [list(enumerate_partitions(len(b), family, limit=max(len(b), MAX_N))) for b in blocks]
    need_filter = family == NONCROSSING and not is_noncrossing(pi)
    labels = [0] * pi.n
    for combo in itertools.product(*choices):
        offset = 0
        for block, part in zip(blocks, combo):
            for e, lab in zip(block, part.rgs):
                labels[e - 1] = offset + lab
            offset += part.size
        sigma = kernel(labels)
        if need_filter and not is_noncrossing(sigma):
            continue
        yield sigma


def upper_interval(pi: Partition, family: str = ALL) -> Iterator[Partition]:
    """All ``tau >= pi`` in the given family, as groupings of the blocks of ``pi``."""
    family = normalize_family(family)
    nc = family == NONCROSSING
    for theta in enumerate_partitions(pi.size, ALL, limit=max(pi.size, MAX_N)):
        tau = kernel([theta.rgs[label] for label in pi.rgs])
        if nc and not is_noncrossing(tau):
            continue
        yield tau


# Kreweras complement and friends --------------------------------------------


def kreweras(pi: Partition) -> Partition:
    """Kreweras complement ``K(pi)``, relabelled onto ``1..n``.

    Built as the cycle partition of the permutation ``pi^{-1} o gamma`` with
    ``gamma = (1 2 ... n)`` and ``pi`` read as the permutation sending every
    element to its successor in its block (cyclically).
    """
    if not is_noncrossing(pi):
        raise DomainError(f"{pi} is crossing; the Kreweras complement needs a noncrossing partition")
    n = pi.n
    prev = [0] * n
    for block in pi.blocks:
        for idx, e in enumerate(block):
            prev[e - 1] = block[idx - 1] - 1
    step = [prev[(k + 1) % n] for k in range(n)]
    label = [-1] * n
    count = 0
    for start in range(n):
        if label[start] >= 0:
            continue
        k = start
        while label[k] < 0:
            label[k] = count
            k = step[k]
        count += 1
    return kernel(label)


def interweave(pi: Partition, sigma: Partition) -> Partition:
    """Partition of ``{1..2n}`` with ``pi`` on odd and ``sigma`` on even positions."""
    _same_n(pi, sigma)
    offset = pi.size
    labels = []
    for a, b in zip(pi.rgs, sigma.rgs):
        labels.append(a)
        labels.append(offset + b)
    return kernel(labels)


def kreweras_by_interweave(pi: Partition) -> Partition:
    """Brute-force Kreweras complement: the largest ``sigma`` whose interweave with ``pi`` is noncrossing.

    Exhaustive search over restricted growth strings for ``sigma``; a branch
    is cut as soon as the interleaved prefix already contains a crossing.
    Raises if the valid ``sigma`` have no unique maximum.
    """
    if not is_noncrossing(pi):
        raise DomainError(f"{pi} is crossing")
    n = pi.n
    valid: list[Partition] = []

    def feed(stack: list, closed: set, label) -> bool:
        # a label reappearing after it was buried under a later one is a crossing
        if label in closed:
            return False
        if label in stack:
            while stack[-1] != label:
                closed.add(stack.pop())
        else:
            stack.append(label)
        return True

    def rec(i: int, m: int, rgs: list, stack: list, closed: set) -> None:
        if i == n:
            valid.append(Partition(tuple(rgs)))
            return
        stack0, closed0 = list(stack), set(closed)
        if not feed(stack0, closed0, (0, pi.rgs[i])):
            return
        for b in range(m + 1):
            s, c = list(stack0), set(closed0)
            if feed(s, c, (1, b)):
                rec(i + 1, max(m, b + 1), rgs + [b], s, c)

    rec(0, 0, [], [], set())
    best = min(valid, key=lambda s: s.size)
    if not all(leq(s, best) for s in valid):
        raise DomainError(f"no maximal interweaving partition for {pi}")
    return best


def merge_neighbours(pi: Partition, k: int) -> Partition:
    """Identify ``k`` and ``k+1`` and relabel down to ``{1..n-1}``."""
    n = pi.n
    if not 1 <= k < n:
        raise DomainError(f"k={k} must satisfy 1 <= k < {n}")
    merged = join(pi, pair_partition(n, k))
    return kernel(merged.rgs[:k] + merged.rgs[k + 1:])


def pair_partition(n: int, k: int) -> Partition:
    """The partition whose only non-singleton block is ``{k, k+1}``."""
    if not 1 <= k < n:
        raise DomainError(f"k={k} must satisfy 1 <= k < {n}")
    return kernel(list(range(k)) + list(range(k - 1, n - 1)))


def induced_grouping(pi: Partition, sizes: Sequence[int]) -> Partition:
    """Blow every element ``i`` of ``pi`` up into an interval of length ``sizes[i-1]``."""
    if len(sizes) != pi.n:
        raise DomainError(f"{len(sizes)} sizes given for a partition of {pi.n}")
    if any(int(s) < 1 for s in sizes):
        raise DomainError("sizes must be positive integers")
    labels = []
    for lab, s in zip(pi.rgs, sizes):
        labels.extend([lab] * int(s))
    return kernel(labels)


class Shape(NamedTuple):
    cn: int
    alternating: bool
    singletons: list[int]
    has_singleton: bool


def connected_neighbours(pi: Partition) -> int:
    rgs = pi.rgs
    return sum(1 for k in range(len(rgs) - 1) if rgs[k] == rgs[k + 1])


def shape_predicates(pi: Partition) -> Shape:
    cn = connected_neighbours(pi)
    singletons = [b[0] for b in pi.blocks if len(b) == 1]
    return Shape(cn, cn == 0, singletons, bool(singletons))


def block_size_profile(pi: Partition) -> dict[int, int]:
    """``{p: k_p}`` where ``k_p`` counts blocks of size ``p``."""
    return dict(sorted(Counter(len(b) for b in pi.blocks).items()))
