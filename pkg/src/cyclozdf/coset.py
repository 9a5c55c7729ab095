"""Cyclic unit subgroups of Z_n, their coset partitions and coset index functions."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .modular import NotAUnitError, ResidueRing, multiplicative_order


@dataclass(frozen=True)
class UnitSubgroup:
    """``G = <e>`` inside the unit group of Z_n."""

    ring: ResidueRing
    generator: int
    elements: Tuple[int, ...]
    order: int

    @property
    def n(self) -> int:
        return self.ring.modulus

    def __contains__(self, x: int) -> bool:
        return x % self.n in self.elements

    def same_group(self, other: "UnitSubgroup") -> bool:
        return self.n == other.n and self.elements == other.elements


def build_subgroup(e: int, ring: ResidueRing) -> UnitSubgroup:
    n = ring.modulus
    e %= n
    if not ring.is_unit(e):
        raise NotAUnitError(f"e={e} is not a unit modulo {n}, so <e> is not a subgroup")
    powers = [1 % n]
    x = e
    while x != 1 % n:
        powers.append(x)
        x = x * e % n
    k = len(powers)
    # cross-check against the kernel; any disagreement is a bug
    assert k == multiplicative_order(e, ring)
    return UnitSubgroup(ring=ring, generator=e, elements=tuple(sorted(powers)), order=k)


def cyclic_subgroups(ring: ResidueRing) -> List[UnitSubgroup]:
    """Distinct cyclic unit subgroups, each represented by its smallest generator.

    Ordered by that generator.
    """
    seen = set()
    out = []
    for e in ring.units():
        G = build_subgroup(e, ring)
        if G.elements not in seen:
            seen.add(G.elements)
            out.append(G)
    return out


@dataclass(frozen=True)
class CosetPartition:
    """The cosets ``rG`` of Z_n, sorted by minimal representative."""

    subgroup: UnitSubgroup
    cosets: Tuple[Tuple[int, ...], ...]
    coset_sizes: Tuple[int, ...]
    size_multiplicity: Dict[int, int] = field(hash=False)

    @property
    def ring(self) -> ResidueRing:
        return self.subgroup.ring

    def __len__(self) -> int:
        return len(self.cosets)

    def image_size_from_census(self) -> int:
        """sum over occurring sizes a of M(a)/a."""
        return sum(self.size_multiplicity[a] // a for a in self.coset_sizes)


def coset_of(r: int, subgroup: UnitSubgroup) -> Tuple[int, ...]:
    n = subgroup.n
    return tuple(sorted({r * g % n for g in subgroup.elements}))


def build_partition(subgroup: UnitSubgroup) -> CosetPartition:
    n = subgroup.n
    assigned = [False] * n
    cosets = []
    for r in range(n):
        if assigned[r]:
            continue
        c = coset_of(r, subgroup)
        for x in c:
            assigned[x] = True
        cosets.append(c)
    # M(a) counts ring elements, not cosets
    mult = Counter()
    for c in cosets:
        mult[len(c)] += len(c)
    return CosetPartition(
        subgroup=subgroup,
        cosets=tuple(cosets),
        coset_sizes=tuple(sorted(mult)),
        size_multiplicity=dict(sorted(mult.items())),
    )


@dataclass(frozen=True)
class CosetIndexFunction:
    """Lookup table sending x to the index of the coset containing it."""

    partition: CosetPartition
    table: Tuple[int, ...]
    image_size: int

    @property
    def ring(self) -> ResidueRing:
        return self.partition.ring

    @property
    def n(self) -> int:
        return self.ring.modulus

    def __call__(self, x: int) -> int:
        return self.table[x % self.n]


def build_coset_index_function(partition: CosetPartition) -> CosetIndexFunction:
    table = [0] * partition.ring.modulus
    # cosets are already in minimal-representative order
    for idx, c in enumerate(partition.cosets):
        for x in c:
            table[x] = idx
    return CosetIndexFunction(
        partition=partition, table=tuple(table), image_size=len(partition.cosets)
    )


def coset_index_function(n: int, e: int) -> CosetIndexFunction:
    """Shortcut: f_G for G = <e> in Z_n."""
    return build_coset_index_function(build_partition(build_subgroup(e, ResidueRing(n))))
