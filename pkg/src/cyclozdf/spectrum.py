"""Zero-difference spectra of coset index functions.

Two independent routes produce the same :class:`ZdfSpectrum`:

* :func:`spectrum_direct` counts ``x`` with ``f(x + a) == f(x)`` for every
  shift ``a``. It only looks at the lookup table and is the trusted oracle.
* :func:`spectrum_via_unions` never looks at the table. For each shift it
  collects the solutions of ``x*(g - 1) = a`` over all ``g`` in ``G`` using the
  congruence solver, and gets the image size from a fixed-point count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .coset import CosetIndexFunction, UnitSubgroup
from .modular import LinearCongruence, ResidueRing

ZDBF = "ZDBF"
ZDF = "ZDF"


class InternalInconsistencyError(RuntimeError):
    """A state that valid inputs can never reach."""


@dataclass(frozen=True)
class ZdfSpectrum:
    """Per-shift collision counts for shifts ``1..n-1``.

    ``per_shift[a - 1]`` is N(a); use :meth:`count` to index by shift.
    """

    n: int
    m: int
    per_shift: Tuple[int, ...]

    def count(self, a: int) -> int:
        if not 0 < a < self.n:
            raise ValueError(f"shift must lie in [1, {self.n}), got {a}")
        return self.per_shift[a - 1]

    @property
    def S(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.per_shift)))

    @property
    def classification(self) -> str:
        return ZDBF if len(self.S) == 1 else ZDF

    @property
    def lam(self) -> Optional[int]:
        """The balanced count when the function is a ZDBF, else None."""
        return self.S[0] if len(self.S) == 1 else None

    @property
    def parameters(self) -> Tuple[int, int, Tuple[int, ...]]:
        return self.n, self.m, self.S

    def by_shift(self) -> Dict[int, int]:
        return {a: c for a, c in enumerate(self.per_shift, start=1)}


@dataclass(frozen=True)
class SolutionUnion:
    shift: int
    union_set: FrozenSet[int]

    @property
    def size(self) -> int:
        return len(self.union_set)


def spectrum_of_table(table: Sequence[int]) -> ZdfSpectrum:
    """Direct spectrum of an arbitrary function Z_n -> Z_m given as a table."""
    t = np.asarray(table, dtype=np.int64)
    n = int(t.size)
    if n < 2:
        raise ValueError("table must have length >= 2")
    counts = tuple(int(np.count_nonzero(np.roll(t, -a) == t)) for a in range(1, n))
    return ZdfSpectrum(n=n, m=int(np.unique(t).size), per_shift=counts)


def spectrum_direct(f: CosetIndexFunction) -> ZdfSpectrum:
    return spectrum_of_table(f.table)


def collision_set(f: CosetIndexFunction, a: int) -> FrozenSet[int]:
    """``{x : f(x + a) == f(x)}``."""
    t = np.asarray(f.table, dtype=np.int64)
    return frozenset(np.flatnonzero(np.roll(t, -a) == t).tolist())


def collision_sets(f: CosetIndexFunction) -> List[FrozenSet[int]]:
    """:func:`collision_set` for every shift ``1..n-1``, in order."""
    t = np.asarray(f.table, dtype=np.int64)
    n = t.size
    doubled = np.concatenate([t, t])
    return [
        frozenset(np.flatnonzero(doubled[a:a + n] == t).tolist()) for a in range(1, n)
    ]


def _solvers(subgroup: UnitSubgroup) -> List[LinearCongruence]:
    n = subgroup.n
    return [LinearCongruence((g - 1) % n, n) for g in subgroup.elements]


def _union(solvers: List[LinearCongruence], a: int) -> FrozenSet[int]:
    found = set()
    for lc in solvers:
        found.update(lc.solve(a))
    return frozenset(found)


def solution_union(subgroup: UnitSubgroup, a: int) -> SolutionUnion:
    """Union over g in G of the solution sets of ``x*(g - 1) = a (mod n)``."""
    a %= subgroup.n
    if a == 0:
        raise ValueError("shift must be nonzero")
    return SolutionUnion(shift=a, union_set=_union(_solvers(subgroup), a))


def solution_unions(subgroup: UnitSubgroup) -> List[SolutionUnion]:
    """:func:`solution_union` for every shift ``1..n-1``, in order."""
    solvers = _solvers(subgroup)
    return [SolutionUnion(a, _union(solvers, a)) for a in range(1, subgroup.n)]


def orbit_count(subgroup: UnitSubgroup) -> int:
    """Number of cosets rG, counted as the average number of fixed points.

    g fixes x iff x*(g - 1) = 0, which has gcd(g - 1, n) solutions.
    """
    fixed = sum(lc.d for lc in _solvers(subgroup))
    if fixed % subgroup.order:
        raise InternalInconsistencyError("fixed-point total not divisible by |G|")
    return fixed // subgroup.order


def spectrum_via_unions(subgroup: UnitSubgroup) -> ZdfSpectrum:
    counts = tuple(u.size for u in solution_unions(subgroup))
    n = subgroup.n
    return ZdfSpectrum(n=n, m=orbit_count(subgroup), per_shift=counts)


@dataclass(frozen=True)
class ZdbfCondition:
    holds: bool
    predicted: Optional[Tuple[int, int, int]]  # (n, m, lambda)
    offending: Tuple[int, ...] = ()


def check_zdbf_condition(subgroup: UnitSubgroup) -> ZdbfCondition:
    """Check that every ``g - 1`` with ``g != 1`` is a unit of Z_n.

    When it is, the coset index function is balanced with parameters
    ``(n, (n - 1)/k + 1, k - 1)`` where ``k = |G|``.
    """
    ring: ResidueRing = subgroup.ring
    n, k = ring.modulus, subgroup.order
    bad = tuple(g for g in subgroup.elements if g != 1 and not ring.is_unit(g - 1))
    if bad:
        return ZdbfCondition(False, None, bad)
    if (n - 1) % k:
        raise InternalInconsistencyError(
            f"condition holds for n={n} but |G|={k} does not divide n-1"
        )
    return ZdbfCondition(True, (n, (n - 1) // k + 1, k - 1))
