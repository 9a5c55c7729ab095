"""Named families of cyclic subgroups with closed-form (n, m, S) predictions.

Each constructor validates its parameters, picks the generator ``e`` and
records the predicted image size ``m``, the value set ``S`` and, where a
closed form exists, the count N(a) on each divisibility class of the shift.
:func:`verify_family` checks a descriptor against both spectrum routes.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from dataclasses import dataclass, field, replace
from math import gcd
from typing import Callable, Dict, List, Optional, Tuple

from .coset import build_coset_index_function, build_partition, build_subgroup
from .modular import (
    ResidueRing,
    crt_solve,
    divisors,
    euler_phi,
    factorize,
    is_prime,
    is_primitive_root,
    p_adic_valuation,
    primitive_root,
)
from .spectrum import spectrum_direct, spectrum_via_unions

DEFAULT_BRUTE_BOUND = 4096


class FamilyId(str, enum.Enum):
    Z4 = "Z4"
    TWO_POWER = "TWO_POWER"
    P_SQUARED = "P_SQUARED"
    P_POWER_MINUS = "P_POWER_MINUS"
    P_POWER_PLUS_S = "P_POWER_PLUS_S"
    MP_CRT = "MP_CRT"
    P1P2_CRT = "P1P2_CRT"


class PreconditionError(ValueError):
    """Family parameters violate the construction's hypotheses."""


class Verdict(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    UNVERIFIABLE = "UNVERIFIABLE"


@dataclass(frozen=True)
class ClassPrediction:
    description: str
    count: int
    applies: Callable[[int], bool] = field(compare=False, repr=False)


@dataclass(frozen=True)
class FamilyDescriptor:
    family_id: FamilyId
    parameters: Dict[str, int] = field(hash=False)
    generator: int
    predicted_n: int
    predicted_m: int
    predicted_S: Tuple[int, ...]
    predicted_per_class: Tuple[ClassPrediction, ...] = ()
    predicted_order: Optional[int] = None
    notes: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "predicted_S", tuple(sorted(set(self.predicted_S))))

    @property
    def predicted(self) -> Tuple[int, int, Tuple[int, ...]]:
        return self.predicted_n, self.predicted_m, self.predicted_S


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise PreconditionError(message)


def _generator_for(p: int, override: Optional[int], name: str) -> int:
    if override is None:
        return primitive_root(p)
    _require(is_primitive_root(override, p), f"{name}={override} is not a generator of Z_{p}^x")
    return override % p


# --------------------------------------------------------------------------
# constructors


def family_z4() -> List[FamilyDescriptor]:
    """The two subgroups of the unit group of Z_4."""
    return [
        FamilyDescriptor(
            FamilyId.Z4, {"row": 1}, generator=1,
            predicted_n=4, predicted_m=4, predicted_S=(0,), predicted_order=1,
        ),
        FamilyDescriptor(
            FamilyId.Z4, {"row": 2}, generator=3,
            predicted_n=4, predicted_m=3, predicted_S=(0, 2), predicted_order=2,
        ),
    ]


def family_two_power(k: int) -> FamilyDescriptor:
    _require(k > 2, f"k must be > 2 (k=2 is the Z4 family), got k={k}")
    n = 2**k
    return FamilyDescriptor(
        FamilyId.TWO_POWER, {"k": k},
        generator=2 ** (k - 1) - 1,
        predicted_n=n,
        predicted_m=2 ** (k - 1) + 1,
        predicted_S=(0, 2),
        predicted_per_class=(
            ClassPrediction("2 divides a", 2, lambda a: a % 2 == 0),
            ClassPrediction("2 does not divide a", 0, lambda a: a % 2 == 1),
        ),
        predicted_order=2,
    )


def family_p_squared(p: int) -> FamilyDescriptor:
    _require(p > 2 and is_prime(p), f"p must be an odd prime, got p={p}")
    return FamilyDescriptor(
        FamilyId.P_SQUARED, {"p": p},
        generator=p - 1,
        predicted_n=p * p,
        predicted_m=p,
        predicted_S=(p, p * p - p + 1),
        predicted_per_class=(
            ClassPrediction(f"{p} divides a", p * p - p + 1, lambda a: a % p == 0),
            ClassPrediction(f"{p} does not divide a", p, lambda a: a % p != 0),
        ),
        predicted_order=2 * p,
    )


def family_p_power_minus(p: int, k: int) -> FamilyDescriptor:
    _require(p > 2 and is_prime(p), f"p must be an odd prime, got p={p}")
    _require(k > 2, f"k must be > 2, got k={k}")
    n = p**k
    top = p ** (k - 1)
    big = n - top + 1
    return FamilyDescriptor(
        FamilyId.P_POWER_MINUS, {"p": p, "k": k},
        generator=top - 1,
        predicted_n=n,
        predicted_m=(2 * top - p ** (k - 2) + 1) // 2,
        predicted_S=(1, p, big),
        predicted_per_class=(
            ClassPrediction(f"{top} divides a", big, lambda a: a % top == 0),
            ClassPrediction(f"{p} does not divide a", p, lambda a: a % p != 0),
            ClassPrediction(
                f"{p} divides a, {top} does not", 1,
                lambda a: a % p == 0 and a % top != 0,
            ),
        ),
        predicted_order=2 * p,
    )


def _phi_prefix(p: int, k: int, i: int) -> int:
    """phi(p^k) + phi(p^(k-1)) + ... + phi(p^(k-i))."""
    return sum(euler_phi(p ** (k - j)) for j in range(i + 1))


def family_p_power_plus_s(p: int, k: int, s: int) -> FamilyDescriptor:
    _require(is_prime(p), f"p must be prime, got p={p}")
    _require(s >= 1, f"s must be >= 1, got s={s}")
    _require(k >= 2 * s, f"k must be >= 2s, got k={k}, s={s}")
    n = p**k
    m = (s * p + p - s) * p ** (k - s - 1)
    S = {0} | {_phi_prefix(p, k, i) for i in range(s)}

    def exact(i: int) -> Callable[[int], bool]:
        return lambda a: p_adic_valuation(a, p) == i

    classes = [ClassPrediction(f"{p}^{i} exactly divides a", 0, exact(i)) for i in range(k - s)]
    # valuation k-s+i carries the (i+1)-term prefix sum
    classes += [
        ClassPrediction(
            f"{p}^{v} exactly divides a", _phi_prefix(p, k, v - (k - s)), exact(v)
        )
        for v in range(k - s, k)
    ]
    summed = (
        sum(euler_phi(p ** (k - i)) // p ** (s - i) for i in range(s))
        + sum(euler_phi(p ** (k - i)) for i in range(s, k + 1))
        + 1
    )
    notes = ()
    if summed != m:
        notes = (
            f"termwise coset-count sum gives {summed}, closed form gives {m}; "
            "the closed form is the prediction",
        )
    return FamilyDescriptor(
        FamilyId.P_POWER_PLUS_S, {"p": p, "k": k, "s": s},
        generator=p ** (k - s) + 1,
        predicted_n=n,
        predicted_m=m,
        predicted_S=tuple(S),
        predicted_per_class=tuple(classes),
        predicted_order=p**s,
        notes=notes,
    )


def family_mp_crt(
    m: int, p: int, s: int, t: int, g: Optional[int] = None
) -> FamilyDescriptor:
    _require(is_prime(p), f"p must be prime, got p={p}")
    _require(m >= 2, f"m must be >= 2 (m=1 is the prime field case), got m={m}")
    _require(gcd(m, p) == 1, f"gcd(m, p) must be 1, got m={m}, p={p}")
    _require(s >= 1 and t >= 1, f"s and t must be >= 1, got s={s}, t={t}")
    _require(s * t == p - 1, f"s*t must equal p-1={p - 1}, got s*t={s * t}")
    g = _generator_for(p, g, "g")
    e, n = crt_solve([(1 % m, m), (pow(g, t, p), p)])
    return FamilyDescriptor(
        FamilyId.MP_CRT, {"m": m, "p": p, "s": s, "t": t, "g": g},
        generator=e,
        predicted_n=n,
        predicted_m=m * (1 + t),
        predicted_S=(0, m * (s - 1)),
        # e = 1 (mod m) makes every g - 1 a multiple of m, so shifts with
        # m not dividing a have no solutions at all
        predicted_per_class=(
            ClassPrediction(f"{p} divides a", 0, lambda a: a % p == 0),
            ClassPrediction(f"{m} does not divide a", 0, lambda a: a % m != 0),
            ClassPrediction(
                f"{m} divides a, {p} does not", m * (s - 1),
                lambda a: a % m == 0 and a % p != 0,
            ),
        ),
        predicted_order=s,
    )


def family_p1p2_crt(
    p1: int, p2: int, s1: int, t1: int, s2: int, t2: int,
    g1: Optional[int] = None, g2: Optional[int] = None,
) -> FamilyDescriptor:
    _require(is_prime(p1), f"p1 must be prime, got p1={p1}")
    _require(is_prime(p2), f"p2 must be prime, got p2={p2}")
    _require(p1 != p2, f"p1 and p2 must be distinct, got {p1}")
    _require(min(s1, t1, s2, t2) >= 1, "s1, t1, s2, t2 must all be >= 1")
    _require(s1 * t1 == p1 - 1, f"s1*t1 must equal p1-1={p1 - 1}, got {s1 * t1}")
    _require(s2 * t2 == p2 - 1, f"s2*t2 must equal p2-1={p2 - 1}, got {s2 * t2}")
    g1 = _generator_for(p1, g1, "g1")
    g2 = _generator_for(p2, g2, "g2")
    d = gcd(s1, s2)
    e, n = crt_solve([(pow(g1, t1, p1), p1), (pow(g2, t2, p2), p2)])
    a0 = (s1 * s2 - s1 - s2) // d + 1
    a1 = (p1 - 1) * s2 // d - p1 + s2
    a2 = (p2 - 1) * s1 // d - p2 + s1
    return FamilyDescriptor(
        FamilyId.P1P2_CRT,
        {"p1": p1, "p2": p2, "s1": s1, "t1": t1, "s2": s2, "t2": t2,
         "g1": g1, "g2": g2, "d": d},
        generator=e,
        predicted_n=n,
        predicted_m=1 + t1 + t2 + d * t1 * t2,
        predicted_S=(a0, a1, a2),
        predicted_per_class=(
            ClassPrediction("gcd(a, n) = 1", a0, lambda a: gcd(a, n) == 1),
            ClassPrediction(f"{p1} divides a", a1, lambda a: a % p1 == 0),
            ClassPrediction(f"{p2} divides a", a2, lambda a: a % p2 == 0),
        ),
        predicted_order=s1 * s2 // d,
    )


def table_two_rows() -> List[FamilyDescriptor]:
    """One instance per summary row, at the smallest parameters."""
    return [
        family_z4()[1],
        family_two_power(3),
        family_p_squared(3),
        family_p_power_minus(3, 3),
        family_p_power_plus_s(3, 2, 1),
        family_mp_crt(2, 5, 2, 2),
        family_p1p2_crt(5, 7, 2, 2, 3, 2),
    ]


def families_for_modulus(n: int) -> List[FamilyDescriptor]:
    """Every family instance (smallest primitive roots) living on Z_n."""
    out: List[FamilyDescriptor] = []
    fac = factorize(n)
    if n == 4:
        out.extend(family_z4())
    if len(fac) == 1:
        p, k = fac[0]
        if p == 2 and k > 2:
            out.append(family_two_power(k))
        if p > 2 and k == 2:
            out.append(family_p_squared(p))
        if p > 2 and k > 2:
            out.append(family_p_power_minus(p, k))
        for s in range(1, k // 2 + 1):
            out.append(family_p_power_plus_s(p, k, s))
    for p, k in fac:
        if k == 1 and n > p:
            for s in divisors(p - 1):
                out.append(family_mp_crt(n // p, p, s, (p - 1) // s))
    if len(fac) == 2 and fac[0][1] == fac[1][1] == 1:
        p1, p2 = fac[0][0], fac[1][0]
        for s1 in divisors(p1 - 1):
            for s2 in divisors(p2 - 1):
                out.append(family_p1p2_crt(p1, p2, s1, (p1 - 1) // s1, s2, (p2 - 1) // s2))
    return out


# --------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerificationReport:
    descriptor: FamilyDescriptor
    subgroup_elements: Tuple[int, ...]
    measured_order: int
    measured_m: int
    measured_S: Tuple[int, ...]
    per_class_match: bool
    paths_agree: Optional[bool]
    verdict: Verdict
    mismatches: Tuple[str, ...] = ()
    notes: Tuple[str, ...] = ()

    @property
    def measured(self) -> Tuple[int, int, Tuple[int, ...]]:
        return self.descriptor.predicted_n, self.measured_m, self.measured_S


def verify_family(
    descriptor: FamilyDescriptor, brute_bound: int = DEFAULT_BRUTE_BOUND
) -> VerificationReport:
    """Measure the descriptor's coset index function and compare with its predictions.

    Above ``brute_bound`` only the unions route runs and the verdict is
    UNVERIFIABLE rather than PASS or FAIL.
    """
    n = descriptor.predicted_n
    G = build_subgroup(descriptor.generator, ResidueRing(n))
    via_unions = spectrum_via_unions(G)
    notes = descriptor.notes
    if n > brute_bound:
        return VerificationReport(
            descriptor, G.elements, G.order, via_unions.m, via_unions.S,
            per_class_match=False, paths_agree=None, verdict=Verdict.UNVERIFIABLE,
            notes=notes + (f"n={n} exceeds brute bound {brute_bound}; oracle not run",),
        )
    direct = spectrum_direct(build_coset_index_function(build_partition(G)))
    mismatches = []
    paths_agree = direct == via_unions
    if not paths_agree:
        mismatches.append("direct and union-of-solutions spectra disagree")
    if descriptor.predicted_order is not None and G.order != descriptor.predicted_order:
        mismatches.append(f"|G|: predicted {descriptor.predicted_order}, measured {G.order}")
    if direct.m != descriptor.predicted_m:
        mismatches.append(f"m: predicted {descriptor.predicted_m}, measured {direct.m}")
    if direct.S != descriptor.predicted_S:
        mismatches.append(
            f"S: predicted {list(descriptor.predicted_S)}, measured {list(direct.S)}"
        )
    per_class_ok = True
    for cls in descriptor.predicted_per_class:
        bad = [a for a in range(1, n) if cls.applies(a) and direct.count(a) != cls.count]
        if bad:
            per_class_ok = False
            a = bad[0]
            mismatches.append(
                f"N(a) on class '{cls.description}': predicted {cls.count}, "
                f"measured {direct.count(a)} at a={a} ({len(bad)} shifts differ)"
            )
    return VerificationReport(
        descriptor, G.elements, G.order, direct.m, direct.S,
        per_class_match=per_class_ok,
        paths_agree=paths_agree,
        verdict=Verdict.FAIL if mismatches else Verdict.PASS,
        mismatches=tuple(mismatches),
        notes=notes,
    )


def with_expectations(
    descriptor: FamilyDescriptor,
    m: Optional[int] = None,
    S: Optional[Tuple[int, ...]] = None,
) -> FamilyDescriptor:
    """Replace the predicted m and/or S, e.g. to check a claimed value."""
    changes = {}
    if m is not None:
        changes["predicted_m"] = m
    if S is not None:
        changes["predicted_S"] = tuple(S)
    return replace(descriptor, **changes) if changes else descriptor


@lru_cache(maxsize=256)
def _family_subgroups(n: int) -> Tuple[Tuple[FamilyDescriptor, Tuple[int, ...]], ...]:
    ring = ResidueRing(n)
    return tuple(
        (desc, build_subgroup(desc.generator, ring).elements)
        for desc in families_for_modulus(n)
    )


def match_family(
    n: int, elements: Tuple[int, ...], m: int, S: Tuple[int, ...]
) -> Optional[FamilyDescriptor]:
    """First family instance on Z_n with this subgroup whose (m, S) prediction holds."""
    for desc, members in _family_subgroups(n):
        if members == elements and desc.predicted_m == m and desc.predicted_S == S:
            return desc
    return None
