"""Zero-difference functions over Z_n built from cosets of cyclic unit subgroups."""

from .coset import (
    CosetIndexFunction,
    CosetPartition,
    UnitSubgroup,
    build_coset_index_function,
    build_partition,
    build_subgroup,
    coset_index_function,
    cyclic_subgroups,
)
from .families import (
    FamilyDescriptor,
    FamilyId,
    PreconditionError,
    Verdict,
    VerificationReport,
    family_mp_crt,
    family_p1p2_crt,
    family_p_power_minus,
    family_p_power_plus_s,
    family_p_squared,
    family_two_power,
    family_z4,
    verify_family,
)
from .modular import NotAUnitError, ResidueRing
from .spectrum import (
    ZdfSpectrum,
    check_zdbf_condition,
    solution_union,
    spectrum_direct,
    spectrum_via_unions,
)

__version__ = "0.1.0"
