"""Relative difference sets, their liftings, and circulant weighing matrices."""
from .catalog import CatalogEntry, read_catalog, write_catalog
from .cwkit import SignedCirculant, cw_from_rds, is_proper, kronecker, singer_cw, verify_cw
from .errors import (
    CapacityError,
    CatalogIOError,
    DomainError,
    InvariantViolation,
    ParameterError,
    RdsKitError,
    VerificationError,
)
from .feasibility import FeasibilityVerdict, feasibility_report
from .fields import complement_singer_ds, paley_ds, singer_ds, singer_rds, tpp_ds
from .groupring import DesignParams, GroupRingElement, RdsParams, verify_ds, verify_rds
from .multipliers import MultiplierGroup, multiplier_group_bruteforce
from .orbitsearch import (
    classify_equivalence,
    count_inequivalent_lifts,
    intersection_profiles,
    lifts_up_to_translation,
    search_lifts,
)

__version__ = "0.1.0"
