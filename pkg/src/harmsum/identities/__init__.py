"""Catalog of sum relations and their numeric and exact verification."""
from .basis import BasicFunction, basis_list, basis_through
from .catalog import (
    CatalogError,
    RelationRecord,
    catalog,
    completeness,
    find,
    relation_ids,
    select,
    weight_problems,
)
from .verify import Summary, VerificationReport, integral_lhs, residual_at, verify, verify_all

__all__ = [
    "BasicFunction",
    "Summary",
    "VerificationReport",
    "basis_list",
    "basis_through",
    "integral_lhs",
    "residual_at",
    "verify",
    "verify_all",
    "CatalogError",
    "RelationRecord",
    "catalog",
    "completeness",
    "find",
    "relation_ids",
    "select",
    "weight_problems",
]
