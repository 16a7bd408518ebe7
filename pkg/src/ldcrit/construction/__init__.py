"""The twelve-column grid of embeddings, its count laws and audits."""

from __future__ import annotations

from .audit import (
    SCHEMA_VERSION, AuditReport, Check, Identity, audit_grid, dump_grid, dumps_grid, grid_identities,
)
from .grid import (
    HAT, NCOLS, SEEDS, SIDE_CONDITIONS, ConstructionError, Entry, GridState, Lazy,
    MissingSideCondition, block_plan, extend_column, init_grid, normalize_caps, produced, run_grid,
)

__all__ = [n for n in dir() if not n.startswith("_")]
