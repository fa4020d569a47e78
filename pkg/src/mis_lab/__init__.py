"""Pattern counting and entropy for 2-multiplicative integer systems."""

from .boundary import SpeedSpec, h_boundary, h_boundary_limit, realize, thresholds_A
from .counting import (BoundaryRegion, MisSpec, log_pattern_count, log_pattern_count_region, mis_entropy,
                       pattern_count_exact)
from .errors import BudgetError, DomainError, MisLabError
from .highprec import HighPrecReal
from .lattice import Box, ChainHistogram, MultiplierVector, hist_J, hist_K
from .sft2d import Sft2dSpec, block_gluing_probe, frame_count_empirical, strip_entropy
from .subshift import SubshiftSpec, perron_data
from .surface import convergence_table, surface_correction

__version__ = "0.1.0"

__all__ = [
    "Box", "BoundaryRegion", "BudgetError", "ChainHistogram", "DomainError", "HighPrecReal", "MisLabError",
    "MisSpec", "MultiplierVector", "Sft2dSpec", "SpeedSpec", "SubshiftSpec", "block_gluing_probe",
    "convergence_table", "frame_count_empirical", "h_boundary", "h_boundary_limit", "hist_J", "hist_K",
    "log_pattern_count", "log_pattern_count_region", "mis_entropy", "pattern_count_exact", "perron_data",
    "realize", "strip_entropy", "surface_correction", "thresholds_A",
]
