# capcalc/schemas/__init__.py
from .classes import CohomClass, HomologyClass, format_fraction, to_fraction
from .reduction import ConeVertexSet, CremonaStep, ReductionTrace, SortStep
from .capacity import BlowupTerm, CapacityResult
from .tropical import BoundCertificate, TropicalCapacity
from .toric import Polygon, PolygonCapacityRow, WeightSequence
from .cli import KRange, OutputFormat, PlotFormat, PlotRow, RunConfig, Subcommand

__all__ = [
    "CohomClass",
    "HomologyClass",
    "format_fraction",
    "to_fraction",
    "ConeVertexSet",
    "CremonaStep",
    "ReductionTrace",
    "SortStep",
    "BlowupTerm",
    "CapacityResult",
    "BoundCertificate",
    "TropicalCapacity",
    "Polygon",
    "PolygonCapacityRow",
    "WeightSequence",
    "KRange",
    "OutputFormat",
    "PlotFormat",
    "PlotRow",
    "RunConfig",
    "Subcommand",
]
