# capcalc/services/__init__.py
import logging

logger = logging.getLogger(__name__)

# Import des services
from .capacity import CapacityService, capacity_service
from .tropical import TropicalService, tropical_service
from .toric import ToricService, toric_service
from .plotting import PlotService, plot_service

__all__ = [
    "CapacityService",
    "capacity_service",
    "TropicalService",
    "tropical_service",
    "ToricService",
    "toric_service",
    "PlotService",
    "plot_service",
]
