"""Map-ready artifacts: point layers, heatmap grids, region coverage."""

from .heatmap import DEFAULT_CELL_SIZE_M, HeatmapGrid, heatmap
from .layers import export_layer, export_pin_layer, layer_to_json
from .regions import UNASSIGNED, Region, RegionSet, region_coverage

__all__ = [
    "DEFAULT_CELL_SIZE_M",
    "HeatmapGrid",
    "Region",
    "RegionSet",
    "UNASSIGNED",
    "export_layer",
    "export_pin_layer",
    "heatmap",
    "layer_to_json",
    "region_coverage",
]
