# capcalc/services/plotting.py
"""Sampled curves x -> f_k(1 | x) on (0, 1), as exact CSV or an SVG chart."""
import csv
from fractions import Fraction
from io import StringIO
from pathlib import Path
from typing import List, Optional, Sequence
import logging

import numpy as np
from jinja2 import Environment, FileSystemLoader, select_autoescape

from capcalc.core.config import Settings, settings
from capcalc.core.exceptions import InvalidInputError
from capcalc.schemas.classes import CohomClass, format_fraction
from capcalc.schemas.cli import PlotRow
from capcalc.services.tropical import TropicalService, tropical_service

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).resolve().parent.parent / "templates"
SVG_TEMPLATE = "capacity_plot.svg.j2"
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")


class PlotService:
    def __init__(self, config: Settings = settings, tropical: Optional[TropicalService] = None):
        self.config = config
        self.tropical = tropical or tropical_service
        self.env = Environment(
            loader=FileSystemLoader(str(TEMPLATES_DIR)),
            autoescape=select_autoescape(["svg", "xml"]),
            trim_blocks=True,
            lstrip_blocks=True,
        )

    def rows(self, ks: Sequence[int], samples: Optional[int] = None) -> List[PlotRow]:
        """Uniform interior grid j/(samples+1) merged with every breakpoint of every curve."""
        samples = samples or self.config.PLOT_DEFAULT_SAMPLES
        if samples < 2:
            raise InvalidInputError(f"samples must be >= 2, got {samples}")
        if not ks:
            raise InvalidInputError("empty k-range")

        curves = [self.tropical.minimizer_set(1, k) for k in ks]
        breakpoints = set()
        for curve in curves:
            breakpoints.update(self.tropical.breakpoints(curve))

        grid = {Fraction(j, samples + 1) for j in range(1, samples + 1)} | breakpoints
        rows = []
        for x in sorted(grid):
            omega = CohomClass(x0=1, x=(x,))
            values = tuple(self.tropical.eval(curve, omega) for curve in curves)
            rows.append(PlotRow(x=x, values=values, breakpoint=x in breakpoints))
        logger.info(f"plot: {len(rows)} rows ({len(breakpoints)} breakpoints) for k={list(ks)}")
        return rows

    def to_csv(self, rows: Sequence[PlotRow], ks: Sequence[int], mark_breakpoints: bool = False) -> str:
        """Header x,f1,...,fK; mark_breakpoints appends a 1/0 breakpoint column."""
        output = StringIO()
        writer = csv.writer(output, lineterminator="\n")
        header = ["x"] + [f"f{k}" for k in ks]
        writer.writerow(header + ["breakpoint"] if mark_breakpoints else header)
        for row in rows:
            line = [format_fraction(row.x)] + [format_fraction(v) for v in row.values]
            if mark_breakpoints:
                line.append(1 if row.breakpoint else 0)
            writer.writerow(line)
        return output.getvalue()

    def to_svg(self, rows: Sequence[PlotRow], ks: Sequence[int], width: int = 640, height: int = 420) -> str:
        """Polyline chart; floats are used for drawing only."""
        margin = 48
        xs = np.array([float(row.x) for row in rows])
        values = np.array([[float(v) for v in row.values] for row in rows])
        top = float(values.max()) if values.size else 1.0
        top = top if top > 0 else 1.0

        px = margin + xs * (width - 2 * margin)
        py = height - margin - values / top * (height - 2 * margin)

        series = []
        for column, k in enumerate(ks):
            points = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(px, py[:, column]))
            series.append({"k": k, "points": points, "color": PALETTE[column % len(PALETTE)]})

        markers = [
            {"x": f"{px[i]:.2f}", "label": format_fraction(row.x)} for i, row in enumerate(rows) if row.breakpoint
        ]
        ticks = [
            {"y": f"{height - margin - v / top * (height - 2 * margin):.2f}", "label": f"{v:g}"}
            for v in np.linspace(0.0, top, 5)
        ]
        template = self.env.get_template(SVG_TEMPLATE)
        return template.render(
            width=width,
            height=height,
            margin=margin,
            series=series,
            markers=markers,
            ticks=ticks,
        )


plot_service = PlotService()
