# capcalc/main.py - CLI
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, List, Optional

import typer
from pydantic import ValidationError
from tqdm import tqdm

from capcalc import __version__
from capcalc.core.config import settings
from capcalc.core.exceptions import (
    CapcalcError,
    InvalidInputError,
    UncertifiedError,
    UnsupportedError,
    VerificationError,
)
from capcalc.core.logging_config import setup_logging
from capcalc.schemas.classes import CohomClass, format_fraction
from capcalc.schemas.cli import KRange, OutputFormat, PlotFormat, RunConfig, Subcommand
from capcalc.schemas.toric import Polygon, WeightSequence
from capcalc.services import capacity_service, plot_service, toric_service, tropical_service
from capcalc.services import corpus, cremona
from capcalc.services.toric import is_delzant, normalize, reduce_weights

logger = logging.getLogger("capcalc.cli")

app = typer.Typer(
    name="capcalc",
    help="Exact capacities of rational surfaces and toric domains.",
    no_args_is_help=True,
    add_completion=False,
)


# ================================
#   UTILITAIRES
# ================================

@contextmanager
def _handled():
    """Map library errors onto exit codes."""
    try:
        yield
    except CapcalcError as e:
        logger.error(f"❌ {type(e).__name__}: {e.message}")
        typer.echo(f"error: {e.message}", err=True)
        raise typer.Exit(code=e.exit_code)
    except ValidationError as e:
        logger.error(f"❌ invalid input: {e}")
        typer.echo(f"error: invalid input: {e.errors()[0]['msg']}", err=True)
        raise typer.Exit(code=InvalidInputError.exit_code)


def _config(**fields: Any) -> RunConfig:
    try:
        return RunConfig(**fields)
    except ValidationError as e:
        raise InvalidInputError(f"invalid options: {e.errors()[0]['msg']}")


def _emit_json(payload: Any) -> None:
    typer.echo(json.dumps(payload, indent=2, ensure_ascii=False))


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidInputError(f"cannot read {path}: {e.strerror or e}")


# ================================
#   OPTIONS GLOBALES
# ================================

def _version(value: bool) -> None:
    if value:
        typer.echo(f"capcalc {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="CRITICAL, ERROR, WARNING, INFO or DEBUG"),
    threads: Optional[int] = typer.Option(None, "--threads", min=1, help="worker cap (overrides CAPCALC_THREADS)"),
    version: bool = typer.Option(False, "--version", callback=_version, is_eager=True),
):
    setup_logging(level=log_level)
    if threads:
        for service in (capacity_service, tropical_service, toric_service):
            service.max_workers = threads
        logger.info(f"worker cap set to {threads}")


# ================================
#   COMMANDES
# ================================

@app.command()
def fk(
    omega: str = typer.Option(..., "--omega", help='symplectic class "x0;x1,...,xn"'),
    k: str = typer.Option("1", "--k", help="k or a..b"),
    output_format: OutputFormat = typer.Option(OutputFormat.JSON, "--format"),
):
    """Capacities f_k of CP^2 # n(-CP^2) at one symplectic class."""
    with _handled():
        config = _config(subcommand=Subcommand.FK, source=omega, k_range=KRange.parse(k), output_format=output_format)
        w = CohomClass.parse(config.source)
        results = capacity_service.capacities(w, config.k_range.values())

        if config.output_format == OutputFormat.JSON:
            _emit_json({"omega": str(w), "results": [r.to_payload() for r in results]})
        elif config.output_format == OutputFormat.CSV:
            typer.echo("k,value,witnesses")
            for r in results:
                typer.echo(f"{r.k},{format_fraction(r.value)},{' '.join(str(A) for A in r.witnesses)}")
        else:
            for r in results:
                witnesses = ", ".join(A.pretty() for A in r.witnesses)
                typer.echo(f"f_{r.k}({w}) = {format_fraction(r.value)}  [{witnesses}]")


@app.command()
def tropical(
    n: int = typer.Option(..., "--n", min=0),
    k: int = typer.Option(..., "--k", min=1),
    budget: Optional[int] = typer.Option(None, "--budget", min=1, help="largest a to enumerate without a certificate"),
    certify_strict: bool = typer.Option(False, "--certify-strict", help="exit 3 unless the result is certified"),
    output_format: OutputFormat = typer.Option(OutputFormat.JSON, "--format"),
):
    """Finite minimizer set of f_k on the c1-nef cone."""
    with _handled():
        tp = tropical_service.minimizer_set(n, k, budget)
        cert = tropical_service.certificate(n, k)

        if output_format == OutputFormat.JSON:
            payload = tp.to_payload()
            payload["certificate"] = cert.to_payload()
            _emit_json(payload)
        elif output_format == OutputFormat.CSV:
            typer.echo("term")
            for term in tp.terms:
                typer.echo(str(term))
        else:
            status = "certified" if tp.certified else f"uncertified, a <= {tp.a_max}"
            typer.echo(f"f_{k} = {tp.pretty()}  ({status})")

        if certify_strict and not tp.certified:
            raise UncertifiedError(f"f_{k} for n={n} is not certified (budget {tp.a_max})")


@app.command()
def reduce(
    omega: str = typer.Option(..., "--omega", help='symplectic class "x0;x1,...,xn"'),
    output_format: OutputFormat = typer.Option(OutputFormat.JSON, "--format"),
):
    """Sort and Cremona-reduce a symplectic class."""
    with _handled():
        w = CohomClass.parse(omega)
        reduction = cremona.reduce(w)
        if output_format == OutputFormat.PRETTY:
            typer.echo(str(reduction.omega))
            for step in reduction.trace.steps:
                typer.echo(f"  {step.op} {json.dumps(step.to_payload())}")
            if reduction.boundary:
                typer.echo("  (boundary)")
            return
        _emit_json(
            {
                "input": str(w),
                "reduced": str(reduction.omega),
                "boundary": reduction.boundary,
                "reflections": reduction.trace.reflections,
                "trace": reduction.trace.to_payload(),
            }
        )


def _polygon_report(p: Polygon, ks: List[int], crosscheck: bool) -> Dict[str, Any]:
    weights = toric_service.weight_sequence(p)
    rows = toric_service.capacities_of_polygon(p, ks, crosscheck=crosscheck)
    report = {
        "polygon": p.to_payload(),
        "delzant": is_delzant(p),
        "weights": weights.to_payload(),
        "rows": [row.to_payload() for row in rows],
    }
    if crosscheck:
        report["omega"] = str(reduce_weights(weights).omega)
    return report


@app.command()
def polygon(
    file: Path = typer.Option(..., "--file", help='polygon JSON {"vertices": [["p/q","r/s"], ...]}'),
    k: str = typer.Option("1..6", "--k"),
    crosscheck: bool = typer.Option(False, "--crosscheck", help="compare with f_k of the associated class"),
    normalized: bool = typer.Option(False, "--normalize", help="report the normalized polygon"),
    output_format: OutputFormat = typer.Option(OutputFormat.JSON, "--format"),
):
    """ECH capacities of a convex toric domain from its moment polygon."""
    with _handled():
        config = _config(subcommand=Subcommand.POLYGON, source=str(file), k_range=KRange.parse(k), output_format=output_format)
        p = Polygon.parse_json(_read_text(file))
        if normalized:
            p = normalize(p)
        report = _polygon_report(p, config.k_range.values(), crosscheck)

        if config.output_format == OutputFormat.JSON:
            _emit_json(report)
        elif config.output_format == OutputFormat.CSV:
            typer.echo("k,ech,fk,equal")
            for row in report["rows"]:
                equal = "" if row["equal"] is None else str(row["equal"]).lower()
                typer.echo(f"{row['k']},{row['ech']},{row['fk'] or ''},{equal}")
        else:
            typer.echo(f"weights {report['weights']['text']}")
            for row in report["rows"]:
                suffix = f"  f_k={row['fk']} {'✅' if row['equal'] else '❌'}" if crosscheck else ""
                typer.echo(f"c_{row['k']} = {row['ech']}{suffix}")

        mismatches = [row["k"] for row in report["rows"] if row["equal"] is False]
        if mismatches:
            raise VerificationError(f"ECH and f_k disagree at k={mismatches}")


@app.command()
def weights(
    text: str = typer.Argument(..., help='weight sequence "head;b1,b2;c1,c2"'),
    k: Optional[str] = typer.Option(None, "--k", help="also compute ECH capacities for k or a..b"),
    output_format: OutputFormat = typer.Option(OutputFormat.JSON, "--format"),
):
    """Reduced symplectic class (and optionally ECH capacities) of a weight sequence."""
    with _handled():
        ws = WeightSequence.parse(text)
        reduction = reduce_weights(ws)
        ks = KRange.parse(k).values() if k else []
        capacities = [(j, toric_service.ech_capacity(ws, j)) for j in ks]

        if output_format == OutputFormat.JSON:
            _emit_json(
                {
                    "weights": ws.to_payload(),
                    "omega": str(reduction.omega),
                    "boundary": reduction.boundary,
                    "trace": reduction.trace.to_payload(),
                    "capacities": [{"k": j, "ech": format_fraction(c)} for j, c in capacities],
                }
            )
        elif output_format == OutputFormat.CSV:
            typer.echo("k,ech")
            for j, c in capacities:
                typer.echo(f"{j},{format_fraction(c)}")
        else:
            typer.echo(f"{ws} -> {reduction.omega}{' (boundary)' if reduction.boundary else ''}")
            for j, c in capacities:
                typer.echo(f"c_{j} = {format_fraction(c)}")


@app.command()
def plot(
    n: int = typer.Option(1, "--n"),
    k: str = typer.Option("1..8", "--k"),
    samples: Optional[int] = typer.Option(None, "--samples"),
    plot_format: PlotFormat = typer.Option(PlotFormat.CSV, "--format"),
    mark_breakpoints: bool = typer.Option(False, "--mark-breakpoints", help="CSV: add a 1/0 breakpoint column"),
    out: Optional[Path] = typer.Option(None, "--out", help="write here instead of stdout"),
):
    """Curves x -> f_k(1 | x) for x in (0, 1), breakpoints included."""
    with _handled():
        if n != 1:
            raise UnsupportedError(f"plot is only available for n = 1, got n={n}")
        config = _config(
            subcommand=Subcommand.PLOT,
            k_range=KRange.parse(k),
            samples=samples or settings.PLOT_DEFAULT_SAMPLES,
            plot_format=plot_format,
            out=str(out) if out else None,
            mark_breakpoints=mark_breakpoints,
        )
        ks = config.k_range.values()
        rows = plot_service.rows(ks, config.samples)
        if config.plot_format == PlotFormat.CSV:
            text = plot_service.to_csv(rows, ks, config.mark_breakpoints)
        else:
            text = plot_service.to_svg(rows, ks)

        if out is None:
            typer.echo(text, nl=False)
            return
        try:
            out.write_text(text, encoding="utf-8")
        except OSError as e:
            raise InvalidInputError(f"cannot write {out}: {e.strerror or e}")
        logger.info(f"✅ plot written to {out}")


@app.command()
def verify(
    max_k: Optional[int] = typer.Option(None, "--max-k", min=1, help="defaults to VERIFY_MAX_K"),
    polygon_names: Optional[List[str]] = typer.Option(None, "--polygon", help="restrict to named corpus polygons"),
):
    """Check ECH = f_k on the polygon corpus and the known minimizer sets for n = 1."""
    with _handled():
        ks = list(range(1, (max_k or settings.VERIFY_MAX_K) + 1))
        selected = corpus.select(polygon_names or settings.verify_polygons_list)
        failures = []

        for name, p in tqdm(selected.items(), desc="polygons", file=sys.stderr, disable=None):
            rows = toric_service.capacities_of_polygon(p, ks, crosscheck=True)
            bad = [row.k for row in rows if not row.equal]
            if bad:
                failures.append({"check": "polygon", "name": name, "k": bad})

        for k, expected in tqdm(corpus.KNOWN_TERMS_N1.items(), desc="minimizer sets", file=sys.stderr, disable=None):
            found = {(term.a, term.b[0]) for term in tropical_service.minimizer_set(1, k).terms}
            if found != expected:
                failures.append({"check": "minimizer set", "name": f"f{k}", "k": [k]})

        _emit_json(
            {
                "polygons": list(selected),
                "k_max": ks[-1],
                "minimizer_sets": len(corpus.KNOWN_TERMS_N1),
                "failures": failures,
                "ok": not failures,
            }
        )
        if failures:
            raise VerificationError(f"{len(failures)} check(s) failed")
        logger.info("✅ all checks passed")


if __name__ == "__main__":
    app()
