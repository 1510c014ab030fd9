"""Command-line interface: ``qse <command> [flags]``.

Inputs are JSON files (see :mod:`qse.channels`) or, wherever a channel is
expected, a generator spec such as ``gen:depolarizing,d=2,p=1`` or
``gen:random,d=3,rank=2,seed=7``.

Exit codes: 0 on success, 1 when a verification suite finds a violation in
assertion mode, 2 on bad input.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import sys

import click
import numpy as np

from . import __version__, suites
from .channels import (
    ChoiMatrix,
    KrausSet,
    _decode,
    apply_channel,
    as_choi,
    as_kraus,
    channel_from_dict,
    channel_to_dict,
    kraus_to_choi,
    load_json,
    random_channel,
    save_json,
    standard_channel,
)
from .entropy import (
    EntropyParams,
    density_spectrum,
    unified_entropy,
    unified_entropy_spectrum,
    validate_density,
)
from .errors import QSEError
from .exchange import check_lindblad_extension, entropy_exchange
from .mapentropy import (
    additivity_residual,
    classify_additivity,
    evaluate_bounds,
    map_entropy,
    tensor_map_entropy_grid,
)
from .unraveling import check_theorem1, check_theorem2, extremal_trace_condition, extremal_unraveling, unraveling_entropy

SIG = 12
CHANNEL_KINDS = ("identity", "depolarizing", "pinching", "amplitude_damping", "phase_damping", "random")
SCAN_COLUMNS = ("q", "s", "d", "distance", "norm_kind", "bound_kind", "bound_value", "valid", "observed_delta", "sound")


def fmt(x) -> str:
    """Numbers with 12 significant digits; other values unchanged."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.{SIG}g}"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return str(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(f"{x:.{SIG}g}") if math.isfinite(x) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def emit(data: dict, out_format: str, out_path: str | None = None) -> None:
    """Print ``data`` as JSON or ``key: value`` lines; also save JSON to ``out_path``."""
    data = _jsonable(data)
    if out_path:
        save_json(data, out_path)
    if out_format == "json":
        click.echo(json.dumps(data, indent=1))
        return
    for key, value in data.items():
        if isinstance(value, list):
            value = "[" + ", ".join(fmt(v) if not isinstance(v, (list, dict)) else json.dumps(v) for v in value) + "]"
        elif isinstance(value, dict):
            value = json.dumps(value)
        click.echo(f"{key}: {fmt(value)}")


# -- inputs ----------------------------------------------------------------------------


def _parse_value(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def generate_channel(kind: str, d: int, p: float | None = None, rank: int | None = None, seed: int = 0):
    """Channel factory behind ``gen`` and ``gen:`` specs; ``p`` is the kind's noise parameter."""
    if kind == "random":
        return random_channel(d, rank if rank is not None else d, seed)
    if kind == "depolarizing":
        return standard_channel(kind, d, p=1.0 if p is None else p)
    if kind == "amplitude_damping":
        return standard_channel(kind, d, gamma=1.0 if p is None else p)
    if kind == "phase_damping":
        return standard_channel(kind, d, lam=1.0 if p is None else p)
    if kind in ("identity", "pinching"):
        return standard_channel(kind, d)
    raise click.BadParameter(f"unknown channel kind {kind!r}; choose from {', '.join(CHANNEL_KINDS)}")


def parse_generator(spec: str):
    """``gen:kind,key=value,...`` with keys ``d``, ``p``, ``rank``, ``seed``."""
    body = spec[len("gen:"):]
    kind, *pairs = body.split(",")
    opts = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or key not in ("d", "p", "rank", "seed"):
            raise click.BadParameter(f"bad generator option {pair!r} in {spec!r}")
        opts[key] = _parse_value(value)
    if "d" not in opts:
        raise click.BadParameter(f"generator spec {spec!r} needs d=")
    return generate_channel(kind, int(opts["d"]), opts.get("p"), opts.get("rank"), int(opts.get("seed", 0)))


def load_input(path: str):
    """A KrausSet, a ChoiMatrix, or a validated density matrix (``ndarray``)."""
    if path.startswith("gen:"):
        return parse_generator(path)
    data = load_json(path)
    if "rho" in data:
        rho = validate_density(_decode(data["rho"]))
        if "d" in data and int(data["d"]) != rho.shape[0]:
            raise QSEError(f"declared d={data['d']} but rho is {rho.shape[0]}x{rho.shape[0]}")
        return rho
    return channel_from_dict(data)


def load_channel_input(path: str):
    obj = load_input(path)
    if isinstance(obj, np.ndarray):
        raise QSEError(f"{path} holds a state, a channel is required")
    return obj


def load_state_input(path: str | None, d: int) -> np.ndarray:
    if path is None:
        return np.eye(d) / d
    obj = load_input(path)
    if not isinstance(obj, np.ndarray):
        raise QSEError(f"{path} holds a channel, a state is required")
    if obj.shape[0] != d:
        raise QSEError(f"state has dimension {obj.shape[0]} but the channel acts on d={d}")
    return obj


def parse_floats(text: str | None, default):
    if text is None:
        return tuple(default)
    return tuple(float(v) for v in text.split(",") if v.strip())


class QSECommand(click.Command):
    """Turn library and file errors into a one-line diagnostic and exit code 2."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (QSEError, OSError, json.JSONDecodeError, KeyError, ArithmeticError) as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(2)


q_option = click.option("--q", "q", type=float, default=1.0, show_default=True, help="Entropic order q > 0.")
s_option = click.option("--s", "s", type=float, default=1.0, show_default=True, help="Unified parameter s.")
format_option = click.option("--format", "out_format", type=click.Choice(["text", "json"]), default="text",
                             show_default=True)
out_option = click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
                          help="Also write the result as JSON here.")


@click.group()
@click.version_option(version=__version__, prog_name="qse")
def main():
    """Unified (q,s)-entropies of quantum states and channels."""


@main.command(cls=QSECommand)
@click.option("--in", "in_path", required=True, help="State or channel file, or a gen: spec.")
@q_option
@s_option
@format_option
@out_option
def entropy(in_path, q, s, out_format, out_path):
    """Entropies of a state, or of the rescaled Choi matrix of a channel."""
    params = EntropyParams(q, s)
    obj = load_input(in_path)
    if isinstance(obj, np.ndarray):
        spec = density_spectrum(obj)
        source = "state"
    else:
        spec = as_choi(obj).spectrum()
        spec = spec / spec.sum()
        source = "choi"
    emit({
        "source": source,
        "q": q,
        "s": s,
        "unified": unified_entropy_spectrum(spec, params),
        "tsallis": unified_entropy_spectrum(spec, EntropyParams(q, 1.0)),
        "renyi": unified_entropy_spectrum(spec, EntropyParams(q, 0.0)),
        "von_neumann": unified_entropy_spectrum(spec, EntropyParams(1.0, 1.0)),
        "spectrum": spec.tolist(),
    }, out_format, out_path)


@main.command("map-entropy", cls=QSECommand)
@click.option("--in", "in_path", required=True, help="Channel file or gen: spec.")
@click.option("--in2", "in2_path", default=None, help="Second channel: also report the tensor-product identity.")
@q_option
@s_option
@format_option
@out_option
def map_entropy_cmd(in_path, in2_path, q, s, out_format, out_path):
    """Map entropy of a channel, optionally with additivity against a second one."""
    params = EntropyParams(q, s)
    c1 = as_choi(load_channel_input(in_path))
    result = {"q": q, "s": s, "d": c1.d, "choi_rank": c1.rank(), "map_entropy": map_entropy(c1, params)}
    if in2_path:
        c2 = as_choi(load_channel_input(in2_path))
        result.update({
            "map_entropy_2": map_entropy(c2, params),
            "map_entropy_tensor": float(tensor_map_entropy_grid(c1, c2, [q], [s])[0]),
            "additivity_residual": additivity_residual(c1, c2, params),
            "additivity_class": classify_additivity(c1, c2, params).value,
        })
    emit(result, out_format, out_path)


@main.command(cls=QSECommand)
@click.option("--in", "in_path", required=True, help="Channel file or gen: spec.")
@click.option("--in2", "state_path", default=None, help="Input state file (default: maximally mixed).")
@q_option
@s_option
@click.option("--trials", type=click.IntRange(min=0), default=100, show_default=True,
              help="Random remixings to compare against.")
@click.option("--seed", type=int, default=0, show_default=True)
@format_option
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Write the extremal Kraus set as a channel file.")
def extremal(in_path, state_path, q, s, trials, seed, out_format, out_path):
    """Extremal unraveling of a channel for a given input state."""
    params = EntropyParams(q, s)
    kraus = as_kraus(load_channel_input(in_path))
    rho = load_state_input(state_path, kraus.d)
    ex = extremal_unraveling(kraus, rho)
    t1 = check_theorem1(kraus, rho, params, trials=trials, seed=seed)
    t2 = check_theorem2(kraus, rho, params)
    if out_path:
        save_json(channel_to_dict(ex.kraus), out_path)
    emit({
        "q": q,
        "s": s,
        "lambdas": ex.lambdas.tolist(),
        "extremal_entropy": unraveling_entropy(ex.kraus, rho, params),
        "input_unraveling_entropy": unraveling_entropy(kraus, rho, params),
        "state_entropy": unified_entropy(rho, params),
        "extremal_traces": extremal_trace_condition(ex).tolist(),
        "theorem1": t1.to_dict(),
        "theorem2": t2.to_dict(),
    }, out_format)


@main.command(cls=QSECommand)
@click.option("--in", "in_path", required=True, help="Channel file or gen: spec.")
@click.option("--in2", "state_path", default=None, help="Input state file (default: maximally mixed).")
@q_option
@s_option
@format_option
@out_option
def exchange(in_path, state_path, q, s, out_format, out_path):
    """Entropy exchange with input and output entropies and their triangle relations."""
    params = EntropyParams(q, s)
    kraus = as_kraus(load_channel_input(in_path))
    rho = load_state_input(state_path, kraus.d)
    report = check_lindblad_extension(rho, kraus, params)
    emit({
        "q": q,
        "s": s,
        "exchange_entropy": entropy_exchange(rho, kraus, params, cross_check=True),
        "input_entropy": unified_entropy(rho, params),
        "output_entropy": unified_entropy(apply_channel(kraus, rho), params),
        "map_entropy": map_entropy(kraus_to_choi(kraus), params),
        "relations": report.to_dict(),
    }, out_format, out_path)


def _suite_kwargs(name: str, d, trials, seed, tol, renyi_scan, space_dim) -> dict:
    kw = {"seed": seed}
    if tol is not None and name != "limits":
        kw["tol"] = tol
    if name in ("theorem5", "fannes"):
        if d is not None:
            kw["d"] = d
    elif name not in ("schatten", "limits") and d is not None:
        kw["ds"] = (d,)
    if trials is not None:
        kw["trials"] = trials
    if name == "theorem1":
        kw["renyi_scan"] = renyi_scan
    if name == "fannes" and space_dim is not None:
        kw["space_dim"] = space_dim
    return kw


@main.command(cls=QSECommand)
@click.argument("suite", type=click.Choice(sorted(suites.SUITES) + ["all"]))
@click.option("--d", type=click.IntRange(min=2), default=None, help="Dimension (default: the suite's own set).")
@click.option("--trials", type=click.IntRange(min=0), default=None, help="Instances per dimension.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--renyi-scan", is_flag=True, help="theorem1: also search Renyi orders q > 1 (exploratory).")
@click.option("--space-dim", type=click.IntRange(min=2), default=None,
              help="fannes: dimension substituted in the bounds (default d^2; others are exploratory).")
@format_option
@out_option
def verify(suite, d, trials, seed, renyi_scan, space_dim, out_format, out_path):
    """Run a randomized verification suite; exit 1 on any asserted violation.

    QSE_TOLERANCE overrides the assertion tolerance of every suite except
    the limit checks.
    """
    tol = float(os.environ["QSE_TOLERANCE"]) if "QSE_TOLERANCE" in os.environ else None
    names = [n for n in suites.SUITES if n != "limits"] + ["limits"] if suite == "all" else [suite]
    results = [suites.SUITES[n](**_suite_kwargs(n, d, trials, seed, tol, renyi_scan, space_dim)) for n in names]
    report = {"seed": seed, "pass": all(r.passed for r in results), "suites": [r.to_dict() for r in results]}
    if out_path:
        save_json(_jsonable(report), out_path)
    if out_format == "json":
        brief = dict(report, suites=[r.to_dict(with_records=False) for r in results])
        click.echo(json.dumps(_jsonable(brief), indent=1))
    else:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            worst = fmt(r.max_violation) if math.isfinite(r.max_violation) else "n/a"
            click.echo(f"{r.suite}: {status} checks={r.checks} violations={r.violations} max_violation={worst}")
            if r.summary:
                click.echo(f"  {json.dumps(_jsonable(r.summary))}")
    sys.exit(0 if report["pass"] else 1)


def scan_rows(c1: ChoiMatrix, c2: ChoiMatrix, qs, ss, space_dim=None, tol: float = suites.DEFAULT_TOL) -> list[dict]:
    """One row per applicable bound at each grid point, in grid order."""
    rows = []
    for q in qs:
        for s in ss:
            for bound, observed in evaluate_bounds(EntropyParams(q, s), c1, c2, space_dim):
                rows.append({
                    "q": q,
                    "s": s,
                    "d": c1.d,
                    "distance": bound.distance_used,
                    "norm_kind": bound.norm_kind,
                    "bound_kind": bound.bound_kind,
                    "bound_value": bound.bound_value,
                    "valid": bound.valid,
                    "observed_delta": observed,
                    "sound": bound.holds_for(observed, tol),
                })
    return rows


@main.command(cls=QSECommand)
@click.option("--in", "in_path", required=True, help="First channel file or gen: spec.")
@click.option("--in2", "in2_path", required=True, help="Second channel file or gen: spec.")
@click.option("--grid-q", default=None, help="Comma-separated q values (default grid).")
@click.option("--grid-s", default=None, help="Comma-separated s values (default grid).")
@click.option("--space-dim", type=click.IntRange(min=2), default=None, help="Dimension used in the bounds (default d^2).")
@click.option("--format", "out_format", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Write the table here instead of stdout.")
def scan(in_path, in2_path, grid_q, grid_s, space_dim, out_format, out_path):
    """Sweep continuity bounds against observed map entropy gaps over the (q,s) grid.

    Grid points outside both bound ranges produce no rows.
    """
    qs = parse_floats(grid_q, suites.GRID_Q)
    ss = parse_floats(grid_s, suites.GRID_S)
    for q in qs:
        EntropyParams(q, 1.0)
    c1 = as_choi(load_channel_input(in_path))
    c2 = as_choi(load_channel_input(in2_path))
    tol = float(os.environ.get("QSE_TOLERANCE", suites.DEFAULT_TOL))
    rows = scan_rows(c1, c2, qs, ss, space_dim, tol)
    if out_format == "json":
        text = json.dumps(_jsonable(rows), indent=1) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SCAN_COLUMNS)
        for row in rows:
            writer.writerow([fmt(row[c]) for c in SCAN_COLUMNS])
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@main.command(cls=QSECommand)
@click.option("--kind", type=click.Choice(CHANNEL_KINDS), required=True)
@click.option("--d", type=click.IntRange(min=1), required=True)
@click.option("--p", "p", type=float, default=None,
              help="Noise parameter: depolarizing p, damping gamma or lambda (default 1).")
@click.option("--rank", type=click.IntRange(min=1), default=None, help="Kraus rank for random channels (default d).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--choi", is_flag=True, help="Write the Choi variant instead of Kraus operators.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Write the channel file here instead of stdout.")
def gen(kind, d, p, rank, seed, choi, out_path):
    """Generate a channel file; printed to stdout without --out."""
    kraus = generate_channel(kind, d, p, rank, seed)
    channel = kraus_to_choi(kraus) if choi else kraus
    data = channel_to_dict(channel)
    # round trip through the reader so only loadable files are written
    back = channel_from_dict(json.loads(json.dumps(data)))
    if isinstance(back, KrausSet):
        kraus_to_choi(back)
    if out_path:
        save_json(data, out_path)
    else:
        click.echo(json.dumps(data))


if __name__ == "__main__":
    main()
