"""Batch front end: noise -> solve -> detect -> score, with artifacts.

Two subcommands: ``run`` executes one experiment with explicit
thresholds and writes the requested artifacts; ``sweep`` scores every
method over a whole threshold grid instead of fixed thresholds.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

from . import pnm
from .basis import ORTHONORMAL, STANDARD, make_basis, make_basis2d
from .edges import (
    parameter_map_gradient,
    sobel_magnitude,
    synthesis_gradient,
    threshold_map,
)
from .errors import (
    ConfigurationError,
    DivergenceError,
    PnmFormatError,
    PolyedgeError,
)
from .evaluation import (
    NoiseSpec,
    add_gaussian_noise,
    best_threshold,
    score_edges,
    sweep_thresholds,
)
from .model import SynthesisOperator
from .solver import ProblemSpec, default_config, solve, write_history_csv

EMIT_CHOICES = ("denoised", "mosaic", "gradmaps", "edges", "csv")
SCORE_FIELDS = (
    "method",
    "sigma",
    "delta",
    "threshold",
    "precision",
    "recall",
    "f1",
    "tolerance_px",
    "seed",
)
METHODS = ("sobel", "synthesis", "parameter_maps")
TOLERANCE_PX = 1

_EXIT_CONFIG = 2
_EXIT_IO = 3
_EXIT_DIVERGED = 4


@dataclass
class RunConfig:
    """Validated settings for one pipeline run."""

    input: Path
    out_dir: Path
    delta: float
    degree: int = 2
    basis: str = STANDARD
    sigma: float = 0.0
    seed: int = 0
    lam: float = 1.0
    iters: int = 500
    thresh_gt: float = 0.15
    thresh_sobel: float = 0.24
    thresh_synth: float = 0.14
    thresh_parmap: float = 0.12
    emit: tuple = EMIT_CHOICES
    sweep_grid: tuple = ()


class _Parser(argparse.ArgumentParser):
    # argparse normally exits on its own; route through our error line
    def error(self, message):
        raise ConfigurationError(message)


def parse_sweep_grid(text: str) -> tuple:
    """Parse ``start:step:stop`` or a comma-separated threshold list."""
    text = text.strip()
    try:
        if ":" in text:
            start_s, step_s, stop_s = text.split(":")
            start, step, stop = float(start_s), float(step_s), float(stop_s)
            if step <= 0 or stop < start:
                raise ValueError
            count = int(round((stop - start) / step)) + 1
            return tuple(min(start + i * step, stop) for i in range(count))
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ConfigurationError(f"cannot parse sweep grid {text!r}") from None


_OPTIONS = (
    # (flag, dest, converter)
    ("input", "input", str),
    ("out-dir", "out_dir", str),
    ("degree", "degree", int),
    ("basis", "basis", str),
    ("sigma", "sigma", float),
    ("seed", "seed", int),
    ("delta", "delta", float),
    ("lambda", "lam", float),
    ("iters", "iters", int),
    ("thresh-gt", "thresh_gt", float),
    ("thresh-sobel", "thresh_sobel", float),
    ("thresh-synth", "thresh_synth", float),
    ("thresh-parmap", "thresh_parmap", float),
    ("emit", "emit", None),
    ("sweep-grid", "sweep_grid", None),
)


def load_config_file(path: Path) -> dict:
    """Plain ``key = value`` file with the same keys as the CLI flags."""
    by_key = {flag: (dest, conv) for flag, dest, conv in _OPTIONS}
    values = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in by_key:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        dest, conv = by_key[key]
        try:
            if key == "emit":
                values[dest] = tuple(v.strip() for v in value.split(","))
            elif key == "sweep-grid":
                values[dest] = parse_sweep_grid(value)
            else:
                values[dest] = conv(value)
        except ConfigurationError:
            raise
        except ValueError:
            raise ConfigurationError(
                f"{path}:{lineno}: bad value {value!r} for {key}"
            ) from None
    return values


def build_parser() -> _Parser:
    parser = _Parser(prog="polyedge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "run one experiment with explicit thresholds"),
        ("sweep", "score each method across a threshold grid"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="key = value config file")
        p.add_argument("--input", default=None, help="clean input image (PGM or PNG)")
        p.add_argument("--out-dir", default=None, help="artifact output directory")
        p.add_argument("--degree", type=int, default=None, help="polynomial degree K")
        p.add_argument(
            "--basis", choices=(STANDARD, ORTHONORMAL), default=None, help="basis kind"
        )
        p.add_argument("--sigma", type=float, default=None, help="noise std. dev.")
        p.add_argument("--seed", type=int, default=None, help="noise PRNG seed")
        p.add_argument("--delta", type=float, default=None, help="data-fidelity radius")
        p.add_argument(
            "--lambda", dest="lam", type=float, default=None, help="horizontal weight"
        )
        p.add_argument("--iters", type=int, default=None, help="solver iterations")
        p.add_argument("--thresh-gt", type=float, default=None, help="ground-truth threshold")
        p.add_argument("--thresh-sobel", type=float, default=None, help="baseline threshold")
        p.add_argument("--thresh-synth", type=float, default=None, help="synthesis threshold")
        p.add_argument(
            "--thresh-parmap", type=float, default=None, help="parameter-map threshold"
        )
        p.add_argument(
            "--emit",
            action="append",
            choices=EMIT_CHOICES,
            default=None,
            help="artifact groups to write (repeatable; default all)",
        )
        p.add_argument(
            "--sweep-grid",
            default=None,
            help="thresholds as start:step:stop or comma list (sweep only)",
        )
    return parser


def make_run_config(args: argparse.Namespace) -> RunConfig:
    settings = {}
    if args.config:
        settings.update(load_config_file(args.config))
    for _, dest, _ in _OPTIONS:
        value = getattr(args, dest, None)
        if value is not None:
            settings[dest] = tuple(value) if dest == "emit" else value
    if "sweep_grid" in settings and isinstance(settings["sweep_grid"], str):
        settings["sweep_grid"] = parse_sweep_grid(settings["sweep_grid"])
    for required in ("input", "out_dir", "delta"):
        if required not in settings:
            raise ConfigurationError(f"missing required setting --{required.replace('_', '-')}")
    settings["input"] = Path(settings["input"])
    settings["out_dir"] = Path(settings["out_dir"])
    cfg = RunConfig(**settings)
    if not cfg.input.is_file():
        raise ConfigurationError(f"input image not found: {cfg.input}")
    if cfg.degree < 0:
        raise ConfigurationError(f"degree must be >= 0, got {cfg.degree}")
    if cfg.sigma < 0:
        raise ConfigurationError(f"sigma must be >= 0, got {cfg.sigma}")
    if cfg.iters < 1:
        raise ConfigurationError(f"iters must be >= 1, got {cfg.iters}")
    for name in ("thresh_gt", "thresh_sobel", "thresh_synth", "thresh_parmap"):
        value = getattr(cfg, name)
        if not 0.0 <= value <= 1.0:
            raise ConfigurationError(f"{name} must lie in [0, 1], got {value}")
    unknown = set(cfg.emit) - set(EMIT_CHOICES)
    if unknown:
        raise ConfigurationError(f"unknown emit groups: {sorted(unknown)}")
    return cfg


def _pipeline(cfg: RunConfig):
    """Shared front half: read, ground truth, noise, solve, gradients."""
    clean = pnm.read_image(cfg.input)
    m, n = clean.shape
    gt = threshold_map(sobel_magnitude(clean), cfg.thresh_gt)
    noisy = add_gaussian_noise(clean, NoiseSpec(cfg.sigma, cfg.seed))
    basis = make_basis2d(
        make_basis(cfg.basis, cfg.degree, m), make_basis(cfg.basis, cfg.degree, n)
    )
    op = SynthesisOperator(basis)
    problem = ProblemSpec(y=noisy, operator=op, lam=cfg.lam, delta=cfg.delta)
    xhat, state = solve(problem, default_config(op, max_iters=cfg.iters))
    grads = {
        "sobel": sobel_magnitude(noisy),
        "synthesis": synthesis_gradient(xhat, op),
        "parameter_maps": parameter_map_gradient(xhat),
    }
    return clean, noisy, gt, op, xhat, state, grads


def _write_scores_csv(path, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCORE_FIELDS)
        writer.writerows(rows)


def _score_row(cfg: RunConfig, method: str, t: float, score) -> list:
    return [
        method,
        f"{cfg.sigma:.10g}",
        f"{cfg.delta:.10g}",
        f"{t:.10g}",
        f"{score.precision:.6f}",
        f"{score.recall:.6f}",
        f"{score.f1:.6f}",
        score.tolerance_px,
        cfg.seed,
    ]


def cmd_run(cfg: RunConfig) -> int:
    clean, noisy, gt, op, xhat, state, grads = _pipeline(cfg)
    thresholds = {
        "sobel": cfg.thresh_sobel,
        "synthesis": cfg.thresh_synth,
        "parameter_maps": cfg.thresh_parmap,
    }
    edge_maps = {name: threshold_map(grads[name], thresholds[name]) for name in METHODS}
    scores = {name: score_edges(edge_maps[name], gt, TOLERANCE_PX) for name in METHODS}

    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    emit = set(cfg.emit)
    if "denoised" in emit:
        pnm.write_image(out / "noisy.pgm", noisy)
        pnm.write_image(out / "denoised.pgm", op.apply(xhat))
    if "mosaic" in emit:
        pnm.write_mosaic(out / "mosaic.pgm", xhat)
    if "gradmaps" in emit:
        for name in METHODS:
            pnm.write_image(out / f"grad_{name}.pgm", 255.0 * grads[name].values)
    if "edges" in emit:
        pnm.write_mask(out / "edges_gt.pgm", gt)
        for name in METHODS:
            pnm.write_mask(out / f"edges_{name}.pgm", edge_maps[name])
    if "csv" in emit:
        _write_scores_csv(
            out / "scores.csv",
            [_score_row(cfg, name, thresholds[name], scores[name]) for name in METHODS],
        )
        write_history_csv(state, out / "history.csv")

    _, final_obj, final_gap, _ = state.history[-1]
    print(f"{'method':<16} {'threshold':>9} {'precision':>9} {'recall':>9} {'f1':>9}")
    for name in METHODS:
        s = scores[name]
        print(
            f"{name:<16} {thresholds[name]:>9.4f} {s.precision:>9.4f} "
            f"{s.recall:>9.4f} {s.f1:>9.4f}"
        )
    print(
        f"iterations={state.iter} objective={final_obj:.6g} "
        f"feasibility_gap={final_gap:.6g}"
    )
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    grid = cfg.sweep_grid or parse_sweep_grid("0:0.01:1")
    clean, noisy, gt, op, xhat, state, grads = _pipeline(cfg)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for name in METHODS:
        sweep = sweep_thresholds(grads[name], gt, grid, TOLERANCE_PX)
        best_t, best_score = best_threshold(sweep)
        for t, score in sweep:
            rows.append(_score_row(cfg, name, t, score) + [int(t == best_t)])
        print(f"{name}: best threshold {best_t:.4f} with f1 {best_score.f1:.4f}")
    with open(out / "sweep.csv", "w", newline="\n") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCORE_FIELDS + ("best",))
        writer.writerows(rows)
    return 0


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = make_run_config(args)
        if args.command == "run":
            return cmd_run(cfg)
        return cmd_sweep(cfg)
    except ConfigurationError as exc:
        return _fail("config", exc, _EXIT_CONFIG)
    except (PnmFormatError, OSError) as exc:
        return _fail("io", exc, _EXIT_IO)
    except DivergenceError as exc:
        return _fail("divergence", exc, _EXIT_DIVERGED)
    except PolyedgeError as exc:
        return _fail("internal", exc, 1)


def _fail(kind: str, exc: Exception, code: int) -> int:
    message = str(exc).replace('"', "'").replace("\n", " ")
    print(f'error kind={kind} message="{message}"', file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
