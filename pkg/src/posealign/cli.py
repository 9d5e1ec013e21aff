"""Command-line interface: align, synth, eval, and plot subcommands.

Exit codes: 0 on success, 1 on input or validation failure, 2 when the
sequences are algorithmically incomparable (no meaningful alignment exists).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dtw import AlignmentResult, build_cost_matrix, dtw_align
from .errors import IncomparableSequencesError, PoseAlignError, SchemaError
from .evaluate import (
    DEFAULT_TOLERANCE_FRAMES,
    PerturbationSpec,
    default_scenario_suite,
    format_report_table,
    run_scenario_suite,
)
from .keypoints import PoseSequence, load_sequence, save_sequence
from .metrics import MetricConfig
from .plot import write_cost_profile_csv, write_path_svg
from .synth import MOTIONS, synth_sequence

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCOMPARABLE = 2

_METRIC_FLAGS = {"angle-mae": "angle_mae", "keypoint-mae": "keypoint_mae"}


class _Parser(argparse.ArgumentParser):
    """Argument errors are input failures, so they exit 1 rather than 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="posealign", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_align = sub.add_parser("align", help="align a test sequence to a reference")
    p_align.add_argument("--ref", required=True, help="reference sequence JSON")
    p_align.add_argument("--test", required=True, help="test sequence JSON")
    p_align.add_argument("--metric", choices=sorted(_METRIC_FLAGS))
    p_align.add_argument("--metric-config", help="metric configuration JSON file")
    p_align.add_argument("--out", required=True, help="alignment result JSON")
    p_align.add_argument("--csv", help="also write the path as two-column CSV")
    p_align.add_argument("--band", type=int, help="optional warping band half-width")
    p_align.add_argument("--quiet", action="store_true")

    p_synth = sub.add_parser("synth", help="generate a synthetic sequence")
    p_synth.add_argument("--motion", required=True, help=f"one of {', '.join(MOTIONS)}")
    p_synth.add_argument("--seconds", required=True, type=float)
    p_synth.add_argument("--fps", required=True, type=float)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--out", required=True)
    p_synth.add_argument("--quiet", action="store_true")

    p_eval = sub.add_parser("eval", help="run perturbation scenarios and score them")
    p_eval.add_argument(
        "--base", required=True,
        help="base sequence JSON path, or synth:<motion>:<seconds>:<fps>:<seed>",
    )
    p_eval.add_argument(
        "--scenarios", required=True,
        help="scenario list JSON path, or the word 'default'",
    )
    p_eval.add_argument("--tolerance", type=int, default=DEFAULT_TOLERANCE_FRAMES)
    p_eval.add_argument("--metric", choices=sorted(_METRIC_FLAGS))
    p_eval.add_argument("--metric-config", help="metric configuration JSON file")
    p_eval.add_argument("--out", required=True, help="report list JSON")
    p_eval.add_argument("--quiet", action="store_true")

    p_plot = sub.add_parser("plot", help="render an alignment as SVG + cost CSV")
    p_plot.add_argument("--alignment", required=True, help="alignment result JSON")
    p_plot.add_argument("--out", required=True, help="output SVG path")
    p_plot.add_argument("--csv", help="cost profile CSV (default: out with .csv suffix)")
    p_plot.add_argument("--quiet", action="store_true")

    return parser


def _load_named(path: str) -> PoseSequence:
    try:
        return load_sequence(path)
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def _metric_config(args: argparse.Namespace) -> MetricConfig:
    if args.metric_config:
        doc = json.loads(Path(args.metric_config).read_text(encoding="utf-8"))
        config = MetricConfig.from_dict(doc)
        if args.metric:
            doc["metric_kind"] = _METRIC_FLAGS[args.metric]
            config = MetricConfig.from_dict(doc)
        return config
    kind = _METRIC_FLAGS[args.metric] if args.metric else "angle_mae"
    return MetricConfig(metric_kind=kind)


def _parse_synth_spec(text: str) -> PoseSequence:
    parts = text.split(":")
    if len(parts) != 5 or parts[0] != "synth":
        raise ValueError(
            f"bad synth spec {text!r}; expected synth:<motion>:<seconds>:<fps>:<seed>"
        )
    return synth_sequence(parts[1], float(parts[2]), float(parts[3]), int(parts[4]))


def _load_base(text: str) -> PoseSequence:
    if text.startswith("synth:"):
        return _parse_synth_spec(text)
    return _load_named(text)


def _donor_loader(doc: dict) -> PoseSequence:
    if not isinstance(doc, dict):
        raise ValueError("donor must be an object with 'path' or synth parameters")
    if "path" in doc:
        return _load_named(str(doc["path"]))
    return synth_sequence(
        str(doc["motion"]), float(doc["seconds"]), float(doc["fps"]), int(doc.get("seed", 0))
    )


def _load_scenarios(path_or_default: str, base: PoseSequence) -> list[PerturbationSpec]:
    if path_or_default == "default":
        donor_motion = "squat" if "arm_wave" in base.source else "arm_wave"
        donor = synth_sequence(donor_motion, max(2.0, len(base) / base.fps), base.fps, seed=99)
        return default_scenario_suite(donor)
    doc = json.loads(Path(path_or_default).read_text(encoding="utf-8"))
    if not isinstance(doc, list):
        raise ValueError("scenario file must contain a JSON array")
    specs = []
    for idx, entry in enumerate(doc):
        try:
            specs.append(PerturbationSpec.from_dict(entry, load_donor=_donor_loader))
        except (ValueError, KeyError, TypeError) as exc:
            raise ValueError(f"scenario entry {idx}: {exc}") from exc
    return specs


def _cmd_align(args: argparse.Namespace) -> int:
    ref = _load_named(args.ref)
    test = _load_named(args.test)
    config = _metric_config(args)
    cost = build_cost_matrix(ref, test, config)
    result = dtw_align(cost, band=args.band)
    Path(args.out).write_text(
        json.dumps(result.to_json_dict(), allow_nan=False) + "\n", encoding="utf-8"
    )
    if args.csv:
        Path(args.csv).write_text("\n".join(result.path_csv_rows()) + "\n", encoding="utf-8")
    if not args.quiet:
        print(f"ref: {args.ref} ({len(ref)} frames @ {ref.fps:g} fps)")
        print(f"test: {args.test} ({len(test)} frames @ {test.fps:g} fps)")
        print(f"total_cost={result.total_cost:.9g} normalized_cost={result.normalized_cost:.9g}")
    return EXIT_OK


def _cmd_synth(args: argparse.Namespace) -> int:
    seq = synth_sequence(args.motion, args.seconds, args.fps, args.seed)
    save_sequence(seq, args.out)
    if not args.quiet:
        print(f"wrote {len(seq)} frames @ {seq.fps:g} fps to {args.out}")
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    base = _load_base(args.base)
    scenarios = _load_scenarios(args.scenarios, base)
    config = _metric_config(args)
    reports = run_scenario_suite(base, scenarios, config, tolerance_frames=args.tolerance)
    Path(args.out).write_text(
        json.dumps([r.to_json_dict() for r in reports], allow_nan=False) + "\n",
        encoding="utf-8",
    )
    if not args.quiet:
        print(format_report_table(reports))
    return EXIT_OK


def _cmd_plot(args: argparse.Namespace) -> int:
    try:
        doc = json.loads(Path(args.alignment).read_text(encoding="utf-8"))
        alignment = AlignmentResult.from_json_dict(doc)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{args.alignment}: not a valid alignment file: {exc}") from exc
    if not alignment.path.pairs:
        raise ValueError(f"{args.alignment}: alignment path is empty")
    write_path_svg(alignment, args.out)
    csv_path = args.csv or str(Path(args.out).with_suffix(".csv"))
    write_cost_profile_csv(alignment, csv_path)
    if not args.quiet:
        print(f"wrote {args.out} and {csv_path}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    commands = {
        "align": _cmd_align,
        "synth": _cmd_synth,
        "eval": _cmd_eval,
        "plot": _cmd_plot,
    }
    try:
        return commands[args.command](args)
    except IncomparableSequencesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCOMPARABLE
    except (PoseAlignError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
