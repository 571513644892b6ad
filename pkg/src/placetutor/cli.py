"""Operator entry point.

Subcommands: serve (run the HTTP service), simulate (generate a synthetic
cohort), analyze (write all buildable tables + footnotes), import-traditional
(load the comparison cohort's score file), export (print one table).

Exit codes: 0 success, 2 usage error (argparse), 1 runtime error.
"""

from __future__ import annotations

import argparse
import socket
import sys
import time
from pathlib import Path

from .clock import RealClock, SimulatedClock
from .errors import NotFoundError, PlaceTutorError
from .report import build_report, export_table, write_report_files
from .simulate import SimulationModel, run_simulation
from .store import Study, parse_traditional_csv

REPORT_ARTIFACTS = ("footnotes.txt",) + tuple(
    f"table{i}.{ext}" for i in range(1, 7) for ext in ("txt", "csv")
)


def _add_data_dir(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--data-dir",
        type=Path,
        default=Path("data"),
        help="study directory holding events.log (default: ./data)",
    )


def _add_tails(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--tails",
        choices=("one", "two"),
        default="one",
        help="p-value sidedness for the t tables (default: one)",
    )
    parser.add_argument(
        "--total-sd",
        choices=("respondent", "item_mean"),
        default="respondent",
        help="total-row sd convention for rating tables (default: respondent)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="placetutor",
        description="Place-value tutoring study: service, simulator, analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    _add_data_dir(p_serve)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000, help="0 picks a free port")
    p_serve.add_argument("--seed", type=int, default=0, help="base seed for new sessions")
    p_serve.add_argument(
        "--clock",
        choices=("real", "simulated"),
        default="real",
        help="simulated exposes POST /admin/clock for jumping time",
    )
    p_serve.set_defaults(func=cmd_serve)

    p_sim = sub.add_parser("simulate", help="drive a synthetic cohort through the protocol")
    _add_data_dir(p_sim)
    p_sim.add_argument("--students", type=int, default=400)
    p_sim.add_argument("--seed", type=int, default=42)
    p_sim.add_argument("--force", action="store_true", help="overwrite an existing study")
    p_sim.add_argument("--skip-traditional", action="store_true")
    p_sim.add_argument("--skip-experts", action="store_true")
    p_sim.add_argument("--pre-mean", type=float, default=None)
    p_sim.add_argument("--pre-spread", type=float, default=None)
    p_sim.add_argument("--gain-mean", type=float, default=None)
    p_sim.add_argument("--gain-spread", type=float, default=None)
    p_sim.add_argument("--retention-decay", type=float, default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_an = sub.add_parser("analyze", help="write every buildable table plus footnotes")
    _add_data_dir(p_an)
    p_an.add_argument(
        "--out",
        type=Path,
        default=None,
        help="output directory (default: DATA_DIR/report)",
    )
    _add_tails(p_an)
    p_an.set_defaults(func=cmd_analyze)

    p_imp = sub.add_parser(
        "import-traditional", help="load the traditional cohort's score file"
    )
    _add_data_dir(p_imp)
    p_imp.add_argument("csv_file", type=Path)
    p_imp.set_defaults(func=cmd_import_traditional)

    p_exp = sub.add_parser("export", help="print one table to stdout")
    _add_data_dir(p_exp)
    p_exp.add_argument("--table", type=int, required=True, choices=range(1, 7))
    p_exp.add_argument("--format", choices=("text", "csv"), default="text")
    _add_tails(p_exp)
    p_exp.set_defaults(func=cmd_export)

    return parser


def _log_path(args) -> Path:
    return args.data_dir / "events.log"


def cmd_serve(args) -> int:
    clock = SimulatedClock() if args.clock == "simulated" else RealClock()
    from .api import create_app  # deferred: fastapi import is slow

    import uvicorn

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((args.host, args.port))
    sock.listen(128)  # accept before announcing, so the printed URL is live
    study = Study.open(args.data_dir, clock=clock, base_seed=args.seed)
    try:
        app = create_app(study, admin_clock=args.clock == "simulated")
        host, port = sock.getsockname()[:2]
        print(f"listening on http://{host}:{port}", flush=True)
        server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
        server.run(sockets=[sock])
    finally:
        study.close()
        sock.close()
    return 0


def cmd_simulate(args) -> int:
    log_path = _log_path(args)
    if log_path.exists():
        if not args.force:
            print(
                f"error: {log_path} already exists; pass --force to overwrite",
                file=sys.stderr,
            )
            return 1
        log_path.unlink()
        report_dir = args.data_dir / "report"
        for name in REPORT_ARTIFACTS:
            (report_dir / name).unlink(missing_ok=True)

    kwargs = {"n_students": args.students, "seed": args.seed}
    pre = list(SimulationModel.__dataclass_fields__["pre_accuracy"].default)
    gain = list(SimulationModel.__dataclass_fields__["gain"].default)
    if args.pre_mean is not None:
        pre[0] = args.pre_mean
    if args.pre_spread is not None:
        pre[1] = args.pre_spread
    if args.gain_mean is not None:
        gain[0] = args.gain_mean
    if args.gain_spread is not None:
        gain[1] = args.gain_spread
    kwargs["pre_accuracy"] = tuple(pre)
    kwargs["gain"] = tuple(gain)
    if args.retention_decay is not None:
        kwargs["retention_decay"] = args.retention_decay
    model = SimulationModel(**kwargs)

    started = time.monotonic()
    study = Study.open(args.data_dir, clock=SimulatedClock(), base_seed=args.seed)
    try:
        summary = run_simulation(
            study,
            model,
            include_traditional=not args.skip_traditional,
            include_experts=not args.skip_experts,
        )
    finally:
        study.close()
    elapsed = time.monotonic() - started

    print(f"students   {summary.students}")
    print(f"traditional {summary.traditional}")
    print(f"experts    {summary.experts}")
    print(f"events     {summary.events}")
    for kind, mean in summary.means.items():
        print(f"mean {kind:<14} {mean:.2f}/60")
    print(f"elapsed    {elapsed:.1f}s", file=sys.stderr)
    return 0


def _replay(args) -> Study:
    log_path = _log_path(args)
    if not log_path.exists():
        raise NotFoundError(f"no study at {log_path}; run simulate or serve first")
    return Study.replay(log_path)


def cmd_analyze(args) -> int:
    study = _replay(args)
    if not (study.sessions or study.traditional or study.expert_ratings):
        print("error: the study log holds no data to analyze", file=sys.stderr)
        return 1
    report = build_report(study, tails=args.tails, total_sd=args.total_sd)
    out_dir = args.out if args.out is not None else args.data_dir / "report"
    written = write_report_files(report, out_dir)
    for notice in report.notices:
        print(f"notice: {notice}")
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_import_traditional(args) -> int:
    text = args.csv_file.read_text(encoding="utf-8")
    rows = parse_traditional_csv(text)
    study = Study.open(args.data_dir)
    try:
        imported = study.import_traditional(rows)
    finally:
        study.close()
    print(f"imported {imported} traditional score rows")
    return 0


def cmd_export(args) -> int:
    study = _replay(args)
    sys.stdout.write(
        export_table(
            study, args.table, args.format, tails=args.tails, total_sd=args.total_sd
        )
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PlaceTutorError as exc:
        detail = exc.detail or {}
        print(f"error: {exc}", file=sys.stderr)
        for line in detail.get("errors", []):
            print(f"  {line}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
