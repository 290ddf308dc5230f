"""Operator command line.

Subcommands: ingest (normalize tracking files), analyze (write scene
summaries), questions (answer highlighted-pedestrian comparisons), export
(flatten summaries to plot-ready CSV/JSON) and serve (run the playback
service).

Exit codes: 0 success, 2 parse/input error, 3 invariant or analysis error.
Diagnostics go to stderr; data only ever goes to files.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .classify import HighlightAnnotation
from .errors import CrowdlensError, ParseError, RegistryError
from .features import CollectivityParams
from .personality import SocialSurrogateParams
from .pipeline import AnalysisConfig, analyze_scene
from .registry import load_registry
from .report import answer_question, summarize_scene, summary_json
from .tracking import (
    detect_format,
    ensure_world_coordinates,
    parse_tracking_file,
    serialize_scene,
    with_filled_gaps,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVARIANT = 3

_CONFIG_KEYS = ("gamma", "beta", "w1", "w2", "registry", "gap_limit_seconds", "social")


def _fail(message: str, code: int) -> int:
    print(f"crowdlens: {message}", file=sys.stderr)
    return code


def _is_scene_file(path: Path) -> bool:
    if path.suffix.lower() not in (".csv", ".json"):
        return False
    # sibling artifacts that are not tracking files
    return not (path.name in ("annotations.json", "answers.json")
                or path.name.endswith(".summary.json"))


def _scene_paths(inputs: list[str]) -> list[Path]:
    paths: list[Path] = []
    for raw in inputs:
        p = Path(raw)
        if p.is_dir():
            paths.extend(sorted(q for q in p.iterdir() if _is_scene_file(q)))
        else:
            paths.append(p)
    return paths


def _load_scene(path: Path):
    if not path.exists():
        raise ParseError(f"input file not found: {path}")
    return parse_tracking_file(path.read_bytes(), detect_format(path))


def build_config(args) -> AnalysisConfig:
    """Merge analysis parameters: flag > config file > built-in default."""
    file_cfg: dict = {}
    if getattr(args, "config", None):
        cfg_path = Path(args.config)
        if not cfg_path.exists():
            raise ParseError(f"config file not found: {cfg_path}")
        try:
            file_cfg = json.loads(cfg_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"config file is not valid JSON: {exc}") from exc
        unknown = set(file_cfg) - set(_CONFIG_KEYS)
        if unknown:
            raise ParseError(f"unknown config keys: {sorted(unknown)}")

    def pick(name, default):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        return file_cfg.get(name, default)

    defaults = CollectivityParams()
    try:
        collectivity = CollectivityParams(
            gamma=float(pick("gamma", defaults.gamma)),
            beta=float(pick("beta", defaults.beta)),
            w1=float(pick("w1", defaults.w1)),
            w2=float(pick("w2", defaults.w2)),
        )
    except ValueError as exc:
        raise ParseError(f"invalid collectivity parameters: {exc}") from exc

    social_cfg = file_cfg.get("social", {})
    try:
        social = SocialSurrogateParams(**social_cfg)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"invalid social surrogate parameters: {exc}") from exc

    config = AnalysisConfig(collectivity=collectivity, social=social)
    registry_path = pick("registry", None)
    if registry_path:
        try:
            config.registry = load_registry(registry_path)
        except RegistryError as exc:
            raise ParseError(str(exc)) from exc
    config.gap_limit_seconds = float(pick("gap_limit_seconds", config.gap_limit_seconds))
    return config


def _add_param_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--gamma", type=float, help="collectivity kernel gain")
    parser.add_argument("--beta", type=float, help="collectivity decay rate")
    parser.add_argument("--w1", type=float, help="speed-difference weight")
    parser.add_argument("--w2", type=float, help="heading-difference weight")
    parser.add_argument("--registry", help="item-equation registry JSON")
    parser.add_argument("--config", help="JSON config file (flags win)")


def cmd_ingest(args) -> int:
    paths = _scene_paths(args.input)
    if not paths:
        return _fail("no input files", EXIT_PARSE)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for path in paths:
        try:
            scene = _load_scene(path)
            scene = ensure_world_coordinates(scene)
            scene = with_filled_gaps(scene)
        except ParseError as exc:
            return _fail(f"{path}: {exc}", EXIT_PARSE)
        except CrowdlensError as exc:
            return _fail(f"{path}: {exc}", EXIT_INVARIANT)
        target = outdir / f"{scene.scene_id}.{args.format}"
        target.write_bytes(serialize_scene(scene, args.format))
        print(f"ingested {path} -> {target}", file=sys.stderr)
    return EXIT_OK


def cmd_analyze(args) -> int:
    try:
        config = build_config(args)
    except ParseError as exc:
        return _fail(str(exc), EXIT_PARSE)
    paths = _scene_paths(args.input)
    if not paths:
        return _fail("no input files", EXIT_PARSE)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    def run_one(path: Path):
        scene = _load_scene(path)
        return summarize_scene(analyze_scene(scene, config))

    try:
        with ThreadPoolExecutor(max_workers=min(8, len(paths))) as pool:
            summaries = list(pool.map(run_one, paths))
    except ParseError as exc:
        return _fail(str(exc), EXIT_PARSE)
    except CrowdlensError as exc:
        return _fail(str(exc), EXIT_INVARIANT)

    for summary in sorted(summaries, key=lambda s: s["scene"]["scene_id"]):
        target = outdir / f"{summary['scene']['scene_id']}.summary.json"
        target.write_bytes(summary_json(summary))
        print(f"analyzed {summary['scene']['scene_id']} -> {target}", file=sys.stderr)
    return EXIT_OK


def _load_annotations(path: Path) -> list[HighlightAnnotation]:
    if not path.exists():
        raise ParseError(f"annotations file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"annotations file is not valid JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise ParseError("annotations must be a JSON list")
    try:
        return [
            HighlightAnnotation(
                scene_id=str(e["scene_id"]),
                yellow_id=int(e["yellow_id"]),
                red_id=int(e["red_id"]),
                question_key=str(e["question_key"]),
            )
            for e in doc
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad annotation entry: {exc}") from exc


def cmd_questions(args) -> int:
    try:
        config = build_config(args)
        annotations = _load_annotations(Path(args.annotations))
    except ParseError as exc:
        return _fail(str(exc), EXIT_PARSE)

    answers = []
    if annotations:
        paths = _scene_paths(args.input)
        if not paths:
            return _fail("no input scenes", EXIT_PARSE)
        try:
            scenes = {s.scene_id: s for s in map(_load_scene, paths)}
        except ParseError as exc:
            return _fail(str(exc), EXIT_PARSE)
        analyses = {}
        try:
            for note in annotations:
                if note.scene_id not in scenes:
                    return _fail(f"annotation references unknown scene {note.scene_id}",
                                 EXIT_INVARIANT)
                if note.scene_id not in analyses:
                    analyses[note.scene_id] = analyze_scene(scenes[note.scene_id], config)
                answers.append(answer_question(note, analyses[note.scene_id]))
        except CrowdlensError as exc:
            return _fail(str(exc), EXIT_INVARIANT)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    document = {"parameters": config.ledger(), "answers": answers}
    out.write_text(json.dumps(document, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(answers)} answers -> {out}", file=sys.stderr)
    return EXIT_OK


_FRAME_COLUMNS = ("pedestrian_id", "frame", "x", "y", "speed", "heading",
                  "angular_variation", "mean_distance", "social_neighbors",
                  "collectivity", "animation")
_VECTOR_COLUMNS = ("pedestrian_id", "x", "y", "s", "alpha", "isolation",
                   "socialization", "collectivity")
_SCORE_COLUMNS = ("pedestrian_id", "O", "C", "E", "A", "N", "fear", "happiness",
                  "sadness", "anger", "dominant_emotion")


def _csv_value(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def _write_csv(path: Path, ledger_line: str, columns, rows):
    lines = [f"# parameters={ledger_line}", ",".join(columns)]
    lines.extend(",".join(_csv_value(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_export(args) -> int:
    summaries_dir = Path(args.summaries)
    files = sorted(summaries_dir.glob("*.summary.json"))
    if not files:
        return _fail(f"no summaries found in {summaries_dir}", EXIT_INVARIANT)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    for file in files:
        summary = json.loads(file.read_text(encoding="utf-8"))
        sid = summary["scene"]["scene_id"]
        ledger_line = json.dumps(summary["parameters"], sort_keys=True,
                                 separators=(",", ":"))
        frames, vectors, scores = [], [], []
        for ped in summary["pedestrians"]:
            pid = ped["id"]
            for f in ped["frames"]:
                frames.append([pid, f["frame"], f["x"], f["y"], f["speed"],
                               f["heading"], f["angular_variation"],
                               f["mean_distance"], f["social_neighbors"],
                               f["collectivity"], f["animation"]])
            v = ped["feature_vector"]
            vectors.append([pid, v["x"][0], v["x"][1], v["s"], v["alpha"],
                            v["isolation"], v["socialization"], v["collectivity"]])
            o, e = ped["ocean"], ped["emotions"]
            scores.append([pid, o["O"], o["C"], o["E"], o["A"], o["N"],
                           e["fear"], e["happiness"], e["sadness"], e["anger"],
                           ped["dominant_emotion"]])

        if args.format == "csv":
            _write_csv(outdir / f"{sid}.frames.csv", ledger_line, _FRAME_COLUMNS, frames)
            _write_csv(outdir / f"{sid}.vectors.csv", ledger_line, _VECTOR_COLUMNS, vectors)
            _write_csv(outdir / f"{sid}.scores.csv", ledger_line, _SCORE_COLUMNS, scores)
        else:
            doc = {
                "parameters": summary["parameters"],
                "frames": [dict(zip(_FRAME_COLUMNS, r)) for r in frames],
                "vectors": [dict(zip(_VECTOR_COLUMNS, r)) for r in vectors],
                "scores": [dict(zip(_SCORE_COLUMNS, r)) for r in scores],
            }
            (outdir / f"{sid}.export.json").write_text(
                json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n",
                encoding="utf-8")
        print(f"exported {sid}", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import SceneStore, serve

    try:
        config = build_config(args)
    except ParseError as exc:
        return _fail(str(exc), EXIT_PARSE)
    paths = _scene_paths([args.scenes])
    if not paths:
        return _fail(f"no scene files in {args.scenes}", EXIT_PARSE)
    try:
        store = SceneStore.from_paths(paths, config)
    except ParseError as exc:
        return _fail(str(exc), EXIT_PARSE)
    except CrowdlensError as exc:
        return _fail(str(exc), EXIT_INVARIANT)
    print(f"serving {len(store)} scenes on {args.host}:{args.port}", file=sys.stderr)
    serve(store, host=args.host, port=args.port, viewer_dir=args.viewer)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crowdlens",
                                     description="pedestrian trajectory analytics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and normalize tracking files")
    p.add_argument("--input", nargs="+", required=True, help="files or directories")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", help="run the pipeline, write scene summaries")
    p.add_argument("--input", nargs="+", required=True, help="files or directories")
    p.add_argument("--out", required=True, help="output directory")
    _add_param_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("questions", help="answer highlighted-pedestrian questions")
    p.add_argument("--input", nargs="+", required=True, help="scene files or directories")
    p.add_argument("--annotations", "--questions", dest="annotations", required=True,
                   help="annotation JSON file")
    p.add_argument("--out", default="answers.json", help="answers output file")
    _add_param_flags(p)
    p.set_defaults(func=cmd_questions)

    p = sub.add_parser("export", help="flatten summaries into plot-ready series")
    p.add_argument("--summaries", required=True, help="directory of *.summary.json")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the playback service")
    p.add_argument("--scenes", required=True, help="directory of scene files")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--viewer", help="optional static viewer directory to mount")
    _add_param_flags(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        return _fail(str(exc), EXIT_PARSE)
    except CrowdlensError as exc:
        return _fail(str(exc), EXIT_INVARIANT)


if __name__ == "__main__":
    sys.exit(main())
