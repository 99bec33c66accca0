# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""`ppf-pose` command line: train, detect, synth, bench and eval-vsd."""

import argparse
import logging
import sys
from pathlib import Path
from collections.abc import Callable
from typing import Any

from typeguard import TypeCheckError

from ppf_pose import __version__
from ppf_pose.config import PPF_LOG_LEVEL, PPF_WORKERS, ordered_map
from ppf_pose.config.pipeline import PipelineConfig, load_config
from ppf_pose.custom_encoder import dump_rigid_transform, load_rigid_transform, to_json
from ppf_pose.evaluation import (
    TargetResult,
    format_recall_table,
    generate_scene,
    recall_table_csv,
    summarize_recall,
    vsd_error,
)
from ppf_pose.files import (
    DetectionRecord,
    GroundTruth,
    SceneRecord,
    bop_scene_record,
    build_scene_specs,
    format_results,
    list_bop_images,
    list_scenes,
    load_depth,
    load_model_file,
    load_scene,
    load_scene_spec,
    read_results,
    write_scene,
)
from ppf_pose.model import load_table, save_table
from ppf_pose.verification import RenderModel

from .detect import (
    DetectionResult,
    config_for_table,
    detection_record,
    render_model,
    run_detection,
    train_model,
)
from .summary import format_bench_summary, format_detection_summary, format_train_summary

logger = logging.getLogger(__name__)

# Recorded with every run: VSD compares camera-z depth, not distance along the ray.
VSD_DEPTH = "camera_z"


def _configure_logging(verbose: bool) -> None:
    level = "INFO" if verbose and PPF_LOG_LEVEL == "WARNING" else PPF_LOG_LEVEL
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s: %(message)s", level=level)


def _config(args: argparse.Namespace) -> PipelineConfig:
    """Dataclass defaults, then the config file, then flags."""
    config = load_config(args.config) if args.config else PipelineConfig()
    return config.with_overrides(
        leaf_frac=getattr(args, "leaf_frac", None),
        depth_scale=getattr(args, "depth_scale", None),
        seed=getattr(args, "seed", None),
    )


def _metadata(command: str, config: PipelineConfig, **extra: Any) -> dict[str, Any]:
    return {
        "command": command,
        "version": __version__,
        "config": config.to_dict(),
        "vsd_depth": VSD_DEPTH,
        **extra,
    }


# ------------------------------------------------------------------------------------------------------
# Commands
# ------------------------------------------------------------------------------------------------------


def cmd_train(args: argparse.Namespace) -> int:
    config = _config(args)
    model = load_model_file(args.model)
    table = train_model(model, config, args.workers)
    save_table(table, args.out)

    metadata = _metadata("train", config_for_table(config, table), model=str(args.model))
    summary = {
        "table": str(args.out),
        "points": len(table.model),
        "entries": table.entry_count,
        "keys": len(table.keys),
        "leaf": table.leaf,
        "d_max": table.d_max,
    }
    print(to_json({"metadata": metadata}))
    print(to_json(summary))
    print(format_train_summary(table, model.name, str(args.out)), file=sys.stderr)
    return 0


def cmd_detect(args: argparse.Namespace) -> int:
    table = load_table(args.table)
    config = config_for_table(_config(args), table)
    mesh = load_model_file(args.model) if args.model else None
    depth, cam = load_depth(args.depth, config.depth_scale, args.intrinsics)

    result = run_detection(table, depth, cam, config, render_model(table, mesh), args.workers)
    scene_id = args.scene_id or Path(args.depth).stem
    obj_id = args.obj_id or Path(args.table).stem
    record = detection_record(result, scene_id, obj_id)
    print(format_results(_metadata("detect", config), [record]), end="")
    print(format_detection_summary(result, scene_id), file=sys.stderr)
    return 0 if result.detected else 1


def cmd_synth(args: argparse.Namespace) -> int:
    config = _config(args)
    model = load_model_file(args.model)
    mesh = model if model.has_faces else None
    target = RenderModel(model.cloud, config.leaf_for(model.cloud.diameter), mesh)
    specs = build_scene_specs(load_scene_spec(args.spec), target, config.seed, model.name)

    if args.scene_id and len(specs) == 1:
        ids = [args.scene_id]
    else:
        prefix = f"{args.scene_id}_" if args.scene_id else ""
        ids = [f"{prefix}{i:06d}" for i in range(len(specs))]
    for scene_id, spec in zip(ids, specs):
        depth, pose = generate_scene(spec, target)
        gt = GroundTruth(scene_id, spec.model_id, args.dataset, pose)
        write_scene(args.out, scene_id, depth, spec.cam, gt, config.depth_scale)
        line = {"scene_id": scene_id, "obj_id": spec.model_id, **dump_rigid_transform(pose)}
        print(to_json(line))
    print(f"🧪 Wrote {len(specs)} scene(s) to {args.out}", file=sys.stderr)
    return 0


def _scene_source(
    args: argparse.Namespace, depth_scale: float
) -> tuple[list[str], Callable[[str], SceneRecord]]:
    """Scene ids and their loader; with `--bop`, `--scenes` is one BOP scene folder."""
    if args.bop:
        ids = [f"{im_id:06d}" for im_id in list_bop_images(args.scenes)]
        return ids, lambda scene_id: bop_scene_record(args.scenes, int(scene_id), args.bop)
    return list_scenes(args.scenes), lambda scene_id: load_scene(args.scenes, scene_id, depth_scale)


def cmd_bench(args: argparse.Namespace) -> int:
    table = load_table(args.table)
    config = config_for_table(_config(args), table)
    mesh = load_model_file(args.model) if args.model else None
    target = render_model(table, mesh)
    ids, load = _scene_source(args, config.depth_scale)
    if not ids:
        raise ValueError(f"no scenes found in {args.scenes}")

    def run(scene_id: str) -> tuple[DetectionResult, DetectionRecord]:
        scene = load(scene_id)
        result = run_detection(table, scene.depth, scene.cam, config, target, workers=1)
        obj_id = scene.gt.obj_id if scene.gt else args.bop or Path(args.table).stem
        dataset = scene.gt.dataset if scene.gt else ""
        return result, detection_record(result, scene_id, obj_id, dataset)

    outcomes = ordered_map(run, ids, args.workers)
    metadata = _metadata("bench", config, scenes=str(args.scenes))
    print(format_results(metadata, [record for _, record in outcomes]), end="")
    print(format_bench_summary([result for result, _ in outcomes]), file=sys.stderr)
    return 0


def cmd_eval_vsd(args: argparse.Namespace) -> int:
    config = _config(args)
    _, records = read_results(args.results)
    if not records:
        raise ValueError(f"{args.results} holds no records")
    model = load_model_file(args.model)
    mesh = model if model.has_faces else None
    target = RenderModel(model.cloud, config.leaf_for(model.cloud.diameter), mesh)
    _, load = _scene_source(args, config.depth_scale)

    def evaluate(record: DetectionRecord) -> tuple[TargetResult, DetectionRecord]:
        scene = load(record["scene_id"])
        if scene.gt is None:
            raise ValueError(f"scene {record['scene_id']} has no ground truth")
        error = None
        if record["detected"]:
            pose = load_rigid_transform(record)
            error = vsd_error(pose, scene.gt.pose, target, scene.depth, scene.cam, config.vsd)
        target_result = TargetResult(
            record["dataset"] or scene.gt.dataset, record["obj_id"], record["scene_id"], error
        )
        scored: DetectionRecord = {
            **record,
            "vsd": error,
            "correct": target_result.correct(config.vsd),
        }
        return target_result, scored

    outcomes = ordered_map(evaluate, records, args.workers)
    summary = summarize_recall([r for r, _ in outcomes], config.vsd)
    metadata = _metadata("eval-vsd", config, results=str(args.results), recall=summary)
    print(format_results(metadata, [record for _, record in outcomes]), end="")
    if args.csv:
        Path(args.csv).write_text(recall_table_csv(summary))
    print(format_recall_table(summary, per_object=True), file=sys.stderr)
    return 0


# ------------------------------------------------------------------------------------------------------
# Parser
# ------------------------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ppf-pose", description="Point pair feature 6D pose estimation"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log stage summaries")
    common.add_argument("--config", help="JSON pipeline config file")
    common.add_argument("--workers", type=int, default=PPF_WORKERS, help="worker threads")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--depth-scale", type=float, help="mm per raw depth count")
    commands = parser.add_subparsers(dest="command", required=True)

    train = commands.add_parser("train", parents=[common], help="model PLY -> PPFM table")
    train.add_argument("--model", required=True, help="model PLY (mm)")
    train.add_argument("--out", required=True, help="output PPFM file")
    train.add_argument("--leaf-frac", type=float, help="leaf as a fraction of the diameter")
    train.set_defaults(handler=cmd_train)

    detect = commands.add_parser("detect", parents=[common], help="find the model in a scene")
    detect.add_argument("--table", required=True, help="PPFM file from train")
    detect.add_argument("--depth", required=True, help="16-bit depth PNG")
    detect.add_argument("--intrinsics", required=True, help="intrinsics text file")
    detect.add_argument("--model", help="model PLY with faces, for rendering")
    detect.add_argument("--scene-id", help="scene id for the record (default: depth stem)")
    detect.add_argument("--obj-id", help="object id for the record (default: table stem)")
    detect.set_defaults(handler=cmd_detect)

    synth = commands.add_parser("synth", parents=[common], help="render synthetic scenes")
    synth.add_argument("--spec", required=True, help="JSON scene spec")
    synth.add_argument("--model", required=True, help="model PLY")
    synth.add_argument("--out", required=True, help="scene directory")
    synth.add_argument("--scene-id", help="scene id, or id prefix for several scenes")
    synth.add_argument("--dataset", default="synthetic", help="dataset name in ground truth")
    synth.set_defaults(handler=cmd_synth)

    bench = commands.add_parser("bench", parents=[common], help="detect over a scene directory")
    bench.add_argument("--scenes", required=True, help="scene directory")
    bench.add_argument("--table", required=True, help="PPFM file from train")
    bench.add_argument("--model", help="model PLY with faces, for rendering")
    bench.add_argument("--bop", metavar="OBJ_ID", help="read --scenes as a BOP scene folder")
    bench.set_defaults(handler=cmd_bench)

    evaluate = commands.add_parser("eval-vsd", parents=[common], help="recall under VSD")
    evaluate.add_argument("--results", required=True, help="results JSONL from detect/bench")
    evaluate.add_argument("--scenes", required=True, help="scene directory with ground truth")
    evaluate.add_argument("--model", required=True, help="model PLY")
    evaluate.add_argument("--csv", help="also write the recall table as CSV")
    evaluate.add_argument("--bop", metavar="OBJ_ID", help="read --scenes as a BOP scene folder")
    evaluate.set_defaults(handler=cmd_eval_vsd)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except (ValueError, OSError, TypeCheckError) as e:
        logger.debug("command failed", exc_info=True)
        print(f"Failed: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
