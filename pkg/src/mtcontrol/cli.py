"""Command-line entry point: enumerate, run, render, dump, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

import mtcontrol
from mtcontrol.errors import (MTControlError, NumericalFailure,
                              UnknownEnvironment)
from mtcontrol.protocol import (get_group, render_table, report_from_json,
                                report_to_json, returns_to_csv,
                                run_group, run_single_env_baselines)
from mtcontrol.protocol.experiment import merge_single_env
from mtcontrol.agent.trpo import TrpoConfig
from mtcontrol.registry import default_registry, write_manifest
from mtcontrol.seeding import RngState, derive_seed

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNKNOWN_NAME = 3
EXIT_NUMERICAL = 4
EXIT_BAD_INPUT = 5

OUTPUT_ROOT_VAR = "MTCONTROL_OUTPUT_ROOT"

DESK_ITERATIONS = 100
DESK_BATCH = 5000
FULL_SCALE_BATCH = 50000


@dataclass
class RunConfig:
    """Resolved run options: config file merged under explicit flags."""

    group: str
    seed: int = 0
    iterations: int | None = None
    batch: int | None = None
    out: str = "runs"
    desk: bool = False

    def resolve(self, group_iterations: int) -> TrpoConfig:
        iters = self.iterations
        if iters is None:
            iters = DESK_ITERATIONS if self.desk else group_iterations
        batch = self.batch
        if batch is None:
            batch = DESK_BATCH if self.desk else FULL_SCALE_BATCH
        return TrpoConfig(batch_size=batch, iterations=iters)


def _read_config_file(path: str) -> dict:
    values: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad config line (need key=value): {raw!r}")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    return values


def _build_run_config(args) -> RunConfig:
    file_vals = _read_config_file(args.config) if args.config else {}
    group = args.group or file_vals.get("group")
    if not group:
        raise ValueError("no group given (flag --group or config file)")
    cfg = RunConfig(group=group)
    if "seed" in file_vals:
        cfg.seed = int(file_vals["seed"])
    if "iterations" in file_vals:
        cfg.iterations = int(file_vals["iterations"])
    if "batch" in file_vals:
        cfg.batch = int(file_vals["batch"])
    if "out" in file_vals:
        cfg.out = file_vals["out"]
    if "desk" in file_vals:
        cfg.desk = file_vals["desk"].lower() in ("1", "true", "yes")
    # explicit flags win over the config file
    if args.seed is not None:
        cfg.seed = args.seed
    if args.iterations is not None:
        cfg.iterations = args.iterations
    if args.batch is not None:
        cfg.batch = args.batch
    if args.out is not None:
        cfg.out = args.out
    if args.desk:
        cfg.desk = True
    return cfg


def _out_dir(path_str: str) -> Path:
    root = os.environ.get(OUTPUT_ROOT_VAR, ".")
    path = Path(path_str)
    if not path.is_absolute():
        path = Path(root) / path
    path.mkdir(parents=True, exist_ok=True)
    return path


# -- subcommands ---------------------------------------------------------------


def cmd_list(args) -> int:
    specs = default_registry().list(args.family)
    for spec in specs:
        if args.verbose:
            print(json.dumps(spec.to_record(), sort_keys=True))
        else:
            print(spec.id)
    if args.manifest:
        write_manifest(args.manifest)
        print(f"manifest written to {args.manifest}", file=sys.stderr)
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = _build_run_config(args)
    group = get_group(cfg.group)
    trpo_cfg = cfg.resolve(group.iterations_per_env)
    group = _override_group(group, trpo_cfg)
    out = _out_dir(cfg.out) / f"{group.name}-seed{cfg.seed}"
    out.mkdir(parents=True, exist_ok=True)

    diag_path = out / "diagnostics.jsonl"
    with open(diag_path, "w") as diag_fh:
        def sink(diag):
            diag_fh.write(json.dumps(diag, sort_keys=True) + "\n")

        report = run_group(group, trpo_cfg, cfg.seed, diagnostics_sink=sink,
                           policy_out=out / "policy.ckpt")
        if args.with_baselines:
            baselines = run_single_env_baselines(group, trpo_cfg, cfg.seed,
                                                 diagnostics_sink=sink)
            merge_single_env(report, baselines)

    (out / "report.json").write_text(report_to_json(report))
    (out / "returns.csv").write_text(returns_to_csv(report))
    (out / "report.txt").write_text(render_table(report))
    print(render_table(report))
    print(f"outputs in {out}", file=sys.stderr)
    return EXIT_NUMERICAL if report.partial else EXIT_OK


def cmd_baseline(args) -> int:
    cfg = _build_run_config(args)
    group = get_group(cfg.group)
    trpo_cfg = cfg.resolve(group.iterations_per_env)
    group = _override_group(group, trpo_cfg)
    out = _out_dir(cfg.out) / f"{group.name}-seed{cfg.seed}"
    out.mkdir(parents=True, exist_ok=True)
    baselines = run_single_env_baselines(group, trpo_cfg, cfg.seed)
    doc = {
        env_id: {stage: {"mean": rec.mean, "std": rec.std,
                         "returns": rec.returns,
                         "param_hash": rec.param_hash}
                 for stage, rec in recs.items() if not isinstance(rec, str)}
        for env_id, recs in baselines.items()
    }
    (out / "single_env.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if args.report:
        report = report_from_json(Path(args.report).read_text())
        merge_single_env(report, baselines)
        Path(args.report).write_text(report_to_json(report))
        print(f"merged single-env columns into {args.report}", file=sys.stderr)
    print(f"outputs in {out}", file=sys.stderr)
    return EXIT_OK


def _override_group(group, trpo_cfg: TrpoConfig):
    return replace(group, iterations_per_env=trpo_cfg.iterations)


def cmd_render(args) -> int:
    path = Path(args.report)
    try:
        report = report_from_json(path.read_text())
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"malformed report {path}: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    table = render_table(report)
    print(table)
    out = path.parent if args.out is None else _out_dir(args.out)
    (out / "table.txt").write_text(table)
    diag_path = path.parent / "diagnostics.jsonl"
    if diag_path.exists():
        plot_path = out / "learning_curves.png"
        _plot_diagnostics(diag_path, plot_path)
        print(f"learning curves: {plot_path}", file=sys.stderr)
    return EXIT_OK


def _plot_diagnostics(diag_path: Path, plot_path: Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    per_env: dict[str, list[float]] = {}
    for line in diag_path.read_text().splitlines():
        rec = json.loads(line)
        if rec.get("single_env"):
            continue
        per_env.setdefault(rec["env_id"], []).append(rec["mean_return"])
    fig, ax = plt.subplots(figsize=(8, 5))
    offset = 0
    for env_id, returns in per_env.items():
        xs = range(offset, offset + len(returns))
        ax.plot(xs, returns, label=env_id)
        offset += len(returns)
    ax.set_xlabel("training iteration (sequential)")
    ax.set_ylabel("mean return per batch")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(plot_path, dpi=120)
    plt.close(fig)


def cmd_dump_env(args) -> int:
    spec = default_registry().spec(args.env)
    print(json.dumps(spec.to_record(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_dump_trace(args) -> int:
    env = default_registry().make(args.env, args.seed)
    rng = RngState(derive_seed(args.seed, "trace-actions"))
    gen = rng.spawn()
    lines = [json.dumps({
        "type": "header", "env_id": args.env, "seed": args.seed,
        "steps": args.steps,
        "observation_dim": env.observation_space.dim,
        "action_dim": env.action_space.dim,
    }, sort_keys=True)]
    obs = env.reset()
    lines.append(json.dumps({
        "type": "reset",
        "observation": np.asarray(obs, dtype=np.float64).ravel().tolist(),
    }, sort_keys=True))
    for t in range(args.steps):
        action = env.action_space.sample(gen)
        result = env.step(action)
        rec = {
            "type": "step", "t": t,
            "action": action.tolist(),
            "observation": np.asarray(result.observation,
                                      dtype=np.float64).ravel().tolist(),
            "reward": result.reward,
            "done": result.done,
            "info": result.info,
        }
        try:
            rec["state"] = env.state_vector().tolist()
        except NotImplementedError:
            pass
        lines.append(json.dumps(rec, sort_keys=True))
        if result.done:
            break
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"trace written to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_env_server(args) -> int:
    """JSON-lines request/response loop over stdio (the bindings wire format)."""
    envs: dict[int, object] = {}
    next_handle = 0
    for raw in sys.stdin:
        raw = raw.strip()
        if not raw:
            continue
        try:
            req = json.loads(raw)
            op = req.get("op")
            if op == "shutdown":
                _reply({"ok": True})
                return EXIT_OK
            elif op == "make":
                env = default_registry().make(req["env_id"], int(req["seed"]))
                handle = next_handle
                next_handle += 1
                envs[handle] = env
                _reply({
                    "ok": True, "handle": handle,
                    "observation_dim": env.observation_space.dim,
                    "observation_shape": list(env.observation_space.shape),
                    "action_dim": env.action_space.dim,
                    "action_low": env.action_space.low.tolist(),
                    "action_high": env.action_space.high.tolist(),
                    "horizon": env.horizon,
                })
            elif op == "reset":
                obs = envs[req["handle"]].reset()
                _reply({"ok": True, "observation":
                        np.asarray(obs, dtype=np.float64).ravel().tolist()})
            elif op == "step":
                result = envs[req["handle"]].step(np.asarray(req["action"],
                                                             dtype=np.float64))
                _reply({
                    "ok": True,
                    "observation": np.asarray(result.observation,
                                              dtype=np.float64).ravel().tolist(),
                    "reward": result.reward,
                    "done": result.done,
                    "info": result.info,
                })
            elif op == "seed":
                envs[req["handle"]].seed(int(req["seed"]))
                _reply({"ok": True})
            elif op == "close":
                env = envs.pop(req["handle"], None)
                if env is not None:
                    env.close()
                _reply({"ok": True})
            else:
                _reply({"ok": False, "error": "BadRequest",
                        "message": f"unknown op {op!r}"})
        except KeyError as exc:
            _reply({"ok": False, "error": "BadRequest",
                    "message": f"missing or invalid field: {exc}"})
        except MTControlError as exc:
            _reply({"ok": False, "error": type(exc).__name__,
                    "message": str(exc)})
        except (ValueError, json.JSONDecodeError) as exc:
            _reply({"ok": False, "error": "BadRequest", "message": str(exc)})
    return EXIT_OK


def _reply(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    sys.stdout.flush()


# -- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtcontrol",
        description="Multitask continuous-control benchmark suite.")
    parser.add_argument("--version", action="version",
                        version=mtcontrol.__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="enumerate registered environments")
    p.add_argument("--family", choices=("nav2d", "runner", "arm"))
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--manifest", help="also write the JSON manifest here")
    p.set_defaults(fn=cmd_list)

    for name, fn in (("run", cmd_run), ("baseline", cmd_baseline)):
        p = sub.add_parser(name, help=f"{name} a task group")
        p.add_argument("--group")
        p.add_argument("--seed", type=int)
        p.add_argument("--iterations", type=int,
                       help="optimizer iterations per environment")
        p.add_argument("--batch", type=int, help="timesteps per iteration")
        p.add_argument("--out", help=f"output dir (under ${OUTPUT_ROOT_VAR})")
        p.add_argument("--desk", action="store_true",
                       help=f"desk scale: batch {DESK_BATCH}, "
                            f"{DESK_ITERATIONS} iterations")
        p.add_argument("--config", help="key=value config file")
        if name == "run":
            p.add_argument("--with-baselines", action="store_true",
                           help="also train per-env single baselines")
        else:
            p.add_argument("--report", help="merge results into this report")
        p.set_defaults(fn=fn)

    p = sub.add_parser("render", help="render a report as table + plots")
    p.add_argument("--report", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("dump-env", help="print an environment's spec record")
    p.add_argument("--env", required=True)
    p.set_defaults(fn=cmd_dump_env)

    p = sub.add_parser("dump-trace",
                       help="roll a seeded random-action trace as JSONL")
    p.add_argument("--env", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_dump_trace)

    p = sub.add_parser("env-server",
                       help="serve make/reset/step/seed/close over stdio JSONL")
    p.set_defaults(fn=cmd_env_server)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (UnknownEnvironment, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_NAME
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except MTControlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
