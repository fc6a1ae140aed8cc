"""GroupReport serialization (JSON), table rendering, and CSV export."""

from __future__ import annotations

import json

from mtcontrol.protocol.experiment import STAGES, EvalRecord, GroupReport

FORMAT = "mtcontrol-report-v1"

_COLUMNS = [
    ("fully_trained", "Fully Trained"),
    ("after_env_training", "After Env Training"),
    ("first_step", "First Step"),
    ("single_env", "Single Env"),
]


def report_to_json(report: GroupReport) -> str:
    doc = {
        "format": FORMAT,
        "group": report.group,
        "seed": report.seed,
        "config": report.config,
        "config_hash": report.config_hash,
        "env_order": report.env_order,
        "eval_rollouts": report.eval_rollouts,
        "partial": report.partial,
        "failure": report.failure,
        "records": {
            env_id: {
                stage: {"mean": rec.mean, "std": rec.std,
                        "returns": rec.returns, "param_hash": rec.param_hash}
                for stage, rec in stages.items()
            }
            for env_id, stages in report.records.items()
        },
        "totals": report.totals,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def report_from_json(text: str) -> GroupReport:
    doc = json.loads(text)
    if doc.get("format") != FORMAT:
        raise ValueError(f"not a {FORMAT} document")
    report = GroupReport(doc["group"], doc["seed"], doc["config"],
                         doc["config_hash"], doc["env_order"],
                         doc["eval_rollouts"])
    report.partial = doc.get("partial", False)
    report.failure = doc.get("failure")
    for env_id, stages in doc["records"].items():
        for stage, rec in stages.items():
            report.record(env_id, stage,
                          EvalRecord(rec["mean"], rec["std"], rec["returns"],
                                     rec["param_hash"]))
    report.totals = doc.get("totals", {})
    return report


def _cell(stages: dict, stage: str) -> str:
    rec = stages.get(stage)
    if rec is None:
        return "-"
    return f"{rec.mean:.2f} ± {rec.std:.2f}"


def render_table(report: GroupReport) -> str:
    """Aligned text table with the four result columns and the totals row."""
    headers = ["Environment"] + [label for _, label in _COLUMNS]
    rows = [headers]
    for env_id in report.env_order:
        stages = report.records.get(env_id, {})
        rows.append([env_id] + [_cell(stages, stage) for stage, _ in _COLUMNS])
    totals_row = ["Total for Grouping"]
    for stage, _ in _COLUMNS:
        tot = report.totals.get(stage)
        if tot is None:
            totals_row.append("-")
        else:
            totals_row.append(
                f"{tot['mean_of_means']:.2f} ± {tot['pooled_std']:.2f}")
    rows.append(totals_row)

    widths = [max(len(r[i]) for r in rows) for i in range(len(headers))]
    lines = []
    for idx, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[i])
                               for i, cell in enumerate(row)).rstrip())
        if idx == 0 or idx == len(rows) - 2:
            lines.append("  ".join("-" * widths[i]
                                   for i in range(len(headers))))
    title = f"group: {report.group}  seed: {report.seed}" \
        + ("  [PARTIAL]" if report.partial else "")
    note = "std over rollouts; totals: mean of env means, pooled std"
    return "\n".join([title, *lines, note]) + "\n"


def returns_to_csv(report: GroupReport) -> str:
    """Raw per-rollout returns: env_id,stage,rollout,return."""
    lines = ["env_id,stage,rollout,return"]
    for env_id in report.env_order:
        for stage in (*STAGES, "single_env_first_step"):
            rec = report.records.get(env_id, {}).get(stage)
            if rec is None:
                continue
            for i, r in enumerate(rec.returns):
                lines.append(f"{env_id},{stage},{i},{r!r}")
    return "\n".join(lines) + "\n"
