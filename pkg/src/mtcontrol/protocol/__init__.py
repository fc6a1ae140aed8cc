"""Sequential multitask training/evaluation protocol and its reports."""

from mtcontrol.protocol.experiment import (
    EvalRecord,
    GroupReport,
    TaskGroup,
    evaluate,
    param_hash,
    run_group,
    run_single_env_baselines,
    transfer_metrics,
)
from mtcontrol.protocol.groups import builtin_groups, get_group
from mtcontrol.protocol.report import (
    render_table,
    report_from_json,
    report_to_json,
    returns_to_csv,
)

__all__ = [
    "TaskGroup",
    "EvalRecord",
    "GroupReport",
    "evaluate",
    "run_group",
    "run_single_env_baselines",
    "transfer_metrics",
    "param_hash",
    "builtin_groups",
    "get_group",
    "report_to_json",
    "report_from_json",
    "render_table",
    "returns_to_csv",
]
