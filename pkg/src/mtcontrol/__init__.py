"""Multitask continuous-control benchmark suite.

Environment families (2D navigation, planar runners, planar arm tasks) with
named variations, a sequential multitask evaluation protocol, and a
trust-region policy-optimization baseline agent.
"""

__version__ = "0.1.0"

from mtcontrol.errors import (
    DimensionMismatch,
    DuplicateRegistration,
    EpisodeFinished,
    InvalidOrigin,
    InvalidVariation,
    MalformedMap,
    MTControlError,
    NumericalFailure,
    UnknownEnvironment,
)
from mtcontrol.registry import (
    EnvSpec,
    Registry,
    default_registry,
    list_envs,
    make,
    register_env,
    write_manifest,
)
from mtcontrol.spaces import BoxSpace
from mtcontrol.stepping import Env, StepResult

from mtcontrol import catalog as _catalog

# Built-in environments are available immediately after `import mtcontrol`.
_catalog.install_builtin_envs()

__all__ = [
    "BoxSpace",
    "Env",
    "EnvSpec",
    "Registry",
    "StepResult",
    "default_registry",
    "list_envs",
    "make",
    "register_env",
    "write_manifest",
    "MTControlError",
    "DuplicateRegistration",
    "UnknownEnvironment",
    "EpisodeFinished",
    "DimensionMismatch",
    "MalformedMap",
    "InvalidOrigin",
    "InvalidVariation",
    "NumericalFailure",
]
