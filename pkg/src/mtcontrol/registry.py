"""Named environment registry and its manifest serialization."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from typing import Callable

from mtcontrol.errors import DuplicateRegistration, UnknownEnvironment
from mtcontrol.stepping import Env

FAMILIES = ("nav2d", "runner", "arm")

PHYSICS_TAG = "planar-v1"
# Registered ids reuse the conventional benchmark names, but the dynamics
# underneath is the suite's own planar model; the tag keeps reports from
# being confused with numbers produced by 3D-engine variants of these names.


@dataclass(frozen=True)
class EnvSpec:
    """Named, versioned environment definition.

    ``variation`` is a JSON-serializable dict of family-specific parameters
    (gravity/morphology/wall/sensor for runners, map/goal/modality for
    navigation, task variant for arms).
    """

    id: str
    family: str
    variation: dict
    horizon: int
    physics: str = PHYSICS_TAG

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "family": self.family,
            "variation": self.variation,
            "horizon": self.horizon,
            "physics": self.physics,
        }


class Registry:
    """Mapping from environment id to (spec, constructor).

    Writes are locked; reads are lock-free and safe once registration is
    done (the intended pattern: register everything up-front, then make()
    from any thread).
    """

    def __init__(self):
        self._entries: dict[str, tuple[EnvSpec, Callable[[EnvSpec, int], Env]]] = {}
        self._lock = threading.Lock()

    def register(self, spec: EnvSpec,
                 constructor: Callable[[EnvSpec, int], Env]) -> str:
        with self._lock:
            if spec.id in self._entries:
                raise DuplicateRegistration(f"env id {spec.id!r} already registered")
            self._entries[spec.id] = (spec, constructor)
        return spec.id

    def spec(self, env_id: str) -> EnvSpec:
        try:
            return self._entries[env_id][0]
        except KeyError:
            raise UnknownEnvironment(f"no environment named {env_id!r}") from None

    def make(self, env_id: str, seed: int) -> Env:
        spec, constructor = self._entry(env_id)
        return constructor(spec, int(seed))

    def list(self, family: str | None = None) -> list[EnvSpec]:
        specs = [spec for spec, _ in self._entries.values()]
        if family is not None:
            specs = [s for s in specs if s.family == family]
        return sorted(specs, key=lambda s: s.id)

    def __contains__(self, env_id: str) -> bool:
        return env_id in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def _entry(self, env_id: str):
        try:
            return self._entries[env_id]
        except KeyError:
            raise UnknownEnvironment(f"no environment named {env_id!r}") from None


_default = Registry()


def default_registry() -> Registry:
    return _default


def register_env(spec: EnvSpec,
                 constructor: Callable[[EnvSpec, int], Env]) -> str:
    return _default.register(spec, constructor)


def make(env_id: str, seed: int) -> Env:
    return _default.make(env_id, seed)


def list_envs(family: str | None = None) -> list[EnvSpec]:
    return _default.list(family)


def manifest_dict(registry: Registry | None = None) -> dict:
    reg = registry or _default
    return {
        "format": "mtcontrol-manifest-v1",
        "environments": [s.to_record() for s in reg.list()],
    }


def write_manifest(path, registry: Registry | None = None) -> None:
    """Serialize the registry as human-readable JSON for external tools."""
    with open(path, "w") as fh:
        json.dump(manifest_dict(registry), fh, indent=2, sort_keys=False)
        fh.write("\n")
