"""Access to the ten bundled navigation map assets."""

from __future__ import annotations

from importlib import resources

from mtcontrol.nav2d.grid import NavMap, parse_map_file

_N_MAPS = 10
_cache: dict[str, NavMap] = {}


def bundled_map_names() -> list[str]:
    return [f"Map{i}" for i in range(_N_MAPS)]


def bundled_map(name: str) -> NavMap:
    if name not in _cache:
        ref = resources.files("mtcontrol.nav2d") / "maps" / f"{name}.map"
        _cache[name] = parse_map_file(ref.read_text())
    return _cache[name]
