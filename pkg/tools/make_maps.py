#!/usr/bin/env python3
"""Author the ten bundled 32x32 navigation maps.

Regenerates src/mtcontrol/nav2d/maps/Map{0-9}.map deterministically. Each map
is a closed 32x32 grid (rooms / scattered blocks / dividing walls with door
gaps), with a single connected free region and three goal cells chosen for
clearance and mutual spread.
"""

from __future__ import annotations

import sys
from collections import deque
from pathlib import Path

import numpy as np

SIZE = 32
OUT_DIR = Path(__file__).resolve().parents[1] / "src" / "mtcontrol" / "nav2d" / "maps"


def blank() -> np.ndarray:
    cells = np.zeros((SIZE, SIZE), dtype=bool)
    cells[0, :] = cells[-1, :] = True
    cells[:, 0] = cells[:, -1] = True
    return cells


def add_block(cells, rng, max_side=4):
    h = int(rng.integers(2, max_side + 1))
    w = int(rng.integers(2, max_side + 1))
    y = int(rng.integers(2, SIZE - 2 - h))
    x = int(rng.integers(2, SIZE - 2 - w))
    cells[y:y + h, x:x + w] = True


def add_dividing_wall(cells, rng, horizontal: bool, n_doors=2, door_w=3):
    pos = int(rng.integers(6, SIZE - 6))
    if horizontal:
        cells[pos, 1:-1] = True
        line = cells[pos]
    else:
        cells[1:-1, pos] = True
        line = cells[:, pos]
    for _ in range(n_doors):
        d = int(rng.integers(2, SIZE - 2 - door_w))
        line[d:d + door_w] = False


def components(cells):
    free = ~cells
    seen = np.zeros_like(free)
    comps = []
    for sy, sx in zip(*np.nonzero(free)):
        if seen[sy, sx]:
            continue
        comp = []
        q = deque([(sy, sx)])
        seen[sy, sx] = True
        while q:
            y, x = q.popleft()
            comp.append((y, x))
            for ny, nx in ((y + 1, x), (y - 1, x), (y, x + 1), (y, x - 1)):
                if free[ny, nx] and not seen[ny, nx]:
                    seen[ny, nx] = True
                    q.append((ny, nx))
        comps.append(comp)
    return comps


def keep_largest_component(cells):
    comps = sorted(components(cells), key=len, reverse=True)
    for comp in comps[1:]:
        for y, x in comp:
            cells[y, x] = True


def clearance_map(cells):
    """Distance from each free cell center to the nearest obstacle cell box."""
    oy, ox = np.nonzero(cells)
    fy, fx = np.nonzero(~cells)
    centers = np.stack([fx + 0.5, fy + 0.5], axis=1)
    cx = np.clip(centers[:, 0:1], ox[None, :], ox[None, :] + 1.0)
    cy = np.clip(centers[:, 1:2], oy[None, :], oy[None, :] + 1.0)
    d = np.hypot(cx - centers[:, 0:1], cy - centers[:, 1:2]).min(axis=1)
    return centers, d


def pick_goals(cells, rng):
    centers, clear = clearance_map(cells)
    candidates = centers[clear >= 1.0]
    if len(candidates) < 3:
        return None
    # greedy max-min spread, seeded with the candidate nearest a random corner
    corner = np.array([[2.0, 2.0], [SIZE - 2.0, SIZE - 2.0],
                       [2.0, SIZE - 2.0], [SIZE - 2.0, 2.0]])[int(rng.integers(4))]
    goals = [candidates[np.hypot(*(candidates - corner).T).argmin()]]
    for _ in range(2):
        d = np.full(len(candidates), np.inf)
        for g in goals:
            d = np.minimum(d, np.hypot(*(candidates - g).T))
        goals.append(candidates[d.argmax()])
    return [tuple(g) for g in goals]


def build(index: int) -> tuple[np.ndarray, list[tuple[float, float]]]:
    for attempt in range(100):
        rng = np.random.default_rng(1000 + 37 * index + attempt)
        cells = blank()
        style = index % 3
        if style == 0:      # scattered blocks
            for _ in range(int(rng.integers(5, 9))):
                add_block(cells, rng)
        elif style == 1:    # dividing walls with doors
            add_dividing_wall(cells, rng, horizontal=True)
            add_dividing_wall(cells, rng, horizontal=False)
            for _ in range(int(rng.integers(2, 5))):
                add_block(cells, rng, max_side=3)
        else:               # rooms: two walls each way
            add_dividing_wall(cells, rng, horizontal=True, n_doors=3)
            add_dividing_wall(cells, rng, horizontal=True, n_doors=3)
            add_dividing_wall(cells, rng, horizontal=False, n_doors=3)
        keep_largest_component(cells)
        free_frac = (~cells).sum() / cells.size
        if free_frac < 0.60:
            continue
        goals = pick_goals(cells, rng)
        if goals is None:
            continue
        return cells, goals
    raise RuntimeError(f"could not build map {index}")


def render(name, cells, goals) -> str:
    lines = [f"name: {name}", "cell_size: 1.0"]
    for i, (gx, gy) in enumerate(goals):
        lines.append(f"goal{i}: {gx} {gy}")
    lines.append("map:")
    for y in range(SIZE - 1, -1, -1):
        lines.append("".join("#" if v else "." for v in cells[y]))
    return "\n".join(lines) + "\n"


def main():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for i in range(10):
        cells, goals = build(i)
        name = f"Map{i}"
        (OUT_DIR / f"{name}.map").write_text(render(name, cells, goals))
        print(f"{name}: free={(~cells).sum()}/{cells.size} goals={goals}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
