"""Occupancy grids, exact ray casting, and disc motion with sliding collisions.

World frame: x grows right, y grows up; cell (ix, iy) covers the half-open
square [ix*c, (ix+1)*c) x [iy*c, (iy+1)*c) for cell size c. The first line of
a map text file is the top row of the world.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mtcontrol.errors import InvalidOrigin, MalformedMap


class OccupancyGrid:
    """Boolean obstacle grid with a metric scale.

    Boundary cells are always obstacles (closed world), so every ray
    eventually hits something and a nearest obstacle always exists.
    """

    def __init__(self, cells: np.ndarray, cell_size: float = 1.0):
        cells = np.ascontiguousarray(np.asarray(cells, dtype=bool))
        if cells.ndim != 2:
            raise MalformedMap("cells must be a 2D boolean array")
        cells[0, :] = True
        cells[-1, :] = True
        cells[:, 0] = True
        cells[:, -1] = True
        if not bool((~cells).any()):
            raise MalformedMap("map has no free cell")
        self.cells = cells
        self.cell_size = float(cell_size)
        self.height, self.width = cells.shape
        # flat arrays over obstacle cells, for vectorized distance queries
        iy, ix = np.nonzero(cells)
        c = self.cell_size
        self._obs_x0 = ix * c
        self._obs_y0 = iy * c

    @property
    def free_count(self) -> int:
        return int((~self.cells).sum())

    @property
    def extent(self) -> tuple[float, float]:
        return self.width * self.cell_size, self.height * self.cell_size

    def cell_index(self, x: float, y: float) -> tuple[int, int]:
        c = self.cell_size
        return int(math.floor(x / c)), int(math.floor(y / c))

    def is_obstacle(self, ix: int, iy: int) -> bool:
        if ix < 0 or iy < 0 or ix >= self.width or iy >= self.height:
            return True  # outside the closed world counts as solid
        return bool(self.cells[iy, ix])

    def point_in_obstacle(self, x: float, y: float) -> bool:
        ix, iy = self.cell_index(x, y)
        return self.is_obstacle(ix, iy)

    def disc_free(self, x: float, y: float, radius: float) -> bool:
        """True if the open disc of given radius does not overlap any obstacle."""
        c = self.cell_size
        lo_x = int(math.floor((x - radius) / c))
        hi_x = int(math.floor((x + radius) / c))
        lo_y = int(math.floor((y - radius) / c))
        hi_y = int(math.floor((y + radius) / c))
        for iy in range(lo_y, hi_y + 1):
            for ix in range(lo_x, hi_x + 1):
                if not self.is_obstacle(ix, iy):
                    continue
                dx = max(ix * c - x, 0.0, x - (ix + 1) * c)
                dy = max(iy * c - y, 0.0, y - (iy + 1) * c)
                if dx * dx + dy * dy < radius * radius:
                    return False
        return True

    def free_cell_centers(self) -> np.ndarray:
        iy, ix = np.nonzero(~self.cells)
        c = self.cell_size
        return np.stack([(ix + 0.5) * c, (iy + 0.5) * c], axis=1)

    def to_text(self) -> str:
        rows = []
        for iy in range(self.height - 1, -1, -1):
            rows.append("".join("#" if v else "." for v in self.cells[iy]))
        return "\n".join(rows)


def load_map(text: str, cell_size: float = 1.0) -> OccupancyGrid:
    """Parse a rectangular block of '#' (obstacle) and '.' (free)."""
    lines = [ln for ln in text.splitlines() if ln.strip() != ""]
    if not lines:
        raise MalformedMap("empty map text")
    width = len(lines[0])
    cells = np.zeros((len(lines), width), dtype=bool)
    for row, ln in enumerate(lines):
        if len(ln) != width:
            raise MalformedMap(f"row {row} has length {len(ln)}, expected {width}")
        for col, ch in enumerate(ln):
            if ch == "#":
                cells[len(lines) - 1 - row, col] = True
            elif ch != ".":
                raise MalformedMap(f"unexpected character {ch!r} at row {row}")
    return OccupancyGrid(cells, cell_size)


@dataclass(frozen=True)
class NavMap:
    """A named map asset: grid plus its three fixed goal coordinates (meters)."""

    name: str
    grid: OccupancyGrid
    goals: tuple[tuple[float, float], ...]


def parse_map_file(text: str) -> NavMap:
    """Parse the bundled asset format: a manifest header, then the grid.

    Header lines are `key: value`; required keys are `name`, `goal0..goal2`
    (two floats, meters) and the `map:` marker that starts the ASCII block.
    """
    name = None
    goals: dict[int, tuple[float, float]] = {}
    cell_size = 1.0
    lines = text.splitlines()
    grid_start = None
    for i, ln in enumerate(lines):
        s = ln.strip()
        if not s or s.startswith("#!"):
            continue
        if s == "map:":
            grid_start = i + 1
            break
        if ":" not in s:
            raise MalformedMap(f"bad manifest line {ln!r}")
        key, _, val = s.partition(":")
        key = key.strip()
        if key == "name":
            name = val.strip()
        elif key == "cell_size":
            cell_size = float(val)
        elif key.startswith("goal"):
            parts = val.split()
            if len(parts) != 2:
                raise MalformedMap(f"goal needs two coordinates: {ln!r}")
            goals[int(key[4:])] = (float(parts[0]), float(parts[1]))
    if name is None or grid_start is None or sorted(goals) != [0, 1, 2]:
        raise MalformedMap("manifest must define name, goal0..goal2 and map:")
    grid = load_map("\n".join(lines[grid_start:]), cell_size)
    for gx, gy in goals.values():
        if grid.point_in_obstacle(gx, gy):
            raise MalformedMap(f"goal ({gx}, {gy}) is inside an obstacle")
    return NavMap(name, grid, (goals[0], goals[1], goals[2]))


NO_HIT = None  # raycast sentinel: nothing within max_range


def raycast(grid: OccupancyGrid, origin, angle: float,
            max_range: float) -> float | None:
    """Distance from origin to the first obstacle-cell boundary along the ray.

    Exact grid traversal (one cell at a time along the ray), not sampling.
    Returns None when no obstacle lies within max_range.
    """
    ox, oy = float(origin[0]), float(origin[1])
    c = grid.cell_size
    ix, iy = grid.cell_index(ox, oy)
    if grid.is_obstacle(ix, iy):
        raise InvalidOrigin(f"ray origin ({ox}, {oy}) is inside an obstacle")
    dx = math.cos(angle)
    dy = math.sin(angle)

    if dx > 0.0:
        step_x, t_max_x, t_dx = 1, ((ix + 1) * c - ox) / dx, c / dx
    elif dx < 0.0:
        step_x, t_max_x, t_dx = -1, (ix * c - ox) / dx, -c / dx
    else:
        step_x, t_max_x, t_dx = 0, math.inf, math.inf
    if dy > 0.0:
        step_y, t_max_y, t_dy = 1, ((iy + 1) * c - oy) / dy, c / dy
    elif dy < 0.0:
        step_y, t_max_y, t_dy = -1, (iy * c - oy) / dy, -c / dy
    else:
        step_y, t_max_y, t_dy = 0, math.inf, math.inf

    while True:
        if t_max_x < t_max_y:
            t = t_max_x
            ix += step_x
            t_max_x += t_dx
        else:
            t = t_max_y
            iy += step_y
            t_max_y += t_dy
        if t > max_range:
            return NO_HIT
        if grid.is_obstacle(ix, iy):
            return t


def sense_rays(grid: OccupancyGrid, position, heading: float, n_beams: int,
               arc: float, max_range: float) -> np.ndarray:
    """Normalized range readouts in [0, 1]^n_beams.

    Beams are evenly spaced across the arc centered on the heading (full
    circles place beam 0 on the heading itself). A readout is
    distance/max_range on a hit and 0.0 when nothing is within range — the
    same no-target convention as the runner torso sensor.
    """
    if n_beams < 1:
        raise ValueError("n_beams must be >= 1")
    if arc >= 2.0 * math.pi - 1e-12:
        offsets = [i * 2.0 * math.pi / n_beams for i in range(n_beams)]
    elif n_beams == 1:
        offsets = [0.0]
    else:
        offsets = [-arc / 2.0 + i * arc / (n_beams - 1) for i in range(n_beams)]
    out = np.zeros(n_beams)
    for i, off in enumerate(offsets):
        d = raycast(grid, position, heading + off, max_range)
        if d is not None:
            out[i] = d / max_range
    return out


def nearest_obstacle(grid: OccupancyGrid, position) -> tuple[float, float]:
    """Minimum distance and bearing from a free-space point to any obstacle.

    The distance is to the closed region of the nearest obstacle cell;
    bearing is the world-frame angle to the closest point, ties broken by
    the smallest bearing in (-pi, pi].
    """
    px, py = float(position[0]), float(position[1])
    if grid.point_in_obstacle(px, py):
        raise InvalidOrigin(f"position ({px}, {py}) is inside an obstacle")
    c = grid.cell_size
    cx = np.clip(px, grid._obs_x0, grid._obs_x0 + c)
    cy = np.clip(py, grid._obs_y0, grid._obs_y0 + c)
    dists = np.hypot(cx - px, cy - py)
    best = float(dists.min())
    tie = dists <= best + 1e-12
    bearings = np.arctan2(cy[tie] - py, cx[tie] - px)
    return best, float(bearings.min())


def integrate_motion(grid: OccupancyGrid, position, agent_radius: float,
                     velocity: np.ndarray, dt: float) -> tuple[np.ndarray, bool]:
    """Advance a disc agent by velocity*dt with axis-wise sliding.

    The full candidate position is taken when collision-free; otherwise the
    penetrating component(s) are cancelled one axis at a time (x first), so
    grazing contact slides along walls instead of stopping dead. The returned
    position is always collision-free given a collision-free start.

    Assumes per-step displacement below the cell size (true for the nav
    action bounds), so endpoint checks cannot tunnel through a cell.
    """
    px, py = float(position[0]), float(position[1])
    nx = px + float(velocity[0]) * dt
    ny = py + float(velocity[1]) * dt
    if grid.disc_free(nx, ny, agent_radius):
        return np.array([nx, ny]), False
    if not grid.disc_free(nx, py, agent_radius):
        nx = px
    if not grid.disc_free(nx, ny, agent_radius):
        ny = py
    return np.array([nx, ny]), True
