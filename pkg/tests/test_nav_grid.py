"""Occupancy-grid geometry: parsing, ray casting, distances, disc motion."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mtcontrol.errors import InvalidOrigin, MalformedMap
from mtcontrol.nav2d import (OccupancyGrid, integrate_motion, load_map,
                             nearest_obstacle, parse_map_file, raycast,
                             sense_rays)
from mtcontrol.nav2d.maps import bundled_map


def march_oracle(grid, origin, angle, max_range, step=1.0e-4):
    """Fine-step ray marching: first sample point inside an obstacle cell."""
    n = int(max_range / step) + 1
    ts = np.arange(1, n + 1) * step
    xs = origin[0] + ts * math.cos(angle)
    ys = origin[1] + ts * math.sin(angle)
    ix = np.floor(xs / grid.cell_size).astype(np.int64)
    iy = np.floor(ys / grid.cell_size).astype(np.int64)
    inside = (ix >= 0) & (iy >= 0) & (ix < grid.width) & (iy < grid.height)
    hit = np.zeros(n, dtype=bool)
    hit[inside] = grid.cells[iy[inside], ix[inside]]
    hit[~inside] = True
    idx = np.argmax(hit)
    if not hit[idx]:
        return None
    return float(ts[idx])


def random_grid(rng, size=16, p=0.2):
    cells = rng.random((size, size)) < p
    cells[0, :] = cells[-1, :] = cells[:, 0] = cells[:, -1] = True
    cells[size // 2, size // 2] = False  # guarantee a free cell
    return OccupancyGrid(cells)


def test_load_map_center_cell():
    grid = load_map("###\n#.#\n###")
    assert grid.width == grid.height == 3
    assert grid.free_count == 1
    assert not grid.point_in_obstacle(1.5, 1.5)


def test_load_map_ragged_rejected():
    with pytest.raises(MalformedMap):
        load_map("###\n####\n###")


def test_load_map_all_blocked_rejected():
    with pytest.raises(MalformedMap):
        load_map("###\n###\n###")


def test_load_map_border_forced_closed():
    grid = load_map("...\n...\n...")
    assert grid.free_count == 1  # only the center survives border closing


def test_bundled_map0_dimensions_and_free_fraction():
    nav_map = bundled_map("Map0")
    grid = nav_map.grid
    assert (grid.width, grid.height) == (32, 32)
    # frozen from the shipped asset; >= 60% of 1024 cells free
    assert grid.free_count == 868
    assert grid.free_count >= 0.6 * grid.width * grid.height
    assert len(nav_map.goals) == 3


def test_parse_map_file_requires_manifest():
    with pytest.raises(MalformedMap):
        parse_map_file("name: X\nmap:\n###\n#.#\n###")  # missing goals


def test_raycast_known_distance():
    # obstacle column occupying x in [4, 5); free lane at y in [2, 3)
    rows = ["######", "#...##", "#...##", "#...##", "######"]
    grid = load_map("\n".join(rows))
    d = raycast(grid, (2.5, 2.5), 0.0, 10.0)
    assert d == pytest.approx(1.5, abs=1e-12)
    oracle = march_oracle(grid, (2.5, 2.5), 0.0, 10.0)
    assert abs(d - oracle) <= 1.0e-3


def test_raycast_no_hit_within_range():
    grid = load_map("\n".join(["#" * 40] + ["#" + "." * 38 + "#"] * 38
                              + ["#" * 40]))
    assert raycast(grid, (19.5, 19.5), 0.0, 10.0) is None


def test_raycast_adjacent_wall():
    grid = load_map("###\n#.#\n###")
    d = raycast(grid, (1.9, 1.5), 0.0, 5.0)
    assert d is not None and d < grid.cell_size


def test_raycast_from_obstacle_rejected():
    grid = load_map("###\n#.#\n###")
    with pytest.raises(InvalidOrigin):
        raycast(grid, (0.5, 0.5), 0.0, 5.0)


def test_raycast_matches_marching_oracle_randomized():
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(20):
        grid = random_grid(rng)
        free = grid.free_cell_centers()
        for _ in range(20):
            origin = free[rng.integers(len(free))] \
                + rng.uniform(-0.45, 0.45, 2)
            if grid.point_in_obstacle(*origin):
                continue
            angle = rng.uniform(0, 2 * math.pi)
            d = raycast(grid, origin, angle, 10.0)
            o = march_oracle(grid, origin, angle, 10.0)
            if d is None or o is None:
                # only legitimate near the max-range boundary
                surviving = d if d is not None else o
                assert surviving is None or surviving > 10.0 - 1.0e-3
            else:
                assert abs(d - o) <= 1.0e-3
            checked += 1
    assert checked > 300


def test_sense_rays_all_zero_in_open_region():
    grid = load_map("\n".join(["#" * 40] + ["#" + "." * 38 + "#"] * 38
                              + ["#" * 40]))
    readouts = sense_rays(grid, (19.5, 19.5), 0.0, 30, 2 * math.pi, 10.0)
    assert readouts.shape == (30,)
    assert np.all(readouts == 0.0)


def test_sense_rays_half_range_reading():
    # single beam pointing at a wall 5 m away, max range 10 -> 0.5
    rows = ["#" * 12, *(["#" + "." * 10 + "#"] * 10), "#" * 12]
    grid = load_map("\n".join(rows))
    # wall at x=11 boundary; stand at x=6: distance 5
    r = sense_rays(grid, (6.0, 6.0), 0.0, 1, 0.0, 10.0)
    assert r[0] == pytest.approx(0.5, abs=1e-12)


def test_sense_rays_bounded_under_random_poses():
    rng = np.random.default_rng(3)
    grid = random_grid(rng, size=20)
    free = grid.free_cell_centers()
    for _ in range(500):
        pos = free[rng.integers(len(free))]
        readouts = sense_rays(grid, pos, rng.uniform(0, 7), 8,
                              2 * math.pi, 6.0)
        assert np.all((readouts >= 0.0) & (readouts <= 1.0))


def brute_nearest(grid, position):
    """Exhaustive point-to-cell distance over every obstacle cell."""
    px, py = position
    best = (math.inf, math.inf)
    c = grid.cell_size
    for iy in range(grid.height):
        for ix in range(grid.width):
            if not grid.cells[iy, ix]:
                continue
            cx = min(max(px, ix * c), (ix + 1) * c)
            cy = min(max(py, iy * c), (iy + 1) * c)
            d = math.hypot(cx - px, cy - py)
            bearing = math.atan2(cy - py, cx - px)
            if d < best[0] - 1e-12 or (abs(d - best[0]) <= 1e-12
                                       and bearing < best[1]):
                best = (d, bearing)
    return best


def test_nearest_obstacle_flat_wall():
    rows = ["#" * 9, *(["#" + "." * 7 + "#"] * 7), "#" * 9]
    grid = load_map("\n".join(rows))
    d, bearing = nearest_obstacle(grid, (4.5, 3.0))  # 2 m above bottom wall
    assert d == pytest.approx(2.0, abs=1e-12)
    assert bearing == pytest.approx(-math.pi / 2, abs=1e-12)


def test_nearest_obstacle_touching_boundary():
    grid = load_map("###\n#.#\n###")
    d, _ = nearest_obstacle(grid, (1.0, 1.5))
    assert d == 0.0


def test_nearest_obstacle_tie_breaks_to_smaller_bearing():
    # cell walled on three sides: bearings 0 (right), pi (left), -pi/2 (down)
    # all tie at 0.5 m; the smallest bearing in (-pi, pi] wins
    rows = ["#####", "#.#.#", "#.#.#", "#####"]
    grid = load_map("\n".join(rows))
    d, bearing = nearest_obstacle(grid, (1.5, 1.5))
    dl = brute_nearest(grid, (1.5, 1.5))
    assert d == pytest.approx(0.5)
    assert bearing == pytest.approx(dl[1])
    assert bearing == pytest.approx(-math.pi / 2)


def test_nearest_obstacle_matches_brute_force():
    rng = np.random.default_rng(11)
    grid = random_grid(rng, size=12)
    free = grid.free_cell_centers()
    for _ in range(50):
        pos = free[rng.integers(len(free))] + rng.uniform(-0.3, 0.3, 2)
        if grid.point_in_obstacle(*pos):
            continue
        d, bearing = nearest_obstacle(grid, pos)
        bd, bb = brute_nearest(grid, pos)
        assert d == pytest.approx(bd, abs=1e-9)
        assert bearing == pytest.approx(bb, abs=1e-9)


def test_integrate_motion_free_space():
    grid = load_map("\n".join(["#" * 10] + ["#" + "." * 8 + "#"] * 8
                              + ["#" * 10]))
    new, collided = integrate_motion(grid, (5.0, 5.0), 0.3,
                                     np.array([1.0, 0.0]), 0.1)
    assert np.allclose(new, [5.1, 5.0]) and not collided


def test_integrate_motion_blocked_axis_cancelled():
    grid = load_map("\n".join(["#" * 10] + ["#" + "." * 8 + "#"] * 8
                              + ["#" * 10]))
    # touching the left wall (x = 1.3 with radius 0.3), pushing further left
    new, collided = integrate_motion(grid, (1.3, 5.0), 0.3,
                                     np.array([-1.0, 0.0]), 0.1)
    assert new[0] == 1.3 and collided


def test_integrate_motion_corner_graze_keeps_tangential():
    # block in the middle; slide along its left face while moving up
    rows = ["#" * 10, *(["#" + "." * 8 + "#"] * 3),
            "#...##...#", "#...##...#", *(["#" + "." * 8 + "#"] * 3),
            "#" * 10]
    grid = load_map("\n".join(rows))
    # disc touching the block's left face (x=4), pushing diagonally into it
    start = np.array([3.7 - 1e-9, 4.5])
    new, collided = integrate_motion(grid, start, 0.3,
                                     np.array([1.0, 1.0]), 0.1)
    assert collided
    assert new[0] == start[0]           # normal (x) component cancelled
    assert new[1] > start[1]            # tangential (y) component preserved
    assert grid.disc_free(new[0], new[1], 0.3)


def sample_disc_overlap(grid, center, radius, n=4000):
    """Dense boundary+interior sampling oracle for disc-obstacle overlap."""
    rng = np.random.default_rng(0)
    angles = rng.uniform(0, 2 * math.pi, n)
    radii = radius * np.sqrt(rng.uniform(0, 1, n))
    radii[: n // 4] = radius * (1 - 1e-9)  # emphasize the boundary
    xs = center[0] + radii * np.cos(angles)
    ys = center[1] + radii * np.sin(angles)
    return any(grid.point_in_obstacle(x, y) for x, y in zip(xs, ys))


def test_disc_free_matches_sampling_oracle():
    rng = np.random.default_rng(2)
    grid = random_grid(rng, size=10)
    free = grid.free_cell_centers()
    for _ in range(100):
        pos = free[rng.integers(len(free))] + rng.uniform(-0.5, 0.5, 2)
        ours = grid.disc_free(pos[0], pos[1], 0.3)
        oracle_overlap = sample_disc_overlap(grid, pos, 0.3)
        if ours:
            assert not oracle_overlap
        # (sampling can miss thin overlaps, so only the free claim is checked)


@given(st.floats(-1, 1), st.floats(-1, 1))
def test_motion_never_enters_obstacle(vx, vy):
    grid = load_map("#####\n#...#\n#.#.#\n#...#\n#####")
    pos = np.array([1.5, 1.5])
    for _ in range(20):
        pos, _ = integrate_motion(grid, pos, 0.3, np.array([vx, vy]), 0.1)
        assert grid.disc_free(pos[0], pos[1], 0.3)
