"""Seeded workspace distributions and occupancy-grid rasterization.

Three distribution kinds are provided. ``two_passage`` builds a vertical
wall with a narrow gap near the robot's direct route and a wide opening at
the top, so planners first detour and later discover the short route.
``random_walls`` scatters gap-pierced walls; ``random_blocks`` scatters
rectangular blocks. Start and goal poses are fixed per distribution; only
the obstacle layout varies with the seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path as FilePath

import numpy as np

from .errors import GenerationFailed, ResolutionTooCoarse
from .geometry import Obstacle, Pose, RobotShape, Workspace, poses_in_collision

KINDS = ("two_passage", "random_walls", "random_blocks")

DEFAULT_GRID_RESOLUTION = 64

_DEFAULT_PARAMS = {
    "two_passage": {
        "wall_thickness": 10.0,
        "passage_width_min": 30.0,
        "passage_width_max": 55.0,
        "wide_passage_width": 110.0,
        "wall_x_fraction_min": 0.42,
        "wall_x_fraction_max": 0.58,
        "gap_center_jitter": 40.0,
    },
    "random_walls": {
        "wall_thickness": 10.0,
        "passage_width_min": 35.0,
        "passage_width_max": 80.0,
        "n_walls_min": 1,
        "n_walls_max": 3,
    },
    "random_blocks": {
        "n_blocks_min": 5,
        "n_blocks_max": 10,
        "block_size_min": 25.0,
        "block_size_max": 90.0,
    },
}

MAX_ATTEMPTS = 100


@dataclass(frozen=True)
class DistributionSpec:
    """Parameters of a workspace distribution with fixed start/goal and robot."""

    kind: str
    width: float
    height: float
    start: Pose
    goal: Pose
    robot: RobotShape
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        merged = dict(_DEFAULT_PARAMS[self.kind])
        merged.update(self.params)
        object.__setattr__(self, "params", merged)
        p = self.params
        if "passage_width_min" in p:
            if p["passage_width_min"] > p["passage_width_max"]:
                raise ValueError("empty passage-width range")
            min_required = 0.9 * 2.0 * self.robot.bounding_radius
            if p["passage_width_min"] < min_required:
                raise ValueError(
                    f"narrowest passage {p['passage_width_min']} is below 0.9x the "
                    f"robot bounding-circle diameter ({min_required:.2f})"
                )
        for lo_key, hi_key in (("n_walls_min", "n_walls_max"), ("n_blocks_min", "n_blocks_max")):
            if lo_key in p and p[lo_key] > p[hi_key]:
                raise ValueError(f"empty range {lo_key}..{hi_key}")

    def world_diagonal(self) -> float:
        return math.hypot(self.width, self.height)


def two_passage_spec(
    width: float = 300.0,
    height: float = 300.0,
    robot: RobotShape | None = None,
    **params,
) -> DistributionSpec:
    """Two-passage distribution: wall with a narrow mid gap and a wide top opening."""
    from .geometry import l_shaped_robot

    robot = robot or l_shaped_robot()
    start = Pose(0.12 * width, 0.45 * height, 0.0)
    goal = Pose(0.88 * width, 0.45 * height, 0.0)
    return DistributionSpec("two_passage", width, height, start, goal, robot, params)


def random_walls_spec(
    width: float = 300.0,
    height: float = 300.0,
    robot: RobotShape | None = None,
    **params,
) -> DistributionSpec:
    from .geometry import l_shaped_robot

    robot = robot or l_shaped_robot()
    start = Pose(0.1 * width, 0.5 * height, 0.0)
    goal = Pose(0.9 * width, 0.5 * height, 0.0)
    return DistributionSpec("random_walls", width, height, start, goal, robot, params)


def random_blocks_spec(
    width: float = 300.0,
    height: float = 300.0,
    robot: RobotShape | None = None,
    **params,
) -> DistributionSpec:
    from .geometry import l_shaped_robot

    robot = robot or l_shaped_robot()
    start = Pose(0.1 * width, 0.1 * height, 0.0)
    goal = Pose(0.9 * width, 0.9 * height, 0.0)
    return DistributionSpec("random_blocks", width, height, start, goal, robot, params)


def _two_passage_obstacles(spec: DistributionSpec, rng: np.random.Generator):
    p = spec.params
    w, h = spec.width, spec.height
    thickness = p["wall_thickness"]
    wall_x = rng.uniform(p["wall_x_fraction_min"], p["wall_x_fraction_max"]) * w
    gap = rng.uniform(p["passage_width_min"], p["passage_width_max"])
    wide = p["wide_passage_width"]
    center = spec.start.y + rng.uniform(-p["gap_center_jitter"], p["gap_center_jitter"])
    # Keep the whole narrow gap strictly between the floor and the wide opening.
    center = float(np.clip(center, 1.0 + gap / 2.0, (h - wide - 1.0) - gap / 2.0))
    lo, hi = center - gap / 2.0, center + gap / 2.0
    return [
        Obstacle(wall_x, 0.0, wall_x + thickness, lo),
        Obstacle(wall_x, hi, wall_x + thickness, h - wide),
    ]


def _random_walls_obstacles(spec: DistributionSpec, rng: np.random.Generator):
    p = spec.params
    w, h = spec.width, spec.height
    n = int(rng.integers(p["n_walls_min"], p["n_walls_max"] + 1))
    obstacles = []
    for _ in range(n):
        thickness = p["wall_thickness"]
        gap = rng.uniform(p["passage_width_min"], p["passage_width_max"])
        if rng.random() < 0.5:  # vertical wall
            x = rng.uniform(0.2 * w, 0.8 * w - thickness)
            c = rng.uniform(0.15 * h, 0.85 * h)
            lo, hi = c - gap / 2.0, c + gap / 2.0
            if lo > 1.0:
                obstacles.append(Obstacle(x, 0.0, x + thickness, lo))
            if hi < h - 1.0:
                obstacles.append(Obstacle(x, hi, x + thickness, h))
        else:
            y = rng.uniform(0.2 * h, 0.8 * h - thickness)
            c = rng.uniform(0.15 * w, 0.85 * w)
            lo, hi = c - gap / 2.0, c + gap / 2.0
            if lo > 1.0:
                obstacles.append(Obstacle(0.0, y, lo, y + thickness))
            if hi < w - 1.0:
                obstacles.append(Obstacle(hi, y, w, y + thickness))
    return obstacles


def _random_blocks_obstacles(spec: DistributionSpec, rng: np.random.Generator):
    p = spec.params
    w, h = spec.width, spec.height
    n = int(rng.integers(p["n_blocks_min"], p["n_blocks_max"] + 1))
    obstacles = []
    for _ in range(n):
        bw = rng.uniform(p["block_size_min"], p["block_size_max"])
        bh = rng.uniform(p["block_size_min"], p["block_size_max"])
        cx = rng.uniform(0.0, w)
        cy = rng.uniform(0.0, h)
        x0, x1 = max(0.0, cx - bw / 2), min(w, cx + bw / 2)
        y0, y1 = max(0.0, cy - bh / 2), min(h, cy + bh / 2)
        if x1 - x0 > 1.0 and y1 - y0 > 1.0:
            obstacles.append(Obstacle(x0, y0, x1, y1))
    return obstacles


_GENERATORS = {
    "two_passage": _two_passage_obstacles,
    "random_walls": _random_walls_obstacles,
    "random_blocks": _random_blocks_obstacles,
}


def sample_workspace(spec: DistributionSpec, seed: int) -> Workspace:
    """Draw one workspace; deterministic in (spec, seed).

    Obstacle layouts that leave the start or goal pose in collision are
    rejected and redrawn, up to ``MAX_ATTEMPTS`` times.
    """
    rng = np.random.default_rng(seed)
    for _ in range(MAX_ATTEMPTS):
        obstacles = _GENERATORS[spec.kind](spec, rng)
        ws = Workspace(spec.width, spec.height, tuple(obstacles), spec.start, spec.goal)
        endpoints = poses_in_collision(
            ws,
            spec.robot,
            [spec.start.x, spec.goal.x],
            [spec.start.y, spec.goal.y],
            [spec.start.theta, spec.goal.theta],
        )
        if not endpoints.any():
            return ws
    raise GenerationFailed(
        f"no collision-free start/goal layout for {spec.kind} after {MAX_ATTEMPTS} attempts"
    )


def straight_line_length(ws: Workspace) -> float:
    """Euclidean start-goal distance, ignoring obstacles and rotation."""
    return math.hypot(ws.goal.x - ws.start.x, ws.goal.y - ws.start.y)


@dataclass(frozen=True)
class OccupancyGrid:
    """Square binary occupancy raster with start/goal cell bookkeeping.

    ``cells[row, col]`` covers the region with row 0 at the bottom of the
    workspace; 1 marks an obstacle.
    """

    resolution: int
    cells: np.ndarray
    start_cell: tuple[int, int]
    goal_cell: tuple[int, int]

    def __post_init__(self):
        if self.cells.shape != (self.resolution, self.resolution):
            raise ValueError("cells must be a resolution x resolution array")

    def occupied_fraction(self) -> float:
        return float(self.cells.mean())


def _pose_cell(ws: Workspace, pose: Pose, resolution: int) -> tuple[int, int]:
    col = min(resolution - 1, int(pose.x / ws.width * resolution))
    row = min(resolution - 1, int(pose.y / ws.height * resolution))
    return (row, col)


def rasterize(ws: Workspace, resolution: int = DEFAULT_GRID_RESOLUTION) -> OccupancyGrid:
    """Binary occupancy grid; a cell is occupied iff its centre is inside an obstacle."""
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    start_cell = _pose_cell(ws, ws.start, resolution)
    goal_cell = _pose_cell(ws, ws.goal, resolution)
    if start_cell == goal_cell:
        raise ResolutionTooCoarse(
            f"start and goal share cell {start_cell} at resolution {resolution}"
        )
    xs = (np.arange(resolution) + 0.5) * ws.width / resolution
    ys = (np.arange(resolution) + 0.5) * ws.height / resolution
    cx, cy = np.meshgrid(xs, ys)  # cy rows follow y
    cells = np.zeros((resolution, resolution), dtype=np.uint8)
    for o in ws.obstacles:
        inside = (cx >= o.x_min) & (cx <= o.x_max) & (cy >= o.y_min) & (cy <= o.y_max)
        cells[inside] = 1
    cells[start_cell] = 0
    cells[goal_cell] = 0
    return OccupancyGrid(resolution, cells, start_cell, goal_cell)


# -- grid files: plain PGM (P2, maxval 1) plus a JSON sidecar -----------------


def save_grid(path: str | FilePath, grid: OccupancyGrid) -> None:
    """Write `<path>` as P2 PGM (top row first) and `<path>.json` metadata."""
    path = FilePath(path)
    r = grid.resolution
    lines = ["P2", f"{r} {r}", "1"]
    for row in range(r - 1, -1, -1):
        lines.append(" ".join(str(int(v)) for v in grid.cells[row]))
    path.write_text("\n".join(lines) + "\n")
    meta = {
        "resolution": r,
        "start_cell": list(grid.start_cell),
        "goal_cell": list(grid.goal_cell),
    }
    path.with_suffix(path.suffix + ".json").write_text(json.dumps(meta, sort_keys=True))


def load_grid(path: str | FilePath) -> OccupancyGrid:
    path = FilePath(path)
    tokens = path.read_text().split()
    if tokens[0] != "P2":
        raise ValueError(f"{path} is not a plain PGM file")
    w, h, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if w != h or maxval != 1:
        raise ValueError("expected a square binary PGM")
    values = np.array(tokens[4:], dtype=np.uint8).reshape(h, w)
    cells = values[::-1]  # stored top row first
    meta = json.loads(path.with_suffix(path.suffix + ".json").read_text())
    return OccupancyGrid(w, cells, tuple(meta["start_cell"]), tuple(meta["goal_cell"]))


# -- distribution document ----------------------------------------------------


def spec_to_dict(spec: DistributionSpec) -> dict:
    return {
        "distribution": {
            "kind": spec.kind,
            "width": spec.width,
            "height": spec.height,
            "start": list(spec.start.as_tuple()),
            "goal": list(spec.goal.as_tuple()),
            "robot": [[[float(x), float(y)] for x, y in poly] for poly in spec.robot.polygons],
            "params": dict(spec.params),
        }
    }


def spec_from_dict(doc: dict) -> DistributionSpec:
    d = doc["distribution"]
    robot = RobotShape([[(float(x), float(y)) for x, y in poly] for poly in d["robot"]])
    return DistributionSpec(
        kind=d["kind"],
        width=float(d["width"]),
        height=float(d["height"]),
        start=Pose(*map(float, d["start"])),
        goal=Pose(*map(float, d["goal"])),
        robot=robot,
        params=dict(d["params"]),
    )


def save_spec(path: str | FilePath, spec: DistributionSpec) -> None:
    FilePath(path).write_text(json.dumps(spec_to_dict(spec), sort_keys=True))


def load_spec(path: str | FilePath) -> DistributionSpec:
    return spec_from_dict(json.loads(FilePath(path).read_text()))
