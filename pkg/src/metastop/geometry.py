"""Rigid-body SE(2) geometry for planar workspaces with rectangular obstacles.

Distances are weighted: Euclidean translation plus ``rot_weight`` metres per
radian of rotation, with angles wrapped to [-pi, pi). Collision checks are
exact separating-axis tests between the robot's convex body polygons and
axis-aligned obstacle rectangles; leaving the workspace bounds also counts
as a collision. All functions here are pure and safe to call concurrently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path as FilePath

import numpy as np

TWO_PI = 2.0 * math.pi

DEFAULT_ROT_WEIGHT = 25.0  # metres per radian
DEFAULT_STEP = 2.0  # metres between interpolated collision checks


def wrap_angle(theta: float) -> float:
    """Wrap an angle into the half-open interval [-pi, pi)."""
    return (theta + math.pi) % TWO_PI - math.pi


@dataclass(frozen=True)
class Pose:
    """A robot configuration: planar position in metres, heading in radians."""

    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.theta)):
            raise ValueError(f"pose components must be finite, got {(self.x, self.y, self.theta)}")
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.theta)


@dataclass(frozen=True)
class Obstacle:
    """Axis-aligned rectangular obstacle."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(f"degenerate obstacle rectangle {self}")

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


def _polygon_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _check_convex_ccw(vertices: np.ndarray) -> None:
    n = len(vertices)
    if n < 3:
        raise ValueError("polygon needs at least 3 vertices")
    if _polygon_area(vertices) <= 0:
        raise ValueError("polygon vertices must be counterclockwise with positive area")
    for i in range(n):
        a, b, c = vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if cross < -1e-12:
            raise ValueError("polygon is not convex")


class RobotShape:
    """Union of convex polygons in the body frame, vertices counterclockwise.

    Precomputes flattened vertex/edge-normal arrays so that batches of poses
    can be collision-checked with a handful of vectorised operations.
    """

    def __init__(self, polygons: list[list[tuple[float, float]]]):
        if not polygons:
            raise ValueError("robot shape needs at least one polygon")
        self.polygons = [np.asarray(p, dtype=float) for p in polygons]
        for poly in self.polygons:
            _check_convex_ccw(poly)
        self._verts = np.concatenate(self.polygons, axis=0)
        self._slices = []
        offset = 0
        for poly in self.polygons:
            self._slices.append((offset, offset + len(poly)))
            offset += len(poly)
        # Outward edge normals per polygon and the body-frame projection of
        # the polygon onto each of its own normals (rotation invariant).
        normals, proj_min, proj_max = [], [], []
        for poly in self.polygons:
            edges = np.roll(poly, -1, axis=0) - poly
            n = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
            n /= np.linalg.norm(n, axis=1, keepdims=True)
            proj = poly @ n.T  # (verts, axes)
            normals.append(n)
            proj_min.append(proj.min(axis=0))
            proj_max.append(proj.max(axis=0))
        self._normals = normals
        self._proj_min = proj_min
        self._proj_max = proj_max
        self.bounding_radius = float(np.max(np.linalg.norm(self._verts, axis=1)))

    def transformed_vertices(self, x, y, theta):
        """World-frame vertices for a batch of poses, shape (poses, verts, 2)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        c, s = np.cos(theta), np.sin(theta)
        bx, by = self._verts[:, 0], self._verts[:, 1]
        wx = x[:, None] + c[:, None] * bx - s[:, None] * by
        wy = y[:, None] + s[:, None] * bx + c[:, None] * by
        return np.stack([wx, wy], axis=-1)


def square_robot(side: float) -> RobotShape:
    """Axis-aligned square robot centred on its reference point."""
    h = side / 2.0
    return RobotShape([[(-h, -h), (h, -h), (h, h), (-h, h)]])


def l_shaped_robot(arm: float = 12.0, thickness: float = 4.0) -> RobotShape:
    """Rigid L-shaped robot: two perpendicular rectangular arms joined at a corner."""
    a, t = arm, thickness
    return RobotShape(
        [
            [(0.0, 0.0), (a, 0.0), (a, t), (0.0, t)],
            [(0.0, t), (t, t), (t, a), (0.0, a)],
        ]
    )


@dataclass(frozen=True)
class Workspace:
    """Bounded rectangular world with obstacles and fixed start/goal poses.

    Start and goal are expected to be collision-free for the robot the
    workspace is used with; generators and planner initialisation enforce
    this (the workspace itself does not know the robot).
    """

    width: float
    height: float
    obstacles: tuple[Obstacle, ...]
    start: Pose
    goal: Pose

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("workspace must have positive extent")
        object.__setattr__(self, "obstacles", tuple(self.obstacles))

    def obstacle_array(self) -> np.ndarray:
        """Obstacles as an (n, 4) array of [x_min, y_min, x_max, y_max]."""
        if not self.obstacles:
            return np.zeros((0, 4))
        return np.array([[o.x_min, o.y_min, o.x_max, o.y_max] for o in self.obstacles])


def se2_distance(a: Pose, b: Pose, rot_weight: float = DEFAULT_ROT_WEIGHT) -> float:
    """Weighted SE(2) distance: translation plus rot_weight times the shortest arc."""
    dth = wrap_angle(b.theta - a.theta)
    return math.hypot(b.x - a.x, b.y - a.y) + rot_weight * abs(dth)


def poses_in_collision(ws: Workspace, shape: RobotShape, x, y, theta) -> np.ndarray:
    """Vectorised collision test for a batch of poses.

    A pose collides when any body polygon overlaps any obstacle rectangle
    (positive-area overlap; touching boundaries do not collide) or when any
    vertex leaves the workspace bounds.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    m = len(x)
    verts = shape.transformed_vertices(x, y, theta)  # (m, V, 2)
    vx, vy = verts[..., 0], verts[..., 1]

    collided = (
        (vx.min(axis=1) < 0.0)
        | (vx.max(axis=1) > ws.width)
        | (vy.min(axis=1) < 0.0)
        | (vy.max(axis=1) > ws.height)
    )

    rects = ws.obstacle_array()
    if len(rects) == 0 or bool(collided.all()):
        return collided

    c, s = np.cos(theta), np.sin(theta)
    for pi, (lo, hi) in enumerate(shape._slices):
        pvx, pvy = vx[:, lo:hi], vy[:, lo:hi]
        pxmin, pxmax = pvx.min(axis=1), pvx.max(axis=1)
        pymin, pymax = pvy.min(axis=1), pvy.max(axis=1)
        base_n = shape._normals[pi]
        base_lo = shape._proj_min[pi]
        base_hi = shape._proj_max[pi]
        for rx0, ry0, rx1, ry1 in rects:
            # Bounding-box overlap doubles as the SAT test on the x/y axes.
            cand = (
                ~collided
                & (pxmax > rx0)
                & (pxmin < rx1)
                & (pymax > ry0)
                & (pymin < ry1)
            )
            idx = np.nonzero(cand)[0]
            if len(idx) == 0:
                continue
            ci, si = c[idx], s[idx]
            # World-frame edge normals of the rotated polygon.
            nx = ci[:, None] * base_n[:, 0] - si[:, None] * base_n[:, 1]
            ny = si[:, None] * base_n[:, 0] + ci[:, None] * base_n[:, 1]
            shift = nx * x[idx, None] + ny * y[idx, None]
            poly_lo = base_lo + shift
            poly_hi = base_hi + shift
            rcx, rcy = (rx0 + rx1) / 2.0, (ry0 + ry1) / 2.0
            rhx, rhy = (rx1 - rx0) / 2.0, (ry1 - ry0) / 2.0
            rect_c = nx * rcx + ny * rcy
            rect_h = np.abs(nx) * rhx + np.abs(ny) * rhy
            separated = (poly_hi <= rect_c - rect_h) | (poly_lo >= rect_c + rect_h)
            collided[idx] |= ~separated.any(axis=1)
            if bool(collided.all()):
                return collided
    return collided


def config_in_collision(ws: Workspace, shape: RobotShape, pose: Pose) -> bool:
    """Exact collision test for a single pose."""
    return bool(poses_in_collision(ws, shape, pose.x, pose.y, pose.theta)[0])


def interpolate(a: Pose, b: Pose, fraction: float) -> Pose:
    """Pose at the given fraction along the straight segment from a to b.

    The heading follows the shortest angular arc.
    """
    dth = wrap_angle(b.theta - a.theta)
    return Pose(
        a.x + fraction * (b.x - a.x),
        a.y + fraction * (b.y - a.y),
        a.theta + fraction * dth,
    )


def segment_valid(
    ws: Workspace,
    shape: RobotShape,
    a: Pose,
    b: Pose,
    step: float = DEFAULT_STEP,
    rot_weight: float = DEFAULT_ROT_WEIGHT,
) -> bool:
    """Check a straight SE(2) segment at pose spacing at most ``step``.

    Both endpoints are always checked. Spacing is measured in the weighted
    SE(2) metric so fast rotations are sampled as densely as translations.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    d = se2_distance(a, b, rot_weight)
    n = max(1, math.ceil(d / step))
    fr = np.linspace(0.0, 1.0, n + 1)
    dth = wrap_angle(b.theta - a.theta)
    xs = a.x + fr * (b.x - a.x)
    ys = a.y + fr * (b.y - a.y)
    ths = a.theta + fr * dth
    return not bool(poses_in_collision(ws, shape, xs, ys, ths).any())


class Path:
    """A sequence of poses whose consecutive segments are collision-free.

    Use :meth:`checked` to build a path with validation; the bare constructor
    is for callers (the planners) whose edges were already validated.
    """

    __slots__ = ("waypoints",)

    def __init__(self, waypoints: list[Pose]):
        if not waypoints:
            raise ValueError("path needs at least one waypoint")
        self.waypoints = tuple(waypoints)

    @classmethod
    def checked(
        cls,
        ws: Workspace,
        shape: RobotShape,
        waypoints: list[Pose],
        step: float = DEFAULT_STEP,
        rot_weight: float = DEFAULT_ROT_WEIGHT,
    ) -> "Path":
        path = cls(waypoints)
        for a, b in zip(path.waypoints, path.waypoints[1:]):
            if not segment_valid(ws, shape, a, b, step, rot_weight):
                raise ValueError(f"segment from {a} to {b} is not collision-free")
        return path

    def __len__(self) -> int:
        return len(self.waypoints)

    def __iter__(self):
        return iter(self.waypoints)


def path_length(p: Path, rot_weight: float = DEFAULT_ROT_WEIGHT) -> float:
    """Total weighted length of a path; zero for a single waypoint."""
    total = 0.0
    for a, b in zip(p.waypoints, p.waypoints[1:]):
        total += se2_distance(a, b, rot_weight)
    return total


# -- workspace document format ------------------------------------------------
#
# A single JSON document with keys `width`, `height`, `obstacles` (array of
# [x_min, y_min, x_max, y_max]), `start` and `goal` ([x, y, theta]), and
# `robot` (array of polygons, each an array of [x, y] vertices). All values
# are decimal metres/radians.


def workspace_to_dict(ws: Workspace, robot: RobotShape) -> dict:
    return {
        "width": ws.width,
        "height": ws.height,
        "obstacles": [[o.x_min, o.y_min, o.x_max, o.y_max] for o in ws.obstacles],
        "start": list(ws.start.as_tuple()),
        "goal": list(ws.goal.as_tuple()),
        "robot": [[[float(vx), float(vy)] for vx, vy in poly] for poly in robot.polygons],
    }


def workspace_from_dict(doc: dict) -> tuple[Workspace, RobotShape]:
    ws = Workspace(
        width=float(doc["width"]),
        height=float(doc["height"]),
        obstacles=tuple(Obstacle(*map(float, rect)) for rect in doc["obstacles"]),
        start=Pose(*map(float, doc["start"])),
        goal=Pose(*map(float, doc["goal"])),
    )
    robot = RobotShape([[(float(vx), float(vy)) for vx, vy in poly] for poly in doc["robot"]])
    return ws, robot


def save_workspace(path: str | FilePath, ws: Workspace, robot: RobotShape) -> None:
    FilePath(path).write_text(json.dumps(workspace_to_dict(ws, robot), sort_keys=True))


def load_workspace(path: str | FilePath) -> tuple[Workspace, RobotShape]:
    return workspace_from_dict(json.loads(FilePath(path).read_text()))
