import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from shapely.geometry import Polygon, box

from metastop.geometry import (
    Obstacle,
    Path,
    Pose,
    RobotShape,
    Workspace,
    config_in_collision,
    l_shaped_robot,
    load_workspace,
    path_length,
    poses_in_collision,
    save_workspace,
    segment_valid,
    se2_distance,
    square_robot,
    workspace_from_dict,
    workspace_to_dict,
    wrap_angle,
)


def empty_workspace(w=100.0, h=100.0):
    return Workspace(w, h, (), Pose(10, 50, 0), Pose(90, 50, 0))


def shapely_pose_polys(shape, pose):
    verts = shape.transformed_vertices(pose.x, pose.y, pose.theta)[0]
    polys = []
    for lo, hi in shape._slices:
        polys.append(Polygon(verts[lo:hi]))
    return polys


def shapely_collides(ws, shape, pose):
    """Independent overlap test via shapely, ignoring workspace bounds."""
    for poly in shapely_pose_polys(shape, pose):
        for o in ws.obstacles:
            rect = box(o.x_min, o.y_min, o.x_max, o.y_max)
            if poly.intersection(rect).area > 0:
                return True
    return False


def shapely_margin(ws, shape, pose):
    """Signed clearance: positive separation, negative proxy for penetration depth."""
    best = math.inf
    for poly in shapely_pose_polys(shape, pose):
        for o in ws.obstacles:
            rect = box(o.x_min, o.y_min, o.x_max, o.y_max)
            inter = poly.intersection(rect).area
            if inter > 0:
                # Penetration depth estimated by how far the polygon must
                # shrink before the overlap disappears.
                depth = 0.0
                for d in (0.0005, 0.001, 0.002, 0.004, 0.008, 0.016):
                    if poly.buffer(-d).intersection(rect).area > 0:
                        depth = d
                best = min(best, -depth)
            else:
                best = min(best, poly.distance(rect))
    return best


class TestWrapAngle:
    def test_half_open_interval(self):
        assert wrap_angle(math.pi) == pytest.approx(-math.pi)
        assert wrap_angle(-math.pi) == pytest.approx(-math.pi)
        assert wrap_angle(0.0) == 0.0

    @given(st.floats(-50, 50))
    def test_range(self, th):
        w = wrap_angle(th)
        assert -math.pi <= w < math.pi
        # Same direction modulo full turns.
        assert math.isclose(math.cos(w), math.cos(th), abs_tol=1e-9)
        assert math.isclose(math.sin(w), math.sin(th), abs_tol=1e-9)


class TestPose:
    def test_theta_wrapped_on_construction(self):
        assert Pose(0, 0, 3 * math.pi).theta == pytest.approx(-math.pi)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Pose(math.nan, 0, 0)


class TestRobotShape:
    def test_rejects_clockwise(self):
        with pytest.raises(ValueError):
            RobotShape([[(0, 0), (0, 1), (1, 1), (1, 0)]])

    def test_rejects_concave(self):
        with pytest.raises(ValueError):
            RobotShape([[(0, 0), (2, 0), (2, 2), (1, 0.5), (0, 2)]])

    def test_bounding_radius(self):
        assert square_robot(2.0).bounding_radius == pytest.approx(math.sqrt(2))


class TestConfigInCollision:
    def test_empty_workspace_interior_pose_free(self):
        ws = empty_workspace()
        robot = square_robot(1.0)
        assert not config_in_collision(ws, robot, Pose(50, 50, 0.3))

    def test_robot_inside_obstacle(self):
        ws = Workspace(100, 100, (Obstacle(40, 40, 60, 60),), Pose(10, 10, 0), Pose(90, 90, 0))
        assert config_in_collision(ws, square_robot(1.0), Pose(50, 50, 0))

    def test_out_of_bounds_is_collision(self):
        ws = empty_workspace()
        assert config_in_collision(ws, square_robot(2.0), Pose(0.5, 50, 0))

    def test_obstacle_inside_large_robot(self):
        ws = Workspace(100, 100, (Obstacle(49, 49, 51, 51),), Pose(10, 10, 0), Pose(90, 90, 0))
        assert config_in_collision(ws, square_robot(20.0), Pose(50, 50, 0.1))

    def test_l_robot_corner_overlap_vs_rasterized_oracle(self):
        # Rotated L-shape with one arm overlapping an obstacle corner by ~1 cm,
        # checked against a 1 mm rasterization of both shapes.
        ws = Workspace(100, 100, (Obstacle(60, 40, 80, 60),), Pose(10, 10, 0), Pose(90, 90, 0))
        robot = l_shaped_robot(arm=12.0, thickness=4.0)
        pose = Pose(52.0, 50.0, math.radians(-45.0))

        verts = robot.transformed_vertices(pose.x, pose.y, pose.theta)[0]
        polys = [Polygon(verts[lo:hi]) for lo, hi in robot._slices]
        assert polys[0].intersection(box(60, 40, 80, 60)).area > 0  # construction sanity

        res = 0.001
        overlap = False
        for poly in polys:
            minx, miny, maxx, maxy = poly.bounds
            xs = np.arange(max(minx, 60.0) + res / 2, min(maxx, 80.0), res)
            ys = np.arange(max(miny, 40.0) + res / 2, min(maxy, 60.0), res)
            if len(xs) == 0 or len(ys) == 0:
                continue
            gx, gy = np.meshgrid(xs, ys)
            from shapely import contains_xy

            if contains_xy(poly, gx, gy).any():
                overlap = True
                break
        assert overlap
        assert config_in_collision(ws, robot, pose)

    def test_agreement_with_independent_oracle(self):
        # Random workspaces and poses; skip cases within 2 mm of touching.
        rng = np.random.default_rng(7)
        robot = l_shaped_robot(arm=10.0, thickness=3.0)
        checked = 0
        for _ in range(40):
            obstacles = tuple(
                Obstacle(x, y, x + w, y + h)
                for x, y, w, h in zip(
                    rng.uniform(0, 80, 3),
                    rng.uniform(0, 80, 3),
                    rng.uniform(5, 20, 3),
                    rng.uniform(5, 20, 3),
                )
            )
            ws = Workspace(100, 100, obstacles, Pose(1, 1, 0), Pose(99, 99, 0))
            xs = rng.uniform(12, 88, 30)
            ys = rng.uniform(12, 88, 30)
            ths = rng.uniform(-math.pi, math.pi, 30)
            got = poses_in_collision(ws, robot, xs, ys, ths)
            for i in range(30):
                pose = Pose(xs[i], ys[i], ths[i])
                if abs(shapely_margin(ws, robot, pose)) < 0.002:
                    continue
                checked += 1
                assert bool(got[i]) == shapely_collides(ws, robot, pose), pose
        assert checked >= 1000


class TestSegmentValid:
    def test_degenerate_segment(self):
        ws = empty_workspace()
        p = Pose(50, 50, 0)
        assert segment_valid(ws, square_robot(1.0), p, p, step=0.5)

    def test_wall_blocks_segment(self):
        ws = Workspace(100, 100, (Obstacle(48, 0, 52, 100),), Pose(10, 50, 0), Pose(90, 50, 0))
        assert not segment_valid(ws, square_robot(1.0), Pose(10, 50, 0), Pose(90, 50, 0), step=0.5)

    def test_rejects_nonpositive_step(self):
        ws = empty_workspace()
        with pytest.raises(ValueError):
            segment_valid(ws, square_robot(1.0), ws.start, ws.goal, step=0.0)

    def test_gap_agrees_with_dense_sweep(self):
        # Passage 1.05x the robot width: coarse stepping must agree with a
        # millimetre-resolution sweep of the same segment.
        width = 4.0
        gap = 1.05 * width
        lo, hi = 50 - gap / 2, 50 + gap / 2
        ws = Workspace(
            100,
            100,
            (Obstacle(48, 0, 52, lo), Obstacle(48, hi, 52, 100)),
            Pose(10, 50, 0),
            Pose(90, 50, 0),
        )
        robot = square_robot(width)
        a, b = Pose(10, 50, 0), Pose(90, 50, 0)
        coarse = segment_valid(ws, robot, a, b, step=0.5)
        dense = segment_valid(ws, robot, a, b, step=0.001)
        assert coarse == dense
        assert coarse  # the gap is passable when aligned

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        ws = Workspace(100, 100, (Obstacle(40, 20, 60, 80),), Pose(5, 5, 0), Pose(95, 95, 0))
        robot = square_robot(3.0)
        for _ in range(50):
            a = Pose(rng.uniform(2, 98), rng.uniform(2, 98), rng.uniform(-3, 3))
            b = Pose(rng.uniform(2, 98), rng.uniform(2, 98), rng.uniform(-3, 3))
            assert segment_valid(ws, robot, a, b) == segment_valid(ws, robot, b, a)


class TestPathLength:
    def test_345_triangle(self):
        p = Path([Pose(0, 0, 0), Pose(3, 4, 0)])
        assert path_length(p, rot_weight=0.0) == pytest.approx(5.0)

    def test_single_waypoint(self):
        assert path_length(Path([Pose(1, 2, 3)])) == 0.0

    def test_rotation_only(self):
        p = Path([Pose(0, 0, 0), Pose(0, 0, math.pi / 2)])
        assert path_length(p, rot_weight=2.0) == pytest.approx(math.pi)

    @given(
        st.lists(
            st.tuples(st.floats(-100, 100), st.floats(-100, 100)),
            min_size=3,
            max_size=3,
        )
    )
    def test_positional_triangle_inequality(self, pts):
        a, b, c = (Pose(x, y, 0) for x, y in pts)
        direct = path_length(Path([a, c]), rot_weight=0.0)
        via = path_length(Path([a, b, c]), rot_weight=0.0)
        assert direct <= via + 1e-9


class TestPathChecked:
    def test_rejects_colliding_segment(self):
        ws = Workspace(100, 100, (Obstacle(48, 0, 52, 100),), Pose(10, 50, 0), Pose(90, 50, 0))
        with pytest.raises(ValueError):
            Path.checked(ws, square_robot(1.0), [Pose(10, 50, 0), Pose(90, 50, 0)])

    def test_accepts_valid_sequence(self):
        ws = empty_workspace()
        p = Path.checked(ws, square_robot(1.0), [Pose(10, 50, 0), Pose(50, 80, 1.0), Pose(90, 50, 0)])
        assert len(p) == 3

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Path([])


class TestSE2Distance:
    def test_weighted_rotation(self):
        a, b = Pose(0, 0, 0), Pose(0, 0, math.pi / 2)
        assert se2_distance(a, b, rot_weight=2.0) == pytest.approx(math.pi)

    @settings(max_examples=50)
    @given(
        st.floats(-40, 40), st.floats(-40, 40), st.floats(-3, 3),
        st.floats(-40, 40), st.floats(-40, 40), st.floats(-3, 3),
    )
    def test_symmetric(self, x1, y1, t1, x2, y2, t2):
        a, b = Pose(x1, y1, t1), Pose(x2, y2, t2)
        assert se2_distance(a, b) == pytest.approx(se2_distance(b, a))


class TestWorkspaceDocument:
    def test_round_trip(self, tmp_path):
        ws = Workspace(
            120,
            80,
            (Obstacle(10, 10, 20, 30), Obstacle(50, 0, 60, 70)),
            Pose(5, 40, 0.25),
            Pose(110, 40, -1.5),
        )
        robot = l_shaped_robot()
        f = tmp_path / "ws.json"
        save_workspace(f, ws, robot)
        ws2, robot2 = load_workspace(f)
        assert ws2 == ws
        assert all(np.array_equal(a, b) for a, b in zip(robot.polygons, robot2.polygons))

    def test_dict_schema(self):
        ws = empty_workspace()
        doc = workspace_to_dict(ws, square_robot(2.0))
        assert set(doc) == {"width", "height", "obstacles", "start", "goal", "robot"}
        ws2, _ = workspace_from_dict(doc)
        assert ws2 == ws
