import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crowdlens.errors import (
    EmptyScene,
    MalformedHeader,
    NonFinitePosition,
    NonMonotonicFrames,
    PointAtInfinity,
    SingularTransform,
    TooFewSamples,
    TrackLost,
)
from crowdlens.tracking import (
    CoordinateTransform,
    Trajectory,
    apply_transform,
    ensure_world_coordinates,
    fill_gaps,
    parse_tracking_file,
    serialize_scene,
    with_filled_gaps,
)

from conftest import make_scene, make_trajectory

MINIMAL_CSV = b"""# fps=24
frame,id,x,y
0,1,0,0
1,1,1,0
"""


class TestParseCsv:
    def test_minimal_scene(self):
        scene = parse_tracking_file(MINIMAL_CSV, "csv")
        assert len(scene.trajectories) == 1
        assert len(scene.trajectories[0]) == 2
        assert scene.frame_range == (0, 1)
        assert scene.metadata.fps == 24
        assert scene.metadata.pedestrian_count == 1

    def test_pedestrian_count_matches_ae01(self):
        # 12 pedestrians, the count of the AE-01 video
        lines = ["# scene_id=AE-01", "# fps=24", "frame,id,x,y"]
        for ped in range(1, 13):
            lines.append(f"0,{ped},{ped}.0,0.0")
            lines.append(f"1,{ped},{ped}.0,0.5")
        scene = parse_tracking_file("\n".join(lines).encode(), "csv")
        assert scene.metadata.pedestrian_count == 12

    def test_duplicate_frame_rejected(self):
        data = b"frame,id,x,y\n4,3,0,0\n5,3,1,0\n5,3,2,0\n"
        with pytest.raises(NonMonotonicFrames) as exc:
            parse_tracking_file(data, "csv")
        assert exc.value.ped_id == 3

    def test_rows_sorted_and_grouped(self):
        data = b"frame,id,x,y\n1,2,9,9\n0,1,0,0\n0,2,8,8\n1,1,1,0\n"
        scene = parse_tracking_file(data, "csv")
        assert [t.pedestrian_id for t in scene.trajectories] == [1, 2]
        assert list(scene.trajectory(2).frames) == [0, 1]

    def test_non_finite_position(self):
        data = b"frame,id,x,y\n0,1,nan,0\n"
        with pytest.raises(NonFinitePosition):
            parse_tracking_file(data, "csv")

    def test_empty_scene(self):
        with pytest.raises(EmptyScene):
            parse_tracking_file(b"# fps=24\nframe,id,x,y\n", "csv")

    def test_malformed_header(self):
        with pytest.raises(MalformedHeader):
            parse_tracking_file(b"# bogus_key=1\nframe,id,x,y\n0,1,0,0\n", "csv")
        with pytest.raises(MalformedHeader):
            parse_tracking_file(b"# fps=twenty\nframe,id,x,y\n0,1,0,0\n", "csv")
        with pytest.raises(MalformedHeader):
            parse_tracking_file(b"x,y,t\n0,1,2\n", "csv")

    def test_header_metadata(self):
        data = (b"# scene_id=BR-25\n# country=Brazil\n# fps=30\n"
                b"# density_label=Medium\nframe,id,x,y\n0,7,1,2\n1,7,1,3\n")
        scene = parse_tracking_file(data, "csv")
        assert scene.metadata.scene_id == "BR-25"
        assert scene.metadata.country == "Brazil"
        assert scene.metadata.fps == 30
        assert scene.metadata.density_label == "Medium"


class TestParseJson:
    def test_json_mirror(self):
        doc = (b'{"scene_id":"S","fps":24,"coords":"world",'
               b'"rows":[[0,1,0.0,0.0],[1,1,1.0,0.0]]}')
        scene = parse_tracking_file(doc, "json")
        assert scene.metadata.scene_id == "S"
        assert scene.frame_range == (0, 1)

    def test_bad_json(self):
        with pytest.raises(MalformedHeader):
            parse_tracking_file(b"{not json", "json")
        with pytest.raises(MalformedHeader):
            parse_tracking_file(b'{"rows": "nope"}', "json")


class TestRoundTrip:
    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_serialize_parse_identity(self, fmt):
        scene = make_scene(
            {1: [(0.0, 0.5), (1.25, -0.75)], 7: [(3.0, 4.0), (3.1, 4.2)]},
            scene_id="rt", fps=30, density_label="Low", country="Brazil",
        )
        again = parse_tracking_file(serialize_scene(scene, fmt), fmt)
        assert again == scene

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_round_trip_with_homography(self, fmt):
        scene = parse_tracking_file(
            b"# coords=image\n# homography=0.05,0,0,0,0.05,0,0,0,1\n"
            b"frame,id,x,y\n0,1,100,40\n1,1,120,40\n", "csv")
        assert scene.coords == "image"
        again = parse_tracking_file(serialize_scene(scene, fmt), fmt)
        assert again == scene

    @given(st.lists(
        st.tuples(st.floats(-1e4, 1e4), st.floats(-1e4, 1e4)),
        min_size=2, max_size=8,
    ))
    @settings(max_examples=50, deadline=None)
    def test_round_trip_random_positions(self, points):
        scene = make_scene({1: points})
        for fmt in ("csv", "json"):
            assert parse_tracking_file(serialize_scene(scene, fmt), fmt) == scene


class TestTransform:
    def test_identity_keeps_positions(self, two_ped_scene):
        out = apply_transform(two_ped_scene, CoordinateTransform.identity())
        for a, b in zip(out.trajectories, two_ped_scene.trajectories):
            np.testing.assert_array_equal(a.positions, b.positions)

    def test_pixel_scale(self):
        # diag(0.05, 0.05, 1) maps pixel (100, 40) to world (5, 2)
        scene = make_scene({1: [(100.0, 40.0), (120.0, 40.0)]})
        t = CoordinateTransform([[0.05, 0, 0], [0, 0.05, 0], [0, 0, 1]])
        out = apply_transform(scene, t)
        np.testing.assert_allclose(out.trajectories[0].positions[0], [5.0, 2.0])
        assert out.metadata == scene.metadata
        assert out.coords == "world"

    def test_singular_matrix_rejected(self):
        with pytest.raises(SingularTransform):
            CoordinateTransform(np.zeros((3, 3)))

    def test_point_at_infinity(self):
        t = CoordinateTransform([[1, 0, 0], [0, 1, 0], [1, 0, 1]])
        scene = make_scene({1: [(-1.0, 1.0), (0.0, 2.0)]})  # w = x + 1 = 0
        with pytest.raises(PointAtInfinity):
            apply_transform(scene, t)

    @given(st.lists(st.tuples(st.floats(-100, 100), st.floats(-100, 100)),
                    min_size=2, max_size=6))
    @settings(max_examples=50, deadline=None)
    def test_inverse_round_trip(self, points):
        scene = make_scene({1: points})
        t = CoordinateTransform([[0.03, 0.001, 2.0], [-0.002, 0.04, -1.0], [0, 0, 1]])
        back = apply_transform(apply_transform(scene, t), t.inverse())
        np.testing.assert_allclose(
            back.trajectories[0].positions, scene.trajectories[0].positions,
            atol=1e-9,
        )

    def test_ensure_world_requires_homography(self):
        scene = parse_tracking_file(b"# coords=image\nframe,id,x,y\n0,1,0,0\n1,1,1,1\n", "csv")
        with pytest.raises(MalformedHeader):
            ensure_world_coordinates(scene)


class TestFillGaps:
    def test_midpoint_inserted(self):
        traj = Trajectory(1, [0, 2], [(0.0, 0.0), (2.0, 0.0)])
        out = fill_gaps(traj)
        assert list(out.frames) == [0, 1, 2]
        np.testing.assert_allclose(out.positions[1], [1.0, 0.0])

    def test_contiguous_is_identity(self):
        traj = make_trajectory(1, [(0, 0), (1, 0), (2, 0)])
        assert fill_gaps(traj) == traj

    def test_linear_interpolation(self):
        # frames {0, 4}, (0,0) -> (4,8): frame 3 sits at (3, 6)
        traj = Trajectory(1, [0, 4], [(0.0, 0.0), (4.0, 8.0)])
        out = fill_gaps(traj)
        np.testing.assert_allclose(out.positions[3], [3.0, 6.0])

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamples):
            fill_gaps(Trajectory(1, [0], [(0.0, 0.0)]))

    def test_track_lost_on_long_gap(self):
        traj = Trajectory(5, [0, 60], [(0.0, 0.0), (6.0, 0.0)])
        with pytest.raises(TrackLost):
            fill_gaps(traj, max_gap=48)
        fill_gaps(traj, max_gap=59)  # 59 missing frames allowed

    @given(st.lists(st.integers(0, 200), min_size=2, max_size=12, unique=True))
    @settings(max_examples=60, deadline=None)
    def test_idempotent(self, frames):
        frames = sorted(frames)
        pts = [(float(f), float(f) * 0.5) for f in frames]
        once = fill_gaps(Trajectory(1, frames, pts))
        assert fill_gaps(once) == once

    def test_scene_gap_limit_uses_fps(self):
        scene = make_scene({1: [(0, 0.0, 0.0), (120, 1.0, 0.0)]})  # 119 missing
        with pytest.raises(TrackLost):
            with_filled_gaps(scene)  # fps=24 -> limit 48
