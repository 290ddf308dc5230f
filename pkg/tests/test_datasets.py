import json

import pytest

from crowdlens.classify import classify_density
from crowdlens.datasets import (
    TABLE2_VIDEOS,
    demo_scene,
    scenario_scene,
    scenario_scenes,
    write_dataset,
)
from crowdlens.tracking import parse_tracking_file, serialize_scene


def test_table2_counts_via_parser(tmp_path):
    # parsing the six labeled-video headers yields the documented counts
    counts = []
    for sid, _, _, _ in TABLE2_VIDEOS:
        scene = demo_scene(sid)
        parsed = parse_tracking_file(serialize_scene(scene, "csv"), "csv")
        counts.append(parsed.metadata.pedestrian_count)
    assert counts == [12, 10, 16, 15, 25, 34]


def test_density_labels_match_ground_truth():
    for sid, _, count, label in TABLE2_VIDEOS:
        scene = demo_scene(sid)
        assert scene.metadata.pedestrian_count == count
        assert classify_density(count).value == label
        assert scene.metadata.density_label == label


def test_demo_scene_deterministic():
    assert demo_scene("BR-25") == demo_scene("BR-25")


def test_unknown_ids_rejected():
    with pytest.raises(KeyError):
        demo_scene("XX-99")
    with pytest.raises(KeyError):
        scenario_scene("P99")


def test_scenarios_have_highlights_present():
    for scene, notes in scenario_scenes():
        for note in notes:
            assert scene.has_pedestrian(note.yellow_id)
            assert scene.has_pedestrian(note.red_id)
            assert note.yellow_id != note.red_id


def test_write_dataset_layout(tmp_path):
    paths = write_dataset(tmp_path)
    names = {p.name for p in paths}
    assert {f"{sid}.csv" for sid, *_ in TABLE2_VIDEOS} <= names
    assert {"P01.csv", "P02.csv", "P03.csv", "annotations.json"} <= names
    notes = json.loads((tmp_path / "annotations.json").read_text())
    assert [n["question_key"] for n in notes] == [f"Q{i}" for i in range(1, 8)]
