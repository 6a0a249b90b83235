import json
import math
import os
import subprocess

import pytest

import ovad


def toy_annotations():
    images, instances = [], []
    for i in range(1, 5):
        images.append({"id": i, "width": 100, "height": 100})
        for k in range(2):
            att = [1 if (i + k + a) % 3 == 0 else 0 for a in range(4)]
            att[3] = -1 if k else att[3]
            instances.append(
                {"image_id": i, "bbox": [10 * k, 5, 30, 40], "category_id": 1 + k, "att_vec": att}
            )
    return {"images": images, "instances": instances}


def test_iou_and_ap():
    assert ovad.iou([0, 0, 10, 10], [5, 5, 10, 10]) == pytest.approx(25 / 175, abs=1e-12)
    assert ovad.average_precision([0.9, 0.8, 0.7], [True, False, True]) == pytest.approx(5 / 6)
    assert ovad.average_precision([0.5], [False]) is None
    assert ovad.average_precision([0.9], [True], ghost_positives=1) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        ovad.average_precision([0.1, 0.2], [True])


def test_splits_and_scores():
    s = ovad.frequency_splits([9, 10, 11])
    assert (s["head"], s["medium"], s["tail"]) == ([2], [1], [0])
    assert ovad.sigmoid(0.0) == 0.5
    assert ovad.match_score([1, 0], [1, 0], tau=50) == pytest.approx(1 / (1 + math.exp(-50)))


def test_parts():
    p = ovad.extract_parts("a_DET red_ADJ helmet_NOUN on_ADP a_DET wooden_ADJ table_NOUN")
    assert p["noun_phrases"] == ["red helmet", "wooden table"]
    assert p["noun_complements"] == ["red", "wooden"]


def test_box_eval_matches_cli(tmp_path):
    ann = toy_annotations()
    (tmp_path / "ann.json").write_text(json.dumps(ann))
    per_image = {}
    scores = []
    for inst in ann["instances"]:
        idx = per_image.setdefault(inst["image_id"], 0)
        per_image[inst["image_id"]] += 1
        scores.append(
            {
                "image_id": inst["image_id"],
                "instance_index": idx,
                "attribute_scores": [0.25 + 0.5 * (v == 1) + 0.01 * idx for v in inst["att_vec"]],
            }
        )
    (tmp_path / "oracle.json").write_text(json.dumps(scores))

    report = ovad.evaluate(tmp_path / "ann.json", tmp_path / "oracle.json", mode="box")
    assert report["mode"] == "box-oracle"
    assert report["map"]["all"] == pytest.approx(1.0)
    assert ovad.stats(tmp_path / "ann.json")["instances"] == 8

    cli = os.environ.get("OVAD_CLI")
    if cli:
        out = tmp_path / "cli.json"
        subprocess.run(
            [cli, "eval-box", "--ann", str(tmp_path / "ann.json"), "--pred",
             str(tmp_path / "oracle.json"), "--json", str(out)],
            check=True, capture_output=True,
        )
        assert json.loads(out.read_text()) == report


def test_bad_file_raises(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ValueError):
        ovad.stats(bad)
    with pytest.raises(ValueError):
        ovad.evaluate(tmp_path / "missing.json", bad)
