import json

from app.services.storage_service import StorageService

HEADER = {"subcommand": "density", "q": 0.5}


def test_json_carries_config(storage, export_dir):
    path = storage.store_json({"value": 1.5}, "result.json", HEADER)
    assert path == str(export_dir / "result.json")
    document = json.loads((export_dir / "result.json").read_text())
    assert document == {"config": HEADER, "value": 1.5}


def test_csv_round_trip(storage):
    rows = [{"tau": 0.0, "chi": 0.0, "rho": 1 / 3}, {"tau": 0.5, "chi": 0.0, "rho": 0.3}]
    path = storage.store_csv(rows, "density.csv", HEADER)
    with open(path) as f:
        assert f.readline().startswith("# config: ")
    read = storage.read_csv(path)
    assert [r["tau"] for r in read] == ["0.0", "0.5"]
    assert float(read[0]["rho"]) == 1 / 3


def test_csv_without_rows(storage):
    assert storage.store_csv([], "empty.csv", HEADER) is None


def test_jsonl_round_trip(storage):
    records = [{"value": 1.0}, {"value": 0.0, "error": "bad"}]
    path = storage.store_jsonl(records, "kernel.jsonl", HEADER)
    assert storage.read_jsonl(path) == records


def test_svg_comment_after_prolog(storage, export_dir):
    svg = '<?xml version="1.0"?>\n<svg></svg>\n'
    path = storage.store_svg(svg, "figure.svg", HEADER)
    lines = (export_dir / "figure.svg").read_text().splitlines()
    assert path is not None
    assert lines[0] == '<?xml version="1.0"?>'
    assert lines[1].startswith("<!-- config: ")
    assert lines[2] == "<svg></svg>"


def test_nested_paths_are_kept(storage, tmp_path):
    target = tmp_path / "sub" / "dir" / "out.json"
    assert storage.store_json({}, target) == str(target)
    assert target.exists()


def test_default_export_dir(export_dir):
    assert StorageService().export_dir == export_dir


def test_failed_write_returns_none(storage, export_dir):
    # the export directory itself cannot be opened as a file
    assert storage.store_json({"value": 1}, export_dir) is None
