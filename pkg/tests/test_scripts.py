import csv
import importlib.util
from pathlib import Path

import pytest

SCRIPT = Path(__file__).resolve().parent.parent / "scripts" / "catalog_report.py"


@pytest.fixture(scope="module")
def catalog_report():
    spec = importlib.util.spec_from_file_location("catalog_report", SCRIPT)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def test_summary_of_sphere(catalog_report):
    row = catalog_report.summarize("tetrahedron_boundary", 500)
    assert row["betti"] == "1 0 1"
    assert row["collapsible"] is False
    assert row["hachimori"] == "yes"
    assert row["plgcat"] == "[2, 2]"


def test_lower_dimensional_rows(catalog_report):
    row = catalog_report.summarize("point", 500)
    assert row["hachimori"] == "yes"
    assert row["plgcat"] == "[1, 1]"
    row = catalog_report.summarize("cycle_graph", 500)
    assert row["hachimori"] == "no"
    assert row["plgcat"] == "[2, 2]"


def test_csv_file(catalog_report, tmp_path):
    rows = [catalog_report.summarize(name, 500) for name in ("triangle", "edge_pair")]
    path = catalog_report.save_to_csv(rows, str(tmp_path))
    with open(path, newline="", encoding="utf-8") as f:
        loaded = list(csv.DictReader(f))
    assert [row["name"] for row in loaded] == ["triangle", "edge_pair"]
    assert loaded[0]["collapsible"] == "True"
