"""Writes a dated CSV summary of every catalog complex.

Usage:
    python -m scripts.catalog_report --budget 500 --output-dir data
"""

import argparse
import csv
import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List

from dotenv import load_dotenv

from plcover.catalog import CATALOG
from plcover.collapse import is_collapsible
from plcover.complex_core import reduced_euler
from plcover.config import LOG_FORMAT, env_int
from plcover.homology import betti
from plcover.plgcat import plgcat_bounds
from plcover.shelling import hachimori_criterion

load_dotenv()

FIELDNAMES = ["name", "vertices", "edges", "triangles", "betti", "reduced_euler", "collapsible", "hachimori", "plgcat", "status"]


def summarize(name: str, budget: int) -> Dict[str, Any]:
    """One CSV row for the catalog complex `name`."""
    K = CATALOG[name]()
    row: Dict[str, Any] = {
        "name": name,
        "vertices": K.num_vertices,
        "edges": K.num_edges,
        "triangles": K.num_triangles,
        "betti": " ".join(str(b) for b in betti(K)),
        "reduced_euler": reduced_euler(K),
        "collapsible": bool(is_collapsible(K)),
        "hachimori": hachimori_criterion(K, budget=budget).status,
    }
    verdict = plgcat_bounds(K, budget=budget)
    row["plgcat"] = f"[{verdict.lower}, {verdict.upper}]"
    row["status"] = verdict.status
    return row


def build_report(budget: int) -> List[Dict[str, Any]]:
    rows = []
    for name in sorted(CATALOG):
        logging.info(f"Summarizing {name}")
        rows.append(summarize(name, budget))
    return rows


def save_to_csv(rows: List[Dict[str, Any]], output_dir: str = "data") -> Path:
    """Save report rows to a dated CSV file and return its path."""
    os.makedirs(output_dir, exist_ok=True)
    date_str = datetime.now().strftime("%Y%m%d")
    output_file = Path(output_dir) / f"catalog_{date_str}.csv"
    with open(output_file, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=FIELDNAMES)
        writer.writeheader()
        writer.writerows(rows)
    logging.info(f"CSV results saved to: {output_file}")
    return output_file


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)

    parser = argparse.ArgumentParser(description="Summarize the catalog complexes as CSV")
    parser.add_argument("--budget", type=int, default=None, help="Search budget per complex")
    parser.add_argument("--output-dir", default="data", help="Directory for the CSV file")
    args = parser.parse_args()

    budget = args.budget if args.budget is not None else env_int("PLCOVER_REPORT_BUDGET", 500)
    output_file = save_to_csv(build_report(budget), args.output_dir)
    print(f"Catalog summary saved to {output_file}")
