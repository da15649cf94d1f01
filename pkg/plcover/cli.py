"""Command-line front end.

Exit codes: 0 success / positive answer, 1 negative answer, 2 input or
precondition error, 3 gadget contract violation. JSON goes to --out and, with
--json, to standard output; the human summary goes to standard error through
logging.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from plcover.catalog import CATALOG
from plcover.collapse import CollapseCertificate, is_collapsible, replay
from plcover.complex_core import Complex2, maximal_faces
from plcover.config import LOG_FORMAT, RunConfig, load_run_config, log_level, sat_var_limit
from plcover.enrichment import enrich
from plcover.errors import BudgetExhausted, ContractViolation, PlcoverError
from plcover.formats import dumps, load_complex, load_data, save_data
from plcover.plgcat import CoverCertificate, plgcat_bounds, verify_cover_certificate
from plcover.reduction import (
    Formula,
    gadget_to_json,
    parse_dimacs,
    pipeline,
    random_formula,
    sat_bruteforce,
)
from plcover.shelling import find_shelling, hachimori_criterion

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_CONTRACT = 3

Outcome = Tuple[int, Optional[Dict[str, Any]]]


def _load(config: RunConfig) -> Complex2:
    """Loads the input complex; a bare catalog name such as dunce_hat also works."""
    source = config.inputs[0]
    if not Path(source).exists() and str(source) in CATALOG:
        K = CATALOG[str(source)]()
    else:
        K, _ = load_complex(source)
    logger.info(f"Loaded {K!r} from {config.inputs[0]}")
    return K


def cmd_collapse(config: RunConfig, args: argparse.Namespace) -> Outcome:
    K = _load(config)
    verdict = is_collapsible(K)
    document = {
        "command": "collapse",
        "collapsible": verdict.ok,
        "residual": [list(face) for face in maximal_faces(K, verdict.residual)],
        "certificate": verdict.certificate.to_json(K) if verdict else None,
    }
    logger.info("Collapsible" if verdict else f"Not collapsible; stuck at {verdict.residual.counts()} simplices")
    return (EXIT_OK if verdict else EXIT_NEGATIVE), document


def cmd_shell(config: RunConfig, args: argparse.Namespace) -> Outcome:
    K = _load(config)
    if args.find_shelling:
        try:
            order = find_shelling(K, config.budget)
            shellable: Optional[bool] = order is not None
        except BudgetExhausted:
            order, shellable = None, None
        document = {
            "command": "shell",
            "mode": "find-shelling",
            "shellable": shellable,
            "order": None if order is None else [list(K.labels((2, t))) for t in order],
        }
        logger.info({True: "Shelling found", False: "Not shellable", None: "Shelling search ran out of budget"}[shellable])
        return (EXIT_OK if order is not None else EXIT_NEGATIVE), document
    verdict = hachimori_criterion(K, config.budget)
    document = {"command": "shell", "mode": "hachimori", "verdict": verdict.to_json(K)}
    logger.info(f"Hachimori criterion: {verdict.status} {verdict.reason or ''}".rstrip())
    return (EXIT_OK if verdict else EXIT_NEGATIVE), document


def cmd_plgcat(config: RunConfig, args: argparse.Namespace) -> Outcome:
    K = _load(config)
    target = enrich(K) if args.enrich else K
    verdict = plgcat_bounds(target, config.budget, config.threads)
    logger.info(f"plgcat in [{verdict.lower}, {verdict.upper}] ({verdict.status})")
    return EXIT_OK, {"command": "plgcat", "enriched": bool(args.enrich), "verdict": verdict.to_json()}


def cmd_enrich(config: RunConfig, args: argparse.Namespace) -> Outcome:
    Kp = enrich(_load(config))
    logger.info(f"Enriched complex {Kp.complex!r}")
    return EXIT_OK, dict(Kp.to_json())


def cmd_verify(config: RunConfig, args: argparse.Namespace) -> Outcome:
    document = load_data(config.inputs[0])
    kind = document.get("kind") if isinstance(document, dict) else None
    if kind == "collapse":
        K, certificate = CollapseCertificate.from_json(document)
        valid = replay(K, certificate)
    elif kind == "cover":
        valid = verify_cover_certificate(CoverCertificate.from_json(document))
    else:
        raise ValueError(f"unknown certificate kind {kind!r}")
    logger.info(f"Certificate is {'valid' if valid else 'INVALID'}")
    return (EXIT_OK if valid else EXIT_NEGATIVE), {"command": "verify", "kind": kind, "valid": valid}


def _formula(config: RunConfig, args: argparse.Namespace) -> Formula:
    if args.random is not None:
        rng = np.random.default_rng(config.seed)
        num_clauses = args.clauses if args.clauses is not None else 4 * args.random
        return random_formula(rng, args.random, num_clauses)
    if not config.inputs:
        raise ValueError("reduce needs a CNF file or --random N")
    return parse_dimacs(Path(config.inputs[0]).read_text(encoding="utf-8"), pad=args.pad)


def cmd_reduce(config: RunConfig, args: argparse.Namespace) -> Outcome:
    formula = _formula(config, args)
    try:
        result = pipeline(formula, args.gadget)
    except ContractViolation as e:
        if config.output is not None:
            save_data(config.output / "gadget_report.json", e.report.to_json())
        raise
    metadata = dict(result.metadata)
    if formula.num_vars <= sat_var_limit():
        model = sat_bruteforce(formula, config.threads)
        metadata["satisfiable"] = model is not None
        metadata["model"] = None if model is None else [int(x) for x in model]
    if config.output is not None:
        save_data(config.output / "gadget_report.json", result.report.to_json())
        save_data(config.output / "gadget.json", gadget_to_json(result.gadget))
        save_data(config.output / "enriched.json", result.enriched.to_json())
        save_data(config.output / "formula.json", {"num_vars": formula.num_vars, "clauses": [list(c) for c in formula.clauses]})
        save_data(config.output / "metadata.json", metadata)
        save_data(config.output / "metadata.timings.json", result.timings)
        logger.info(f"Pipeline artifacts written to {config.output}")
    return EXIT_OK, {"command": "reduce", "metadata": metadata, "report": result.report.to_json()}


COMMANDS: Dict[str, Callable[[RunConfig, argparse.Namespace], Outcome]] = {
    "collapse": cmd_collapse,
    "shell": cmd_shell,
    "plgcat": cmd_plgcat,
    "reduce": cmd_reduce,
    "verify": cmd_verify,
    "enrich": cmd_enrich,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, help="search budget (default PLCOVER_BUDGET)")
    common.add_argument("--seed", type=int, help="seed for randomized inputs (default PLCOVER_SEED)")
    common.add_argument("--threads", type=int, help="worker threads (default PLCOVER_THREADS)")
    common.add_argument("--json", action="store_true", help="print the JSON result to standard output")
    common.add_argument("--out", type=Path, help="output file (output directory for reduce)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="more logging")

    parser = argparse.ArgumentParser(
        prog="plcover", description="Collapsibility, shellability and PL geometric category of 2-complexes"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("collapse", parents=[common], help="decide collapsibility and emit a certificate")
    p.add_argument("input", type=Path)

    p = sub.add_parser("shell", parents=[common], help="find a shelling or apply Hachimori's criterion")
    p.add_argument("input", type=Path)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--find-shelling", action="store_true")
    mode.add_argument("--hachimori", action="store_true")

    p = sub.add_parser("plgcat", parents=[common], help="bound the PL geometric category")
    p.add_argument("input", type=Path)
    p.add_argument("--enrich", action="store_true", help="enrich the complex first")

    p = sub.add_parser("reduce", parents=[common], help="build the enriched complex of a 3-CNF formula")
    p.add_argument("input", type=Path, nargs="?")
    p.add_argument("--random", type=int, metavar="N", help="use a seeded random formula over N variables")
    p.add_argument("--clauses", type=int, help="clause count for --random (default 4N)")
    p.add_argument("--gadget", default="toy", help="'toy' or a gadget JSON file")
    p.add_argument("--pad", action="store_true", help="pad short clauses instead of rejecting them")

    p = sub.add_parser("verify", parents=[common], help="replay a collapse or cover certificate")
    p.add_argument("input", type=Path)

    p = sub.add_parser("enrich", parents=[common], help="write the enriched complex")
    p.add_argument("input", type=Path)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=log_level(args.verbose), format=LOG_FORMAT)
    logging.getLogger().setLevel(log_level(args.verbose))

    try:
        config = load_run_config(
            command=args.command,
            inputs=[args.input] if getattr(args, "input", None) is not None else [],
            budget=args.budget,
            output=args.out,
            seed=args.seed,
            threads=args.threads,
            verbosity=args.verbose,
            json_stdout=args.json,
        )
    except ValueError as e:
        logging.error(f"Invalid configuration: {e}")
        return EXIT_INPUT

    try:
        code, document = COMMANDS[config.command](config, args)
    except ContractViolation as e:
        logging.error(str(e))
        return EXIT_CONTRACT
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as e:
        logging.error(f"{type(e).__name__}: {e}")
        return EXIT_INPUT
    except PlcoverError as e:
        logging.error(f"{type(e).__name__}: {e}")
        return EXIT_NEGATIVE

    if document is not None:
        if config.output is not None and config.command != "reduce":
            save_data(config.output, document)
            logger.info(f"Results saved to: {config.output}")
        if config.json_stdout:
            sys.stdout.write(dumps(document))
    return code
