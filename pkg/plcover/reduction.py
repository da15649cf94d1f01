"""3-CNF formulas and the formula-to-enriched-complex pipeline.

The gadget complex K_phi for a formula is an external input: a complex with
pairwise disjoint triangulated 2-spheres, one per variable, that generate its
second homology. verify_gadget_contract checks those properties; toy_gadget
builds a stand-in with the same homological shape so every stage of the
pipeline can run without the real construction.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from plcover.collapse import is_collapsible
from plcover.complex_core import Complex2, SubcomplexMask, components, is_pure
from plcover.config import sat_var_limit
from plcover.enrichment import ComplexPlus, enrich
from plcover.errors import (
    ComplexFormatError,
    ContractViolation,
    DimacsSyntaxError,
    NotThreeCNF,
    SpheresNotDisjoint,
    TooManyVariables,
    TriangleNotInSphere,
    WrongCount,
)
from plcover.formats import ComplexDocument, complex_document, load_complex
from plcover.homology import betti, h2_supported_only_on

logger = logging.getLogger(__name__)

Clause = Tuple[int, int, int]
CHUNK = 1 << 16


@dataclass(frozen=True)
class Formula:
    """A 3-CNF formula; tautological clauses are dropped and kept in `dropped`."""

    num_vars: int
    clauses: Tuple[Clause, ...]
    dropped: Tuple[Clause, ...] = ()

    @classmethod
    def build(cls, num_vars: int, clauses: Sequence[Sequence[int]]) -> "Formula":
        """Validates and normalises clauses.

        Raises:
            NotThreeCNF: If a clause does not have exactly three literals.
            ValueError: If num_vars is not positive, or a literal is zero or names an unknown variable.
        """
        if num_vars < 1:
            raise ValueError("number of variables must be positive")
        kept: List[Clause] = []
        dropped: List[Clause] = []
        for index, clause in enumerate(clauses):
            clause = tuple(int(x) for x in clause)
            if len(clause) != 3:
                raise NotThreeCNF(index, len(clause))
            if any(x == 0 or abs(x) > num_vars for x in clause):
                raise ValueError(f"clause {index} has a literal outside 1..{num_vars}")
            if any(-x in clause for x in clause):
                dropped.append(clause)
            else:
                kept.append(clause)
        if dropped:
            logger.info(f"Dropped {len(dropped)} tautological clauses")
        return cls(num_vars, tuple(kept), tuple(dropped))

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(str(x) for x in clause) + " 0" for clause in self.clauses]
        return "\n".join(lines) + "\n"

    def evaluate(self, assignment: Sequence[bool]) -> bool:
        """Truth value under an assignment listing x1..xn."""
        if len(assignment) != self.num_vars:
            raise ValueError(f"assignment has {len(assignment)} values for {self.num_vars} variables")
        return all(any(assignment[abs(x) - 1] == (x > 0) for x in clause) for clause in self.clauses)


def parse_dimacs(text: str, pad: bool = False) -> Formula:
    """Parses DIMACS CNF.

    Clauses are zero-terminated and may span lines; "c" lines are comments and
    a "%" line ends the clause list.

    Args:
        text (str): File contents.
        pad (bool, optional): Pad one- and two-literal clauses by repeating their last literal.

    Returns:
        Formula: The normalised formula.

    Raises:
        DimacsSyntaxError: On a missing or non-cnf header, a bad token or an unterminated clause.
        NotThreeCNF: On a clause that does not have three literals (after padding).
    """
    num_vars: Optional[int] = None
    expected = 0
    clauses: List[List[int]] = []
    current: List[int] = []
    last_line = 0
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        last_line = number
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise DimacsSyntaxError(number, "second problem line")
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsSyntaxError(number, f"expected 'p cnf <vars> <clauses>', got {line!r}")
            try:
                num_vars, expected = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsSyntaxError(number, "problem line counts must be integers")
            if num_vars < 1:
                raise DimacsSyntaxError(number, "number of variables must be positive")
            if expected < 0:
                raise DimacsSyntaxError(number, "clause count must be non-negative")
            continue
        if num_vars is None:
            raise DimacsSyntaxError(number, "clause before the problem line")
        for token in line.split():
            try:
                literal = int(token)
            except ValueError:
                raise DimacsSyntaxError(number, f"not an integer: {token!r}")
            if literal == 0:
                clauses.append(current)
                current = []
            elif abs(literal) > num_vars:
                raise DimacsSyntaxError(number, f"literal {literal} exceeds {num_vars} variables")
            else:
                current.append(literal)
    if num_vars is None:
        raise DimacsSyntaxError(last_line, "missing problem line")
    if current:
        raise DimacsSyntaxError(last_line, "last clause is not terminated by 0")
    if len(clauses) != expected:
        logger.warning(f"Problem line announces {expected} clauses, found {len(clauses)}")
    normalized = []
    for index, clause in enumerate(clauses):
        if pad and 1 <= len(clause) < 3:
            clause = clause + [clause[-1]] * (3 - len(clause))
        if len(clause) != 3:
            raise NotThreeCNF(index, len(clause))
        normalized.append(clause)
    return Formula.build(num_vars, normalized)


def random_formula(rng: np.random.Generator, num_vars: int, num_clauses: int) -> Formula:
    """Uniform random 3-CNF; the three variables of a clause are distinct when num_vars >= 3."""
    if num_vars < 1:
        raise ValueError("number of variables must be positive")
    clauses = []
    for _ in range(num_clauses):
        variables = rng.choice(num_vars, size=3, replace=num_vars < 3) + 1
        signs = rng.choice([-1, 1], size=3)
        clauses.append(tuple(int(v * s) for v, s in zip(variables, signs)))
    return Formula.build(num_vars, clauses)


def _first_model(formula: Formula, start: int, stop: int) -> Optional[int]:
    """Smallest satisfying assignment index in [start, stop); bit i-1 of the index is x_i."""
    n = formula.num_vars
    shifts = np.arange(n, dtype=np.int64)
    for low in range(start, stop, CHUNK):
        index = np.arange(low, min(low + CHUNK, stop), dtype=np.int64)
        values = ((index[:, None] >> shifts) & 1).astype(bool)
        satisfied = np.ones(len(index), dtype=bool)
        for clause in formula.clauses:
            hit = np.zeros(len(index), dtype=bool)
            for x in clause:
                column = values[:, abs(x) - 1]
                hit |= column if x > 0 else ~column
            satisfied &= hit
        found = np.flatnonzero(satisfied)
        if found.size:
            return low + int(found[0])
    return None


def sat_bruteforce(formula: Formula, threads: int = 1, limit: Optional[int] = None) -> Optional[Tuple[bool, ...]]:
    """Exhaustive satisfiability check.

    The assignment space is split into contiguous blocks by their top bits;
    blocks run in a thread pool and the smallest satisfying assignment wins,
    so the answer does not depend on the thread count.

    Args:
        formula (Formula): The formula.
        threads (int, optional): Worker threads.
        limit (int, optional): Variable guard; defaults to PLCOVER_SAT_VAR_LIMIT.

    Returns:
        Optional[Tuple[bool, ...]]: The smallest satisfying assignment, or None.

    Raises:
        TooManyVariables: If the formula exceeds the guard.
    """
    limit = sat_var_limit() if limit is None else limit
    n = formula.num_vars
    if n > limit:
        raise TooManyVariables(n, limit)
    total = 1 << n
    blocks = 1 << min(n, max(0, math.ceil(math.log2(max(threads, 1)))))
    size = total // blocks
    ranges = [(k * size, (k + 1) * size) for k in range(blocks)]
    if threads <= 1 or blocks == 1:
        results = [_first_model(formula, start, stop) for start, stop in ranges]
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(lambda r: _first_model(formula, *r), ranges))
    for index in results:
        if index is not None:
            return tuple(bool(index >> i & 1) for i in range(n))
    return None


# gadgets


@dataclass(frozen=True, eq=False)
class GadgetComplex:
    complex: Complex2
    spheres: Tuple[SubcomplexMask, ...]
    provenance: str = ""


@dataclass
class GadgetReport:
    """Outcome of every contract check; only required checks decide `passed`."""

    entries: List[Dict[str, Any]] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "", required: bool = True) -> None:
        self.entries.append({"name": name, "passed": bool(passed), "detail": detail, "required": required})

    def failed(self) -> List[Dict[str, Any]]:
        return [entry for entry in self.entries if entry["required"] and not entry["passed"]]

    @property
    def passed(self) -> bool:
        return not self.failed()

    def to_json(self) -> Dict[str, Any]:
        return {"passed": self.passed, "checks": list(self.entries)}


def _sphere_problem(K: Complex2, sphere: SubcomplexMask) -> Optional[str]:
    if not sphere.is_valid(K):
        return "not a subcomplex"
    if not sphere.triangles.any():
        return "has no triangles"
    if components(K, sphere) != 1:
        return "not connected"
    for e in np.flatnonzero(sphere.edges):
        around = sum(1 for t in K.edge_triangles(int(e)) if sphere.triangles[t])
        if around != 2:
            return f"edge {K.labels((1, int(e)))} lies in {around} sphere triangles"
    b = betti(K, sphere)
    if b != (1, 0, 1):
        return f"betti numbers {b} instead of (1, 0, 1)"
    return None


def verify_gadget_contract(G: GadgetComplex, formula: Optional[Formula] = None) -> GadgetReport:
    """Checks that the spheres are disjoint triangulated 2-spheres generating H2.

    Purity and the reduced Euler characteristic are reported as advisory checks.
    """
    K = G.complex
    report = GadgetReport()
    report.add("pure_2_dimensional", not K.is_empty() and K.dimension == 2 and is_pure(K), required=False)
    for index, sphere in enumerate(G.spheres, start=1):
        problem = _sphere_problem(K, sphere)
        report.add(f"sphere:{index}", problem is None, problem or "triangulated 2-sphere")
    try:
        generated = h2_supported_only_on(K, list(G.spheres))
        report.add("spheres_disjoint", True)
        report.add("h2_generated_by_spheres", generated, f"b2 = {betti(K)[2]}, {len(G.spheres)} spheres")
    except SpheresNotDisjoint as e:
        report.add("spheres_disjoint", False, str(e))
        report.add("h2_generated_by_spheres", False, "spheres are not disjoint")
    if formula is not None:
        report.add(
            "sphere_count_matches_formula",
            len(G.spheres) == formula.num_vars,
            f"{len(G.spheres)} spheres, {formula.num_vars} variables",
        )
    if not K.is_empty():
        chi = K.num_vertices - K.num_edges + K.num_triangles - 1
        report.add("reduced_euler_equals_sphere_count", chi == len(G.spheres), f"reduced Euler {chi}", required=False)
    return report


def toy_gadget(n: int) -> GadgetComplex:
    """n boundaries of tetrahedra chained by two-triangle bridges.

    Sphere i has vertices s<i>_0..s<i>_3. Bridge i is the disk
    {s<i>_0, x<i>, y<i>} + {x<i>, y<i>, s<i+1>_1}, which meets each sphere in a
    single vertex, so b2 = n = reduced Euler characteristic.
    """
    if n < 1:
        raise ValueError("a toy gadget needs at least one sphere")
    sphere_faces = []
    faces = []
    for i in range(1, n + 1):
        s = [f"s{i}_{k}" for k in range(4)]
        tetrahedron = [(s[0], s[1], s[2]), (s[0], s[1], s[3]), (s[0], s[2], s[3]), (s[1], s[2], s[3])]
        sphere_faces.append(tetrahedron)
        faces.extend(tetrahedron)
    for i in range(1, n):
        faces.append((f"s{i}_0", f"x{i}", f"y{i}"))
        faces.append((f"x{i}", f"y{i}", f"s{i + 1}_1"))
    K = Complex2.from_maximal_faces(faces)
    spheres = tuple(SubcomplexMask.from_faces(K, tetrahedron) for tetrahedron in sphere_faces)
    return GadgetComplex(K, spheres, provenance=f"toy:{n}")


def sphere_names(count: int) -> List[str]:
    return [f"sphere:{i}" for i in range(1, count + 1)]


def gadget_to_json(G: GadgetComplex) -> ComplexDocument:
    return complex_document(G.complex, dict(zip(sphere_names(len(G.spheres)), G.spheres)))


def load_gadget(filepath: Path) -> GadgetComplex:
    """Reads a gadget complex whose spheres are named sphere:1 .. sphere:n.

    Raises:
        ComplexFormatError: If the sphere names are not consecutive from 1.
    """
    K, named = load_complex(filepath)
    spheres = {name: mask for name, mask in named.items() if name.startswith("sphere:")}
    names = sphere_names(len(spheres))
    if set(spheres) != set(names):
        raise ComplexFormatError(1, f"sphere names must be {', '.join(names) or 'sphere:1..n'}")
    return GadgetComplex(K, tuple(spheres[name] for name in names), provenance=str(filepath))


@dataclass
class PipelineResult:
    gadget: GadgetComplex
    enriched: ComplexPlus
    report: GadgetReport
    metadata: Dict[str, Any]
    timings: Dict[str, float]


def pipeline(formula: Formula, gadget_source: Union[str, Path, GadgetComplex] = "toy") -> PipelineResult:
    """Builds K+ for a formula from a verified gadget.

    Args:
        formula (Formula): The formula.
        gadget_source: "toy", a gadget file, or a GadgetComplex.

    Returns:
        PipelineResult: The gadget, the enriched complex, the contract report,
        deterministic metadata and wall-clock timings.

    Raises:
        ContractViolation: If the gadget fails a required contract check.
    """
    started = time.perf_counter()
    if isinstance(gadget_source, GadgetComplex):
        gadget = gadget_source
    elif str(gadget_source) == "toy":
        gadget = toy_gadget(max(formula.num_vars, 1))
    else:
        gadget = load_gadget(Path(gadget_source))
    loaded = time.perf_counter()
    report = verify_gadget_contract(gadget, formula)
    verified = time.perf_counter()
    if not report.passed:
        logger.error(f"Gadget {gadget.provenance} violates the contract: {[e['name'] for e in report.failed()]}")
        raise ContractViolation(report)
    Kp = enrich(gadget.complex)
    enriched = time.perf_counter()
    K = gadget.complex
    metadata = {
        "num_vars": formula.num_vars,
        "num_clauses": len(formula.clauses),
        "dropped_tautologies": len(formula.dropped),
        "gadget": gadget.provenance,
        "gadget_counts": [K.num_vertices, K.num_edges, K.num_triangles],
        "n": K.num_vertices - K.num_edges + K.num_triangles - 1,
        "enriched_counts": [Kp.complex.num_vertices, Kp.complex.num_edges, Kp.complex.num_triangles],
        "enriched_digest": Kp.complex.digest(),
    }
    timings = {
        "load_seconds": loaded - started,
        "verify_seconds": verified - loaded,
        "enrich_seconds": enriched - verified,
    }
    logger.info(f"Pipeline built K+ with {Kp.complex.num_triangles} triangles from {K.num_triangles}")
    return PipelineResult(gadget, Kp, report, metadata, timings)


def removal_witness_check(G: GadgetComplex, removed: Sequence[int]) -> bool:
    """Whether removing one triangle from each sphere leaves a collapsible complex.

    Raises:
        WrongCount: If the number of triangles differs from the number of spheres.
        TriangleNotInSphere: If a triangle lies in no sphere or shares one with another removed triangle.
    """
    removed = [int(t) for t in removed]
    if len(removed) != len(G.spheres):
        raise WrongCount(len(removed), len(G.spheres))
    used = set()
    for t in removed:
        owners = [i for i, sphere in enumerate(G.spheres) if 0 <= t < len(sphere.triangles) and sphere.triangles[t]]
        if not owners:
            raise TriangleNotInSphere(t)
        if owners[0] in used:
            raise TriangleNotInSphere(t, "shares a sphere with another removed triangle")
        used.add(owners[0])
    return bool(is_collapsible(G.complex, SubcomplexMask.full(G.complex).without_triangles(removed)))
