"""Reading and writing complexes.

Text format, one maximal face per line:

    # comment
    v <label>
    e <label> <label>
    t <label> <label> <label>

JSON format:

    {"maximal_faces": [["a", "b", "c"], ...],
     "named_subcomplexes": {"sphere:1": [[...], ...]}}
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, TypedDict

from plcover.complex_core import Complex2, Face, SubcomplexMask, maximal_faces
from plcover.errors import ComplexFormatError, InvalidSubcomplex

logger = logging.getLogger(__name__)

FACE_KINDS = {"v": 1, "e": 2, "t": 3}


class ComplexDocument(TypedDict, total=False):
    """JSON shape of a complex file"""

    maximal_faces: List[List[str]]
    named_subcomplexes: Dict[str, List[List[str]]]


def parse_complex_text(text: str) -> Complex2:
    """Parses the line-oriented complex format.

    Args:
        text (str): File contents.

    Returns:
        Complex2: The closure of the listed faces.

    Raises:
        ComplexFormatError: On an unknown line kind or a wrong label count.
    """
    faces: List[Face] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *labels = line.split()
        if kind not in FACE_KINDS:
            raise ComplexFormatError(number, f"unknown face kind {kind!r}")
        if len(labels) != FACE_KINDS[kind]:
            raise ComplexFormatError(number, f"'{kind}' expects {FACE_KINDS[kind]} labels, got {len(labels)}")
        if len(set(labels)) != len(labels):
            raise ComplexFormatError(number, "repeated label in face")
        faces.append(tuple(labels))
    return Complex2.from_maximal_faces(faces)


def parse_complex_json(text: str) -> Tuple[Complex2, Dict[str, SubcomplexMask]]:
    """Parses the JSON complex format.

    Returns:
        Tuple[Complex2, Dict[str, SubcomplexMask]]: The complex and its named subcomplexes.

    Raises:
        ComplexFormatError: If the document is not valid JSON or misses maximal_faces.
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ComplexFormatError(e.lineno, f"invalid JSON: {e.msg}")
    if not isinstance(document, dict) or not isinstance(document.get("maximal_faces"), list):
        raise ComplexFormatError(1, "expected an object with a 'maximal_faces' list")
    try:
        K = Complex2.from_maximal_faces(document["maximal_faces"])
    except (TypeError, ValueError) as e:
        raise ComplexFormatError(1, str(e))
    named = {}
    for name, faces in sorted(document.get("named_subcomplexes", {}).items()):
        try:
            named[name] = SubcomplexMask.from_faces(K, faces)
        except InvalidSubcomplex as e:
            raise ComplexFormatError(1, f"named subcomplex {name!r}: {e}")
    return K, named


def load_complex(filepath: Path) -> Tuple[Complex2, Dict[str, SubcomplexMask]]:
    """Loads a complex from a text or JSON file, chosen by suffix or first character.

    Args:
        filepath (Path): The file to read.

    Returns:
        Tuple[Complex2, Dict[str, SubcomplexMask]]: The complex and its named subcomplexes
        (always empty for the text format).
    """
    text = Path(filepath).read_text(encoding="utf-8")
    if Path(filepath).suffix.lower() == ".json" or text.lstrip().startswith("{"):
        logger.debug(f"Reading JSON complex from {filepath}")
        return parse_complex_json(text)
    logger.debug(f"Reading text complex from {filepath}")
    return parse_complex_text(text), {}


def complex_document(K: Complex2, named: Optional[Dict[str, SubcomplexMask]] = None) -> ComplexDocument:
    document: ComplexDocument = {"maximal_faces": [list(face) for face in K.maximal_faces()]}
    if named:
        document["named_subcomplexes"] = {
            name: [list(face) for face in maximal_faces(K, mask)] for name, mask in sorted(named.items())
        }
    return document


def dumps(data: Any) -> str:
    """Stable JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def save_data(filepath: Path, data: Any) -> None:
    """Saves data to a JSON file.

    Args:
        filepath (Path): The path to the JSON file.
        data: The data to save.
    """
    # ensure parent directory exists
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)
    with open(filepath, "w", encoding="utf-8") as f:
        f.write(dumps(data))


def load_data(filepath: Path) -> Any:
    with open(filepath, "r", encoding="utf-8") as f:
        return json.load(f)
