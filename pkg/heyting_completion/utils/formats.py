"""
JSON lattice format, DOT export and the section / relation dumps.

A file holds either a poset (read as its downset algebra) or a lattice, each
given by its size and a list of (i, j) pairs meaning i <= j:

    {"kind": "poset", "points": N, "leq": [[i, j], ...]}
    {"kind": "lattice", "size": N, "leq": [[i, j], ...]}

The pairs are closed reflexively and transitively on reading, so a cover list
is enough; files are written with covers only. "name", "labels" and
"metadata" are optional. A document without "points" / "size" may instead give
"leq" as a square 0/1 matrix.
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..algebra.lattice import HEYTING, HeytingAlgebra, Poset, build_from_order, downset_algebra
from ..errors import FormatError, NotALattice, NotAPartialOrder

KINDS = ("poset", "lattice")
COUNT_FIELD = {"poset": "points", "lattice": "size"}


def _document(kind: str, size: int, covers, name: str, labels, metadata: Optional[dict]) -> Dict[str, Any]:
    return {
        "kind": kind,
        COUNT_FIELD[kind]: size,
        "leq": [[int(i), int(j)] for i, j in covers],
        "name": name,
        "labels": list(labels),
        "metadata": metadata or {},
    }


def poset_document(poset: Poset, name: str = "", metadata: Optional[dict] = None) -> Dict[str, Any]:
    """Document for a poset, written with its cover pairs."""
    return _document("poset", poset.size, poset.covers, name, poset.labels, metadata)


def lattice_document(algebra: HeytingAlgebra, metadata: Optional[dict] = None) -> Dict[str, Any]:
    """Document for an algebra, written with its cover pairs."""
    return _document("lattice", algebra.size, algebra.covers, algebra.name, algebra.labels, metadata)


def _field(document: dict, key: str, path: str):
    if key not in document:
        raise FormatError(path, key, "missing")
    return document[key]


def _is_index(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _read_pairs(document: dict, count_field: str, path: str) -> np.ndarray:
    """Reflexive-transitive closure of the listed pairs over range(N)."""
    size = document[count_field]
    if not _is_index(size) or size < 1:
        raise FormatError(path, count_field, "expected a positive integer")
    pairs = _field(document, "leq", path)
    if not isinstance(pairs, list):
        raise FormatError(path, "leq", "expected a list of [i, j] pairs")
    for pair in pairs:
        if not (isinstance(pair, list) and len(pair) == 2 and all(_is_index(v) for v in pair)):
            raise FormatError(path, "leq", f"expected an [i, j] pair, got {pair!r}")
        if not all(0 <= v < size for v in pair):
            raise FormatError(path, "leq", f"pair {pair} is outside 0..{size - 1}")
    try:
        return Poset.from_pairs(size, pairs, close=True).leq
    except NotAPartialOrder as exc:
        raise FormatError(path, "leq", str(exc)) from exc


def _read_matrix(document: dict, path: str) -> np.ndarray:
    rows = _field(document, "leq", path)
    if not isinstance(rows, list) or not rows or not all(isinstance(row, list) for row in rows):
        raise FormatError(path, "leq", "expected a non-empty list of rows")
    if any(len(row) != len(rows) for row in rows):
        raise FormatError(path, "leq", "relation is not square")
    if any(value not in (0, 1, True, False) for row in rows for value in row):
        raise FormatError(path, "leq", "entries must be 0 or 1")
    return np.array(rows, dtype=bool)


def parse_document(document: Any, path: str = "<memory>") -> Union[Poset, HeytingAlgebra]:
    """Poset or algebra described by a decoded JSON document."""
    if not isinstance(document, dict):
        raise FormatError(path, "", "top level must be an object")
    kind = _field(document, "kind", path)
    if kind not in KINDS:
        raise FormatError(path, "kind", f"expected one of {KINDS}")
    count_field = COUNT_FIELD[kind]
    if count_field in document:
        leq = _read_pairs(document, count_field, path)
    else:
        leq = _read_matrix(document, path)
    labels = document.get("labels") or []
    if labels and (len(labels) != len(leq) or not all(isinstance(x, str) for x in labels)):
        raise FormatError(path, "labels", f"expected {len(leq)} strings")
    if len(set(labels)) != len(labels):
        raise FormatError(path, "labels", "labels must be distinct")
    name = str(document.get("name", ""))
    try:
        if kind == "poset":
            return Poset(leq, tuple(labels))
        return build_from_order(leq, HEYTING, labels or None, name)
    except (NotAPartialOrder, NotALattice) as exc:
        raise FormatError(path, "leq", str(exc)) from exc


def load_algebra(path: Union[str, Path]) -> HeytingAlgebra:
    """Read a lattice file; a poset file yields its downset algebra."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except json.JSONDecodeError as exc:
        raise FormatError(str(path), "", f"invalid JSON at line {exc.lineno}") from exc
    except OSError as exc:
        raise FormatError(str(path), "", exc.strerror or "cannot read file") from exc
    parsed = parse_document(document, str(path))
    if isinstance(parsed, Poset):
        return downset_algebra(parsed, str(document.get("name", "")) or path.stem)
    return parsed


def save_document(document: dict, path: Union[str, Path]):
    """Write a document as indented JSON, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=2, ensure_ascii=False)


# ============= DOT and dumps =============

def to_dot(algebra: HeytingAlgebra) -> str:
    """Hasse diagram, bottom to top."""
    lines = [f'digraph "{algebra.name or "lattice"}" {{', "  rankdir=BT;"]
    for a in algebra.elements:
        lines.append(f'  n{a} [label="{algebra.labels[a]}"];')
    for a, b in algebra.covers:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def save_dot(algebra: HeytingAlgebra, path: Union[str, Path]):
    """Write the Hasse diagram of an algebra."""
    Path(path).write_text(to_dot(algebra), encoding="utf-8")


def section_dump(extension) -> Dict[str, Any]:
    """
    Every element of S(A) as a section over Y. The header fixes the order of
    the points of Y and the labels of each quotient; a section is the list of
    its coordinates as element indices of those quotients.
    """
    factors = extension.embedding.factors
    return {
        "points": extension.embedding.space.labels(),
        "factors": [list(f.labels) for f in factors],
        "elements": list(extension.algebra.labels),
        "sections": [list(extension.section(u)) for u in extension.algebra.elements],
    }


def read_section_dump(document: Any, path: str = "<memory>") -> List[Tuple[int, ...]]:
    """Sections of a dump, checked against its header."""
    if not isinstance(document, dict):
        raise FormatError(path, "", "top level must be an object")
    points = _field(document, "points", path)
    factors = _field(document, "factors", path)
    sections = _field(document, "sections", path)
    if not isinstance(points, list):
        raise FormatError(path, "points", "expected a list")
    if not isinstance(factors, list) or len(factors) != len(points):
        raise FormatError(path, "factors", f"expected one label list per point ({len(points)})")
    if not isinstance(sections, list):
        raise FormatError(path, "sections", "expected a list")
    out = []
    for section in sections:
        if not isinstance(section, list) or len(section) != len(points):
            raise FormatError(path, "sections", f"expected {len(points)} coordinates, got {section!r}")
        if not all(_is_index(v) and 0 <= v < len(labels) for v, labels in zip(section, factors)):
            raise FormatError(path, "sections", f"coordinate out of range in {section!r}")
        out.append(tuple(section))
    return out


def relation_dump(labels, relation: np.ndarray) -> Dict[str, Any]:
    """N as labelled 0/1 rows."""
    return {"points": list(labels), "rows": np.asarray(relation, dtype=int).tolist()}
