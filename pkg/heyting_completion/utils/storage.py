"""
Storage for corpora of test algebras.
One JSON file per entry plus an index.json manifest, with automatic directory creation.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from ..algebra.lattice import Poset, downset_algebra
from ..corpus import CorpusEntry, describe
from ..errors import FormatError
from .formats import parse_document, poset_document, save_document

log = logging.getLogger(__name__)


class CorpusStorage:
    """Manages a corpus directory."""

    def __init__(self, base_path: Optional[Union[str, Path]] = None):
        """Initialize storage with a corpus directory (default: the package's data/corpus)."""
        if base_path is None:
            package_dir = Path(__file__).parent.parent
            base_path = package_dir / "data" / "corpus"
        self.base_path = Path(base_path)
        self.index_file = self.base_path / "index.json"

    def _ensure_directories(self):
        self.base_path.mkdir(parents=True, exist_ok=True)

    def _entry_file(self, entry_id: str) -> Path:
        return self.base_path / f"{entry_id}.json"

    def load_index(self) -> List[Dict[str, Any]]:
        """Manifest rows in stored order."""
        if not self.index_file.exists():
            raise FormatError(str(self.index_file), "", "corpus has no index.json")
        try:
            with open(self.index_file, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as exc:
            raise FormatError(str(self.index_file), "", f"invalid JSON at line {exc.lineno}") from exc
        entries = data.get("entries") if isinstance(data, dict) else None
        if not isinstance(entries, list):
            raise FormatError(str(self.index_file), "entries", "expected a list")
        return entries

    def save_entry(self, entry: CorpusEntry):
        """Write one entry file."""
        self._ensure_directories()
        save_document(poset_document(entry.poset, entry.id, entry.metadata), self._entry_file(entry.id))

    def load_entry(self, entry_id: str) -> CorpusEntry:
        """Read one entry; the stored metadata must match a recomputation."""
        path = self._entry_file(entry_id)
        try:
            with open(path, "r", encoding="utf-8") as f:
                document = json.load(f)
        except json.JSONDecodeError as exc:
            raise FormatError(str(path), "", f"invalid JSON at line {exc.lineno}") from exc
        except OSError as exc:
            raise FormatError(str(path), "", exc.strerror or "cannot read file") from exc
        poset = parse_document(document, str(path))
        if not isinstance(poset, Poset):
            raise FormatError(str(path), "kind", "corpus entries must be posets")
        algebra = downset_algebra(poset, entry_id)
        stored = document.get("metadata") or {}
        recomputed = describe(algebra)
        for key, value in recomputed.items():
            if key in stored and stored[key] != value:
                raise FormatError(str(path), f"metadata.{key}", f"stored {stored[key]!r}, recomputed {value!r}")
        return CorpusEntry(entry_id, poset, algebra, recomputed)

    def save(self, entries: Sequence[CorpusEntry]):
        """Write every entry and the manifest."""
        self._ensure_directories()
        for entry in entries:
            self.save_entry(entry)
        manifest = {"entries": [{"id": e.id, "file": self._entry_file(e.id).name, **e.metadata} for e in entries]}
        with open(self.index_file, "w", encoding="utf-8") as f:
            json.dump(manifest, f, indent=2)
        log.info("saved %d entries to %s", len(entries), self.base_path)

    def load(self) -> List[CorpusEntry]:
        """Every entry listed in the manifest, in manifest order."""
        entries = []
        for row in self.load_index():
            if not isinstance(row, dict) or "id" not in row:
                raise FormatError(str(self.index_file), "entries", f"row without id: {row!r}")
            entries.append(self.load_entry(row["id"]))
        return entries
