"""
Test algebras: downset algebras of every poset up to a size bound, the
named fixtures and a seeded random sampler.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import networkx as nx
import numpy as np

from .algebra.duality import min_space
from .algebra.lattice import (
    HeytingAlgebra,
    Poset,
    boolean,
    build_from_order,
    chain,
    downset_algebra,
    is_centrally_supplemented,
    is_isomorphic,
    order_graph,
    ordinal_sum_top,
    product,
    transitive_closure,
)
from .config import DEFAULT_SETTINGS, Settings
from .errors import InputError, InvariantBreach, ResourceLimit

log = logging.getLogger(__name__)

# unlabeled posets on 1..6 points
KNOWN_COUNTS = {1: 1, 2: 2, 3: 5, 4: 16, 5: 63, 6: 318}


# ============= Enumeration =============

def _extensions(poset: Poset) -> List[Poset]:
    """Add one new maximal point above each downset in turn."""
    n = poset.size
    grown = []
    for below in poset.downsets():
        leq = np.zeros((n + 1, n + 1), dtype=bool)
        leq[:n, :n] = poset.leq
        leq[:n, n] = np.array(below.tolist(), dtype=bool)
        leq[n, n] = True
        grown.append(Poset(leq))
    return grown


def _fingerprint(poset: Poset) -> str:
    return nx.weisfeiler_lehman_graph_hash(order_graph(poset.leq), node_attr="rank")


def enumerate_posets(n: int, settings: Settings = DEFAULT_SETTINGS) -> List[Poset]:
    """
    Every poset on n points up to isomorphism, in discovery order.
    Candidates are bucketed by Weisfeiler-Lehman hash, then compared exactly.
    """
    if n < 1:
        raise InputError(f"need at least one point, got {n}")
    if n > settings.max_points:
        raise ResourceLimit("max_points", settings.max_points)
    level = [Poset(np.ones((1, 1), dtype=bool))]
    for size in range(2, n + 1):
        buckets: Dict[str, List[Poset]] = {}
        found = []
        for poset in level:
            for candidate in _extensions(poset):
                bucket = buckets.setdefault(_fingerprint(candidate), [])
                if any(is_isomorphic(candidate, other) for other in bucket):
                    continue
                bucket.append(candidate)
                found.append(candidate)
        log.debug("posets on %d points: %d", size, len(found))
        level = found
    expected = KNOWN_COUNTS.get(n)
    if expected is not None and len(level) != expected:
        raise InvariantBreach("poset-count", {"points": n, "found": len(level), "expected": expected})
    return level


def random_poset(n: int, seed: Union[int, Sequence[int]] = 0, density: float = 0.35) -> Poset:
    """Random order on n points: a random DAG over 0..n-1, transitively closed."""
    rng = np.random.default_rng(seed)
    rel = np.triu(rng.random((n, n)) < density, k=1)
    return Poset(transitive_closure(rel))


# ============= Fixtures =============

def l5() -> HeytingAlgebra:
    """0 < m < a, b < 1."""
    labels = ["0", "m", "a", "b", "1"]
    pairs = [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)]
    rel = np.eye(5, dtype=bool)
    for i, j in pairs:
        rel[i, j] = True
    return build_from_order(transitive_closure(rel), labels=labels, name="L5")


def fixtures() -> Dict[str, HeytingAlgebra]:
    """The named algebras used throughout the checks."""
    return {
        "C2": chain(2),
        "C3": chain(3),
        "C4": chain(4),
        "B4": boolean(2),
        "L5": l5(),
        "2×3": product([chain(2), chain(3)], "2×3"),
        "C3×C3": product([chain(3), chain(3)], "C3×C3"),
        "(2×2)⊕1": ordinal_sum_top(boolean(2), "(2×2)⊕1"),
    }


# ============= Corpus entries =============

def describe(algebra: HeytingAlgebra) -> Dict[str, object]:
    """Metadata stored with a corpus entry."""
    return {
        "size": algebra.size,
        "points": min_space(algebra).size,
        "centrally_supplemented": is_centrally_supplemented(algebra).holds,
        "fsi": algebra.is_fsi(),
    }


@dataclass(frozen=True, eq=False)
class CorpusEntry:
    """One algebra of the corpus with the poset it is built from."""

    id: str
    poset: Poset
    algebra: HeytingAlgebra
    metadata: Dict[str, object] = field(default_factory=dict)

    @classmethod
    def from_poset(cls, entry_id: str, poset: Poset) -> "CorpusEntry":
        """Entry for the downset algebra of `poset`."""
        algebra = downset_algebra(poset, entry_id)
        return cls(entry_id, poset, algebra, describe(algebra))

    @classmethod
    def from_algebra(cls, entry_id: str, algebra: HeytingAlgebra) -> "CorpusEntry":
        """Entry for `algebra`, keeping its poset of join-irreducibles."""
        return cls(entry_id, algebra.join_irreducible_poset(), algebra, describe(algebra))

    def check(self) -> Optional[dict]:
        """First disagreement between the stored and recomputed data, or None."""
        if not is_isomorphic(downset_algebra(self.poset), self.algebra):
            return {"field": "poset", "detail": "algebra is not the downset algebra of the poset"}
        recomputed = describe(self.algebra)
        for key, value in recomputed.items():
            if self.metadata.get(key) != value:
                return {"field": f"metadata.{key}", "stored": self.metadata.get(key), "recomputed": value}
        return None


def build_corpus(max_points: int, settings: Settings = DEFAULT_SETTINGS) -> List[CorpusEntry]:
    """Downset algebras of all posets on 1..max_points points."""
    entries = []
    for n in range(1, max_points + 1):
        for k, poset in enumerate(enumerate_posets(n, settings)):
            entries.append(CorpusEntry.from_poset(f"P{n}-{k:03d}", poset))
    log.info("corpus up to %d points: %d entries", max_points, len(entries))
    return entries


def fixture_entries() -> List[CorpusEntry]:
    """The named fixtures as corpus entries."""
    return [CorpusEntry.from_algebra(name, algebra) for name, algebra in fixtures().items()]


def random_entries(count: int, points: int, seed: int = 0) -> List[CorpusEntry]:
    """`count` random posets on `points` points; entry k of seed s is R{s}-{k}, drawn with seed (s, k)."""
    if points < 1:
        raise InputError(f"need at least one point, got {points}")
    entries = [CorpusEntry.from_poset(f"R{seed}-{k}", random_poset(points, seed=[seed, k])) for k in range(count)]
    log.info("%d random entries on %d points (seed %d)", count, points, seed)
    return entries
