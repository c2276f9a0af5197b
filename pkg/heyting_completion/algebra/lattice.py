"""
Finite posets, bounded lattices and Heyting algebras.

Every algebra is stored by its order relation plus precomputed operation
tables. Elements are indices into a canonical carrier ordering (by rank, then
by the set of original indices below), so the bottom is always index 0 and
the top is always the last index.
"""
import logging
from collections import deque
from dataclasses import dataclass, replace
from functools import cached_property
from itertools import product as iproduct
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from bitarray import frozenbitarray as fbarray
from networkx.algorithms.isomorphism import DiGraphMatcher

from ..errors import (
    InputError,
    InvariantBreach,
    NotALattice,
    NotAPartialOrder,
    NotCentral,
    NotDistributive,
    UnsupportedOperation,
)
from ..utils import bitsets
from .verdict import Verdict, first_failure

log = logging.getLogger(__name__)

DISTRIBUTIVE_LATTICE = "distributive-lattice"
HEYTING = "heyting"
MODES = (DISTRIBUTIVE_LATTICE, HEYTING)

POINT_NAMES = "pqrstuvw"


# ============= Order relations =============

def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array)
    array.flags.writeable = False
    return array


def transitive_closure(rel: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a boolean relation."""
    rel = np.array(rel, dtype=bool) | np.eye(len(rel), dtype=bool)
    while True:
        step = rel | (rel.astype(np.int64) @ rel.astype(np.int64) > 0)
        if (step == rel).all():
            return step
        rel = step


def cover_relation(leq: np.ndarray) -> np.ndarray:
    """out[i, j] iff j covers i."""
    lt = leq & ~np.eye(len(leq), dtype=bool)
    between = lt.astype(np.int64) @ lt.astype(np.int64) > 0
    return lt & ~between


def partial_order_witness(leq: np.ndarray) -> Optional[dict]:
    """Return the first violated partial-order law, or None."""
    n = len(leq)
    for i in range(n):
        if not leq[i, i]:
            return {"law": "reflexive", "x": i}
    both = leq & leq.T & ~np.eye(n, dtype=bool)
    if both.any():
        i, j = np.argwhere(both)[0]
        return {"law": "antisymmetric", "x": int(i), "y": int(j)}
    gap = (leq.astype(np.int64) @ leq.astype(np.int64) > 0) & ~leq
    if gap.any():
        i, k = np.argwhere(gap)[0]
        j = int(np.flatnonzero(leq[i] & leq[:, k])[0])
        return {"law": "transitive", "x": int(i), "y": j, "z": int(k)}
    return None


def ranks_of(leq: np.ndarray) -> np.ndarray:
    """Length of the longest chain from a minimal element, per element."""
    n = len(leq)
    lt = leq & ~np.eye(n, dtype=bool)
    rank = np.zeros(n, dtype=np.int64)
    for j in np.argsort(lt.sum(axis=0), kind="stable"):
        below = np.flatnonzero(lt[:, j])
        if below.size:
            rank[j] = rank[below].max() + 1
    return rank


def canonical_order(leq: np.ndarray) -> List[int]:
    """Permutation listing original indices in canonical carrier order."""
    rank = ranks_of(leq)
    return sorted(range(len(leq)), key=lambda i: (int(rank[i]), tuple(np.flatnonzero(leq[:, i]))))


def order_graph(leq: np.ndarray) -> nx.DiGraph:
    """Hasse diagram as a directed graph with the rank as node attribute."""
    graph = nx.DiGraph()
    rank = ranks_of(leq)
    for i in range(len(leq)):
        graph.add_node(i, rank=int(rank[i]))
    graph.add_edges_from((int(i), int(j)) for i, j in np.argwhere(cover_relation(leq)))
    return graph


def isomorphism(first, second) -> Optional[List[int]]:
    """
    Find an order isomorphism between two posets or algebras.
    Returns the image list (i -> mapping[i]) or None.
    """
    if first.leq.shape != second.leq.shape:
        return None
    if sorted(ranks_of(first.leq).tolist()) != sorted(ranks_of(second.leq).tolist()):
        return None
    matcher = DiGraphMatcher(
        order_graph(first.leq),
        order_graph(second.leq),
        node_match=lambda x, y: x["rank"] == y["rank"],
    )
    if not matcher.is_isomorphic():
        return None
    return [matcher.mapping[i] for i in range(len(first.leq))]


def is_isomorphic(first, second) -> bool:
    """Order isomorphism between two posets or algebras."""
    return isomorphism(first, second) is not None


def default_point_names(n: int) -> Tuple[str, ...]:
    """Labels p, q, ..., w for up to eight points, p0, p1, ... beyond."""
    if n <= len(POINT_NAMES):
        return tuple(POINT_NAMES[:n])
    return tuple(f"p{i}" for i in range(n))


# ============= Poset =============

@dataclass(frozen=True, eq=False)
class Poset:
    """Finite partial order; leq[i, j] iff i <= j (read-only boolean matrix)."""

    leq: np.ndarray
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        leq = np.array(self.leq, dtype=bool)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise NotAPartialOrder("order relation must be a square matrix", {"shape": list(leq.shape)})
        witness = partial_order_witness(leq)
        if witness is not None:
            raise NotAPartialOrder(f"relation is not {witness['law']}", witness)
        labels = tuple(self.labels) or default_point_names(len(leq))
        if len(labels) != len(leq):
            raise InputError(f"{len(labels)} labels for {len(leq)} points")
        object.__setattr__(self, "leq", _frozen(leq))
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[Sequence[int]], labels: Sequence[str] = (),
                   close: bool = False) -> "Poset":
        """Build from (i, j) pairs meaning i <= j; `close` takes the transitive closure first."""
        rel = np.eye(size, dtype=bool)
        for i, j in pairs:
            if not (0 <= i < size and 0 <= j < size):
                raise NotAPartialOrder(f"pair ({i}, {j}) is outside 0..{size - 1}", {"pair": [i, j]})
            rel[i, j] = True
        if close:
            rel = transitive_closure(rel)
        return cls(rel, tuple(labels))

    @classmethod
    def antichain(cls, size: int) -> "Poset":
        return cls(np.eye(size, dtype=bool))

    @property
    def size(self) -> int:
        return len(self.leq)

    @cached_property
    def covers(self) -> List[Tuple[int, int]]:
        return [(int(i), int(j)) for i, j in np.argwhere(cover_relation(self.leq))]

    @cached_property
    def minimal(self) -> List[int]:
        return [i for i in range(self.size) if self.leq[:, i].sum() == 1]

    @cached_property
    def maximal(self) -> List[int]:
        return [i for i in range(self.size) if self.leq[i, :].sum() == 1]

    def pairs(self) -> List[Tuple[int, int]]:
        """Every (i, j) with i <= j, in row-major order."""
        return [(int(i), int(j)) for i, j in np.argwhere(self.leq)]

    def downsets(self) -> List[fbarray]:
        """All downsets, discovered breadth-first from the empty set."""
        n = self.size
        strict = self.leq & ~np.eye(n, dtype=bool)
        below = [np.flatnonzero(strict[:, x]) for x in range(n)]
        start = bitsets.empty(n)
        seen = {start}
        found = [start]
        queue = deque([start])
        while queue:
            current = queue.popleft()
            for x in range(n):
                if current[x] or not all(current[y] for y in below[x]):
                    continue
                grown = current | bitsets.from_indices([x], n)
                if grown not in seen:
                    seen.add(grown)
                    found.append(grown)
                    queue.append(grown)
        return found

    def __repr__(self) -> str:
        return f"Poset(size={self.size}, covers={self.covers})"


# ============= Heyting algebra =============

@dataclass(frozen=True, eq=False)
class HeytingAlgebra:
    """
    Finite bounded lattice with derived tables.

    implies, pseudocomplement and supplement hold -1 where the operation is
    undefined; that only happens for lattices built in distributive-lattice mode.
    """

    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    implies: np.ndarray
    pseudocomplement: np.ndarray
    supplement: np.ndarray
    bottom: int
    top: int
    labels: Tuple[str, ...]
    mode: str = HEYTING
    distributive: bool = True
    name: str = ""

    def __post_init__(self):
        for table in ("leq", "meet", "join", "implies", "pseudocomplement", "supplement"):
            object.__setattr__(self, table, _frozen(getattr(self, table)))

    def __repr__(self) -> str:
        return f"HeytingAlgebra({self.name or '?'}, size={self.size}, mode={self.mode})"

    @property
    def size(self) -> int:
        return len(self.leq)

    @property
    def elements(self) -> range:
        return range(self.size)

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def label(self, a: int) -> str:
        return self.labels[a]

    def names(self, bits: Iterable) -> List[str]:
        """Labels of a bitset or an iterable of indices."""
        if isinstance(bits, fbarray):
            bits = bitsets.members(bits)
        return [self.labels[i] for i in bits]

    @cached_property
    def _label_index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise InputError(f"no element labelled {label!r} in {self.name or 'algebra'}") from None

    def with_tables(self, **tables) -> "HeytingAlgebra":
        """Copy with some tables replaced, skipping validation."""
        return replace(self, **tables)

    # ---- partial operations ----

    @property
    def is_heyting(self) -> bool:
        return self.mode == HEYTING

    @property
    def is_supplemented(self) -> bool:
        return bool((self.supplement >= 0).all())

    def imp(self, a: int, b: int) -> int:
        """a → b; UnsupportedOperation where it is undefined."""
        value = int(self.implies[a, b])
        if value < 0:
            raise UnsupportedOperation(f"{self.labels[a]} -> {self.labels[b]} is undefined",
                                       {"x": self.labels[a], "y": self.labels[b]})
        return value

    def neg(self, a: int) -> int:
        """a*; UnsupportedOperation where it is undefined."""
        value = int(self.pseudocomplement[a])
        if value < 0:
            raise UnsupportedOperation(f"{self.labels[a]}* is undefined", {"x": self.labels[a]})
        return value

    def sup(self, a: int) -> int:
        """a⁺; UnsupportedOperation where it is undefined."""
        value = int(self.supplement[a])
        if value < 0:
            raise UnsupportedOperation(f"{self.labels[a]}+ is undefined", {"x": self.labels[a]})
        return value

    def biimplies(self, a: int, b: int) -> int:
        return int(self.meet[self.imp(a, b), self.imp(b, a)])

    def meet_all(self, items: Iterable[int]) -> int:
        """Meet of `items`; the top for none."""
        result = self.top
        for item in items:
            result = int(self.meet[result, item])
        return result

    def join_all(self, items: Iterable[int]) -> int:
        """Join of `items`; the bottom for none."""
        result = self.bottom
        for item in items:
            result = int(self.join[result, item])
        return result

    # ---- derived order data ----

    def down(self, a: int) -> fbarray:
        return bitsets.from_mask(self.leq[:, a])

    def up(self, a: int) -> fbarray:
        return bitsets.from_mask(self.leq[a, :])

    @cached_property
    def ranks(self) -> np.ndarray:
        return _frozen(ranks_of(self.leq))

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        return _frozen(cover_relation(self.leq))

    @cached_property
    def covers(self) -> List[Tuple[int, int]]:
        return [(int(i), int(j)) for i, j in np.argwhere(self.cover_matrix)]

    @cached_property
    def join_irreducibles(self) -> List[int]:
        """Elements with exactly one lower cover."""
        return [j for j in self.elements if self.cover_matrix[:, j].sum() == 1]

    @cached_property
    def meet_irreducibles(self) -> List[int]:
        return [m for m in self.elements if self.cover_matrix[m, :].sum() == 1]

    @cached_property
    def atoms(self) -> List[int]:
        return [int(j) for j in np.flatnonzero(self.cover_matrix[self.bottom])]

    def is_fsi(self) -> bool:
        """Finitely subdirectly irreducible: the top is join-irreducible."""
        return self.top in self.join_irreducibles

    def join_irreducible_poset(self) -> Poset:
        """Join-irreducibles with the induced order (the Birkhoff dual)."""
        ji = self.join_irreducibles
        return Poset(self.leq[np.ix_(ji, ji)], tuple(self.labels[j] for j in ji))


# ============= Construction =============

def _lattice_tables(leq: np.ndarray, labels: Sequence[str]) -> Tuple[np.ndarray, np.ndarray]:
    """Meet and join tables, looking common bounds up by their down-set / up-set keys."""
    n = len(leq)
    columns = np.ascontiguousarray(leq.T)
    down_id = {columns[k].tobytes(): k for k in range(n)}
    up_id = {leq[k].tobytes(): k for k in range(n)}
    meet = np.empty((n, n), dtype=np.int64)
    join = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        below = columns & columns[a]
        above = leq & leq[a]
        for b in range(n):
            lower = down_id.get(below[b].tobytes())
            if lower is None:
                raise NotALattice(f"{labels[a]} and {labels[b]} have no meet",
                                  {"op": "meet", "x": labels[a], "y": labels[b]})
            upper = up_id.get(above[b].tobytes())
            if upper is None:
                raise NotALattice(f"{labels[a]} and {labels[b]} have no join",
                                  {"op": "join", "x": labels[a], "y": labels[b]})
            meet[a, b] = lower
            join[a, b] = upper
    return meet, join


def distributivity_witness(meet: np.ndarray, join: np.ndarray) -> Optional[Tuple[int, int, int]]:
    """First triple (a, b, c) with a∧(b∨c) != (a∧b)∨(a∧c), scanning a, b, c in order."""
    for a in range(len(meet)):
        row = meet[a]
        bad = row[join] != join[row[:, None], row[None, :]]
        if bad.any():
            b, c = np.argwhere(bad)[0]
            return a, int(b), int(c)
    return None


def _derived_tables(leq: np.ndarray, meet: np.ndarray, join: np.ndarray, bottom: int, top: int):
    n = len(leq)
    columns = np.ascontiguousarray(leq.T)
    down_id = {columns[k].tobytes(): k for k in range(n)}
    up_id = {leq[k].tobytes(): k for k in range(n)}
    implies = np.full((n, n), -1, dtype=np.int64)
    for a in range(n):
        # admissible[b, c] iff a∧c <= b; a->b exists iff that set is a principal downset
        admissible = np.ascontiguousarray(leq[meet[a], :].T)
        for b in range(n):
            implies[a, b] = down_id.get(admissible[b].tobytes(), -1)
    pseudo = np.array([down_id.get((meet[a] == bottom).tobytes(), -1) for a in range(n)], dtype=np.int64)
    supplement = np.array([up_id.get((join[a] == top).tobytes(), -1) for a in range(n)], dtype=np.int64)
    return implies, pseudo, supplement


def build_indexed(leq, mode: str = HEYTING, labels: Optional[Sequence[str]] = None,
                  name: str = "") -> Tuple[HeytingAlgebra, List[int]]:
    """
    Build an algebra from an order relation.
    Returns the algebra and `origin`, where origin[k] is the input index of element k.
    """
    if isinstance(leq, Poset):
        labels = labels or leq.labels
        leq = leq.leq
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}; expected one of {MODES}")
    leq = np.array(leq, dtype=bool)
    if leq.ndim != 2 or leq.shape[0] != leq.shape[1] or leq.shape[0] == 0:
        raise NotALattice("order relation must be a non-empty square matrix", {"shape": list(leq.shape)})
    witness = partial_order_witness(leq)
    if witness is not None:
        raise NotAPartialOrder(f"relation is not {witness['law']}", witness)
    n = len(leq)
    labels = tuple(labels) if labels else tuple(str(i) for i in range(n))
    if len(labels) != n:
        raise InputError(f"{len(labels)} labels for {n} elements")

    origin = canonical_order(leq)
    leq = leq[np.ix_(origin, origin)]
    labels = tuple(labels[i] for i in origin)
    if not leq[0].all():
        raise NotALattice("no bottom element", {"missing": "bottom"})
    if not leq[:, n - 1].all():
        raise NotALattice("no top element", {"missing": "top"})
    bottom, top = 0, n - 1

    meet, join = _lattice_tables(leq, labels)
    bad = distributivity_witness(meet, join)
    if bad is not None and mode == HEYTING:
        a, b, c = bad
        raise NotDistributive(
            f"{labels[a]} ∧ ({labels[b]} ∨ {labels[c]}) differs from its distributed form",
            {"x": labels[a], "y": labels[b], "z": labels[c]},
        )
    implies, pseudo, supplement = _derived_tables(leq, meet, join, bottom, top)
    if mode == HEYTING and ((implies < 0).any() or (supplement < 0).any()):
        raise InvariantBreach("heyting-tables-total", {"algebra": name}, "finite distributive lattice lacks an operation")
    log.debug("built %s: %d elements, mode=%s", name or "algebra", n, mode)
    algebra = HeytingAlgebra(
        leq=leq, meet=meet, join=join, implies=implies, pseudocomplement=pseudo, supplement=supplement,
        bottom=bottom, top=top, labels=labels, mode=mode, distributive=bad is None, name=name,
    )
    return algebra, origin


def build_from_order(leq, mode: str = HEYTING, labels: Optional[Sequence[str]] = None,
                     name: str = "") -> HeytingAlgebra:
    """Build an algebra from an order relation (see build_indexed)."""
    return build_indexed(leq, mode, labels, name)[0]


def restrict(algebra: HeytingAlgebra, indices: Sequence[int], mode: str = HEYTING,
             name: str = "") -> Tuple[HeytingAlgebra, List[int]]:
    """
    Algebra on a subset carrying the inherited order.
    Returns it together with the ambient index of each of its elements.
    """
    indices = list(indices)
    sub, origin = build_indexed(
        algebra.leq[np.ix_(indices, indices)], mode, [algebra.labels[i] for i in indices], name
    )
    return sub, [indices[k] for k in origin]


def downset_algebra(poset: Poset, name: str = "") -> HeytingAlgebra:
    """Downsets of a poset ordered by inclusion."""
    sets = poset.downsets()
    n = poset.size
    leq = np.array([[bitsets.is_subset(x, y) for y in sets] for x in sets], dtype=bool)
    labels = []
    for bits in sets:
        if not bits.any():
            labels.append("0")
        elif bits.all():
            labels.append("1")
        else:
            labels.append("{" + ",".join(poset.labels[i] for i in bitsets.members(bits)) + "}")
    algebra = build_from_order(leq, HEYTING, labels, name)
    if n and not is_isomorphic(algebra.join_irreducible_poset(), poset):
        raise InvariantBreach("birkhoff-join-irreducibles", {"poset": poset.covers})
    return algebra


# ============= Constructors =============

def chain(n: int) -> HeytingAlgebra:
    """The n-element chain, labelled 0, m, 1 for n = 3 and 0, p, q, 1 for n = 4."""
    if n < 1:
        raise InputError("a chain needs at least one element")
    inner = {1: [], 2: [], 3: ["m"], 4: ["p", "q"]}.get(n, [f"c{i}" for i in range(1, n - 1)])
    labels = ["0"] + inner + (["1"] if n > 1 else [])
    leq = np.triu(np.ones((n, n), dtype=bool))
    return build_from_order(leq, HEYTING, labels, f"C{n}")


def boolean(n: int) -> HeytingAlgebra:
    """Powerset of n atoms; the atoms of B4 are p and q."""
    points = Poset.antichain(n)
    sets = points.downsets()
    leq = np.array([[bitsets.is_subset(x, y) for y in sets] for x in sets], dtype=bool)
    labels = []
    for bits in sets:
        if not bits.any():
            labels.append("0")
        elif bits.all():
            labels.append("1")
        else:
            labels.append("".join(points.labels[i] for i in bitsets.members(bits)))
    return build_from_order(leq, HEYTING, labels, f"B{2 ** n}")


def product(algebras: Sequence[HeytingAlgebra], name: str = "") -> HeytingAlgebra:
    """Direct product with the coordinatewise order."""
    return product_indexed(algebras, name)[0]


def product_indexed(algebras: Sequence[HeytingAlgebra], name: str = "") -> Tuple[HeytingAlgebra, List[Tuple[int, ...]]]:
    """Direct product, also returning the coordinate tuple of every element."""
    tuples = list(iproduct(*(algebra.elements for algebra in algebras)))
    coords = np.array(tuples, dtype=np.int64).reshape(len(tuples), len(algebras))
    leq = np.ones((len(tuples), len(tuples)), dtype=bool)
    for k, algebra in enumerate(algebras):
        leq &= algebra.leq[np.ix_(coords[:, k], coords[:, k])]
    labels = ["(" + ",".join(a.labels[v] for a, v in zip(algebras, t)) + ")" for t in tuples]
    built, origin = build_indexed(leq, HEYTING, labels, name or "×".join(a.name or "?" for a in algebras))
    return built, [tuples[k] for k in origin]


def ordinal_sum_top(algebra: HeytingAlgebra, name: str = "") -> HeytingAlgebra:
    """Adjoin a new top; the old top is relabelled e."""
    n = algebra.size
    leq = np.ones((n + 1, n + 1), dtype=bool)
    leq[:n, :n] = algebra.leq
    leq[n, :n] = False
    labels = list(algebra.labels)
    labels[algebra.top] = "e"
    labels.append("1")
    return build_from_order(leq, HEYTING, labels, name or f"{algebra.name}⊕1")


# ============= Supplements, centre and element classes =============

def _named(algebra: HeytingAlgebra, **indices) -> dict:
    return {key: algebra.labels[int(value)] for key, value in indices.items()}


def _require_supplemented(algebra: HeytingAlgebra):
    if not algebra.is_supplemented:
        raise UnsupportedOperation(f"{algebra.name or 'algebra'} has no total supplement table",
                                   {"algebra": algebra.name})


def supplement(algebra: HeytingAlgebra, a: int) -> int:
    """Least x with a∨x = top, by exhaustive scan."""
    candidates = [x for x in algebra.elements if algebra.join[a, x] == algebra.top]
    for x in candidates:
        if all(algebra.leq[x, y] for y in candidates):
            return x
    raise UnsupportedOperation(f"{algebra.labels[a]} has no supplement", {"x": algebra.labels[a]})


def center(algebra: HeytingAlgebra) -> fbarray:
    """Complemented elements."""
    complemented = (algebra.meet == algebra.bottom) & (algebra.join == algebra.top)
    return bitsets.from_mask(complemented.any(axis=1))


def complement(algebra: HeytingAlgebra, c: int) -> int:
    """The complement of c; NotCentral if there is none."""
    found = np.flatnonzero((algebra.meet[c] == algebra.bottom) & (algebra.join[c] == algebra.top))
    if not found.size:
        raise NotCentral(f"{algebra.labels[c]} has no complement", {"x": algebra.labels[c]})
    return int(found[0])


class ElementClasses(NamedTuple):
    """Rg, Dn, CoRg and CoDn as bitsets over the carrier."""

    regular: fbarray
    dense: fbarray
    coregular: fbarray
    codense: fbarray


def _is_filter(algebra: HeytingAlgebra, bits: fbarray) -> bool:
    mask = np.array(bits.tolist(), dtype=bool)
    upward = not (algebra.leq[mask] & ~mask).any()
    closed = mask[algebra.meet[np.ix_(mask, mask)]].all()
    return upward and closed


def _is_ideal(algebra: HeytingAlgebra, bits: fbarray) -> bool:
    mask = np.array(bits.tolist(), dtype=bool)
    downward = not (algebra.leq[:, mask].T & ~mask).any()
    closed = mask[algebra.join[np.ix_(mask, mask)]].all()
    return downward and closed


def classify_elements(algebra: HeytingAlgebra) -> ElementClasses:
    """Regular, dense, co-regular and co-dense elements."""
    _require_supplemented(algebra)
    n = algebra.size
    classes = ElementClasses(
        regular=bitsets.from_indices(set(algebra.pseudocomplement.tolist()), n),
        dense=bitsets.from_mask(algebra.pseudocomplement == algebra.bottom),
        coregular=bitsets.from_indices(set(algebra.supplement.tolist()), n),
        codense=bitsets.from_mask(algebra.supplement == algebra.top),
    )
    if not _is_filter(algebra, classes.dense):
        raise InvariantBreach("dense-filter", algebra.names(classes.dense))
    if not _is_ideal(algebra, classes.codense):
        raise InvariantBreach("codense-ideal", algebra.names(classes.codense))
    return classes


def is_centrally_supplemented(algebra: HeytingAlgebra) -> Verdict:
    """
    Dual Stone identity (x∨y)⁺ = x⁺∧y⁺, cross-checked against the four
    equivalent conditions: centre equals co-regular set, x⁺∧x⁺⁺ = 0,
    co-regular set is a sublattice, and every supplement is central.
    """
    _require_supplemented(algebra)
    sup = algebra.supplement
    lhs = sup[algebra.join]
    rhs = algebra.meet[sup[:, None], sup[None, :]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        x, y = bad[0]
        verdict = Verdict.fail(
            {**_named(algebra, x=x, y=y), "lhs": algebra.labels[lhs[x, y]], "rhs": algebra.labels[rhs[x, y]]},
            "(x∨y)⁺ differs from x⁺∧y⁺",
        )
    else:
        verdict = Verdict.ok()

    central = center(algebra)
    coregular = bitsets.from_indices(set(sup.tolist()), algebra.size)
    mask = np.array(coregular.tolist(), dtype=bool)
    conditions = {
        "center-is-coregular": central == coregular,
        "supplement-meets-double": bool((algebra.meet[sup, sup[sup]] == algebra.bottom).all()),
        "coregular-sublattice": bool(mask[algebra.meet[np.ix_(mask, mask)]].all()
                                     and mask[algebra.join[np.ix_(mask, mask)]].all()),
        "supplements-central": bitsets.is_subset(coregular, central),
    }
    disagreeing = [key for key, value in conditions.items() if value != verdict.holds]
    if disagreeing:
        raise InvariantBreach("central-supplement-equivalence",
                              {"dual_stone": verdict.holds, "disagreeing": disagreeing})
    return verdict


@dataclass(frozen=True)
class GlivenkoDual:
    """Boolean algebra of co-regular elements and the quotient a ↦ a⁺⁺."""

    algebra: HeytingAlgebra
    elements: Tuple[int, ...]      # ambient index of each Boolean element
    quotient: Tuple[int, ...]      # Boolean index of a⁺⁺ for each ambient a


def glivenko_dual(algebra: HeytingAlgebra) -> GlivenkoDual:
    """
    CoRg(A) with the order of A is a Boolean algebra with the bounds and joins of A, and a ↦ a⁺⁺
    is a homomorphism onto it whose kernel is the co-dense ideal.
    """
    _require_supplemented(algebra)
    sup = algebra.supplement
    coregular = sorted(set(sup.tolist()))
    boolean_part, elements = restrict(algebra, coregular, HEYTING, f"CoRg({algebra.name})")
    position = {a: k for k, a in enumerate(elements)}
    quotient = tuple(position[int(sup[sup[a]])] for a in algebra.elements)
    B = boolean_part

    def breach(check: str, **witness):
        raise InvariantBreach(check, _named(algebra, **witness))

    if elements[B.bottom] != algebra.bottom or elements[B.top] != algebra.top:
        raise InvariantBreach("glivenko-bounds", {"algebra": algebra.name})
    for x in coregular:
        for y in coregular:
            joined = int(algebra.join[x, y])
            if joined not in position or position[joined] != B.join[position[x], position[y]]:
                breach("glivenko-join", x=x, y=y)
            if position[int(sup[sup[algebra.meet[x, y]]])] != B.meet[position[x], position[y]]:
                breach("glivenko-meet", x=x, y=y)
        px, pc = position[x], position[int(sup[x])]
        if B.meet[px, pc] != B.bottom or B.join[px, pc] != B.top:
            breach("glivenko-complement", x=x)
    if center(B).count() != B.size:
        raise InvariantBreach("glivenko-boolean", {"algebra": algebra.name})
    for a in algebra.elements:
        for b in algebra.elements:
            if quotient[algebra.join[a, b]] != B.join[quotient[a], quotient[b]]:
                breach("glivenko-quotient-join", x=a, y=b)
            if quotient[algebra.meet[a, b]] != B.meet[quotient[a], quotient[b]]:
                breach("glivenko-quotient-meet", x=a, y=b)
    kernel = bitsets.from_mask([q == B.bottom for q in quotient])
    if kernel != classify_elements(algebra).codense:
        raise InvariantBreach("glivenko-kernel", algebra.names(kernel))
    return GlivenkoDual(B, tuple(elements), quotient)


def discriminator(algebra: HeytingAlgebra) -> Verdict:
    """
    On a finitely subdirectly irreducible supplemented algebra,
    t(x,y,z) = ((x↔y)⁺∧x) ∨ ((x↔y)⁺*∧z) returns x when x≠y and z when x=y.
    """
    if not algebra.is_fsi():
        return Verdict.ok("not finitely subdirectly irreducible", applicable=False)
    _require_supplemented(algebra)
    n = algebra.size
    elems = np.arange(n)
    both = algebra.meet[algebra.implies, algebra.implies.T]
    gate = algebra.supplement[both]
    negated = algebra.pseudocomplement[gate]
    for x in range(n):
        first = algebra.meet[gate[x], x]
        values = algebra.join[first[:, None], algebra.meet[negated[x][:, None], elems[None, :]]]
        expected = np.where((elems == x)[:, None], elems[None, :], x)
        bad = np.argwhere(values != expected)
        if bad.size:
            y, z = bad[0]
            return Verdict.fail(_named(algebra, x=x, y=y, z=z), "term is not the discriminator")
    return Verdict.ok(applicable=True)


# ============= Table checks =============

def check_lattice_laws(algebra: HeytingAlgebra) -> Verdict:
    """meet and join agree with the order and are bounds."""
    leq, meet, join = algebra.leq, algebra.meet, algebra.join
    n = algebra.size
    elems = np.arange(n)
    for name, ok in (
        ("meet", (meet == elems[:, None]) == leq),
        ("join", (join == elems[None, :]) == leq),
    ):
        if not ok.all():
            a, b = np.argwhere(~ok)[0]
            return Verdict.fail(_named(algebra, x=a, y=b), f"{name} disagrees with the order")
    lower = leq[meet, elems[:, None]] & leq[meet, elems[None, :]]
    upper = leq[elems[:, None], join] & leq[elems[None, :], join]
    if not (lower & upper).all():
        a, b = np.argwhere(~(lower & upper))[0]
        return Verdict.fail(_named(algebra, x=a, y=b), "meet or join is not a bound")
    return Verdict.ok()


def check_distributive(algebra: HeytingAlgebra) -> Verdict:
    """x∧(y∨z) = (x∧y)∨(x∧z) for all x, y, z."""
    bad = distributivity_witness(algebra.meet, algebra.join)
    if bad is None:
        return Verdict.ok()
    a, b, c = bad
    return Verdict.fail(_named(algebra, x=a, y=b, z=c), "x∧(y∨z) differs from (x∧y)∨(x∧z)")


def check_residuation(algebra: HeytingAlgebra) -> Verdict:
    """c <= a->b iff a∧c <= b wherever a->b is defined."""
    leq = algebra.leq
    for a in algebra.elements:
        row = algebra.implies[a]
        defined = row >= 0
        lhs = leq[:, np.where(defined, row, 0)]
        rhs = leq[algebra.meet[a], :]
        bad = (lhs != rhs) & defined[None, :]
        if bad.any():
            b, c = np.argwhere(bad.T)[0]
            return Verdict.fail(_named(algebra, x=a, y=b, z=c), "z <= x->y disagrees with x∧z <= y")
    return Verdict.ok()


def check_pseudocomplement(algebra: HeytingAlgebra) -> Verdict:
    """Every defined x* is the largest element disjoint from x."""
    for a in algebra.elements:
        p = int(algebra.pseudocomplement[a])
        if p < 0:
            continue
        disjoint = algebra.meet[a] == algebra.bottom
        if algebra.meet[a, p] != algebra.bottom or not algebra.leq[disjoint, p].all():
            return Verdict.fail(_named(algebra, x=a), "x* is not the largest element disjoint from x")
    return Verdict.ok()


def check_supplement_table(algebra: HeytingAlgebra) -> Verdict:
    """a∨a⁺ = 1 and a∨x = 1 implies a⁺ <= x."""
    for a in algebra.elements:
        s = int(algebra.supplement[a])
        if s < 0:
            continue
        covering = algebra.join[a] == algebra.top
        if algebra.join[a, s] != algebra.top or not algebra.leq[s, covering].all():
            return Verdict.fail(_named(algebra, x=a), "x⁺ is not the least element joining x to 1")
    return Verdict.ok()


def check_invariants(algebra: HeytingAlgebra) -> Verdict:
    """Every table invariant; the first failure carries its witness."""
    checks = [check_lattice_laws(algebra)]
    if algebra.is_heyting:
        checks.append(check_distributive(algebra))
    checks += [check_residuation(algebra), check_pseudocomplement(algebra), check_supplement_table(algebra)]
    if algebra.is_heyting:
        for table in ("implies", "pseudocomplement", "supplement"):
            if (getattr(algebra, table) < 0).any():
                checks.append(Verdict.fail({"table": table}, "heyting table is partial"))
    return first_failure(*checks)


def check_de_morgan_half(algebra: HeytingAlgebra) -> Verdict:
    """(x∧y)⁺ = x⁺∨y⁺ holds in every supplemented distributive lattice."""
    _require_supplemented(algebra)
    sup = algebra.supplement
    bad = np.argwhere(sup[algebra.meet] != algebra.join[sup[:, None], sup[None, :]])
    if bad.size:
        x, y = bad[0]
        return Verdict.fail(_named(algebra, x=x, y=y), "(x∧y)⁺ differs from x⁺∨y⁺")
    return Verdict.ok()


def check_center_complete(algebra: HeytingAlgebra) -> Verdict:
    """The centre contains the bounds and is closed under meets and joins."""
    mask = np.array(center(algebra).tolist(), dtype=bool)
    if not (mask[algebra.bottom] and mask[algebra.top]):
        return Verdict.fail({"missing": "bounds"}, "centre lacks a bound")
    members = np.flatnonzero(mask)
    for table, op in ((algebra.meet, "meet"), (algebra.join, "join")):
        closed = mask[table[np.ix_(members, members)]]
        if not closed.all():
            i, j = np.argwhere(~closed)[0]
            return Verdict.fail(_named(algebra, x=members[i], y=members[j]), f"centre not closed under {op}")
    return Verdict.ok()


def check_meet_dense_supplement(algebra: HeytingAlgebra, dense: Optional[Iterable[int]] = None) -> Verdict:
    """
    For a meet-dense S, x⁺ = ⋁{s⁺ : x <= s ∈ S}.
    S defaults to the meet-irreducible elements.
    """
    _require_supplemented(algebra)
    dense = list(algebra.meet_irreducibles if dense is None else dense)
    for x in algebra.elements:
        above = [s for s in dense if algebra.leq[x, s]]
        if algebra.meet_all(above) != x:
            return Verdict.fail(_named(algebra, x=x), "set is not meet-dense")
        if algebra.join_all(int(algebra.supplement[s]) for s in above) != algebra.supplement[x]:
            return Verdict.fail(_named(algebra, x=x), "x⁺ differs from the join of supplements above x")
    return Verdict.ok()


def check_dual_delta_star(algebra: HeytingAlgebra) -> Verdict:
    """Every a has b = a⁺ with a∨b = 1 and a∧b co-dense."""
    _require_supplemented(algebra)
    sup = algebra.supplement
    elems = np.arange(algebra.size)
    joined = algebra.join[elems, sup]
    codense = sup[algebra.meet[elems, sup]] == algebra.top
    bad = np.flatnonzero((joined != algebra.top) | ~codense)
    if bad.size:
        return Verdict.fail(_named(algebra, x=bad[0]), "a∨a⁺ is not 1 or a∧a⁺ is not co-dense")
    return Verdict.ok()


def center_atoms(algebra: HeytingAlgebra) -> List[int]:
    """Minimal non-zero complemented elements."""
    central = bitsets.member_list(center(algebra))
    return [
        z for z in central
        if z != algebra.bottom
        and not any(w not in (algebra.bottom, z) and algebra.leq[w, z] for w in central)
    ]
