"""
Dedekind-MacNeille completion by cuts, enumerated with NextClosure.
Used as an oracle independent of the frame construction.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np
from bitarray import frozenbitarray as fbarray

from ..errors import InvariantBreach
from ..utils import bitsets
from .lattice import DISTRIBUTIVE_LATTICE, HeytingAlgebra, Poset, build_indexed

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cut:
    """A cut stored by its lower set; the upper set is derived."""

    lower: fbarray

    def upper(self, leq: np.ndarray) -> fbarray:
        return bitsets.from_mask(_upper_bounds(leq, np.array(self.lower.tolist(), dtype=bool)))


@dataclass(frozen=True, eq=False)
class MacNeilleCompletion:
    """Cuts of a poset ordered by inclusion, with the embedding of the points."""

    algebra: HeytingAlgebra
    cuts: Tuple[Cut, ...]            # cut of each element of `algebra`
    embedding: Tuple[int, ...]       # x ↦ element of `algebra` holding ↓x


def _upper_bounds(leq: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return leq[mask].all(axis=0)


def _lower_bounds(leq: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return leq[:, mask].all(axis=1)


def _closure(leq: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return _lower_bounds(leq, _upper_bounds(leq, mask))


def next_closure_cuts(leq: np.ndarray) -> List[np.ndarray]:
    """All closed lower sets in lectic order."""
    n = len(leq)
    current = _closure(leq, np.zeros(n, dtype=bool))
    found = [current]
    while not current.all():
        for i in range(n - 1, -1, -1):
            if current[i]:
                continue
            seed = current.copy()
            seed[i + 1:] = False
            seed[i] = True
            candidate = _closure(leq, seed)
            # accept only if nothing below position i was added
            if (candidate[:i] == current[:i]).all():
                current = candidate
                found.append(current)
                break
        else:
            raise InvariantBreach("next-closure-progress", {"size": n})
    return found


def dm_completion(ordered: Union[Poset, HeytingAlgebra, np.ndarray], labels: Sequence[str] = (),
                  name: str = "") -> MacNeilleCompletion:
    """
    Lattice of cuts ordered by inclusion of lower sets, with x ↦ ↓x.
    The embedding is checked to be join-dense and meet-dense.
    """
    if isinstance(ordered, (Poset, HeytingAlgebra)):
        labels = labels or ordered.labels
        name = name or getattr(ordered, "name", "")
        leq = np.asarray(ordered.leq, dtype=bool)
    else:
        leq = np.asarray(ordered, dtype=bool)
    n = len(leq)
    labels = tuple(labels) or tuple(str(i) for i in range(n))
    lowers = next_closure_cuts(leq)
    log.debug("MacNeille(%s): %d cuts over %d points", name or "order", len(lowers), n)

    principal = {leq[:, x].tobytes(): x for x in range(n)}
    cut_labels = []
    for lower in lowers:
        x = principal.get(lower.tobytes())
        if x is not None:
            cut_labels.append(labels[x])
        else:
            tops = [i for i in np.flatnonzero(lower) if not (leq[i] & lower).sum() > 1]
            cut_labels.append("⟨" + ",".join(labels[i] for i in tops) + "⟩")
    stacked = np.array(lowers, dtype=bool).reshape(len(lowers), n)
    order = ~(stacked[:, None, :] & ~stacked[None, :, :]).any(axis=2)
    algebra, origin = build_indexed(order, DISTRIBUTIVE_LATTICE, cut_labels,
                                    f"MacNeille({name})" if name else "MacNeille")
    cuts = tuple(Cut(bitsets.from_mask(lowers[k])) for k in origin)
    position = {cut.lower: k for k, cut in enumerate(cuts)}
    embedding = tuple(position[bitsets.from_mask(leq[:, x])] for x in range(n))

    for k, cut in enumerate(cuts):
        mask = np.array(cut.lower.tolist(), dtype=bool)
        points = np.flatnonzero(mask)
        if algebra.join_all(embedding[x] for x in points) != k:
            raise InvariantBreach("macneille-join-dense", {"cut": algebra.labels[k]})
        above = np.flatnonzero(_upper_bounds(leq, mask))
        if algebra.meet_all(embedding[x] for x in above) != k:
            raise InvariantBreach("macneille-meet-dense", {"cut": algebra.labels[k]})
    for x in range(n):
        for y in range(n):
            if bool(leq[x, y]) != algebra.le(embedding[x], embedding[y]):
                raise InvariantBreach("macneille-order-embedding", {"x": labels[x], "y": labels[y]})
    return MacNeilleCompletion(algebra, cuts, embedding)
