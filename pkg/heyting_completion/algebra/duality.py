"""
Finite duality: prime filters, the minimal prime filters Y, congruences,
the quotients A_y and the subdirect embedding of A into their product.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from bitarray import frozenbitarray as fbarray

from ..errors import InvariantBreach
from ..utils import bitsets
from .lattice import (
    HEYTING,
    HeytingAlgebra,
    build_indexed,
    center,
    center_atoms,
    classify_elements,
    complement,
    is_centrally_supplemented,
)
from .verdict import Verdict

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PrimeFilter:
    """Prime filter of a finite distributive lattice, principal on a join-irreducible."""

    generator: int
    elements: fbarray

    def __contains__(self, a: int) -> bool:
        return bool(self.elements[a])


def is_prime_filter(algebra: HeytingAlgebra, bits: fbarray) -> bool:
    """Definitional predicate: proper, upward closed, meet closed and prime."""
    mask = np.array(bits.tolist(), dtype=bool)
    if not mask.any() or mask[algebra.bottom]:
        return False
    if (algebra.leq[mask] & ~mask).any():
        return False
    if not mask[algebra.meet[np.ix_(mask, mask)]].all():
        return False
    # a∨b in F forces a in F or b in F
    joined_in = mask[algebra.join]
    return not (joined_in & ~mask[:, None] & ~mask[None, :]).any()


def prime_filters(algebra: HeytingAlgebra) -> List[PrimeFilter]:
    """All prime filters, one per join-irreducible, in generator order."""
    irreducible = set(algebra.join_irreducibles)
    filters = []
    for x in algebra.elements:
        bits = algebra.up(x)
        if is_prime_filter(algebra, bits) != (x in irreducible):
            raise InvariantBreach("prime-filter-shortcut", {"generator": algebra.labels[x]})
        if x in irreducible:
            filters.append(PrimeFilter(x, bits))
    return filters


# ============= Minimal prime filters =============

@dataclass(frozen=True, eq=False)
class MinSpace:
    """Minimal prime filters, ordered by generator index (discrete topology)."""

    algebra: HeytingAlgebra
    filters: Tuple[PrimeFilter, ...]

    @property
    def size(self) -> int:
        return len(self.filters)

    @property
    def generators(self) -> List[int]:
        return [y.generator for y in self.filters]

    def labels(self) -> List[str]:
        return ["↑" + self.algebra.labels[g] for g in self.generators]

    def points_containing(self, a: int) -> fbarray:
        """{y ∈ Y : a ∈ y} as a bitset over Y."""
        return bitsets.from_mask([y.elements[a] for y in self.filters])


def min_space(algebra: HeytingAlgebra) -> MinSpace:
    """
    Minimal prime filters, with the finite checks on them: every prime filter
    lies above one; each y holds exactly one of a, a⁺; co-dense elements lie
    in none; for a∈y some s∉y has a∨s = 1; and, when the algebra is centrally
    supplemented, Y is generated by the atoms of the centre.
    """
    every = prime_filters(algebra)
    minimal = [
        f for f in every
        if not any(g.elements != f.elements and bitsets.is_subset(g.elements, f.elements) for g in every)
    ]
    space = MinSpace(algebra, tuple(minimal))
    label = algebra.labels

    for f in every:
        if not any(bitsets.is_subset(y.elements, f.elements) for y in minimal):
            raise InvariantBreach("prime-above-minimal", {"filter": "↑" + label[f.generator]})
    for y in minimal:
        for a in algebra.elements:
            if a in y and not any(s not in y and algebra.join[a, s] == algebra.top for s in algebra.elements):
                raise InvariantBreach("minimal-cojoin", {"y": "↑" + label[y.generator], "a": label[a]})

    if algebra.is_supplemented:
        codense = classify_elements(algebra).codense
        for y in minimal:
            for a in algebra.elements:
                if (a in y) == (int(algebra.supplement[a]) in y):
                    raise InvariantBreach("minimal-exactly-one", {"y": "↑" + label[y.generator], "a": label[a]})
            if (y.elements & codense).any():
                raise InvariantBreach("minimal-avoids-codense", {"y": "↑" + label[y.generator]})
        if is_centrally_supplemented(algebra).holds:
            atoms = center_atoms(algebra)
            generated = sorted((algebra.up(z) for z in atoms), key=lambda bits: bits.to01())
            if generated != sorted((y.elements for y in minimal), key=lambda bits: bits.to01()):
                raise InvariantBreach("minimal-from-central-ultrafilters", {"algebra": algebra.name})
    log.debug("%s: %d prime filters, %d minimal", algebra.name or "algebra", len(every), len(minimal))
    return space


# ============= Congruences and quotients =============

@dataclass(frozen=True, eq=False)
class Congruence:
    """Partition of the carrier; classes[a] is the block id of a (ids in first-appearance order)."""

    algebra: HeytingAlgebra
    classes: Tuple[int, ...]

    @classmethod
    def from_keys(cls, algebra: HeytingAlgebra, keys: Sequence) -> "Congruence":
        """Congruence whose blocks are the elements sharing a key."""
        ids: Dict = {}
        return cls(algebra, tuple(ids.setdefault(key, len(ids)) for key in keys))

    @cached_property
    def blocks(self) -> List[List[int]]:
        """Elements of each block, in block id order."""
        grouped: List[List[int]] = [[] for _ in range(max(self.classes) + 1)]
        for a, block in enumerate(self.classes):
            grouped[block].append(a)
        return grouped

    def is_identity(self) -> bool:
        return len(self.blocks) == self.algebra.size

    def is_total(self) -> bool:
        return len(self.blocks) == 1

    def is_compatible(self, supplement: bool = False) -> Verdict:
        """Compatibility with ∧, ∨, → and optionally ⁺."""
        A = self.algebra
        cls = np.array(self.classes)
        tables = {"meet": A.meet, "join": A.join, "implies": A.implies}
        for name, table in tables.items():
            image = cls[table]
            for block in self.blocks:
                rows, cols = image[block], image[:, block]
                if (rows != rows[0]).any() or (cols != cols[:, :1]).any():
                    return Verdict.fail({"op": name, "block": A.names(block)}, f"not compatible with {name}")
        if supplement:
            image = cls[A.supplement]
            for block in self.blocks:
                if len(set(image[block].tolist())) > 1:
                    return Verdict.fail({"op": "supplement", "block": A.names(block)}, "not compatible with ⁺")
        return Verdict.ok()

    def quotient(self, name: str = "") -> "Quotient":
        """Quotient algebra; blocks are labelled by their least element, bounds by 0 and 1."""
        A = self.algebra
        cls = np.array(self.classes)
        count = len(self.blocks)
        leq = np.zeros((count, count), dtype=bool)
        reps = [block[0] for block in self.blocks]
        for i, x in enumerate(reps):
            for j, y in enumerate(reps):
                leq[i, j] = cls[A.meet[x, y]] == cls[x]
        labels = []
        for block in self.blocks:
            if cls[A.bottom] == cls[block[0]] and count > 1:
                labels.append("0")
            elif cls[A.top] == cls[block[0]]:
                labels.append("1")
            else:
                labels.append(A.labels[A.meet_all(block)])
        algebra, origin = build_indexed(leq, HEYTING, labels, name)
        position = {block: k for k, block in enumerate(origin)}
        return Quotient(self, algebra, tuple(position[c] for c in self.classes))


@dataclass(frozen=True, eq=False)
class Quotient:
    """A quotient algebra with the canonical map onto it."""

    congruence: Congruence
    algebra: HeytingAlgebra
    map: Tuple[int, ...]

    def check_homomorphism(self) -> Verdict:
        """The canonical map preserves ∧, ∨, → and the bounds."""
        A, Q, q = self.congruence.algebra, self.algebra, np.array(self.map)
        if q[A.bottom] != Q.bottom or q[A.top] != Q.top:
            return Verdict.fail({"op": "bounds"}, "bounds not preserved")
        for name in ("meet", "join", "implies"):
            bad = np.argwhere(q[getattr(A, name)] != getattr(Q, name)[q[:, None], q[None, :]])
            if bad.size:
                a, b = bad[0]
                return Verdict.fail({"op": name, "x": A.labels[a], "y": A.labels[b]}, f"{name} not preserved")
        return Verdict.ok()


def filter_congruence(algebra: HeytingAlgebra, y: PrimeFilter) -> Congruence:
    """a θ_y b iff a∧g = b∧g, g the generator of y."""
    return Congruence.from_keys(algebra, [int(algebra.meet[a, y.generator]) for a in algebra.elements])


def quotient_by_filter(algebra: HeytingAlgebra, y: PrimeFilter) -> Quotient:
    """A/θ_y, checked to be a homomorphic image of A."""
    quotient = filter_congruence(algebra, y).quotient(f"{algebra.name or 'A'}/↑{algebra.labels[y.generator]}")
    quotient.check_homomorphism().or_raise("quotient-homomorphism")
    return quotient


def central_congruence(algebra: HeytingAlgebra, c: int) -> Congruence:
    """a θ_c b iff a∧c = b∧c for a central element c."""
    complement(algebra, c)
    congruence = Congruence.from_keys(algebra, [int(algebra.meet[a, c]) for a in algebra.elements])
    congruence.is_compatible(supplement=algebra.is_supplemented).or_raise("central-congruence-compatible")
    return congruence


# ============= Subdirect embedding =============

@dataclass(frozen=True, eq=False)
class SubdirectEmbedding:
    """a ↦ (a/θ_y)_y into the product of the quotients over Y."""

    space: MinSpace
    quotients: Tuple[Quotient, ...]
    images: Tuple[Tuple[int, ...], ...]

    @property
    def factors(self) -> List[HeytingAlgebra]:
        return [q.algebra for q in self.quotients]


def subdirect_embed(algebra: HeytingAlgebra, space: Optional[MinSpace] = None) -> SubdirectEmbedding:
    """
    Embed A into the product of its quotients over Y. The quotients must be finitely subdirectly
    irreducible, the map injective and each coordinate onto; central supplements must go to
    indicator sections.
    """
    space = space or min_space(algebra)
    quotients = tuple(quotient_by_filter(algebra, y) for y in space.filters)
    for y, q in zip(space.filters, quotients):
        if not q.algebra.is_fsi():
            raise InvariantBreach("quotient-fsi", {"y": "↑" + algebra.labels[y.generator]})
    images = tuple(tuple(q.map[a] for q in quotients) for a in algebra.elements)
    if len(set(images)) != algebra.size:
        raise InvariantBreach("subdirect-injective", {"algebra": algebra.name})
    for k, q in enumerate(quotients):
        if {image[k] for image in images} != set(q.algebra.elements):
            raise InvariantBreach("subdirect-surjective", {"coordinate": k})
    if algebra.is_supplemented:
        central = center(algebra)
        for a in algebra.elements:
            s = int(algebra.supplement[a])
            if not central[s]:
                continue
            expected = tuple(
                q.algebra.top if image < q.algebra.top else q.algebra.bottom
                for q, image in zip(quotients, images[a])
            )
            if images[s] != expected:
                raise InvariantBreach("subdirect-central-supplement", {"a": algebra.labels[a]})
    return SubdirectEmbedding(space, quotients, images)


def coregular_minspace_duality(algebra: HeytingAlgebra) -> Verdict:
    """CoRg(A) is isomorphic to the powerset of Y via a ↦ {y : a ∈ y}."""
    space = min_space(algebra)
    coregular = sorted(set(algebra.supplement.tolist()))
    if len(coregular) != 2 ** space.size:
        return Verdict.fail({"coregular": len(coregular), "points": space.size}, "|CoRg| is not 2^|Y|")
    image = {a: space.points_containing(a) for a in coregular}
    if len(set(image.values())) != len(coregular):
        return Verdict.fail({"coregular": algebra.names(coregular)}, "map to subsets of Y is not injective")
    for a in coregular:
        for b in coregular:
            if bool(algebra.leq[a, b]) != bitsets.is_subset(image[a], image[b]):
                return Verdict.fail({"x": algebra.labels[a], "y": algebra.labels[b]}, "order not preserved")
    return Verdict.ok()
