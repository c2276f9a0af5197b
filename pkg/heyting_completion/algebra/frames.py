"""
Polarities, Heyting frames and their Galois-closed sets.

The hyper-MacNeille completion A⁺ is the closed-set algebra of the frame W_A
on A×A, where (s,a) N (t,b) iff s∨t∨(a→b) = 1.
"""
import logging
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import List, Optional, Tuple

import numpy as np
from bitarray import frozenbitarray as fbarray

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import FrameAxiomViolation, InputError, InvariantBreach, ResourceLimit
from ..utils import bitsets
from .extension import (
    ExtensionAlgebra,
    build_extension,
    distinguished_sublattices,
    embedding_properties,
    indicator_sections,
)
from .lattice import (
    HEYTING,
    HeytingAlgebra,
    build_indexed,
    center,
    check_center_complete,
    check_invariants,
    is_centrally_supplemented,
    is_isomorphic,
    restrict,
)
from .macneille import dm_completion
from .verdict import Verdict

log = logging.getLogger(__name__)


# ============= Polarity =============

@dataclass(frozen=True, eq=False)
class Polarity:
    """Relation N between W0 and W1; relation[w, u] iff w N u."""

    relation: np.ndarray
    w0_labels: Tuple[str, ...] = ()
    w1_labels: Tuple[str, ...] = ()

    def __post_init__(self):
        relation = np.array(self.relation, dtype=bool)
        relation.flags.writeable = False
        object.__setattr__(self, "relation", relation)

    @property
    def w0_size(self) -> int:
        return self.relation.shape[0]

    @property
    def w1_size(self) -> int:
        return self.relation.shape[1]

    def upper(self, mask: np.ndarray) -> np.ndarray:
        """U(X) = {u : w N u for all w in X}."""
        return self.relation[np.asarray(mask, dtype=bool)].all(axis=0)

    def lower(self, mask: np.ndarray) -> np.ndarray:
        """L(U) = {w : w N u for all u in U}."""
        return self.relation[:, np.asarray(mask, dtype=bool)].all(axis=1)

    def closure(self, mask: np.ndarray) -> np.ndarray:
        """L(U(X))."""
        return self.lower(self.upper(mask))


def galois(polarity: Polarity, subset: fbarray) -> Tuple[fbarray, fbarray]:
    """(U(X), L(U(X))) for X ⊆ W0."""
    mask = np.array(subset.tolist(), dtype=bool)
    upper = polarity.upper(mask)
    return bitsets.from_mask(upper), bitsets.from_mask(polarity.lower(upper))


def check_closure_operator(polarity: Polarity, settings: Settings = DEFAULT_SETTINGS) -> Verdict:
    """L∘U is extensive, idempotent and monotone (on every subset when W0 is small)."""
    n = polarity.w0_size
    if n <= settings.closure_exhaustive_limit:
        subsets = (np.array([(mask >> i) & 1 for i in range(n)], dtype=bool) for mask in range(2 ** n))
    else:
        rng = np.random.default_rng(settings.seed)
        subsets = (rng.random(n) < rng.random() for _ in range(settings.sample_count))
    for mask in subsets:
        closed = polarity.closure(mask)
        witness = {"subset": [polarity.w0_labels[i] if polarity.w0_labels else int(i) for i in np.flatnonzero(mask)]}
        if (mask & ~closed).any():
            return Verdict.fail(witness, "closure is not extensive")
        if (polarity.closure(closed) != closed).any():
            return Verdict.fail(witness, "closure is not idempotent")
        for w in np.flatnonzero(~mask):
            bigger = mask.copy()
            bigger[w] = True
            if (closed & ~polarity.closure(bigger)).any():
                return Verdict.fail(witness, "closure is not monotone")
    return Verdict.ok()


# ============= Closed sets =============

@dataclass(frozen=True, eq=False)
class ClosedSetLattice:
    """Galois-closed subsets of W0 ordered by inclusion, as an algebra."""

    polarity: Polarity
    sets: Tuple[fbarray, ...]       # closed set of each element of `algebra`
    algebra: HeytingAlgebra

    def index(self, closed: fbarray) -> int:
        return self.sets.index(closed)


def closed_sets(polarity: Polarity, settings: Settings = DEFAULT_SETTINGS, name: str = "") -> ClosedSetLattice:
    """
    Close the principal sets L({u}) under intersection, together with W0.
    Meets are intersections and joins are L∘U of unions.
    """
    n = polarity.w0_size
    generators = sorted({bitsets.from_mask(polarity.relation[:, u]) for u in range(polarity.w1_size)},
                        key=lambda bits: bits.to01())
    found = {bitsets.full(n)}
    frontier = [bitsets.full(n)]
    while frontier:
        fresh = []
        for current in frontier:
            for generator in generators:
                meet = current & generator
                if meet not in found:
                    found.add(meet)
                    fresh.append(meet)
                    if len(found) > settings.max_closed_sets:
                        raise ResourceLimit("max_closed_sets", settings.max_closed_sets)
        frontier = fresh
    listed = sorted(found, key=lambda bits: (bits.count(), bits.to01()))
    stacked = np.array([bits.tolist() for bits in listed], dtype=bool).reshape(len(listed), n)
    order = ~(stacked[:, None, :] & ~stacked[None, :, :]).any(axis=2)
    labels = [f"C{k}" for k in range(len(listed))]
    algebra, origin = build_indexed(order, HEYTING, labels, name)
    sets = tuple(listed[k] for k in origin)
    lattice = ClosedSetLattice(polarity, sets, algebra)
    log.debug("%s: %d closed sets over |W0|=%d", name or "polarity", len(sets), n)

    position = {bits: k for k, bits in enumerate(sets)}
    rng = np.random.default_rng(settings.seed)
    size = len(sets)
    if size * size <= settings.sample_count * 16:
        pairs = [(i, j) for i in range(size) for j in range(size)]
    else:
        pairs = [tuple(pair) for pair in rng.integers(0, size, size=(settings.sample_count, 2))]
    for i, j in pairs:
        if position.get(sets[i] & sets[j]) != algebra.meet[i, j]:
            raise InvariantBreach("closed-meet-is-intersection", {"x": int(i), "y": int(j)})
        union = np.array((sets[i] | sets[j]).tolist(), dtype=bool)
        if position.get(bitsets.from_mask(polarity.closure(union))) != algebra.join[i, j]:
            raise InvariantBreach("closed-join-is-closure-of-union", {"x": int(i), "y": int(j)})
    return lattice


# ============= Heyting frames =============

@dataclass(frozen=True, eq=False)
class HeytingFrame:
    """Polarity with a monoid (compose, unit) on W0 and an action W0×W1 -> W1."""

    polarity: Polarity
    compose: np.ndarray
    unit: int
    action: np.ndarray
    name: str = ""


def check_frame_axioms(frame: HeytingFrame, settings: Settings = DEFAULT_SETTINGS) -> Verdict:
    """
    (1) w∘v N u iff v N w⇝u; (2) w∘w N u implies w N u;
    (3) ε N u implies w N u; (4) w∘v N u implies v∘w N u.
    Every w is checked up to the exhaustive limit, a sample beyond it.
    """
    N = frame.polarity.relation
    compose, action = frame.compose, frame.action
    size = frame.polarity.w0_size
    everything = np.arange(size)
    labels = frame.polarity.w0_labels or tuple(str(i) for i in range(size))
    w1_labels = frame.polarity.w1_labels or tuple(str(i) for i in range(frame.polarity.w1_size))

    bad = np.argwhere(N[compose[everything, everything]] & ~N)
    if bad.size:
        w, u = bad[0]
        return Verdict.fail({"w": labels[w], "u": w1_labels[u]}, "axiom 2 fails", axiom=2)
    bad = np.argwhere(N[frame.unit][None, :] & ~N)
    if bad.size:
        w, u = bad[0]
        return Verdict.fail({"w": labels[w], "u": w1_labels[u]}, "axiom 3 fails", axiom=3)

    if size <= settings.frame_axiom_exhaustive_limit:
        chosen = everything
    else:
        rng = np.random.default_rng(settings.seed)
        chosen = np.sort(rng.choice(size, size=min(size, settings.sample_count), replace=False))
    for w in chosen:
        left = N[compose[w]]
        right = N[everything[:, None], action[w][None, :]]
        bad = np.argwhere(left != right)
        if bad.size:
            v, u = bad[0]
            return Verdict.fail({"w": labels[w], "v": labels[v], "u": w1_labels[u]}, "axiom 1 fails", axiom=1)
        bad = np.argwhere(left & ~N[compose[:, w]])
        if bad.size:
            v, u = bad[0]
            return Verdict.fail({"w": labels[w], "v": labels[v], "u": w1_labels[u]}, "axiom 4 fails", axiom=4)
    return Verdict.ok(exhaustive=len(chosen) == size)


def require_frame_axioms(frame: HeytingFrame, settings: Settings = DEFAULT_SETTINGS) -> HeytingFrame:
    """Raise FrameAxiomViolation on the first failing axiom."""
    verdict = check_frame_axioms(frame, settings)
    if not verdict.holds:
        raise FrameAxiomViolation(verdict.extra["axiom"], verdict.witness)
    return frame


def frame_algebra(frame: HeytingFrame, settings: Settings = DEFAULT_SETTINGS) -> ClosedSetLattice:
    """
    Closed sets of a Heyting frame with X → Y = {w : v∘w ∈ Y for all v ∈ X},
    checked against the implication derived from the order.
    """
    require_frame_axioms(frame, settings)
    lattice = closed_sets(frame.polarity, settings, frame.name and f"{frame.name}⁺")
    algebra = lattice.algebra
    position = {bits: k for k, bits in enumerate(lattice.sets)}
    masks = [np.array(bits.tolist(), dtype=bool) for bits in lattice.sets]
    for i, x in enumerate(masks):
        image = frame.compose[np.flatnonzero(x)]
        for j, y in enumerate(masks):
            arrow = y[image].all(axis=0) if image.size else np.ones(len(y), dtype=bool)
            if position.get(bitsets.from_mask(arrow)) != algebra.implies[i, j]:
                raise InvariantBreach("frame-implication", {"x": algebra.labels[i], "y": algebra.labels[j]})
    check_invariants(algebra).or_raise("frame-algebra-invariants")
    return lattice


def macneille_frame(algebra: HeytingAlgebra, settings: Settings = DEFAULT_SETTINGS) -> HeytingFrame:
    """(A, A, ≤, ∧, 1, →)."""
    frame = HeytingFrame(
        Polarity(algebra.leq, algebra.labels, algebra.labels),
        compose=np.array(algebra.meet),
        unit=algebra.top,
        action=np.array(algebra.implies),
        name=f"M({algebra.name})",
    )
    return require_frame_axioms(frame, settings)


def pair_labels(algebra: HeytingAlgebra) -> Tuple[str, ...]:
    """Labels "(s,a)" of A×A in storage order."""
    return tuple(f"({s},{a})" for s in algebra.labels for a in algebra.labels)


def hyper_relation(algebra: HeytingAlgebra) -> np.ndarray:
    """N on A×A, with (s,a) stored at s*n + a."""
    n = algebra.size
    s = np.repeat(np.arange(n), n)
    a = np.tile(np.arange(n), n)
    joined = algebra.join[s[:, None], s[None, :]]
    return algebra.join[joined, algebra.implies[a[:, None], a[None, :]]] == algebra.top


def hyper_frame(algebra: HeytingAlgebra, settings: Settings = DEFAULT_SETTINGS) -> HeytingFrame:
    """W_A: (s,a)∘(t,b) = (s∨t, a∧b), unit (0,1), (s,a)⇝(t,b) = (s∨t, a→b)."""
    n = algebra.size
    s = np.repeat(np.arange(n), n)
    a = np.tile(np.arange(n), n)
    outer_s = algebra.join[s[:, None], s[None, :]] * n
    labels = pair_labels(algebra)
    frame = HeytingFrame(
        Polarity(hyper_relation(algebra), labels, labels),
        compose=outer_s + algebra.meet[a[:, None], a[None, :]],
        unit=algebra.bottom * n + algebra.top,
        action=outer_s + algebra.implies[a[:, None], a[None, :]],
        name=f"W({algebra.name})",
    )
    return require_frame_axioms(frame, settings)


def relation_matrix(polarity: Polarity) -> List[List[int]]:
    """N as 0/1 rows for dumping."""
    return polarity.relation.astype(int).tolist()


# ============= Δ : S(A) -> A⁺ =============

@dataclass(frozen=True, eq=False)
class DeltaIsomorphism:
    """Δ: S(A) -> A⁺ with its source and target."""

    extension: ExtensionAlgebra
    completion: ClosedSetLattice
    mapping: Tuple[int, ...]        # element of S(A) -> element of A⁺


def delta_iso(extension: ExtensionAlgebra, completion: Optional[ClosedSetLattice] = None,
              settings: Settings = DEFAULT_SETTINGS) -> DeltaIsomorphism:
    """
    Δ(u) = {(s,a) : f(s,a) <= u}; checked to be an order isomorphism onto the
    closed sets, and (s,a) N (t,b) iff f(s,a) <= g(t,b) pointwise.
    """
    A, S = extension.base, extension.algebra
    completion = completion or frame_algebra(hyper_frame(A, settings), settings)
    f_index = np.empty(A.size * A.size, dtype=np.int64)
    g_index = np.empty(A.size * A.size, dtype=np.int64)
    for s in A.elements:
        for a in A.elements:
            f, g = indicator_sections(extension, s, a)
            f_index[s * A.size + a] = extension.element(f)
            g_index[s * A.size + a] = extension.element(g)

    N = completion.polarity.relation
    mismatch = np.argwhere(S.leq[f_index[:, None], g_index[None, :]] != N)
    if mismatch.size:
        w, u = mismatch[0]
        labels = completion.polarity.w0_labels
        raise InvariantBreach("polarity-matches-sections", {"w": labels[w], "u": labels[u]})

    position = {bits: k for k, bits in enumerate(completion.sets)}
    mapping = []
    for u in S.elements:
        image = position.get(bitsets.from_mask(S.leq[f_index, u]))
        if image is None:
            raise InvariantBreach("delta-closed", {"u": S.labels[u]})
        mapping.append(image)
    if len(set(mapping)) != S.size or S.size != completion.algebra.size:
        raise InvariantBreach("delta-bijective", {"S": S.size, "closed": completion.algebra.size})
    target = completion.algebra
    for u in S.elements:
        for v in S.elements:
            if S.leq[u, v] != target.leq[mapping[u], mapping[v]]:
                raise InvariantBreach("delta-order-embedding", {"x": S.labels[u], "y": S.labels[v]})
    return DeltaIsomorphism(extension, completion, tuple(mapping))


# ============= Truncated free-monoid frame =============

def _words(letters: int, length: int) -> List[Tuple[int, ...]]:
    words: List[Tuple[int, ...]] = []
    for k in range(length + 1):
        words.extend(combinations_with_replacement(range(letters), k))
    return words


def truncated_collapse_check(algebra: HeytingAlgebra, length: int,
                             settings: Settings = DEFAULT_SETTINGS) -> Verdict:
    """
    Words of length <= `length` over A×A, paired with an element of A, map
    onto W_A by (h,a) ↦ (h*, a) with h* the join of x→y over the letters.
    Checks surjectivity, Q = N along the map, that the closed-set lattices
    agree and that b ↦ L(ε, b) embeds A.
    """
    if length < 1:
        raise InputError(f"word length must be at least 1, got {length}")
    n = algebra.size
    letters = [(x, y) for x in algebra.elements for y in algebra.elements]
    words = _words(len(letters), length)
    stars = np.array([algebra.join_all(int(algebra.implies[letters[i]]) for i in word) for word in words],
                     dtype=np.int64)
    word_of = np.repeat(np.arange(len(words)), n)
    element_of = np.tile(np.arange(n), len(words))
    star_of = stars[word_of]
    collapsed = star_of * n + element_of

    if len(set(collapsed.tolist())) != n * n:
        return Verdict.fail({"image": len(set(collapsed.tolist())), "target": n * n}, "collapse map is not onto W_A")

    N = hyper_relation(algebra)
    # one column per distinct (g*, b); duplicate columns do not change the closure
    keys = sorted(set(collapsed.tolist()))
    columns = np.empty((len(collapsed), len(keys)), dtype=bool)
    for j, key in enumerate(keys):
        g_star, b = divmod(key, n)
        columns[:, j] = algebra.join[algebra.join[star_of, g_star], algebra.implies[element_of, b]] == algebra.top
        if (columns[:, j] != N[collapsed, key]).any():
            k = int(np.flatnonzero(columns[:, j] != N[collapsed, key])[0])
            return Verdict.fail({"word": list(words[word_of[k]]), "a": algebra.labels[element_of[k]],
                                 "column": key}, "Q differs from N along the collapse map")
    v_polarity = Polarity(columns)
    v_closed = closed_sets(v_polarity, settings, f"V{length}({algebra.name})")
    w_closed = closed_sets(Polarity(N), settings, f"W({algebra.name})")
    if not is_isomorphic(v_closed.algebra, w_closed.algebra):
        return Verdict.fail({"V": v_closed.algebra.size, "W": w_closed.algebra.size},
                            "closed-set lattices differ")

    # α(b) = L(ε, b); the empty word is words[0]
    position = {bits: k for k, bits in enumerate(v_closed.sets)}
    alpha = []
    for b in algebra.elements:
        column = algebra.join[star_of, algebra.implies[element_of, b]] == algebra.top
        image = position.get(bitsets.from_mask(column))
        if image is None:
            return Verdict.fail({"b": algebra.labels[b]}, "α(b) is not closed")
        alpha.append(image)
    V = v_closed.algebra
    h = np.array(alpha)
    if len(set(alpha)) != n or h[algebra.bottom] != V.bottom or h[algebra.top] != V.top:
        return Verdict.fail({"alpha": [V.labels[k] for k in alpha]}, "α is not an injective bounded map")
    for op in ("meet", "join", "implies"):
        bad = np.argwhere(h[getattr(algebra, op)] != getattr(V, op)[h[:, None], h[None, :]])
        if bad.size:
            x, y = bad[0]
            return Verdict.fail({"op": op, "x": algebra.labels[x], "y": algebra.labels[y]}, f"α does not preserve {op}")
    return Verdict.ok(words=len(words), closed=V.size)


# ============= Completion and the theorem suite =============

def hyper_completion(algebra: HeytingAlgebra, settings: Settings = DEFAULT_SETTINGS,
                     extension: Optional[ExtensionAlgebra] = None) -> HeytingAlgebra:
    """
    A⁺ through W_A when |A| is within frame_size_limit, otherwise as the
    MacNeille completion of S(A).
    """
    if algebra.size <= settings.frame_size_limit:
        return frame_algebra(hyper_frame(algebra, settings), settings).algebra
    extension = extension or build_extension(algebra, settings, verify=False)
    return dm_completion(extension.algebra).algebra


def theorem_j_suite(algebra: HeytingAlgebra, settings: Settings = DEFAULT_SETTINGS) -> List[Tuple[str, Verdict]]:
    """The finitely checkable properties of A⁺, one verdict per item."""
    extension = build_extension(algebra, settings)
    S = extension.algebra
    frame = hyper_frame(algebra, settings) if algebra.size <= settings.frame_size_limit else None
    if frame is not None:
        completion = frame_algebra(frame, settings)
        delta = delta_iso(extension, completion, settings).mapping
        plus = completion.algebra
    else:
        mac = dm_completion(S)
        plus, delta = mac.algebra, mac.embedding
    cs = is_centrally_supplemented(algebra).holds
    same_as_base = is_isomorphic(plus, algebra)
    results: List[Tuple[str, Verdict]] = []

    def record(item: str, holds: bool, witness=None, detail: str = ""):
        results.append((item, Verdict(holds, None if holds else witness, "" if holds else detail)))

    invariants = check_invariants(plus)
    record("1 A⁺ is a Heyting algebra", invariants.holds and plus.distributive, invariants.witness, invariants.detail)
    plus_cs = is_centrally_supplemented(plus)
    record("2 A⁺ is centrally supplemented", plus_cs.holds, plus_cs.witness, plus_cs.detail)
    record("3 centrally supplemented A has A⁺ ≅ A", not cs or same_as_base, {"algebra": algebra.name},
           "A is centrally supplemented but A⁺ differs")
    record("4 fsi A has A⁺ ≅ A", not algebra.is_fsi() or same_as_base, {"algebra": algebra.name},
           "A is fsi but A⁺ differs")
    plus_plus = hyper_completion(plus, settings)
    record("5 A⁺⁺ ≅ A⁺", is_isomorphic(plus_plus, plus), {"sizes": [plus.size, plus_plus.size]},
           "completion is not idempotent")
    complete = check_center_complete(plus)
    record("6 centre of A⁺ is complete", complete.holds, complete.witness, complete.detail)
    properties = embedding_properties(extension, settings)
    record("7 regular iff externally distributive", properties.regular == properties.externally_distributive,
           properties._asdict(), "regularity and external distributivity disagree")
    record("8 A ≤ A⁺ is essential", properties.essential, properties._asdict(), "embedding is not essential")
    sup = algebra.supplement
    central = center(algebra)
    preserved = all(
        plus.supplement[delta[extension.image[a]]] == delta[extension.image[sup[a]]]
        for a in algebra.elements if central[int(sup[a])]
    )
    record("9 central supplements are preserved", preserved, {"algebra": algebra.name},
           "a central supplement is not preserved")
    plus_of_s = hyper_completion(S, settings)
    record("10 A⁺ ≅ S(A)⁺", is_isomorphic(plus, plus_of_s), {"sizes": [plus.size, plus_of_s.size]},
           "completions of A and S(A) differ")
    boolean = distinguished_sublattices(extension).boolean
    plus_center, _ = restrict(plus, bitsets.member_list(center(plus)))
    closure_of_d, _ = restrict(S, bitsets.member_list(boolean))
    record("11-12 Z(A⁺) ≅ Boolean closure of D(A)", is_isomorphic(plus_center, closure_of_d),
           {"sizes": [plus_center.size, closure_of_d.size]}, "centre differs from the Boolean closure")
    record("13 A⁺ = A iff centrally supplemented", same_as_base == cs,
           {"isomorphic": same_as_base, "centrally_supplemented": cs}, "fixpoint and central supplement disagree")
    return results
