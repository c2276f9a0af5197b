"""
The centrally supplemented extension S(A) inside the product of the quotients
A_y, its distinguished subsets, normal forms, co-annihilators, S-homomorphisms
and the unique extension of an S-homomorphism to S(A).
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np
from bitarray import frozenbitarray as fbarray

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import (
    InvariantBreach,
    NotAHomomorphism,
    NotCentrallySupplemented,
    NotSHom,
    ResourceLimit,
)
from ..utils import bitsets
from .duality import Congruence, SubdirectEmbedding, prime_filters, subdirect_embed
from .lattice import (
    HeytingAlgebra,
    center,
    center_atoms,
    is_centrally_supplemented,
    is_isomorphic,
    restrict,
)
from .sections import ProductAlgebra, Section
from .verdict import Verdict

log = logging.getLogger(__name__)


# ============= S(A) =============

@dataclass(frozen=True, eq=False)
class ExtensionAlgebra:
    """S(A) with its ambient product and the embedding of A."""

    base: HeytingAlgebra
    embedding: SubdirectEmbedding
    product: ProductAlgebra
    algebra: HeytingAlgebra
    codes: Tuple[int, ...]          # product code of each element of `algebra`
    image: Tuple[int, ...]          # element of `algebra` for each element of `base`

    @cached_property
    def position(self) -> Dict[int, int]:
        return {code: k for k, code in enumerate(self.codes)}

    def section(self, u: int) -> Section:
        """Coordinates of u over Y."""
        return self.product.decode(self.codes[u])

    def element(self, section: Sequence[int]) -> int:
        """Element of S(A) with the given section; KeyError if it is not in S(A)."""
        return self.position[self.product.encode(section)]

    def element_of_code(self, code: int) -> int:
        return self.position[int(code)]

    @property
    def size(self) -> int:
        return self.algebra.size


def build_extension(algebra: HeytingAlgebra, settings: Settings = DEFAULT_SETTINGS,
                    verify: bool = True) -> ExtensionAlgebra:
    """
    Close the image of A under ∧, ∨, → and the product supplement.
    With `verify`, also checks that the result is centrally supplemented,
    fills the whole product and is its own extension.
    """
    embedding = subdirect_embed(algebra)
    product = ProductAlgebra(tuple(embedding.factors), tuple(embedding.space.labels()))
    carrier = np.unique([product.encode(image) for image in embedding.images])
    rounds = 0
    while True:
        grid = (carrier[:, None], carrier[None, :])
        produced = np.concatenate([
            product.meet(*grid).ravel(),
            product.join(*grid).ravel(),
            product.implies(*grid).ravel(),
            product.supplement(carrier),
        ])
        grown = np.union1d(carrier, produced)
        if len(grown) > settings.max_carrier:
            raise ResourceLimit("max_carrier", settings.max_carrier)
        rounds += 1
        if len(grown) == len(carrier):
            break
        carrier = grown
    log.debug("S(%s): %d sections after %d rounds", algebra.name, len(carrier), rounds)

    name = f"S({algebra.name})" if algebra.name else "S(A)"
    built, codes = product.as_algebra(carrier, name)
    position = {code: k for k, code in enumerate(codes)}
    image = tuple(position[product.encode(img)] for img in embedding.images)
    extension = ExtensionAlgebra(algebra, embedding, product, built, tuple(codes), image)

    expected = product.supplement(np.array(codes))
    if [position[int(c)] for c in expected] != built.supplement.tolist():
        raise InvariantBreach("extension-supplement", {"algebra": name})
    if verify:
        is_centrally_supplemented(built).or_raise("extension-centrally-supplemented")
        if len(codes) != product.size:
            raise InvariantBreach("finite-minimum-collapse", {"carrier": len(codes), "product": product.size})
        again = build_extension(built, settings, verify=False)
        if not is_isomorphic(again.algebra, built):
            raise InvariantBreach("extension-idempotent", {"algebra": name})
    return extension


def indicator_sections(extension: ExtensionAlgebra, s: int, a: int) -> Tuple[Section, Section]:
    """f(s,a) = a∧ind_(s<1) and g(s,a) = (a∧ind_(s<1)) ∨ ind_(s=1), as sections."""
    product = extension.product
    s_digits = product.digits(product.encode(extension.embedding.images[s]))
    a_digits = product.digits(product.encode(extension.embedding.images[a]))
    below = s_digits < product.radix - 1
    f = np.where(below, a_digits, 0)
    g = np.where(below, a_digits, product.radix - 1)
    return tuple(int(v) for v in f), tuple(int(v) for v in g)


def check_density(extension: ExtensionAlgebra) -> Verdict:
    """The f(s,a) are join-dense and the g(t,b) meet-dense in S(A)."""
    S = extension.algebra
    pairs = [(s, a) for s in extension.base.elements for a in extension.base.elements]
    fs, gs = set(), set()
    for s, a in pairs:
        f, g = indicator_sections(extension, s, a)
        fs.add(extension.element(f))
        gs.add(extension.element(g))
    for u in S.elements:
        if S.join_all(f for f in fs if S.leq[f, u]) != u:
            return Verdict.fail({"u": S.labels[u]}, "u is not a join of f-sections")
        if S.meet_all(g for g in gs if S.leq[u, g]) != u:
            return Verdict.fail({"u": S.labels[u]}, "u is not a meet of g-sections")
    return Verdict.ok()


# ============= Distinguished subsets =============

class Distinguished(NamedTuple):
    """D(A) and the Boolean algebra it generates, as bitsets over S(A)."""

    lattice: fbarray      # D(A) = {ind_(a=1)}
    boolean: fbarray      # Boolean closure of D(A) in the centre


def _ind_top(extension: ExtensionAlgebra, a: int) -> int:
    product = extension.product
    digits = product.digits(product.encode(extension.embedding.images[a]))
    return extension.element_of_code(int(product.indicator(digits == product.radix - 1)))


def distinguished_sublattices(extension: ExtensionAlgebra) -> Distinguished:
    """
    D(A) = {ind_(a=1) : a in A}, checked to be a bounded sublattice of the centre of S(A), with
    B(A) the Boolean subalgebra it generates.
    """
    S = extension.algebra
    members = sorted({_ind_top(extension, a) for a in extension.base.elements})
    mask = np.zeros(S.size, dtype=bool)
    mask[members] = True
    if not (mask[S.bottom] and mask[S.top]):
        raise InvariantBreach("D-bounds", S.names(members))
    if not (mask[S.meet[np.ix_(members, members)]].all() and mask[S.join[np.ix_(members, members)]].all()):
        raise InvariantBreach("D-sublattice", S.names(members))
    central = center(S)
    lattice = bitsets.from_mask(mask)
    if not bitsets.is_subset(lattice, central):
        raise InvariantBreach("D-central", S.names(members))

    closed = set(members)
    while True:
        items = sorted(closed)
        grown = closed | {int(S.supplement[x]) for x in items}
        grown |= {int(S.meet[x, y]) for x in items for y in items}
        grown |= {int(S.join[x, y]) for x in items for y in items}
        if grown == closed:
            break
        closed = grown
    boolean = bitsets.from_indices(closed, S.size)
    if boolean != central:
        raise InvariantBreach("B-equals-centre", {"B": S.names(boolean), "centre": S.names(central)})
    return Distinguished(lattice, boolean)


# ============= Normal forms =============

class NormalForm(NamedTuple):
    """u = ⋁ coefficients[i] ∧ blocks[i]."""

    blocks: Tuple[int, ...]          # central elements of S(A) forming a partition of unity
    coefficients: Tuple[int, ...]    # elements of A


def normal_form(extension: ExtensionAlgebra, u: int) -> NormalForm:
    """
    u = ⋁ a_i ∧ e_i. Elements of A get the single block ⊤; anything else is
    split along the points of Y with the least-index coefficient per point,
    merging points whose coefficients coincide.
    """
    S, A = extension.algebra, extension.base
    if u in extension.image:
        form = NormalForm((S.top,), (extension.image.index(u),))
    else:
        section = extension.section(u)
        grouped: Dict[int, List[int]] = {}
        for k, value in enumerate(section):
            coefficient = next(a for a in A.elements if extension.embedding.images[a][k] == value)
            grouped.setdefault(coefficient, []).append(k)
        blocks, coefficients = [], []
        for coefficient, points in grouped.items():
            blocks.append(S.join_all(extension.element_of_code(extension.product.singleton(k)) for k in points))
            coefficients.append(coefficient)
        form = NormalForm(tuple(blocks), tuple(coefficients))

    central = center(S)
    if not all(central[e] and e != S.bottom for e in form.blocks):
        raise InvariantBreach("normal-form-central", S.names(form.blocks))
    for e, f in combinations(form.blocks, 2):
        if S.meet[e, f] != S.bottom:
            raise InvariantBreach("normal-form-disjoint", S.names([e, f]))
    if S.join_all(form.blocks) != S.top:
        raise InvariantBreach("normal-form-unity", S.names(form.blocks))
    value = S.join_all(int(S.meet[extension.image[a], e]) for a, e in zip(form.coefficients, form.blocks))
    if value != u:
        raise InvariantBreach("normal-form-value", {"u": S.labels[u], "got": S.labels[value]})
    return form


# ============= ψ and θ_A =============

@dataclass(frozen=True, eq=False)
class PsiReport:
    """ψ: A -> Z(S(A)) and the congruence it induces on A."""

    psi: Tuple[int, ...]            # ψ(a) = ind_(a=1) as an element of S(A)
    theta: Congruence               # a θ_A b iff a and b have the same co-annihilator


def co_join_congruence(algebra: HeytingAlgebra) -> Congruence:
    """θ_A: a∨c = 1 iff b∨c = 1 for every c."""
    return Congruence.from_keys(algebra, [(algebra.join[a] == algebra.top).tobytes() for a in algebra.elements])


def psi_and_thetaA(extension: ExtensionAlgebra) -> PsiReport:
    """ψ(a) = ind_(a=1) is a lattice map into the centre of S(A) whose kernel is θ_A."""
    A, S = extension.base, extension.algebra
    psi = tuple(_ind_top(extension, a) for a in A.elements)
    check_lattice_map(A, S, psi)
    central = center(S)
    if not all(central[p] for p in psi):
        raise InvariantBreach("psi-central", S.names(psi))
    theta = co_join_congruence(A)
    kernel = Congruence.from_keys(A, psi)
    if kernel.classes != theta.classes:
        raise InvariantBreach("psi-kernel", {"kernel": [A.names(b) for b in kernel.blocks],
                                             "theta": [A.names(b) for b in theta.blocks]})
    lattice_part, _ = restrict(S, sorted(set(psi)), name="D(A)")
    if not is_isomorphic(theta.quotient("A/θ_A").algebra, lattice_part):
        raise InvariantBreach("psi-quotient-iso", {"algebra": A.name})
    return PsiReport(psi, theta)


# ============= Co-annihilators and S-homomorphisms =============

def co_annihilator(algebra: HeytingAlgebra, a: int) -> fbarray:
    """a^⊤ = {b : a∨b = 1}; equal to ↑a⁺ when a has a supplement."""
    polar = bitsets.from_mask(algebra.join[a] == algebra.top)
    s = int(algebra.supplement[a])
    if s >= 0 and polar != algebra.up(s):
        raise InvariantBreach("co-annihilator-principal", {"a": algebra.labels[a]})
    return polar


def check_lattice_map(source: HeytingAlgebra, target: HeytingAlgebra, images: Sequence[int]):
    """Raise NotAHomomorphism unless the map preserves ∧, ∨ and the bounds."""
    h = np.asarray(images, dtype=np.int64)
    if len(h) != source.size:
        raise NotAHomomorphism(f"map has {len(h)} images for {source.size} elements", {"op": "domain"})
    if h[source.bottom] != target.bottom or h[source.top] != target.top:
        raise NotAHomomorphism("bounds not preserved", {"op": "bounds"})
    for op in ("meet", "join"):
        bad = np.argwhere(h[getattr(source, op)] != getattr(target, op)[h[:, None], h[None, :]])
        if bad.size:
            a, b = bad[0]
            raise NotAHomomorphism(f"{op} not preserved",
                                   {"op": op, "x": source.labels[a], "y": source.labels[b]})


def is_S_homomorphism(source: HeytingAlgebra, target: HeytingAlgebra, images: Sequence[int]) -> Verdict:
    """a^⊤ = b^⊤ implies h(a)^⊤ = h(b)^⊤."""
    check_lattice_map(source, target, images)
    source_keys = [(source.join[a] == source.top).tobytes() for a in source.elements]
    target_keys = [(target.join[images[a]] == target.top).tobytes() for a in source.elements]
    for a in source.elements:
        for b in range(a + 1, source.size):
            if source_keys[a] == source_keys[b] and target_keys[a] != target_keys[b]:
                return Verdict.fail({"x": source.labels[a], "y": source.labels[b]},
                                    "equal co-annihilators are not preserved")
    return Verdict.ok()


def extend_S_hom(extension: ExtensionAlgebra, target: HeytingAlgebra, images: Sequence[int]) -> Tuple[int, ...]:
    """
    The unique homomorphism S(A) -> E restricting to h on A.
    On the atom e_y of the centre: ⋀{h(a)⁺⁺ : a(y)=1} ∧ ⋀{h(a)⁺ : a(y)<1};
    elsewhere through normal forms.
    """
    A, S = extension.base, extension.algebra
    verdict = is_S_homomorphism(A, target, images)
    if not verdict.holds:
        raise NotSHom("map does not preserve equal co-annihilators", verdict.witness)
    cs = is_centrally_supplemented(target)
    if not cs.holds:
        raise NotCentrallySupplemented(f"{target.name or 'codomain'} fails the dual Stone identity", cs.witness)

    sup = target.supplement
    tops = extension.product.radix - 1
    atom_image = []
    for k in range(extension.product.width):
        value = target.top
        for a in A.elements:
            inside = extension.embedding.images[a][k] == tops[k]
            value = int(target.meet[value, sup[sup[images[a]]] if inside else sup[images[a]]])
        atom_image.append(value)

    extended = []
    for u in S.elements:
        form = normal_form(extension, u)
        value = target.bottom
        for e, a in zip(form.blocks, form.coefficients):
            points = [k for k, d in enumerate(extension.section(e)) if d == tops[k]]
            central_image = target.join_all(atom_image[k] for k in points)
            value = int(target.join[value, target.meet[images[a], central_image]])
        extended.append(value)

    h = np.array(extended, dtype=np.int64)
    check_lattice_map(S, target, extended)
    if (h[S.implies] != target.implies[h[:, None], h[None, :]]).any():
        raise InvariantBreach("extension-preserves-implies", {"target": target.name})
    if (h[S.supplement] != sup[h]).any():
        raise InvariantBreach("extension-preserves-supplement", {"target": target.name})
    for a in A.elements:
        if h[extension.image[a]] != images[a]:
            raise InvariantBreach("extension-restricts", {"a": A.labels[a]})
        # any extension preserving ⁺ sends ψ(a) = a⁺⁺ to h(a)⁺⁺, and A ∪ ψ(A) generates S(A)
        if h[_ind_top(extension, a)] != sup[sup[images[a]]]:
            raise InvariantBreach("extension-unique", {"a": A.labels[a]})
    return tuple(extended)


# ============= Embedding properties =============

class EmbeddingProperties(NamedTuple):
    """How A sits inside S(A)."""

    essential: bool
    regular: bool
    externally_distributive: bool


def _subset_bounds_agree(extension: ExtensionAlgebra, subset: Sequence[int]) -> bool:
    A, S = extension.base, extension.algebra
    image = extension.image
    return (image[A.meet_all(subset)] == S.meet_all(image[a] for a in subset)
            and image[A.join_all(subset)] == S.join_all(image[a] for a in subset))


def embedding_properties(extension: ExtensionAlgebra, settings: Settings = DEFAULT_SETTINGS) -> EmbeddingProperties:
    """
    Essentiality, regularity (existing joins and meets of A are kept, on every subset when A is
    small) and external distributivity of A ≤ S(A).
    """
    A, S = extension.base, extension.algebra
    proper_images = [extension.image[a] for a in A.elements if a != A.top]
    essential = all(
        any(S.leq[u, b] for b in proper_images) for u in S.elements if u != S.top
    )

    if A.size <= settings.regular_scan_limit:
        subsets = (
            [a for a, bit in enumerate(np.binary_repr(mask, A.size)[::-1]) if bit == "1"]
            for mask in range(1, 2 ** A.size)
        )
    else:
        rng = np.random.default_rng(settings.seed)
        subsets = (
            list(np.flatnonzero(rng.random(A.size) < 0.5))
            for _ in range(settings.sample_count)
        )
    regular = all(_subset_bounds_agree(extension, subset) for subset in subsets)

    externally_distributive = all(
        A.join[a, A.meet_all(bitsets.members(co_annihilator(A, a)))] == A.top for a in A.elements
    )
    properties = EmbeddingProperties(essential, regular, externally_distributive)
    if regular != externally_distributive:
        raise InvariantBreach("regular-iff-externally-distributive", properties._asdict())
    if not all(properties):
        raise InvariantBreach("finite-embedding-properties", properties._asdict())
    return properties


def closure_of_Y_witness(extension: ExtensionAlgebra) -> Verdict:
    """
    Over the prime filters X: ⋂{â ∪ X∖b̂ : a∨b⁺ = 1} equals Y, and the atoms
    of the centre of S(A) correspond to Y through z ↦ ↑z ∩ A.
    """
    A, S = extension.base, extension.algebra
    space = extension.embedding.space
    every = prime_filters(A)
    hat = {a: bitsets.from_mask([x.elements[a] for x in every]) for a in A.elements}
    formula = bitsets.full(len(every))
    for a in A.elements:
        for b in A.elements:
            if A.join[a, A.supplement[b]] == A.top:
                formula = formula & (hat[a] | ~hat[b])
    y_bits = bitsets.from_mask([any(x.elements == y.elements for y in space.filters) for x in every])
    if formula != y_bits:
        return Verdict.fail({"formula": ["↑" + A.labels[every[i].generator] for i in bitsets.members(formula)]},
                            "closure formula differs from Y")
    atoms = center_atoms(S)
    traced = sorted(
        bitsets.from_mask([S.leq[z, extension.image[a]] for a in A.elements]).to01() for z in atoms
    )
    if traced != sorted(y.elements.to01() for y in space.filters):
        return Verdict.fail({"atoms": S.names(atoms)}, "centre atoms do not trace out Y")
    return Verdict.ok(atoms=len(atoms))
