"""
Subdirect representations over finite discrete index spaces: the patchwork
property, stalks of the central sheaf and the product form of A⁺.
"""
import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import InvariantBreach
from .duality import Quotient, central_congruence, subdirect_embed
from .extension import ExtensionAlgebra, build_extension
from .frames import hyper_completion
from .lattice import (
    HeytingAlgebra,
    center_atoms,
    is_centrally_supplemented,
    isomorphism,
    product,
)
from .verdict import Verdict

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SubdirectRepresentation:
    """A ≤ ∏ factors; images[a] is the coordinate tuple of a."""

    algebra: HeytingAlgebra
    points: Tuple[str, ...]
    factors: Tuple[HeytingAlgebra, ...]
    images: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(set(self.images)) != self.algebra.size:
            raise InvariantBreach("representation-injective", {"algebra": self.algebra.name})
        for k, factor in enumerate(self.factors):
            if {image[k] for image in self.images} != set(factor.elements):
                raise InvariantBreach("representation-surjective", {"point": self.points[k]})

    @property
    def width(self) -> int:
        return len(self.factors)


def representation_over_minimal(algebra: HeytingAlgebra) -> SubdirectRepresentation:
    """A ≤ ∏_Y A_y."""
    embedding = subdirect_embed(algebra)
    return SubdirectRepresentation(algebra, tuple(embedding.space.labels()),
                                   tuple(embedding.factors), embedding.images)


def _stalk_quotients(algebra: HeytingAlgebra) -> List[Tuple[int, Quotient]]:
    stalks = []
    for z in center_atoms(algebra):
        name = f"{algebra.name or 'A'}/θ{algebra.labels[z]}"
        quotient = central_congruence(algebra, z).quotient(name)
        quotient.check_homomorphism().or_raise("stalk-homomorphism")
        stalks.append((z, quotient))
    return stalks


def representation_over_center(algebra: HeytingAlgebra) -> SubdirectRepresentation:
    """
    The usual representation over the Stone space of the centre: one
    coordinate A/θ_z per atom z of Z(A).
    """
    stalks = _stalk_quotients(algebra)
    images = tuple(tuple(q.map[a] for _, q in stalks) for a in algebra.elements)
    return SubdirectRepresentation(algebra, tuple("↑" + algebra.labels[z] for z, _ in stalks),
                                   tuple(q.algebra for _, q in stalks), images)


class ProductReport(NamedTuple):
    """Outcome of the (weak) Boolean product test for a subdirect representation."""

    equalizers_open: bool
    equalizers_clopen: bool
    patchwork: bool
    witness: Optional[dict] = None

    @property
    def boolean_product(self) -> bool:
        return self.equalizers_clopen and self.patchwork

    @property
    def weak_boolean_product(self) -> bool:
        return self.equalizers_open and self.patchwork


def weak_boolean_product_check(rep: SubdirectRepresentation) -> ProductReport:
    """
    Over a finite discrete space every equaliser is clopen, so only the
    patchwork property is checked: for every subset N of points and a, b in A
    some c agrees with a on N and with b off N.
    """
    images = np.array(rep.images, dtype=np.int64).reshape(rep.algebra.size, rep.width)
    present = {tuple(row) for row in images.tolist()}
    labels = rep.algebra.labels
    for mask_code in range(1, (1 << rep.width) - 1):
        mask = np.array([(mask_code >> k) & 1 for k in range(rep.width)], dtype=bool)
        # patches[a, b] = a on N, b elsewhere
        patches = np.where(mask, images[:, None, :], images[None, :, :])
        for a in range(rep.algebra.size):
            for b in range(rep.algebra.size):
                if tuple(patches[a, b].tolist()) not in present:
                    witness = {"a": labels[a], "b": labels[b],
                               "N": [rep.points[k] for k in np.flatnonzero(mask)]}
                    return ProductReport(True, True, False, witness)
    return ProductReport(True, True, True)


def patchwork_criterion(algebra: HeytingAlgebra) -> Verdict:
    """The representation over Y has the patchwork property iff A is centrally supplemented."""
    report = weak_boolean_product_check(representation_over_minimal(algebra))
    cs = is_centrally_supplemented(algebra).holds
    if report.patchwork != cs:
        return Verdict.fail({"patchwork": report.patchwork, "centrally_supplemented": cs, "patch": report.witness},
                            "patchwork and central supplement disagree")
    return Verdict.ok(patchwork=report.patchwork, centrally_supplemented=cs)


@dataclass(frozen=True, eq=False)
class Stalk:
    """Stalk of the central sheaf of S(A) at one point of Y."""

    point: str                      # minimal prime filter of A
    atom: str                       # central atom of S(A)
    algebra: HeytingAlgebra         # S(A)/θ_z
    mapping: Tuple[int, ...]        # isomorphism onto A_y


def central_sheaf_stalks(algebra: HeytingAlgebra, settings: Settings = DEFAULT_SETTINGS,
                         extension: Optional[ExtensionAlgebra] = None) -> List[Stalk]:
    """
    Stalks of the central sheaf of S(A), one per atom of Z(S(A)), each
    matched with the quotient A_y of the coordinate where the atom is 1.
    """
    extension = extension or build_extension(algebra, settings, verify=False)
    S = extension.algebra
    factors = extension.embedding.factors
    points = extension.embedding.space.labels()
    stalks = []
    for z, quotient in _stalk_quotients(S):
        section = extension.section(z)
        support = [k for k, value in enumerate(section) if value != factors[k].bottom]
        if len(support) != 1 or section[support[0]] != factors[support[0]].top:
            raise InvariantBreach("central-atom-is-point", {"atom": S.labels[z], "section": list(section)})
        k = support[0]
        mapping = isomorphism(quotient.algebra, factors[k])
        if mapping is None:
            raise InvariantBreach("stalk-matches-quotient", {"atom": S.labels[z], "point": points[k]})
        stalks.append(Stalk(points[k], S.labels[z], quotient.algebra, tuple(mapping)))
    if sorted(s.point for s in stalks) != sorted(points):
        raise InvariantBreach("stalks-cover-points", {"stalks": [s.point for s in stalks], "points": points})
    log.debug("%s: %d stalks", algebra.name or "algebra", len(stalks))
    return stalks


def hausdorff_characterization(algebra: HeytingAlgebra) -> Verdict:
    """
    Centrally supplemented iff the representation over the centre is a
    Boolean product whose stalks are all fsi.
    """
    rep = representation_over_center(algebra)
    report = weak_boolean_product_check(rep)
    non_fsi = [rep.points[k] for k, factor in enumerate(rep.factors) if not factor.is_fsi()]
    sheaf_side = report.boolean_product and not non_fsi
    cs = is_centrally_supplemented(algebra).holds
    extra = {"centrally_supplemented": cs, "boolean_product": report.boolean_product, "non_fsi_stalks": non_fsi}
    if sheaf_side != cs:
        return Verdict.fail(extra, "Hausdorff characterisation fails")
    return Verdict.ok(**extra)


def hyper_completion_as_product(algebra: HeytingAlgebra, settings: Settings = DEFAULT_SETTINGS,
                                completion: Optional[HeytingAlgebra] = None) -> Verdict:
    """A⁺ is isomorphic to the product of the quotients A_y, with |A⁺| = ∏ |A_y|."""
    factors = subdirect_embed(algebra).factors
    completion = completion or hyper_completion(algebra, settings)
    expected = int(np.prod([f.size for f in factors]))
    if completion.size != expected:
        return Verdict.fail({"completion": completion.size, "product": expected}, "sizes differ")
    full = product(factors, f"∏ {algebra.name}/y")
    if isomorphism(completion, full) is None:
        return Verdict.fail({"completion": completion.name, "product": full.name}, "A⁺ is not the product")
    return Verdict.ok(size=expected)


def product_suite(algebra: HeytingAlgebra, settings: Settings = DEFAULT_SETTINGS,
                  extension: Optional[ExtensionAlgebra] = None,
                  completion: Optional[HeytingAlgebra] = None) -> List[Tuple[str, Verdict]]:
    """Every product-level property as named verdicts."""
    extension = extension or build_extension(algebra, settings, verify=False)
    results: List[Tuple[str, Verdict]] = [
        ("patchwork iff centrally supplemented", patchwork_criterion(algebra)),
        ("Hausdorff characterisation", hausdorff_characterization(algebra)),
        ("A⁺ is the product of the quotients", hyper_completion_as_product(algebra, settings, completion)),
    ]
    try:
        stalks = central_sheaf_stalks(algebra, settings, extension)
        results.append(("stalks of S(A) are the quotients", Verdict.ok(stalks=len(stalks))))
    except InvariantBreach as exc:
        results.append(("stalks of S(A) are the quotients", Verdict.fail(exc.witness, str(exc))))
    return results
