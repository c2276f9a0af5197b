"""
The acceptance suite: every property check over a corpus, fanned out over a
worker pool, plus negative controls that must be caught.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, Tuple

import numpy as np

from ..algebra.duality import coregular_minspace_duality, min_space
from ..algebra.extension import (
    build_extension,
    check_density,
    closure_of_Y_witness,
    extend_S_hom,
    is_S_homomorphism,
    normal_form,
    psi_and_thetaA,
)
from ..algebra.frames import (
    HeytingFrame,
    Polarity,
    check_frame_axioms,
    delta_iso,
    frame_algebra,
    hyper_frame,
    macneille_frame,
    require_frame_axioms,
    theorem_j_suite,
    truncated_collapse_check,
)
from ..algebra.lattice import (
    HeytingAlgebra,
    build_from_order,
    center_atoms,
    chain,
    check_de_morgan_half,
    check_dual_delta_star,
    check_invariants,
    check_meet_dense_supplement,
    check_residuation,
    classify_elements,
    discriminator,
    glivenko_dual,
    is_centrally_supplemented,
    is_isomorphic,
)
from ..algebra.macneille import dm_completion
from ..algebra.products import product_suite
from ..algebra.terms import bd2_equivalence_check, closure_experiment, library, variety_transport
from ..algebra.verdict import Verdict
from ..config import DEFAULT_SETTINGS, Settings
from ..corpus import CorpusEntry
from ..errors import FrameAxiomViolation, HeytingError, NotDistributive
from .report import Report

log = logging.getLogger(__name__)


def _timed(report: Report, name: str, subject: str, check: Callable[[], Verdict]):
    started = time.perf_counter()
    try:
        verdict = check()
    except HeytingError as exc:
        verdict = Verdict.fail(exc.witness, f"{type(exc).__name__}: {exc}")
    report.add(name, verdict, subject, time.perf_counter() - started)
    return verdict


def _exhaustive(check: Callable[[], object]) -> Callable[[], Verdict]:
    """Wrap a check that raises on failure and returns anything on success."""
    def run() -> Verdict:
        check()
        return Verdict.ok()
    return run


def algebra_checks(name: str, algebra: HeytingAlgebra, settings: Settings = DEFAULT_SETTINGS) -> Report:
    """Every per-algebra property, in a fixed order."""
    report = Report("algebra")
    A = algebra

    def add(check_name: str, check: Callable[[], Verdict]) -> Verdict:
        return _timed(report, check_name, name, check)

    add("table invariants", lambda: check_invariants(A))
    add("dense filter and co-dense ideal", _exhaustive(lambda: classify_elements(A)))
    add("(x∧y)⁺ = x⁺∨y⁺", lambda: check_de_morgan_half(A))
    add("a∨a⁺ = 1 and a∧a⁺ co-dense", lambda: check_dual_delta_star(A))
    add("supplement from a meet-dense set", lambda: check_meet_dense_supplement(A))
    add("co-regular elements form a Boolean algebra", _exhaustive(lambda: glivenko_dual(A)))
    add("co-regular elements dual to Y", lambda: coregular_minspace_duality(A))
    if is_centrally_supplemented(A).holds:
        add("discriminator term", lambda: discriminator(A))

    state = {}

    def extension_check() -> Verdict:
        state["extension"] = build_extension(A, settings)
        return Verdict.ok(size=state["extension"].size)

    if not add("S(A) is the full product of the quotients", extension_check).holds:
        return report
    ext = state["extension"]
    S = ext.algebra
    add("indicator sections are dense", lambda: check_density(ext))
    add("normal forms", _exhaustive(lambda: [normal_form(ext, u) for u in S.elements]))
    add("kernel of ψ is θ_A", _exhaustive(lambda: psi_and_thetaA(ext)))
    points = min_space(A).size
    add("centre atoms of S(A) match Y",
        lambda: Verdict.ok() if len(center_atoms(S)) == points
        else Verdict.fail({"atoms": len(center_atoms(S)), "points": points}, "atom count differs from |Y|"))
    add("inclusion is an S-homomorphism", lambda: is_S_homomorphism(A, S, ext.image))

    def identity_extension() -> Verdict:
        extended = extend_S_hom(ext, S, ext.image)
        if extended != tuple(S.elements):
            return Verdict.fail({"images": S.names(extended)}, "extension of the inclusion is not the identity")
        return Verdict.ok()

    add("extension of the inclusion is the identity", identity_extension)
    add("closure formula for Y", lambda: closure_of_Y_witness(ext))

    if A.size * A.size <= settings.frame_axiom_exhaustive_limit:
        add("frame axioms of M_A", lambda: check_frame_axioms(macneille_frame(A, settings), settings))
        add("frame axioms of W_A", lambda: check_frame_axioms(hyper_frame(A, settings), settings))

    if A.size <= settings.frame_size_limit:
        def completion_check() -> Verdict:
            state["completion"] = frame_algebra(hyper_frame(A, settings), settings)
            plus = state["completion"].algebra
            if not is_isomorphic(dm_completion(S).algebra, plus):
                return Verdict.fail({"closed": plus.size, "cuts": dm_completion(S).algebra.size},
                                    "MacNeille completion of S(A) differs from A⁺")
            return Verdict.ok(size=plus.size)

        if add("MacNeille completion of S(A) is A⁺", completion_check).holds:
            add("Δ is an isomorphism", _exhaustive(lambda: delta_iso(ext, state["completion"], settings)))
    if A.size <= settings.collapse_max_elements:
        add("truncated words collapse onto W_A",
            lambda: truncated_collapse_check(A, settings.collapse_word_length, settings))

    for item, verdict in theorem_j_suite(A, settings):
        report.add(f"A⁺ property {item}", verdict, name)

    add("bd₂ equivalence", lambda: Verdict.ok(bd2=bd2_equivalence_check(A).holds))
    add("equations transport to S(A)", lambda: variety_transport(ext))
    completion = state["completion"].algebra if "completion" in state else None
    for item, verdict in product_suite(A, settings, ext, completion):
        report.add(item, verdict, name)
    return report


def _run_entry(job: Tuple[str, HeytingAlgebra, Settings]) -> Report:
    name, algebra, settings = job
    started = time.perf_counter()
    report = algebra_checks(name, algebra, settings)
    log.info("%s: %d checks in %.2fs", name, len(report.checks), time.perf_counter() - started)
    return report


# ============= Negative controls =============

def corrupted_implies() -> HeytingAlgebra:
    """C3 with m→0 overwritten to 1."""
    c3 = chain(3)
    implies = np.array(c3.implies)
    implies[c3.index("m"), c3.bottom] = c3.top
    return c3.with_tables(implies=implies)


def pentagon_order() -> np.ndarray:
    """N5: 0 < a < b < 1 and 0 < c < 1."""
    leq = np.eye(5, dtype=bool)
    for i, j in [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 4), (2, 4), (3, 4)]:
        leq[i, j] = True
    return leq


def corrupted_frame() -> HeytingFrame:
    """M_C3 with the meet replaced by the join."""
    c3 = chain(3)
    return HeytingFrame(Polarity(c3.leq, c3.labels, c3.labels), compose=np.array(c3.join),
                        unit=c3.top, action=np.array(c3.implies), name="corrupted")


def negative_controls(settings: Settings = DEFAULT_SETTINGS) -> Report:
    """Each defect must be detected, with a witness."""
    report = Report("negative-controls")

    def residuation() -> Verdict:
        verdict = check_residuation(corrupted_implies())
        if verdict.holds:
            return Verdict.fail({"control": "implies"}, "corrupted implication passed residuation")
        return Verdict.ok(witness=verdict.witness)

    def distributivity() -> Verdict:
        try:
            build_from_order(pentagon_order(), labels=["0", "a", "b", "c", "1"], name="N5")
        except NotDistributive as exc:
            return Verdict.ok(witness=exc.witness)
        return Verdict.fail({"control": "N5"}, "N5 was accepted as distributive")

    def frame_axiom() -> Verdict:
        try:
            require_frame_axioms(corrupted_frame(), settings)
        except FrameAxiomViolation as exc:
            return Verdict.ok(witness=exc.witness, axiom=exc.axiom)
        return Verdict.fail({"control": "compose"}, "corrupted composition passed the frame axioms")

    _timed(report, "corrupted implication fails residuation", "control", residuation)
    _timed(report, "N5 is rejected as non-distributive", "control", distributivity)
    _timed(report, "corrupted composition violates a frame axiom", "control", frame_axiom)
    return report


# ============= Suite =============

def run_suite(entries: Sequence[CorpusEntry], settings: Settings = DEFAULT_SETTINGS) -> Report:
    """All checks on every entry; the report order follows `entries` whatever the completion order."""
    report = Report("suite", seed=settings.seed)
    report.facts["entries"] = len(entries)
    jobs = [(entry.id, entry.algebra, settings) for entry in entries]
    if settings.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=settings.workers) as pool:
            results: List[Report] = list(pool.map(_run_entry, jobs))
    else:
        results = [_run_entry(job) for job in jobs]
    for entry, result in zip(entries, results):
        report.extend(result)
        mismatch = entry.check()
        report.add("corpus metadata", Verdict.ok() if mismatch is None
                   else Verdict.fail(mismatch, "stored metadata differs"), entry.id)

    bd2 = library()["bd2"]
    findings = closure_experiment(bd2, [(e.id, e.algebra) for e in entries], settings)
    broken = [f.name for f in findings if f.satisfied and not f.extension_satisfied]
    report.add("bd₂ is closed under S(-)", Verdict.ok() if not broken
               else Verdict.fail({"algebras": broken}, "bd₂ fails in S(A)"), "corpus")
    report.facts["bd2_satisfied"] = sum(f.satisfied for f in findings)
    report.extend(negative_controls(settings))
    report.facts["failures"] = len(report.failures)
    return report
