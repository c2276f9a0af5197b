"""
Command implementations; each returns a Report.
"""
import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

from ..algebra.duality import min_space, subdirect_embed
from ..algebra.extension import build_extension
from ..algebra.frames import delta_iso, frame_algebra, hyper_frame, relation_matrix
from ..algebra.lattice import (
    HeytingAlgebra,
    center,
    check_invariants,
    classify_elements,
    is_centrally_supplemented,
    is_isomorphic,
)
from ..algebra.macneille import dm_completion
from ..algebra.terms import closure_experiment, parse_equation, satisfies
from ..algebra.verdict import Verdict
from ..config import DEFAULT_SETTINGS, Settings
from ..corpus import build_corpus, fixture_entries, random_entries
from ..errors import FormatError
from ..utils.formats import (
    lattice_document,
    load_algebra,
    relation_dump,
    save_document,
    save_dot,
    section_dump,
)
from ..utils.storage import CorpusStorage
from .report import Report
from .suite import run_suite

log = logging.getLogger(__name__)


def cmd_gen(max_points: int, out_dir: Union[str, Path], settings: Settings = DEFAULT_SETTINGS) -> Report:
    """Write the downset algebras of all posets on 1..max_points points."""
    entries = build_corpus(max_points, settings)
    CorpusStorage(out_dir).save(entries)
    report = Report("gen", seed=settings.seed)
    report.facts.update({"max_points": max_points, "entries": len(entries), "out": str(out_dir)})
    return report


def cmd_analyze(path: Union[str, Path], settings: Settings = DEFAULT_SETTINGS) -> Report:
    """Size, centre, Y, quotients, supplements and element classes of one algebra."""
    A = load_algebra(path)
    report = Report("analyze")
    report.add("table invariants", check_invariants(A), A.name)
    space = min_space(A)
    embedding = subdirect_embed(A, space)
    cs = is_centrally_supplemented(A)
    classes = classify_elements(A)
    report.facts.update({
        "name": A.name,
        "size": A.size,
        "elements": list(A.labels),
        "center": A.names(center(A)),
        "Y": space.labels(),
        "quotients": [
            {"point": point, "size": q.algebra.size, "elements": list(q.algebra.labels), "fsi": q.algebra.is_fsi()}
            for point, q in zip(space.labels(), embedding.quotients)
        ],
        "supplement": {A.labels[a]: A.labels[int(A.supplement[a])] for a in A.elements},
        "centrally_supplemented": cs.holds,
        "fsi": A.is_fsi(),
        "classes": {key: A.names(bits) for key, bits in classes._asdict().items()},
    })
    if not cs.holds:
        report.facts["dual_stone_witness"] = cs.witness
    return report


def cmd_complete(path: Union[str, Path], out_dir: Optional[Union[str, Path]] = None,
                 settings: Settings = DEFAULT_SETTINGS, dump_relation: bool = False) -> Report:
    """S(A), A⁺ as the closed sets of W_A, the Δ isomorphism and the cut cross-check."""
    path = Path(path)
    A = load_algebra(path)
    report = Report("complete", seed=settings.seed)
    extension = build_extension(A, settings)
    S = extension.algebra
    cuts = dm_completion(S).algebra
    frame = None
    if A.size <= settings.frame_size_limit:
        frame = hyper_frame(A, settings)
        completion = frame_algebra(frame, settings)
        plus = completion.algebra
        delta_iso(extension, completion, settings)
        report.add("Δ: S(A) ≅ closed sets of W_A", Verdict.ok(), A.name)
        report.add("closed sets of W_A ≅ MacNeille completion of S(A)",
                   Verdict.ok() if is_isomorphic(plus, cuts)
                   else Verdict.fail({"closed": plus.size, "cuts": cuts.size}, "completions differ"), A.name)
    else:
        log.warning("%s: %d elements exceeds frame_size_limit; A⁺ taken from cuts", A.name, A.size)
        plus = cuts
    report.facts.update({
        "name": A.name,
        "size": A.size,
        "S_size": S.size,
        "plus_size": plus.size,
        "plus_isomorphic_to_input": is_isomorphic(plus, A),
    })

    if out_dir is not None:
        out = Path(out_dir)
        stem = path.stem
        save_document(lattice_document(S), out / f"{stem}.S.json")
        save_dot(S, out / f"{stem}.S.dot")
        save_document(lattice_document(plus), out / f"{stem}.plus.json")
        save_dot(plus, out / f"{stem}.plus.dot")
        save_document(section_dump(extension), out / f"{stem}.sections.json")
        if dump_relation and frame is not None:
            save_document(relation_dump(frame.polarity.w0_labels, relation_matrix(frame.polarity)),
                          out / f"{stem}.N.json")
        report.facts["out"] = str(out)
    return report


def _targets(target: Union[str, Path]) -> List[Tuple[str, HeytingAlgebra]]:
    target = Path(target)
    if target.is_dir():
        storage = CorpusStorage(target)
        if storage.index_file.exists():
            return [(e.id, e.algebra) for e in storage.load()]
        files = sorted(target.glob("*.json"))
        if not files:
            raise FormatError(str(target), "", "directory holds no lattice files")
        return [(f.stem, load_algebra(f)) for f in files]
    return [(target.stem, load_algebra(target))]


def cmd_check(eq_text: str, target: Union[str, Path], settings: Settings = DEFAULT_SETTINGS) -> Report:
    """Satisfaction of one equation per algebra, plus its closure under S(-)."""
    equation = parse_equation(eq_text)
    algebras = _targets(target)
    report = Report("check")
    report.facts["equation"] = str(equation)
    for name, algebra in algebras:
        report.add(str(equation), satisfies(algebra, equation), name)
    findings = closure_experiment(equation, algebras, settings)
    report.facts["satisfied"] = sum(f.satisfied for f in findings)
    report.facts["closure_failures"] = [f.name for f in findings if f.satisfied and not f.extension_satisfied]
    return report


def cmd_suite(max_points: int, settings: Settings = DEFAULT_SETTINGS) -> Report:
    """Every property check over the corpus, the fixtures and a seeded random sample past the corpus."""
    random_points = settings.random_points or max_points + 1
    sampled = random_entries(settings.random_count, random_points, settings.seed)
    entries = build_corpus(max_points, settings) + fixture_entries() + sampled
    report = run_suite(entries, settings)
    report.facts["max_points"] = max_points
    report.facts["random"] = {
        "seed": settings.seed,
        "points": random_points,
        "entries": [entry.id for entry in sampled],
    }
    return report
