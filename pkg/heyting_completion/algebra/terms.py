"""
Terms over 0, 1, ∧, ∨, →, * and ⁺, equations, and equation checks.

Text syntax: variables x, y, z, x1, x2, ...; operators ^ v -> <-> and the
postfix * and +; constants 0 1; relations = and <=. Postfix operators bind
tightest, then ^, then v, then -> (right-associative).
"""
import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import InvariantBreach, ParseError, UnsupportedOperation
from .extension import ExtensionAlgebra, build_extension
from .lattice import HeytingAlgebra, classify_elements
from .verdict import Verdict

log = logging.getLogger(__name__)

CHUNK = 1 << 20

_BINARY_TABLES = {"^": "meet", "v": "join", "->": "implies"}
_UNARY_TABLES = {"*": "pseudocomplement", "+": "supplement"}


def _natural_key(name: str):
    letters, digits = re.match(r"([A-Za-z]+)(\d*)", name).groups()
    return letters, int(digits) if digits else -1


# ============= Terms =============

class Term:
    """Base class of term trees."""

    def evaluate(self, algebra: HeytingAlgebra, columns: Dict[str, np.ndarray], length: int) -> np.ndarray:
        raise NotImplementedError

    def names(self) -> set:
        return set()

    def uses_supplement(self) -> bool:
        return False

    def variables(self) -> List[str]:
        return sorted(self.names(), key=_natural_key)


@dataclass(frozen=True)
class Var(Term):
    name: str

    def evaluate(self, algebra, columns, length):
        return columns[self.name]

    def names(self):
        return {self.name}

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const(Term):
    value: str          # "0" or "1"

    def evaluate(self, algebra, columns, length):
        return np.full(length, algebra.bottom if self.value == "0" else algebra.top, dtype=np.int64)

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Unary(Term):
    op: str             # "*" or "+"
    arg: Term

    def evaluate(self, algebra, columns, length):
        inner = self.arg.evaluate(algebra, columns, length)
        values = getattr(algebra, _UNARY_TABLES[self.op])[inner]
        if (values < 0).any():
            k = int(np.flatnonzero(values < 0)[0])
            raise UnsupportedOperation(f"{algebra.labels[inner[k]]}{self.op} is undefined",
                                       {"x": algebra.labels[inner[k]], "op": self.op})
        return values

    def names(self):
        return self.arg.names()

    def uses_supplement(self):
        return self.op == "+" or self.arg.uses_supplement()

    def __str__(self):
        inner = str(self.arg)
        if isinstance(self.arg, Binary):
            inner = f"({inner})"
        return inner + self.op


@dataclass(frozen=True)
class Binary(Term):
    op: str             # "^", "v", "->" or "<->"
    left: Term
    right: Term

    def evaluate(self, algebra, columns, length):
        left = self.left.evaluate(algebra, columns, length)
        right = self.right.evaluate(algebra, columns, length)
        if self.op == "<->":
            forward, backward = algebra.implies[left, right], algebra.implies[right, left]
            values = np.where((forward < 0) | (backward < 0), -1, algebra.meet[forward, backward])
        else:
            values = getattr(algebra, _BINARY_TABLES[self.op])[left, right]
        if (values < 0).any():
            k = int(np.flatnonzero(values < 0)[0])
            raise UnsupportedOperation(f"{algebra.labels[left[k]]} {self.op} {algebra.labels[right[k]]} is undefined",
                                       {"x": algebra.labels[left[k]], "y": algebra.labels[right[k]], "op": self.op})
        return values

    def names(self):
        return self.left.names() | self.right.names()

    def uses_supplement(self):
        return self.left.uses_supplement() or self.right.uses_supplement()

    def __str__(self):
        def wrap(term):
            return f"({term})" if isinstance(term, Binary) else str(term)
        return f"{wrap(self.left)} {self.op} {wrap(self.right)}"


@dataclass(frozen=True)
class Equation:
    """lhs = rhs; an inequation s <= t is stored as s ∧ t = s."""

    lhs: Term
    rhs: Term
    name: str = ""
    text: str = ""

    def variables(self) -> List[str]:
        return sorted(self.lhs.names() | self.rhs.names(), key=_natural_key)

    def uses_supplement(self) -> bool:
        return self.lhs.uses_supplement() or self.rhs.uses_supplement()

    def __str__(self):
        return self.text or f"{self.lhs} = {self.rhs}"


# ============= Parser =============

_TOKEN = re.compile(r"\s*(?:(<->|->|<=|=|\^|\*|\+|\(|\))|([A-Za-z][A-Za-z]*\d*)|(\d+))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN.match(text, position)
        if match is None:
            start = len(text[position:]) - len(text[position:].lstrip()) + position
            raise ParseError(text, start, f"unexpected character {text[start]!r}")
        start = match.start(match.lastindex)
        symbol, word, number = match.groups()
        if symbol:
            tokens.append(("op", symbol, start))
        elif word == "v":
            tokens.append(("op", "v", start))
        elif word:
            if word.startswith("v"):
                raise ParseError(text, start, f"variable {word!r} clashes with the join operator v")
            tokens.append(("var", word, start))
        else:
            if number not in ("0", "1"):
                raise ParseError(text, start, f"constant {number!r} is not 0 or 1")
            tokens.append(("const", number, start))
        position = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.index]

    def take(self, value: Optional[str] = None) -> Tuple[str, str, int]:
        token = self.peek()
        if value is not None and token[1] != value:
            raise ParseError(self.text, token[2], f"expected {value!r}, found {token[1] or 'end of input'!r}")
        self.index += 1
        return token

    def equation(self, name: str) -> Equation:
        lhs = self.implication()
        kind, symbol, position = self.take()
        if symbol not in ("=", "<="):
            raise ParseError(self.text, position, "expected '=' or '<='")
        rhs = self.implication()
        if self.peek()[0] != "end":
            raise ParseError(self.text, self.peek()[2], f"unexpected {self.peek()[1]!r}")
        if symbol == "<=":
            return Equation(lhs, Binary("^", lhs, rhs), name, self.text.strip())
        return Equation(lhs, rhs, name, self.text.strip())

    def term(self) -> Term:
        term = self.implication()
        if self.peek()[0] != "end":
            raise ParseError(self.text, self.peek()[2], f"unexpected {self.peek()[1]!r}")
        return term

    def implication(self) -> Term:
        left = self.join()
        if self.peek()[1] in ("->", "<->"):
            op = self.take()[1]
            return Binary(op, left, self.implication())
        return left

    def join(self) -> Term:
        term = self.meet()
        while self.peek()[1] == "v":
            self.take()
            term = Binary("v", term, self.meet())
        return term

    def meet(self) -> Term:
        term = self.postfix()
        while self.peek()[1] == "^":
            self.take()
            term = Binary("^", term, self.postfix())
        return term

    def postfix(self) -> Term:
        term = self.atom()
        while self.peek()[1] in ("*", "+"):
            term = Unary(self.take()[1], term)
        return term

    def atom(self) -> Term:
        kind, value, position = self.take()
        if kind == "var":
            return Var(value)
        if kind == "const":
            return Const(value)
        if value == "(":
            inner = self.implication()
            self.take(")")
            return inner
        raise ParseError(self.text, position, f"unexpected {value or 'end of input'!r}")


def parse_equation(text: str, name: str = "") -> Equation:
    """Parse "s = t" or "s <= t"; ParseError carries the offending position."""
    return _Parser(text).equation(name)


def parse_term(text: str) -> Term:
    """Parse a single term."""
    return _Parser(text).term()


LIBRARY_TEXT = {
    "dual-stone": "(x v y)+ = x+ ^ y+",
    "central-supplement": "x+ ^ x++ = 0",
    "de-morgan-half": "(x ^ y)+ = x+ v y+",
    "bd2": "1 = x2 v (x2 -> (x1 v x1*))",
    "bd2-supplement": "x1+ ^ x1 <= x2 v x2*",
    "excluded-middle": "x v x* = 1",
    "pseudocomplement": "x ^ x* = 0",
    "stone": "x* v x** = 1",
    "goedel-dummett": "(x -> y) v (y -> x) = 1",
}


def library() -> Dict[str, Equation]:
    """Named equations used by the suite and the closure experiments."""
    return {name: parse_equation(text, name) for name, text in LIBRARY_TEXT.items()}


# ============= Evaluation =============

def eval_term(term: Term, algebra: HeytingAlgebra, assignment: Dict[str, int]) -> int:
    """Value of a term under a single assignment."""
    missing = term.names() - set(assignment)
    if missing:
        raise UnsupportedOperation(f"no value for {sorted(missing)}", {"missing": sorted(missing)})
    columns = {name: np.array([value], dtype=np.int64) for name, value in assignment.items()}
    return int(term.evaluate(algebra, columns, 1)[0])


def satisfies(algebra: HeytingAlgebra, equation: Equation) -> Verdict:
    """
    Check every assignment in mixed-radix order (first variable most
    significant); the first counterexample is the witness.
    """
    names = equation.variables()
    n = algebra.size
    total = n ** len(names)
    radix = (n,) * len(names)
    for start in range(0, total, CHUNK):
        flat = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        digits = np.unravel_index(flat, radix) if names else ()
        columns = {name: np.asarray(d, dtype=np.int64) for name, d in zip(names, digits)}
        lhs = equation.lhs.evaluate(algebra, columns, len(flat))
        rhs = equation.rhs.evaluate(algebra, columns, len(flat))
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            k = int(bad[0])
            witness = {name: algebra.labels[columns[name][k]] for name in names}
            return Verdict.fail(witness, f"{equation} fails",
                                lhs=algebra.labels[lhs[k]], rhs=algebra.labels[rhs[k]])
    return Verdict.ok()


def bd2_equivalence_check(algebra: HeytingAlgebra) -> Verdict:
    """
    bd₂ in Heyting form, x1⁺∧x1 <= x2∨x2*, and "every co-dense element lies
    below every dense element" must agree.
    """
    equations = library()
    heyting_form = satisfies(algebra, equations["bd2"])
    supplement_form = satisfies(algebra, equations["bd2-supplement"])
    classes = classify_elements(algebra)
    codense = np.array(classes.codense.tolist(), dtype=bool)
    dense = np.array(classes.dense.tolist(), dtype=bool)
    below = algebra.leq[np.ix_(codense, dense)]
    pointwise = bool(below.all())
    outcomes = {"bd2": heyting_form.holds, "bd2-supplement": supplement_form.holds, "codense-below-dense": pointwise}
    if len(set(outcomes.values())) != 1:
        raise InvariantBreach("bd2-equivalence", outcomes)
    if pointwise:
        return Verdict.ok(**outcomes)
    c, d = np.argwhere(~below)[0]
    witness = {
        "bd2": heyting_form.witness,
        "codense": algebra.labels[np.flatnonzero(codense)[c]],
        "dense": algebra.labels[np.flatnonzero(dense)[d]],
    }
    return Verdict.fail(witness, "bd₂ fails", **outcomes)


# ============= Experiments over many algebras =============

@dataclass(frozen=True)
class ClosureFinding:
    """Whether an equation holds in A and, when it does, in S(A)."""

    name: str
    satisfied: bool
    extension_satisfied: Optional[bool]
    witness: Optional[dict] = None


def closure_experiment(equation: Equation, algebras: Iterable[Tuple[str, HeytingAlgebra]],
                       settings: Settings = DEFAULT_SETTINGS) -> List[ClosureFinding]:
    """For each algebra satisfying the equation, check that S(A) does too."""
    findings = []
    for name, algebra in algebras:
        verdict = satisfies(algebra, equation)
        if not verdict.holds:
            findings.append(ClosureFinding(name, False, None))
            continue
        extension = build_extension(algebra, settings, verify=False)
        lifted = satisfies(extension.algebra, equation)
        if not lifted.holds:
            log.warning("%s: %s holds in A but fails in S(A)", name, equation)
        findings.append(ClosureFinding(name, True, lifted.holds, lifted.witness))
    return findings


def variety_transport(extension: ExtensionAlgebra, equations: Optional[Sequence[Equation]] = None) -> Verdict:
    """
    For Heyting-signature equations: A ⊨ e implies every A_y ⊨ e, which
    implies S(A) ⊨ e, which implies A ⊨ e again.
    """
    equations = [e for e in (equations or library().values()) if not e.uses_supplement()]
    A = extension.base
    for equation in equations:
        base = satisfies(A, equation).holds
        factors = all(satisfies(f, equation).holds for f in extension.embedding.factors)
        lifted = satisfies(extension.algebra, equation).holds
        if base and not factors:
            return Verdict.fail({"equation": str(equation), "stage": "quotients"}, "a quotient fails the equation")
        if factors and not lifted:
            return Verdict.fail({"equation": str(equation), "stage": "product"}, "S(A) fails the equation")
        if lifted and not base:
            return Verdict.fail({"equation": str(equation), "stage": "subalgebra"}, "A fails the equation")
    return Verdict.ok(equations=len(equations))
