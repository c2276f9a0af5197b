"""
The product P(A) = ∏_Y A_y and its elements (sections).

A section is a tuple with one coordinate per point of Y. Internally sections
are encoded as mixed-radix integers so closure rounds run on numpy arrays.
"""
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .lattice import HEYTING, HeytingAlgebra, build_indexed

Section = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class ProductAlgebra:
    """Coordinatewise ∧, ∨, → with the supplement u⁺ = ind_(u<1)."""

    factors: Tuple[HeytingAlgebra, ...]
    point_labels: Tuple[str, ...] = ()
    radix: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        radix = np.array([f.size for f in self.factors], dtype=np.int64)
        # last coordinate varies fastest
        weights = np.ones(len(radix), dtype=np.int64)
        for k in range(len(radix) - 2, -1, -1):
            weights[k] = weights[k + 1] * radix[k + 1]
        object.__setattr__(self, "radix", radix)
        object.__setattr__(self, "weights", weights)
        if not self.point_labels:
            object.__setattr__(self, "point_labels", tuple(f"y{k}" for k in range(len(radix))))

    @property
    def size(self) -> int:
        return int(np.prod(self.radix)) if len(self.radix) else 1

    @property
    def width(self) -> int:
        return len(self.factors)

    # ---- encoding ----

    def encode(self, section: Sequence[int]) -> int:
        """Mixed-radix code of a section."""
        return int(np.dot(np.asarray(section, dtype=np.int64), self.weights)) if self.width else 0

    def decode(self, code: int) -> Section:
        """Section of a code."""
        return tuple(int(d) for d in self.digits(np.int64(code)))

    def digits(self, codes) -> np.ndarray:
        """Coordinates of each code along a trailing axis."""
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self.weights) % self.radix

    def compose(self, digits: np.ndarray) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) * self.weights).sum(axis=-1)

    def label(self, code: int) -> str:
        section = self.decode(code)
        return "(" + ",".join(f.labels[v] for f, v in zip(self.factors, section)) + ")"

    # ---- operations (broadcasting over code arrays) ----

    def _binary(self, table: str, u, v) -> np.ndarray:
        du, dv = self.digits(u), self.digits(v)
        du, dv = np.broadcast_arrays(du, dv)
        out = np.empty(du.shape, dtype=np.int64)
        for k, factor in enumerate(self.factors):
            out[..., k] = getattr(factor, table)[du[..., k], dv[..., k]]
        return self.compose(out)

    def meet(self, u, v) -> np.ndarray:
        return self._binary("meet", u, v)

    def join(self, u, v) -> np.ndarray:
        return self._binary("join", u, v)

    def implies(self, u, v) -> np.ndarray:
        return self._binary("implies", u, v)

    def supplement(self, u) -> np.ndarray:
        """u⁺ = ind_(u<1)."""
        return self.indicator(self.digits(u) < self.radix - 1)

    def pseudocomplement(self, u) -> np.ndarray:
        du = self.digits(u)
        out = np.empty(du.shape, dtype=np.int64)
        for k, factor in enumerate(self.factors):
            out[..., k] = factor.pseudocomplement[du[..., k]]
        return self.compose(out)

    def le(self, u, v) -> np.ndarray:
        du, dv = self.digits(u), self.digits(v)
        du, dv = np.broadcast_arrays(du, dv)
        result = np.ones(du.shape[:-1], dtype=bool)
        for k, factor in enumerate(self.factors):
            result &= factor.leq[du[..., k], dv[..., k]]
        return result

    def indicator(self, mask) -> np.ndarray:
        """Section that is top where mask holds and bottom elsewhere (factor bottoms are index 0)."""
        mask = np.asarray(mask, dtype=bool)
        return self.compose(np.where(mask, self.radix - 1, 0))

    @property
    def top(self) -> int:
        return self.encode(self.radix - 1)

    @property
    def bottom(self) -> int:
        return 0

    def singleton(self, k: int) -> int:
        """The central atom that is top at coordinate k only."""
        mask = np.zeros(self.width, dtype=bool)
        mask[k] = True
        return int(self.indicator(mask))

    def all_codes(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)

    def as_algebra(self, codes, name: str = "") -> Tuple[HeytingAlgebra, List[int]]:
        """
        Algebra on a set of codes with the product order.
        Returns the algebra and the code of each of its elements.
        """
        codes = np.asarray(codes, dtype=np.int64)
        leq = self.le(codes[:, None], codes[None, :])
        labels = [self.label(int(c)) for c in codes]
        algebra, origin = build_indexed(leq, HEYTING, labels, name)
        return algebra, [int(codes[k]) for k in origin]
