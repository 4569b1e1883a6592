"""Signatures, graded dimensions and the spectral data of a principal series.

A signature is a vector in {0,1}^n.  It simultaneously labels a character of
the group of diagonal sign matrices and a wedge-basis vector of the exterior
algebra of C^n.  The spectral data (s, c, gamma, epsilon) fixes both a
principal series representation of GL(n,R) and the attached L-factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence


@dataclass(frozen=True)
class Signature:
    """Bit vector epsilon in {0,1}^n."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if not all(b in (0, 1) for b in self.bits):
            raise ValueError(f"signature bits must be 0 or 1, got {self.bits}")
        if len(self.bits) == 0:
            raise ValueError("signature must have positive length")

    @classmethod
    def of(cls, bits: Sequence[int] | "Signature") -> "Signature":
        if isinstance(bits, Signature):
            return bits
        return cls(tuple(int(b) for b in bits))

    @classmethod
    def from_string(cls, text: str) -> "Signature":
        """Parse '011' or '0,1,1' into a signature."""
        text = text.strip()
        parts = text.split(",") if "," in text else list(text)
        return cls(tuple(int(p) for p in parts))

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    @property
    def weight(self) -> int:
        """|epsilon|, the number of set bits."""
        return sum(self.bits)

    @property
    def indices(self) -> tuple[int, ...]:
        """Zero-based positions of the set bits, ascending."""
        return tuple(i for i, b in enumerate(self.bits) if b)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def all_signatures(n: int) -> Iterator[Signature]:
    """All 2^n signatures of length n, in lexicographic order."""
    for bits in product((0, 1), repeat=n):
        yield Signature(bits)


@dataclass(frozen=True)
class GradedDimension:
    """Dimension of the grade-k exterior power of C^n."""

    n: int
    k: int

    @property
    def value(self) -> int:
        return math.comb(self.n, self.k)


def graded_dimension(n: int, k: int) -> int:
    """dim of the k-th exterior power of C^n, i.e. binomial(n, k)."""
    if not 0 <= k <= n:
        raise ValueError(f"grade {k} out of range for dimension {n}")
    return math.comb(n, k)


def rho_vector(n: int) -> tuple[float, ...]:
    """Half-sum shifts rho_j = (n-1)/2 + 1 - j for j = 1..n.

    Strictly decreasing with unit step and symmetric about zero.
    """
    ell = n - 1
    return tuple(ell / 2 + 1 - j for j in range(1, n + 1))


@dataclass(frozen=True)
class SpectralParams:
    """Data (s, c, gamma, epsilon) of a principal series and its L-factor.

    `gamma` and `epsilon` must have equal length n; `rho` is derived.
    """

    s: complex
    c: float
    gamma: tuple[float, ...]
    epsilon: Signature
    rho: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        eps = Signature.of(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "gamma", tuple(float(g) for g in self.gamma))
        object.__setattr__(self, "s", complex(self.s))
        object.__setattr__(self, "c", float(self.c))
        if len(self.gamma) != len(eps):
            raise ValueError(
                f"gamma has length {len(self.gamma)} but epsilon has length {len(eps)}"
            )
        if self.c <= 0:
            raise ValueError(f"scale c must be positive, got {self.c}")
        object.__setattr__(self, "rho", rho_vector(len(eps)))

    @property
    def n(self) -> int:
        """Matrix dimension, one more than the rank."""
        return len(self.gamma)

    @property
    def ell(self) -> int:
        return self.n - 1
