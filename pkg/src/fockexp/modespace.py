"""One-particle data: mode count, eigenvalue weights and the Hilbert-Schmidt exponent.

Modes are numbered 1..d in every public function. Internally a set of modes is
an integer bitmask with bit ``j - 1`` standing for mode ``j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

RATIONAL = "rational"
FLOAT = "float"


class ModeSpaceError(ValueError):
    pass


def to_scalar(x, arith: str):
    """Coerce ``x`` (int, str like "5/2", Fraction, float, complex) into the arithmetic."""
    if arith == RATIONAL:
        if isinstance(x, complex):
            raise ModeSpaceError("complex scalars need float arithmetic")
        if isinstance(x, float):
            return Fraction(x).limit_denominator(10**12) if not x.is_integer() else Fraction(int(x))
        return Fraction(x)
    if isinstance(x, complex):
        return x
    if isinstance(x, str):
        return float(Fraction(x))
    return float(x)


@dataclass(frozen=True)
class ModeSpace:
    d: int
    lambdas: tuple
    alpha: object
    arith: str = RATIONAL

    @property
    def exact(self) -> bool:
        return self.arith == RATIONAL

    @property
    def full_mask(self) -> int:
        return (1 << self.d) - 1

    def scalar(self, x):
        return to_scalar(x, self.arith)

    def zero(self):
        return Fraction(0) if self.exact else 0.0

    def one(self):
        return Fraction(1) if self.exact else 1.0

    def power(self, lam, p):
        # exact mode keeps integer exponents only, so that lam**p stays rational
        if self.exact:
            p = Fraction(p)
            if p.denominator != 1:
                raise ModeSpaceError(f"exponent {p} is not an integer; use float arithmetic")
            return lam ** int(p)
        return float(lam) ** float(p)

    def subset_weight(self, mask: int, p):
        """prod over modes j in ``mask`` of lambda_j ** p."""
        w = self.one()
        j = 0
        while mask:
            if mask & 1:
                w *= self.power(self.lambdas[j], p)
            mask >>= 1
            j += 1
        return w

    def tuple_weight(self, idx: Sequence[int], p):
        """Weight of e(i) for a 0-based index tuple (repeats allowed)."""
        w = self.one()
        for j in idx:
            w *= self.power(self.lambdas[j], p)
        return w

    def with_arith(self, arith: str) -> "ModeSpace":
        if arith == self.arith:
            return self
        return build_mode_space(self.d, [str(x) if isinstance(x, Fraction) else x for x in self.lambdas],
                                self.alpha if not isinstance(self.alpha, Fraction) else str(self.alpha),
                                arith=arith)


def build_mode_space(d: int, lambdas: Sequence, alpha, arith: str = RATIONAL) -> ModeSpace:
    if arith not in (RATIONAL, FLOAT):
        raise ModeSpaceError(f"unknown arithmetic {arith!r}")
    if not isinstance(d, int) or d < 1:
        raise ModeSpaceError(f"mode count must be a positive integer, got {d!r}")
    lams = tuple(to_scalar(x, arith) for x in lambdas)
    if len(lams) != d:
        raise ModeSpaceError(f"expected {d} eigenvalues, got {len(lams)}")
    if any(not math.isfinite(float(x)) for x in lams):
        raise ModeSpaceError("eigenvalues must be finite")
    if lams[0] <= 1:
        raise ModeSpaceError("lambda_1 must exceed 1 (rho >= 1 breaks every estimate)")
    if any(b < a for a, b in zip(lams, lams[1:])):
        raise ModeSpaceError("eigenvalues must be sorted nondecreasing")
    a = to_scalar(alpha, arith)
    if a < 0:
        raise ModeSpaceError("alpha must be nonnegative")
    return ModeSpace(d, lams, a, arith)


def default_lambdas(d: int) -> list[int]:
    return [j + 1 for j in range(1, d + 1)]


def _check_modes(ms: ModeSpace, modes: Iterable[int]) -> list[int]:
    out = []
    for i in modes:
        if not 1 <= i <= ms.d:
            raise ModeSpaceError(f"mode index {i} outside 1..{ms.d}")
        out.append(i - 1)
    return out


def mode_weight(ms: ModeSpace, modes: Iterable[int], p):
    """|e(i)|_p for the basis monomial over the (1-based) mode multiset ``modes``."""
    return ms.tuple_weight(_check_modes(ms, modes), p)


def schwartz_constants(ms: ModeSpace):
    """Return ``(rho, delta_sq)``: the norm of A^{-1} and sum_j lambda_j^{-2 alpha}."""
    rho = ms.one() / ms.lambdas[0]
    delta_sq = sum((ms.power(lam, -2 * ms.alpha) for lam in ms.lambdas), ms.zero())
    return rho, delta_sq
