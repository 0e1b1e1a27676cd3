"""Graded Fock vectors, exponential vectors, the S-transform and the ladder operators.

A :class:`FockVector` stores all of its components in one map from subset mask
to coefficient; the degree of a key is its popcount. With the wedge-basis
storage convention the Fock pairing is the plain coefficient dot product, since
``n! <e_I, e_I> = 1``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from math import comb
from typing import Iterable

from .contract import wedge_contract
from .modespace import ModeSpace
from .wedge import (
    WedgeTensor,
    mask_modes,
    norm_p_sq,
    pairing,
    popcount,
    wedge_power,
    wedge_product,
    wedge_scalar,
)

EVEN, ODD, MIXED, ZERO = "even", "odd", "mixed", "zero"


class ParityError(ValueError):
    pass


class FockVector:
    __slots__ = ("ms", "coeffs")

    def __init__(self, ms: ModeSpace, coeffs=None):
        self.ms = ms
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v != 0}

    @classmethod
    def from_components(cls, ms: ModeSpace, parts: Iterable[WedgeTensor]) -> "FockVector":
        acc = defaultdict(int)
        for w in parts:
            if w.ms != ms:
                raise ValueError("component lives on a different mode space")
            for k, v in w.coeffs.items():
                acc[k] += v
        return cls(ms, acc)

    def component(self, n: int) -> WedgeTensor:
        return WedgeTensor(self.ms, n, {k: v for k, v in self.coeffs.items() if popcount(k) == n})

    def components(self) -> dict[int, WedgeTensor]:
        degs = sorted({popcount(k) for k in self.coeffs})
        return {n: self.component(n) for n in degs}

    @property
    def parity(self) -> str:
        pars = {popcount(k) & 1 for k in self.coeffs}
        if not pars:
            return ZERO
        if pars == {0}:
            return EVEN
        if pars == {1}:
            return ODD
        return MIXED

    def __repr__(self):
        return f"FockVector({self.parity}, nnz={len(self.coeffs)})"

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.ms == other.ms and self.coeffs == other.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return FockVector(self.ms, out)

    def __mul__(self, c):
        return FockVector(self.ms, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_list(self, basis: list[int]) -> list:
        z = self.ms.zero()
        return [self.coeffs.get(k, z) for k in basis]


def vacuum(ms: ModeSpace) -> FockVector:
    return FockVector(ms, {0: ms.one()})


def fock_from(*parts) -> FockVector:
    """Sum of wedge tensors (of mixed degrees) as a Fock vector."""
    return FockVector.from_components(parts[0].ms, parts)


def fock_norm_sq(phi: FockVector, p):
    """||phi||_p^2 = sum_n n! |phi_n|_p^2."""
    return sum((math.factorial(n) * norm_p_sq(w, p) for n, w in phi.components().items()),
               phi.ms.zero())


def fock_norm(phi: FockVector, p):
    """Float norm; the exact square in rational arithmetic."""
    sq = fock_norm_sq(phi, p)
    return sq if phi.ms.exact else math.sqrt(sq)


def fock_pairing(Phi: FockVector, phi: FockVector):
    """<<Phi, phi>> = sum_n n! <Phi_n, phi_n>."""
    if Phi.ms != phi.ms:
        raise ValueError("mismatched mode spaces")
    other = phi.components()
    return sum((math.factorial(n) * pairing(w, other[n])
                for n, w in Phi.components().items() if n in other), Phi.ms.zero())


def fock_inner(Phi: FockVector, phi: FockVector):
    return fock_pairing(conj(Phi), phi)


def conj(phi):
    """J: coefficientwise complex conjugation (identity on real data)."""
    if isinstance(phi, WedgeTensor):
        return phi.conj()
    return FockVector(phi.ms, {k: v.conjugate() for k, v in phi.coeffs.items()})


def _check_degree2(zeta: WedgeTensor):
    if zeta.degree != 2:
        raise ValueError(f"exponential vectors need a degree-2 tensor, got degree {zeta.degree}")


def exp_vector(zeta: WedgeTensor) -> FockVector:
    """e+(zeta) = sum_n zeta^n / (2n)!, finite because zeta^n vanishes for 2n > d."""
    _check_degree2(zeta)
    ms = zeta.ms
    parts = []
    power = wedge_scalar(ms, ms.one())
    for n in range(ms.d // 2 + 1):
        parts.append(power * (ms.one() / math.factorial(2 * n)))
        power = wedge_product(power, zeta)
    return FockVector.from_components(ms, parts)


def s_transform(Phi: FockVector, zeta: WedgeTensor, method: str = "pairing"):
    """(S Phi)(zeta); ``method="series"`` sums <Phi_2n, zeta^n> directly."""
    _check_degree2(zeta)
    if Phi.parity not in (EVEN, ZERO):
        raise ParityError("the S-transform is defined on the even part")
    if method == "pairing":
        return fock_pairing(Phi, exp_vector(zeta))
    if method == "series":
        comps = Phi.components()
        return sum((pairing(comps[2 * n], wedge_power(zeta, n)) for n in range(Phi.ms.d // 2 + 1)
                    if 2 * n in comps), Phi.ms.zero())
    raise ValueError(f"unknown method {method!r}")


def s_taylor(Phi: FockVector, zeta: WedgeTensor, eta: WedgeTensor) -> list:
    """Coefficients a_k with S Phi(z zeta + eta) = sum_k a_k z^k."""
    _check_degree2(zeta)
    _check_degree2(eta)
    if Phi.parity not in (EVEN, ZERO):
        raise ParityError("the S-transform is defined on the even part")
    top = Phi.ms.d // 2
    comps = Phi.components()
    zp = [wedge_power(zeta, k) for k in range(top + 1)]
    ep = [wedge_power(eta, n) for n in range(top + 1)]
    out = []
    for k in range(top + 1):
        a = Phi.ms.zero()
        for n in range(top + 1 - k):
            deg = 2 * (n + k)
            if deg in comps:
                a += comb(n + k, k) * pairing(comps[deg], wedge_product(zp[k], ep[n]))
        out.append(a)
    return out


def _check_vector(f: WedgeTensor):
    if f.degree != 1:
        raise ValueError(f"ladder operators need a degree-1 tensor, got degree {f.degree}")


def create(f: WedgeTensor, phi: FockVector) -> FockVector:
    """a+(f) phi_n = f ^ phi_n."""
    _check_vector(f)
    return FockVector.from_components(phi.ms, [wedge_product(f, w) for w in phi.components().values()])


def annihilate(f: WedgeTensor, phi: FockVector) -> FockVector:
    """a(f) phi_n = n f ^^1 phi_n using the left contraction; a(f) phi_0 = 0."""
    _check_vector(f)
    parts = [n * wedge_contract(f, w, 1, "left") for n, w in phi.components().items() if n >= 1]
    return FockVector.from_components(phi.ms, parts) if parts else FockVector(phi.ms)


def weyl_W(f: WedgeTensor, phi: FockVector) -> FockVector:
    """W(f) = a+(f) + a(J f)."""
    return create(f, phi) + annihilate(f.conj(), phi)


def parity_split(phi: FockVector) -> tuple[FockVector, FockVector]:
    even = {k: v for k, v in phi.coeffs.items() if popcount(k) % 2 == 0}
    odd = {k: v for k, v in phi.coeffs.items() if popcount(k) % 2 == 1}
    return FockVector(phi.ms, even), FockVector(phi.ms, odd)


def basis_vector(ms: ModeSpace, mask: int) -> FockVector:
    return FockVector(ms, {mask: ms.one()})


def describe(mask: int) -> str:
    modes = [j + 1 for j in mask_modes(mask)]
    return "vac" if not modes else "e" + "^".join(map(str, modes))
