"""Integral kernel operators on the even sector and the ladder-operator kernels.

A :class:`KernelDistribution` of shape (l, m) wraps an :class:`AltBlockTensor`
with blocks (2l, 2m). Its operator removes 2m particles and adds 2l.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass

from .contract import AltBlockTensor, alt_from_wedges, contract_right
from .fock import EVEN, ZERO, FockVector, ParityError, exp_vector, fock_pairing
from .modespace import ModeSpace
from .opmatrix import OperatorMatrix, zeros
from .wedge import (
    WedgeTensor,
    antisymmetrize,
    mask_modes,
    modes_mask,
    perm_sign,
    popcount,
    shuffle_sign,
    wedge_product,
    wedge_scalar,
)

# a(f)a(g) on the even sector is the (0,1) kernel built from g ^ f, not f ^ g
AA_ORDER = "g^f"


@dataclass(frozen=True)
class KernelDistribution:
    ms: ModeSpace
    l: int
    m: int
    kernel: AltBlockTensor

    def __post_init__(self):
        if (self.kernel.l, self.kernel.m) != (2 * self.l, 2 * self.m):
            raise ValueError(f"kernel blocks ({self.kernel.l},{self.kernel.m}) do not match "
                             f"(2l,2m) = ({2 * self.l},{2 * self.m})")
        if self.kernel.ms != self.ms:
            raise ValueError("kernel lives on a different mode space")

    @classmethod
    def from_entries(cls, ms: ModeSpace, l: int, m: int, entries) -> "KernelDistribution":
        """``entries`` maps (left modes, right modes), 1-based and in any order, to values.

        Unordered keys are sign-corrected; repeated keys accumulate.
        """
        acc = defaultdict(int)
        for (left, right), v in entries.items():
            a, sa = _sorted_key(left)
            b, sb = _sorted_key(right)
            if sa and sb:
                acc[(a, b)] += sa * sb * ms.scalar(v)
        return cls(ms, l, m, AltBlockTensor(ms, 2 * l, 2 * m, acc))

    @classmethod
    def scalar(cls, ms: ModeSpace, c) -> "KernelDistribution":
        return cls(ms, 0, 0, AltBlockTensor(ms, 0, 0, {(0, 0): ms.scalar(c)}))

    def is_zero(self) -> bool:
        return self.kernel.is_zero()


def _sorted_key(modes):
    idx = [i - 1 for i in modes]
    return modes_mask(idx), perm_sign(idx)


def _check_even(phi: FockVector):
    if phi.parity not in (EVEN, ZERO):
        raise ParityError("integral kernel operators act on the even sector")


def iko_apply(K: KernelDistribution, phi: FockVector) -> FockVector:
    """Literal definition: dense right contraction of the kernel against each component."""
    _check_even(phi)
    if phi.ms != K.ms:
        raise ValueError("mismatched mode spaces")
    dense = K.kernel.block().dense()
    parts = []
    for deg, w in phi.components().items():
        if deg < 2 * K.m:
            continue
        n2 = deg - 2 * K.m
        scale = math.factorial(deg) // math.factorial(n2)
        out = antisymmetrize(contract_right(dense, w, 2 * K.m))
        parts.append(out * scale)
    return FockVector.from_components(phi.ms, parts) if parts else FockVector(phi.ms)


def iko_matrix(K: KernelDistribution) -> OperatorMatrix:
    """Even-sector matrix, assembled on subsets.

    Entry (I, J) collects k_{A,B} eps(C,I) eps(C,J) over kernel keys with
    B inside J, C = J - B disjoint from A and I = A | C.
    """
    ms = K.ms
    out = zeros(ms, "even", "even")
    rpos = {k: i for i, k in enumerate(out.row_basis)}
    cpos = {k: j for j, k in enumerate(out.col_basis)}
    by_b = defaultdict(list)
    for (a, b), v in K.kernel.coeffs.items():
        by_b[b].append((a, v))
    for b, items in by_b.items():
        rest = ms.full_mask & ~b
        for n in range(0, ms.d - popcount(b) + 1, 2):
            for cm in itertools.combinations(mask_modes(rest), n):
                c = modes_mask(cm)
                j = b | c
                sj = shuffle_sign(c, b)
                for a, v in items:
                    if a & c:
                        continue
                    i = a | c
                    out.data[rpos[i], cpos[j]] += shuffle_sign(c, a) * sj * v
    return out


def symbol_eval(Xi: OperatorMatrix, zeta: WedgeTensor, eta: WedgeTensor):
    """<<Xi e+(zeta), e+(eta)>>."""
    if (Xi.domain, Xi.codomain) != ("even", "even"):
        raise ValueError("the symbol is defined for even-to-even operators")
    if zeta.ms.d != Xi.ms.d or eta.ms.d != Xi.ms.d:
        raise ValueError("mode count mismatch")
    return fock_pairing(Xi.apply(exp_vector(zeta)), exp_vector(eta))


def build_car_kernel(kind: str, f: WedgeTensor, g: WedgeTensor) -> KernelDistribution:
    """Kernels for a+(f)a+(g) (``cc``), a(f)a(g) (``aa``) and a+(f)a(g) (``ca``).

    ``cc`` and ``aa`` reproduce the ladder products on the whole even sector.
    ``ca`` is the pair kernel of dGamma(f (x) g) on two particles; its operator
    agrees with a+(f)a(g) on degrees 0 and 2 only; from degree 4 on it
    counts each occupied pair, so the exact expansion also needs higher terms.
    """
    if f.degree != 1 or g.degree != 1:
        raise ValueError("ladder kernels need degree-1 vectors")
    ms = f.ms
    one = wedge_scalar(ms, ms.one())
    if kind == "cc":
        return KernelDistribution(ms, 1, 0, alt_from_wedges(wedge_product(f, g), one))
    if kind == "aa":
        return KernelDistribution(ms, 0, 1, alt_from_wedges(one, wedge_product(g, f)))
    if kind == "ca":
        return KernelDistribution(ms, 1, 1, _pair_number_kernel(f, g))
    raise ValueError(f"unknown kind {kind!r}; expected cc, aa or ca")


def _pair_number_kernel(f: WedgeTensor, g: WedgeTensor) -> AltBlockTensor:
    # k_{I,J} = coefficient of e_I in dGamma^(2)(f (x) g) e_J, where (f (x) g)h = <g,h> f
    ms = f.ms
    acc = defaultdict(int)
    for j1, j2 in itertools.combinations(range(ms.d), 2):
        e1 = WedgeTensor(ms, 1, {1 << j1: 1})
        e2 = WedgeTensor(ms, 1, {1 << j2: 1})
        image = (wedge_product(f, e2) * g.coeffs.get(1 << j1, 0)
                 + wedge_product(e1, f) * g.coeffs.get(1 << j2, 0))
        for i, v in image.coeffs.items():
            acc[(i, (1 << j1) | (1 << j2))] += v
    return AltBlockTensor(ms, 2, 2, acc)
