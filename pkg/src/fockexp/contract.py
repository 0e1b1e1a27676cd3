"""Contractions of tensors over shared slots.

Two representations live here. :class:`BlockTensor` is a dense tuple-keyed tensor
with a split into a left block of ``l`` slots and a right block of ``m`` slots.
:class:`AltBlockTensor` is the canonical form of a tensor that is antisymmetric
separately in each block: ``sum c_{I,J} e_I (x) e_J`` over ascending subsets.

Contracted slots are always a contiguous leading block (left contraction) or a
trailing block (right contraction).
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from typing import Union

from .modespace import ModeSpace
from .wedge import (
    DenseTensor,
    WedgeTensor,
    antisymmetrize,
    embed_dense,
    mask_modes,
    modes_mask,
    perm_sign,
    popcount,
    shuffle_sign,
    subsets,
)


class BlockTensor:
    __slots__ = ("ms", "l", "m", "coeffs")

    def __init__(self, ms: ModeSpace, l: int, m: int, coeffs=None):
        self.ms = ms
        self.l = l
        self.m = m
        out = {}
        for k, v in (coeffs or {}).items():
            k = tuple(k)
            if len(k) != l + m:
                raise ValueError(f"tuple {k} does not have {l + m} slots")
            if v != 0:
                out[k] = v
        self.coeffs = out

    @property
    def degree(self) -> int:
        return self.l + self.m

    def __repr__(self):
        return f"BlockTensor(l={self.l}, m={self.m}, nnz={len(self.coeffs)})"

    def __eq__(self, other):
        if not isinstance(other, BlockTensor):
            return NotImplemented
        return (self.l, self.m) == (other.l, other.m) and self.coeffs == other.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return BlockTensor(self.ms, self.l, self.m, out)

    def __mul__(self, c):
        return BlockTensor(self.ms, self.l, self.m, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + (-1) * other

    def dense(self) -> DenseTensor:
        return DenseTensor(self.ms, self.degree, self.coeffs)


def as_block(x, l: int) -> BlockTensor:
    """View a dense or wedge tensor as a BlockTensor with ``l`` leading slots."""
    if isinstance(x, BlockTensor):
        return BlockTensor(x.ms, l, x.degree - l, x.coeffs)
    if isinstance(x, WedgeTensor):
        x = embed_dense(x)
    if not 0 <= l <= x.degree:
        raise ValueError("block split out of range")
    return BlockTensor(x.ms, l, x.degree - l, x.coeffs)


def _tuples(x):
    if isinstance(x, WedgeTensor):
        x = embed_dense(x)
    return x.ms, x.degree, x.coeffs


class AltBlockTensor:
    __slots__ = ("ms", "l", "m", "coeffs")

    def __init__(self, ms: ModeSpace, l: int, m: int, coeffs=None):
        self.ms = ms
        self.l = l
        self.m = m
        out = {}
        for (a, b), v in (coeffs or {}).items():
            if popcount(a) != l or popcount(b) != m:
                raise ValueError("subset sizes do not match the block sizes")
            if v != 0:
                out[(a, b)] = v
        self.coeffs = out

    def __repr__(self):
        return f"AltBlockTensor(l={self.l}, m={self.m}, nnz={len(self.coeffs)})"

    def __eq__(self, other):
        if not isinstance(other, AltBlockTensor):
            return NotImplemented
        return (self.l, self.m) == (other.l, other.m) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.l, self.m, tuple(sorted(self.coeffs.items()))))

    def __add__(self, other):
        if (self.l, self.m) != (other.l, other.m):
            raise ValueError("block shapes differ")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return AltBlockTensor(self.ms, self.l, self.m, out)

    def __mul__(self, c):
        return AltBlockTensor(self.ms, self.l, self.m, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + (-1) * other

    def is_zero(self) -> bool:
        return not self.coeffs

    def block(self) -> BlockTensor:
        """Dense embedding: entry sign(s) sign(t) c_{I,J} / (l! m!) on permutations of I and J."""
        norm = math.factorial(self.l) * math.factorial(self.m)
        out = {}
        for (a, b), c in self.coeffs.items():
            for s in itertools.permutations(mask_modes(a)):
                ss = perm_sign(s)
                for t in itertools.permutations(mask_modes(b)):
                    out[s + t] = ss * perm_sign(t) * c / norm
        return BlockTensor(self.ms, self.l, self.m, out)

    def max_abs(self):
        return max((abs(v) for v in self.coeffs.values()), default=0)


def alt_from_wedges(left: WedgeTensor, right: WedgeTensor) -> AltBlockTensor:
    """The alt-class element left (x) right."""
    out = {(a, b): va * vb for a, va in left.coeffs.items() for b, vb in right.coeffs.items()}
    return AltBlockTensor(left.ms, left.degree, right.degree, out)


def alt_pairing(x: AltBlockTensor, y: AltBlockTensor):
    """Bilinear pairing of two alt-class tensors: sum c_{IJ} c'_{IJ} / (l! m!)."""
    if (x.l, x.m) != (y.l, y.m):
        raise ValueError("block shapes differ")
    s = sum((v * y.coeffs[k] for k, v in x.coeffs.items() if k in y.coeffs), x.ms.zero())
    return s / (math.factorial(x.l) * math.factorial(x.m))


# -- dense contractions ------------------------------------------------------

def contract_left(F, g, m: int) -> DenseTensor:
    """F (x)^m g: sum over the leading m slots of F and of g."""
    ms, dF, cF = _tuples(F)
    _, dg, cg = _tuples(g)
    if m > dF or m > dg:
        raise ValueError(f"cannot contract {m} slots of degrees {dF}, {dg}")
    groups = defaultdict(list)
    for t, v in cg.items():
        groups[t[:m]].append((t[m:], v))
    acc = defaultdict(int)
    for t, v in cF.items():
        for k, w in groups.get(t[:m], ()):
            acc[t[m:] + k] += v * w
    return DenseTensor(ms, dF + dg - 2 * m, {k: v for k, v in acc.items() if v != 0})


def contract_right(F, g, m: int) -> DenseTensor:
    """F (x)_m g: sum over the trailing m slots of F and of g."""
    ms, dF, cF = _tuples(F)
    _, dg, cg = _tuples(g)
    if m > dF or m > dg:
        raise ValueError(f"cannot contract {m} slots of degrees {dF}, {dg}")
    groups = defaultdict(list)
    for t, v in cg.items():
        groups[t[dg - m:]].append((t[:dg - m], v))
    acc = defaultdict(int)
    for t, v in cF.items():
        for k, w in groups.get(t[dF - m:], ()):
            acc[t[:dF - m] + k] += v * w
    return DenseTensor(ms, dF + dg - 2 * m, {k: v for k, v in acc.items() if v != 0})


def wedge_contract(F, g, m: int, side: str = "left") -> WedgeTensor:
    """Alternized contraction: F ^^m g (left) or F ^_m g (right)."""
    if side == "left":
        return antisymmetrize(contract_left(F, g, m))
    if side == "right":
        return antisymmetrize(contract_right(F, g, m))
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def transpose_t(psi: BlockTensor) -> BlockTensor:
    l = psi.l
    return BlockTensor(psi.ms, psi.m, psi.l, {t[l:] + t[:l]: v for t, v in psi.coeffs.items()})


def contraction_c(x: BlockTensor, n: int) -> BlockTensor:
    """c(l,m;n): trace the leading n slots of the left block against those of the right block."""
    l, m = x.l, x.m
    if n > min(l, m) or n < 0:
        raise ValueError(f"n={n} exceeds min(l, m)={min(l, m)}")
    acc = defaultdict(int)
    for t, v in x.coeffs.items():
        if t[:n] == t[l:l + n]:
            acc[t[n:l] + t[l + n:]] += v
    return BlockTensor(x.ms, l - n, m - n, {k: v for k, v in acc.items() if v != 0})


def contraction_c_adjoint(y: BlockTensor, l: int, m: int, n: int) -> BlockTensor:
    """Pairing adjoint of c(l,m;n): insert a diagonal n-block at the head of both blocks."""
    if (y.l, y.m) != (l - n, m - n):
        raise ValueError("degree mismatch for the adjoint")
    out = {}
    for i in itertools.product(range(y.ms.d), repeat=n):
        for t, v in y.coeffs.items():
            out[i + t[:y.l] + i + t[y.l:]] = v
    return BlockTensor(y.ms, l, m, out)


def block_pairing(x: BlockTensor, y: BlockTensor):
    if x.degree != y.degree:
        raise ValueError("degree mismatch")
    return sum((v * y.coeffs[k] for k, v in x.coeffs.items() if k in y.coeffs), x.ms.zero())


def alt_project(kappa: BlockTensor) -> AltBlockTensor:
    """Antisymmetrize each block separately; returns the alt-class representative."""
    l = kappa.l
    acc = defaultdict(int)
    for t, v in kappa.coeffs.items():
        s = perm_sign(t[:l]) * perm_sign(t[l:])
        if s:
            acc[(modes_mask(t[:l]), modes_mask(t[l:]))] += s * v
    return AltBlockTensor(kappa.ms, kappa.l, kappa.m, {k: v for k, v in acc.items() if v != 0})


def mixed_norm_sq(F: BlockTensor, p, q):
    """|F|^2_{l,m;p,q} = sum |F_{(i,j)}|^2 |e(i)|_p^2 |e(j)|_q^2."""
    ms, l = F.ms, F.l
    return sum((abs(v) ** 2 * ms.tuple_weight(t[:l], p) ** 2 * ms.tuple_weight(t[l:], q) ** 2
                for t, v in F.coeffs.items()), ms.zero())


def mixed_norm(F: BlockTensor, p, q):
    """Float value of |F|_{l,m;p,q}; the exact square in rational arithmetic."""
    sq = mixed_norm_sq(F, p, q)
    return sq if F.ms.exact else math.sqrt(sq)


def alt_mixed_norm_sq(x: AltBlockTensor, p, q):
    """Same value as ``mixed_norm_sq(x.block(), p, q)`` without expanding permutations."""
    ms = x.ms
    norm = math.factorial(x.l) * math.factorial(x.m)
    s = sum((abs(c) ** 2 * ms.subset_weight(a, p) ** 2 * ms.subset_weight(b, q) ** 2
             for (a, b), c in x.coeffs.items()), ms.zero())
    return s / norm


# -- subset-level contraction operators --------------------------------------

def alt_contract(x: AltBlockTensor, n: int) -> AltBlockTensor:
    """c(l,m;n) restricted to the alt class, computed on subsets.

    For e_I (x) e_J the result is sum over n-subsets C of I & J of
    eps(C,I) eps(C,J) (|I|-n)! (|J|-n)! n! / (|I|! |J|!) e_{I-C} (x) e_{J-C}.
    """
    l, m = x.l, x.m
    if n > min(l, m) or n < 0:
        raise ValueError(f"n={n} exceeds min(l, m)")
    scale = math.factorial(l - n) * math.factorial(m - n) * math.factorial(n)
    den = math.factorial(l) * math.factorial(m)
    acc = defaultdict(int)
    for (a, b), v in x.coeffs.items():
        common = a & b
        for cmodes in itertools.combinations(mask_modes(common), n):
            c = modes_mask(cmodes)
            ra, rb = a & ~c, b & ~c
            acc[(ra, rb)] += shuffle_sign(c, ra) * shuffle_sign(c, rb) * v * scale / den
    return AltBlockTensor(x.ms, l - n, m - n, {k: v for k, v in acc.items() if v != 0})


def alt_c_adjoint(y: AltBlockTensor, l: int, m: int) -> AltBlockTensor:
    """alt_project(c(l,m;n)^*(y)) with n = l - y.l, computed on subsets.

    Coefficient of e_I (x) e_J is n! sum_C eps(C,I) eps(C,J) y_{I-C, J-C}.
    """
    n = l - y.l
    if n < 0 or m - y.m != n:
        raise ValueError("degree mismatch for the adjoint")
    nf = math.factorial(n)
    acc = defaultdict(int)
    free_all = y.ms.full_mask
    for (a, b), v in y.coeffs.items():
        free = free_all & ~(a | b)
        for cmodes in itertools.combinations(mask_modes(free), n):
            c = modes_mask(cmodes)
            acc[(a | c, b | c)] += nf * shuffle_sign(c, a) * shuffle_sign(c, b) * v
    return AltBlockTensor(y.ms, l, m, {k: v for k, v in acc.items() if v != 0})


def alt_basis(ms: ModeSpace, l: int, m: int):
    """All (I, J) subset pairs of sizes (l, m)."""
    return [(a, b) for a in subsets(ms.d, l) for b in subsets(ms.d, m)]


TensorLike = Union[DenseTensor, WedgeTensor, BlockTensor]
