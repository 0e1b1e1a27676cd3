"""Antisymmetric tensors stored on ascending mode subsets, plus a dense tuple form.

A degree-n :class:`WedgeTensor` with coefficients ``c_I`` is the element
``sum_I c_I e_{i_1} ^ ... ^ e_{i_n}`` where ``e_{i_1} ^ ... ^ e_{i_n}`` is the
alternizer of ``e_{i_1} (x) ... (x) e_{i_n}`` (the 1/n! average over signed
permutations). In particular ``|e_I|_0^2 = 1/n!``.

:class:`DenseTensor` keeps arbitrary 0-based index tuples and serves as the
brute-force reference for everything computed on subsets.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from typing import Iterable, Sequence

from .linalg import det
from .modespace import ModeSpace, ModeSpaceError


# -- bit helpers -------------------------------------------------------------

def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_modes(mask: int) -> list[int]:
    """0-based ascending positions of the set bits."""
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


def modes_mask(idx: Iterable[int]) -> int:
    m = 0
    for j in idx:
        m |= 1 << j
    return m


def shuffle_sign(a: int, b: int) -> int:
    """Sign turning (sorted a, sorted b) into sorted a|b; assumes a & b == 0."""
    inv = 0
    for j in mask_modes(b):
        inv += popcount(a >> (j + 1))
    return -1 if inv & 1 else 1


def perm_sign(t: Sequence[int]) -> int:
    """Sign of the permutation sorting ``t``; 0 when ``t`` has repeated entries."""
    if len(set(t)) != len(t):
        return 0
    inv = sum(1 for i in range(len(t)) for j in range(i + 1, len(t)) if t[i] > t[j])
    return -1 if inv & 1 else 1


def subsets(d: int, n: int) -> list[int]:
    """All n-subsets of d modes as masks, lexicographic in the sorted mode tuples."""
    return [modes_mask(c) for c in itertools.combinations(range(d), n)]


# -- tensors -----------------------------------------------------------------

def _clean(coeffs) -> dict:
    return {k: v for k, v in coeffs.items() if v != 0}


class WedgeTensor:
    __slots__ = ("ms", "degree", "coeffs")

    def __init__(self, ms: ModeSpace, degree: int, coeffs=None):
        self.ms = ms
        self.degree = degree
        cleaned = {}
        for k, v in (coeffs or {}).items():
            if popcount(k) != degree or k >> ms.d:
                raise ValueError(f"subset mask {k:b} does not fit degree {degree} on {ms.d} modes")
            v = ms.scalar(v) if not isinstance(v, complex) else v
            if v != 0:
                cleaned[k] = v
        self.coeffs = cleaned

    def __repr__(self):
        terms = [f"{v}*e{tuple(j + 1 for j in mask_modes(k))}" for k, v in sorted(self.coeffs.items())]
        return f"WedgeTensor(deg={self.degree}, " + (" + ".join(terms) or "0") + ")"

    def _same(self, other):
        if not isinstance(other, WedgeTensor) or other.degree != self.degree or other.ms != self.ms:
            raise ValueError("wedge tensors must share mode space and degree")

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return WedgeTensor(self.ms, self.degree, _clean(out))

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __mul__(self, c):
        return WedgeTensor(self.ms, self.degree, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, WedgeTensor):
            return NotImplemented
        return self.ms == other.ms and self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.coeffs.items()))))

    def is_zero(self) -> bool:
        return not self.coeffs

    def conj(self) -> "WedgeTensor":
        return WedgeTensor(self.ms, self.degree, {k: v.conjugate() for k, v in self.coeffs.items()})

    def coeff(self, *modes: int):
        """Coefficient of e_{modes} (1-based, any order, sign-adjusted)."""
        idx = [i - 1 for i in modes]
        s = perm_sign(idx)
        if s == 0:
            return self.ms.zero()
        return s * self.coeffs.get(modes_mask(idx), self.ms.zero())


class DenseTensor:
    """General element of the n-fold tensor power, keyed by 0-based index tuples."""

    __slots__ = ("ms", "degree", "coeffs")

    def __init__(self, ms: ModeSpace, degree: int, coeffs=None):
        self.ms = ms
        self.degree = degree
        out = {}
        for k, v in (coeffs or {}).items():
            k = tuple(k)
            if len(k) != degree or any(not 0 <= j < ms.d for j in k):
                raise ValueError(f"index tuple {k} invalid for degree {degree}")
            if v != 0:
                out[k] = v
        self.coeffs = out

    def __repr__(self):
        return f"DenseTensor(deg={self.degree}, nnz={len(self.coeffs)})"

    def __add__(self, other):
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return DenseTensor(self.ms, self.degree, _clean(out))

    def __mul__(self, c):
        return DenseTensor(self.ms, self.degree, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + (-1) * other

    def __eq__(self, other):
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def tensor(self, other: "DenseTensor") -> "DenseTensor":
        out = {a + b: va * vb for a, va in self.coeffs.items() for b, vb in other.coeffs.items()}
        return DenseTensor(self.ms, self.degree + other.degree, out)


# -- constructors ------------------------------------------------------------

def wedge_basis(ms: ModeSpace, *modes: int) -> WedgeTensor:
    """e_{i_1} ^ ... ^ e_{i_n} for 1-based modes in any order."""
    idx = [i - 1 for i in modes]
    if any(not 0 <= j < ms.d for j in idx):
        raise ModeSpaceError(f"mode out of range in {modes}")
    s = perm_sign(idx)
    if s == 0:
        return WedgeTensor(ms, len(idx))
    return WedgeTensor(ms, len(idx), {modes_mask(idx): s * ms.one()})


def wedge_scalar(ms: ModeSpace, c) -> WedgeTensor:
    return WedgeTensor(ms, 0, {0: c})


def vector(ms: ModeSpace, values: Sequence) -> WedgeTensor:
    """Degree-1 tensor sum_j values[j-1] e_j."""
    if len(values) != ms.d:
        raise ValueError(f"need {ms.d} components")
    return WedgeTensor(ms, 1, {1 << j: v for j, v in enumerate(values)})


def tensor_basis(ms: ModeSpace, *modes: int) -> DenseTensor:
    """e(i) = e_{i_1} (x) ... (x) e_{i_n} for 1-based modes."""
    idx = tuple(i - 1 for i in modes)
    return DenseTensor(ms, len(idx), {idx: ms.one()})


def zero_wedge(ms: ModeSpace, degree: int) -> WedgeTensor:
    return WedgeTensor(ms, degree)


# -- operations --------------------------------------------------------------

def antisymmetrize(x: DenseTensor) -> WedgeTensor:
    """Alternizer of ``x`` in subset coordinates: c_I = sum_sigma sign(sigma) x_{sigma(I)}."""
    acc = defaultdict(int)
    for t, v in x.coeffs.items():
        s = perm_sign(t)
        if s:
            acc[modes_mask(t)] += s * v
    return WedgeTensor(x.ms, x.degree, _clean(acc))


def embed_dense(w: WedgeTensor) -> DenseTensor:
    n = w.degree
    nf = math.factorial(n)
    out = {}
    for mask, c in w.coeffs.items():
        base = mask_modes(mask)
        for perm in itertools.permutations(base):
            out[perm] = perm_sign(perm) * c / nf
    return DenseTensor(w.ms, n, out)


def wedge_product(a: WedgeTensor, b: WedgeTensor) -> WedgeTensor:
    if a.ms != b.ms:
        raise ValueError("mismatched mode spaces")
    acc = defaultdict(int)
    for ka, va in a.coeffs.items():
        for kb, vb in b.coeffs.items():
            if ka & kb:
                continue
            acc[ka | kb] += shuffle_sign(ka, kb) * va * vb
    return WedgeTensor(a.ms, a.degree + b.degree, _clean(acc))


def wedge_power(z: WedgeTensor, n: int) -> WedgeTensor:
    out = wedge_scalar(z.ms, z.ms.one())
    for _ in range(n):
        out = wedge_product(out, z)
    return out


def wedge_all(vectors: Sequence[WedgeTensor]) -> WedgeTensor:
    if not vectors:
        raise ValueError("need at least one factor")
    out = vectors[0]
    for v in vectors[1:]:
        out = wedge_product(out, v)
    return out


def pairing(F, g):
    """Canonical bilinear pairing sum_t F_t g_t (dense form)."""
    if F.degree != g.degree:
        raise ValueError(f"degree mismatch {F.degree} vs {g.degree}")
    if isinstance(F, WedgeTensor) and isinstance(g, WedgeTensor):
        s = sum((v * g.coeffs[k] for k, v in F.coeffs.items() if k in g.coeffs), F.ms.zero())
        return s / math.factorial(F.degree)
    Fd = embed_dense(F) if isinstance(F, WedgeTensor) else F
    gd = embed_dense(g) if isinstance(g, WedgeTensor) else g
    return sum((v * gd.coeffs[k] for k, v in Fd.coeffs.items() if k in gd.coeffs), F.ms.zero())


def inner(F: WedgeTensor, g: WedgeTensor):
    """Sesquilinear (F, g)_0 = <J F, g>."""
    return pairing(F.conj(), g)


def gram_pairing(f_list: Sequence[WedgeTensor], g_list: Sequence[WedgeTensor]):
    """(1/n!) det(<f_i, g_j>)."""
    if len(f_list) != len(g_list):
        raise ValueError("list lengths differ")
    n = len(f_list)
    if n == 0:
        raise ValueError("empty lists")
    m = [[pairing(f, g) for g in g_list] for f in f_list]
    return det(m) / math.factorial(n)


def norm_p_sq(w: WedgeTensor, p):
    """|w|_p^2 = (1/n!) sum_I |c_I|^2 (lambda_I^p)^2."""
    ms = w.ms
    s = sum((abs(c) ** 2 * ms.subset_weight(k, p) ** 2 for k, c in w.coeffs.items()), ms.zero())
    return s / math.factorial(w.degree)


def norm_p(w: WedgeTensor, p):
    """|w|_p in float arithmetic; the squared value (exact) in rational arithmetic."""
    sq = norm_p_sq(w, p)
    return sq if w.ms.exact else math.sqrt(sq)


def dense_norm_p_sq(x: DenseTensor, p):
    ms = x.ms
    return sum((abs(v) ** 2 * ms.tuple_weight(t, p) ** 2 for t, v in x.coeffs.items()), ms.zero())
