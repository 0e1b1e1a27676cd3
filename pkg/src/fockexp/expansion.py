"""Kernel extraction, reconstruction and the parity-block expansion of a general operator."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

from .contract import AltBlockTensor, alt_c_adjoint, alt_contract, alt_pairing
from .fock import annihilate, create, weyl_W
from .wedge import inner
from .kernelop import KernelDistribution, build_car_kernel, iko_matrix
from .modespace import ModeSpace
from .opmatrix import OperatorMatrix, from_function, zeros
from .wedge import WedgeTensor, subsets

BLOCKS = ("++", "+-", "-+", "--")
_SECTOR = {"+": "even", "-": "odd"}


@dataclass
class KernelFamily:
    ms: ModeSpace
    terms: dict = field(default_factory=dict)
    left_W: Optional[WedgeTensor] = None
    right_W: Optional[WedgeTensor] = None

    def __post_init__(self):
        top = self.ms.d // 2
        for (l, m), K in self.terms.items():
            if not (0 <= l <= top and 0 <= m <= top):
                raise ValueError(f"term ({l},{m}) exceeds the even degree range")
            if (K.l, K.m) != (l, m):
                raise ValueError(f"term stored under ({l},{m}) has shape ({K.l},{K.m})")

    @property
    def domain(self) -> str:
        return "odd" if self.right_W is not None else "even"

    @property
    def codomain(self) -> str:
        return "odd" if self.left_W is not None else "even"

    def kernel(self, l: int, m: int) -> AltBlockTensor:
        K = self.terms.get((l, m))
        return K.kernel if K is not None else AltBlockTensor(self.ms, 2 * l, 2 * m)

    def is_zero(self) -> bool:
        return all(K.is_zero() for K in self.terms.values())


def _shapes(ms: ModeSpace):
    """(l, m) in extraction order: increasing min(l, m), then lexicographic."""
    top = ms.d // 2
    pairs = [(l, m) for l in range(top + 1) for m in range(top + 1)]
    return sorted(pairs, key=lambda lm: (min(lm), lm))


def _check_even_op(Xi: OperatorMatrix):
    if (Xi.domain, Xi.codomain) != ("even", "even"):
        from .fock import ParityError

        raise ParityError(f"expected an even-to-even operator, got {Xi.codomain}<-{Xi.domain}")


def extract_K(Xi: OperatorMatrix) -> dict:
    """K_{l,m} with coefficients equal to the matrix elements <<Xi e_J, e_I>>."""
    _check_even_op(Xi)
    ms = Xi.ms
    out = {}
    for l, m in _shapes(ms):
        coeffs = {}
        for a in subsets(ms.d, 2 * l):
            for b in subsets(ms.d, 2 * m):
                coeffs[(a, b)] = Xi.entry(a, b)
        out[(l, m)] = AltBlockTensor(ms, 2 * l, 2 * m, coeffs)
    return out


def _family(ms, kernels: dict) -> KernelFamily:
    terms = {lm: KernelDistribution(ms, lm[0], lm[1], k) for lm, k in kernels.items() if not k.is_zero()}
    return KernelFamily(ms, terms)


def extract_kappa(Xi: OperatorMatrix) -> KernelFamily:
    """Kernels by the recursion: subtract the contracted lower kernels, shape by shape."""
    _check_even_op(Xi)
    ms = Xi.ms
    kappa = {}
    for l, m in _shapes(ms):
        norm = math.factorial(2 * l) * math.factorial(2 * m)
        coeffs = {}
        for a in subsets(ms.d, 2 * l):
            for b in subsets(ms.d, 2 * m):
                x = AltBlockTensor(ms, 2 * l, 2 * m, {(a, b): ms.one()})
                val = Xi.entry(a, b) / norm
                for n in range(1, min(l, m) + 1):
                    lower = kappa[(l - n, m - n)]
                    if lower.is_zero():
                        continue
                    val -= alt_pairing(lower, alt_contract(x, 2 * n)) / math.factorial(2 * n)
                coeffs[(a, b)] = val * norm
        kappa[(l, m)] = AltBlockTensor(ms, 2 * l, 2 * m, coeffs)
    return _family(ms, kappa)


def composition_coefficient(k: int, one=1):
    """sum over compositions (k_1..k_t) of k of (-1)^t / prod (2k_i)!; equals 1 at k = 0."""
    if k == 0:
        return one
    total = 0 * one
    for t in range(1, k + 1):
        for cuts in itertools.combinations(range(1, k), t - 1):
            parts = [b - a for a, b in zip((0,) + cuts, cuts + (k,))]
            den = math.prod(math.factorial(2 * p) for p in parts)
            total += (-1) ** t * one / den
    return total


def extract_kappa_closed(Xi: OperatorMatrix) -> KernelFamily:
    """Kernels in closed form: kappa_{l,m} = sum_k coef_k c(2l,2m;2k)^*(K_{l-k,m-k})."""
    K = extract_K(Xi)
    ms = Xi.ms
    kappa = {}
    for l, m in _shapes(ms):
        acc = AltBlockTensor(ms, 2 * l, 2 * m)
        for k in range(min(l, m) + 1):
            lower = K[(l - k, m - k)]
            if lower.is_zero():
                continue
            acc = acc + alt_c_adjoint(lower, 2 * l, 2 * m) * composition_coefficient(k, ms.one())
        kappa[(l, m)] = acc
    return _family(ms, kappa)


# -- ladder and W matrices --------------------------------------------------

def weyl_matrix(f: WedgeTensor) -> OperatorMatrix:
    return from_function(f.ms, lambda p: weyl_W(f, p))


def ladder_matrix(kind: str, f: WedgeTensor, g: WedgeTensor, sector: str = "full") -> OperatorMatrix:
    """a+(f)a+(g), a(f)a(g) or a+(f)a(g) as a matrix on ``sector``."""
    ops = {
        "cc": lambda p: create(f, create(g, p)),
        "aa": lambda p: annihilate(f, annihilate(g, p)),
        "ca": lambda p: create(f, annihilate(g, p)),
    }
    if kind not in ops:
        raise ValueError(f"unknown kind {kind!r}")
    return from_function(f.ms, ops[kind], sector, sector)


def ladder_family(kind: str, f: WedgeTensor, g: WedgeTensor) -> KernelFamily:
    """Exact expansion of a ladder product on the even sector."""
    return extract_kappa(ladder_matrix(kind, f, g, "even"))


def car_kernel_family(kind: str, f: WedgeTensor, g: WedgeTensor) -> KernelFamily:
    K = build_car_kernel(kind, f, g)
    return KernelFamily(f.ms, {(K.l, K.m): K})


# -- reconstruction and the full expansion ----------------------------------

def _even_sum(family: KernelFamily) -> OperatorMatrix:
    out = zeros(family.ms, "even", "even")
    for K in family.terms.values():
        if K.ms != family.ms:
            raise ValueError("term lives on a different mode space")
        out = out + iko_matrix(K)
    return out


def reconstruct(family: KernelFamily) -> OperatorMatrix:
    S = _even_sum(family)
    if family.right_W is not None:
        S = S @ weyl_matrix(family.right_W).restrict("even", "odd")
    if family.left_W is not None:
        S = weyl_matrix(family.left_W).adjoint().restrict("odd", "even") @ S
    return S


def parity_blocks(Xi: OperatorMatrix) -> dict:
    """The four parity blocks, keyed "++", "+-", "-+", "--" (codomain sign first)."""
    if (Xi.domain, Xi.codomain) != ("full", "full"):
        raise ValueError("parity_blocks expects an operator on the full space")
    return {key: Xi.restrict(_SECTOR[key[0]], _SECTOR[key[1]]) for key in BLOCKS}


def is_normalized(f: WedgeTensor) -> bool:
    v = inner(f, f)
    return v == 1 if f.ms.exact else abs(v - 1) <= 1e-12


def expand_full(Xi: OperatorMatrix, f: WedgeTensor) -> dict:
    """Four kernel families whose reconstructions sum to ``Xi``; requires (f,f)_0 = 1."""
    if f.degree != 1:
        raise ValueError("f must be a degree-1 vector")
    if f.ms != Xi.ms:
        raise ValueError("mismatched mode spaces")
    if not is_normalized(f):
        raise ValueError("W(f) is an involution only when (f,f)_0 = 1")
    blocks = parity_blocks(Xi)
    W = weyl_matrix(f)
    Wt = W.adjoint()
    W_oe = W.restrict("odd", "even")
    Wt_eo = Wt.restrict("even", "odd")
    evens = {
        "++": blocks["++"],
        "+-": blocks["+-"] @ W_oe,
        "-+": Wt_eo @ blocks["-+"],
        "--": Wt_eo @ blocks["--"] @ W_oe,
    }
    out = {}
    for key, X in evens.items():
        fam = extract_kappa(X)
        fam.left_W = f if key[0] == "-" else None
        fam.right_W = f if key[1] == "-" else None
        out[key] = fam
    return out


def reconstruct_full(families: dict) -> OperatorMatrix:
    first = next(iter(families.values()))
    out = zeros(first.ms, "full", "full")
    for fam in families.values():
        out = out + reconstruct(fam).embed("full", "full")
    return out
