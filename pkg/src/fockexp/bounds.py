"""Numeric certification of the estimates B1..B12 in float arithmetic.

Each check evaluates its left and right sides independently and reports
``holds`` when ``lhs <= rhs * (1 + tol)``. Shape-indexed checks (B6, B7, B8)
report the worst (l, m) by ratio and keep every pair in ``detail``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .contract import (
    AltBlockTensor,
    BlockTensor,
    alt_mixed_norm_sq,
    as_block,
    contract_left,
    contract_right,
    mixed_norm_sq,
    wedge_contract,
)
from .expansion import extract_K, extract_kappa
from .fock import FockVector, annihilate, create, fock_norm_sq, fock_pairing
from .kernelop import KernelDistribution, iko_apply, symbol_eval
from .modespace import ModeSpace, schwartz_constants
from .opmatrix import OperatorMatrix, sector_basis
from .wedge import DenseTensor, WedgeTensor, dense_norm_p_sq, norm_p_sq, subsets, wedge_power

BOUND_IDS = tuple(f"B{i}" for i in range(1, 13))
TOL = 1e-12
DEFAULT_GRID = {"p": (-1.0, 0.0, 1.0), "q": (-1.0, 0.0, 1.0), "r": (0.5, 1.0, 2.0)}

ANCHORS = {
    "B1": "tensor contraction estimate",
    "B2": "antisymmetric contraction estimate",
    "B3": "integral kernel operator estimate",
    "B4": "polynomial-times-geometric supremum",
    "B5": "symbol growth estimate",
    "B6": "Taylor coefficient estimate",
    "B7": "K_{l,m} decay estimate",
    "B8": "kappa_{l,m} decay estimate",
    "B9": "ladder operator estimate",
    "B10": "auxiliary series estimate",
    "B11": "factorial estimate",
    "B12": "convergence of the expansion",
}


class BoundDomainError(ValueError):
    pass


@dataclass(frozen=True)
class BoundReport:
    bound_id: str
    params: dict
    lhs: float
    rhs: float
    holds: bool
    detail: dict = field(default_factory=dict)

    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else (0.0 if self.lhs <= 0 else math.inf)


def _report(bound_id, params, lhs, rhs, tol, **detail) -> BoundReport:
    lhs, rhs = float(lhs), float(rhs)
    return BoundReport(bound_id, dict(params), lhs, rhs, lhs <= rhs * (1 + tol), detail)


def _pow00(base: float, e: float) -> float:
    return 1.0 if e == 0 else base ** e


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _need_float(ms: ModeSpace):
    if ms.exact:
        raise BoundDomainError("bounds are certified in float arithmetic")


def _need_r(r, strict=True):
    if (strict and r <= 0) or r < 0:
        raise BoundDomainError(f"r must be {'> 0' if strict else '>= 0'}, got {r}")


# -- elementary pieces --------------------------------------------------------

def sup_poly_geometric(m: int, rho: float, c: float) -> float:
    """sup over x >= 0 of (x+m)...(x+1) rho^(c x). The log is concave in x."""
    if m == 0:
        return 1.0
    slope = -c * math.log(rho)

    def dlog(x):
        return sum(1.0 / (x + k) for k in range(1, m + 1)) - slope

    if dlog(0.0) <= 0:
        x = 0.0
    else:
        x = brentq(dlog, 0.0, m / slope + 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return math.exp(sum(math.log(x + k) for k in range(1, m + 1)) + c * x * math.log(rho))


def sup_bound(m: int, rho: float, c: float) -> float:
    return rho ** (-c / 2) * _pow00(m, m) * (rho ** (-c / 2) / (-c * math.e * math.log(rho))) ** m


def series_sum(t: float, k: int, terms: int = 400) -> float:
    """sum_{n < terms} (n+k)! / (n!)^2 t^n, summed in log space."""
    if t == 0:
        return float(math.factorial(k))
    return sum(math.exp(math.lgamma(n + k + 1) - 2 * math.lgamma(n + 1) + n * math.log(t))
               for n in range(terms))


def operator_constant(Xi: OperatorMatrix, p: float, q: float) -> float:
    """sup ||Xi phi||_p / ||phi||_q, the largest singular value of D_p M D_{-q}."""
    ms = Xi.ms
    rows = np.array([float(ms.subset_weight(k, p)) for k in Xi.row_basis])
    cols = np.array([float(ms.subset_weight(k, -q)) for k in Xi.col_basis])
    A = rows[:, None] * Xi.real_array() * cols[None, :]
    return float(np.linalg.norm(A, 2)) if A.size else 0.0


def _fnorm(phi: FockVector, p) -> float:
    return math.sqrt(fock_norm_sq(phi, p))


def _C3(ms):
    _, delta_sq = schwartz_constants(ms)
    return math.sqrt(math.e * delta_sq ** 2)


def kappa_constants(Xi: OperatorMatrix, p, q, r) -> dict:
    """C0, C3, C1 = 2 C0 e^(1 + 2 sqrt C3) and C2 = max(1, 2 e C3).

    C0 is the symbol constant taken at p + r, i.e. the norm from q to p + 2r.
    """
    C0 = operator_constant(Xi, p + 2 * r, q)
    C3 = _C3(Xi.ms)
    return {"C0": C0, "C3": C3, "C1": 2 * C0 * math.exp(1 + 2 * math.sqrt(C3)),
            "C2": max(1.0, 2 * math.e * C3)}


def geometric_R(C2: float, rho: float, r: float) -> float:
    return (C2 / 2) * rho ** (1.5 * r) / ((r / 2) * math.log(1 / rho))


def find_r_star(C2: float, rho: float, start: float = 0.5) -> float:
    """Some r with R(r) < 1: double until it holds, then bisect towards the threshold."""
    hi = start
    while geometric_R(C2, rho, hi) >= 1:
        hi *= 2
    lo = hi / 2 if hi > start else 0.0
    if lo <= 0 or geometric_R(C2, rho, lo) < 1:
        return hi
    for _ in range(60):
        mid = (lo + hi) / 2
        if geometric_R(C2, rho, mid) < 1:
            hi = mid
        else:
            lo = mid
    return hi


# -- the checks ----------------------------------------------------------------

def _b1(ms, inp, p, q, r, tol):
    F, g, m, side = inp["F"], inp["g"], inp["m"], inp.get("side", "left")
    l, n = F.degree - m, g.degree - m
    rho = float(schwartz_constants(ms)[0])
    s = max(p, q) + r
    if side == "left":
        lhs = dense_norm_p_sq(contract_left(F, g, m), p)
        Fn = mixed_norm_sq(BlockTensor(ms, m, l, F.coeffs), -q, p)
    else:
        lhs = dense_norm_p_sq(contract_right(F, g, m), p)
        Fn = mixed_norm_sq(BlockTensor(ms, l, m, F.coeffs), p, -q)
    rhs = rho ** ((m + n) * r) * math.sqrt(Fn) * math.sqrt(dense_norm_p_sq(g, s))
    return math.sqrt(lhs), rhs, {"l": l, "m": m, "n": n, "side": side}


def _b2(ms, inp, p, q, r, tol):
    F, g, m, side = inp["F"], inp["g"], inp["m"], inp.get("side", "left")
    l, n = F.degree - m, g.degree - m
    rho = float(schwartz_constants(ms)[0])
    s = max(p, q) + r
    lhs = math.sqrt(norm_p_sq(wedge_contract(F, g, m, side), p))
    blk = as_block(F, m if side == "left" else l)
    Fn = mixed_norm_sq(blk, -q, p) if side == "left" else mixed_norm_sq(blk, p, -q)
    rhs = rho ** ((m + n) * r) * math.sqrt(Fn) * math.sqrt(norm_p_sq(g, s))
    return lhs, rhs, {"l": l, "m": m, "n": n, "side": side}


def _b3(ms, inp, p, q, r, tol):
    _need_r(r)
    K, phi = inp["kernel"], inp["phi"]
    l, m = K.l, K.m
    rho = float(schwartz_constants(ms)[0])
    lhs = _fnorm(iko_apply(K, phi), p)
    factor = (rho ** (-r / 2) * math.sqrt(_pow00(2 * l, 2 * l) * _pow00(2 * m, 2 * m))
              * (rho ** (-r / 2) / (-r * math.e * math.log(rho))) ** (l + m))
    rhs = factor * math.sqrt(alt_mixed_norm_sq(K.kernel, p, -q)) * _fnorm(phi, max(p, q) + r)
    return lhs, rhs, {"l": l, "m": m}


def _b4(ms, inp, p, q, r, tol):
    c = inp.get("c", r)
    _need_r(c)
    m = inp["m"]
    rho = float(schwartz_constants(ms)[0])
    return sup_poly_geometric(m, rho, c), sup_bound(m, rho, c), {"m": m, "c": c}


def _symbol_exponent(ms, zeta, eta, p, q, r):
    rho = float(schwartz_constants(ms)[0])
    Kz = rho ** (4 * r) * norm_p_sq(zeta, max(p, q) + r) / 8
    Kw = rho ** (4 * r) * norm_p_sq(eta, -p) / 8
    return Kz, Kw


def _b5(ms, inp, p, q, r, tol):
    _need_r(r, strict=False)
    Xi, zeta, eta = inp["Xi"], inp["zeta"], inp["eta"]
    C0 = operator_constant(Xi, p + r, q)
    Kz, Kw = _symbol_exponent(ms, zeta, eta, p, q, r)
    lhs = abs(symbol_eval(Xi, zeta, eta))
    return lhs, C0 * _exp(Kz + Kw), {"C0": C0}


def _b6(ms, inp, p, q, r, tol):
    _need_r(r, strict=False)
    Xi, zeta, eta = inp["Xi"], inp["zeta"], inp["eta"]
    C0 = operator_constant(Xi, p + r, q)
    Kz, Kw = _symbol_exponent(ms, zeta, eta, p, q, r)
    top = ms.d // 2
    pairs = {}
    for l in range(top + 1):
        for m in range(top + 1):
            # a_{l,m} = <<Xi zeta^m/(2m)!, eta^l/(2l)!>>
            phi = FockVector.from_components(ms, [wedge_power(zeta, m) * (1 / math.factorial(2 * m))])
            psi = FockVector.from_components(ms, [wedge_power(eta, l) * (1 / math.factorial(2 * l))])
            a = abs(fock_pairing(Xi.apply(phi), psi))
            bound = C0 * _pow00(2 * math.e * Kw / l if l else 0.0, l / 2) \
                * _pow00(2 * math.e * Kz / m if m else 0.0, m / 2)
            pairs[(l, m)] = (a, bound)
    return _worst(pairs, {"C0": C0})


def _worst(pairs, extra):
    def ratio(v):
        a, b = v
        return a / b if b > 0 else (0.0 if a <= 0 else math.inf)

    key = max(pairs, key=lambda k: ratio(pairs[k]))
    lhs, rhs = pairs[key]
    detail = dict(extra)
    detail["worst"] = key
    detail["pairs"] = {f"{l},{m}": v for (l, m), v in sorted(pairs.items())}
    detail["all_hold"] = all(a <= b * (1 + TOL) for a, b in pairs.values())
    return lhs, rhs, detail


def _b7(ms, inp, p, q, r, tol):
    _need_r(r, strict=False)
    Xi = inp["Xi"]
    alpha = float(ms.alpha)
    rho, delta_sq = (float(x) for x in schwartz_constants(ms))
    C0 = operator_constant(Xi, p + r, q)
    s = -(max(p + alpha, q) + r + alpha)
    pairs = {}
    for (l, m), K in extract_K(Xi).items():
        lhs = math.sqrt(alt_mixed_norm_sq(K, p, s))
        rhs = C0 * (math.e * delta_sq ** 2 * rho ** (4 * r)) ** ((l + m) / 2) \
            / math.sqrt(math.factorial(2 * l) * math.factorial(2 * m))
        pairs[(l, m)] = (lhs, rhs)
    return _worst(pairs, {"C0": C0})


def _b8(ms, inp, p, q, r, tol):
    _need_r(r, strict=False)
    Xi = inp["Xi"]
    alpha = float(ms.alpha)
    rho = float(schwartz_constants(ms)[0])
    consts = kappa_constants(Xi, p, q, r)
    s = -(max(p + r + alpha, q) + 3 * r + 2 * alpha)
    fam = extract_kappa(Xi)
    pairs = {}
    top = ms.d // 2
    for l in range(top + 1):
        for m in range(top + 1):
            lhs = math.sqrt(alt_mixed_norm_sq(fam.kernel(l, m), p, s))
            rhs = consts["C1"] * (consts["C2"] * rho ** (2 * r)) ** (l + m) \
                / math.sqrt(math.factorial(2 * l) * math.factorial(2 * m))
            pairs[(l, m)] = (lhs, rhs)
    return _worst(pairs, consts)


def _b9(ms, inp, p, q, r, tol):
    _need_r(r)
    f, phi, kind = inp["f"], inp["phi"], inp.get("kind", "annihilate")
    rho = float(schwartz_constants(ms)[0])
    factor = math.sqrt(rho ** (-2 * r) / (-2 * r * math.e * math.log(rho)))
    if kind == "create":
        lhs = _fnorm(create(f, phi), p)
        fn = math.sqrt(norm_p_sq(f, p))
    elif kind == "annihilate":
        lhs = _fnorm(annihilate(f, phi), p)
        fn = math.sqrt(norm_p_sq(f, -(q + r)))
    else:
        raise BoundDomainError(f"unknown ladder kind {kind!r}")
    return lhs, factor * fn * _fnorm(phi, max(p, q) + r), {"kind": kind}


def _b10(ms, inp, p, q, r, tol):
    t, k = inp["t"], inp["k"]
    if t < 0 or k < 0:
        raise BoundDomainError("B10 needs t >= 0 and k >= 0")
    lhs = series_sum(t, k, inp.get("terms", 400))
    return lhs, _pow00(t + k, k) * math.exp(t), {"t": t, "k": k}


def _b11(ms, inp, p, q, r, tol):
    l = inp["l"]
    return math.factorial(2 * l), (2 ** l * math.factorial(l)) ** 2, {"l": l}


def _b12(ms, inp, p, q, r, tol):
    _need_r(r)
    Xi, phi = inp["Xi"], inp["phi"]
    alpha = float(ms.alpha)
    rho = float(schwartz_constants(ms)[0])
    C2 = max(1.0, 2 * math.e * _C3(ms))
    r_used = r if geometric_R(C2, rho, r) < 1 else find_r_star(C2, rho, r)
    R = geometric_R(C2, rho, r_used)
    consts = kappa_constants(Xi, p, q, r_used)
    tail = consts["C1"] * rho ** (-r_used / 2) / (1 - R) ** 2
    lhs = sum(_fnorm(iko_apply(K, phi), p) for K in extract_kappa(Xi).terms.values())
    s = max(p + r_used + alpha, q) + 4 * r_used + 2 * alpha
    return lhs, tail * _fnorm(phi, s), dict(consts, r_used=r_used, R=R, tail=tail)


_CHECKS = {"B1": _b1, "B2": _b2, "B3": _b3, "B4": _b4, "B5": _b5, "B6": _b6, "B7": _b7,
           "B8": _b8, "B9": _b9, "B10": _b10, "B11": _b11, "B12": _b12}


def verify_bound(bound_id: str, ms: ModeSpace, inputs: dict, params: dict, tol: float = TOL) -> BoundReport:
    if bound_id not in _CHECKS:
        raise BoundDomainError(f"unknown bound {bound_id!r}")
    _need_float(ms)
    p, q, r = (float(params.get(k, 0.0)) for k in ("p", "q", "r"))
    if "alpha" in params and float(params["alpha"]) != float(ms.alpha):
        raise BoundDomainError("alpha is fixed by the mode space")
    full = {"p": p, "q": q, "r": r, "alpha": float(ms.alpha)}
    lhs, rhs, detail = _CHECKS[bound_id](ms, inputs, p, q, r, tol)
    if "all_hold" in detail:
        rep = _report(bound_id, full, lhs, rhs, tol, **detail)
        return BoundReport(rep.bound_id, rep.params, rep.lhs, rep.rhs, detail["all_hold"], rep.detail)
    return _report(bound_id, full, lhs, rhs, tol, **detail)


# -- random instances ------------------------------------------------------------

def _gauss(rng):
    return rng.gauss(0.0, 1.0)


def random_dense(ms, degree, rng, density=0.6) -> DenseTensor:
    coeffs = {t: _gauss(rng) for t in itertools.product(range(ms.d), repeat=degree) if rng.random() < density}
    return DenseTensor(ms, degree, coeffs)


def random_wedge(ms, degree, rng) -> WedgeTensor:
    return WedgeTensor(ms, degree, {k: _gauss(rng) for k in subsets(ms.d, degree)})


def random_even_fock(ms, rng) -> FockVector:
    return FockVector(ms, {k: _gauss(rng) for k in sector_basis(ms, "even")})


def random_operator(ms, rng, domain="even", codomain="even") -> OperatorMatrix:
    rows, cols = len(sector_basis(ms, codomain)), len(sector_basis(ms, domain))
    return OperatorMatrix(ms, domain, codomain, [[_gauss(rng) for _ in range(cols)] for _ in range(rows)])


def random_kernel(ms, l, m, rng) -> KernelDistribution:
    coeffs = {(a, b): _gauss(rng) for a in subsets(ms.d, 2 * l) for b in subsets(ms.d, 2 * m)}
    return KernelDistribution(ms, l, m, AltBlockTensor(ms, 2 * l, 2 * m, coeffs))


def random_inputs(bound_id: str, ms: ModeSpace, rng: random.Random) -> dict:
    top = ms.d // 2
    if bound_id in ("B1", "B2"):
        while True:
            l, m, n = rng.randint(0, 2), rng.randint(1, 2), rng.randint(0, 2)
            if l + m + n <= ms.d:
                break
        side = rng.choice(["left", "right"])
        if bound_id == "B1":
            return {"F": random_dense(ms, l + m, rng), "g": random_dense(ms, m + n, rng), "m": m, "side": side}
        return {"F": random_wedge(ms, l + m, rng), "g": random_wedge(ms, m + n, rng), "m": m, "side": side}
    if bound_id == "B3":
        return {"kernel": random_kernel(ms, rng.randint(0, top), rng.randint(0, top), rng),
                "phi": random_even_fock(ms, rng)}
    if bound_id == "B4":
        return {"m": rng.randint(0, 8)}
    if bound_id in ("B5", "B6"):
        # log-uniform scales keep the exponential factor informative on the whole grid
        zeta = random_wedge(ms, 2, rng) * 10 ** rng.uniform(-2, 0)
        eta = random_wedge(ms, 2, rng) * 10 ** rng.uniform(-2, 0)
        return {"Xi": random_operator(ms, rng), "zeta": zeta, "eta": eta}
    if bound_id in ("B7", "B8"):
        return {"Xi": random_operator(ms, rng)}
    if bound_id == "B9":
        return {"f": random_wedge(ms, 1, rng), "phi": FockVector(ms, {k: _gauss(rng) for k in sector_basis(ms, "full")}),
                "kind": rng.choice(["create", "annihilate"])}
    if bound_id == "B10":
        return {"t": rng.uniform(0.0, 5.0), "k": rng.randint(0, 6)}
    if bound_id == "B11":
        return {"l": rng.randint(0, 12)}
    if bound_id == "B12":
        return {"Xi": random_operator(ms, rng), "phi": random_even_fock(ms, rng)}
    raise BoundDomainError(f"unknown bound {bound_id!r}")


def grid_points(grid: dict = None):
    grid = grid or DEFAULT_GRID
    return [{"p": p, "q": q, "r": r} for p in grid["p"] for q in grid["q"] for r in grid["r"]]


def certify(ms: ModeSpace, seed: int = 0, instances: int = 20, grid: dict = None,
            bound_ids=BOUND_IDS, tol: float = TOL) -> list[BoundReport]:
    """Every bound on ``instances`` random inputs, each checked at every grid point."""
    out = []
    for bid in bound_ids:
        rng = random.Random(f"{seed}:{bid}")
        for _ in range(instances):
            inp = random_inputs(bid, ms, rng)
            for params in grid_points(grid):
                out.append(verify_bound(bid, ms, inp, params, tol))
    return out
