"""Property suites shared by the ``verify`` command and the test-suite.

Every check returns a :class:`CheckResult` naming the statement it exercises
and, on failure, the first instance that broke it.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import bounds as _bounds
from .contract import (
    BlockTensor,
    alt_from_wedges,
    alt_pairing,
    alt_project,
    block_pairing,
    contract_left,
    contract_right,
    contraction_c,
    contraction_c_adjoint,
    transpose_t,
    wedge_contract,
)
from .expansion import (
    expand_full,
    extract_K,
    extract_kappa,
    extract_kappa_closed,
    parity_blocks,
    reconstruct,
    reconstruct_full,
    weyl_matrix,
)
from .fock import FockVector, annihilate, create, describe, exp_vector, fock_norm_sq, fock_pairing, s_taylor, s_transform
from .kernelop import iko_matrix, symbol_eval
from .linalg import interpolate_2d, rank
from .modespace import ModeSpace
from .opmatrix import OperatorMatrix, from_function, identity, sector_basis, zeros
from .wedge import (
    DenseTensor,
    WedgeTensor,
    antisymmetrize,
    embed_dense,
    gram_pairing,
    norm_p_sq,
    pairing,
    subsets,
    vector,
    wedge_all,
    wedge_basis,
    wedge_power,
    wedge_product,
)

SUITES = ("car", "wedge", "contract", "bounds", "expansion", "full")


@dataclass
class CheckResult:
    name: str
    anchor: str
    passed: bool
    checked: int = 0
    counterexample: object = None
    detail: dict = field(default_factory=dict)


# -- random data ----------------------------------------------------------------

def rand_scalar(ms: ModeSpace, rng: random.Random, span: int = 5):
    if ms.exact:
        return Fraction(rng.randint(-span, span), rng.randint(1, 4))
    return rng.uniform(-span, span)


def rand_vector(ms, rng) -> WedgeTensor:
    return vector(ms, [rand_scalar(ms, rng) for _ in range(ms.d)])


def rand_wedge(ms, degree, rng) -> WedgeTensor:
    return WedgeTensor(ms, degree, {k: rand_scalar(ms, rng) for k in subsets(ms.d, degree) if rng.random() < 0.8})


def rand_dense(ms, degree, rng, density=0.5) -> DenseTensor:
    return DenseTensor(ms, degree, {t: rand_scalar(ms, rng) for t in itertools.product(range(ms.d), repeat=degree)
                                    if rng.random() < density})


def rand_block(ms, l, m, rng) -> BlockTensor:
    return BlockTensor(ms, l, m, rand_dense(ms, l + m, rng).coeffs)


def rand_fock(ms, rng, sector="full") -> FockVector:
    return FockVector(ms, {k: rand_scalar(ms, rng) for k in sector_basis(ms, sector) if rng.random() < 0.8})


def rand_operator(ms, rng, sector="even") -> OperatorMatrix:
    n = len(sector_basis(ms, sector))
    return OperatorMatrix(ms, sector, sector, [[rand_scalar(ms, rng) for _ in range(n)] for _ in range(n)])


def rand_unit_vector(ms, rng) -> WedgeTensor:
    """Rational point on the unit sphere by inverse stereographic projection."""
    t = [Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(ms.d - 1)]
    s = sum(x * x for x in t)
    vals = [2 * x / (s + 1) for x in t] + [(s - 1) / (s + 1)]
    if not ms.exact:
        vals = [float(v) for v in vals]
    return vector(ms, vals)


def _first_diff(A: OperatorMatrix, B: OperatorMatrix):
    for i, rk in enumerate(A.row_basis):
        for j, ck in enumerate(A.col_basis):
            if A.data[i, j] != B.data[i, j]:
                return {"row": describe(rk), "col": describe(ck), "got": str(A.data[i, j]), "want": str(B.data[i, j])}
    return None


# -- car ----------------------------------------------------------------------

def car_checks(ms: ModeSpace, rng: random.Random, w_count: int = 20) -> list[CheckResult]:
    C = [from_function(ms, lambda p, i=i: create(wedge_basis(ms, i), p)) for i in range(1, ms.d + 1)]
    A = [from_function(ms, lambda p, i=i: annihilate(wedge_basis(ms, i), p)) for i in range(1, ms.d + 1)]
    I = identity(ms)
    Z = zeros(ms, "full", "full")
    out = []

    bad = None
    for i, j in itertools.product(range(ms.d), repeat=2):
        want = I if i == j else Z
        diff = _first_diff(C[i] @ A[j] + A[j] @ C[i], want)
        if diff:
            bad = dict(f=f"e{i + 1}", g=f"e{j + 1}", **diff)
            break
    out.append(CheckResult("anticommutator {a+(f), a(g)} = <g,f>", "CAR relations", bad is None,
                           ms.d ** 2, bad))

    bad = None
    for i in range(ms.d):
        for name, M in (("a", A[i]), ("a+", C[i])):
            if not (M @ M).is_zero():
                bad = {"op": f"{name}(e{i + 1})^2", **(_first_diff(M @ M, Z) or {})}
                break
        if bad:
            break
    out.append(CheckResult("a(f)^2 = a+(f)^2 = 0", "CAR relations", bad is None, 2 * ms.d, bad))

    bad = next(({"f": f"e{i + 1}", **(_first_diff(C[i].adjoint(), A[i]) or {})}
                for i in range(ms.d) if C[i].adjoint() != A[i]), None)
    out.append(CheckResult("<<a+(f) Phi, phi>> = <<Phi, a(f) phi>>", "ladder duality", bad is None, ms.d, bad))

    bad = None
    for _ in range(w_count):
        f = rand_unit_vector(ms, rng)
        W = weyl_matrix(f)
        if W @ W != I:
            bad = {"f": [str(f.coeffs.get(1 << j, 0)) for j in range(ms.d)]}
            break
    out.append(CheckResult("W(f)^2 = 1 for (f,f)_0 = 1", "W involution", bad is None, w_count, bad))

    bad = None
    for _ in range(max(1, w_count // 4)):
        f = rand_unit_vector(ms, rng) * 2
        W = weyl_matrix(f)
        if W @ W != I * 4:
            bad = {"f": [str(f.coeffs.get(1 << j, 0)) for j in range(ms.d)]}
            break
    out.append(CheckResult("W(f)^2 = 4 for (f,f)_0 = 4", "W involution (scaling)", bad is None,
                           max(1, w_count // 4), bad))
    return out


# -- wedge, exponential vectors, S-transform -------------------------------------

def determinant_checks(ms, rng, count=100, max_n=4) -> CheckResult:
    top = min(max_n, ms.d)
    for k in range(count):
        n = rng.randint(1, top)
        fs = [rand_vector(ms, rng) for _ in range(n)]
        gs = [rand_vector(ms, rng) for _ in range(n)]
        lhs, rhs = pairing(wedge_all(fs), wedge_all(gs)), gram_pairing(fs, gs)
        if lhs != rhs:
            return CheckResult("pairing of wedges = det / n!", "determinant formula", False, k + 1,
                               {"n": n, "lhs": str(lhs), "rhs": str(rhs)})
    return CheckResult("pairing of wedges = det / n!", "determinant formula", True, count)


def wedge_checks(ms, rng, count=30) -> list[CheckResult]:
    out = [determinant_checks(ms, rng, count=max(count, 1))]
    bad = None
    for _ in range(count):
        n = rng.randint(0, min(3, ms.d))
        x = rand_dense(ms, n, rng)
        a = antisymmetrize(x)
        if antisymmetrize(embed_dense(a)) != a:
            bad = {"degree": n}
            break
    out.append(CheckResult("alternizer is idempotent", "alternizer projection", bad is None, count, bad))

    bad = None
    for _ in range(count):
        na, nb, nc = (rng.randint(0, 2) for _ in range(3))
        a, b, c = rand_wedge(ms, na, rng), rand_wedge(ms, nb, rng), rand_wedge(ms, nc, rng)
        if wedge_product(a, b) != wedge_product(b, a) * (-1) ** (na * nb):
            bad = {"law": "graded commutativity", "degrees": [na, nb]}
            break
        if wedge_product(wedge_product(a, b), c) != wedge_product(a, wedge_product(b, c)):
            bad = {"law": "associativity", "degrees": [na, nb, nc]}
            break
    out.append(CheckResult("graded commutativity and associativity", "wedge algebra", bad is None, count, bad))
    out.extend(s_transform_checks(ms, rng, count=count))
    if ms.d >= 2:
        out.append(density_check(ms, rng))
    return out


def s_transform_checks(ms, rng, count=20, norm_count=50) -> list[CheckResult]:
    out = []
    bad = None
    for _ in range(count):
        Phi = rand_fock(ms, rng, "even")
        zeta = rand_wedge(ms, 2, rng)
        a, b = s_transform(Phi, zeta), s_transform(Phi, zeta, method="series")
        if a != b:
            bad = {"pairing": str(a), "series": str(b)}
            break
    out.append(CheckResult("S-transform: pairing path = series path", "S-transform", bad is None, count, bad))

    bad = None
    for _ in range(count):
        Phi = rand_fock(ms, rng, "even")
        zeta, eta = rand_wedge(ms, 2, rng), rand_wedge(ms, 2, rng)
        coeffs = s_taylor(Phi, zeta, eta)
        for z in (0, 1, -1, 2):
            z = ms.scalar(z)
            poly = sum((c * z ** k for k, c in enumerate(coeffs)), ms.zero())
            direct = s_transform(Phi, zeta * z + eta)
            if poly != direct:
                bad = {"z": str(z), "poly": str(poly), "direct": str(direct)}
                break
        if bad:
            break
    out.append(CheckResult("S-transform Taylor polynomial", "holomorphy of the S-transform", bad is None, count, bad))

    fms = ms.with_arith("float")
    frng = random.Random(rng.random())
    bad = None
    for _ in range(norm_count):
        scale = 10 ** frng.uniform(-2, 0)
        zeta = WedgeTensor(fms, 2, {k: scale * frng.gauss(0, 1) for k in subsets(ms.d, 2)})
        p = frng.choice([-1.0, 0.0, 0.5, 1.0])
        lhs, rhs = fock_norm_sq(exp_vector(zeta), p), _bounds._exp(norm_p_sq(zeta, p))
        if lhs > rhs * (1 + 1e-12):
            bad = {"p": p, "lhs": lhs, "rhs": rhs}
            break
    out.append(CheckResult("||e+(zeta)||_p^2 <= exp |zeta|_p^2", "exponential vectors", bad is None, norm_count, bad))
    return out


def density_check(ms, rng, count=None) -> CheckResult:
    dim = len(sector_basis(ms, "even"))
    count = count or dim + 4
    vecs = [exp_vector(rand_wedge(ms, 2, rng)) for _ in range(count)]
    gram = [[fock_pairing(u, v) for v in vecs] for u in vecs]
    rk = rank(gram)
    return CheckResult(f"Gram matrix of {count} exponential vectors has rank {dim}", "density of exponential vectors",
                       rk == dim, count, None if rk == dim else {"rank": rk}, {"rank": rk, "dim": dim})


# -- contractions ---------------------------------------------------------------

def _shape(rng, total=4, need=(0, 0, 0)):
    while True:
        l, m, n = (rng.randint(lo, total) for lo in need)
        if l + m + n <= total:
            return l, m, n


def contraction_checks(ms, rng, count=50) -> list[CheckResult]:
    out = []

    # <kappa (x)_m phi, psi> = <kappa, t_{l,n}(psi) (x)^n phi>
    bad = None
    for _ in range(count):
        l, m, n = _shape(rng)
        kappa, phi, psi = rand_dense(ms, l + m, rng), rand_dense(ms, n + m, rng), rand_dense(ms, l + n, rng)
        lhs = pairing(contract_right(kappa, phi, m), psi)
        t_psi = transpose_t(BlockTensor(ms, l, n, psi.coeffs)).dense()
        rhs = pairing(kappa, contract_left(t_psi, phi, n))
        if lhs != rhs:
            bad = {"l": l, "m": m, "n": n, "lhs": str(lhs), "rhs": str(rhs)}
            break
    out.append(CheckResult("<kappa (x)_m phi, psi> = <kappa, t(psi) (x)^n phi>", "transpose adjoint lemma",
                           bad is None, count, bad))

    bad = None
    for _ in range(count):
        while True:
            l, m = rng.randint(0, 4), rng.randint(0, 4)
            if l + m <= 4:
                break
        n1 = rng.randint(0, min(l, m))
        n2 = rng.randint(0, min(l, m) - n1)
        x = rand_block(ms, l, m, rng)
        if contraction_c(contraction_c(x, n1), n2) != contraction_c(x, n1 + n2):
            bad = {"l": l, "m": m, "n1": n1, "n2": n2}
            break
    out.append(CheckResult("c(l-n1,m-n1;n2) c(l,m;n1) = c(l,m;n1+n2)", "contraction operator composition",
                           bad is None, count, bad))

    bad = None
    for _ in range(count):
        while True:
            l, m = rng.randint(0, 4), rng.randint(0, 4)
            if l + m <= 4:
                break
        n = rng.randint(0, min(l, m))
        x, y = rand_block(ms, l, m, rng), rand_block(ms, l - n, m - n, rng)
        lhs = block_pairing(contraction_c_adjoint(y, l, m, n), x)
        rhs = block_pairing(y, contraction_c(x, n))
        if lhs != rhs:
            bad = {"l": l, "m": m, "n": n, "lhs": str(lhs), "rhs": str(rhs)}
            break
    out.append(CheckResult("<c*(y), x> = <y, c(x)>", "contraction operator adjoint", bad is None, count, bad))

    bad = None
    for _ in range(count):
        l, m, n = _shape(rng, need=(0, 1, 0))
        F, g = rand_wedge(ms, l + m, rng), rand_wedge(ms, m + n, rng)
        left, right = wedge_contract(F, g, m, "left"), wedge_contract(F, g, m, "right")
        if left != right * (-1) ** (m * (l + n)):
            bad = {"l": l, "m": m, "n": n}
            break
    out.append(CheckResult("F ^^m g = (-1)^(m(l+n)) F ^_m g", "contraction sign lemma", bad is None, count, bad))

    bad = None
    for _ in range(count):
        while True:
            l, n = rng.randint(0, 2), rng.randint(0, 2)
            if l + 2 + n <= 4:
                break
        F, g = rand_wedge(ms, l + 2, rng), rand_wedge(ms, 2 + n, rng)
        if wedge_contract(F, g, 2, "left") != wedge_contract(F, g, 2, "right"):
            bad = {"l": l, "m": 2, "n": n}
            break
    out.append(CheckResult("left and right contraction agree for even m", "contraction sign lemma",
                           bad is None, count, bad))
    return out


# -- expansion ------------------------------------------------------------------

def _same_family(a, b) -> bool:
    return {k: v.kernel for k, v in a.terms.items()} == {k: v.kernel for k, v in b.terms.items()}


def expansion_checks(ms, rng, count=50, symbol_count=20) -> list[CheckResult]:
    ops = [rand_operator(ms, rng) for _ in range(count)]
    fams = [extract_kappa(X) for X in ops]
    out = []

    bad = next(({"instance": i, **(_first_diff(reconstruct(f), X) or {})}
                for i, (X, f) in enumerate(zip(ops, fams)) if reconstruct(f) != X), None)
    out.append(CheckResult("reconstruct(extract_kappa(Xi)) = Xi", "Fock expansion theorem", bad is None, count, bad))

    bad = None
    for i, f in enumerate(fams):
        for (l, m), K in f.terms.items():
            if alt_project(K.kernel.block()) != K.kernel:
                bad = {"instance": i, "term": [l, m]}
                break
        if bad:
            break
    out.append(CheckResult("extracted kernels are alt-canonical", "alt projection", bad is None, count, bad))

    bad = None
    for i, f in enumerate(fams):
        for (l, m), K in f.terms.items():
            again = extract_kappa(iko_matrix(K))
            if set(again.terms) != {(l, m)} or again.terms[(l, m)].kernel != K.kernel:
                bad = {"instance": i, "term": [l, m], "returned": sorted(again.terms)}
                break
        if bad:
            break
    out.append(CheckResult("extract_kappa(iko_matrix(kappa)) = {(l,m): kappa}", "injectivity lemma",
                           bad is None, count, bad))

    bad = next(({"instance": i} for i, (X, f) in enumerate(zip(ops, fams))
                if not _same_family(extract_kappa_closed(X), f)), None)
    out.append(CheckResult("closed-form kernels = recursive kernels", "composition-sum lemma", bad is None, count, bad))

    ident = extract_kappa(identity(ms, "even"))
    ok = set(ident.terms) == {(0, 0)} and ident.terms[(0, 0)].kernel.coeffs == {(0, 0): ms.one()}
    out.append(CheckResult("identity expands to kappa_00 = 1 only", "Fock expansion theorem", ok, 1,
                           None if ok else {"terms": sorted(ident.terms)}))

    out.append(symbol_checks(ms, rng, ops[:symbol_count]))
    return out


def symbol_checks(ms, rng, ops) -> CheckResult:
    top = ms.d // 2
    pts = [ms.scalar(k) for k in range(top + 1)]
    for i, X in enumerate(ops):
        zeta, eta = rand_wedge(ms, 2, rng), rand_wedge(ms, 2, rng)
        vals = [[symbol_eval(X, zeta * z, eta * w) for z in pts] for w in pts]
        coef = interpolate_2d(vals, pts)
        K = extract_K(X)
        for l in range(top + 1):
            for m in range(top + 1):
                want = alt_pairing(K[(l, m)], alt_from_wedges(wedge_power(eta, l), wedge_power(zeta, m)))
                if coef[l][m] != want:
                    return CheckResult("symbol Taylor data = <K_lm, eta^l (x) zeta^m>", "symbol of an operator",
                                       False, i + 1, {"instance": i, "l": l, "m": m,
                                                      "taylor": str(coef[l][m]), "kernel": str(want)})
    return CheckResult("symbol Taylor data = <K_lm, eta^l (x) zeta^m>", "symbol of an operator", True, len(ops))


def full_checks(ms, rng, count=20, f=None) -> list[CheckResult]:
    f = f if f is not None else wedge_basis(ms, 1)
    out = []
    bad_rt = bad_blocks = None
    broken = 0
    for i in range(count):
        X = rand_operator(ms, rng, "full")
        blocks = parity_blocks(X)
        total = zeros(ms, "full", "full")
        for B in blocks.values():
            total = total + B.embed("full", "full")
        if total != X and bad_blocks is None:
            bad_blocks = {"instance": i}
        fams = expand_full(X, f)
        if reconstruct_full(fams) != X and bad_rt is None:
            bad_rt = {"instance": i, **(_first_diff(reconstruct_full(fams), X) or {})}
        # negative control: attaching W(2f) must break the round trip
        for fam in fams.values():
            fam.left_W = f * 2 if fam.left_W is not None else None
            fam.right_W = f * 2 if fam.right_W is not None else None
        if reconstruct_full(fams) != X:
            broken += 1
    out.append(CheckResult("parity blocks reassemble", "parity decomposition", bad_blocks is None, count, bad_blocks))
    out.append(CheckResult("W-conjugated families reconstruct Xi", "whole-system Fock expansion",
                           bad_rt is None, count, bad_rt))
    out.append(CheckResult("scaled W breaks the round trip", "whole-system Fock expansion (negative control)",
                           broken == count, count, None if broken == count else {"unbroken": count - broken}))
    return out


def bound_checks(ms, seed, instances=20, grid=None, tol=_bounds.TOL) -> list[CheckResult]:
    fms = ms.with_arith("float")
    reports = _bounds.certify(fms, seed=seed, instances=instances, grid=grid, tol=tol)
    out = []
    for bid in _bounds.BOUND_IDS:
        reps = [r for r in reports if r.bound_id == bid]
        fails = [r for r in reps if not r.holds]
        worst = max(reps, key=lambda r: r.ratio())
        detail = {"worst_ratio": worst.ratio(), "worst_params": worst.params}
        if bid == "B12":
            detail.update({k: worst.detail[k] for k in ("r_used", "R", "tail")})
        cex = None
        if fails:
            cex = {"params": fails[0].params, "lhs": fails[0].lhs, "rhs": fails[0].rhs}
        out.append(CheckResult(f"{bid} holds on the grid", _bounds.ANCHORS[bid], not fails, len(reps), cex, detail))
    return out


def run_suite(name: str, ms: ModeSpace, seed: int = 0, grid=None, instances: int = 20,
              tol=_bounds.TOL) -> list[CheckResult]:
    """Algebraic suites run in exact arithmetic; the bounds suite in floating point."""
    if name != "bounds":
        ms = ms.with_arith("rational")
    rng = random.Random(f"{seed}:{name}")
    if name == "car":
        return car_checks(ms, rng)
    if name == "wedge":
        return wedge_checks(ms, rng)
    if name == "contract":
        return contraction_checks(ms, rng)
    if name == "bounds":
        return bound_checks(ms, seed, instances=instances, grid=grid, tol=tol)
    if name == "expansion":
        return expansion_checks(ms, rng, count=10, symbol_count=5)
    if name == "full":
        return full_checks(ms, rng, count=5)
    raise ValueError(f"unknown suite {name!r}")
