"""Canonical JSON for mode spaces, Fock vectors, operator matrices and kernel families.

Rationals are written as "num/den" strings ("3" for integers). Floats are plain
JSON numbers and complex values are {"re": x, "im": y}. Mode lists are 1-based
and ascending; entries are sorted by their mode lists.
"""

from __future__ import annotations

import json
from collections import defaultdict
from fractions import Fraction

import numpy as np

from .contract import AltBlockTensor
from .expansion import KernelFamily
from .fock import FockVector
from .kernelop import KernelDistribution
from .modespace import ModeSpace, ModeSpaceError, build_mode_space
from .opmatrix import OperatorMatrix, zeros
from .wedge import WedgeTensor, mask_modes, modes_mask, perm_sign, popcount


class FormatError(ValueError):
    pass


# -- scalars -----------------------------------------------------------------

def value_to_json(v, ms: ModeSpace):
    if ms.exact:
        return str(Fraction(v))
    v = complex(v)
    if v.imag:
        return {"re": v.real, "im": v.imag}
    return v.real


def value_from_json(x, ms: ModeSpace):
    try:
        if isinstance(x, dict):
            if ms.exact:
                raise FormatError("complex values need float arithmetic")
            return complex(float(x["re"]), float(x.get("im", 0.0)))
        if isinstance(x, bool) or not isinstance(x, (str, int, float)):
            raise FormatError(f"bad scalar {x!r}")
        if ms.exact and isinstance(x, float):
            raise FormatError(f"float {x!r} in rational mode; write it as a \"num/den\" string")
        return ms.scalar(x)
    except (ValueError, ZeroDivisionError, KeyError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"bad scalar {x!r}: {exc}") from exc


def _mask(modes, ms: ModeSpace, degree=None):
    if not isinstance(modes, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in modes):
        raise FormatError(f"mode list must be a list of integers, got {modes!r}")
    if any(not 1 <= i <= ms.d for i in modes):
        raise FormatError(f"mode list {modes} outside 1..{ms.d}")
    if degree is not None and len(modes) != degree:
        raise FormatError(f"mode list {modes} does not have {degree} entries")
    idx = [i - 1 for i in modes]
    return modes_mask(idx), perm_sign(idx)


def _modes(mask: int) -> list[int]:
    return [j + 1 for j in mask_modes(mask)]


# -- mode space ----------------------------------------------------------------

def ms_to_json(ms: ModeSpace) -> dict:
    conv = (lambda v: str(Fraction(v))) if ms.exact else float
    return {"dim": ms.d, "lambdas": [conv(x) for x in ms.lambdas], "alpha": conv(ms.alpha)}


def ms_from_json(obj, arith: str = "rational") -> ModeSpace:
    try:
        return build_mode_space(obj["dim"], obj["lambdas"], obj["alpha"], arith=arith)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"mode space needs dim, lambdas and alpha: {exc}") from exc
    except (ModeSpaceError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(str(exc)) from exc


# -- vectors -----------------------------------------------------------------

def fock_to_json(phi: FockVector) -> dict:
    comps = []
    for n, w in phi.components().items():
        entries = [{"modes": _modes(k), "value": value_to_json(v, phi.ms)} for k, v in w.coeffs.items()]
        entries.sort(key=lambda e: e["modes"])
        comps.append({"degree": n, "entries": entries})
    return {"components": comps}


def fock_from_json(obj, ms: ModeSpace) -> FockVector:
    if not isinstance(obj, dict) or not isinstance(obj.get("components"), list):
        raise FormatError("a Fock vector needs a \"components\" list")
    acc = defaultdict(int)
    seen = set()
    for comp in obj["components"]:
        n = comp.get("degree") if isinstance(comp, dict) else None
        if not isinstance(n, int) or not 0 <= n <= ms.d:
            raise FormatError(f"bad component degree {n!r}")
        if n in seen:
            raise FormatError(f"degree {n} listed twice")
        seen.add(n)
        for e in comp.get("entries", []):
            mask, s = _mask(e.get("modes"), ms, n)
            if s:
                acc[mask] += s * value_from_json(e.get("value"), ms)
    return FockVector(ms, acc)


def wedge_from_json(obj, ms: ModeSpace, degree: int) -> WedgeTensor:
    """A single-degree tensor stored in the Fock vector layout."""
    phi = fock_from_json(obj, ms)
    stray = {popcount(k) for k in phi.coeffs} - {degree}
    if stray:
        raise FormatError(f"expected only degree {degree}, found degrees {sorted(stray)}")
    return phi.component(degree)


def vector_to_json(f: WedgeTensor) -> list:
    return [value_to_json(f.coeffs.get(1 << j, f.ms.zero()), f.ms) for j in range(f.ms.d)]


def vector_from_json(values, ms: ModeSpace) -> WedgeTensor:
    if not isinstance(values, list) or len(values) != ms.d:
        raise FormatError(f"a one-particle vector is a list of {ms.d} values")
    return WedgeTensor(ms, 1, {1 << j: value_from_json(v, ms) for j, v in enumerate(values)})


# -- operators -----------------------------------------------------------------

def matrix_to_json(Xi: OperatorMatrix) -> dict:
    if Xi.domain != Xi.codomain or Xi.domain not in ("even", "full"):
        raise FormatError(f"cannot serialize a {Xi.codomain}<-{Xi.domain} matrix as a parity operator")
    blocks = defaultdict(list)
    for i, rk in enumerate(Xi.row_basis):
        for j, ck in enumerate(Xi.col_basis):
            v = Xi.data[i, j]
            if v != 0:
                blocks[(popcount(rk), popcount(ck))].append(
                    {"row": _modes(rk), "col": _modes(ck), "value": value_to_json(v, Xi.ms)})
    out = []
    for (a, b), entries in sorted(blocks.items()):
        entries.sort(key=lambda e: (e["row"], e["col"]))
        out.append({"out_degree": a, "in_degree": b, "entries": entries})
    return {"kind": "matrix", "parity": Xi.domain, "blocks": out}


def matrix_from_json(obj, ms: ModeSpace) -> OperatorMatrix:
    parity = obj.get("parity")
    if parity not in ("even", "full"):
        raise FormatError(f"matrix parity must be \"even\" or \"full\", got {parity!r}")
    out = zeros(ms, parity, parity)
    rpos = {k: i for i, k in enumerate(out.row_basis)}
    cpos = {k: j for j, k in enumerate(out.col_basis)}
    for blk in obj.get("blocks", []):
        a, b = blk.get("out_degree"), blk.get("in_degree")
        if not isinstance(a, int) or not isinstance(b, int):
            raise FormatError("block degrees must be integers")
        for e in blk.get("entries", []):
            rk, rs = _mask(e.get("row"), ms, a)
            ck, cs = _mask(e.get("col"), ms, b)
            if rk not in rpos or ck not in cpos:
                raise FormatError(f"entry {e.get('row')}<-{e.get('col')} lies outside the {parity} sector")
            if rs and cs:
                out.data[rpos[rk], cpos[ck]] += rs * cs * value_from_json(e.get("value"), ms)
    return out


def family_to_json(fam: KernelFamily) -> dict:
    terms = []
    for (l, m), K in sorted(fam.terms.items()):
        entries = [{"left": _modes(a), "right": _modes(b), "value": value_to_json(v, fam.ms)}
                   for (a, b), v in K.kernel.coeffs.items()]
        entries.sort(key=lambda e: (e["left"], e["right"]))
        terms.append({"l": l, "m": m, "entries": entries})
    out = {"kind": "kernels", "terms": terms}
    if fam.left_W is not None:
        out["left_W"] = vector_to_json(fam.left_W)
    if fam.right_W is not None:
        out["right_W"] = vector_to_json(fam.right_W)
    return out


def family_from_json(obj, ms: ModeSpace) -> KernelFamily:
    terms = {}
    for t in obj.get("terms", []):
        l, m = t.get("l"), t.get("m")
        if not isinstance(l, int) or not isinstance(m, int) or not (0 <= l <= ms.d // 2 and 0 <= m <= ms.d // 2):
            raise FormatError(f"bad kernel shape ({l!r},{m!r})")
        if (l, m) in terms:
            raise FormatError(f"kernel ({l},{m}) listed twice")
        acc = defaultdict(int)
        for e in t.get("entries", []):
            a, sa = _mask(e.get("left"), ms, 2 * l)
            b, sb = _mask(e.get("right"), ms, 2 * m)
            if sa and sb:
                acc[(a, b)] += sa * sb * value_from_json(e.get("value"), ms)
        terms[(l, m)] = KernelDistribution(ms, l, m, AltBlockTensor(ms, 2 * l, 2 * m, acc))
    left = vector_from_json(obj["left_W"], ms) if obj.get("left_W") is not None else None
    right = vector_from_json(obj["right_W"], ms) if obj.get("right_W") is not None else None
    return KernelFamily(ms, terms, left, right)


def operator_from_json(obj, ms: ModeSpace):
    if not isinstance(obj, dict):
        raise FormatError("an operator file holds a JSON object")
    kind = obj.get("kind")
    if kind == "matrix":
        return matrix_from_json(obj, ms)
    if kind == "kernels":
        return family_from_json(obj, ms)
    raise FormatError(f"operator kind must be \"matrix\" or \"kernels\", got {kind!r}")


# -- text ------------------------------------------------------------------------

def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def _default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from exc
