"""Linear operators on the truncated Fock space as matrices in the wedge basis.

Rows index the codomain sector, columns the domain sector. A sector is
``"even"``, ``"odd"`` or ``"full"``; its basis is ordered by degree, then
lexicographically in the ascending mode tuple. Because the Fock pairing is the
coefficient dot product in this basis, the pairing adjoint is the transpose
(conjugate transpose for complex data).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .fock import FockVector, basis_vector
from .modespace import ModeSpace
from .wedge import subsets

SECTORS = ("even", "odd", "full")


def sector_basis(ms: ModeSpace, sector: str) -> list[int]:
    if sector not in SECTORS:
        raise ValueError(f"unknown sector {sector!r}")
    out = []
    for n in range(ms.d + 1):
        if sector == "full" or (n % 2 == 0) == (sector == "even"):
            out.extend(subsets(ms.d, n))
    return out


def _dtype(ms: ModeSpace, values=None):
    if ms.exact:
        return object
    if values is not None and any(isinstance(v, complex) and v.imag != 0 for v in np.asarray(values, dtype=object).flat):
        return complex
    return float


class OperatorMatrix:
    __slots__ = ("ms", "domain", "codomain", "data", "_rows", "_cols")

    def __init__(self, ms: ModeSpace, domain: str, codomain: str, data):
        self.ms = ms
        self.domain = domain
        self.codomain = codomain
        self._rows = sector_basis(ms, codomain)
        self._cols = sector_basis(ms, domain)
        data = np.asarray(data, dtype=_dtype(ms, data))
        if data.shape != (len(self._rows), len(self._cols)):
            raise ValueError(f"matrix shape {data.shape} does not match sectors "
                             f"{codomain}<-{domain} on {ms.d} modes")
        self.data = data

    @property
    def row_basis(self) -> list[int]:
        return self._rows

    @property
    def col_basis(self) -> list[int]:
        return self._cols

    def __repr__(self):
        return f"OperatorMatrix({self.codomain}<-{self.domain}, shape={self.data.shape})"

    def apply(self, phi: FockVector) -> FockVector:
        stray = set(phi.coeffs) - set(self._cols)
        if stray:
            raise ValueError(f"vector has components outside the {self.domain} sector")
        vals = phi.to_list(self._cols)
        x = np.array(vals, dtype=_dtype(self.ms, vals))
        y = self.data @ x
        return FockVector(self.ms, {k: _tidy(self.ms, v) for k, v in zip(self._rows, y)})

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.domain != other.codomain:
            raise ValueError(f"cannot compose {self.domain} with {other.codomain}")
        return OperatorMatrix(self.ms, other.domain, self.codomain, self.data @ other.data)

    def __add__(self, other):
        self._same(other)
        return OperatorMatrix(self.ms, self.domain, self.codomain, self.data + other.data)

    def __sub__(self, other):
        self._same(other)
        return OperatorMatrix(self.ms, self.domain, self.codomain, self.data - other.data)

    def __mul__(self, c):
        return OperatorMatrix(self.ms, self.domain, self.codomain, self.data * c)

    __rmul__ = __mul__

    def _same(self, other):
        if (self.domain, self.codomain) != (other.domain, other.codomain) or self.ms != other.ms:
            raise ValueError("operators act between different sectors")

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return ((self.domain, self.codomain) == (other.domain, other.codomain)
                and bool(np.all(self.data == other.data)))

    def adjoint(self) -> "OperatorMatrix":
        """Pairing adjoint (transpose). Use ``.conj()`` on top for the Hilbert adjoint."""
        return OperatorMatrix(self.ms, self.codomain, self.domain, self.data.T.copy())

    def max_abs_diff(self, other) -> object:
        self._same(other)
        diff = self.data - other.data
        return max((abs(v) for v in diff.flat), default=self.ms.zero())

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.data.flat)

    def restrict(self, codomain: str, domain: str) -> "OperatorMatrix":
        """Sub-block between two sectors contained in the current ones."""
        rpos = {k: i for i, k in enumerate(self._rows)}
        cpos = {k: i for i, k in enumerate(self._cols)}
        rows = [rpos[k] for k in sector_basis(self.ms, codomain)]
        cols = [cpos[k] for k in sector_basis(self.ms, domain)]
        return OperatorMatrix(self.ms, domain, codomain, self.data[np.ix_(rows, cols)])

    def embed(self, codomain: str = "full", domain: str = "full") -> "OperatorMatrix":
        """Zero-padded copy acting between larger sectors."""
        out = zeros(self.ms, domain, codomain)
        rpos = {k: i for i, k in enumerate(out._rows)}
        cpos = {k: i for i, k in enumerate(out._cols)}
        rows = [rpos[k] for k in self._rows]
        cols = [cpos[k] for k in self._cols]
        out.data[np.ix_(rows, cols)] = self.data
        return out

    def blocks(self) -> dict[tuple[int, int], np.ndarray]:
        """Nonzero (out_degree, in_degree) blocks."""
        from .wedge import popcount

        rdeg = [popcount(k) for k in self._rows]
        cdeg = [popcount(k) for k in self._cols]
        out = {}
        for a in sorted(set(rdeg)):
            ri = [i for i, x in enumerate(rdeg) if x == a]
            for b in sorted(set(cdeg)):
                ci = [j for j, x in enumerate(cdeg) if x == b]
                blk = self.data[np.ix_(ri, ci)]
                if any(v != 0 for v in blk.flat):
                    out[(a, b)] = blk
        return out

    def entry(self, row_mask: int, col_mask: int):
        return self.data[self._rows.index(row_mask), self._cols.index(col_mask)]

    def to_float(self) -> "OperatorMatrix":
        fms = self.ms.with_arith("float")
        return OperatorMatrix(fms, self.domain, self.codomain, self.real_array())

    def real_array(self) -> np.ndarray:
        """Numeric copy: float when every entry is real, complex otherwise."""
        arr = np.array([[complex(v) for v in row] for row in self.data], dtype=complex)
        return arr.real.copy() if not np.any(arr.imag) else arr


def _tidy(ms: ModeSpace, v):
    if ms.exact:
        return v
    v = complex(v)
    return v.real if v.imag == 0 else v


def zeros(ms: ModeSpace, domain: str, codomain: str) -> OperatorMatrix:
    rows, cols = len(sector_basis(ms, codomain)), len(sector_basis(ms, domain))
    data = np.empty((rows, cols), dtype=_dtype(ms))
    data.fill(ms.zero())
    return OperatorMatrix(ms, domain, codomain, data)


def identity(ms: ModeSpace, sector: str = "full") -> OperatorMatrix:
    out = zeros(ms, sector, sector)
    for i in range(out.data.shape[0]):
        out.data[i, i] = ms.one()
    return out


def from_function(ms: ModeSpace, fn: Callable[[FockVector], FockVector],
                  domain: str = "full", codomain: str = "full") -> OperatorMatrix:
    """Matrix of a vector-in/vector-out map, column by column on basis vectors."""
    out = zeros(ms, domain, codomain)
    rpos = {k: i for i, k in enumerate(out.row_basis)}
    for j, k in enumerate(out.col_basis):
        image = fn(basis_vector(ms, k))
        for key, v in image.coeffs.items():
            if key not in rpos:
                raise ValueError(f"image leaves the {codomain} sector")
            out.data[rpos[key], j] = v
    return out
