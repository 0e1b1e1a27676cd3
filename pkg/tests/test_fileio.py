import json
import random
from fractions import Fraction as Fr

import pytest

from fockexp.expansion import expand_full, extract_kappa
from fockexp.fileio import (
    FormatError,
    dumps,
    family_from_json,
    family_to_json,
    fock_from_json,
    fock_to_json,
    loads,
    matrix_from_json,
    matrix_to_json,
    ms_from_json,
    ms_to_json,
    operator_from_json,
    value_from_json,
    value_to_json,
    wedge_from_json,
)
from fockexp.fock import FockVector
from fockexp.modespace import build_mode_space
from fockexp.opmatrix import OperatorMatrix, sector_basis
from fockexp.wedge import wedge_basis

MS = build_mode_space(4, [2, "5/2", 3, 4], 1)


def rand_matrix(sector, seed):
    rng = random.Random(seed)
    n = len(sector_basis(MS, sector))
    return OperatorMatrix(MS, sector, sector,
                          [[Fr(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < 0.4 else Fr(0)
                            for _ in range(n)] for _ in range(n)])


def through_text(obj):
    return loads(dumps(obj))


def test_space_round_trip():
    doc = ms_to_json(MS)
    assert doc == {"dim": 4, "lambdas": ["2", "5/2", "3", "4"], "alpha": "1"}
    assert ms_from_json(through_text(doc)) == MS
    with pytest.raises(FormatError):
        ms_from_json({"dim": 2, "lambdas": ["1", "2"], "alpha": "1"})
    with pytest.raises(FormatError):
        ms_from_json({"dim": 2})


def test_scalars():
    assert value_to_json(Fr(-3, 4), MS) == "-3/4"
    assert value_from_json("7", MS) == 7
    with pytest.raises(FormatError):
        value_from_json(0.5, MS)
    with pytest.raises(FormatError):
        value_from_json("x/2", MS)
    fms = MS.with_arith("float")
    assert value_to_json(1 + 2j, fms) == {"re": 1.0, "im": 2.0}
    assert value_from_json({"re": 1, "im": -1}, fms) == 1 - 1j


def test_vector_round_trip_and_signs():
    phi = FockVector(MS, {0: 1, 0b101: Fr(2, 3), 0b1111: -5})
    assert fock_from_json(through_text(fock_to_json(phi)), MS) == phi
    unsorted = {"components": [{"degree": 2, "entries": [{"modes": [3, 1], "value": "1"}]}]}
    assert fock_from_json(unsorted, MS) == FockVector(MS, {0b101: -1})
    assert wedge_from_json(unsorted, MS, 2) == -wedge_basis(MS, 1, 3)
    with pytest.raises(FormatError):
        wedge_from_json(unsorted, MS, 1)
    with pytest.raises(FormatError):
        fock_from_json({"components": [{"degree": 1, "entries": [{"modes": [5], "value": "1"}]}]}, MS)
    with pytest.raises(FormatError):
        fock_from_json({"components": [{"degree": 2, "entries": [{"modes": [1], "value": "1"}]}]}, MS)


@pytest.mark.parametrize("sector", ["even", "full"])
def test_matrix_round_trip(sector):
    X = rand_matrix(sector, 4)
    doc = through_text(matrix_to_json(X))
    assert doc["parity"] == sector
    assert matrix_from_json(doc, MS) == X
    assert operator_from_json(doc, MS) == X


def test_matrix_rejects_wrong_sector():
    doc = {"kind": "matrix", "parity": "even",
           "blocks": [{"out_degree": 1, "in_degree": 0, "entries": [{"row": [1], "col": [], "value": "1"}]}]}
    with pytest.raises(FormatError):
        matrix_from_json(doc, MS)
    with pytest.raises(FormatError):
        operator_from_json({"kind": "tensor"}, MS)


def test_family_round_trip():
    fam = extract_kappa(rand_matrix("even", 9))
    back = family_from_json(through_text(family_to_json(fam)), MS)
    assert {k: v.kernel for k, v in back.terms.items()} == {k: v.kernel for k, v in fam.terms.items()}
    fams = expand_full(rand_matrix("full", 2), wedge_basis(MS, 1))
    doc = through_text(family_to_json(fams["-+"]))
    assert doc["left_W"] == ["1", "0", "0", "0"] and "right_W" not in doc
    assert family_from_json(doc, MS).left_W == wedge_basis(MS, 1)


def test_canonical_text():
    X = rand_matrix("even", 1)
    text = dumps(matrix_to_json(X))
    assert text == dumps(json.loads(text)) and text.endswith("\n")
    with pytest.raises(FormatError):
        loads("{not json")
