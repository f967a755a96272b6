import json

import pytest
from hypothesis import given

from rdk.catalog import general_linear, simply_connected
from rdk.classify import triple_of
from rdk.jsonio import (
    SchemaError,
    cproduct_from_json,
    cproduct_to_json,
    datum_from_json,
    datum_to_json,
    dumps,
    loads,
    matrix_from_json,
    matrix_to_json,
    morphism_from_json,
    morphism_to_json,
    to_plain,
    triple_from_json,
    triple_to_json,
)
from rdk.morphism import SteinbergWitness, infer, suzuki_map
from rdk.zlattice import IntMatrix
from strategies import int_matrices, product_specs, reductive_data


def round_trip(obj):
    return json.loads(dumps(obj))


@given(reductive_data())
def test_datum_round_trip(R):
    assert datum_from_json(round_trip(datum_to_json(R))) == R


@given(int_matrices())
def test_matrix_round_trip(M):
    assert matrix_from_json(round_trip(matrix_to_json(M))) == M


def test_big_integers_are_strings():
    big = 2**60
    M = IntMatrix.from_rows([[big, -big], [1, 0]], 2)
    js = matrix_to_json(M)
    assert js["data"][0] == [str(big), str(-big)]
    assert js["data"][1] == [1, 0]
    assert matrix_from_json(round_trip(js)) == M


def test_morphism_round_trip():
    C2 = simply_connected("C2")
    m = infer(suzuki_map(2), 2, C2, C2)
    assert morphism_from_json(round_trip(morphism_to_json(m))) == m


@given(product_specs())
def test_cproduct_round_trip(spec):
    back = cproduct_from_json(round_trip(cproduct_to_json(spec)))
    assert back.R1 == spec.R1 and back.R2 == spec.R2
    assert back.moduli == spec.moduli
    assert back.h1 == spec.h1 and back.h2 == spec.h2


def test_triple_round_trip():
    t = triple_of(general_linear(3))
    back = triple_from_json(round_trip(triple_to_json(t)))
    assert back.semisimple == t.semisimple and back.torus_rank == 1 and back.K == t.K


def test_datum_wrapper_is_unwrapped():
    R = simply_connected("A2")
    assert datum_from_json({"datum": datum_to_json(R), "certificates": {}}) == R


@pytest.mark.parametrize(
    "payload, path",
    [
        ({"rank": 1, "roots": [[2]], "coroots": [[1], [-1]]}, "$"),
        ({"rank": 1, "roots": [[2], [-2]], "coroots": [[1], ["x"]]}, "$.coroots[1][0]"),
        ({"rank": 1, "roots": [[2, 0]], "coroots": [[1]]}, "$.roots[0]"),
        ({"rank": 1, "roots": [[2], [-2]]}, "$"),
        ({"rank": True, "roots": [], "coroots": []}, "$.rank"),
        ([1, 2], "$"),
        ({"rank": 1, "roots": [[2], [-2]], "coroots": [[2], [-2]]}, "$"),
    ],
)
def test_schema_errors_carry_paths(payload, path):
    with pytest.raises(SchemaError) as info:
        datum_from_json(payload)
    assert info.value.path == path
    assert str(info.value).startswith(path)


def test_matrix_schema_errors():
    with pytest.raises(SchemaError, match="expected 2 rows"):
        matrix_from_json({"rows": 2, "cols": 1, "data": [[1]]})
    with pytest.raises(SchemaError, match="negative"):
        matrix_from_json({"rows": -1, "cols": 1, "data": []})


def test_cproduct_schema_errors():
    A1 = datum_to_json(simply_connected("A1"))
    T1 = {"rank": 1, "roots": [], "coroots": []}
    bad = {
        "R1": A1,
        "R2": T1,
        "A": {"invariant_factors": [2]},
        "h1": {"rows": 1, "cols": 1, "data": [[1]]},
        "h2": {"rows": 1, "cols": 1, "data": [[0]]},
    }
    with pytest.raises(SchemaError, match="surjective"):
        cproduct_from_json(bad)
    bad["A"] = {"invariant_factors": "2"}
    with pytest.raises(SchemaError) as info:
        cproduct_from_json(bad)
    assert info.value.path == "$.A.invariant_factors"


def test_invalid_triple():
    payload = triple_to_json(triple_of(simply_connected("A1xA1")))
    payload["torus_rank"] = 1
    payload["K"] = matrix_to_json(IntMatrix.from_columns([(2, 0), (0, 2)], 2))
    with pytest.raises(SchemaError, match="generators"):
        triple_from_json(payload)


def test_loads_reports_position():
    with pytest.raises(SchemaError, match="line 1"):
        loads("{not json")


def test_to_plain_and_dumps():
    plain = to_plain({"w": SteinbergWitness(2, 3), "ok": True, "xs": (1, 2), "big": 2**70})
    assert plain == {"w": {"type": "SteinbergWitness", "n": 2, "m": 3}, "ok": True, "xs": [1, 2], "big": str(2**70)}
    text = dumps({"roots": [[2, -1], [-1, 2]]})
    assert "[2, -1]" in text
    assert json.loads(text) == {"roots": [[2, -1], [-1, 2]]}
