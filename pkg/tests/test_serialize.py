import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given

from tropcoh import serialize as ser
from tropcoh.cohomology import Region, cohomology_table, random_region
from tropcoh.mumford import random_skeleton, theta
from tropcoh.tropicalize import paf_from_tropical_polynomial, random_tropical_polynomial, tropicalize_direct
from tropcoh.valuation import from_padic_points

from conftest import seeds, ultrametrics


def roundtrip_text(encode, decode, value, *extra):
    text = ser.dumps(encode(value))
    again = decode(ser.loads(text), *extra)
    return again, text, ser.dumps(encode(again))


def test_curve01_roundtrip_is_byte_identical(curve01):
    again, text, text2 = roundtrip_text(ser.encode_curve, ser.decode_curve, curve01)
    assert again == curve01
    assert text == text2


def test_matrix_encoding():
    m = from_padic_points(5, [0, 1, 5])
    obj = ser.encode_matrix(m)
    assert obj["L"] == [["-inf", "0", "-1"], ["0", "-inf", "0"], ["-1", "0", "-inf"]]
    assert ser.decode_matrix(obj) == m


def test_neg_inf_length_rejected(curve01):
    obj = ser.encode_curve(curve01)
    obj["edges"][0]["length"] = "-inf"
    with pytest.raises(ser.SchemaError) as info:
        ser.decode_curve(obj)
    assert "edges[0].length" in str(info.value)


def test_non_lowest_terms_rejected():
    obj = {"n": 2, "L": [["-inf", "2/4"], ["2/4", "-inf"]]}
    with pytest.raises(ser.SchemaError) as info:
        ser.decode_matrix(obj)
    assert "$.L[0][1]" in str(info.value)


def test_schema_errors_carry_paths(curve01):
    with pytest.raises(ser.SchemaError, match=r"\$\.r"):
        ser.decode_curve({"vertices": [], "edges": []})
    obj = ser.encode_curve(curve01)
    obj["edges"][1]["tail"] = 17
    with pytest.raises(ser.SchemaError, match=r"edges\[1\]\.tail"):
        ser.decode_curve(obj)
    with pytest.raises(ser.SchemaError):
        ser.loads("{not json")
    with pytest.raises(ser.SchemaError):
        ser.decode_matrix({"n": 3, "L": [["-inf", "0", "-1"], ["0", "-inf", "-2"], ["-1", "-2", "-inf"]]})
    assert ser.decode_matrix({"n": 3, "L": [["-inf", "0", "-1"], ["0", "-inf", "-2"], ["-1", "-2", "-inf"]]},
                             validate=False).n == 3


def test_inconsistent_curve_reported(curve01):
    obj = ser.encode_curve(curve01)
    obj["edges"][0]["direction"] = [1, 1]
    with pytest.raises(ser.SchemaError):
        ser.decode_curve(obj)


def test_skeleton_and_table_roundtrip():
    S = theta()
    again, text, text2 = roundtrip_text(ser.encode_skeleton, ser.decode_skeleton, S)
    assert again == S and text == text2
    t = cohomology_table(Region.whole(S))
    assert ser.decode_table(ser.encode_table(t)) == t
    assert ser.encode_table(t) == {"h": [[1, 2], [2, 1]], "hc": [[1, 2], [2, 1]]}


@given(ultrametrics())
def test_curve_roundtrip(m):
    X = tropicalize_direct(m)
    again, text, text2 = roundtrip_text(ser.encode_curve, ser.decode_curve, X)
    assert again == X and text == text2
    json.loads(text)


@given(ultrametrics())
def test_matrix_roundtrip(m):
    assert ser.decode_matrix(ser.loads(ser.dumps(ser.encode_matrix(m)))) == m


@given(ultrametrics(), seeds)
def test_region_and_paf_roundtrip(m, seed):
    rng = random.Random(seed)
    X = tropicalize_direct(m)
    V = random_region(X, rng)
    assert ser.decode_region(ser.encode_region(V), X) == V
    P = paf_from_tropical_polynomial(X, random_tropical_polynomial(X.r, rng))
    assert ser.decode_paf(ser.loads(ser.dumps(ser.encode_paf(P))), P.base) == P


@given(seeds)
def test_skeleton_region_roundtrip(seed):
    rng = random.Random(seed)
    S = random_skeleton(rng.randint(0, 4), rng)
    assert ser.decode_skeleton(ser.encode_skeleton(S)) == S
    V = Region.whole(S)
    assert ser.decode_region(ser.encode_region(V), S) == V
