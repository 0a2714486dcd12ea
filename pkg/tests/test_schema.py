"""JSON schema: byte-identical round trips, deterministic serialization
and precise parse errors."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from graycohom import schema as sc
from graycohom.deformations import (
    EquivalenceWitness,
    FirstOrderDeformation,
)
from graycohom.exactlinalg import GF, QQ
from graycohom.gray import GraySemigroup
from graycohom.twocat import TwoCategory


ids = st.recursive(
    st.integers(-10 ** 6, 10 ** 6) | st.text(max_size=8),
    lambda inner: st.tuples(inner, inner) | st.tuples(inner, inner, inner),
    max_leaves=6)


@settings(max_examples=80, deadline=None)
@given(ids)
def test_identifier_round_trip(x):
    assert sc.decode_id(sc.encode_id(x)) == x


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=-10 ** 6, max_value=10 ** 6,
                    max_denominator=10 ** 6))
def test_rational_scalar_round_trip(q):
    got = sc.decode_scalar(sc.encode_scalar(Fraction(q)))
    assert got == q
    if q.denominator == 1:
        # integral values travel as plain JSON integers
        assert isinstance(sc.encode_scalar(Fraction(q)), int) or \
            isinstance(sc.encode_scalar(int(q)), int)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 96))
def test_prime_scalar_round_trip(n):
    assert sc.decode_scalar(sc.encode_scalar(n)) == n


def test_booleans_are_rejected_as_identifiers_and_scalars():
    with pytest.raises(sc.SchemaError):
        sc.encode_id(True)
    with pytest.raises(sc.SchemaError):
        sc.decode_scalar(True)


def test_field_round_trip():
    for K in (QQ, GF(2), GF(31)):
        assert sc.decode_field(sc.encode_field(K)) == K
    with pytest.raises(sc.SchemaError):
        sc.decode_field({"prime": 6})
    with pytest.raises(sc.SchemaError):
        sc.decode_field({"something": 1})


def _assert_byte_identical(doc, from_json):
    text = sc.dumps(doc)
    again = from_json(sc.loads(text))
    return text, again


@pytest.mark.parametrize("model", ["g_fiber2", "g_sign3"])
def test_gray_round_trip_is_byte_identical(request, model):
    G = request.getfixturevalue(model)
    text = sc.dumps(sc.gray_to_json(G))
    G2 = sc.gray_from_json(sc.loads(text))
    assert isinstance(G2, GraySemigroup)
    assert sc.dumps(sc.gray_to_json(G2)) == text


def test_two_category_round_trip_is_byte_identical(g_sign3):
    text = sc.dumps(sc.two_category_to_json(g_sign3.base))
    C2 = sc.two_category_from_json(sc.loads(text))
    assert isinstance(C2, TwoCategory)
    assert sc.dumps(sc.two_category_to_json(C2)) == text


def test_deformation_and_witness_round_trip(g_sign3):
    C = g_sign3.base
    f = sorted(C.cell_src)[0]
    cell = g_sign3.tcell(g_sign3.tcell(f, f), f)
    d = FirstOrderDeformation(
        associator1={(f, f, f): C.id2(cell)},
        pentagonator1={(0, 1, 0, 1): C.id2(C.identity_cell[0])})
    text = sc.dumps(sc.deformation_to_json(d))
    d2 = sc.deformation_from_json(sc.loads(text))
    assert sc.dumps(sc.deformation_to_json(d2)) == text
    assert set(d2.associator1) == {(f, f, f)}
    w = EquivalenceWitness(psi1={(f, f): C.id2(g_sign3.tcell(f, f))})
    wt = sc.dumps(sc.witness_to_json(w))
    w2 = sc.witness_from_json(sc.loads(wt))
    assert sc.dumps(sc.witness_to_json(w2)) == wt


def test_load_structure_dispatch(g_fiber2):
    G2 = sc.load_structure(sc.dumps(sc.gray_to_json(g_fiber2)))
    assert isinstance(G2, GraySemigroup)
    C2 = sc.load_structure(sc.dumps(sc.two_category_to_json(g_fiber2.base)))
    assert isinstance(C2, TwoCategory)


def test_parse_errors_are_precise(g_fiber2):
    with pytest.raises(sc.SchemaError, match="line 1"):
        sc.loads("{not json")
    with pytest.raises(sc.SchemaError):
        sc.loads('{"schema": "other/9", "type": "gray_semigroup"}')
    doc = sc.loads(sc.dumps(sc.gray_to_json(g_fiber2)))
    doc["type"] = "unknown_thing"
    with pytest.raises(sc.SchemaError):
        sc.load_structure(sc.dumps(doc))
    doc2 = sc.loads(sc.dumps(sc.gray_to_json(g_fiber2)))
    del doc2["tensorator"]
    with pytest.raises(sc.SchemaError):
        sc.gray_from_json(doc2)
