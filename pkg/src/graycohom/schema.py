"""Canonical JSON schema for the structures in this package.

One on-disk format, versioned with a ``schema`` field ("graycohom/1"),
shared by the example generators, hand-written fixtures, and the CLI.
Serialization is deterministic: dictionary keys are emitted as sorted
pair lists and ``dumps`` sorts object keys.

Identifiers (objects, 1-cells) may be ints, strings, or nested tuples of
those; they are encoded as tagged lists (["i", n] / ["s", s] /
["t", ...]) so round-tripping is exact.  Scalars are JSON ints for
integral values and "a/b" strings for non-integral rationals.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .deformations import EquivalenceWitness, FirstOrderDeformation
from .exactlinalg import GF, QQ, Field, RationalField
from .gray import GraySemigroup
from .twocat import TwoCategory, TwoMorphism

SCHEMA = "graycohom/1"


class SchemaError(Exception):
    """Raised when a document does not parse against the schema."""


# ----- identifiers ------------------------------------------------------


def encode_id(x):
    if isinstance(x, bool):
        raise SchemaError(f"unsupported identifier {x!r}")
    if isinstance(x, int):
        return ["i", x]
    if isinstance(x, str):
        return ["s", x]
    if isinstance(x, tuple):
        return ["t"] + [encode_id(y) for y in x]
    raise SchemaError(f"unsupported identifier {x!r}")


def decode_id(j):
    if not isinstance(j, list) or not j or j[0] not in ("i", "s", "t"):
        raise SchemaError(f"malformed identifier {j!r}")
    tag = j[0]
    if tag == "i":
        if len(j) != 2 or not isinstance(j[1], int):
            raise SchemaError(f"malformed identifier {j!r}")
        return j[1]
    if tag == "s":
        if len(j) != 2 or not isinstance(j[1], str):
            raise SchemaError(f"malformed identifier {j!r}")
        return j[1]
    return tuple(decode_id(y) for y in j[1:])


# ----- scalars and fields -----------------------------------------------


def encode_scalar(x):
    if isinstance(x, bool):
        raise SchemaError(f"unsupported scalar {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    raise SchemaError(f"unsupported scalar {x!r}")


def decode_scalar(j):
    if isinstance(j, bool):
        raise SchemaError(f"malformed scalar {j!r}")
    if isinstance(j, int):
        return j
    if isinstance(j, str):
        try:
            q = Fraction(j)
        except (ValueError, ZeroDivisionError) as e:
            raise SchemaError(f"malformed scalar {j!r}") from e
        return q.numerator if q.denominator == 1 else q
    raise SchemaError(f"malformed scalar {j!r}")


def encode_field(K: Field):
    return K.describe()


def decode_field(j) -> Field:
    if isinstance(j, dict) and j.get("rational") is True:
        return QQ
    if isinstance(j, dict) and isinstance(j.get("prime"), int):
        try:
            return GF(j["prime"])
        except ValueError as e:
            raise SchemaError(str(e)) from e
    raise SchemaError(f"malformed field descriptor {j!r}")


# ----- helpers for tuple-keyed tables -----------------------------------


def _sorted_pairs(d: dict, enc_key, enc_val):
    pairs = [[enc_key(k), enc_val(v)] for k, v in d.items()]
    pairs.sort(key=lambda kv: json.dumps(kv[0]))
    return pairs


def _decode_pairs(j, dec_key, dec_val) -> dict:
    if not isinstance(j, list):
        raise SchemaError(f"expected pair list, got {j!r}")
    out = {}
    for item in j:
        if not isinstance(item, list) or len(item) != 2:
            raise SchemaError(f"malformed pair {item!r}")
        out[dec_key(item[0])] = dec_val(item[1])
    return out


def _enc_consts(consts: dict):
    """{(i, j): {k: scalar}} as nested sparse pair lists."""
    return _sorted_pairs(
        consts,
        lambda ij: [ij[0], ij[1]],
        lambda vec: _sorted_pairs(vec, lambda k: k, encode_scalar))


def _dec_consts(j):
    def dec_ij(k):
        if not (isinstance(k, list) and len(k) == 2
                and all(isinstance(x, int) for x in k)):
            raise SchemaError(f"malformed index pair {k!r}")
        return (k[0], k[1])

    def dec_vec(v):
        def dec_k(k):
            if not isinstance(k, int):
                raise SchemaError(f"malformed basis index {k!r}")
            return k
        return _decode_pairs(v, dec_k, decode_scalar)

    return _decode_pairs(j, dec_ij, dec_vec)


def encode_two_morphism(t: TwoMorphism):
    return {"src": encode_id(t.src), "tgt": encode_id(t.tgt),
            "coeffs": [encode_scalar(c) for c in t.coeffs]}


def decode_two_morphism(j) -> TwoMorphism:
    if not (isinstance(j, dict) and "src" in j and "tgt" in j
            and isinstance(j.get("coeffs"), list)):
        raise SchemaError(f"malformed 2-morphism {j!r}")
    return TwoMorphism(decode_id(j["src"]), decode_id(j["tgt"]),
                       tuple(decode_scalar(c) for c in j["coeffs"]))


# ----- 2-category -------------------------------------------------------


def _id_tuple(xs):
    return [encode_id(x) for x in xs]


def _dec_id_tuple(j, n=None):
    if not isinstance(j, list) or (n is not None and len(j) != n):
        raise SchemaError(f"malformed identifier tuple {j!r}")
    return tuple(decode_id(x) for x in j)


def two_category_to_json(C: TwoCategory) -> dict:
    return {
        "schema": SCHEMA,
        "type": "two_category",
        "field": encode_field(C.field),
        "objects": _id_tuple(C.objects),
        "oneCells": _sorted_pairs(C.one_cells, _id_tuple, _id_tuple),
        "cellSrc": _sorted_pairs(C.cell_src, encode_id, encode_id),
        "cellTgt": _sorted_pairs(C.cell_tgt, encode_id, encode_id),
        "identityCell": _sorted_pairs(C.identity_cell, encode_id, encode_id),
        "compose1": _sorted_pairs(C.compose1, _id_tuple, encode_id),
        "hom2Dim": _sorted_pairs(C.hom2_dim, _id_tuple, lambda n: n),
        "id2Coeffs": _sorted_pairs(
            C.id2_coeffs, encode_id,
            lambda cs: [encode_scalar(c) for c in cs]),
        "vcompConst": _sorted_pairs(C.vcomp_const, _id_tuple, _enc_consts),
        "hcompConst": _sorted_pairs(C.hcomp_const, _id_tuple, _enc_consts),
    }


def _require(doc, typ):
    if not isinstance(doc, dict):
        raise SchemaError("document is not a JSON object")
    if doc.get("schema") != SCHEMA:
        raise SchemaError(f"unsupported schema {doc.get('schema')!r}")
    if doc.get("type") != typ:
        raise SchemaError(f"expected type {typ!r}, got {doc.get('type')!r}")


def _two_category_from_body(doc) -> TwoCategory:
    try:
        field_ = decode_field(doc["field"])
        objects = _dec_id_tuple(doc["objects"])
        one_cells = _decode_pairs(doc["oneCells"],
                                  lambda k: _dec_id_tuple(k, 2),
                                  _dec_id_tuple)
        cell_src = _decode_pairs(doc["cellSrc"], decode_id, decode_id)
        cell_tgt = _decode_pairs(doc["cellTgt"], decode_id, decode_id)
        identity_cell = _decode_pairs(doc["identityCell"],
                                      decode_id, decode_id)
        compose1 = _decode_pairs(doc["compose1"],
                                 lambda k: _dec_id_tuple(k, 2), decode_id)

        def dec_dim(n):
            if not isinstance(n, int) or n < 0:
                raise SchemaError(f"malformed dimension {n!r}")
            return n

        hom2_dim = _decode_pairs(doc["hom2Dim"],
                                 lambda k: _dec_id_tuple(k, 2), dec_dim)
        id2_coeffs = _decode_pairs(
            doc["id2Coeffs"], decode_id,
            lambda cs: tuple(decode_scalar(c) for c in cs))
        vcomp_const = _decode_pairs(doc["vcompConst"],
                                    lambda k: _dec_id_tuple(k, 3),
                                    _dec_consts)
        hcomp_const = _decode_pairs(doc["hcompConst"],
                                    lambda k: _dec_id_tuple(k, 4),
                                    _dec_consts)
    except KeyError as e:
        raise SchemaError(f"missing key {e}") from e
    return TwoCategory(field_, objects, one_cells, cell_src, cell_tgt,
                       identity_cell, compose1, hom2_dim, id2_coeffs,
                       vcomp_const, hcomp_const)


def two_category_from_json(doc) -> TwoCategory:
    _require(doc, "two_category")
    return _two_category_from_body(doc)


# ----- Gray semigroup ---------------------------------------------------


def gray_to_json(G: GraySemigroup) -> dict:
    base = two_category_to_json(G.base)
    base.pop("schema")
    base.pop("type")
    return {
        "schema": SCHEMA,
        "type": "gray_semigroup",
        "base": base,
        "tensorObjects": _sorted_pairs(G.tensor_obj, _id_tuple, encode_id),
        "tensor1": _sorted_pairs(G.tensor1, _id_tuple, encode_id),
        "tensor2Const": _sorted_pairs(G.tensor2_const, _id_tuple,
                                      _enc_consts),
        "tensorator": _sorted_pairs(G.tensorator_table, _id_tuple,
                                    encode_two_morphism),
    }


def gray_from_json(doc) -> GraySemigroup:
    _require(doc, "gray_semigroup")
    try:
        base = _two_category_from_body(doc["base"])
        tensor_obj = _decode_pairs(doc["tensorObjects"],
                                   lambda k: _dec_id_tuple(k, 2), decode_id)
        tensor1 = _decode_pairs(doc["tensor1"],
                                lambda k: _dec_id_tuple(k, 2), decode_id)
        tensor2_const = _decode_pairs(doc["tensor2Const"],
                                      lambda k: _dec_id_tuple(k, 4),
                                      _dec_consts)
        tensorator = _decode_pairs(doc["tensorator"],
                                   lambda k: _dec_id_tuple(k, 4),
                                   decode_two_morphism)
    except KeyError as e:
        raise SchemaError(f"missing key {e}") from e
    return GraySemigroup(base, tensor_obj, tensor1, tensor2_const,
                         tensorator)


# ----- deformations and witnesses ---------------------------------------


def deformation_to_json(d: FirstOrderDeformation) -> dict:
    return {
        "schema": SCHEMA,
        "type": "deformation",
        "families": {
            "tensorator1": _sorted_pairs(d.tensorator1, encode_id,
                                         encode_two_morphism),
            "associator1": _sorted_pairs(d.associator1, encode_id,
                                         encode_two_morphism),
            "pentagonator1": _sorted_pairs(d.pentagonator1, encode_id,
                                           encode_two_morphism),
        },
    }


def deformation_from_json(doc) -> FirstOrderDeformation:
    _require(doc, "deformation")
    fams = doc.get("families")
    if not isinstance(fams, dict):
        raise SchemaError("missing deformation families")
    out = {}
    for name in ("tensorator1", "associator1", "pentagonator1"):
        out[name] = _decode_pairs(fams.get(name, []), decode_id,
                                  decode_two_morphism)
    return FirstOrderDeformation(**out)


def witness_to_json(w: EquivalenceWitness) -> dict:
    return {
        "schema": SCHEMA,
        "type": "witness",
        "families": {
            "psi1": _sorted_pairs(w.psi1, encode_id, encode_two_morphism),
            "omega1": _sorted_pairs(w.omega1, encode_id,
                                    encode_two_morphism),
        },
    }


def witness_from_json(doc) -> EquivalenceWitness:
    _require(doc, "witness")
    fams = doc.get("families")
    if not isinstance(fams, dict):
        raise SchemaError("missing witness families")
    return EquivalenceWitness(
        _decode_pairs(fams.get("psi1", []), decode_id, decode_two_morphism),
        _decode_pairs(fams.get("omega1", []), decode_id,
                      decode_two_morphism))


# ----- entry points -----------------------------------------------------


def dumps(doc: dict) -> str:
    """Deterministic serialization (sorted keys, no trailing whitespace)."""
    return json.dumps(doc, sort_keys=True, separators=(",", ": "),
                      indent=1)


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"malformed JSON at line {e.lineno}, "
                          f"column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise SchemaError("top-level JSON value must be an object")
    if doc.get("schema") != SCHEMA:
        raise SchemaError(f"unsupported schema {doc.get('schema')!r}")
    return doc


def load_structure(text: str):
    """Parse a document and build the structure it describes."""
    doc = loads(text)
    typ = doc.get("type")
    if typ == "two_category":
        return two_category_from_json(doc)
    if typ == "gray_semigroup":
        return gray_from_json(doc)
    if typ == "deformation":
        return deformation_from_json(doc)
    if typ == "witness":
        return witness_from_json(doc)
    raise SchemaError(f"unknown document type {typ!r}")
