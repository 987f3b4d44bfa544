import json

import pytest

from chowring.errors import InputError, InvalidParams, NotSubmodular, ParseError
from chowring.io import (
    builtin_matroid,
    matroid_from_json,
    matroid_to_json,
    poset_from_json,
    random_matroid_documents,
)
from chowring.ring import RingContext, hilbert_series

from conftest import RANDOM_SEED


def test_flats_document():
    doc = {"format": "flats", "ground_set": 2, "flats": [[], [0], [1], [0, 1]]}
    m = matroid_from_json(json.dumps(doc))
    assert (m.n, m.r) == (4, 2)


def test_graph_and_builtin_documents():
    m = matroid_from_json({"format": "graph", "vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]})
    assert (m.n, m.r) == (5, 2)
    m = matroid_from_json({"format": "builtin", "name": "uniform", "params": [2, 4]})
    assert (m.n, m.r) == (6, 2)


@pytest.mark.parametrize("doc", [
    {"format": "flats", "ground_set": 1, "flats": [[], [0]], "extra": 1},
    {"format": "flats", "ground_set": 1},
    {"format": "matrix", "rows": []},
    {"format": "flats", "ground_set": 2, "flats": [[0], [0, 1]]},
    {"format": "flats", "ground_set": 2, "flats": [[], [0]]},
    {"format": "flats", "ground_set": 2, "flats": [[], [0, 5], [0, 1]]},
    {"format": "graph", "vertices": 2, "edges": [[0, 3]]},
    {"format": "builtin", "name": "graph", "params": [4]},
    {"format": "builtin", "name": "boolean", "params": ["3"]},
])
def test_bad_documents(doc):
    with pytest.raises(InputError):
        matroid_from_json(doc)


def test_json_syntax_error_has_position():
    with pytest.raises(ParseError) as exc:
        matroid_from_json('{"format": "flats",, }')
    assert exc.value.position == 19


def test_non_submodular_document():
    doc = {"format": "flats", "ground_set": 4, "flats": [[], [0], [1], [2], [3], [0, 1], [2, 3], [0, 1, 2, 3]]}
    with pytest.raises(NotSubmodular):
        matroid_from_json(doc)


def test_builtin_params():
    assert builtin_matroid("graph", ["K4"]).r == 3
    with pytest.raises(InvalidParams):
        builtin_matroid("boolean", [])
    with pytest.raises(InvalidParams):
        builtin_matroid("projective", [2])


def test_round_trip():
    m = builtin_matroid("graph", ["K4"])
    doc = matroid_to_json(m)
    again = matroid_from_json(json.dumps(doc))
    assert matroid_to_json(again) == doc
    for mode in ("augmented", "reduced"):
        assert hilbert_series(RingContext(again, mode)) == hilbert_series(RingContext(m, mode))


def test_poset_document():
    l = poset_from_json('{"size": 3, "covers": [[0, 1], [0, 2]]}')
    assert l.size == 3 and l.bottom == 0
    with pytest.raises(InputError):
        poset_from_json('{"size": 3}')


def test_random_documents_are_deterministic():
    docs = random_matroid_documents(RANDOM_SEED)
    assert docs == random_matroid_documents(RANDOM_SEED)
    assert len(docs) == 20
    for doc in docs:
        m = matroid_from_json(doc)
        assert m.n <= 64 and 1 <= m.r <= 4
        assert m.n == len(doc["flats"])
