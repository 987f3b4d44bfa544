from __future__ import annotations

from functools import lru_cache

import pytest

from chowring.io import matroid_from_json, random_matroid_documents
from chowring.matroid import boolean_matroid, graphic_matroid, named_graph, uniform_matroid
from chowring.ring import RingContext

RANDOM_SEED = 2024


@lru_cache(maxsize=None)
def named_matroid(name: str):
    if name.startswith("B"):
        return boolean_matroid(int(name[1:]))
    if name.startswith("U"):
        r, n = name[1:].split("_")
        return uniform_matroid(int(r), int(n))
    if name == "K4":
        return graphic_matroid(named_graph("K4"))
    raise KeyError(name)


@lru_cache(maxsize=None)
def context(name: str, mode: str) -> RingContext:
    return RingContext(named_matroid(name), mode)


@lru_cache(maxsize=None)
def random_matroids():
    return tuple(matroid_from_json(doc) for doc in random_matroid_documents(RANDOM_SEED))


SMALL = ["B1", "B2", "B3", "U2_3", "U2_4", "U3_3", "K4"]
NAMED = ["B2", "B3", "B4", "B5", "U2_3", "U2_4", "U3_5", "K4"]
MODES = ["augmented", "reduced"]


@pytest.fixture(params=MODES)
def mode(request):
    return request.param


def flat_with_labels(m, labels):
    target = frozenset(labels)
    return next(x for x in range(m.n) if m.labels[x] == target)


ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, desc = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {desc}")
