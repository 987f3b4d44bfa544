"""JSON documents for matroids and posets, plus seeded random test matroids."""
from __future__ import annotations

import json
import random

from sympy import Matrix

from .errors import InputError, InvalidParams, ParseError
from .lattice import MeetSemilattice, as_meet_semilattice, build_poset
from .matroid import (
    MatroidLattice,
    boolean_matroid,
    from_flat_sets,
    graphic_matroid,
    named_graph,
    uniform_matroid,
)

_MATROID_FIELDS = {
    "flats": {"format", "ground_set", "flats"},
    "graph": {"format", "vertices", "edges"},
    "builtin": {"format", "name", "params"},
}
_POSET_FIELDS = {"size", "covers"}


def _load(doc: str | dict) -> dict:
    if isinstance(doc, dict):
        return doc
    try:
        data = json.loads(doc)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    if not isinstance(data, dict):
        raise InputError("top-level JSON value must be an object")
    return data


def _check_fields(data: dict, allowed: set[str], what: str):
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise InputError(f"unknown field(s) in {what}: {', '.join(unknown)}")
    missing = sorted(allowed - set(data))
    if missing:
        raise InputError(f"missing field(s) in {what}: {', '.join(missing)}")


def _int(value, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise InputError(f"{name} must be an integer")
    return value


def builtin_matroid(name: str, params: list) -> MatroidLattice:
    """``boolean n``, ``uniform r n`` or ``graph K4`` style named families."""
    if name == "boolean":
        if len(params) != 1:
            raise InvalidParams("boolean takes one parameter n")
        return boolean_matroid(int(params[0]))
    if name == "uniform":
        if len(params) != 2:
            raise InvalidParams("uniform takes parameters r n")
        return uniform_matroid(int(params[0]), int(params[1]))
    if name == "graph":
        if len(params) != 1:
            raise InvalidParams("graph takes one graph name such as K4 or C5")
        return graphic_matroid(named_graph(str(params[0])))
    raise InvalidParams(f"unknown builtin matroid {name!r}")


def matroid_from_json(doc: str | dict) -> MatroidLattice:
    data = _load(doc)
    fmt = data.get("format")
    if fmt not in _MATROID_FIELDS:
        raise InputError(f"unknown matroid format {fmt!r}")
    _check_fields(data, _MATROID_FIELDS[fmt], f"{fmt} document")
    if fmt == "flats":
        n = _int(data["ground_set"], "ground_set")
        if n < 0:
            raise InputError("ground_set must be nonnegative")
        flats = data["flats"]
        if not isinstance(flats, list):
            raise InputError("flats must be a list")
        sets = []
        for k, f in enumerate(flats):
            if not isinstance(f, list):
                raise InputError(f"flat #{k} must be a list")
            elems = [_int(e, f"element of flat #{k}") for e in f]
            if any(not 0 <= e < n for e in elems) or len(set(elems)) != len(elems):
                raise InputError(f"flat #{k} has elements outside 0..{n - 1} or repeats")
            sets.append(frozenset(elems))
        if frozenset() not in sets:
            raise InputError("the empty flat [] is required")
        if frozenset(range(n)) not in sets:
            raise InputError("the full ground set is required as a flat")
        return from_flat_sets(sets)
    if fmt == "graph":
        v = _int(data["vertices"], "vertices")
        edges = data["edges"]
        if not isinstance(edges, list):
            raise InputError("edges must be a list")
        out = []
        for k, e in enumerate(edges):
            if not (isinstance(e, list) and len(e) == 2):
                raise InputError(f"edge #{k} must be a pair")
            u, w = (_int(x, f"endpoint of edge #{k}") for x in e)
            if not (0 <= u < v and 0 <= w < v):
                raise InputError(f"edge #{k} references a vertex outside 0..{v - 1}")
            out.append((u, w))
        return graphic_matroid(out)
    name = data["name"]
    if name not in ("boolean", "uniform"):
        raise InputError(f"unknown builtin {name!r}")
    params = data["params"]
    if not isinstance(params, list):
        raise InputError("params must be a list")
    return builtin_matroid(name, [_int(p, "param") for p in params])


def matroid_to_json(m: MatroidLattice) -> dict:
    """Flats document with ground elements renumbered 0..n-1."""
    if m.labels is None:
        raise InputError("matroid has no ground-set labels to serialize")
    ground = sorted(set().union(*m.labels))
    pos = {e: i for i, e in enumerate(ground)}
    flats = [sorted(pos[e] for e in m.labels[x]) for x in range(m.n)]
    return {"format": "flats", "ground_set": len(ground), "flats": flats}


def poset_from_json(doc: str | dict) -> MeetSemilattice:
    data = _load(doc)
    _check_fields(data, _POSET_FIELDS, "poset document")
    n = _int(data["size"], "size")
    covers = data["covers"]
    if not isinstance(covers, list):
        raise InputError("covers must be a list")
    pairs = []
    for k, c in enumerate(covers):
        if not (isinstance(c, list) and len(c) == 2):
            raise InputError(f"cover #{k} must be a pair")
        pairs.append(tuple(_int(x, f"element of cover #{k}") for x in c))
    return as_meet_semilattice(build_poset(pairs, n))


# random test matroids ----------------------------------------------------

def _closure_flats(n: int, rank_of) -> list[frozenset]:
    flats = set()
    for bits in range(1 << n):
        r = rank_of(bits)
        closure = frozenset(e for e in range(n) if rank_of(bits | 1 << e) == r)
        flats.add(closure)
    return sorted(flats, key=lambda s: (len(s), sorted(s)))


def random_vector_matroid(rng: random.Random, rank: int, n: int, entries=(-1, 0, 1)) -> list[frozenset]:
    """Flats of the column matroid of a random integer matrix without zero columns."""
    cols = []
    while len(cols) < n:
        col = [rng.choice(entries) for _ in range(rank)]
        if any(col):
            cols.append(col)
    cache: dict[int, int] = {}

    def rank_of(bits):
        if bits not in cache:
            chosen = [cols[i] for i in range(n) if bits >> i & 1]
            cache[bits] = Matrix(chosen).T.rank() if chosen else 0
        return cache[bits]

    return _closure_flats(n, rank_of)


def random_graph_edges(rng: random.Random, vertices: int, edges: int) -> list[tuple[int, int]]:
    out = []
    while len(out) < edges:
        u, w = rng.sample(range(vertices), 2)
        out.append((min(u, w), max(u, w)))
    return out


def random_matroid_documents(seed: int, count: int = 20, max_flats: int = 64, max_rank: int = 4) -> list[dict]:
    """Seeded flats documents mixing vector and graphic matroids."""
    rng = random.Random(seed)
    docs = []
    while len(docs) < count:
        if len(docs) % 2 == 0:
            rank = rng.randint(1, max_rank)
            n = rng.randint(rank, rank + 3)
            sets = random_vector_matroid(rng, rank, n)
            ground = n
        else:
            v = rng.randint(3, 5)
            edges = random_graph_edges(rng, v, rng.randint(2, 7))
            sets = list(graphic_matroid(edges).labels)
            ground = len(edges)
        if len(sets) > max_flats:
            continue
        m = from_flat_sets(sets)
        if m.r < 1 or m.r > max_rank:
            continue
        docs.append({"format": "flats", "ground_set": ground, "flats": [sorted(s) for s in sets]})
    return docs
