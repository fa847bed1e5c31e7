"""Built-in example catalog.

Every entry is stored in the problem-file format itself, so the catalog
doubles as documentation of the grammar and as parser test data.
"""

from __future__ import annotations

import json

from .problem import ProblemFile, parse_problem


def _sl2_brackets(offset: int = 0):
    # basis (e, h, f): [e,f] = h, [h,e] = 2e, [h,f] = -2f
    o = offset
    return [
        [o + 0, o + 2, [[o + 1, "1"]]],
        [o + 1, o + 0, [[o + 0, "2"]]],
        [o + 1, o + 2, [[o + 2, "-2"]]],
    ]


def _heis_brackets(offset: int = 0):
    o = offset
    return [[o + 0, o + 1, [[o + 2, "1"]]]]


def _diagonal(dim: int):
    cols = []
    for i in range(dim):
        col = ["0"] * (2 * dim)
        col[i] = "1"
        col[dim + i] = "1"
        cols.append(col)
    return cols


_CATALOG_DOCS = {
    "sl2-borel": {
        "name": "sl2-borel",
        "g": {"dim": 3, "labels": ["e", "h", "f"], "brackets": _sl2_brackets()},
        "h": {"indices": [0, 1]},
    },
    "diagonal-sl2": {
        "name": "diagonal-sl2",
        "g": {
            "dim": 6,
            "labels": ["e1", "h1", "f1", "e2", "h2", "f2"],
            "brackets": _sl2_brackets(0) + _sl2_brackets(3),
        },
        "h": {"embedding": _diagonal(3)},
    },
    "diagonal-heisenberg": {
        "name": "diagonal-heisenberg",
        "g": {
            "dim": 6,
            "labels": ["p1", "q1", "z1", "p2", "q2", "z2"],
            "brackets": _heis_brackets(0) + _heis_brackets(3),
        },
        "h": {"embedding": _diagonal(3)},
    },
    "abelian-inclusion": {
        "name": "abelian-inclusion",
        "g": {"dim": 3, "labels": ["a", "b", "c"], "brackets": []},
        "h": {"indices": [0]},
    },
    "semidirect-split": {
        # h = span{t} rotating the abelian ideal span{x, y}; the inclusion
        # splits equivariantly, so the connecting cocycle vanishes outright
        "name": "semidirect-split",
        "g": {
            "dim": 3,
            "labels": ["t", "x", "y"],
            "brackets": [[0, 1, [[2, "1"]]], [0, 2, [[1, "-1"]]]],
        },
        "h": {"indices": [0]},
    },
    "jacobi-broken-negative-control": {
        # antisymmetric and h-closed, but the (a0,a1,a2) Jacobi sum is a0;
        # the second quadratic-algebra condition must fail on it
        "name": "jacobi-broken-negative-control",
        "g": {
            "dim": 3,
            "labels": ["a0", "a1", "a2"],
            "brackets": [[0, 2, [[2, "1"]]], [1, 2, [[0, "1"]]]],
        },
        "h": {"indices": [0, 1]},
        "settings": {"expect_invalid": True},
    },
}


def catalog_list() -> list:
    return sorted(_CATALOG_DOCS)


def catalog_get(name: str) -> ProblemFile:
    if name not in _CATALOG_DOCS:
        raise KeyError(f"unknown catalog entry {name!r}; available: {', '.join(catalog_list())}")
    return parse_problem(json.dumps(_CATALOG_DOCS[name]))
