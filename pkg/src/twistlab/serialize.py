"""JSON loading and dumping for groups, cocycles, elements, and element sets.

Round-trips are exact: dump(load(x)) == x up to key order, and every loader
records a sha256 digest of the raw file bytes for report provenance.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .algebra import AlgebraElement
from .cocycles import (BicharacterCocycle, Cocycle, CoboundaryCocycle,
                       ConjugateCocycle, ProductCocycle, PullbackCocycle,
                       TableCocycle, TrivialCocycle)
from .errors import TwistlabError
from .groups import ExtensionGroup, FiniteTableGroup, FreeGroup, Group, IntLattice


class ParseError(TwistlabError):
    """Malformed descriptor file."""


def file_digest(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _require(cond, msg):
    if not cond:
        raise ParseError(msg)


def group_from_json(obj) -> Group:
    _require(isinstance(obj, dict) and "kind" in obj, "group descriptor needs a 'kind'")
    kind = obj["kind"]
    if kind == "finite-table":
        _require("table" in obj, "finite-table descriptor needs 'table'")
        g = FiniteTableGroup(obj["table"])
        _require("order" not in obj or obj["order"] == g.order,
                 "declared order disagrees with the table")
        return g
    if kind == "free":
        return FreeGroup(int(obj["rank"]))
    if kind == "int-lattice":
        return IntLattice(int(obj["dim"]))
    if kind == "extension":
        K = group_from_json(obj["k"])
        _require(isinstance(K, FiniteTableGroup), "extension kernel must be finite-table")
        quotient = group_from_json(obj["lambda"])
        action = {_element_from_key(quotient, h): tuple(p)
                  for h, p in obj["action"].items()}
        factor_set = {}
        for key, k in obj["factorSet"].items():
            h1s, h2s = key.split("|")
            factor_set[(_element_from_key(quotient, h1s),
                        _element_from_key(quotient, h2s))] = int(k)
        return ExtensionGroup(K, quotient, action, factor_set)
    raise ParseError(f"unknown group kind {kind!r}")


def group_to_json(G: Group):
    return G.describe()


def _element_from_key(G: Group, key: str):
    """Inverse of str(element_to_json(g)) for use as a JSON map key."""
    if G.kind == "finite-table":
        return int(key)
    if G.kind == "free":
        return G.element_from_json(key)
    # int-lattice and extension serialize to lists; str() of those is JSON
    return G.element_from_json(json.loads(key))


def _as_complex(v):
    if isinstance(v, (int, float)):
        return complex(v)
    _require(isinstance(v, (list, tuple)) and len(v) == 2, f"bad complex value {v!r}")
    return complex(v[0], v[1])


def cocycle_from_json(obj, G: Group) -> Cocycle:
    _require(isinstance(obj, dict) and "kind" in obj, "cocycle descriptor needs a 'kind'")
    kind = obj["kind"]
    if kind == "trivial":
        return TrivialCocycle(G)
    if kind == "table":
        _require(G.kind == "finite-table", "table cocycles need a finite-table group")
        values = np.array([[_as_complex(v) for v in row] for row in obj["values"]])
        return TableCocycle(G, values)
    if kind == "bicharacter":
        return BicharacterCocycle(G, np.array(obj["theta"], dtype=float))
    if kind == "coboundary":
        beta = obj["beta"]
        if isinstance(beta, dict) and set(beta) == {"random-seed"}:
            from .fixtures import random_beta
            return CoboundaryCocycle(G, random_beta(G, int(beta["random-seed"])))
        bmap = {_element_from_key(G, key): _as_complex(v) for key, v in beta.items()}
        return CoboundaryCocycle(G, bmap)
    if kind == "product":
        return ProductCocycle([cocycle_from_json(f, G) for f in obj["factors"]])
    if kind == "conjugate":
        return ConjugateCocycle(cocycle_from_json(obj["base"], G))
    if kind == "pullback":
        _require(G.kind == "extension", "pullback cocycles need an extension group")
        return PullbackCocycle(G, cocycle_from_json(obj["quotient"], G.quotient))
    raise ParseError(f"unknown cocycle kind {kind!r}")


def element_from_json(obj, G: Group | None = None) -> AlgebraElement:
    _require(isinstance(obj, dict) and "terms" in obj, "element file needs 'terms'")
    gdesc = obj.get("group", "ref")
    if gdesc == "ref":
        _require(G is not None, "element file uses a group ref but no group was supplied")
    else:
        loaded = group_from_json(gdesc)
        if G is not None:
            G.check_same(loaded)
        else:
            G = loaded
    coeffs = {}
    for term in obj["terms"]:
        g = G.element_from_json(term["g"])
        _require(G.contains(g), f"element term {term['g']!r} is not a group element")
        coeffs[g] = complex(term.get("re", 0.0), term.get("im", 0.0))
    return AlgebraElement(G, coeffs)


def element_to_json(a: AlgebraElement, embed_group=True):
    out = {"group": a.group.describe() if embed_group else "ref", "terms": []}
    for g in a.support():
        c = a.coeffs[g]
        out["terms"].append({"g": a.group.element_to_json(g), "re": c.real, "im": c.imag})
    return out


def element_set_from_json(obj, G: Group | None = None):
    """A plain set of group elements: {"group": ..., "elements": [g, ...]}."""
    _require(isinstance(obj, dict) and "elements" in obj, "set file needs 'elements'")
    gdesc = obj.get("group", "ref")
    if gdesc == "ref":
        _require(G is not None, "set file uses a group ref but no group was supplied")
    else:
        loaded = group_from_json(gdesc)
        if G is not None:
            G.check_same(loaded)
        else:
            G = loaded
    out = []
    for e in obj["elements"]:
        g = G.element_from_json(e)
        _require(G.contains(g), f"set entry {e!r} is not a group element")
        out.append(g)
    return G, out


def element_set_to_json(G: Group, elements, embed_group=True):
    return {
        "group": G.describe() if embed_group else "ref",
        "elements": [G.element_to_json(g) for g in sorted(elements, key=G.sort_key)],
    }


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def dump_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
