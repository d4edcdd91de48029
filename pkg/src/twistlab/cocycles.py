"""Normalized S^1-valued 2-cocycles: construction, validation, group structure.

Conventions fixed here and relied on everywhere else:
  * normalisation sigma(e, g) = sigma(g, e) = 1 exactly;
  * coboundary sign  d beta(x, y) = conj(beta(x)) conj(beta(y)) beta(xy),
    which makes the gauge map T_beta(a)_g = beta(g) a_g multiplicative from
    the untwisted product to the (sigma * d beta)-twisted product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BackendMismatch, NotASubgroup, NotUnitModulus
from .groups import FiniteTableGroup, Group, IntLattice

MODULUS_TOL = 1e-12
IDENTITY_TOL = 1e-12
DEFAULT_SAMPLED_TRIPLES = 100_000
SAMPLE_RADIUS = 6


class Cocycle:
    """Base class; subclasses implement evaluate(x, y) -> unit-modulus complex."""

    kind = "abstract"

    def __init__(self, group: Group):
        self.group = group

    def evaluate(self, x, y) -> complex:
        raise NotImplementedError

    def __call__(self, x, y) -> complex:
        return self.evaluate(x, y)

    def to_json(self):
        raise NotImplementedError


class TrivialCocycle(Cocycle):
    kind = "trivial"

    def evaluate(self, x, y):
        return 1.0 + 0.0j

    def to_json(self):
        return {"kind": "trivial"}


class TableCocycle(Cocycle):
    """Dense value table over a finite group, auto-normalised by sigma(e, e)."""

    kind = "table"

    def __init__(self, group: FiniteTableGroup, values):
        super().__init__(group)
        if not group.is_finite:
            raise BackendMismatch("table cocycles need a finite group")
        vals = np.asarray(values, dtype=complex)
        n = group.order
        if vals.shape != (n, n):
            raise ValueError(f"value table shape {vals.shape} != ({n}, {n})")
        z = vals[0, 0]
        if abs(z - 1.0) > 0:
            if abs(z) < 1e-300:
                raise NotUnitModulus("sigma(e, e) vanishes, cannot normalise")
            vals = vals / z
        vals[0, :] = 1.0
        vals[:, 0] = 1.0
        self.values = vals

    def evaluate(self, x, y):
        return complex(self.values[x, y])

    def to_json(self):
        return {
            "kind": "table",
            "values": [[[v.real, v.imag] for v in row] for row in self.values],
        }


class BicharacterCocycle(Cocycle):
    """sigma(x, y) = exp(2 pi i <x, Theta y>) on an integer lattice."""

    kind = "bicharacter"

    def __init__(self, group: IntLattice, theta):
        super().__init__(group)
        if group.kind != "int-lattice":
            raise BackendMismatch("bicharacter cocycles need an int-lattice group")
        th = np.asarray(theta, dtype=float)
        if th.shape != (group.dim, group.dim):
            raise ValueError(f"theta shape {th.shape} != ({group.dim}, {group.dim})")
        self.theta = th

    def evaluate(self, x, y):
        expo = float(np.asarray(x) @ self.theta @ np.asarray(y))
        return complex(np.exp(2j * np.pi * expo))

    def to_json(self):
        return {"kind": "bicharacter", "theta": self.theta.tolist()}


class CoboundaryCocycle(Cocycle):
    """d beta for a unit-modulus beta with beta(e) = 1."""

    kind = "coboundary"

    def __init__(self, group: Group, beta):
        super().__init__(group)
        self._beta = beta
        e = group.identity()
        if abs(self.beta(e) - 1.0) > MODULUS_TOL:
            raise NotUnitModulus("beta(e) != 1")
        if isinstance(beta, dict):
            for g, v in beta.items():
                if abs(abs(v) - 1.0) > MODULUS_TOL:
                    raise NotUnitModulus(f"|beta({g!r})| != 1")

    def beta(self, g) -> complex:
        b = self._beta[g] if isinstance(self._beta, dict) else self._beta(g)
        return complex(b)

    def evaluate(self, x, y):
        return (np.conj(self.beta(x)) * np.conj(self.beta(y))
                * self.beta(self.group.compose(x, y)))

    def to_json(self):
        if not isinstance(self._beta, dict):
            raise ValueError("only dict-backed coboundaries serialize")
        return {
            "kind": "coboundary",
            "beta": {str(self.group.element_to_json(g)): [v.real, v.imag]
                     for g, v in sorted(self._beta.items(),
                                        key=lambda kv: self.group.sort_key(kv[0]))},
        }


class ProductCocycle(Cocycle):
    kind = "product"

    def __init__(self, factors):
        if not factors:
            raise ValueError("need at least one factor")
        g0 = factors[0].group
        for f in factors[1:]:
            g0.check_same(f.group)
        super().__init__(g0)
        self.factors = list(factors)

    def evaluate(self, x, y):
        z = 1.0 + 0.0j
        for f in self.factors:
            z *= f.evaluate(x, y)
        return z

    def to_json(self):
        return {"kind": "product", "factors": [f.to_json() for f in self.factors]}


class ConjugateCocycle(Cocycle):
    kind = "conjugate"

    def __init__(self, base: Cocycle):
        super().__init__(base.group)
        self.base = base

    def evaluate(self, x, y):
        return complex(np.conj(self.base.evaluate(x, y)))

    def to_json(self):
        return {"kind": "conjugate", "base": self.base.to_json()}


class PullbackCocycle(Cocycle):
    """Cocycle on an extension pulled back from its quotient through (k, h) -> h."""

    kind = "pullback"

    def __init__(self, group, quotient_cocycle: Cocycle):
        if group.kind != "extension":
            raise BackendMismatch("pullback cocycles need an extension group")
        quotient_cocycle.group.check_same(group.quotient)
        super().__init__(group)
        self.quotient_cocycle = quotient_cocycle

    def evaluate(self, x, y):
        return self.quotient_cocycle.evaluate(x[1], y[1])

    def to_json(self):
        return {"kind": "pullback", "quotient": self.quotient_cocycle.to_json()}


@dataclass
class ValidationReport:
    passed: bool
    max_modulus_residual: float
    max_normalization_residual: float
    max_identity_residual: float
    checked_triples: int
    exhaustive: bool
    witnesses: list = field(default_factory=list)

    def to_json(self):
        return {
            "passed": self.passed,
            "max_modulus_residual": self.max_modulus_residual,
            "max_normalization_residual": self.max_normalization_residual,
            "max_identity_residual": self.max_identity_residual,
            "checked_triples": self.checked_triples,
            "exhaustive": self.exhaustive,
            "witnesses": self.witnesses[:10],
        }


def validate(G: Group, sigma: Cocycle, sampled_triples: int = DEFAULT_SAMPLED_TRIPLES,
             seed: int = 0, tol: float = IDENTITY_TOL) -> ValidationReport:
    """Check unit modulus, normalisation, and the cocycle identity.

    Exhaustive over finite groups; otherwise seeded sampled triples drawn from
    the radius-6 ball.
    """
    sigma.group.check_same(G)
    e = G.identity()
    witnesses = []
    mod_res = 0.0
    norm_res = 0.0
    id_res = 0.0

    if G.is_finite:
        pool = G.elements()
        triples = None
        exhaustive = True
        count = len(pool) ** 3
    else:
        pool = G.enumerate_ball(SAMPLE_RADIUS)
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, len(pool), size=(sampled_triples, 3))
        triples = [(pool[i], pool[j], pool[k]) for i, j, k in idx]
        exhaustive = False
        count = sampled_triples

    for g in pool:
        norm_res = max(norm_res,
                       abs(sigma.evaluate(e, g) - 1.0),
                       abs(sigma.evaluate(g, e) - 1.0))
        mod_res = max(mod_res, abs(abs(sigma.evaluate(g, g)) - 1.0))

    def check(x, y, z):
        nonlocal id_res, mod_res
        sxy = sigma.evaluate(x, y)
        syz = sigma.evaluate(y, z)
        mod_res = max(mod_res, abs(abs(sxy) - 1.0))
        lhs = sxy * sigma.evaluate(G.compose(x, y), z)
        rhs = sigma.evaluate(x, G.compose(y, z)) * syz
        r = abs(lhs - rhs)
        if r > id_res:
            id_res = r
        if r > tol and len(witnesses) < 10:
            witnesses.append({
                "triple": [G.element_to_json(x), G.element_to_json(y), G.element_to_json(z)],
                "residual": r,
            })

    if exhaustive:
        for x in pool:
            for y in pool:
                for z in pool:
                    check(x, y, z)
    else:
        for x, y, z in triples:
            check(x, y, z)

    passed = mod_res <= tol and norm_res <= tol and id_res <= tol
    return ValidationReport(passed, mod_res, norm_res, id_res, count, exhaustive, witnesses)


def from_coboundary(G: Group, beta) -> CoboundaryCocycle:
    return CoboundaryCocycle(G, beta)


def from_bicharacter(G: Group, theta) -> BicharacterCocycle:
    if G.kind != "int-lattice":
        raise BackendMismatch("from_bicharacter needs an int-lattice group")
    return BicharacterCocycle(G, theta)


def restrict(sigma: Cocycle, subgroup_elements) -> TableCocycle:
    """Restrict to a finite subgroup, given as an explicit closed element set.

    Returns a table cocycle over a fresh finite-table group; the new group and
    the element embedding are attached as ``.subgroup`` / ``.embedding``.
    """
    G = sigma.group
    e = G.identity()
    elems = list(subgroup_elements)
    if e not in elems:
        elems.append(e)
    elems = sorted(set(elems), key=G.sort_key)
    elems.remove(e)
    elems.insert(0, e)
    index = {g: i for i, g in enumerate(elems)}
    for a in elems:
        if G.invert(a) not in index:
            raise NotASubgroup(f"inverse of {a!r} missing", witness=a)
        for b in elems:
            if G.compose(a, b) not in index:
                raise NotASubgroup(f"product {a!r} * {b!r} escapes the set", witness=(a, b))
    table = [[index[G.compose(a, b)] for b in elems] for a in elems]
    sub = FiniteTableGroup(table, labels=None, name="subgroup")
    vals = np.array([[sigma.evaluate(a, b) for b in elems] for a in elems], dtype=complex)
    out = TableCocycle(sub, vals)
    out.subgroup = sub
    out.embedding = elems
    return out


def multiply(sigma1: Cocycle, sigma2: Cocycle) -> ProductCocycle:
    return ProductCocycle([sigma1, sigma2])


def conjugate(sigma: Cocycle) -> ConjugateCocycle:
    return ConjugateCocycle(sigma)
