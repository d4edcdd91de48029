"""Computable group backends with a uniform interface.

Four backends: finite multiplication tables, free groups on reduced words,
integer lattices, and extensions of a finite normal subgroup by an enumerable
quotient.  Elements are plain hashable values (index, word tuple, vector
tuple, pair) so they can key coefficient maps directly:

  finite-table  -> int index, identity at 0
  free          -> tuple of nonzero ints, +i / -i for the i-th generator
                   and its inverse, freely reduced
  int-lattice   -> tuple of ints
  extension     -> (k, h) with k an index into K and h an element of the
                   quotient backend
"""

from __future__ import annotations

import itertools

from .errors import (
    BackendMismatch,
    InvalidAction,
    InvalidFactorSet,
    InvalidGroupTable,
    NotFinite,
    Unsupported,
)


class Group:
    """Common backend interface; subclasses fix the element representation."""

    kind = "abstract"

    def identity(self):
        raise NotImplementedError

    def compose(self, a, b):
        raise NotImplementedError

    def invert(self, a):
        raise NotImplementedError

    def sort_key(self, a):
        """Total order on elements; shortlex where word length makes sense."""
        raise NotImplementedError

    @property
    def is_finite(self):
        return False

    def elements(self):
        raise NotFinite(f"{self.kind} backend is not finite")

    def element_index(self, a):
        raise NotFinite(f"{self.kind} backend is not finite")

    def enumerate_ball(self, r):
        raise Unsupported(f"{self.kind} backend does not enumerate balls")

    def word_length(self, a):
        raise Unsupported(f"{self.kind} backend has no word length")

    def contains(self, a):
        raise NotImplementedError

    def element_to_json(self, a):
        raise NotImplementedError

    def element_from_json(self, obj):
        raise NotImplementedError

    def describe(self):
        raise NotImplementedError

    def same_backend(self, other):
        return self.describe() == other.describe()

    def check_same(self, other):
        if not self.same_backend(other):
            raise BackendMismatch(f"{self.kind} vs {other.kind} backends differ")


def compose(G: Group, a, b):
    return G.compose(a, b)


def invert(G: Group, a):
    return G.invert(a)


def enumerate_ball(G: Group, r):
    return G.enumerate_ball(r)


class FiniteTableGroup(Group):
    """Finite group given by an order-n multiplication table of indices.

    Index 0 is the identity.  ``labels``, when given, are hashable display
    names used by fixtures and serialization but play no role in arithmetic.
    """

    kind = "finite-table"

    def __init__(self, table, labels=None, name="", validate=True):
        self.table = [tuple(row) for row in table]
        self.order = len(self.table)
        self.name = name
        self.labels = list(labels) if labels is not None else None
        if validate:
            self._validate()
        self._inv = [None] * self.order
        for i in range(self.order):
            for j in range(self.order):
                if self.table[i][j] == 0:
                    self._inv[i] = j
                    break

    def _validate(self):
        n = self.order
        if self.labels is not None and len(self.labels) != n:
            raise InvalidGroupTable("labels length differs from table order")
        for i, row in enumerate(self.table):
            if len(row) != n:
                raise InvalidGroupTable(f"row {i} has length {len(row)}, expected {n}")
            if any(not (0 <= v < n) for v in row):
                raise InvalidGroupTable(f"row {i} has out-of-range entries")
        for j in range(n):
            if self.table[0][j] != j or self.table[j][0] != j:
                raise InvalidGroupTable("identity is not at index 0")
        for i in range(n):
            if 0 not in self.table[i]:
                raise InvalidGroupTable(f"element {i} has no inverse")
        for i in range(n):
            for j in range(n):
                ij = self.table[i][j]
                for k in range(n):
                    if self.table[ij][k] != self.table[i][self.table[j][k]]:
                        raise InvalidGroupTable(f"associativity fails at ({i}, {j}, {k})")

    def identity(self):
        return 0

    def compose(self, a, b):
        return self.table[a][b]

    def invert(self, a):
        return self._inv[a]

    def sort_key(self, a):
        return a

    @property
    def is_finite(self):
        return True

    def elements(self):
        return list(range(self.order))

    def element_index(self, a):
        return a

    def enumerate_ball(self, r):
        return self.elements()

    def contains(self, a):
        return isinstance(a, int) and 0 <= a < self.order

    def element_to_json(self, a):
        return int(a)

    def element_from_json(self, obj):
        a = int(obj)
        if not self.contains(a):
            raise BackendMismatch(f"index {a} out of range for order {self.order}")
        return a

    def describe(self):
        return {"kind": self.kind, "order": self.order, "table": [list(r) for r in self.table]}

    def label(self, a):
        return self.labels[a] if self.labels is not None else a

    def index_of_label(self, lab):
        return self.labels.index(lab)

    def __repr__(self):
        return f"FiniteTableGroup({self.name or self.order})"


def reduce_word(letters):
    out = []
    for v in letters:
        if v == 0:
            raise ValueError("0 is not a generator letter")
        if out and out[-1] == -v:
            out.pop()
        else:
            out.append(v)
    return tuple(out)


class FreeGroup(Group):
    """Free group of finite rank; elements are freely reduced letter tuples."""

    kind = "free"

    def __init__(self, rank):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        self.rank = rank
        # letter order x1 < x1^-1 < x2 < x2^-1 < ...
        self._letters = []
        for i in range(1, rank + 1):
            self._letters.extend([i, -i])

    def identity(self):
        return ()

    def compose(self, a, b):
        word = list(a)
        for v in b:
            if word and word[-1] == -v:
                word.pop()
            else:
                word.append(v)
        return tuple(word)

    def invert(self, a):
        return tuple(-v for v in reversed(a))

    def _letter_rank(self, v):
        return (abs(v) - 1) * 2 + (0 if v > 0 else 1)

    def sort_key(self, a):
        return (len(a), tuple(self._letter_rank(v) for v in a))

    def word_length(self, a):
        return len(a)

    def enumerate_ball(self, r):
        """All reduced words of length <= r, shortlex ordered."""
        ball = [()]
        sphere = [()]
        for _ in range(r):
            nxt = []
            for w in sphere:
                for v in self._letters:
                    if w and w[-1] == -v:
                        continue
                    nxt.append(w + (v,))
            sphere = nxt
            ball.extend(sphere)
        return ball

    def contains(self, a):
        if not isinstance(a, tuple):
            return False
        if any(not isinstance(v, int) or v == 0 or abs(v) > self.rank for v in a):
            return False
        return all(a[i] != -a[i + 1] for i in range(len(a) - 1))

    def element_to_json(self, a):
        return " ".join(f"x{v}" if v > 0 else f"x{-v}^-1" for v in a)

    def element_from_json(self, obj):
        if isinstance(obj, (list, tuple)):
            return reduce_word(int(v) for v in obj)
        s = str(obj).strip()
        if not s or s == "e":
            return ()
        letters = []
        for tok in s.split():
            if not tok.startswith("x"):
                raise ValueError(f"bad generator token {tok!r}")
            body = tok[1:]
            inv = body.endswith("^-1")
            if inv:
                body = body[:-3]
            i = int(body)
            if not 1 <= i <= self.rank:
                raise ValueError(f"generator x{i} out of rank {self.rank}")
            letters.append(-i if inv else i)
        return reduce_word(letters)

    def describe(self):
        return {"kind": self.kind, "rank": self.rank}

    def generator(self, i):
        """The i-th generator, 1-based: generator(1) is x1."""
        if not 1 <= i <= self.rank:
            raise ValueError(f"generator index {i} out of range 1..{self.rank}")
        return (i,)

    def __repr__(self):
        return f"FreeGroup(rank={self.rank})"


class IntLattice(Group):
    """Z^d with addition; word length is the l1 norm."""

    kind = "int-lattice"

    def __init__(self, dim):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = dim

    def identity(self):
        return (0,) * self.dim

    def compose(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def invert(self, a):
        return tuple(-x for x in a)

    def sort_key(self, a):
        return (sum(abs(x) for x in a), a)

    def word_length(self, a):
        return sum(abs(x) for x in a)

    def enumerate_ball(self, r):
        pts = [p for p in itertools.product(range(-r, r + 1), repeat=self.dim)
               if sum(abs(x) for x in p) <= r]
        pts.sort(key=self.sort_key)
        return pts

    def contains(self, a):
        return isinstance(a, tuple) and len(a) == self.dim and all(isinstance(x, int) for x in a)

    def element_to_json(self, a):
        return list(a)

    def element_from_json(self, obj):
        v = tuple(int(x) for x in obj)
        if len(v) != self.dim:
            raise ValueError(f"vector length {len(v)} != dim {self.dim}")
        return v

    def describe(self):
        return {"kind": self.kind, "dim": self.dim}

    def __repr__(self):
        return f"IntLattice(dim={self.dim})"


class ExtensionGroup(Group):
    """Extension of a finite normal subgroup K by a quotient Lambda.

    Data: an action ``phi: h -> permutation of K indices`` and a factor set
    ``kappa: (h1, h2) -> K index``.  Elements are pairs (k, h) multiplying as

        (k1, h1)(k2, h2) = (k1 * phi_{h1}(k2) * kappa(h1, h2), h1 h2).

    The section h -> (e, h) satisfies s(e) = e by the normalisation of kappa.
    """

    kind = "extension"

    def __init__(self, K: FiniteTableGroup, quotient: Group, action, factor_set, validate=True):
        self.K = K
        self.quotient = quotient
        self.action = {h: tuple(p) for h, p in action.items()}
        self.factor_set = dict(factor_set)
        if validate:
            self._validate()

    def _phi(self, h, k):
        return self.action[h][k]

    def _kappa(self, h1, h2):
        return self.factor_set[(h1, h2)]

    def _validate(self):
        K, L = self.K, self.quotient
        hs = L.elements() if L.is_finite else list(self.action.keys())
        e_l = L.identity()
        for h in hs:
            p = self.action.get(h)
            if p is None or sorted(p) != list(range(K.order)):
                raise InvalidAction(f"action value at {h!r} is not a permutation of K", witness=h)
            for x in range(K.order):
                for y in range(K.order):
                    if p[K.compose(x, y)] != K.compose(p[x], p[y]):
                        raise InvalidAction(
                            f"action at {h!r} is not an automorphism: phi(xy) != phi(x)phi(y) "
                            f"at (x, y) = ({x}, {y})",
                            witness=(h, x, y),
                        )
        if self.action[e_l] != tuple(range(K.order)):
            raise InvalidAction("action of the quotient identity is not the identity map", witness=e_l)
        for h in hs:
            if self._kappa(e_l, h) != 0 or self._kappa(h, e_l) != 0:
                raise InvalidFactorSet(f"kappa is not normalised at {h!r}", witness=h)
        for h1 in hs:
            for h2 in hs:
                for h3 in hs:
                    lhs = K.compose(self._phi(h1, self._kappa(h2, h3)),
                                    self._kappa(h1, L.compose(h2, h3)))
                    rhs = K.compose(self._kappa(h1, h2),
                                    self._kappa(L.compose(h1, h2), h3))
                    if lhs != rhs:
                        raise InvalidFactorSet(
                            f"factor set fails the cocycle condition at ({h1!r}, {h2!r}, {h3!r})",
                            witness=(h1, h2, h3),
                        )
        # compatibility phi_{h1} phi_{h2} = Ad(kappa(h1,h2)) phi_{h1 h2};
        # needed for associativity of the pair product
        for h1 in hs:
            for h2 in hs:
                kap = self._kappa(h1, h2)
                p12 = self.action[L.compose(h1, h2)]
                p1, p2 = self.action[h1], self.action[h2]
                for k in range(K.order):
                    lhs = p1[p2[k]]
                    rhs = K.compose(K.compose(kap, p12[k]), K.invert(kap))
                    if lhs != rhs:
                        raise InvalidAction(
                            f"action incompatible with factor set at ({h1!r}, {h2!r}), k = {k}",
                            witness=(h1, h2, k),
                        )

    def identity(self):
        return (0, self.quotient.identity())

    def compose(self, a, b):
        k1, h1 = a
        k2, h2 = b
        k = self.K.compose(self.K.compose(k1, self._phi(h1, k2)), self._kappa(h1, h2))
        return (k, self.quotient.compose(h1, h2))

    def invert(self, a):
        k, h = a
        hi = self.quotient.invert(h)
        # kappa(h^-1, h)^-1 * phi_{h^-1}(k^-1); the order matters for nonabelian K
        ki = self.K.compose(self.K.invert(self._kappa(hi, h)), self._phi(hi, self.K.invert(k)))
        return (ki, hi)

    def section(self, h):
        return (0, h)

    def quotient_map(self, a):
        return a[1]

    def embed_k(self, k):
        return (k, self.quotient.identity())

    def sort_key(self, a):
        return (self.quotient.sort_key(a[1]), a[0])

    @property
    def is_finite(self):
        return self.quotient.is_finite

    def elements(self):
        if not self.is_finite:
            raise NotFinite("quotient is infinite")
        out = []
        for h in self.quotient.elements():
            for k in range(self.K.order):
                out.append((k, h))
        out.sort(key=self.sort_key)
        return out

    def element_index(self, a):
        if not self.is_finite:
            raise NotFinite("quotient is infinite")
        hs = self.quotient.elements()
        return hs.index(a[1]) * self.K.order + a[0]

    def word_length(self, a):
        return self.quotient.word_length(a[1])

    def enumerate_ball(self, r):
        if self.is_finite:
            return self.elements()
        hball = self.quotient.enumerate_ball(r)
        out = []
        for h in hball:
            for k in range(self.K.order):
                out.append((k, h))
        return out

    def contains(self, a):
        return (isinstance(a, tuple) and len(a) == 2
                and self.K.contains(a[0]) and self.quotient.contains(a[1]))

    def element_to_json(self, a):
        return [self.K.element_to_json(a[0]), self.quotient.element_to_json(a[1])]

    def element_from_json(self, obj):
        k, h = obj
        return (self.K.element_from_json(k), self.quotient.element_from_json(h))

    def describe(self):
        hs = self.quotient.elements() if self.quotient.is_finite else sorted(
            self.action.keys(), key=self.quotient.sort_key)
        return {
            "kind": self.kind,
            "k": self.K.describe(),
            "lambda": self.quotient.describe(),
            "action": {str(self.quotient.element_to_json(h)): list(self.action[h]) for h in hs},
            "factorSet": {
                f"{self.quotient.element_to_json(h1)}|{self.quotient.element_to_json(h2)}":
                    self.factor_set[(h1, h2)]
                for h1 in hs
                for h2 in hs
            },
        }

    def __repr__(self):
        return f"ExtensionGroup(|K|={self.K.order}, quotient={self.quotient!r})"


def build_extension(K, quotient, action, factor_set) -> ExtensionGroup:
    """Validated extension backend; see ExtensionGroup for conventions."""
    return ExtensionGroup(K, quotient, action, factor_set, validate=True)
