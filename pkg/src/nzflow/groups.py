"""Finite-group arithmetic.

Three group carriers share one element interface:

* ``TableGroup`` -- a generic group given by its multiplication table.
* ``FamilyIGroup`` -- semidirect products (Z2^2 x Zp) : Z3k in which the
  order-3k generator ``y`` cycles the three involutions x1 -> x2 -> x3 and
  conjugates the order-p generator ``a`` to ``a^r``.
* ``FamilyIIGroup`` -- direct products A4 x Zp presented with the same Klein
  four-group S = {1, x1, x2, x3}, an order-3 cycling element and a central
  ``a`` of order p, normalised so that y^3 = a^s.

Elements are immutable value objects; all derived structures treat them as
opaque hashable, orderable keys.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParameterError, StructuralError

# Klein four-group on indices 0..3 (0 is the identity, x1*x2 = x3, ...).
_KLEIN = (
    (0, 1, 2, 3),
    (1, 0, 3, 2),
    (2, 3, 0, 1),
    (3, 2, 1, 0),
)


def _cyc(beta: int, n: int) -> int:
    """Cycle a Klein index through {1,2,3} by n steps; 0 is fixed."""
    if beta == 0:
        return 0
    return (beta - 1 + n) % 3 + 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Element:
    """A group element: a group reference plus a canonical coordinate key."""

    __slots__ = ("group", "key")

    def __init__(self, group: "FiniteGroup", key: tuple):
        self.group = group
        self.key = key

    @property
    def name(self) -> str:
        return self.group.element_name(self.key)

    def __mul__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        if self.group.signature != other.group.signature:
            raise StructuralError(
                f"cannot multiply elements of different groups: "
                f"{self.group.signature} vs {other.group.signature}"
            )
        return self.group.mul(self, other)

    def inv(self) -> "Element":
        return self.group.inv(self)

    def __pow__(self, n: int) -> "Element":
        base = self if n >= 0 else self.inv()
        result = self.group.identity
        for _ in range(abs(n)):
            result = result * base
        return result

    def order(self) -> int:
        """Least n >= 1 with self^n = identity."""
        acc = self
        n = 1
        while acc != self.group.identity:
            acc = acc * self
            n += 1
            if n > self.group.order:
                raise StructuralError("element order exceeds group order")
        return n

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Element)
            and self.group.signature == other.group.signature
            and self.key == other.key
        )

    def __hash__(self) -> int:
        return hash((self.group.signature, self.key))

    def __lt__(self, other: "Element") -> bool:
        if self.group.signature != other.group.signature:
            raise StructuralError("cannot order elements of different groups")
        return self.key < other.key

    def __le__(self, other: "Element") -> bool:
        return self == other or self < other

    def __repr__(self) -> str:
        return f"<{self.name}>"


def conjugate(g: Element, h: Element) -> Element:
    """The conjugate h^-1 * g * h."""
    return h.inv() * g * h


class FiniteGroup:
    """Common interface: order, signature, identity, mul/inv, element list."""

    order: int
    signature: tuple
    identity: Element

    def elements(self) -> list[Element]:
        raise NotImplementedError

    def mul(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inv(self, g: Element) -> Element:
        raise NotImplementedError

    def element_name(self, key: tuple) -> str:
        raise NotImplementedError

    def to_json_obj(self) -> dict:
        raise NotImplementedError


class TableGroup(FiniteGroup):
    """Group given by an order x order multiplication table of indices."""

    def __init__(self, table: Sequence[Sequence[int]], identity: int | None = None,
                 names: Sequence[str] | None = None, check: bool = True):
        self.table = tuple(tuple(row) for row in table)
        n = len(self.table)
        self.order = n
        if any(len(row) != n for row in self.table):
            raise ParameterError("multiplication table must be square")
        if identity is None:
            identity = next(
                (e for e in range(n)
                 if all(self.table[e][g] == g and self.table[g][e] == g for g in range(n))),
                None,
            )
            if identity is None:
                raise ParameterError("table has no identity element")
        self._identity_index = identity
        self.names = tuple(names) if names is not None else tuple(f"g{i}" for i in range(n))
        if len(self.names) != n:
            raise ParameterError("names must match group order")
        digest = hashlib.sha1(repr(self.table).encode()).hexdigest()[:16]
        self.signature = ("table", n, digest)
        self.identity = Element(self, (identity,))
        if check:
            self._validate()

    def _validate(self):
        n = self.order
        e = self._identity_index
        for g in range(n):
            if any(not 0 <= v < n for v in self.table[g]):
                raise ParameterError("table entries must be element indices")
            if self.table[e][g] != g or self.table[g][e] != g:
                raise ParameterError("identity row/column must be the identity map")
            if e not in self.table[g]:
                raise ParameterError(f"element {g} has no right inverse")
        # Associativity is only checked exhaustively for small tables.
        if n <= 200:
            t = self.table
            for a in range(n):
                ta = t[a]
                for b in range(n):
                    tab = ta[b]
                    tb = t[b]
                    for c in range(n):
                        if t[tab][c] != ta[tb[c]]:
                            raise ParameterError(
                                f"table is not associative at ({a},{b},{c})")

    @classmethod
    def from_permutations(cls, generators: Iterable[Sequence[int]],
                          names: Sequence[str] | None = None) -> "TableGroup":
        """Closure of permutation generators (tuples mapping i -> perm[i])."""
        gens = [tuple(g) for g in generators]
        if not gens:
            raise ParameterError("need at least one generator")
        deg = len(gens[0])
        ident = tuple(range(deg))
        seen = {ident: 0}
        elems = [ident]
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = tuple(p[g[i]] for i in range(deg))
                    if q not in seen:
                        seen[q] = len(elems)
                        elems.append(q)
                        nxt.append(q)
            frontier = nxt
        n = len(elems)
        table = [[seen[tuple(a[b[i]] for i in range(deg))] for b in elems] for a in elems]
        grp = cls(table, identity=0, names=names)
        grp.permutations = tuple(elems)
        return grp

    @classmethod
    def cyclic(cls, n: int) -> "TableGroup":
        table = [[(i + j) % n for j in range(n)] for i in range(n)]
        return cls(table, identity=0)

    @classmethod
    def dihedral(cls, n: int) -> "TableGroup":
        """Dihedral group of order 2n; element 2i is r^i, 2i+1 is r^i*s."""
        def mul(x, y):
            i, a = x // 2, x % 2
            j, b = y // 2, y % 2
            if a == 0:
                return 2 * ((i + j) % n) + b
            return 2 * ((i - j) % n) + (1 - b)
        table = [[mul(x, y) for y in range(2 * n)] for x in range(2 * n)]
        return cls(table, identity=0)

    def element(self, index: int) -> Element:
        if not 0 <= index < self.order:
            raise ParameterError(f"element index {index} out of range")
        return Element(self, (index,))

    def elements(self) -> list[Element]:
        return [Element(self, (i,)) for i in range(self.order)]

    def mul(self, g: Element, h: Element) -> Element:
        return Element(self, (self.table[g.key[0]][h.key[0]],))

    def inv(self, g: Element) -> Element:
        i = g.key[0]
        j = self.table[i].index(self._identity_index)
        return Element(self, (j,))

    def element_name(self, key: tuple) -> str:
        return self.names[key[0]]

    def to_json_obj(self) -> dict:
        return {
            "family": "table",
            "order": self.order,
            "identity": self._identity_index,
            "table": [v for row in self.table for v in row],
        }


class FamilyIGroup(FiniteGroup):
    """(Z2^2 x Zp) : Z3k with y-conjugation cycling x1,x2,x3 and a -> a^r.

    Elements are stored in the canonical form x_alpha * a^j * y^i with
    alpha in [0,3], j in [0,p), i in [0,3k).  Requires p prime > 3, k odd
    and coprime to p, and r^(3k) = 1 (mod p) so the action is well defined.
    """

    def __init__(self, p: int, k: int, r: int):
        if not is_prime(p) or p <= 3:
            raise ParameterError(f"p must be a prime larger than 3, got {p}")
        if k < 1 or k % 2 == 0:
            raise ParameterError(f"k must be an odd positive integer, got {k}")
        if k % p == 0:
            raise ParameterError(f"k must not be divisible by p, got k={k}, p={p}")
        r = r % p
        if r == 0:
            raise ParameterError("r must be nonzero modulo p")
        if pow(r, 3 * k, p) != 1:
            raise ParameterError(
                f"r^(3k) = 1 (mod p) is required, got r={r}, p={p}, k={k}")
        self.p = p
        self.k = k
        self.r = r
        self.order = 12 * p * k
        self.signature = ("family_i", p, k, r)
        # rpow[i] = r^i mod p; exponents are always reduced mod 3k.
        self.rpow = [1] * (3 * k)
        for i in range(1, 3 * k):
            self.rpow[i] = (self.rpow[i - 1] * r) % p
        self.identity = Element(self, (0, 0, 0))
        self.x = Element(self, (1, 0, 0))
        self.a = Element(self, (0, 1, 0))
        self.y = Element(self, (0, 0, 1))

    def elements(self) -> list[Element]:
        return [
            Element(self, (alpha, j, i))
            for alpha in range(4)
            for j in range(self.p)
            for i in range(3 * self.k)
        ]

    def mul(self, g: Element, h: Element) -> Element:
        alpha, j, i = g.key
        beta, l, m = h.key
        kk = 3 * self.k
        # x_a a^j y^i * x_b a^l y^m = (x_a x_{b<<-i}) a^(j + l*r^-i) y^(i+m)
        rinv_i = self.rpow[(-i) % kk]
        return Element(self, (
            _KLEIN[alpha][_cyc(beta, -i)],
            (j + l * rinv_i) % self.p,
            (i + m) % kk,
        ))

    def inv(self, g: Element) -> Element:
        alpha, j, i = g.key
        kk = 3 * self.k
        return Element(self, (
            _cyc(alpha, i),
            (-j * self.rpow[i % kk]) % self.p,
            (-i) % kk,
        ))

    def make(self, alpha: int, apow: int, ypow: int) -> Element:
        """The element x_alpha * a^apow * y^ypow."""
        return Element(self, (alpha, apow % self.p, ypow % (3 * self.k)))

    def decompose(self, g: Element) -> tuple[int, int, int]:
        """(alpha, apow, ypow) of the canonical form x_alpha a^apow y^ypow."""
        return g.key

    def xya_form(self, g: Element) -> tuple[int, int, int]:
        """(alpha, ypow, apow) of the alternative form x_alpha y^ypow a^apow."""
        alpha, j, i = g.key
        return alpha, i, (j * self.rpow[i % (3 * self.k)]) % self.p

    def make_xya(self, alpha: int, ypow: int, apow: int) -> Element:
        """The element x_alpha * y^ypow * a^apow."""
        i = ypow % (3 * self.k)
        return Element(self, (alpha, (apow * self.rpow[(-i) % (3 * self.k)]) % self.p, i))

    def element_name(self, key: tuple) -> str:
        alpha, j, i = key
        parts = []
        if alpha:
            parts.append(f"x{alpha}")
        if j:
            parts.append("a" if j == 1 else f"a^{j}")
        if i:
            parts.append("y" if i == 1 else f"y^{i}")
        return "*".join(parts) if parts else "1"

    def to_json_obj(self) -> dict:
        return {"family": "family_i",
                "params": {"p": self.p, "k": self.k, "r": self.r},
                "order": self.order}


class FamilyIIGroup(FiniteGroup):
    """A4 x Zp with designated x, a, y such that y^3 = a^s.

    A4 is presented as the Klein group S = {1,x1,x2,x3} extended by an
    order-3 element b cycling x1 -> x2 -> x3; elements are (alpha, b-power,
    Zp component).  y = (b, c1) where 3*c1 = s (mod p), and a = (1, 1).
    """

    def __init__(self, p: int, s: int):
        if not is_prime(p) or p <= 3:
            raise ParameterError(f"p must be a prime larger than 3, got {p}")
        if s % p == 0:
            raise ParameterError(f"s must be nonzero modulo p, got s={s}")
        self.p = p
        self.s = s % p
        self.c1 = (self.s * pow(3, -1, p)) % p
        self.order = 12 * p
        self.signature = ("family_ii", p, self.s)
        self.identity = Element(self, (0, 0, 0))
        self.x = Element(self, (1, 0, 0))
        self.a = Element(self, (0, 0, 1))
        self.y = Element(self, (0, 1, self.c1))

    def elements(self) -> list[Element]:
        return [
            Element(self, (alpha, b, c))
            for alpha in range(4)
            for b in range(3)
            for c in range(self.p)
        ]

    def mul(self, g: Element, h: Element) -> Element:
        alpha, b, c = g.key
        beta, m, d = h.key
        return Element(self, (
            _KLEIN[alpha][_cyc(beta, -b)],
            (b + m) % 3,
            (c + d) % self.p,
        ))

    def inv(self, g: Element) -> Element:
        alpha, b, c = g.key
        return Element(self, (_cyc(alpha, b), (-b) % 3, (-c) % self.p))

    def make(self, alpha: int, ypow: int, apow: int) -> Element:
        """The element x_alpha * y^ypow * a^apow."""
        c = (ypow * self.c1 + apow) % self.p
        return Element(self, (alpha, ypow % 3, c))

    def decompose(self, g: Element) -> tuple[int, int, int]:
        """(alpha, ypow, apow) of the canonical form x_alpha y^ypow a^apow."""
        alpha, b, c = g.key
        return alpha, b, (c - b * self.c1) % self.p

    def xya_form(self, g: Element) -> tuple[int, int, int]:
        return self.decompose(g)

    def make_xya(self, alpha: int, ypow: int, apow: int) -> Element:
        return self.make(alpha, ypow, apow)

    def element_name(self, key: tuple) -> str:
        alpha, ypow, apow = self.decompose(Element(self, key))
        parts = []
        if alpha:
            parts.append(f"x{alpha}")
        if ypow:
            parts.append("y" if ypow == 1 else f"y^{ypow}")
        if apow:
            parts.append("a" if apow == 1 else f"a^{apow}")
        return "*".join(parts) if parts else "1"

    def to_json_obj(self) -> dict:
        return {"family": "family_ii",
                "params": {"p": self.p, "s": self.s},
                "order": self.order}


def family_i(p: int, k: int, r: int) -> FamilyIGroup:
    return FamilyIGroup(p, k, r)


def family_ii(p: int, s: int) -> FamilyIIGroup:
    return FamilyIIGroup(p, s)


def group_from_json_obj(obj: dict) -> FiniteGroup:
    fam = obj.get("family")
    if fam == "family_i":
        q = obj["params"]
        return FamilyIGroup(q["p"], q["k"], q["r"])
    if fam == "family_ii":
        q = obj["params"]
        return FamilyIIGroup(q["p"], q["s"])
    if fam == "table":
        n = obj["order"]
        flat = obj["table"]
        if len(flat) != n * n:
            raise ParameterError("table length must be order^2")
        table = [flat[i * n:(i + 1) * n] for i in range(n)]
        return TableGroup(table, identity=obj.get("identity"))
    raise ParameterError(f"unknown group family {fam!r}")


def generated_subgroup(group: FiniteGroup, generators: Iterable[Element]) -> list[Element]:
    """Closure of the generators under multiplication, sorted."""
    gens = list(generators)
    for g in gens:
        if g.group.signature != group.signature:
            raise StructuralError("generator from a different group")
    seen = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                for q in (h * g, h * g.inv()):
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
        frontier = nxt
    return sorted(seen)


def left_cosets(group: FiniteGroup, subgroup: Iterable[Element]) -> list[list[Element]]:
    """Partition of the group into left cosets g*H, deterministically ordered."""
    hset = sorted(set(subgroup))
    if not hset:
        raise ParameterError("subgroup must be non-empty")
    if group.order % len(hset) != 0:
        raise ParameterError("subgroup size does not divide group order")
    assigned = set()
    cosets = []
    for g in group.elements():
        if g in assigned:
            continue
        coset = sorted(g * h for h in hset)
        assigned.update(coset)
        cosets.append(coset)
    if len(assigned) != group.order:
        raise ParameterError("not a subgroup: cosets do not partition the group")
    return cosets
