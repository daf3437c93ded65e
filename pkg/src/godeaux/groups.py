"""Small groups as explicit multiplication tables (order <= 16)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Hashable, List, Sequence, Tuple

MAX_ORDER = 16


@dataclass(frozen=True)
class SmallGroup:
    """A finite group on labels 0..n-1 with table[a][b] = a*b.

    The group axioms are checked on construction; n <= 16 keeps the cubic
    associativity scan trivial.
    """

    table: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        t = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", t)
        n = len(t)
        if n == 0 or n > MAX_ORDER:
            raise ValueError(f"order {n} outside supported range 1..{MAX_ORDER}")
        for row in t:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise ValueError("table is not closed on 0..n-1")
        e = self._find_identity(t)
        if e is None:
            raise ValueError("no identity element")
        for a in range(n):
            if e not in t[a]:
                raise ValueError(f"element {a} has no inverse")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if t[t[a][b]][c] != t[a][t[b][c]]:
                        raise ValueError("multiplication is not associative")

    @staticmethod
    def _find_identity(t) -> int | None:
        n = len(t)
        for e in range(n):
            if all(t[e][a] == a and t[a][e] == a for a in range(n)):
                return e
        return None

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        e = self._find_identity(self.table)
        assert e is not None
        return e

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        e = self.identity
        return self.table[a].index(e)

    def element_order(self, a: int) -> int:
        e = self.identity
        x, k = a, 1
        while x != e:
            x = self.mul(x, a)
            k += 1
        return k

    def order_census(self) -> Dict[int, int]:
        census: Dict[int, int] = {}
        for a in range(self.order):
            o = self.element_order(a)
            census[o] = census.get(o, 0) + 1
        return census

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))

    def relabel(self, perm: Sequence[int]) -> "SmallGroup":
        """The same group with element a renamed perm[a]."""
        n = self.order
        if sorted(perm) != list(range(n)):
            raise ValueError("not a permutation of 0..n-1")
        inv = [0] * n
        for a, pa in enumerate(perm):
            inv[pa] = a
        return SmallGroup(
            tuple(
                tuple(perm[self.table[inv[a]][inv[b]]] for b in range(n))
                for a in range(n)
            )
        )


def cyclic_group(n: int) -> SmallGroup:
    return SmallGroup(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


def direct_product(g: SmallGroup, h: SmallGroup) -> SmallGroup:
    pairs = [(a, b) for a in range(g.order) for b in range(h.order)]
    index = {p: i for i, p in enumerate(pairs)}
    return SmallGroup(
        tuple(
            tuple(index[(g.mul(a1, a2), h.mul(b1, b2))] for (a2, b2) in pairs)
            for (a1, b1) in pairs
        )
    )


def dihedral_group(n: int) -> SmallGroup:
    """Dihedral group of order 2n; element r^a s^b is labeled a + n*b."""
    def mul(x, y):
        a1, b1 = x % n, x // n
        a2, b2 = y % n, y // n
        # (r^a1 s^b1)(r^a2 s^b2) = r^(a1 + a2*(-1)^b1) s^(b1+b2)
        a = (a1 + (a2 if b1 == 0 else -a2)) % n
        return a + n * ((b1 + b2) % 2)

    return SmallGroup(tuple(tuple(mul(x, y) for y in range(2 * n)) for x in range(2 * n)))


def quaternion_group() -> SmallGroup:
    """Q8 with elements 1,-1,i,-i,j,-j,k,-k labeled 0..7."""
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {
        ("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
        ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
        ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j",
    }

    def split(s):
        return (-1 if s.startswith("-") else 1, s.lstrip("-"))

    def mul(x, y):
        sx, ux = split(names[x])
        sy, uy = split(names[y])
        if ux == "1":
            s, u = sx * sy, uy
        elif uy == "1":
            s, u = sx * sy, ux
        elif ux == uy:
            s, u = -sx * sy, "1"
        else:
            s, b = sx * sy, base[(ux, uy)]
            sb, u = split(b)
            s *= sb
        return names.index(u if s == 1 else "-" + u if u != "1" else "-1")

    return SmallGroup(tuple(tuple(mul(x, y) for y in range(8)) for x in range(8)))


def generated_group(
    generators: Sequence[Hashable],
    compose: Callable,
    identity: Hashable,
) -> Tuple[SmallGroup, List[Hashable]]:
    """Close a set of hashable elements under an associative composition.

    Returns the abstract table and the element list in discovery order,
    with the identity first.  Raises when the closure exceeds MAX_ORDER.
    """
    elems: List[Hashable] = [identity]
    index = {identity: 0}
    frontier = [identity]
    while frontier:
        nxt = []
        for e in frontier:
            for s in generators:
                f = compose(e, s)
                if f not in index:
                    if len(elems) >= MAX_ORDER:
                        raise ValueError(f"closure exceeds order {MAX_ORDER}")
                    index[f] = len(elems)
                    elems.append(f)
                    nxt.append(f)
        frontier = nxt
    table = tuple(
        tuple(index[compose(a, b)] for b in elems) for a in elems
    )
    return SmallGroup(table), elems


def classify_order8(g: SmallGroup) -> str:
    """One of Z8, Z4xZ2, Z2^3, D4, Q8, decided by abelianness and the
    element-order census."""
    if g.order != 8:
        raise ValueError(f"classify_order8 needs order 8, got {g.order}")
    census = g.order_census()
    if g.is_abelian():
        if census.get(8, 0) > 0:
            return "Z8"
        if census.get(4, 0) > 0:
            return "Z4xZ2"
        return "Z2^3"
    # nonabelian of order 8: D4 has two order-4 elements, Q8 has six
    if census.get(4, 0) == 2:
        return "D4"
    if census.get(4, 0) == 6:
        return "Q8"
    raise AssertionError(f"impossible order census for order 8: {census}")


def abelian_label(g: SmallGroup) -> str:
    """Invariant-factor label for an abelian group of order <= 16.

    Works by matching the element-order census against every candidate
    divisor chain; for abelian groups the census pins the class.
    """
    if not g.is_abelian():
        raise ValueError("abelian_label needs an abelian group")
    n = g.order
    census = g.order_census()
    for chain in _divisor_chains(n):
        cand = cyclic_group(chain[0])
        for d in chain[1:]:
            cand = direct_product(cand, cyclic_group(d))
        if cand.order_census() == census:
            if len(chain) >= 3 and len(set(chain)) == 1:
                return f"Z{chain[0]}^{len(chain)}"
            return "x".join(f"Z{d}" for d in reversed(chain))
    raise AssertionError(f"no abelian chain matches census {census}")


def _divisor_chains(n: int) -> List[Tuple[int, ...]]:
    """All tuples (d1, ..., dk) with d1 | d2 | ... | dk, product n, d1 >= 2,
    listed with the largest factor last."""
    out: List[Tuple[int, ...]] = []

    def rec(remaining: int, max_d: int, acc: Tuple[int, ...]):
        if remaining == 1:
            out.append(acc)
            return
        for d in range(2, max_d + 1):
            if remaining % d == 0 and (not acc or acc[0] % d == 0):
                rec(remaining // d, d, (d,) + acc)

    rec(n, n, ())
    return out
