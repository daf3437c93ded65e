"""Finite abelian groups in invariant-factor form, with exact 2-divisibility.

A group is a tuple of invariant factors d1 | d2 | ... | dk; elements are
integer tuples reduced mod the factors.  The only nontrivial query the rest
of the package needs is whether an element is divisible by 2 modulo a list
of subgroup generators, which reduces to an integer lattice membership
problem and is answered through Smith normal form, with the witness checked
before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd, lcm
from typing import Iterator, Optional, Sequence, Tuple

from .snf import IntMatrix, solve_lattice_membership

Element = Tuple[int, ...]

_ENUMERATION_BOUND = 2 ** 20


@dataclass(frozen=True)
class FinAbGroup:
    invariant_factors: Tuple[int, ...]

    def __post_init__(self):
        facs = tuple(int(d) for d in self.invariant_factors if int(d) != 1)
        for d in facs:
            if d < 1:
                raise ValueError(f"invariant factor {d} < 1")
        for x, y in zip(facs, facs[1:]):
            if y % x != 0:
                raise ValueError(f"invariant factors {facs} violate d_i | d_i+1")
        object.__setattr__(self, "invariant_factors", facs)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def reduce(self, g: Sequence[int]) -> Element:
        if len(g) != self.rank:
            raise ValueError(f"element length {len(g)} != rank {self.rank}")
        return tuple(int(x) % d for x, d in zip(g, self.invariant_factors))

    def zero(self) -> Element:
        return (0,) * self.rank

    def add(self, a: Sequence[int], b: Sequence[int]) -> Element:
        return self.reduce([x + y for x, y in zip(self.reduce(a), self.reduce(b))])

    def neg(self, a: Sequence[int]) -> Element:
        return self.reduce([-x for x in self.reduce(a)])

    def scale(self, n: int, a: Sequence[int]) -> Element:
        return self.reduce([n * x for x in self.reduce(a)])

    def element_order(self, a: Sequence[int]) -> int:
        a = self.reduce(a)
        o = 1
        for x, d in zip(a, self.invariant_factors):
            o = lcm(o, d // gcd(x, d))
        return o

    def elements(self) -> Iterator[Element]:
        if self.order > _ENUMERATION_BOUND:
            raise ValueError(f"refusing to enumerate a group of order {self.order}")
        yield from product(*(range(d) for d in self.invariant_factors))

    def has_odd_order_torsion_only(self) -> bool:
        return all(d % 2 == 1 for d in self.invariant_factors)


def is_two_divisible(
    group: FinAbGroup,
    g: Sequence[int],
    modulo: Sequence[Sequence[int]] = (),
) -> Tuple[bool, Optional[Element]]:
    """Decide whether g = 2*h modulo the subgroup generated by `modulo`.

    Returns (verdict, h) with h a certified witness, or (False, None).
    The question is integer-linear: 2*h + sum t_j s_j + sum z_i d_i e_i = g
    must have a solution over Z, i.e. g must lie in the column lattice of
    [2*I | S | diag(d)].
    """
    k = group.rank
    g = group.reduce(g)
    mods = [group.reduce(s) for s in modulo]
    cols: list = []
    for i in range(k):
        cols.append([2 if r == i else 0 for r in range(k)])
    for s in mods:
        cols.append(list(s))
    for i, d in enumerate(group.invariant_factors):
        cols.append([d if r == i else 0 for r in range(k)])
    m = IntMatrix.from_rows(list(map(list, zip(*cols))))
    x = solve_lattice_membership(m, list(g))
    if x is None:
        return False, None
    h = group.reduce(x[:k])
    # confirm the witness: 2h - g must land in the span of the modulo gens
    residual = group.add(group.scale(2, h), group.neg(g))
    if mods:
        span = subgroup_span(group, mods)
        if residual not in span:
            raise AssertionError("divisibility witness failed confirmation")
    elif residual != group.zero():
        raise AssertionError("divisibility witness failed confirmation")
    return True, h


def subgroup_span(group: FinAbGroup, gens: Sequence[Sequence[int]]) -> frozenset:
    """All elements of the subgroup generated by gens (breadth-first)."""
    seen = {group.zero()}
    frontier = [group.zero()]
    gens = [group.reduce(s) for s in gens]
    while frontier:
        nxt = []
        for e in frontier:
            for s in gens:
                f = group.add(e, s)
                if f not in seen:
                    if len(seen) > _ENUMERATION_BOUND:
                        raise ValueError("subgroup enumeration exceeded bound")
                    seen.add(f)
                    nxt.append(f)
        frontier = nxt
    return frozenset(seen)
