"""Sparse multivariate polynomials in weighted variables over an exact field.

A ring fixes variable names, positive integer weights, and a coefficient
field (the rationals or an odd prime field).  Polynomials are dictionaries
mapping exponent tuples to nonzero coefficients, so arithmetic is exact and
term order is imposed only at serialization time.

The text form writes each term as ``coeff * x1^a x2^b`` with exact
decimal-free coefficients (``-3/7``), terms joined by `` + `` in graded
lexicographic order with the lexicographically largest exponent first.
``parse_poly`` accepts exactly what ``to_string`` produces, plus bare
monomials (implicit coefficient 1) and bare constants.

Monomial maps send each variable to a nonzero scalar times a variable of
the same weight.  ``apply_map`` substitutes; composition is arranged so the
point maps compose in the usual order (see ``compose``), which makes
substitution contravariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .scalars import FpElement, PrimeField, QQ, Rationals, scalar_to_str

Exponents = Tuple[int, ...]
Field = Union[Rationals, PrimeField]


@dataclass(frozen=True)
class WRing:
    names: Tuple[str, ...]
    weights: Tuple[int, ...]
    field: Field

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.names) != len(self.weights):
            raise ValueError("one weight per variable required")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def degree_of(self, expts: Exponents) -> int:
        return sum(e * w for e, w in zip(expts, self.weights))

    def zero_poly(self) -> "WPoly":
        return WPoly(self, {})

    def variable(self, v: int) -> "WPoly":
        e = tuple(1 if i == v else 0 for i in range(self.nvars))
        return WPoly(self, {e: self.field.one()})

    def monomial(self, expts: Sequence[int], coeff=1) -> "WPoly":
        return WPoly(self, {tuple(int(e) for e in expts): self.field(coeff)})

    def constant(self, c) -> "WPoly":
        return WPoly(self, {(0,) * self.nvars: self.field(c)})

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValueError(f"no variable named {name!r} in {self.names}") from None


class WPoly:
    """A polynomial over its ring; zero coefficients are never stored."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: WRing, terms: Dict[Exponents, object]):
        self.ring = ring
        clean: Dict[Exponents, object] = {}
        fp = ring.field.characteristic
        for e, c in terms.items():
            if len(e) != ring.nvars:
                raise ValueError(f"exponent tuple {e} has wrong length")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent in {e}")
            c = ring.field(c) if isinstance(c, (int, str)) else c
            if fp == 0 and not isinstance(c, Fraction):
                raise TypeError(f"coefficient {c!r} is not rational")
            if fp != 0 and not (isinstance(c, FpElement) and c.p == fp):
                raise TypeError(f"coefficient {c!r} does not live in GF({fp})")
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    def _same_ring(self, other: "WPoly"):
        if self.ring != other.ring:
            raise ValueError("polynomials live in different rings")

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> Optional[int]:
        if not self.terms:
            return None
        return max(self.ring.degree_of(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {self.ring.degree_of(e) for e in self.terms}
        return len(degs) <= 1

    def monomials(self) -> List[Exponents]:
        return sorted(self.terms, key=self._order_key, reverse=True)

    def _order_key(self, e: Exponents):
        return (self.ring.degree_of(e),) + e

    def coefficient(self, expts: Sequence[int]):
        return self.terms.get(tuple(expts), self.ring.field.zero())

    def __add__(self, other: "WPoly") -> "WPoly":
        self._same_ring(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return WPoly(self.ring, out)

    def __neg__(self) -> "WPoly":
        return WPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "WPoly") -> "WPoly":
        return self + (-other)

    def __mul__(self, other) -> "WPoly":
        if not isinstance(other, WPoly):
            c = self.ring.field(other)
            return WPoly(self.ring, {e: x * c for e, x in self.terms.items()})
        self._same_ring(other)
        out: Dict[Exponents, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                out[e] = out[e] + c if e in out else c
        return WPoly(self.ring, out)

    def __rmul__(self, other) -> "WPoly":
        return self * other

    def __pow__(self, n: int) -> "WPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = self.ring.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, WPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def partial(self, v: int) -> "WPoly":
        out: Dict[Exponents, object] = {}
        for e, c in self.terms.items():
            if e[v] == 0:
                continue
            new = list(e)
            new[v] -= 1
            out[tuple(new)] = e[v] * c
        return WPoly(self.ring, out)

    def evaluate(self, point: Sequence[object]):
        if len(point) != self.ring.nvars:
            raise ValueError("point has wrong number of coordinates")
        coords = [self.ring.field(x) if isinstance(x, (int, str)) else x for x in point]
        total = self.ring.field.zero()
        for e, c in self.terms.items():
            val = c
            for x, k in zip(coords, e):
                if k:
                    val = val * x ** k
            total = total + val
        return total

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in self.monomials():
            c = self.terms[e]
            mono = monomial_to_str(self.ring, e)
            if mono == "1":
                parts.append(scalar_to_str(c))
            else:
                parts.append(f"{scalar_to_str(c)} * {mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"WPoly({self.to_string()})"


def monomial_to_str(ring: WRing, expts: Exponents) -> str:
    pieces = []
    for name, e in zip(ring.names, expts):
        if e == 1:
            pieces.append(name)
        elif e > 1:
            pieces.append(f"{name}^{e}")
    return " ".join(pieces) if pieces else "1"


def parse_monomial(ring: WRing, text: str) -> Exponents:
    expts = [0] * ring.nvars
    text = text.strip()
    if text == "1":
        return tuple(expts)
    for piece in text.split():
        if "^" in piece:
            name, _, power = piece.partition("^")
            k = int(power)
        else:
            name, k = piece, 1
        if k < 1:
            raise ValueError(f"bad exponent in {piece!r}")
        expts[ring.index_of(name)] += k
    return tuple(expts)


def parse_poly(ring: WRing, text: str) -> WPoly:
    text = text.strip()
    if text == "0" or not text:
        return ring.zero_poly()
    terms: Dict[Exponents, object] = {}
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if "*" in chunk:
            coeff_s, _, mono_s = chunk.partition("*")
            coeff = ring.field(coeff_s.strip().replace(" ", ""))
            e = parse_monomial(ring, mono_s)
        else:
            first = chunk.split()[0]
            if first[0].isdigit() or first[0] == "-":
                coeff = ring.field(chunk.replace(" ", ""))
                e = (0,) * ring.nvars
            else:
                coeff = ring.field.one()
                e = parse_monomial(ring, chunk)
        terms[e] = terms[e] + coeff if e in terms else coeff
    return WPoly(ring, terms)


def monomials_of_degree(ring: WRing, d: int) -> List[Exponents]:
    """All exponent tuples of weighted degree d, graded-lex, largest first."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    out: List[Exponents] = []
    n = ring.nvars

    def rec(v: int, remaining: int, acc: Tuple[int, ...]):
        if v == n:
            if remaining == 0:
                out.append(acc)
            return
        w = ring.weights[v]
        for e in range(remaining // w, -1, -1):
            rec(v + 1, remaining - e * w, acc + (e,))

    rec(0, d, ())
    return out


def weighted_degree_counts(weights: Sequence[int], up_to: int) -> List[int]:
    """Coefficients of prod_v 1/(1 - t^w_v) through degree up_to.

    The count of weighted-degree-d monomials, computed without enumerating
    them; used as an independent cross-check on monomials_of_degree.
    """
    coeffs = [1] + [0] * up_to
    for w in weights:
        # multiply by 1/(1 - t^w): prefix-sum with stride w
        for d in range(w, up_to + 1):
            coeffs[d] += coeffs[d - w]
    return coeffs


@dataclass(frozen=True)
class MonomialMap:
    """x_v -> scalar_v * x_{target_v}, a weight-preserving substitution.

    ``targets`` must be a permutation; each scalar must be nonzero.  As a
    map on points it sends P to Q with Q_v = scalar_v * P[target_v].
    """

    ring: WRing
    scalars: Tuple[object, ...]
    targets: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "scalars", tuple(self.ring.field(s) if isinstance(s, (int, str)) else s
                                   for s in self.scalars)
        )
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        n = self.ring.nvars
        if len(self.scalars) != n or len(self.targets) != n:
            raise ValueError("need one scalar and one target per variable")
        if sorted(self.targets) != list(range(n)):
            raise ValueError("targets must form a permutation")
        for v, t in enumerate(self.targets):
            if self.ring.weights[v] != self.ring.weights[t]:
                raise ValueError(
                    f"map sends weight-{self.ring.weights[v]} variable to "
                    f"weight-{self.ring.weights[t]} variable"
                )
        for s in self.scalars:
            if not s:
                raise ValueError("map scalars must be nonzero")

    @staticmethod
    def diagonal(ring: WRing, scalars: Sequence[object]) -> "MonomialMap":
        return MonomialMap(ring, tuple(scalars), tuple(range(ring.nvars)))

    @staticmethod
    def identity(ring: WRing) -> "MonomialMap":
        return MonomialMap.diagonal(ring, (ring.field.one(),) * ring.nvars)

    def point_image(self, point: Sequence[object]) -> Tuple[object, ...]:
        coords = [self.ring.field(x) if isinstance(x, (int, str)) else x for x in point]
        return tuple(s * coords[t] for s, t in zip(self.scalars, self.targets))


def apply_map(f: WPoly, m: MonomialMap) -> WPoly:
    """Substitute per m; satisfies apply_map(f, m).evaluate(P) ==
    f.evaluate(m.point_image(P))."""
    if f.ring != m.ring:
        raise ValueError("map and polynomial live in different rings")
    out: Dict[Exponents, object] = {}
    for e, c in f.terms.items():
        new = [0] * f.ring.nvars
        val = c
        for v, k in enumerate(e):
            if k:
                new[m.targets[v]] += k
                val = val * m.scalars[v] ** k
        key = tuple(new)
        out[key] = out[key] + val if key in out else val
    return WPoly(f.ring, out)


def compose(outer: MonomialMap, inner: MonomialMap) -> MonomialMap:
    """The map acting on points as outer after inner.

    On polynomials the order flips:
    apply_map(f, compose(outer, inner)) == apply_map(apply_map(f, outer), inner).
    """
    if outer.ring != inner.ring:
        raise ValueError("maps live in different rings")
    scalars = tuple(
        so * inner.scalars[outer.targets[v]] for v, so in enumerate(outer.scalars)
    )
    targets = tuple(inner.targets[outer.targets[v]] for v in range(outer.ring.nvars))
    return MonomialMap(outer.ring, scalars, targets)


def map_power(m: MonomialMap, n: int) -> MonomialMap:
    out = MonomialMap.identity(m.ring)
    for _ in range(n):
        out = compose(out, m)
    return out


def jacobian(polys: Sequence[WPoly]) -> List[List[WPoly]]:
    if not polys:
        return []
    ring = polys[0].ring
    for f in polys:
        if f.ring != ring:
            raise ValueError("jacobian rows live in different rings")
    return [[f.partial(v) for v in range(ring.nvars)] for f in polys]
