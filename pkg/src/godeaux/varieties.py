"""Exhaustive point checks over small prime fields: enumeration of weighted
projective spaces, quasi-smoothness, and free-action certificates.

Everything here is characteristic-p evidence for characteristic-0 claims and
is labeled as such in the reports; no statement over Q is proved by a scan.

Enumeration never canonicalizes points one by one.  Canonical orbit
representatives (lexicographically least orbit members) are generated
directly: the coordinate space is partitioned by leading nonzero coordinate,
the leading value runs over minima of cosets of the relevant power subgroup,
and once the residual scalar stabilizer acts trivially on the remaining
coordinates the tail is a free box that vectorizes.  Equation evaluation on
a box runs on int64 arrays with a reduction mod p after every product, so
values stay below p^2 and arithmetic is exact.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .family import GodeauxFamily, reduce_family
from .reports import CheckReport
from .scalars import PrimeField, Rationals, exact_rank, is_prime
from .wpoly import MonomialMap, WPoly, WRing, jacobian

MAX_ENUM_PRIME = 101
CHUNK_LIMIT = 1 << 18


class WProjPoint:
    """A point of a weighted projective space over GF(p), stored as the
    lexicographically least member of its scaling orbit."""

    __slots__ = ("coords", "p")

    def __init__(self, coords: Sequence[int], p: int, weights: Sequence[int]):
        self.coords = canonicalize_vector(coords, weights, p)
        self.p = p

    def __eq__(self, other):
        return (
            isinstance(other, WProjPoint)
            and self.coords == other.coords
            and self.p == other.p
        )

    def __lt__(self, other):
        return self.coords < other.coords

    def __hash__(self):
        return hash((self.coords, self.p))

    def __repr__(self):
        return f"[{','.join(str(c) for c in self.coords)}]"


def canonicalize_vector(coords: Sequence[int], weights: Sequence[int], p: int) -> Tuple[int, ...]:
    """Lexicographically least orbit member under c_v -> lambda^{w_v} c_v.

    Scans coordinates in order, at each nonzero one replacing the value by
    its minimum over the surviving scalars and keeping only the scalars that
    achieve it; the survivors all produce the same vector.
    """
    coords = tuple(c % p for c in coords)
    if all(c == 0 for c in coords):
        raise ValueError("the zero vector is not a projective point")
    if len(coords) != len(weights):
        raise ValueError("coordinate/weight length mismatch")
    candidates = list(range(1, p))
    out = []
    for a, w in zip(coords, weights):
        if a == 0:
            out.append(0)
            continue
        vals = [(pow(lam, w, p) * a) % p for lam in candidates]
        best = min(vals)
        candidates = [lam for lam, v in zip(candidates, vals) if v == best]
        out.append(best)
    return tuple(out)


def _blocks(weights: Sequence[int], p: int):
    """Partition of the canonical representatives into free boxes.

    Yields (prefix, start): coordinates before start are fixed to prefix and
    the rest range freely over GF(p), plus fully determined single points as
    (prefix, n).  Boxes are produced in lexicographic order of their points.
    """
    n = len(weights)

    def acts_trivially(cands: List[int], idx: int) -> bool:
        return all(
            pow(lam, weights[j], p) == 1 for lam in cands for j in range(idx, n)
        )

    def rec(idx: int, cands: List[int], prefix: Tuple[int, ...], nonzero: bool):
        if nonzero and acts_trivially(cands, idx):
            yield (prefix, idx)
            return
        if idx == n:
            if nonzero:
                yield (prefix, n)
            return
        yield from rec(idx + 1, cands, prefix + (0,), nonzero)
        w = weights[idx]
        image = {pow(lam, w, p) for lam in cands}
        stab = [lam for lam in cands if pow(lam, w, p) == 1]
        seen = bytearray(p)
        for a in range(1, p):
            if seen[a]:
                continue
            for k in image:
                seen[k * a % p] = 1
            yield from rec(idx + 1, stab, prefix + (a,), True)

    yield from rec(0, list(range(1, p)), (), False)


def _chunks(weights: Sequence[int], p: int):
    """Split free boxes into chunks of at most CHUNK_LIMIT points."""
    n = len(weights)
    stack = list(_blocks(weights, p))
    out = []
    for prefix, start in stack:
        pieces = [(prefix, start)]
        while pieces:
            pre, st = pieces.pop(0)
            if p ** (n - st) <= CHUNK_LIMIT:
                out.append((pre, st))
            else:
                pieces = [(pre + (v,), st + 1) for v in range(p)] + pieces
    return out


def _chunk_columns(prefix: Tuple[int, ...], start: int, n: int, p: int) -> List[np.ndarray]:
    free = n - start
    size = p ** free
    cols = [np.full(size, v, dtype=np.int64) for v in prefix]
    for t in range(free):
        block = np.repeat(np.arange(p, dtype=np.int64), p ** (free - 1 - t))
        cols.append(np.tile(block, p ** t))
    return cols


def _eval_on_columns(f: WPoly, cols: List[np.ndarray], p: int,
                     pow_cache: Dict[Tuple[int, int], np.ndarray]) -> np.ndarray:
    size = len(cols[0])

    def powv(v: int, e: int) -> np.ndarray:
        key = (v, e)
        if key not in pow_cache:
            if e == 1:
                pow_cache[key] = cols[v] % p
            else:
                pow_cache[key] = powv(v, e - 1) * cols[v] % p
        return pow_cache[key]

    total = np.zeros(size, dtype=np.int64)
    for expts, coeff in f.terms.items():
        acc = None
        for v, e in enumerate(expts):
            if e:
                acc = powv(v, e) if acc is None else acc * powv(v, e) % p
        c = coeff.value % p
        term = np.full(size, c, dtype=np.int64) if acc is None else acc * c % p
        total = (total + term) % p
    return total


def _reduce_eqs(ring: WRing, p: int, eqs: Sequence[WPoly]) -> Tuple[WRing, List[WPoly]]:
    """View the ring and every equation over GF(p), reducing from Q where
    needed; rejects rings over other prime fields."""
    field = PrimeField(p)
    if isinstance(ring.field, PrimeField):
        if ring.field.p != p:
            raise ValueError(f"ring is over GF({ring.field.p}), not GF({p})")
        ring_p = ring
    elif isinstance(ring.field, Rationals):
        ring_p = WRing(ring.names, ring.weights, field)
    else:
        raise ValueError("enumeration needs a ring over Q or GF(p)")
    reduced = []
    for f in eqs:
        if (f.ring.names, f.ring.weights) != (ring.names, ring.weights):
            raise ValueError("equation lives on a different variable set")
        if f.ring.field == field:
            reduced.append(f)
            continue
        if not isinstance(f.ring.field, Rationals):
            raise ValueError(
                f"cannot view a {f.ring.field.name} equation over GF({p})"
            )
        g = ring_p.zero_poly()
        for e, c in f.terms.items():
            g = g + ring_p.monomial(e, field(c))
        reduced.append(g)
    return ring_p, reduced


class PointSet:
    """Sorted, deduplicated canonical points of a zero locus over GF(p).

    Every equation is re-evaluated on a deterministic sample of the points
    the first time they are read back, as a self-consistency tripwire.
    """

    __slots__ = ("_points", "p", "ring", "eqs", "scanned", "_checked")

    def __init__(self, points: Sequence[WProjPoint], p: int, ring: WRing,
                 eqs: Sequence[WPoly], scanned: int):
        self._points = tuple(sorted(set(points)))
        self.p = p
        self.ring = ring
        self.eqs = tuple(eqs)
        self.scanned = scanned
        self._checked = False

    @property
    def points(self) -> Tuple[WProjPoint, ...]:
        if not self._checked:
            self._spot_check()
            self._checked = True
        return self._points

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, pt: WProjPoint) -> bool:
        return pt in set(self._points)

    def coordinate_tuples(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(pt.coords for pt in self.points)

    def _spot_check(self, sample: int = 16) -> None:
        if not self._points:
            return
        stride = max(1, len(self._points) // sample)
        field = self.ring.field
        for pt in self._points[::stride]:
            values = [field(c) for c in pt.coords]
            for f in self.eqs:
                if f.evaluate(values) != field.zero():
                    raise AssertionError(
                        f"point {pt!r} fails {f.to_string()} = 0; enumeration bug"
                    )

    def __repr__(self):
        return f"PointSet({len(self._points)} points over GF({self.p}))"


def _guard_prime(p: int) -> None:
    if not is_prime(p) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p}")
    if p > MAX_ENUM_PRIME:
        raise ValueError(
            f"exhaustive enumeration is limited to p <= {MAX_ENUM_PRIME}, got {p}"
        )


def _scan(ring: WRing, p: int, eqs: Sequence[WPoly],
          extra_mask: Optional[Callable[[List[np.ndarray]], np.ndarray]] = None,
          workers: int = 1) -> Tuple[List[Tuple[int, ...]], int]:
    """All canonical representatives where every equation vanishes (and the
    optional extra column mask holds); returns (points, reps scanned)."""
    ring_p, eqs_p = _reduce_eqs(ring, p, eqs)
    for f in eqs_p:
        if not f.is_homogeneous():
            raise ValueError(f"equation {f.to_string()} is not homogeneous")
    n = ring.nvars
    chunks = _chunks(ring.weights, p)

    def work(chunk):
        prefix, start = chunk
        cols = _chunk_columns(prefix, start, n, p)
        mask = np.ones(len(cols[0]), dtype=bool)
        cache: Dict[Tuple[int, int], np.ndarray] = {}
        for f in eqs_p:
            mask &= _eval_on_columns(f, cols, p, cache) == 0
            if not mask.any():
                break
        if extra_mask is not None:
            mask &= extra_mask(cols)
        picked = [c[mask] for c in cols]
        return len(cols[0]), list(zip(*(col.tolist() for col in picked)))

    results = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, chunks))
    else:
        results = [work(chunk) for chunk in chunks]
    scanned = sum(r[0] for r in results)
    points: List[Tuple[int, ...]] = []
    for _, pts in results:
        points.extend(tuple(int(v) for v in pt) for pt in pts)
    return points, scanned


def _wrap_points(raw: Sequence[Tuple[int, ...]], ring: WRing, p: int,
                 eqs: Sequence[WPoly], scanned: int) -> PointSet:
    ring_p, eqs_p = _reduce_eqs(ring, p, eqs)
    pts = []
    for coords in raw:
        pt = WProjPoint.__new__(WProjPoint)
        pt.coords = tuple(coords)
        pt.p = p
        pts.append(pt)
    return PointSet(pts, p, ring_p, eqs_p, scanned)


def enumerate_points(ring: WRing, p: int, eqs: Sequence[WPoly],
                     workers: int = 1) -> PointSet:
    """All GF(p) points of the weighted projective zero locus, each scaling
    orbit exactly once, in deterministic (lexicographic) order."""
    _guard_prime(p)
    raw, scanned = _scan(ring, p, eqs, workers=workers)
    return _wrap_points(raw, ring, p, eqs, scanned)


def ambient_point_count(weights: Sequence[int], p: int) -> int:
    """Number of canonical representatives, by pure block counting (no
    point is materialized); used as an independent cross-check."""
    _guard_prime(p)
    n = len(weights)
    return sum(p ** (n - start) for _, start in _blocks(weights, p))


def _diagonal_fixed_patterns(m: MonomialMap, p: int) -> Optional[List[Tuple[int, ...]]]:
    """For a diagonal map: the minimal zero-patterns characterizing fixed
    points.  P is fixed iff for some scalar lambda every coordinate outside
    ker(pattern) vanishes; returns None for non-diagonal maps."""
    n = m.ring.nvars
    if m.targets != tuple(range(n)):
        return None
    weights = m.ring.weights
    scalars = [s.value for s in m.scalars]
    patterns = set()
    for lam in range(1, p):
        bad = tuple(
            v for v in range(n) if scalars[v] % p != pow(lam, weights[v], p)
        )
        patterns.add(bad)
    minimal = [
        b for b in patterns
        if not any(set(o) < set(b) for o in patterns if o != b)
    ]
    return sorted(minimal)


def fixed_locus(action: MonomialMap, p: int, eqs: Sequence[WPoly],
                workers: int = 1) -> PointSet:
    """All points of the zero locus fixed by the map as orbits (image
    canonicalizes back to the point itself)."""
    _guard_prime(p)
    ring = action.ring
    if not isinstance(ring.field, PrimeField) or ring.field.p != p:
        raise ValueError("fixed_locus needs a map defined over GF(p) itself")
    patterns = _diagonal_fixed_patterns(action, p)
    if patterns is not None:
        def mask_fn(cols: List[np.ndarray]) -> np.ndarray:
            mask = np.zeros(len(cols[0]), dtype=bool)
            for bad in patterns:
                sub = np.ones(len(cols[0]), dtype=bool)
                for v in bad:
                    sub &= cols[v] == 0
                mask |= sub
            return mask

        raw, scanned = _scan(ring, p, eqs, extra_mask=mask_fn, workers=workers)
        return _wrap_points(raw, ring, p, eqs, scanned)

    base = enumerate_points(ring, p, eqs, workers=workers)
    weights = ring.weights
    fixed = []
    for pt in base.points:
        image = action.point_image([ring.field(c) for c in pt.coords])
        if canonicalize_vector([v.value for v in image], weights, p) == pt.coords:
            fixed.append(pt.coords)
    return _wrap_points(fixed, ring, p, eqs, base.scanned)


def _family_mod_p(fam: GodeauxFamily, p: int) -> GodeauxFamily:
    if isinstance(fam.field, PrimeField):
        if fam.field.p != p:
            raise ValueError(f"family is over GF({fam.field.p}), not GF({p})")
        return fam
    return reduce_family(fam, p)


def _pure_y_points(ring: WRing, p: int) -> List[Tuple[int, ...]]:
    """Canonical representatives supported on the weight-2 coordinates.

    The leading weight-2 value runs over the two coset minima of the squares
    (1 and the least nonsquare); the residual stabilizer {+-1} acts trivially
    on the remaining weight-2 coordinate, so its values are free.
    """
    if ring.weights != (1, 1, 1, 2, 2):
        raise ValueError("pure-y shortcut is specific to weights (1,1,1,2,2)")
    squares = {pow(v, 2, p) for v in range(1, p)}
    reps = [1, min(set(range(1, p)) - squares)]
    pts = [(0, 0, 0, m, b) for m in reps for b in range(p)]
    pts += [(0, 0, 0, 0, m) for m in reps]
    return pts


def check_quasi_smooth(fam: GodeauxFamily, p: int, workers: int = 1) -> CheckReport:
    """Scan every GF(p) point of the surface for Jacobian rank 2, and the
    ambient singular line x1=x2=x3=0 for surface points.

    This certifies quasi-smoothness of the reduction mod p only; it is
    evidence, not proof, for the characteristic-0 family.
    """
    t0 = time.perf_counter()
    try:
        _guard_prime(p)
        fam_p = _family_mod_p(fam, p)
    except ValueError as exc:
        return CheckReport(
            check="quasi-smooth", status="error", prime=p,
            notes=(str(exc),),
        )
    ring = fam_p.ring
    notes = ["characteristic-p certificate for the reduction mod p only"]

    y1y3 = (0, 0, 0, 1, 1)
    if fam_p.q0.coefficient(y1y3) == ring.field.zero():
        witness = None
        for coords in _pure_y_points(ring, p):
            vals = [ring.field(c) for c in coords]
            if (fam_p.q0.evaluate(vals) == ring.field.zero()
                    and fam_p.q2.evaluate(vals) == ring.field.zero()):
                witness = list(coords)
                break
        return CheckReport(
            check="quasi-smooth", status="fail", prime=p, witness=witness,
            notes=tuple(notes + [
                "ambient-singular-locus hit: q0 misses y1 y3, so the "
                "surface meets x1=x2=x3=0 over the closure"
            ]),
            data={"failure_mode": "ambient-singular-locus"},
            elapsed_ms=(time.perf_counter() - t0) * 1000,
        )

    for coords in _pure_y_points(ring, p):
        vals = [ring.field(c) for c in coords]
        if (fam_p.q0.evaluate(vals) == ring.field.zero()
                and fam_p.q2.evaluate(vals) == ring.field.zero()):
            return CheckReport(
                check="quasi-smooth", status="fail", prime=p,
                witness=list(coords),
                notes=tuple(notes + ["surface meets the ambient singular locus"]),
                data={"failure_mode": "ambient-singular-locus"},
                elapsed_ms=(time.perf_counter() - t0) * 1000,
            )

    surface = enumerate_points(ring, p, [fam_p.q0, fam_p.q2], workers=workers)
    partials = jacobian([fam_p.q0, fam_p.q2])
    field = ring.field
    witness = None
    for pt in surface.points:
        vals = [field(c) for c in pt.coords]
        rows = [[entry.evaluate(vals) for entry in row] for row in partials]
        if exact_rank(rows) < 2:
            witness = list(pt.coords)
            break
    status = "pass" if witness is None else "fail"
    if witness is not None:
        notes.append("Jacobian rank below 2 at the witness point")
    return CheckReport(
        check="quasi-smooth", status=status, prime=p, witness=witness,
        points_scanned=surface.scanned,
        notes=tuple(notes),
        data={"surface_points": len(surface)},
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


GROUP_ELEMENT_POWERS = {"g": 1, "g2": 2, "g3": 3}


def check_free_action(fam: GodeauxFamily, p: int, workers: int = 1) -> CheckReport:
    """Certify that g, g^2, g^3 fix no GF(p) point of the surface.

    Fixed loci are computed on the ambient space as unions of coordinate
    subspaces and intersected with the enumerated surface point set.
    """
    t0 = time.perf_counter()
    try:
        _guard_prime(p)
        fam_p = _family_mod_p(fam, p)
    except ValueError as exc:
        return CheckReport(
            check="free-action", status="error", prime=p, notes=(str(exc),),
        )
    ring = fam_p.ring
    i = ring.field.sqrt_minus_one()
    surface = enumerate_points(ring, p, [fam_p.q0, fam_p.q2], workers=workers)
    surface_set = set(surface.coordinate_tuples())
    witness = None
    sizes = {}
    for name, k in GROUP_ELEMENT_POWERS.items():
        h = fam_p.action.power(k).as_monomial_map(i)
        locus = fixed_locus(h, p, [], workers=workers)
        sizes[name] = len(locus)
        hits = sorted(set(locus.coordinate_tuples()) & surface_set)
        if hits and witness is None:
            witness = {"element": name, "point": list(hits[0])}
    status = "pass" if witness is None else "fail"
    return CheckReport(
        check="free-action", status=status, prime=p, witness=witness,
        points_scanned=surface.scanned,
        notes=("characteristic-p certificate for the reduction mod p only",),
        data={"surface_points": len(surface), "ambient_fixed_points": sizes},
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


def sigma_fixed_components(fam: GodeauxFamily, p: int) -> Dict[str, object]:
    """Describe the fixed locus of the involution lift on the ambient space:
    the zero-patterns of its coordinate subspaces, plus the point count."""
    _guard_prime(p)
    fam_p = _family_mod_p(fam, p)
    m = fam_p.sigma.as_monomial_map()
    patterns = _diagonal_fixed_patterns(m, p)
    locus = fixed_locus(m, p, [])
    names = fam_p.ring.names
    return {
        "zero_patterns": [[names[v] for v in bad] for bad in patterns],
        "count": len(locus),
        "locus": locus,
    }
