"""Coarse-geometric layer: commensurations as baseleaf quasi-isometries,
bounded-distance comparisons, the factorization through the covering
lifts, and the action on attracting fixed points of the F_k boundary.

Word metric: word length for F_k, the l1 norm for Z^n (the word metric of
the standard generators).  All quasi-isometry constants are exact
rationals certified by exhaustive pair checks on the sampled ball.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import commensurations as comm_mod
from . import lattices, limits, solenoid, stallings
from .errors import PreconditionError
from .freewords import Word, identity as word_identity, _LOWER


def word_dist(tag, a, b) -> int:
    if tag == "Z":
        return sum(abs(x - y) for x, y in zip(a, b))
    return len(~a * b)


@lru_cache(maxsize=64)
def ball_elements(tag: str, rank: int, radius: int):
    """All group elements within `radius` of the identity, sorted by
    (distance, value)."""
    if tag == "F":
        limits.guard(
            (2 * rank) * max(2 * rank - 1, 1) ** max(radius - 1, 0),
            f"ball_elements(F_{rank}, R={radius})",
        )
        letters = _LOWER[:rank] + _LOWER[:rank].upper()
        out = [""]
        frontier = [""]
        for _ in range(radius):
            nxt = []
            for w in frontier:
                for ch in letters:
                    if w and w[-1] != ch and w[-1].lower() == ch.lower():
                        continue
                    nxt.append(w + ch)
            out.extend(sorted(nxt))
            frontier = nxt
        return tuple(Word(rank, w, _reduced=True) for w in out)
    pts = [
        p
        for p in product(range(-radius, radius + 1), repeat=rank)
        if sum(abs(x) for x in p) <= radius
    ]
    pts.sort(key=lambda p: (sum(abs(x) for x in p), p))
    return tuple(pts)


# -- closest-point projection and the baseleaf map ---------------------------------


def closest_point_project(comm, g):
    """The element of the domain nearest to g in the word metric;
    lexicographically least on ties.  Total (the domain has finite index,
    so the search radius is bounded by the coset diameter)."""
    if comm.tag == "Z":
        lat = comm.domain
        h0 = tuple(a - b for a, b in zip(g, lattices.residue(lat, g)))
        r0 = word_dist("Z", g, h0)
        best = h0
        for delta in product(range(-r0, r0 + 1), repeat=comm.rank):
            h = tuple(a + d for a, d in zip(g, delta))
            if lattices.contains(lat, h):
                d = sum(abs(x) for x in delta)
                if d < word_dist("Z", g, best) or (
                    d == word_dist("Z", g, best) and h < best
                ):
                    best = h
        return best
    graph = comm.domain
    letters = _LOWER[:comm.rank] + _LOWER[:comm.rank].upper()
    frontier = [""]
    for _ in range(graph.m):
        hits = []
        for w in frontier:
            h = g * Word(comm.rank, w, _reduced=True)
            if stallings.contains(graph, h):
                hits.append(h)
        if hits:
            return min(hits, key=lambda h: h.letters)
        nxt = []
        for w in frontier:
            for ch in letters:
                if w and w[-1] != ch and w[-1].lower() == ch.lower():
                    continue
                nxt.append(w + ch)
        frontier = nxt
    raise AssertionError("unreachable: projection within the coset diameter")


class BaseleafMap:
    """The quasi-isometry of G induced by a commensuration: closest-point
    projection to the domain followed by the isomorphism."""

    __slots__ = ("comm",)

    def __init__(self, comm):
        self.comm = comm

    @property
    def tag(self):
        return self.comm.tag

    def __call__(self, g):
        return comm_mod.evaluate(self.comm, closest_point_project(self.comm, g))

    def __repr__(self):
        return f"BaseleafMap({self.comm!r})"


def baseleaf_map(comm) -> BaseleafMap:
    return BaseleafMap(comm)


# -- quasi-isometry estimates --------------------------------------------------------


class QIEstimate:
    """Certified constants on the R-ball:
    (1/L) d(x,y) - C <= d(fx, fy) <= L d(x,y) + C."""

    __slots__ = ("radius", "L", "C", "upper", "lower", "pairs")

    def __init__(self, radius, L, C, upper, lower, pairs):
        self.radius = radius
        self.L = L
        self.C = C
        self.upper = upper
        self.lower = lower
        self.pairs = pairs

    def render(self) -> str:
        return (
            f"R={self.radius} L={self.L} ({float(self.L):.4f}) "
            f"C={self.C} ({float(self.C):.4f}) "
            f"upper={self.upper} lower={self.lower} pairs={self.pairs}"
        )


def qi_estimate(m: BaseleafMap, radius: int) -> QIEstimate:
    """Tight empirical constants over all pairs in the R-ball, certified
    by rechecking every pair against the produced (L, C)."""
    if m.tag == "F" and radius > 10:
        raise PreconditionError("radius capped at 10 for F_k ball enumeration")
    elems = ball_elements(m.tag, m.comm.rank, radius)
    images = [m(x) for x in elems]
    up = Fraction(1)
    low = Fraction(1)
    collapse = 0
    pairs = 0
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            pairs += 1
            d = word_dist(m.tag, elems[i], elems[j])
            df = word_dist(m.tag, images[i], images[j])
            if df:
                up = max(up, Fraction(df, d))
                low = max(low, Fraction(d, df))
            else:
                collapse = max(collapse, d)
    L = max(up, low)
    C = Fraction(collapse, 1) / L if collapse else Fraction(0)
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            d = word_dist(m.tag, elems[i], elems[j])
            df = word_dist(m.tag, images[i], images[j])
            assert df <= L * d + C and Fraction(d) / L - C <= df, "certificate failed"
    return QIEstimate(radius, L, C, up, low, pairs)


# -- bounded distance ------------------------------------------------------------------


class BoundedDistanceReport:
    """Max displacement between two baseleaf maps per ball radius; a bound
    plus stabilization radius when the maps are equivalent, a growth trend
    otherwise."""

    __slots__ = ("equivalent", "maxima", "bound", "stabilized_at")

    def __init__(self, equivalent, maxima):
        self.equivalent = equivalent
        self.maxima = maxima  # running max per radius 0..R
        if equivalent:
            self.bound = maxima[-1]
            self.stabilized_at = next(
                r for r, v in enumerate(maxima) if v == maxima[-1]
            )
        else:
            self.bound = None
            self.stabilized_at = None

    @property
    def growing(self) -> bool:
        return self.maxima[-1] > self.maxima[min(len(self.maxima) - 1, 6) - 1]

    def render(self) -> str:
        trail = " ".join(str(v) for v in self.maxima)
        if self.equivalent:
            return (
                f"equivalent: bound {self.bound}, stabilized at R={self.stabilized_at} "
                f"(running maxima: {trail})"
            )
        return f"inequivalent: growth report (running maxima: {trail})"


def bounded_distance(m1: BaseleafMap, m2: BaseleafMap, radius: int) -> BoundedDistanceReport:
    if m1.tag != m2.tag or m1.comm.rank != m2.comm.rank:
        raise PreconditionError("maps live on different groups")
    eq = comm_mod.equivalent(m1.comm, m2.comm)
    elems = ball_elements(m1.tag, m1.comm.rank, radius)
    maxima = []
    cur = 0
    for g in elems:
        r = word_dist(m1.tag, g, _identity_of(m1.tag, m1.comm.rank))
        cur = max(cur, word_dist(m1.tag, m1(g), m2(g)))
        while len(maxima) <= r:
            maxima.append(cur)
        maxima[r] = cur
    while len(maxima) <= radius:
        maxima.append(cur)
    return BoundedDistanceReport(eq, maxima)


def _identity_of(tag, rank):
    return (0,) * rank if tag == "Z" else word_identity(rank)


# -- factorization through the covering lifts -------------------------------------------


class FactorizationReport:
    __slots__ = ("checked", "mismatches")

    def __init__(self, checked, mismatches):
        self.checked = checked
        self.mismatches = mismatches

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.mismatches

    def render(self) -> str:
        if self.passed:
            return f"factorization: exact agreement on {self.checked} points"
        return f"factorization: {len(self.mismatches)} mismatches of {self.checked}"


def factorization_check(comm, depth: int, radius: int) -> FactorizationReport:
    """Compare the covering-lift route with the baseleaf-map route on all
    domain elements in the R-ball: the lift applied to the path of h must
    spell exactly phi(h), and the depth-N baseleaf points must agree."""
    phi = comm_mod.zn1_to_f1(comm) if comm.tag == "Z" else comm
    if phi.tag != "F":
        raise PreconditionError("factorization check handles F_k and Z^1")
    lift = solenoid.lift_through_covers(phi)
    bm = baseleaf_map(phi)
    checked = 0
    mismatches = []
    for g in ball_elements("F", phi.rank, radius):
        if not stallings.contains(phi.domain, g):
            continue
        checked += 1
        via_map = bm(g)
        via_lift = lift.apply_to_path(g)
        if via_map != via_lift or solenoid.baseleaf(via_map, depth) != solenoid.baseleaf(
            via_lift, depth
        ):
            mismatches.append((g, via_map, via_lift))
    return FactorizationReport(checked, mismatches)


# -- boundary points and the commensurator action ----------------------------------------


class BoundaryPoint:
    """Eventually periodic boundary point u c c c...; canonical means u is
    the shortest conjugating prefix and c is primitive.  Carries its
    defining group element as provenance for the action."""

    __slots__ = ("prefix", "period", "element")

    def __init__(self, prefix: Word, period: Word, element: Word):
        self.prefix = prefix
        self.period = period
        self.element = element

    def __eq__(self, other):
        return (
            isinstance(other, BoundaryPoint)
            and (other.prefix, other.period) == (self.prefix, self.period)
        )

    def __hash__(self):
        return hash((self.prefix, self.period))

    def __repr__(self):
        return f"BoundaryPoint(u={self.prefix}, c={self.period})"

    def render(self) -> str:
        return f"u={self.prefix} c={self.period}"

    def expansion(self, length: int) -> str:
        reps = self.period.letters * (
            (length - len(self.prefix.letters)) // len(self.period.letters) + 2
        )
        return (self.prefix.letters + reps)[:length]


def fixed_point(g: Word, sign: str = "+") -> BoundaryPoint:
    """The attracting (+) or repelling (-) fixed point of g: with
    g = u c u^-1 cyclically reduced, g+ = u c c c... (c primitivized)."""
    if not g:
        raise PreconditionError("the identity is elliptic: no boundary fixed points")
    if sign not in "+-":
        raise PreconditionError("sign must be '+' or '-'")
    from .freewords import cyclic_decompose, primitive_root

    base = g if sign == "+" else ~g
    u, c = cyclic_decompose(base)
    root, _ = primitive_root(c)
    return BoundaryPoint(u, root, base)


def boundary_action(comm, point: BoundaryPoint) -> BoundaryPoint:
    """Image of an attracting fixed point: (phi(g^m))+ for the minimal
    m >= 1 with g^m in the domain (the length of the coset orbit of g, at
    most the domain's index); independent of which valid m is used."""
    if comm.tag != "F":
        raise PreconditionError("boundary action is the F_k instance")
    g = point.element
    v = stallings.trace(comm.domain, g, 0)
    m = 1
    while v != 0:
        v = stallings.trace(comm.domain, g, v)
        m += 1
        if m > comm.domain.m:
            raise AssertionError("coset orbit exceeded the index")
    img = comm_mod.evaluate(comm, g**m)
    return fixed_point(img, "+")
