"""Rank-2 tropical vertex: wall-crossing automorphisms, path-ordered loop
products, consistent completion of bipartite initial diagrams, and the
log-coefficient / JK cross-check.

Initial walls are full lines through the origin; corrective walls are rays
with primitive directions strictly inside the first quadrant.  All series
live in Q[x^{±1}, y^{±1}][s_*, t_*] truncated in total parameter degree.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd

from .errors import BadCutoff, CutoffTooSmall, NonRegularStability, ValidationError
from .exact import ONE, Q, ZERO
from .quiver import DimVector, Stability, bipartite_quiver, moduli_dimension
from .quiverjk import jk_ab_infinity
from .series import TruncatedSeries

# pairing <(a,b),(c,d)> = a*d - b*c
def _pair(m: tuple[int, int], v: tuple[int, int]) -> int:
    return m[0] * v[1] - m[1] * v[0]


@dataclass
class Wall:
    direction: tuple[int, int]       # primitive m
    support: str                     # "line" | "ray"
    function: TruncatedSeries        # f == 1 mod parameters, supported on z^{k m}

    def __post_init__(self):
        a, b = self.direction
        if gcd(a, b) != 1:
            raise ValidationError("wall", f"direction {self.direction} is not primitive")
        if self.support not in ("line", "ray"):
            raise ValidationError("wall", f"bad support {self.support!r}")


@dataclass
class ScatteringDiagram:
    walls: list[Wall]
    cutoff: int
    params: tuple[str, ...]


def init_bipartite(l1: int, l2: int, cutoff: int) -> ScatteringDiagram:
    """Initial diagram: line (1,0) with prod(1+s_i x), line (0,1) with prod(1+t_j y)."""
    if l1 < 1 or l2 < 1 or cutoff < 1:
        raise BadCutoff(f"need l1, l2, cutoff >= 1, got ({l1}, {l2}, {cutoff})")
    params = tuple(f"s{i + 1}" for i in range(l1)) + tuple(f"t{j + 1}" for j in range(l2))
    fx = TruncatedSeries.const(params, cutoff, 1)
    for i in range(l1):
        fx = fx * (1 + TruncatedSeries.monomial(params, cutoff, xe=1, pexp={f"s{i + 1}": 1}))
    fy = TruncatedSeries.const(params, cutoff, 1)
    for j in range(l2):
        fy = fy * (1 + TruncatedSeries.monomial(params, cutoff, ye=1, pexp={f"t{j + 1}": 1}))
    return ScatteringDiagram([Wall((1, 0), "line", fx), Wall((0, 1), "line", fy)],
                             cutoff, params)


def cross_wall(w: Wall, g: TruncatedSeries, orientation: int = 1) -> TruncatedSeries:
    """Apply x -> x f^{±<m,(1,0)>}, y -> y f^{±<m,(0,1)>} to g."""
    if orientation not in (1, -1):
        raise ValidationError("orientation", "must be +1 or -1")
    ex = orientation * _pair(w.direction, (1, 0))
    ey = orientation * _pair(w.direction, (0, 1))
    fx = w.function.power(ex)
    fy = w.function.power(ey)
    out = TruncatedSeries(g.params, g.cutoff)
    for (xe, ye, p), c in g.terms.items():
        term = (fx.power(xe) * fy.power(ye)).shift(xe, ye).scale(c)
        mono = TruncatedSeries(g.params, g.cutoff, {(0, 0, p): ONE})
        out = out + term * mono
    return out


# ---------------------------------------------------------------------------
# path-ordered loop product
# ---------------------------------------------------------------------------

START_DIRECTION = (1, -3)  # generic: not parallel to any integer wall we produce


def _angular_key(v: tuple[int, int]) -> tuple:
    """Total order of directions counterclockwise from START_DIRECTION, exact."""
    sx, sy = START_DIRECTION
    cr = sx * v[1] - sy * v[0]
    dt = sx * v[0] + sy * v[1]
    if cr == 0:
        sector = 0 if dt > 0 else 2
    else:
        sector = 1 if cr > 0 else 3
    return sector, v


def _sort_events(events):
    """Sort crossing events ccw; within a sector compare by the cross product."""

    def cmp(e1, e2):
        k1, k2 = _angular_key(e1[0])[0], _angular_key(e2[0])[0]
        if k1 != k2:
            return -1 if k1 < k2 else 1
        u, v = e1[0], e2[0]
        cr = u[0] * v[1] - u[1] * v[0]
        if cr > 0:
            return -1
        if cr < 0:
            return 1
        return 0

    return sorted(events, key=functools.cmp_to_key(cmp))


def loop_product(d: ScatteringDiagram) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Images of x and y under one full counterclockwise loop of crossings."""
    events = []
    for w in d.walls:
        a, b = w.direction
        events.append(((a, b), w, 1))
        if w.support == "line":
            events.append(((-a, -b), w, -1))
    events = _sort_events(events)
    x = TruncatedSeries.monomial(d.params, d.cutoff, xe=1)
    y = TruncatedSeries.monomial(d.params, d.cutoff, ye=1)
    for _v, w, eps in events:
        x = cross_wall(w, x, eps)
        y = cross_wall(w, y, eps)
    return x, y


# ---------------------------------------------------------------------------
# consistent completion
# ---------------------------------------------------------------------------

def scatter(d0: ScatteringDiagram) -> ScatteringDiagram:
    """Add rays order-by-order in parameter degree until the loop is trivial.

    At each order the loop defect on x and y is a sum of terms c * p * x^A y^B;
    the two defects of each monomial satisfy a*c_x + b*c_y = 0 for the primitive
    direction (a,b) of (A,B), and the wall increment 1 + c' * p * x^A y^B is
    solved from either one.
    """
    d = ScatteringDiagram(list(d0.walls), d0.cutoff, d0.params)
    by_dir: dict[tuple[int, int], Wall] = {}
    while True:
        x, y = loop_product(d)
        dx = x.shift(-1, 0) - 1   # X / x - 1 (monomial shift = division by x)
        dy = y.shift(0, -1) - 1
        degree = None
        for g in (dx, dy):
            for (_xe, _ye, p), _c in g.terms.items():
                deg = sum(p)
                if degree is None or deg < degree:
                    degree = deg
        if degree is None:
            return d
        defects: dict[tuple[int, int, tuple[int, ...]], list[Fraction]] = {}
        for slot, g in ((0, dx), (1, dy)):
            for (xe, ye, p), c in g.terms.items():
                if sum(p) != degree:
                    continue
                rec = defects.setdefault((xe, ye, p), [ZERO, ZERO])
                rec[slot] = c
        for (xe, ye, p) in sorted(defects, key=lambda k: _angular_key(_primitive(k[0], k[1]))):
            cx, cy = defects[(xe, ye, p)]
            if xe <= 0 or ye <= 0:
                raise ValidationError(
                    "scatter", f"defect direction ({xe},{ye}) not in the open first quadrant")
            a, b = _primitive(xe, ye)
            if a * cx + b * cy != 0:
                raise ValidationError(
                    "scatter", f"inconsistent defect at x^{xe} y^{ye} {p}: {cx}, {cy}")
            coeff = Fraction(cx, b) if cx else Fraction(-cy, a)
            if coeff == 0:
                continue
            wall = by_dir.get((a, b))
            if wall is None:
                for w in d.walls:
                    if w.support == "ray" and w.direction == (a, b):
                        wall = w
                        break
            increment = 1 + TruncatedSeries(
                d.params, d.cutoff, {(xe, ye, p): coeff})
            if wall is None:
                wall = Wall((a, b), "ray", increment)
                by_dir[(a, b)] = wall
                d.walls.append(wall)
            else:
                wall.function = wall.function * increment


def _primitive(a: int, b: int) -> tuple[int, int]:
    g = gcd(a, b)
    return (a // g, b // g)


# ---------------------------------------------------------------------------
# coefficient extraction and the main cross-identity
# ---------------------------------------------------------------------------

def extract_cd(d: ScatteringDiagram, dim: DimVector) -> Fraction:
    """c_d = coeff(s^{P1} t^{P2} x^{ka} y^{kb}, log f_{(a,b)}) / k."""
    dd = dim.as_dict()
    p1 = sum(v for k, v in dd.items() if k.startswith("i"))
    p2 = sum(v for k, v in dd.items() if k.startswith("j"))
    if p1 <= 0 or p2 <= 0:
        raise ValidationError("extract_cd", "dimension must touch both sides")
    if p1 + p2 > d.cutoff:
        raise CutoffTooSmall(f"|d| = {p1 + p2} exceeds cutoff {d.cutoff}")
    k = gcd(p1, p2)
    a, b = p1 // k, p2 // k
    pexp = {}
    for name, v in dd.items():
        if v:
            pexp[("s" if name.startswith("i") else "t") + name[1:]] = v
    for w in d.walls:
        if w.support == "ray" and w.direction == (a, b):
            return w.function.log().coefficient(p1, p2, pexp) / k
    return ZERO


@dataclass(frozen=True)
class VerificationResult:
    passed: bool
    lhs: Fraction          # scattering-side coefficient c_d
    rhs: Fraction          # (-1)^D / d! times the abelianized JK limit
    moduli_dim: int


def verify_main_theorem(l1: int, l2: int, dim: DimVector, zeta: Stability,
                        cutoff: int) -> VerificationResult:
    """Check c_d = (-1)^D * jk_ab_infinity / prod d_v! for K(l1, l2)."""
    q = bipartite_quiver(l1, l2)
    _check_compatible(q, dim, zeta, l1)
    d = scatter(init_bipartite(l1, l2, cutoff))
    lhs = extract_cd(d, dim)
    D = moduli_dimension(q, dim)
    dfact = 1
    for _v, dv in dim.values:
        dfact *= factorial(dv)
    rhs = Q(-1) ** D * jk_ab_infinity(q, dim, zeta) / dfact
    return VerificationResult(lhs == rhs, lhs, rhs, D)


def _check_compatible(q, dim: DimVector, zeta: Stability, l1: int) -> None:
    src = {zeta[v] for v in q.vertices[:l1]}
    snk = {zeta[v] for v in q.vertices[l1:]}
    if len(src) != 1 or len(snk) != 1:
        raise ValidationError("stability", "zeta must be constant on sources and on sinks")
    if src == {ZERO} or snk == {ZERO}:
        raise ValidationError("stability", "zeta must be nontrivial")
    zeta.check_normalized(dim)
