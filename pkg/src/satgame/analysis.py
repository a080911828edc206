"""Closed-form game values, the matching bound on K_{m,n}, and the C_4
essential-path / bound-constant tools."""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from .errors import HostNotBipartite, OutOfTheoremRange, SatGameError
from .graph import GameGraph, components, max_matching
from .solver import MAX, MIN, PlayerRole

THEOREMS = (
    "odd-cycles", "trees", "claw", "p4-kn", "p4-kmn", "sat-p4-kmn",
    "ex-odd", "ex-trees", "ex-star", "star-conjecture",
)
# the star formula has only been checked by exhaustive search up to here
STAR_CHECKED_UP_TO = 8


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def __contains__(self, v: int) -> bool:
        return self.lo <= v <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


Value = Union[int, Interval]


@dataclass(frozen=True)
class ClosedForm:
    """A theorem id with its parameters.

    Parameters by theorem: ``k`` for odd-cycles / ex-odd (host K_{2k});
    ``n`` for trees, claw, p4-kn, ex-trees; ``m, n`` for the bipartite ones;
    ``r, n`` for ex-star and star-conjecture (forbidden star K_{1,r+1}).
    """

    theorem: str
    n: Optional[int] = None
    m: Optional[int] = None
    k: Optional[int] = None
    r: Optional[int] = None
    first: PlayerRole = MAX

    def __post_init__(self):
        if self.theorem not in THEOREMS:
            raise SatGameError(f"unknown theorem {self.theorem!r}; expected one of {', '.join(THEOREMS)}")
        if self.m is not None and self.n is not None and self.m < self.n:
            m, n = self.n, self.m
            object.__setattr__(self, "m", m)
            object.__setattr__(self, "n", n)

    @property
    def conjectural(self) -> bool:
        return self.theorem == "star-conjecture" and (self.n or 0) > STAR_CHECKED_UP_TO

    def to_dict(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if v is not None}
        d["first"] = str(self.first)
        v = closed_form(self)
        d["value"] = [v.lo, v.hi] if isinstance(v, Interval) else v
        d["conjectural"] = self.conjectural
        return d


def _need(cf: ClosedForm, *names: str) -> list[int]:
    vals = []
    for name in names:
        v = getattr(cf, name)
        if v is None:
            raise OutOfTheoremRange(f"{cf.theorem} needs parameter {name}")
        vals.append(v)
    return vals


def _range(ok: bool, cf: ClosedForm, what: str) -> None:
    if not ok:
        raise OutOfTheoremRange(f"{cf.theorem}: {what}")


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def closed_form(cf: ClosedForm) -> Value:
    """Value of the theorem at cf's parameters (an interval for p4-kn)."""
    t, first = cf.theorem, cf.first
    if t in ("odd-cycles", "ex-odd"):
        if cf.k is None and cf.n is not None:
            _range(cf.n % 2 == 0, cf, "host order must be even")
            k = cf.n // 2
        else:
            (k,) = _need(cf, "k")
        _range(k >= 1, cf, "needs k >= 1")
        return k * k
    if t == "trees":
        (n,) = _need(cf, "n")
        _range(n >= 3, cf, "needs n >= 3")
        if first is MAX and n == 5:
            return 6
        if first is MIN and n == 4:
            return 3
        return math.comb(n - 2, 2) + 1
    if t == "claw":
        (n,) = _need(cf, "n")
        _range(n >= 1, cf, "needs n >= 1")
        if n == 1:
            return 0
        even = n % 2 == 0
        if first is MAX:
            return n if (n in (3, 7) or (even and n != 2)) else n - 1
        return n - 1 if (even and n != 4) else n
    if t == "p4-kn":
        (n,) = _need(cf, "n")
        _range(n >= 4, cf, "needs n >= 4")
        if first is MAX:
            return Interval(_ceil_div(4 * n - 6, 5), (4 * n + 4) // 5)
        return Interval(_ceil_div(4 * n - 3, 5), (4 * n + 3) // 5)
    if t in ("p4-kmn", "sat-p4-kmn"):
        m, n = _need(cf, "m", "n")
        _range(n >= 1, cf, "needs m >= n >= 1")
        if t == "sat-p4-kmn":
            return n
        odd = (m * n) % 2 == 1
        if first is MAX:
            if n % 2 == 0:
                return n
            return m if m % 2 == 0 else m + n // 2
        if n <= 2:
            return m
        return m + n // 2 - (1 if odd else 0)
    if t == "ex-trees":
        (n,) = _need(cf, "n")
        _range(n >= 2, cf, "needs n >= 2")
        return math.comb(n - 1, 2)
    if t == "ex-star":
        r, n = _need(cf, "r", "n")
        _range(r >= 1 and n >= r + 1, cf, "needs r >= 1 and n >= r+1")
        return r * n // 2
    # star-conjecture
    r, n = _need(cf, "r", "n")
    _range(n > r > 2, cf, "needs n > r > 2")
    return (r * n - 1) // 2


def closed_form_table(theorem: str, params: Iterable[dict], first: PlayerRole = MAX) -> str:
    """CSV sweep of one theorem; intervals are written as lo..hi."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theorem", "m", "n", "k", "r", "first", "value", "conjectural"])
    for p in params:
        cf = ClosedForm(theorem, first=first, **p)
        v = closed_form(cf)
        w.writerow([
            theorem, cf.m or "", cf.n or "", cf.k or "", cf.r or "", first,
            f"{v.lo}..{v.hi}" if isinstance(v, Interval) else v, int(cf.conjectural),
        ])
    return buf.getvalue()


# -- matching bound on K_{m,n} ----------------------------------------------


@dataclass(frozen=True)
class MatchReport:
    matching: int
    bound: int
    edges: int
    equality: bool
    full: bool
    isolated_edge: bool

    def to_dict(self) -> dict:
        return asdict(self)


def star_types(g: GameGraph) -> tuple[bool, bool, bool]:
    """(has X-star, has Y-star, has isolated edge) on a bipartite host.

    An X-star is a star with at least two leaves in X, so its centre is in Y.
    """
    xs = ys = k2 = False
    for c in components(g):
        if not c.is_star_like:
            continue
        if c.num_edges == 1:
            k2 = True
        elif c.y_count == 1:
            xs = True
        elif c.x_count == 1:
            ys = True
    return xs, ys, k2


def _require_bipartite(g: GameGraph) -> None:
    if not g.host.is_bipartite:
        raise HostNotBipartite(f"host {g.host.label()} is not bipartite")


def match_bound_report(g: GameGraph) -> MatchReport:
    _require_bipartite(g)
    a = max_matching(g)
    bound = g.host.m + g.host.n - a
    xs, ys, k2 = star_types(g)
    e = len(g.edges)
    return MatchReport(a, bound, e, e == bound, xs and ys, k2)


# -- essential paths --------------------------------------------------------


@dataclass(frozen=True)
class EssentialPathReport:
    s_x: int
    s_y: int
    nonadjacent_pairs: int
    joined_pairs: int
    max_s_neighbors: int
    max_central: int
    high_degree: int
    essential_paths: int

    def to_dict(self) -> dict:
        return asdict(self)


def essential_path_report(g: GameGraph, S: Iterable[int]) -> EssentialPathReport:
    """Exact counts of P_4 copies running between S ∩ X and S ∩ Y.

    A copy x-a-b-y with x in S ∩ X and y in S ∩ Y is an essential path and
    ab is its central edge.  ``high_degree`` counts vertices of degree at
    least N^(5/12), with N the larger part size.
    """
    _require_bipartite(g)
    host = g.host
    m, n = host.m, host.n
    S = set(S)
    sx = np.array(sorted(v for v in S if v < m), dtype=np.int64)
    sy = np.array(sorted(v - m for v in S if v >= m), dtype=np.int64)
    A = np.zeros((m, n), dtype=np.int64)
    for u, v in g.edges:
        A[u, v - m] = 1
    deg_x, deg_y = A.sum(axis=1), A.sum(axis=0)
    in_sx = np.zeros(m, dtype=np.int64)
    in_sx[sx] = 1
    in_sy = np.zeros(n, dtype=np.int64)
    in_sy[sy] = 1

    if len(sx) and len(sy):
        # walks of length 3 between x and y; for non-adjacent pairs these are
        # exactly the paths, for adjacent ones drop the walks that backtrack
        W = (A[sx] @ A.T) @ A[:, sy]
        adj = A[np.ix_(sx, sy)]
        paths = W - adj * (deg_x[sx][:, None] + deg_y[sy][None, :] - 1)
        nonadj = adj == 0
        nonadjacent = int(nonadj.sum())
        joined = int((nonadj & (paths > 0)).sum())
        total = int(paths.sum())
    else:
        nonadjacent = joined = total = 0

    s_nb = np.concatenate([A @ in_sy, A.T @ in_sx]) if S else np.zeros(1, dtype=np.int64)
    # central edge b-a (b in X, a in Y): choices of x in N(a) ∩ S_X - {b}
    # times choices of y in N(b) ∩ S_Y - {a}
    central = 0
    if g.edges:
        sx_of_y = A.T @ in_sx  # per a in Y
        sy_of_x = A @ in_sy  # per b in X
        bs, as_ = np.nonzero(A)
        cnt = (sx_of_y[as_] - in_sx[bs]) * (sy_of_x[bs] - in_sy[as_])
        central = int(cnt.max())
    thresh = max(m, n) ** (5 / 12)
    high = int((deg_x >= thresh).sum() + (deg_y >= thresh).sum())
    return EssentialPathReport(
        s_x=len(sx), s_y=len(sy), nonadjacent_pairs=nonadjacent, joined_pairs=joined,
        max_s_neighbors=int(s_nb.max()) if S else 0, max_central=central,
        high_degree=high, essential_paths=total,
    )


# -- the bound constant -----------------------------------------------------

Number = Union[Fraction, float]
FLOAT_TOL = 1e-12


def _icbrt(x: int) -> Optional[int]:
    """Exact integer cube root of x >= 0, or None."""
    r = round(x ** (1 / 3)) if x < 2**52 else int(round(float(x) ** (1 / 3)))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** 3 == x:
            return c
    return None


def _pow_two_thirds(q: Number) -> Number:
    if isinstance(q, Fraction):
        num, den = _icbrt(q.numerator ** 2), _icbrt(q.denominator ** 2)
        if num is not None and den is not None:
            return Fraction(num, den)
        q = float(q)
    return q ** (2 / 3)


def parse_number(text: str) -> Number:
    """A rational ("1/3", "0.25") as a Fraction, or "sqrt(x)" / "1/sqrt(x)"
    as a float."""
    text = text.strip().replace(" ", "")
    m = re.fullmatch(r"(1/)?sqrt\(([^()]+)\)", text)
    if m:
        root = math.sqrt(float(Fraction(m.group(2))))
        return 1 / root if m.group(1) else root
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SatGameError(f"cannot read {text!r} as a number") from None


@dataclass(frozen=True)
class C4BoundParams:
    """Constants c, d of the essential-path lemma.

    Exact when both are Fractions and the 2/3 power is rational; otherwise
    the affected quantities are floats.
    """

    c: Number
    d: Number
    degree_exponent: Fraction = Fraction(5, 12)

    def __post_init__(self):
        if not (self.c > 0 and self.d > 0):
            raise SatGameError("c and d must be positive")

    @property
    def exact(self) -> bool:
        return isinstance(self.c, Fraction) and isinstance(self.d, Fraction)

    @property
    def q(self) -> Number:
        return self.c ** 2 / (2 * self.d ** 2)

    @property
    def b(self) -> Number:
        return _pow_two_thirds(self.q)

    @property
    def branches(self) -> tuple[Number, Number]:
        return self.b / 2, self.c ** 2 / (2 * self.d)

    @property
    def a(self) -> Number:
        first, second = self.branches
        if self.exact:
            # compare (b/2)^3 = q^2/8 with second^3 without roots
            return second if self.q ** 2 / 8 >= second ** 3 else first
        return min(first, second)

    @property
    def at_crossover(self) -> bool:
        if self.exact:
            return self.q ** 2 / 8 == self.branches[1] ** 3
        first, second = self.branches
        return abs(float(first) - float(second)) <= FLOAT_TOL * max(1.0, abs(float(second)))


def c4_bound_constant(p: C4BoundParams, n: int) -> tuple[Number, int]:
    """(a, floor(a * n^(13/12))); the power of n is taken in floating point."""
    if n < 1:
        raise SatGameError("n must be >= 1")
    a = p.a
    return a, math.floor(float(a) * n ** (13 / 12))
