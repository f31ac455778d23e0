"""Non-crossing perfect matchings of points in convex position.

Points are labeled 1..2k in counterclockwise convex order.  A matching is a
set of k chords pairing up all points so that no two chords cross.  Crossing
is a property of the cyclic label order alone, so no coordinates are stored.

The canonical form used everywhere: each edge is an ``(a, b)`` tuple with
``a < b``, and edges are sorted by their first point.  The string form joins
edges with commas, e.g. ``"1-2,3-4,5-6"``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import CrossingError, LabelError, ParseError

Edge = tuple[int, int]

DEFAULT_MAX_K = 12


def configured_max_k() -> int:
    """Size cap for heavy operations, overridable via the DCM_MAX_K variable."""
    raw = os.environ.get("DCM_MAX_K")
    if raw is None:
        return DEFAULT_MAX_K
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"DCM_MAX_K must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"DCM_MAX_K must be positive, got {value}")
    return value


@dataclass(frozen=True, slots=True)
class Matching:
    """A non-crossing perfect matching in canonical edge order.

    Instances are immutable and hashable; construct them through
    :func:`validate`, :func:`parse_matching`, or the generators in this
    package, which guarantee the canonical form.
    """

    edges: tuple[Edge, ...]

    @property
    def k(self) -> int:
        return len(self.edges)

    @property
    def n_points(self) -> int:
        return 2 * len(self.edges)

    def partner(self) -> list[int]:
        """Partner table ``p`` with ``p[i]`` the point matched to ``i``.

        Index 0 is unused so that labels index directly.
        """
        p = [0] * (2 * len(self.edges) + 1)
        for a, b in self.edges:
            p[a] = b
            p[b] = a
        return p

    def to_string(self) -> str:
        return format_edges(self.edges)

    def to_json_dict(self) -> dict:
        return {"k": self.k, "edges": [[a, b] for a, b in self.edges]}

    def __str__(self) -> str:
        return self.to_string()


def format_edges(edges: Iterable[Edge]) -> str:
    return ",".join(f"{a}-{b}" for a, b in edges)


def canonical_edges(edges: Iterable[Iterable[int]]) -> tuple[Edge, ...]:
    """Sort each pair and then the pair list.  No validity checking."""
    return tuple(sorted(tuple(sorted(e)) for e in edges))


def is_crossing(e1: Edge, e2: Edge, /) -> bool:
    """Whether two chords of the same convex point set cross.

    Edges sharing an endpoint never cross.  Otherwise the four endpoints are
    distinct and the chords cross exactly when they interleave around the
    circle, i.e. one edge has exactly one endpoint strictly between the two
    endpoints of the other.
    """
    a1, b1 = min(e1), max(e1)
    a2, b2 = min(e2), max(e2)
    if a1 == a2 or a1 == b2 or b1 == a2 or b1 == b2:
        return False
    return (a1 < a2 < b1 < b2) or (a2 < a1 < b2 < b1)


def validate(edges: Iterable[Iterable[int]], k: int | None = None) -> Matching:
    """Check labels, coverage, and planarity; return the canonical matching.

    Raises :class:`LabelError` for bad labels or coverage and
    :class:`CrossingError` (with one offending pair) for crossings.
    """
    canon = canonical_edges(edges)
    if k is None:
        k = len(canon)
    if len(canon) != k:
        raise LabelError(f"expected {k} edges, got {len(canon)}")
    if k < 1:
        raise LabelError("a matching needs at least one edge")
    n = 2 * k
    seen = [False] * (n + 1)
    for a, b in canon:
        for t in (a, b):
            if not 1 <= t <= n:
                raise LabelError(f"label {t} out of range 1..{n}")
            if seen[t]:
                raise LabelError(f"label {t} used more than once")
            seen[t] = True
        if a == b:
            raise LabelError(f"edge ({a}, {b}) joins a point to itself")
    # Single stack pass detects crossings: when edge (a, b) closes at b, every
    # point opened after a must already be closed.
    partner = [0] * (n + 1)
    for a, b in canon:
        partner[a] = b
        partner[b] = a
    stack: list[int] = []
    for t in range(1, n + 1):
        if partner[t] > t:
            stack.append(t)
        else:
            top = stack.pop()
            if top != partner[t]:
                raise CrossingError((top, partner[top]), (partner[t], t))
    return Matching(canon)


def parse_matching(text: str) -> Matching:
    """Parse the ``"a-b,c-d,..."`` string form and validate it."""
    pairs = []
    for chunk in text.strip().split(","):
        parts = chunk.split("-")
        if len(parts) != 2:
            raise ParseError(f"bad edge {chunk!r}, expected 'a-b'")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ParseError(f"bad edge {chunk!r}, expected integers") from exc
    if not pairs:
        raise ParseError("empty matching string")
    return validate(pairs)


def matching_from_json(obj: dict) -> Matching:
    """Build a matching from the ``{"k": ..., "edges": [[a, b], ...]}`` form."""
    if not isinstance(obj, dict) or "edges" not in obj:
        raise ParseError("matching JSON must be an object with an 'edges' key")
    edges = obj["edges"]
    if not isinstance(edges, list) or not all(
        isinstance(e, (list, tuple)) and len(e) == 2 for e in edges
    ):
        raise ParseError("'edges' must be a list of [a, b] pairs")
    k = obj.get("k", len(edges))
    if not isinstance(k, int):
        raise ParseError("'k' must be an integer")
    return validate(edges, k)


def _enumerate_tuples(points: tuple[int, ...]) -> Iterator[tuple[Edge, ...]]:
    # Non-crossing matchings of an even label sequence: match the first point
    # to every odd-offset partner, then recurse on the two separated runs.
    if not points:
        yield ()
        return
    first = points[0]
    for j in range(1, len(points), 2):
        edge = (first, points[j])
        for inner in _enumerate_tuples(points[1:j]):
            for outer in _enumerate_tuples(points[j + 1 :]):
                yield (edge,) + inner + outer


def enumerate_matchings(k: int, max_k: int | None = None) -> list[Matching]:
    """All non-crossing perfect matchings on 2k points, in canonical order."""
    limit = configured_max_k() if max_k is None else max_k
    if not 1 <= k <= limit:
        raise ValueError(f"k must be in 1..{limit}, got {k}")
    found = [
        Matching(canonical_edges(t))
        for t in _enumerate_tuples(tuple(range(1, 2 * k + 1)))
    ]
    found.sort(key=lambda m: m.edges)
    return found


def rotate(m: Matching, s: int) -> Matching:
    """Rotate labels by ``s`` steps: point ``t`` becomes ``t + s`` (mod 2k)."""
    n = m.n_points
    shifted = [((a - 1 + s) % n + 1, (b - 1 + s) % n + 1) for a, b in m.edges]
    return Matching(canonical_edges(shifted))


def reflect(m: Matching) -> Matching:
    """Mirror the point set: point ``t`` becomes ``2k + 1 - t``."""
    n = m.n_points
    return Matching(canonical_edges((n + 1 - a, n + 1 - b) for a, b in m.edges))


def edge_kind(m: Matching, edge: Iterable[int]) -> str:
    """Classify an edge of ``m`` as ``"boundary"`` or ``"diagonal"``.

    Boundary edges join cyclically consecutive points, including (2k, 1).
    """
    a, b = sorted(edge)
    if (a, b) not in m.edges:
        raise LabelError(f"edge ({a}, {b}) is not in the matching")
    n = m.n_points
    if b - a == 1 or (a == 1 and b == n):
        return "boundary"
    return "diagonal"


def skips(m: Matching) -> list[tuple[int, int]]:
    """Cyclically consecutive point pairs not joined by an edge of ``m``."""
    n = m.n_points
    p = m.partner()
    out = []
    for i in range(1, n + 1):
        nxt = i % n + 1
        if p[i] != nxt:
            out.append((i, nxt))
    return out


def is_ring(m: Matching) -> bool:
    """Whether every edge is a boundary edge.

    For each k >= 2 exactly two matchings qualify; for k = 1 the single
    matching does.
    """
    return all(edge_kind(m, e) == "boundary" for e in m.edges)


def insert(host: Matching, inner: Matching, gap: int) -> Matching:
    """Splice ``inner`` into ``host`` after the host point ``gap``.

    ``gap`` ranges over 0..2r where r is the host size: 0 places the run
    before host point 1, and 2r places it after the last host point.  Host
    labels above the gap shift up by the run length 2s; inserted labels keep
    their relative order, offset by ``gap``.
    """
    r2 = host.n_points
    s2 = inner.n_points
    if not 0 <= gap <= r2:
        raise ValueError(f"gap must be in 0..{r2}, got {gap}")
    shifted = [
        (a if a <= gap else a + s2, b if b <= gap else b + s2)
        for a, b in host.edges
    ]
    placed = [(a + gap, b + gap) for a, b in inner.edges]
    return Matching(canonical_edges(shifted + placed))


def remove(m: Matching, gap: int, size: int) -> tuple[Matching, Matching]:
    """Undo :func:`insert`: split off the run of ``2*size`` points after ``gap``.

    Returns ``(host, inner)`` with labels renumbered so that
    ``insert(host, inner, gap)`` reproduces ``m``.  Raises
    :class:`LabelError` if the window is not matched entirely within itself.
    """
    n = m.n_points
    s2 = 2 * size
    if size < 1 or gap < 0 or gap + s2 > n or n - s2 < 2:
        raise ValueError(f"invalid window: gap={gap} size={size} for 2k={n}")
    lo, hi = gap + 1, gap + s2
    inner_edges = []
    host_edges = []
    for a, b in m.edges:
        a_in = lo <= a <= hi
        b_in = lo <= b <= hi
        if a_in != b_in:
            raise LabelError(f"edge ({a}, {b}) leaves the window {lo}..{hi}")
        if a_in:
            inner_edges.append((a - gap, b - gap))
        else:
            host_edges.append(
                (a if a < lo else a - s2, b if b < lo else b - s2)
            )
    return Matching(canonical_edges(host_edges)), Matching(
        canonical_edges(inner_edges)
    )
