"""Structured matching families and their strip-form constructors.

Several families of matchings with extreme degrees have a normal form on
a two-row strip: points sit on an upper and a lower row, read clockwise
(upper row left to right, then lower row right to left), with the start
label free.  Each *element* is a vertical edge (one point per row)
followed by a horizontal edge (two points on one row, recorded as ``+``
for upper and ``-`` for lower).  The first element is ``+``, the last
``-``, and the free middle signs form the family parameter ``chi``.

Families:

* isolated matchings (no neighbor): grown from the single 2-point
  matching by repeatedly inserting a block, detected by stripping blocks;
* degree-one matchings: strip down to a size 2 or 3 ring;
* paired matchings (``make_db``): elements only; mutual unique neighbors,
  linked by :func:`db_partner`;
* odd star centers (``make_dbd``): elements plus one trailing vertical
  edge; their leaves (``make_dbdl``) arise by one flip;
* even path members (``make_edb``): elements plus an extra horizontal
  pair next to the j-th element and its twin on the opposite row; their
  leaves (``make_edbl1``, ``make_edbl2``) arise by one flip.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .dual_tree import find_blocks
from .errors import DomainError
from .matching import Edge, Matching, validate
from .compat import flip

LABEL_ISOLATED = "Isolated-I"
LABEL_PAIR = "Pair-DB"
LABEL_STAR_CENTER = "Medium-DBD"
LABEL_STAR_LEAF = "Medium-DBDL"
LABEL_PATH_MEMBER = "Medium-EDB"
LABEL_PATH_LEAF = "Medium-EDBL"
LABEL_REGULAR = "Regular"

FAMILY_VARIANTS = ("I", "L", "Ring", "DB", "DBD", "DBDL", "EDB", "EDBL1", "EDBL2")


# -- sign strings -----------------------------------------------------------


def _check_chi(chi: str, expected: int) -> None:
    if len(chi) != expected or any(c not in "+-" for c in chi):
        raise ValueError(
            f"chi must be a +/- string of length {expected}, got {chi!r}"
        )


def chi_conjugate(chi: str) -> str:
    """Reverse the sign string and flip every sign."""
    _check_chi(chi, len(chi))
    return "".join("+" if c == "-" else "-" for c in reversed(chi))


def chi_delta(chi: str) -> int:
    """Excess of ``+`` signs over ``-`` signs."""
    _check_chi(chi, len(chi))
    return chi.count("+") - chi.count("-")


# -- strip layouts ----------------------------------------------------------


@dataclass(frozen=True)
class StripLayout:
    """A matching built on the two-row strip, with its edges by role."""

    matching: Matching
    d: tuple[Edge, ...]
    b: tuple[Edge, ...]
    e: Edge | None = None
    e2: Edge | None = None


def _element_signs(count: int, chi: str) -> list[str]:
    # First element +, last element -, chi fills the middle; with a single
    # element the trailing - wins.
    signs = ["+"] * count
    signs[-1] = "-"
    for i, c in enumerate(chi):
        signs[1 + i] = c
    return signs


def _chi_len(elements: int) -> int:
    return max(elements - 2, 0)


class _Strip:
    """Accumulates rows of point keys, then labels them clockwise."""

    def __init__(self) -> None:
        self.upper: list[str] = []
        self.lower: list[str] = []

    def row(self, sign: str) -> list[str]:
        return self.upper if sign == "+" else self.lower

    def labels(self, z: int) -> dict[str, int]:
        n = len(self.upper) + len(self.lower)
        if not 1 <= z <= n:
            raise ValueError(f"start label must be in 1..{n}, got {z}")
        out = {}
        cur = z
        for key in self.upper + list(reversed(self.lower)):
            out[key] = cur
            cur = cur % n + 1
        return out


def _edge(labels: dict[str, int], a: str, b: str) -> Edge:
    x, y = labels[a], labels[b]
    return (x, y) if x < y else (y, x)


def make_db(k: int, chi: str, z: int) -> StripLayout:
    """Element-only strip matching on 2k points (k even)."""
    if k < 2 or k % 2:
        raise DomainError(f"paired strip matchings need even k >= 2, got {k}")
    count = k // 2
    _check_chi(chi, _chi_len(count))
    signs = _element_signs(count, chi)
    strip = _Strip()
    for i, sign in enumerate(signs, start=1):
        strip.upper.append(f"d{i}u")
        strip.lower.append(f"d{i}l")
        strip.row(sign).extend([f"b{i}a", f"b{i}b"])
    labels = strip.labels(z)
    d = tuple(_edge(labels, f"d{i}u", f"d{i}l") for i in range(1, count + 1))
    b = tuple(_edge(labels, f"b{i}a", f"b{i}b") for i in range(1, count + 1))
    return StripLayout(validate(d + b), d, b)


def db_partner(k: int, chi: str, z: int) -> tuple[str, int]:
    """Parameters of the unique neighbor of ``make_db(k, chi, z)``.

    The start label shifts by k plus the excess of upper over lower
    horizontal edges.  With at least two elements that excess equals
    ``chi_delta(chi)`` (the fixed first and last signs cancel); the
    single-element host is a lone ``-``.
    """
    if k < 2 or k % 2:
        raise DomainError(f"paired strip matchings need even k >= 2, got {k}")
    _check_chi(chi, _chi_len(k // 2))
    signs = _element_signs(k // 2, chi)
    delta = signs.count("+") - signs.count("-")
    z2 = (z + k + delta - 1) % (2 * k) + 1
    return chi_conjugate(chi), z2


def make_dbd(k: int, chi: str, z: int) -> StripLayout:
    """Strip matching with a trailing vertical edge, on 2k points (k odd).

    For k >= 5 each such matching arises from exactly two parameter
    choices, linked the same way as paired matchings.
    """
    if k < 3 or k % 2 == 0:
        raise DomainError(f"odd star centers need odd k >= 3, got {k}")
    count = (k + 1) // 2 - 1
    _check_chi(chi, _chi_len(count))
    signs = _element_signs(count, chi)
    strip = _Strip()
    for i, sign in enumerate(signs, start=1):
        strip.upper.append(f"d{i}u")
        strip.lower.append(f"d{i}l")
        strip.row(sign).extend([f"b{i}a", f"b{i}b"])
    last = count + 1
    strip.upper.append(f"d{last}u")
    strip.lower.append(f"d{last}l")
    labels = strip.labels(z)
    d = tuple(_edge(labels, f"d{i}u", f"d{i}l") for i in range(1, last + 1))
    b = tuple(_edge(labels, f"b{i}a", f"b{i}b") for i in range(1, count + 1))
    return StripLayout(validate(d + b), d, b)


def make_edb(k: int, j: int, chi: str, z: int) -> StripLayout:
    """Strip matching with an extra horizontal pair at element j (k even).

    The extra pair ``e`` sits immediately left of the j-th horizontal
    edge on its row; its twin ``e2`` sits on the other row immediately
    right of the j-th vertical edge.
    """
    if k < 4 or k % 2:
        raise DomainError(f"even path members need even k >= 4, got {k}")
    count = k // 2 - 1
    if not 1 <= j <= count:
        raise DomainError(f"j must be in 1..{count}, got {j}")
    _check_chi(chi, _chi_len(count))
    signs = _element_signs(count, chi)
    strip = _Strip()
    opposite = {"+": "-", "-": "+"}
    for i, sign in enumerate(signs, start=1):
        strip.upper.append(f"d{i}u")
        strip.lower.append(f"d{i}l")
        if i == j:
            strip.row(opposite[sign]).extend(["e2a", "e2b"])
            strip.row(sign).extend(["ea", "eb"])
        strip.row(sign).extend([f"b{i}a", f"b{i}b"])
    labels = strip.labels(z)
    d = tuple(_edge(labels, f"d{i}u", f"d{i}l") for i in range(1, count + 1))
    b = tuple(_edge(labels, f"b{i}a", f"b{i}b") for i in range(1, count + 1))
    e = _edge(labels, "ea", "eb")
    e2 = _edge(labels, "e2a", "e2b")
    return StripLayout(validate(d + b + (e, e2)), d, b, e, e2)


def make_dbdl(k: int, j: int, chi: str, z: int) -> Matching:
    """Leaf attached to the odd star center: one flip of ``make_dbd``."""
    layout = make_dbd(k, chi, z)
    count = len(layout.b)
    if not 1 <= j <= count:
        raise DomainError(f"j must be in 1..{count}, got {j}")
    parts = [[layout.d[i], layout.b[i]] for i in range(j - 1)]
    parts.append([layout.d[j - 1], layout.b[j - 1], layout.d[j]])
    parts.extend(
        [layout.b[i], layout.d[i + 1]] for i in range(j, count)
    )
    return flip(layout.matching, parts)


def make_edbl1(k: int, j: int, chi: str, z: int) -> Matching:
    """First leaf hanging off ``make_edb(k, j, chi, z)``."""
    layout = make_edb(k, j, chi, z)
    parts = [
        [layout.d[i], layout.b[i]]
        for i in range(len(layout.d))
        if i != j - 1
    ]
    parts.append([layout.d[j - 1], layout.e2])
    parts.append([layout.b[j - 1], layout.e])
    return flip(layout.matching, parts)


def make_edbl2(k: int, j: int, chi: str, z: int) -> Matching:
    """Second leaf hanging off ``make_edb(k, j, chi, z)``."""
    layout = make_edb(k, j, chi, z)
    parts = [
        [layout.d[i], layout.b[i]]
        for i in range(len(layout.d))
        if i != j - 1
    ]
    parts.append([layout.d[j - 1], layout.e])
    parts.append([layout.b[j - 1], layout.e2])
    return flip(layout.matching, parts)


# -- rings and recursively detected families --------------------------------


def rings(k: int) -> tuple[Matching, Matching]:
    """The two matchings whose edges are all boundary edges (k >= 2)."""
    if k < 2:
        raise DomainError(f"rings need k >= 2, got {k}")
    r1 = validate([(i, i + 1) for i in range(1, 2 * k, 2)])
    r2 = validate(
        [(1, 2 * k)] + [(i, i + 1) for i in range(2, 2 * k - 1, 2)]
    )
    return r1, r2


def _strip_block(m: Matching, start: int) -> Matching:
    # Delete the 4-point run of a block and renumber the rest.
    n = m.n_points
    gone = {(start - 1 + t) % n + 1 for t in range(4)}
    keep = sorted(set(range(1, n + 1)) - gone)
    rank = {t: i + 1 for i, t in enumerate(keep)}
    edges = [
        (rank[a], rank[b])
        for a, b in m.edges
        if a not in gone and b not in gone
    ]
    return validate(edges)


def is_I(m: Matching) -> bool:
    """Whether the matching is isolated: odd size, blocks all the way down."""
    if m.k % 2 == 0:
        return False
    cur = m
    while cur.k >= 3:
        blocks = find_blocks(cur)
        if not blocks:
            return False
        cur = _strip_block(cur, blocks[0].start)
    return True


def is_L(m: Matching) -> bool:
    """Whether the matching has exactly one neighbor: blocks down to a
    size 2 or 3 ring."""
    if m.k < 2:
        return False
    cur = m
    while cur.k >= 4:
        blocks = find_blocks(cur)
        if not blocks:
            return False
        cur = _strip_block(cur, blocks[0].start)
    from .matching import is_ring

    return is_ring(cur)


def i_coloring(m: Matching) -> dict[Edge, str]:
    """Two-coloring of an isolated matching's edges.

    An edge is red when the number of edges strictly inside it is even
    (equivalently, by odd size, when the number outside is even too).
    Red edges dominate black ones by exactly one.
    """
    if not is_I(m):
        raise ValueError(f"{m} is not an isolated matching")
    out = {}
    for a, b in m.edges:
        inside = (b - a - 1) // 2
        out[(a, b)] = "red" if inside % 2 == 0 else "black"
    return out


# -- family generation ------------------------------------------------------


def _insert_block_everywhere(m: Matching) -> set[Matching]:
    # All matchings obtained by splicing a new block into any cyclic gap.
    # Position j..j+3 hosts the block; old labels continue right after it.
    out = set()
    n_new = m.n_points + 4
    for j in range(1, n_new + 1):
        block = [
            ((j - 1) % n_new + 1, (j + 2) % n_new + 1),
            (j % n_new + 1, (j + 1) % n_new + 1),
        ]
        shifted = [
            (
                (j + 2 + a) % n_new + 1,
                (j + 2 + b) % n_new + 1,
            )
            for a, b in m.edges
        ]
        out.add(validate(block + shifted))
    return out


@lru_cache(maxsize=None)
def _grown_family(base: str, k: int) -> frozenset[Matching]:
    # base "I": seed size 1; base "L": seeds are the size 2 and 3 rings.
    if base == "I":
        if k % 2 == 0 or k < 1:
            raise DomainError(f"isolated matchings need odd k >= 1, got {k}")
        if k == 1:
            return frozenset({validate([(1, 2)])})
    else:
        if k < 2:
            raise DomainError(f"degree-one matchings need k >= 2, got {k}")
        if k == 2:
            return frozenset(rings(2))
        if k == 3:
            return frozenset(rings(3))
    smaller = _grown_family(base, k - 2)
    out: set[Matching] = set()
    for m in smaller:
        out |= _insert_block_everywhere(m)
    return frozenset(out)


@lru_cache(maxsize=None)
def _strip_family(variant: str, k: int) -> dict[Matching, tuple]:
    """All members of a strip-built family, mapped to their sorted
    parameter tuples."""
    out: dict[Matching, list] = {}

    def put(m: Matching, params: tuple) -> None:
        out.setdefault(m, []).append(params)

    n = 2 * k
    if variant == "DB":
        width = _chi_len(k // 2)
        for chi in _all_chi(width):
            for z in range(1, n + 1):
                put(make_db(k, chi, z).matching, (chi, z))
    elif variant == "DBD":
        width = _chi_len((k + 1) // 2 - 1)
        for chi in _all_chi(width):
            for z in range(1, n + 1):
                put(make_dbd(k, chi, z).matching, (chi, z))
    elif variant == "DBDL":
        count = (k + 1) // 2 - 1
        width = _chi_len(count)
        for chi in _all_chi(width):
            for j in range(1, count + 1):
                for z in range(1, n + 1):
                    put(make_dbdl(k, j, chi, z), (j, chi, z))
    elif variant == "EDB":
        count = k // 2 - 1
        width = _chi_len(count)
        for chi in _all_chi(width):
            for j in range(1, count + 1):
                for z in range(1, n + 1):
                    put(make_edb(k, j, chi, z).matching, (j, chi, z))
    elif variant in ("EDBL1", "EDBL2"):
        maker = make_edbl1 if variant == "EDBL1" else make_edbl2
        count = k // 2 - 1
        width = _chi_len(count)
        for chi in _all_chi(width):
            for j in range(1, count + 1):
                for z in range(1, n + 1):
                    put(maker(k, j, chi, z), (j, chi, z))
    else:
        raise ValueError(f"unknown strip family {variant!r}")
    return {m: tuple(sorted(params)) for m, params in out.items()}


def _all_chi(width: int) -> list[str]:
    out = [""]
    for _ in range(width):
        out = [c + s for c in out for s in "+-"]
    return out


def generate_family(variant: str, k: int) -> set[Matching]:
    """All size-k members of one named family."""
    if variant == "I":
        return set(_grown_family("I", k))
    if variant == "L":
        return set(_grown_family("L", k))
    if variant == "Ring":
        return set(rings(k))
    if variant not in FAMILY_VARIANTS:
        raise ValueError(
            f"variant must be one of {FAMILY_VARIANTS}, got {variant!r}"
        )
    return set(_strip_family(variant, k))


def classify_with_witness(m: Matching) -> tuple[str, tuple | None]:
    """Family label of a matching, with strip parameters when known."""
    k = m.k
    if k % 2:
        if is_I(m):
            return LABEL_ISOLATED, None
        for variant, label in (
            ("DBD", LABEL_STAR_CENTER),
            ("DBDL", LABEL_STAR_LEAF),
        ):
            if k >= 3:
                params = _strip_family(variant, k).get(m)
                if params:
                    return label, params[0]
        return LABEL_REGULAR, None
    if k >= 2:
        params = _strip_family("DB", k).get(m)
        if params:
            return LABEL_PAIR, params[0]
    if k >= 4:
        params = _strip_family("EDB", k).get(m)
        if params:
            return LABEL_PATH_MEMBER, params[0]
        for variant in ("EDBL1", "EDBL2"):
            params = _strip_family(variant, k).get(m)
            if params:
                return LABEL_PATH_LEAF, params[0]
    return LABEL_REGULAR, None


def classify(m: Matching) -> str:
    """Family label: isolated, pair member, star center or leaf, path
    member or leaf, or regular."""
    return classify_with_witness(m)[0]
