"""Closed-form counts and generating series for the compatibility graph.

Everything here is exact: integers are arbitrary precision, series are
integer coefficient lists, and the one ratio on offer is a Fraction.
Formulas whose validity starts at some size raise DomainError below it
instead of extrapolating.

The count_* functions take the half-size parameter l: odd-size families
live on 2*l - 1 edges, even-size families on 2*l.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import DomainError


@dataclass(frozen=True)
class SeriesTable:
    """Named prefix of an integer power series, indexed from 0."""

    name: str
    coefficients: tuple[int, ...]

    def __getitem__(self, i: int) -> int:
        return self.coefficients[i]

    def __len__(self) -> int:
        return len(self.coefficients)


def binomial(n: int, r: int) -> int:
    """Binomial coefficient with explicit domain checking."""
    if n < 0 or r < 0:
        raise DomainError(f"binomial needs nonnegative arguments, got {n}, {r}")
    return comb(n, r)


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    assert r == 0, f"{what} is not an integer: {num}/{den}"
    return q


def catalan(k: int) -> int:
    """Number of non-crossing perfect matchings of 2k points."""
    if k < 0:
        raise DomainError(f"catalan needs k >= 0, got {k}")
    return _exact_div(comb(2 * k, k), k + 1, "catalan number")


def fuss_a(l: int) -> int:
    """Number of non-crossing partitions of 4l points into l quadruples."""
    if l < 0:
        raise DomainError(f"fuss_a needs l >= 0, got {l}")
    return _exact_div(comb(4 * l, l), 3 * l + 1, "quadruple partition count")


def fuss_series(n: int) -> SeriesTable:
    """Quadruple partition counts as a series prefix a_0..a_n."""
    if n < 0:
        raise DomainError(f"series length must be >= 0, got {n}")
    return SeriesTable(
        "quadruple partitions", tuple(fuss_a(l) for l in range(n + 1))
    )


# -- family counts (l is the half-size) -------------------------------------


def count_I(l: int) -> int:
    """Number of isolated matchings of size 2l-1."""
    if l < 1:
        raise DomainError(f"isolated matchings need l >= 1, got {l}")
    return _exact_div(comb(4 * l - 2, l - 1), l, "isolated count")


def count_L_odd(l: int) -> int:
    """Number of degree-one matchings of odd size 2l-1."""
    if l < 1:
        raise DomainError(f"degree-one counts need l >= 1, got {l}")
    val = Fraction(2 * (l - 1), 3 * l) * comb(4 * l - 2, l - 1)
    assert val.denominator == 1, f"odd leaf count not integral at l={l}"
    return int(val)


def count_L_even(l: int) -> int:
    """Number of degree-one matchings of even size 2l."""
    if l < 1:
        raise DomainError(f"degree-one counts need l >= 1, got {l}")
    val = Fraction(l + 1, 3 * l + 1) * comb(4 * l, l)
    assert val.denominator == 1, f"even leaf count not integral at l={l}"
    return int(val)


def count_DB(l: int) -> int:
    """Number of paired matchings of size 2l (two per pair component)."""
    if l < 1:
        raise DomainError(f"paired matchings need l >= 1, got {l}")
    return l * 2**l


def count_pairs(l: int) -> int:
    """Number of two-vertex components among matchings of size 2l."""
    if l < 1:
        raise DomainError(f"pair components need l >= 1, got {l}")
    return l * 2 ** (l - 1)


def count_DBD(l: int) -> int:
    """Number of star components among matchings of odd size 2l-1."""
    if l < 3:
        raise DomainError(f"star component count starts at l = 3, got {l}")
    return (2 * l - 1) * 2 ** (l - 3)


def count_EDB_components(l: int) -> int:
    """Number of path-with-leaves components among matchings of size 2l."""
    if l < 3:
        raise DomainError(f"path component count starts at l = 3, got {l}")
    return l * 2 ** (l - 2)


def medium_odd_order(l: int) -> int:
    """Order of each star component at odd size 2l-1."""
    if l < 2:
        raise DomainError(f"star components exist from l = 2 on, got {l}")
    return l


def medium_even_order(l: int) -> int:
    """Order of each path-with-leaves component at even size 2l."""
    if l < 2:
        raise DomainError(f"path components exist from l = 2 on, got {l}")
    return 6 * l - 6


# -- maximum degree ----------------------------------------------------------


def riordan(k: int) -> int:
    """Maximum vertex degree in the size-k graph, attained by the rings."""
    if k < 2:
        raise DomainError(f"the degree formula needs k >= 2, got {k}")
    total = sum(
        comb(k + 1, i) * comb(k - i - 1, i - 1) for i in range(1, k // 2 + 1)
    )
    return _exact_div(total, k + 1, "ring degree")


# -- edge counts via the defining series equation ----------------------------


def _mul(a: list[int], b: list[int], n: int) -> list[int]:
    # Truncated product; both inputs already cut at degree n.
    out = [0] * (n + 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j in range(min(n - i, len(b) - 1) + 1):
            out[i + j] += x * b[j]
    return out


def _inverse(f: list[int], n: int) -> list[int]:
    # Power series inverse; needs constant term 1.
    assert f[0] == 1
    out = [1] + [0] * n
    for m in range(1, n + 1):
        out[m] = -sum(f[i] * out[m - i] for i in range(1, m + 1) if i < len(f))
    return out


def edge_series(n: int) -> SeriesTable:
    """Edge counts d_0..d_n of the graphs of sizes 0..n.

    The doubled-and-shifted series Z = 2z - 1 satisfies
    Z = 1 + 2x^2 Z^4 / (1 - x Z^2); iterating that equation from the
    constant series settles one further coefficient per round, since the
    correction term carries a factor x^2.
    """
    if n < 0:
        raise DomainError(f"series length must be >= 0, got {n}")
    big = [1] + [0] * n
    for _ in range(n + 3):
        sq = _mul(big, big, n)
        fourth = _mul(sq, sq, n)
        denom = [1] + [-c for c in sq[:n]]
        frac = _mul(fourth, _inverse(denom, n), n)
        nxt = [1] + [0] * n
        for i in range(n - 1):
            nxt[i + 2] += 2 * frac[i]
        if nxt == big:
            break
        big = nxt
    else:
        raise AssertionError("series iteration did not stabilize")
    halved = []
    for i, c in enumerate(big):
        num = c + 1 if i == 0 else c
        assert num % 2 == 0, f"coefficient {i} of the doubled series is odd"
        halved.append(num // 2)
    return SeriesTable("edge counts", tuple(halved))


def growth_estimate(n: int) -> Fraction:
    """Ratio d_n / d_(n-1), an exact probe of the edge-count growth rate.

    Early ratios sit far from the limit; the probe only becomes
    meaningful past the first dozen terms.  n=2 is excluded outright
    because the size-1 graph has no edges.
    """
    if n < 3:
        raise DomainError(f"growth ratios need n >= 3, got {n}")
    d = edge_series(n).coefficients
    return Fraction(d[n], d[n - 1])


# -- the big component -------------------------------------------------------


def big_component_order(k: int) -> int:
    """Order of the ring component, by subtracting every special family.

    Valid from k = 9 on, where all non-ring components are exactly the
    isolated vertices, pairs, stars, and paths-with-leaves.
    """
    if k < 9:
        raise DomainError(f"the subtraction formula needs k >= 9, got {k}")
    if k % 2:
        l = (k + 1) // 2
        return catalan(k) - count_I(l) - medium_odd_order(l) * count_DBD(l)
    l = k // 2
    specials = 2 * count_pairs(l)
    specials += medium_even_order(l) * count_EDB_components(l)
    return catalan(k) - specials


def big_order_inequalities(l_max: int) -> bool:
    """Whether the ring component strictly outweighs every medium one.

    Checks, with exact integers for 5 <= l <= l_max, that the
    subtraction formula leaves more vertices than the largest medium
    order at both sizes 2l-1 and 2l.
    """
    if l_max < 5:
        raise DomainError(f"the inequalities start at l = 5, got {l_max}")
    for l in range(5, l_max + 1):
        odd_rest = count_I(l) + medium_odd_order(l) * count_DBD(l)
        if catalan(2 * l - 1) <= odd_rest + medium_odd_order(l):
            return False
        even_rest = count_DB(l) + medium_even_order(l) * count_EDB_components(l)
        if catalan(2 * l) <= even_rest + medium_even_order(l):
            return False
    return True
