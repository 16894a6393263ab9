"""Partition profiles, enumerators and the triple check."""

import pytest

from qrr import partitions as P
from qrr.errors import BadParams

GRIDS = list(P.all_grids())


def all_partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for p in range(min(n, largest), 0, -1):
        for rest in all_partitions(n - p, p):
            yield (p,) + rest


def _distinct(parts, pred):
    xs = [p for p in parts if pred(p)]
    return len(xs) == len(set(xs))


def _max(parts, pred):
    return max((p for p in parts if pred(p)), default=None)


def literal(tag, k, r, parts):
    """The theorem bullets read directly, independent of the profile encoding.

    ``L`` is the largest occurring odd (even for E) multiple of ``k``, or 0 if none.
    """
    odd_k = lambda p: p % (2 * k) == k  # noqa: E731
    even_k = lambda p: p % (2 * k) == 0  # noqa: E731
    if tag in "ACEG":
        mod = k if tag in "AE" else 2 * k
        if tag in "AE":
            res_r = lambda p: p % k == r  # noqa: E731
            res_mr = lambda p: p % k == k - r  # noqa: E731
            rep = lambda p: p % k == 0  # noqa: E731
        else:
            res_r = lambda p: p % mod == k + r  # noqa: E731
            res_mr = lambda p: p % mod == k - r  # noqa: E731
            rep = lambda p: p % (4 * k) in (0, k, 3 * k)  # noqa: E731
        if not all(res_r(p) or res_mr(p) or rep(p) for p in parts):
            return False
        if not (_distinct(parts, res_r) and _distinct(parts, res_mr)):
            return False
        stair = odd_k if tag != "E" else even_k
        L = _max(parts, stair) or 0
        first = k if tag != "E" else 2 * k
        if L and any(j not in parts for j in range(first, L + 1, 2 * k)):
            return False
        top_r, top_mr = _max(parts, res_r), _max(parts, res_mr)
        if tag == "A":
            top_e = _max(parts, even_k)
            return ((top_e is None or top_e <= L + k) and (top_r is None or top_r < L / 2)
                    and (top_mr is None or top_mr < k / 2 + L / 2))
        if tag == "E":
            top_o = _max(parts, odd_k)
            return ((top_o is None or top_o <= L + k) and (top_r is None or top_r < k / 2 + L / 2)
                    and (top_mr is None or top_mr < L / 2))
        top4 = _max(parts, lambda p: p % (4 * k) == 0)
        if tag == "C":
            return ((top4 is None or top4 <= 2 * L + 2 * k) and (top_r is None or top_r < k + L)
                    and (top_mr is None or top_mr < L))
        # G: the staircase must be nonempty (the generating function starts at q^k)
        return (L > 0 and (top4 is None or top4 < 2 * L) and (top_r is None or top_r < L)
                and (top_mr is None or top_mr < L - 2 * k))
    if tag == "B":
        d = lambda p: p % (3 * k) in (k + r, 2 * k - r)  # noqa: E731
        rep = lambda p: p % (3 * k) in (k, 2 * k)  # noqa: E731
    elif tag == "D":
        d = lambda p: p % (4 * k) in (2 * k + r, 2 * k - r)  # noqa: E731
        rep = lambda p: p % (2 * k) == k  # noqa: E731
    elif tag == "F":
        d = lambda p: p % (3 * k) in (r, 3 * k - r)  # noqa: E731
        rep = lambda p: p % (3 * k) in (k, 2 * k)  # noqa: E731
    else:  # H
        d = lambda p: p % (4 * k) in (r, 4 * k - r)  # noqa: E731
        rep = lambda p: p % (2 * k) == k  # noqa: E731
        if r in parts or k not in parts:
            return False
    return all(d(p) or rep(p) for p in parts) and _distinct(parts, d)


@pytest.mark.parametrize("k,r", GRIDS)
@pytest.mark.parametrize("tag", "ABCDEFGH")
def test_profiles_match_literal_reading(tag, k, r):
    prof = P.profile(tag, k, r)
    n_max = 22
    counts = P.enumerate_counts(prof, n_max)
    for n in range(n_max + 1):
        want = sum(1 for parts in all_partitions(n) if literal(tag, k, r, parts))
        assert counts[n] == want, (tag, k, r, n)


def test_spec_examples():
    b = P.profile("B", 3, 1)
    assert P.enumerate_count(b, 6) == 2
    assert P.enumerate_count(b, 1) == 0
    assert P.gf_counts("AB", 3, 1, 6)[6] == 2
    assert P.gf_counts("AB", 3, 1, 6)[0] == 1


@pytest.mark.parametrize("k,r", GRIDS)
def test_zero_sentinels(k, r):
    for tag in "ABCDEF":
        assert P.enumerate_count(P.profile(tag, k, r), 0) == 1
    assert P.enumerate_count(P.profile("G", k, r), 0) == 0
    assert P.enumerate_count(P.profile("H", k, r), 0) == 0
    assert P.gf_counts("GH", k, r, 0) == [0]


def test_e_sentinel_alternative_rejected():
    # forcing every bounded class empty when no even multiple of k occurs
    # contradicts the generating function already at n = 1
    gf = P.gf_counts("EF", 3, 1, 6)
    assert gf[1] == 1  # the partition (1,), which that reading would exclude
    assert P.enumerate_counts(P.profile("E", 3, 1), 6) == gf


@pytest.mark.parametrize("k,r", GRIDS)
@pytest.mark.parametrize("theorem", P.THEOREMS)
def test_triple_check(theorem, k, r):
    rep = P.check_partition_theorem(theorem, k, r, 40)
    assert rep.passed, rep.mismatches()[:3]
    assert len(rep.rows) == 40 and rep.rows[0].n == 1


@pytest.mark.parametrize("k,r", GRIDS)
@pytest.mark.parametrize("tag", "BDFH")
def test_two_strategies(tag, k, r):
    prof = P.profile(tag, k, r)
    assert P.enumerate_counts(prof, 40) == P.enumerate_counts_by_class(prof, 40)


def test_by_class_rejects_bounded_profile():
    with pytest.raises(ValueError):
        P.enumerate_counts_by_class(P.profile("A", 3, 1), 5)


@pytest.mark.parametrize("k", [3, 4, 5, 7])
def test_staircases(k):
    for n in range(8):
        odd = P.staircase(k, n, True)
        even = P.staircase(k, n, False)
        assert sum(odd) == k * n * n
        assert sum(even) == k * (n * n + n)
        assert odd == [k * (2 * j - 1) for j in range(1, n + 1)]
        # the minimal staircase is itself an A-partition and an E-partition when r = 1
        assert P.profile("A", k, 1).accepts(tuple(odd))
        assert P.profile("E", k, 1).accepts(tuple(even))


def test_gh_first_row():
    rep = P.check_partition_theorem("GH", 3, 1, 1)
    assert [(r.n, r.left, r.right, r.gf) for r in rep.rows] == [(1, 0, 0, 0)]


@pytest.mark.parametrize("k,r", [(3, 2), (2, 1), (4, 2), (5, 0)])
def test_bad_params(k, r):
    with pytest.raises(BadParams):
        P.profile("A", k, r)
    with pytest.raises(BadParams):
        P.check_partition_theorem("AB", k, r, 5)


def test_unknown_theorem():
    with pytest.raises(BadParams):
        P.check_partition_theorem("XY", 3, 1, 5)


def test_report_json():
    d = P.check_partition_theorem("CD", 4, 1, 10).to_json()
    assert d["pass"] and len(d["rows"]) == 10
    assert set(d["rows"][0]) == {"n", "left_count", "right_count", "gf_count", "equal"}
    assert d["n0"]["gf_count"] == 1
