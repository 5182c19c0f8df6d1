import random
from fractions import Fraction

import pytest

from a2webs.exactmath import LaurentPoly, eval_q1, qint
from a2webs.labelings import (
    BoundaryLabeling,
    KappaVector,
    Labeling,
    boundary_profile,
    boundary_restriction,
    coefficient_via_labelings,
    enumerate_labelings,
    labeling_weight,
    transport_and_type,
    weighted_count,
)
from a2webs.spider import (
    apply_rule,
    find_reducible_face,
    is_irreducible,
    product_web,
    reduce_web,
    second_generator,
)
from a2webs.webcore import (
    Column,
    SliceDiagram,
    Web,
    WebError,
    concatenate,
    generator_web,
    identity_web,
)

SEED = 20260816


def gweb(n, i):
    return Web.from_slice(generator_web(n, i))


def idweb(n):
    return Web.from_slice(identity_web(n))


def circle_web():
    return Web.from_slice(SliceDiagram(1, (
        Column(2, "cup", ("R", "L")),
        Column(2, "cap", ("R", "L")),
    )))


def bl(text):
    return BoundaryLabeling.from_text(text)


def m3_irreducibles():
    return [
        idweb(3),
        gweb(3, 1),
        gweb(3, 2),
        product_web(3, (1, 2)),
        product_web(3, (2, 1)),
        second_generator(3, 1),
    ]


def first_boundary(w):
    return boundary_restriction(w, enumerate_labelings(w)[0])


class TestBoundaryLabeling:
    def test_text_roundtrip(self):
        g = bl("1,2,3:3,2,1")
        assert g.sources == (1, 2, 3) and g.sinks == (3, 2, 1)
        assert bl(g.to_text()) == g

    def test_rejects_bad_label(self):
        with pytest.raises(WebError):
            BoundaryLabeling((1, 4), (1, 2))

    def test_rejects_uneven_words(self):
        with pytest.raises(WebError):
            BoundaryLabeling((1, 2), (1,))

    def test_rejects_garbled_text(self):
        with pytest.raises(WebError):
            bl("1,2")
        with pytest.raises(WebError):
            bl("1,x:1,2")

    def test_is_balanced(self):
        assert bl("1,2:2,1").is_balanced()
        assert not bl("1,1:1,2").is_balanced()

    def test_orderable(self):
        assert bl("1,1:1,1") < bl("1,2:1,1")


class TestEnumeration:
    def test_identity_counts(self):
        w = idweb(2)
        assert len(enumerate_labelings(w)) == 9
        assert len(enumerate_labelings(w, bl("1,2:1,2"))) == 1
        # each strand is one edge, so its two ends cannot disagree
        assert enumerate_labelings(w, bl("1,2:2,1")) == []

    def test_generator_counts(self):
        w = gweb(2, 1)
        assert len(enumerate_labelings(w)) == 12
        assert len(enumerate_labelings(w, bl("1,2:1,2"))) == 1
        assert enumerate_labelings(w, bl("1,1:1,1")) == []

    def test_generator_middle_edge_forced(self):
        w = gweb(2, 1)
        internal = set(w.pmap.internal_vertices())
        [mid] = [
            e for e, (t, h) in enumerate(w.pmap.edges)
            if t in internal and h in internal
        ]
        [f] = enumerate_labelings(w, bl("1,2:1,2"))
        assert f.edge_labels[mid] == 3

    def test_circle_counts(self):
        w = circle_web()
        assert w.pmap.loops == 1
        fs = enumerate_labelings(w)
        assert len(fs) == 9
        assert len(enumerate_labelings(w, bl("1:1"))) == 3

    def test_output_is_sorted(self):
        fs = enumerate_labelings(gweb(2, 1))
        assert fs == sorted(fs, key=lambda f: (f.edge_labels, f.loop_labels))

    def test_wrong_boundary_size_rejected(self):
        with pytest.raises(WebError):
            enumerate_labelings(gweb(2, 1), bl("1,2,3:1,2,3"))

    def test_restrictions_are_balanced(self):
        for w in [gweb(2, 1), product_web(3, (1, 2, 1)), second_generator(3, 1)]:
            for f in enumerate_labelings(w):
                assert boundary_restriction(w, f).is_balanced()


class TestWeight:
    def test_identity_weight_is_unit(self):
        w = idweb(2)
        for f in enumerate_labelings(w):
            assert labeling_weight(w, f) == LaurentPoly.one()

    def test_generator_sorted_boundary(self):
        w = gweb(2, 1)
        [f] = enumerate_labelings(w, bl("1,2:1,2"))
        assert labeling_weight(w, f) == LaurentPoly.t_power(2)

    def test_generator_reversed_boundary(self):
        w = gweb(2, 1)
        [f] = enumerate_labelings(w, bl("2,1:2,1"))
        assert labeling_weight(w, f) == LaurentPoly.t_power(-2)

    def test_mismatched_labeling_rejected(self):
        with pytest.raises(WebError):
            labeling_weight(gweb(2, 1), Labeling((1, 2, 3)))

    def test_doubled_generator_count(self):
        w = product_web(2, (1, 1))
        assert weighted_count(w, bl("1,2:1,2")) == qint(2) * LaurentPoly.t_power(2)

    def test_triple_product_count(self):
        w = product_web(3, (1, 2, 1))
        got = weighted_count(w, bl("1,2,3:1,2,3"))
        assert got == LaurentPoly.t_power(2) + LaurentPoly.t_power(6)

    def test_double_tripod_count(self):
        w = second_generator(3, 1)
        assert weighted_count(w, bl("1,2,3:1,2,3")) == LaurentPoly.t_power(6)

    def test_circle_count_is_qint3(self):
        assert weighted_count(circle_web(), bl("1:1")) == qint(3)

    def test_empty_fiber_counts_zero(self):
        assert weighted_count(gweb(2, 1), bl("1,1:1,1")).is_zero()


def _rank_at_q1(vectors):
    cols = sorted({g for v in vectors for g, _ in v.entries()})
    rows = [[Fraction(eval_q1(v.entry(g))) for g in cols] for v in vectors]
    rank = 0
    for c in range(len(cols)):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        lead = rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                scale = rows[r][c] / lead[c]
                rows[r] = [a - scale * b for a, b in zip(rows[r], lead)]
        rank += 1
    return rank


class TestKappaVector:
    def test_identity_strand_profile(self):
        prof = boundary_profile(idweb(1))
        assert prof.support_size() == 3
        for g, c in prof.entries():
            assert g.sources == g.sinks
            assert c == LaurentPoly.one()

    def test_product_rule_on_doubled_generator(self):
        k1 = boundary_profile(gweb(2, 1))
        k2 = boundary_profile(product_web(2, (1, 1)))
        assert k1 * k1 == k2
        assert k2 == k1.scale(qint(2))

    def test_multiplicative_under_concatenation(self):
        rng = random.Random(SEED)
        for n in (2, 3):
            for _ in range(3):
                u = tuple(rng.choice(range(1, n)) for _ in range(rng.randint(1, 2)))
                v = tuple(rng.choice(range(1, n)) for _ in range(rng.randint(1, 2)))
                lhs = boundary_profile(product_web(n, u + v))
                rhs = boundary_profile(product_web(n, u)) * boundary_profile(product_web(n, v))
                assert lhs == rhs, (n, u, v)

    def test_mismatched_sizes_rejected(self):
        with pytest.raises(WebError):
            boundary_profile(idweb(1)) * boundary_profile(idweb(2))

    def test_respects_reduction(self):
        # weighted counts only see the web's class after rewriting
        for word in [(1, 1), (1, 2, 1), (2, 1, 2), (2, 2)]:
            w = product_web(3, word)
            acc = KappaVector(3)
            for child, coeff in reduce_web(w).terms():
                acc = acc + boundary_profile(child).scale(coeff)
            assert boundary_profile(w) == acc, word

    def test_separates_irreducibles(self):
        webs = m3_irreducibles()
        assert all(is_irreducible(w) for w in webs)
        profiles = [boundary_profile(w) for w in webs]
        assert _rank_at_q1(profiles) == len(webs)

    def test_vector_arithmetic(self):
        k = boundary_profile(gweb(2, 1))
        assert (k - k).is_zero()
        assert k + k == k.scale(qint(2) - LaurentPoly.t_power(2) - LaurentPoly.t_power(-2) + LaurentPoly.const(2))


class TestTransport:
    def test_irreducible_is_its_own_type(self):
        w = gweb(3, 1)
        for f in enumerate_labelings(w):
            ty, tf = transport_and_type(w, f)
            assert ty.code == w.code
            assert tf == f

    def test_bigon_fiber(self):
        w = product_web(2, (1, 1))
        target = gweb(2, 1)
        fs = enumerate_labelings(w, bl("1,2:1,2"))
        assert len(fs) == 2
        child_labelings = set()
        for f in fs:
            ty, tf = transport_and_type(w, f)
            assert ty.code == target.code
            assert boundary_restriction(ty, tf) == bl("1,2:1,2")
            child_labelings.add(tf)
        assert len(child_labelings) == 1

    def test_square_branches_split_by_weight(self):
        w = product_web(3, (1, 2, 1))
        by_weight = {
            labeling_weight(w, f): f
            for f in enumerate_labelings(w, bl("1,2,3:1,2,3"))
        }
        assert set(by_weight) == {LaurentPoly.t_power(2), LaurentPoly.t_power(6)}

        ty, tf = transport_and_type(w, by_weight[LaurentPoly.t_power(6)])
        assert ty.code == second_generator(3, 1).code
        assert labeling_weight(ty, tf) == LaurentPoly.t_power(6)

        ty, tf = transport_and_type(w, by_weight[LaurentPoly.t_power(2)])
        assert ty.code == gweb(3, 1).code
        assert labeling_weight(ty, tf) == LaurentPoly.t_power(2)

    def test_circle_collapses_to_strand(self):
        w = circle_web()
        target = idweb(1)
        for f in enumerate_labelings(w):
            ty, tf = transport_and_type(w, f)
            assert ty.code == target.code
            assert boundary_restriction(ty, tf) == boundary_restriction(w, f)

    def test_types_partition_the_fiber(self):
        rng = random.Random(SEED + 1)
        for n in (2, 3):
            for _ in range(4):
                word = tuple(
                    rng.choice(range(1, n)) for _ in range(rng.randint(2, 4))
                )
                w = product_web(n, word)
                support = {child.code for child, _ in reduce_web(w).terms()}
                steps = {}
                for f in enumerate_labelings(w):
                    ty, tf = transport_and_type(w, f, steps)
                    assert ty.code in support, (n, word)
                    assert boundary_restriction(w, f) == boundary_restriction(ty, tf)


class TestCoefficients:
    def test_bigon_coefficient(self):
        got = coefficient_via_labelings(
            product_web(2, (1, 1)), gweb(2, 1), bl("1,2:1,2")
        )
        assert got == qint(2)

    def test_self_coefficient_is_unit(self):
        w = gweb(3, 1)
        assert coefficient_via_labelings(w, w, first_boundary(w)) == LaurentPoly.one()

    def test_absent_target_gives_zero(self):
        got = coefficient_via_labelings(
            product_web(3, (1, 1)), second_generator(3, 1), bl("1,2,3:1,2,3")
        )
        assert got.is_zero()

    def test_empty_denominator_gives_zero(self):
        got = coefficient_via_labelings(gweb(2, 1), gweb(2, 1), bl("1,1:1,1"))
        assert got.is_zero()

    def test_matches_reduction_on_random_words(self):
        rng = random.Random(SEED + 2)
        cases = [(2, (1, 1, 1)), (3, (1, 2, 1)), (3, (2, 1, 2, 1))]
        for n in (2, 3):
            for _ in range(3):
                word = tuple(
                    rng.choice(range(1, n)) for _ in range(rng.randint(1, 4))
                )
                cases.append((n, word))
        for n, word in cases:
            w = product_web(n, word)
            for child, coeff in reduce_web(w).terms():
                g = first_boundary(child)
                assert coefficient_via_labelings(w, child, g) == coeff, (n, word)


def _assert_conservation(w, g, seen):
    if w.code in seen:
        return
    seen.add(w.code)
    feature = find_reducible_face(w)
    if feature is None:
        return
    total = LaurentPoly.zero()
    for oc in apply_rule(w, feature):
        total = total + oc.coeff * weighted_count(oc.child, g)
        _assert_conservation(oc.child, g, seen)
    assert weighted_count(w, g) == total


class TestDrawingIndependence:
    def test_counts_survive_each_rewrite_step(self):
        rng = random.Random(SEED + 3)
        for n in (2, 3):
            for _ in range(3):
                word = tuple(
                    rng.choice(range(1, n)) for _ in range(rng.randint(2, 4))
                )
                w = product_web(n, word)
                gs = sorted({first_boundary(child)
                             for child, _ in reduce_web(w).terms()})
                for g in gs:
                    _assert_conservation(w, g, set())

    def test_profiles_ignore_the_drawing(self):
        rng = random.Random(SEED + 4)
        checked = 0
        for n in (2, 3):
            for _ in range(5):
                word = tuple(
                    rng.choice(range(1, n)) for _ in range(rng.randint(1, 3))
                )
                w = product_web(n, word)
                prof = boundary_profile(w)
                for salt in (1, 2):
                    w2 = Web.from_map(w.pmap, salt=salt)
                    assert w2.code == w.code
                    assert boundary_profile(w2) == prof, (n, word, salt)
                    checked += 1
        assert checked >= 20

    def test_rerendered_square_still_balances(self):
        base = product_web(3, (1, 2, 1))
        prof = boundary_profile(base)
        bent = 0
        for salt in range(6):
            w = Web.from_map(base.pmap, salt=salt)
            assert boundary_profile(w) == prof
            _assert_conservation(w, bl("1,2,3:1,2,3"), set())
            if any(sum(t) for t in w.geom.edge_turns.values()):
                bent += 1
        # the point of re-rendering: some drawing must bend an edge past
        # vertical, or the turn bookkeeping went untested
        assert bent > 0
