import random

import pytest

from a2webs.exactmath import LaurentPoly, qint
from a2webs.spider import (
    WebCombo,
    apply_rule,
    find_reducible_face,
    generator_combo,
    hecke_generator,
    hecke_image,
    is_irreducible,
    product_web,
    reduce_web,
    reduce_with_trace,
    relation_suite,
    second_generator,
    second_generator_combo,
)
from a2webs.webcore import (
    Column,
    SliceDiagram,
    Web,
    concatenate,
    generator_web,
    identity_web,
)

SEED = 20260816


def gweb(n, i):
    return Web.from_slice(generator_web(n, i))


class TestFeatures:
    def test_identity_is_irreducible(self):
        assert find_reducible_face(Web.from_slice(identity_web(3))) is None

    def test_generator_is_irreducible(self):
        assert is_irreducible(gweb(3, 1))

    def test_double_generator_has_bigon(self):
        w = product_web(2, (1, 1))
        feat = find_reducible_face(w)
        assert feat is not None and feat[0] == "bigon"

    def test_triple_product_has_square(self):
        feat = find_reducible_face(product_web(3, (1, 2, 1)))
        assert feat is not None and feat[0] == "square"

    def test_drawn_loop_takes_priority(self):
        circle = SliceDiagram(2, (
            Column(2, "cup", ("R", "L")),
            Column(2, "cap", ("R", "L")),
        ))
        w = Web.from_slice(concatenate(circle, generator_web(2, 1)))
        assert find_reducible_face(w) == ("loop",)


class TestLoopRule:
    def test_circle_gives_three_units(self):
        circle = SliceDiagram(1, (
            Column(2, "cup", ("R", "L")),
            Column(2, "cap", ("R", "L")),
        ))
        combo = reduce_web(Web.from_slice(circle))
        [(w, coeff)] = combo.terms()
        assert w == Web.from_slice(identity_web(1))
        assert coeff == qint(3)


class TestBigonRule:
    def test_generator_squared(self):
        combo = reduce_web(product_web(2, (1, 1)))
        [(w, coeff)] = combo.terms()
        assert w == gweb(2, 1)
        assert coeff == qint(2)

    def test_combo_product_matches(self):
        e = generator_combo(3, 2)
        assert e * e == e.scale(qint(2))


class TestTripleProduct:
    def test_reduction_support(self):
        combo = reduce_web(product_web(3, (1, 2, 1)))
        assert combo.support_size() == 2
        assert combo.coeff(gweb(3, 1)) == LaurentPoly.one()
        d2 = second_generator(3, 1)
        assert combo.coeff(d2) == LaurentPoly.one()

    def test_trace_is_one_square_step(self):
        w = product_web(3, (1, 2, 1))
        combo, trace = reduce_with_trace(w)
        node = trace.node(w.code)
        assert node.feature[0] == "square"
        assert len(node.outcomes) == 2
        children = {o.child for o in node.outcomes}
        assert children == {gweb(3, 1), second_generator(3, 1)}
        for o in node.outcomes:
            assert o.coeff == LaurentPoly.one()
            assert trace.node(o.child.code).feature is None

    def test_second_generator_shape(self):
        d2 = second_generator(3, 1)
        assert d2.pmap.internal_vertex_count == 2
        assert len(d2.pmap.edges) == 6
        assert len(d2.pmap.components()) == 2
        assert d2 not in (gweb(3, 1), gweb(3, 2))

    def test_both_routes_agree(self):
        lo = reduce_web(product_web(4, (2, 3, 2))) - generator_combo(4, 2)
        hi = reduce_web(product_web(4, (3, 2, 3))) - generator_combo(4, 3)
        assert lo == hi


class TestThetaCollapse:
    def test_second_generator_squared(self):
        d2 = second_generator(3, 1)
        prod = Web.from_slice(concatenate(d2.diagram, d2.diagram))
        combo, trace = reduce_with_trace(prod)
        [(w, coeff)] = combo.terms()
        assert w == d2
        assert coeff == qint(2) * qint(3)
        node = trace.node(prod.code)
        assert node.feature[0] == "bigon"
        (outcome,) = node.outcomes
        assert len(outcome.closed_chains) == 1

    def test_second_generator_combo_square(self):
        d2 = second_generator_combo(3, 1)
        assert d2 * d2 == d2.scale(qint(2) * qint(3))


class TestFourStrandExample:
    def test_mixed_product(self):
        # the residual web here is a basis element that is not a
        # monomial in the generators
        d22 = second_generator(4, 2)
        prod = Web.from_slice(
            concatenate(
                generator_web(4, 2),
                concatenate(generator_web(4, 1), d22.diagram),
            )
        )
        combo = reduce_web(prod)
        assert combo.support_size() == 2
        assert combo.coeff(d22) == LaurentPoly.one()
        [(other, coeff)] = [(w, c) for w, c in combo.terms() if w != d22]
        assert coeff == LaurentPoly.one()
        assert is_irreducible(other)
        assert other.n == 4 and other != second_generator(4, 1)


class TestClosure:
    def test_three_strand_span_has_six_webs(self):
        seen = {Web.from_slice(identity_web(3)).code}
        frontier = [()]
        while frontier:
            word = frontier.pop()
            if len(word) >= 4:
                continue
            for i in (1, 2):
                nxt = word + (i,)
                for w, _ in reduce_web(product_web(3, nxt)).terms():
                    if w.code not in seen:
                        seen.add(w.code)
                frontier.append(nxt)
        assert len(seen) == 6


class TestRelations:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_suite_passes(self, n):
        for name, ok in relation_suite(n):
            assert ok, name

    def test_far_commutation(self):
        a, b = generator_combo(4, 1), generator_combo(4, 3)
        assert a * b == b * a

    def test_braid(self):
        assert hecke_image(3, (1, 2, 1)) == hecke_image(3, (2, 1, 2))

    def test_hecke_quadratic(self):
        g = hecke_generator(2, 1)
        q = LaurentPoly.t_power(4)
        assert g * g == g.scale(q - LaurentPoly.one()) + WebCombo.unit(2).scale(q)


class TestConfluence:
    def test_pairwise_vs_single_reduction(self):
        rng = random.Random(SEED)
        for _ in range(15):
            n = rng.choice([2, 3, 4])
            word = [rng.randrange(1, n) for _ in range(rng.randrange(1, 6))]
            via_combo = WebCombo.unit(n)
            for i in word:
                via_combo = via_combo * generator_combo(n, i)
            assert via_combo == reduce_web(product_web(n, word))


class TestComboAlgebra:
    def test_linear_ops(self):
        e1, e2 = generator_combo(3, 1), generator_combo(3, 2)
        z = e1 - e1
        assert z.is_zero()
        assert (e1 + e2).support_size() == 2
        assert (e1 + e2) - e2 == e1
        assert e1.scale(2).coeff(gweb(3, 1)) == LaurentPoly.const(2)

    def test_power(self):
        e = generator_combo(2, 1)
        assert e ** 3 == e.scale(qint(2) * qint(2))

    def test_unit(self):
        e = generator_combo(3, 2)
        one = WebCombo.unit(3)
        assert one * e == e * one == e
