import random
from fractions import Fraction

import pytest

from a2webs.exactmath import eval_q1
from a2webs.immanants import (
    ExactMatrix,
    evaluate_immanant,
    immanant_table,
    irreducible_webs,
    parabolic_image,
    theta_image,
)
from a2webs.labelings import BoundaryLabeling, enumerate_labelings
from a2webs.perms import (
    all_perms,
    all_reduced_words,
    count_avoiding,
    kostka_three_column,
    perm_length,
)
from a2webs.spider import (
    WebCombo,
    generator_combo,
    hecke_generator,
    is_irreducible,
    product_web,
    second_generator_combo,
)
from a2webs.webcore import Web, WebError, generator_web, identity_web

SEED = 20260816


def idweb(n):
    return Web.from_slice(identity_web(n))


def rational_matrix(n, rng):
    return ExactMatrix.from_rows(
        [
            [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)]
            for _ in range(n)
        ]
    )


class TestExactMatrix:
    def test_rejects_ragged(self):
        with pytest.raises(WebError):
            ExactMatrix.from_rows([[1, 2], [3]])

    def test_identity_det(self):
        assert ExactMatrix.identity(4).det() == 1

    def test_det_2x2(self):
        X = ExactMatrix.from_rows([[1, 2], [3, 4]])
        assert X.det() == -2

    def test_det_singular(self):
        X = ExactMatrix.from_rows([[1, 2], [2, 4]])
        assert X.det() == 0

    def test_det_multiplicative(self):
        rng = random.Random(SEED)
        for _ in range(5):
            A, B = rational_matrix(3, rng), rational_matrix(3, rng)
            C = ExactMatrix.from_rows(
                [
                    [
                        sum(A.entry(i, k) * B.entry(k, j) for k in range(3))
                        for j in range(3)
                    ]
                    for i in range(3)
                ]
            )
            assert C.det() == A.det() * B.det()

    def test_submatrix(self):
        X = ExactMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
        assert X.submatrix((0, 2), (1, 2)).rows == ((2, 3), (8, 10))

    def test_json_roundtrip(self):
        X = ExactMatrix.from_rows([[Fraction(1, 3), 2], [0, Fraction(-5, 7)]])
        assert ExactMatrix.from_json_obj(X.to_json_obj()) == X

    def test_json_rejects_garbage(self):
        with pytest.raises(WebError):
            ExactMatrix.from_json_obj({"rows": [["1", "x"], ["2", "3"]]})
        with pytest.raises(WebError):
            ExactMatrix.from_json_obj({"n": 3, "rows": [["1"]]})


class TestThetaImage:
    def test_transposition_image(self):
        got = theta_image((2, 1))
        want = hecke_generator(2, 1)
        assert got == want

    def test_identity_image(self):
        assert theta_image((1, 2, 3)) == WebCombo.unit(3)

    def test_rejects_non_reduced_word(self):
        with pytest.raises(WebError):
            theta_image((2, 1), word=(1, 1, 1))

    def test_reduced_word_independence(self):
        rng = random.Random(SEED)
        perms = [(3, 2, 1)] + [
            tuple(rng.sample(range(1, 5), 4)) for _ in range(4)
        ]
        for w in perms:
            words = all_reduced_words(w)
            base = theta_image(w, word=words[0])
            for word in words[1:]:
                assert theta_image(w, word=word) == base, (w, word)


class TestIrreducibleWebs:
    def test_counts_match_both_oracles(self):
        expected = {1: 1, 2: 2, 3: 6, 4: 23}
        for n, count in expected.items():
            webs = irreducible_webs(n)
            assert len(webs) == count
            assert count_avoiding(n, (4, 3, 2, 1)) == count
            assert kostka_three_column(n) == count

    @pytest.mark.slow
    def test_count_at_five(self):
        assert len(irreducible_webs(5)) == 103
        assert count_avoiding(5, (4, 3, 2, 1)) == 103
        assert kostka_three_column(5) == 103

    def test_all_irreducible_and_sorted(self):
        webs = irreducible_webs(3)
        assert all(is_irreducible(D) for D in webs)
        assert [D.code for D in webs] == sorted(D.code for D in webs)

    def test_bound_enforced(self):
        with pytest.raises(WebError):
            irreducible_webs(6)


class TestImmanantTable:
    def test_two_strand_table(self):
        t = immanant_table(2)
        e, s1 = (1, 2), (2, 1)
        assert t.coefficient(idweb(2), e) == 1
        assert t.coefficient(idweb(2), s1) == -1
        E1 = Web.from_slice(generator_web(2, 1))
        assert t.coefficient(E1, e) == 0
        assert t.coefficient(E1, s1) == 1

    def test_columns_rebuild_theta(self):
        t = immanant_table(3)
        for w in all_perms(3):
            col = t.combo_at_q1(w)
            combo = theta_image(w)
            direct = {
                web.code: int(eval_q1(c))
                for web, c in combo.terms()
                if eval_q1(c)
            }
            assert col == direct, w

    def test_identity_row_is_sign_character(self):
        for n in (2, 3, 4):
            t = immanant_table(n)
            row = t.row(idweb(n))
            assert len(row) == len(list(all_perms(n)))
            for w, v in row.items():
                assert v == (-1) ** perm_length(w), (n, w)

    def test_unknown_web_rejected(self):
        t = immanant_table(2)
        with pytest.raises(WebError):
            t.row(product_web(2, (1, 1)))


class TestEvaluateImmanant:
    def test_one_strand(self):
        X = ExactMatrix.from_rows([[Fraction(7, 3)]])
        assert evaluate_immanant(idweb(1), X) == Fraction(7, 3)

    def test_two_strand_values(self):
        X = ExactMatrix.from_rows([[1, 2], [3, 4]])
        assert evaluate_immanant(idweb(2), X) == X.det()
        E1 = Web.from_slice(generator_web(2, 1))
        assert evaluate_immanant(E1, X) == 6  # upper right times lower left

    def test_size_mismatch(self):
        with pytest.raises(WebError):
            evaluate_immanant(idweb(3), ExactMatrix.identity(2))

    def test_identity_matrix_values(self):
        for n in (2, 3):
            X = ExactMatrix.identity(n)
            for D in irreducible_webs(n):
                want = 1 if D.code == idweb(n).code else 0
                assert evaluate_immanant(D, X) == want

    def test_non_tnn_matrix_can_go_negative(self):
        # a permutation matrix is not totally nonnegative; the theorem
        # promises nothing and indeed some immanant dips below zero
        w = (4, 3, 2, 1)
        X = ExactMatrix.from_rows(
            [[1 if w[i] == j + 1 else 0 for j in range(4)] for i in range(4)]
        )
        values = [evaluate_immanant(D, X) for D in irreducible_webs(4)]
        assert min(values) < 0

    def test_determinant_identity(self):
        rng = random.Random(SEED + 5)
        for n in (2, 3, 4):
            ones = BoundaryLabeling((1,) * n, (1,) * n)
            for _ in range(3):
                X = rational_matrix(n, rng)
                total = Fraction(0)
                for D in irreducible_webs(n):
                    count = len(enumerate_labelings(D, ones))
                    if count:
                        total += count * evaluate_immanant(D, X)
                assert total == X.det(), n


class TestParabolicImage:
    def test_width_two_is_generator(self):
        for n, i in [(3, 1), (3, 2), (4, 2), (4, 3)]:
            assert parabolic_image(n, i, i + 1) == generator_combo(n, i)

    def test_width_three_is_double_tripod(self):
        for n, i in [(3, 1), (4, 1), (4, 2)]:
            assert parabolic_image(n, i, i + 2) == second_generator_combo(n, i)

    def test_width_four_vanishes(self):
        assert parabolic_image(4, 1, 4).is_zero()

    def test_bad_window_rejected(self):
        with pytest.raises(WebError):
            parabolic_image(3, 2, 2)
        with pytest.raises(WebError):
            parabolic_image(3, 1, 4)
