import pytest

from a2webs.perms import (
    all_perms,
    all_reduced_words,
    avoids,
    catalan,
    compose,
    count_avoiding,
    descents,
    first_reduced_word,
    identity_perm,
    inverse,
    kostka_three_column,
    perm_from_word,
    perm_length,
    times_s,
)


class TestBasics:
    def test_compose_and_inverse(self):
        w = (3, 1, 4, 2)
        assert compose(w, inverse(w)) == identity_perm(4)
        assert compose(inverse(w), w) == identity_perm(4)

    def test_times_s(self):
        assert times_s((1, 2, 3), 1) == (2, 1, 3)
        assert times_s((1, 2, 3), 2) == (1, 3, 2)
        with pytest.raises(ValueError):
            times_s((1, 2, 3), 3)

    def test_length_counts_inversions(self):
        assert perm_length((4, 3, 2, 1)) == 6
        assert perm_length(identity_perm(5)) == 0

    def test_descents(self):
        assert descents((2, 1, 3)) == [1]
        assert descents((3, 2, 1)) == [1, 2]


class TestReducedWords:
    def test_word_reconstructs(self):
        for w in all_perms(4):
            word = first_reduced_word(w)
            assert len(word) == perm_length(w)
            assert perm_from_word(4, word) == w

    def test_longest_element_s3(self):
        words = set(all_reduced_words((3, 2, 1)))
        assert words == {(1, 2, 1), (2, 1, 2)}

    def test_longest_element_s4_count(self):
        # classical count of reduced words of the longest element of S_4
        assert len(all_reduced_words((4, 3, 2, 1))) == 16

    def test_all_words_valid(self):
        w = (3, 1, 4, 2)
        for word in all_reduced_words(w):
            assert perm_from_word(4, word) == w
            assert len(word) == perm_length(w)


class TestPatterns:
    def test_avoids_basic(self):
        assert avoids((1, 2, 3), (3, 2, 1))
        assert not avoids((4, 3, 2, 1), (4, 3, 2, 1))
        assert not avoids((5, 1, 4, 3, 2), (4, 3, 2, 1))

    def test_4321_counts(self):
        assert [count_avoiding(n, (4, 3, 2, 1)) for n in range(1, 5)] == [1, 2, 6, 23]

    def test_4321_count_n5(self):
        assert count_avoiding(5, (4, 3, 2, 1)) == 103

    def test_321_counts_are_catalan(self):
        for n in range(1, 6):
            assert count_avoiding(n, (3, 2, 1)) == catalan(n)


class TestOracleAgreement:
    def test_catalan_values(self):
        assert [catalan(n) for n in range(6)] == [1, 1, 2, 5, 14, 42]

    def test_kostka_matches_avoidance(self):
        # two independent counts of the same dimension
        for n in range(1, 5):
            assert kostka_three_column(n) == count_avoiding(n, (4, 3, 2, 1))

    def test_kostka_n5(self):
        assert kostka_three_column(5) == 103
