import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import df_oracle, pruned_terms_oracle, tfidf_oracle
from sentimin.errors import EmptyCorpus, InputError, UnknownTerm
from sentimin.features import (
    PruneBounds,
    Vocabulary,
    build_vocabulary,
    idf,
    prune_by_df,
    tfidf_vector,
)

ALPHABET = list("abcdef")
corpora = st.lists(st.lists(st.sampled_from(ALPHABET), max_size=6), min_size=1, max_size=20)


def vocab_with(df, n_docs):
    return Vocabulary(df, n_docs)


class TestBuild:
    def test_enumeration(self):
        v = build_vocabulary([["a", "b"], ["b", "c"]])
        assert v.terms == ("a", "b", "c")
        assert dict(v.df) == {"a": 1, "b": 2, "c": 1}
        assert v.n_docs == 2

    def test_df_not_term_count(self):
        assert build_vocabulary([["a", "a", "a"]]).df["a"] == 1

    def test_empty_documents(self):
        v = build_vocabulary([[], []])
        assert v.terms == () and v.n_docs == 2

    def test_no_documents(self):
        with pytest.raises(EmptyCorpus):
            build_vocabulary([])

    @given(corpora, st.randoms())
    def test_permutation_invariant(self, docs, rnd):
        shuffled = list(docs)
        rnd.shuffle(shuffled)
        assert build_vocabulary(docs) == build_vocabulary(shuffled)

    @given(corpora)
    def test_matches_df_oracle(self, docs):
        v = build_vocabulary(docs)
        assert dict(v.df) == df_oracle(docs)
        assert list(v.terms) == sorted(v.terms)


class TestPrune:
    def test_above_max_removed(self):
        v = prune_by_df(vocab_with({"t": 95, "u": 90}, 100), PruneBounds(0.0, 0.90))
        assert v.terms == ("u",)

    def test_identity_window(self):
        v = vocab_with({"a": 1, "b": 3}, 3)
        assert prune_by_df(v, PruneBounds(0, 1)) == v

    def test_lower_bound_at_700_docs(self):
        v = prune_by_df(vocab_with({"six": 6, "seven": 7}, 700), PruneBounds())
        assert v.terms == ("seven",)
        assert v.n_docs == 700

    def test_bounds_are_inclusive_exactly(self):
        v = vocab_with({"lo": 99, "below": 98, "hi": 9000, "above": 9001}, 10000)
        assert prune_by_df(v, PruneBounds(0.0099, 0.90)).terms == ("hi", "lo")

    def test_invalid_bounds(self):
        with pytest.raises(ValueError):
            PruneBounds(0.5, 0.4)
        with pytest.raises(ValueError):
            PruneBounds(-0.1, 0.5)

    @given(corpora, st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
    def test_idempotent_and_antimonotone(self, docs, a, b, c, d):
        outer_lo, inner_lo = sorted((a, b))
        inner_hi, outer_hi = sorted((c, d))
        if inner_lo > inner_hi:
            return
        v = build_vocabulary(docs)
        outer = PruneBounds(outer_lo, outer_hi)
        inner = PruneBounds(inner_lo, inner_hi)
        once = prune_by_df(v, outer)
        assert prune_by_df(once, outer) == once
        assert set(prune_by_df(v, inner).terms) <= set(once.terms)
        assert list(once.terms) == pruned_terms_oracle(docs, outer_lo, outer_hi)


class TestIdf:
    def test_values(self):
        assert idf(vocab_with({"t": 1}, 2), "t") == pytest.approx(0.6931, abs=1e-4)
        assert idf(vocab_with({"t": 5}, 5), "t") == 0.0
        assert idf(vocab_with({"t": 70}, 700), "t") == pytest.approx(math.log(10), rel=1e-15)
        assert idf(vocab_with({"t": 70}, 700), "t") == pytest.approx(2.3026, abs=1e-4)

    def test_unknown(self):
        with pytest.raises(UnknownTerm):
            idf(vocab_with({"t": 1}, 2), "x")


class TestTfidf:
    def test_hand_example(self):
        v = vocab_with({"a": 1, "b": 2}, 2)
        vec = tfidf_vector(["a", "a", "b"], v)
        assert vec == {"a": 2 * math.log(2)}
        assert vec["a"] == pytest.approx(1.3863, abs=1e-4)

    def test_empty_and_oov(self):
        v = vocab_with({"a": 1}, 2)
        assert tfidf_vector([], v) == {}
        assert tfidf_vector(["zz", "yy"], v) == {}

    @given(corpora, st.lists(st.sampled_from(ALPHABET + ["zz"]), max_size=8))
    def test_matches_nested_loop_oracle(self, docs, tokens):
        v = build_vocabulary(docs)
        assert tfidf_vector(tokens, v) == tfidf_oracle(tokens, docs, v.terms)

    @given(corpora)
    def test_ubiquitous_terms_never_weighted(self, docs):
        v = build_vocabulary(docs)
        everywhere = {t for t in v.terms if v.df[t] == v.n_docs}
        for t in everywhere:
            assert idf(v, t) == 0.0
        for doc in docs:
            vec = tfidf_vector(doc, v)
            assert not everywhere & vec.keys()
            assert all(w > 0 and math.isfinite(w) for w in vec.values())


class TestPersistence:
    def test_round_trip(self):
        v = build_vocabulary([["promo", "mantap"], ["cara", "ribet"], ["promo"]])
        again = Vocabulary.from_json(v.to_json())
        assert again == v and again.terms == v.terms
        assert v.to_dict() == {"n_docs": 3, "terms": [
            {"term": "cara", "df": 1}, {"term": "mantap", "df": 1},
            {"term": "promo", "df": 2}, {"term": "ribet", "df": 1}]}

    @pytest.mark.parametrize("text", [
        "{", "[]", '{"n_docs": 2}', '{"n_docs": 2, "terms": [{"term": "a", "df": 3}]}',
        '{"n_docs": 2, "terms": [{"term": "a", "df": 1}, {"term": "a", "df": 1}]}',
    ])
    def test_rejects_bad_input(self, text):
        with pytest.raises(InputError):
            Vocabulary.from_json(text)

    def test_df_bounds_enforced(self):
        with pytest.raises(ValueError):
            Vocabulary({"a": 0}, 3)
