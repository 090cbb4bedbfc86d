import pytest
from hypothesis import given
from hypothesis import strategies as st

from segsum import stem
from segsum.corpus import (
    CorpusFormatError,
    build_reference_summaries,
    build_vocabulary,
    ingest_tagged,
    load_wordlist,
    make_token,
    split_sentences,
)


class TestSplitSentences:
    def test_standard_delimiters(self):
        assert split_sentences("Great food. Bad service!") == ["Great food", " Bad service"]

    def test_empty_input(self):
        assert split_sentences("") == []

    def test_no_delimiters(self):
        assert split_sentences("No delimiters here") == ["No delimiters here"]

    def test_question_mark(self):
        assert split_sentences("Good? Bad.") == ["Good", " Bad"]

    @given(st.text())
    def test_idempotent_on_own_output(self, text):
        once = split_sentences(text)
        for fragment in once:
            assert split_sentences(fragment) == [fragment]


class TestTokens:
    def test_adjective_is_sentiment_and_stemmed(self):
        t = make_token("delicious", "JJ")
        assert t.stem == "delici"
        assert t.is_sentiment

    def test_noun_is_not_sentiment(self):
        assert not make_token("coffee", "NN").is_sentiment

    def test_extra_list_overrides_tag(self):
        assert make_token("love", "VB").is_sentiment  # default extra list
        assert not make_token("love", "VB", extra_sentiment=frozenset()).is_sentiment

    def test_adverb_is_sentiment(self):
        assert make_token("really", "RB").is_sentiment

    def test_unknown_tag_warns_and_is_not_sentiment(self, caplog):
        import logging
        with caplog.at_level(logging.WARNING):
            t = make_token("weird", "XYZ")
        assert not t.is_sentiment
        assert "unknown POS tag" in caplog.text

    def test_stems_are_lowercase_table3_forms(self):
        for surface, expected in [("Beautiful", "beauti"), ("Romantic", "romant"),
                                  ("Sauces", "sauc"), ("atmosphere", "atmospher")]:
            t = make_token(surface, "NN")
            assert t.stem == expected
            assert t.stem == t.stem.lower() and t.stem

    def test_pure_function_of_inputs(self):
        assert make_token("great", "JJ") == make_token("great", "JJ")


class TestIngest:
    def test_jsonl_roundtrip(self, jsonl_corpus_file):
        path = jsonl_corpus_file([{
            "id": "a", "entity_id": "e",
            "sentences": [[["Great", "JJ"], ["food", "NN"]]],
            "pros": ["great food"], "cons": [],
        }])
        corpus = ingest_tagged(path, "jsonl")
        assert len(corpus.reviews) == 1
        tokens = corpus.reviews[0].sentences[0].tokens
        assert [t.stem for t in tokens] == ["great", "food"]
        assert [t.is_sentiment for t in tokens] == [True, False]

    def test_jsonl_parse_error_carries_line_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "a", "entity_id": "e", "sentences": [[["x"]]]}\n')
        with pytest.raises(CorpusFormatError) as err:
            ingest_tagged(path, "jsonl")
        assert ":1:" in str(err.value)

    def test_conll_format(self, tmp_path):
        path = tmp_path / "c.conll"
        path.write_text(
            "#REVIEW r1 e1\n"
            "#PROS good food\n"
            "#CONS slow service\n"
            "Great\tJJ\nfood\tNN\n\n"
            "slow\tJJ\nservice\tNN\n"
        )
        corpus = ingest_tagged(path, "conll")
        review = corpus.reviews[0]
        assert review.entity_id == "e1"
        assert len(review.sentences) == 2
        assert review.pros == ["good food"]
        assert review.cons == ["slow service"]

    def test_conll_bad_token_line(self, tmp_path):
        path = tmp_path / "c.conll"
        path.write_text("#REVIEW r1 e1\nno-tab-here\n")
        with pytest.raises(CorpusFormatError) as err:
            ingest_tagged(path, "conll")
        assert ":2:" in str(err.value)


class TestVocabulary:
    def test_forced_partition_by_tag(self, sentence_factory):
        from segsum.corpus import Corpus, Review
        sent = sentence_factory([("good", "JJ"), ("food", "NN")])
        corpus = Corpus([Review("r", "e", [sent])])
        vocab = build_vocabulary(corpus, min_count=1, stopwords=frozenset())
        assert vocab.aspect_stems == ["food"]
        assert vocab.senti_stems == ["good"]

    def test_min_count_threshold(self, tiny_corpus):
        vocab = build_vocabulary(tiny_corpus, min_count=2, stopwords=frozenset())
        assert "staff" in vocab.aspect_index      # occurs twice
        assert "delici" not in vocab.senti_index  # occurs once
        assert vocab.drop_reasons["delici"] == "below_min_count"

    def test_stopwords_only_hit_aspect_channel(self, tiny_corpus):
        vocab = build_vocabulary(tiny_corpus, min_count=1, stopwords={"the", "good"})
        assert "the" not in vocab.aspect_index
        assert vocab.drop_reasons["the"] == "stopword"
        # "good" is a sentiment stem; stopword list does not touch it
        assert "good" in vocab.senti_index

    def test_index_spaces_disjoint(self, tiny_corpus):
        vocab = build_vocabulary(tiny_corpus, min_count=1, stopwords=frozenset())
        assert not set(vocab.aspect_index) & set(vocab.senti_index)

    def test_every_token_mapped_or_reason_recorded(self, tiny_corpus):
        vocab = build_vocabulary(tiny_corpus, min_count=2)
        for _, sentence in tiny_corpus.sentences():
            for token in sentence.tokens:
                channel, info = vocab.lookup(token)
                if channel is None:
                    assert info in ("stopword", "below_min_count", "out_of_vocabulary")

    def test_empty_corpus_rejected(self):
        from segsum.corpus import Corpus
        with pytest.raises(ValueError):
            build_vocabulary(Corpus([]), 1)


class TestReferenceSummaries:
    def test_case_insensitive_dedup(self, tiny_corpus):
        refs = build_reference_summaries(tiny_corpus)
        pros, cons = refs["e1"]
        assert pros == {"delicious food", "good food"}
        assert cons == {"rude staff", "slow staff"}

    def test_entity_without_pros(self, sentence_factory):
        from segsum.corpus import Corpus, Review
        corpus = Corpus([Review("r", "e", [sentence_factory([("ok", "JJ")])])])
        pros, cons = build_reference_summaries(corpus)["e"]
        assert pros == set() and cons == set()

    def test_set_union(self):
        from segsum.corpus import Corpus, Review
        corpus = Corpus([
            Review("r1", "e", [], pros=["a", "b"]),
            Review("r2", "e", [], pros=["b", "c"]),
        ])
        pros, _ = build_reference_summaries(corpus)["e"]
        assert pros == {"a", "b", "c"}


def test_load_wordlist(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("# comment\ngood\n\nbad\n")
    assert load_wordlist(path) == {"good", "bad"}


@given(st.text(alphabet=st.characters(min_codepoint=97, max_codepoint=122),
               min_size=1, max_size=15))
def test_stemmer_output_is_lowercase_nonempty_prefix_like(word):
    s = stem.stem(word)
    assert s and s == s.lower()
    assert len(s) <= len(word) + 1  # step 1b can append an 'e'
