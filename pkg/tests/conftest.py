import json

import pytest

from segsum.corpus import Corpus, Review, Sentence, make_token


def tagged_sentence(pairs, review_id="r1"):
    return Sentence([make_token(s, p) for s, p in pairs], review_id)


@pytest.fixture
def sentence_factory():
    return tagged_sentence


@pytest.fixture
def tiny_corpus():
    """Two reviews of one restaurant, hand-tagged."""
    def review(rid, entity, sents, pros=(), cons=()):
        return Review(rid, entity,
                      [tagged_sentence(s, rid) for s in sents],
                      list(pros), list(cons))

    r1 = review("r1", "e1", [
        [("the", "DT"), ("food", "NN"), ("is", "VBZ"), ("delicious", "JJ")],
        [("very", "RB"), ("good", "JJ"), ("food", "NN")],
        [("the", "DT"), ("staff", "NN"), ("is", "VBZ"), ("rude", "JJ")],
    ], pros=["delicious food"], cons=["rude staff"])
    r2 = review("r2", "e1", [
        [("food", "NN"), ("is", "VBZ"), ("good", "JJ")],
        [("the", "DT"), ("staff", "NN"), ("is", "VBZ"), ("slow", "JJ")],
    ], pros=["good food", "Delicious  Food"], cons=["slow staff"])
    return Corpus([r1, r2])


@pytest.fixture
def jsonl_corpus_file(tmp_path):
    def write(reviews, name="corpus.jsonl"):
        path = tmp_path / name
        with open(path, "w") as fh:
            for r in reviews:
                fh.write(json.dumps(r) + "\n")
        return path
    return write
