import math

import numpy as np
import pytest

from segsum.classify import PolarityLexicon
from segsum.corpus import Vocabulary, make_token
from segsum.filters import (
    FilterConfig,
    ProcedureError,
    filter_aw,
    filter_rank,
    filter_sw,
    parse_procedure,
    rank_score,
    run_procedure,
)
from segsum.model import PosteriorEstimates
from segsum.patterns import Segment

VOCAB = Vocabulary(aspect_stems=["decor", "food", "staff", "wine"],
                   senti_stems=["bad", "good", "nice", "rude"])


def make_seg(pairs, negated=False, aspect=None, sentiment=None):
    tokens = [make_token(surface, tag) for surface, tag in pairs]
    return Segment(tokens=tokens, review_id="r", entity_id="e",
                   sentence_index=0, start=0, end=len(tokens), pattern_id=5,
                   negated=negated, aspect=aspect, sentiment=sentiment)


def normalized(rng, shape):
    a = rng.random(shape) + 0.05
    return a / a.sum(axis=-1, keepdims=True)


def make_est(seed=0, T=2):
    rng = np.random.default_rng(seed)
    return PosteriorEstimates(
        pi_hat=normalized(rng, (1, 2)),
        theta_hat=normalized(rng, (1, T)),
        phi_hat=normalized(rng, (T, VOCAB.num_aspect_words)),
        phi_prime_hat=normalized(rng, (2, T, VOCAB.num_senti_words)),
    )


def random_segments(rng, n, with_sentiment=False):
    aspect_words = [("decor", "NN"), ("food", "NN"), ("staff", "NN"), ("wine", "NN")]
    senti_words = [("bad", "JJ"), ("good", "JJ"), ("nice", "JJ"), ("rude", "JJ")]
    segs = []
    for _ in range(n):
        pairs = [senti_words[rng.integers(4)], aspect_words[rng.integers(4)]]
        segs.append(make_seg(pairs, aspect=int(rng.integers(2)),
                             sentiment=int(rng.integers(2)) if with_sentiment else None))
    return segs


class TestAw:
    def test_full_top_list_keeps_everything_with_aspect_word(self):
        est = make_est()
        keep = make_seg([("good", "JJ"), ("food", "NN")], aspect=0)
        drop = make_seg([("good", "JJ")], aspect=0)  # no aspect-channel word
        assert filter_aw([keep, drop], est, VOCAB, top_x=4) == [keep]

    def test_top_one_keeps_only_best_word(self):
        est = make_est(seed=1)
        best = VOCAB.aspect_stems[int(np.argmax(est.phi_hat[0]))]
        other = next(s for s in VOCAB.aspect_stems if s != best)
        a = make_seg([("good", "JJ"), (best, "NN")], aspect=0)
        b = make_seg([("good", "JJ"), (other, "NN")], aspect=0)
        assert filter_aw([a, b], est, VOCAB, top_x=1) == [a]

    def test_requires_aspect_labels(self):
        with pytest.raises(ProcedureError):
            filter_aw([make_seg([("food", "NN")])], make_est(), VOCAB, 2)

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(7)
        est = make_est(seed=7)
        for top_x in (1, 2, 3):
            segs = random_segments(rng, 30)
            got = filter_aw(segs, est, VOCAB, top_x)
            expected = []
            for seg in segs:
                order = sorted(range(VOCAB.num_aspect_words),
                               key=lambda i: (-est.phi_hat[seg.aspect][i], i))
                top = {VOCAB.aspect_stems[i] for i in order[:top_x]}
                if any(t.stem in top for t in seg.tokens if not t.is_sentiment):
                    expected.append(seg)
            assert got == expected

    def test_idempotent(self):
        rng = np.random.default_rng(8)
        est = make_est(seed=8)
        segs = random_segments(rng, 25)
        once = filter_aw(segs, est, VOCAB, 2)
        assert filter_aw(once, est, VOCAB, 2) == once


class TestSw:
    def test_brute_force_oracle(self):
        rng = np.random.default_rng(9)
        est = make_est(seed=9)
        for top_y in (1, 2, 3):
            segs = random_segments(rng, 30, with_sentiment=True)
            got = filter_sw(segs, est, VOCAB, top_y)
            expected = []
            for seg in segs:
                probs = est.phi_prime_hat[seg.sentiment, seg.aspect]
                order = sorted(range(VOCAB.num_senti_words),
                               key=lambda i: (-probs[i], i))
                top = {VOCAB.senti_stems[i] for i in order[:top_y]}
                if any(t.stem in top for t in seg.tokens if t.is_sentiment):
                    expected.append(seg)
            assert got == expected

    def test_requires_sentiment_labels(self):
        seg = make_seg([("good", "JJ"), ("food", "NN")], aspect=0)
        with pytest.raises(ProcedureError):
            filter_sw([seg], make_est(), VOCAB, 2)

    def test_commutes_with_aw(self):
        rng = np.random.default_rng(10)
        est = make_est(seed=10)
        segs = random_segments(rng, 40, with_sentiment=True)
        ab = filter_sw(filter_aw(segs, est, VOCAB, 2), est, VOCAB, 2)
        ba = filter_aw(filter_sw(segs, est, VOCAB, 2), est, VOCAB, 2)
        assert ab == ba


class TestRank:
    def test_keep_fraction_one_is_identity(self):
        rng = np.random.default_rng(11)
        est = make_est(seed=11)
        segs = random_segments(rng, 12, with_sentiment=True)
        assert filter_rank(segs, est, VOCAB, keep_fraction=1.0) == segs

    def test_floor_arithmetic(self):
        est = make_est(seed=12)
        # 5 segments in one group at keep=0.5: drop floor(2.5)=2, keep 3
        segs = [make_seg([("good", "JJ"), ("food", "NN")], aspect=0, sentiment=0)
                for _ in range(5)]
        assert len(filter_rank(segs, est, VOCAB, 0.5)) == 3
        # a singleton group never drops
        one = [make_seg([("good", "JJ")], aspect=0, sentiment=0)]
        assert filter_rank(one, est, VOCAB, 0.5) == one

    def test_sort_oracle(self):
        rng = np.random.default_rng(13)
        est = make_est(seed=13)
        segs = random_segments(rng, 30, with_sentiment=True)
        got = filter_rank(segs, est, VOCAB, 0.5)

        groups = {}
        for pos, seg in enumerate(segs):
            groups.setdefault((seg.sentiment, seg.aspect), []).append(pos)
        keep = set()
        for positions in groups.values():
            n = len(positions)
            n_drop = math.floor(0.5 * n)
            scored = sorted(positions,
                            key=lambda p: (-rank_score(segs[p], est, VOCAB), p))
            keep.update(scored[: n - n_drop])
        assert got == [segs[p] for p in sorted(keep)]

    def test_rank_score_averages_per_word(self):
        est = make_est(seed=14)
        seg = make_seg([("good", "JJ"), ("food", "NN")], aspect=1, sentiment=0)
        i = VOCAB.senti_index["good"]
        a = VOCAB.aspect_index["food"]
        expected = (math.log(est.phi_prime_hat[0, 1, i])
                    + math.log(est.phi_hat[1, a])) / 2
        assert rank_score(seg, est, VOCAB) == pytest.approx(expected, rel=1e-12)

    def test_rank_score_empty_is_minus_inf(self):
        est = make_est(seed=15)
        seg = make_seg([("unknownword", "NN")], aspect=0, sentiment=0)
        assert rank_score(seg, est, VOCAB) == -math.inf


class TestProcedureParsing:
    @pytest.mark.parametrize("name", [
        "Baseline+SEN", "Baseline+SWN", "AW+SEN", "AW+SWN",
        "AW+SEN+SW", "AW+SWN+SW", "AW+SEN+SW+RANK"])
    def test_valid_names(self, name):
        proc = parse_procedure(name)
        assert proc.name == name
        assert proc.stages == tuple(name.split("+"))

    @pytest.mark.parametrize("name,fragment", [
        ("Baseline", "exactly one"),
        ("AW+SEN+SWN", "exactly one"),
        ("AW+XYZ+SEN", "unknown stage"),
        ("SW+SEN", "after the classifier"),
        ("RANK+SWN", "after the classifier"),
    ])
    def test_invalid_names(self, name, fragment):
        with pytest.raises(ProcedureError) as err:
            parse_procedure(name)
        assert fragment in str(err.value)


class TestRunProcedure:
    LEX = PolarityLexicon({"good": 1.0, "nice": 0.5, "bad": -1.0, "rude": -1.0})
    Y = np.array([[-1.0, 1.0, 0.5, -1.0],   # bad good nice rude
                  [1.0, -1.0, -0.5, 1.0]])

    def test_baseline_swn_partitions_all(self):
        est = make_est(seed=16)
        segs = [make_seg([("good", "JJ"), ("food", "NN")], aspect=0),
                make_seg([("rude", "JJ"), ("staff", "NN")], aspect=1),
                make_seg([("nice", "JJ"), ("wine", "NN")], aspect=0)]
        pos, neg = run_procedure("Baseline+SWN", segs, est, VOCAB, lexicon=self.LEX)
        assert pos == [segs[0], segs[2]]
        assert neg == [segs[1]]

    def test_sen_and_swn_agree_on_aligned_inputs(self):
        est = make_est(seed=17)
        segs = [make_seg([("good", "JJ"), ("food", "NN")], aspect=0),
                make_seg([("bad", "JJ"), ("food", "NN")], aspect=0)]
        pos_a, neg_a = run_procedure("Baseline+SEN", segs, est, VOCAB, y_senti=self.Y)
        pos_b, neg_b = run_procedure("Baseline+SWN", segs, est, VOCAB, lexicon=self.LEX)
        assert [s.text for s in pos_a] == [s.text for s in pos_b]
        assert [s.text for s in neg_a] == [s.text for s in neg_b]

    def test_composed_procedure_is_ordered_subset(self):
        rng = np.random.default_rng(18)
        est = make_est(seed=18)
        segs = random_segments(rng, 40)
        pos, neg = run_procedure("AW+SEN+SW+RANK", segs, est, VOCAB,
                                 y_senti=self.Y, config=FilterConfig(2, 2, 0.5))
        surviving = pos + neg
        index = {id(s): i for i, s in enumerate(segs)}
        assert all(id(s) in index for s in surviving)
        assert [index[id(s)] for s in pos] == sorted(index[id(s)] for s in pos)
        for s in surviving:
            assert s.sentiment in (0, 1)

    def test_missing_resources_raise(self):
        est = make_est(seed=19)
        segs = [make_seg([("good", "JJ"), ("food", "NN")], aspect=0)]
        with pytest.raises(ProcedureError):
            run_procedure("Baseline+SEN", segs, est, VOCAB)  # no y_senti
        with pytest.raises(ProcedureError):
            run_procedure("Baseline+SWN", segs, est, VOCAB)  # no lexicon
