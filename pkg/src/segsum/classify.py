"""Aspect and sentiment classification of extracted segments."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

POSITIVE, NEGATIVE = 0, 1


class UnclassifiableSegment(ValueError):
    """Segment has no in-vocabulary words to score."""


def classify_topic(segment, est, vocab) -> int:
    """Argmax-k segment score: non-sentiment words add log phi_hat[k, i],
    sentiment words add sum_j log phi_prime_hat[j, k, i]; out-of-vocabulary
    words contribute nothing. Ties break toward the lowest k."""
    T = est.phi_hat.shape[0]
    scores = np.zeros(T)
    scored = 0
    for token in segment.tokens:
        channel, idx = vocab.lookup(token)
        if channel == "aspect":
            scores += np.log(est.phi_hat[:, idx])
            scored += 1
        elif channel == "senti":
            scores += np.log(est.phi_prime_hat[:, :, idx]).sum(axis=0)
            scored += 1
    if scored == 0:
        raise UnclassifiableSegment(f"no in-vocabulary words in segment {segment.text!r}")
    return int(np.argmax(scores))


def classify_sentiment_sen(segment, y_senti, vocab):
    """Model-based classifier: polarity is the sum of y_senti[0]-y_senti[1]
    over the segment's sentiment-vocabulary words; negation flips the sign.
    Returns (sentiment index, polarity)."""
    polarity = 0.0
    for token in segment.tokens:
        channel, idx = vocab.lookup(token)
        if channel == "senti":
            polarity += float(y_senti[0, idx] - y_senti[1, idx])
    if segment.negated:
        polarity = -polarity
    return (POSITIVE if polarity >= 0 else NEGATIVE), polarity


@dataclass
class PolarityLexicon:
    """Stem -> signed score; unknown stems score 0."""

    scores: dict = field(default_factory=dict)

    def __post_init__(self):
        for word, score in self.scores.items():
            if not math.isfinite(score):
                raise ValueError(f"non-finite lexicon score for {word!r}")

    def score(self, stem: str) -> float:
        return self.scores.get(stem, 0.0)

    @classmethod
    def from_tsv(cls, path):
        scores = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ValueError(f"{path}:{lineno}: expected 'stem<TAB>score'")
                scores[parts[0]] = float(parts[1])
        return cls(scores)


def classify_sentiment_swn(segment, lexicon):
    """Lexicon-based classifier; same thresholding and negation as SEN."""
    polarity = 0.0
    for token in segment.tokens:
        if token.is_sentiment:
            polarity += lexicon.score(token.stem)
    if segment.negated:
        polarity = -polarity
    return (POSITIVE if polarity >= 0 else NEGATIVE), polarity


def label_aspects(segments, est, vocab):
    """classify_topic over a batch; unclassifiable segments are dropped.

    Returns (labeled segments, dropped segments).
    """
    labeled, dropped = [], []
    for seg in segments:
        try:
            seg.aspect = classify_topic(seg, est, vocab)
            labeled.append(seg)
        except UnclassifiableSegment:
            dropped.append(seg)
    return labeled, dropped
