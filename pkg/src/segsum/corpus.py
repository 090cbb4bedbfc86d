"""Review corpus ingestion and preprocessing.

Reviews arrive pre-tagged (Penn Treebank tags). This module splits raw text
into sentences, stems tokens, marks sentiment words, builds the two word
vocabularies (sentiment / non-sentiment) and aggregates the per-entity
pros/cons gold standards.
"""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field

from . import stem as _stem

log = logging.getLogger(__name__)

# Penn Treebank word-level tagset plus common punctuation tags.
PENN_TAGS = frozenset({
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD",
    "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR",
    "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP",
    "VBZ", "WDT", "WP", "WP$", "WRB", ".", ",", ":", "``", "''", "-LRB-",
    "-RRB-", "$", "#",
})

SENTIMENT_TAG_PREFIXES = ("JJ", "RB")

# Extra sentiment words that are neither adjective nor adverb but still
# convey opinion (stemmed forms).
DEFAULT_EXTRA_SENTIMENT = frozenset({"love", "hate", "enjoy", "worth", "disappoint"})

DEFAULT_STOPWORDS = frozenset("""
a an and are as at be been but by did do does for from had has have he her
him his i if in into is it its me my of on or our she so that the their
them they this to was we were what which who will with would you your
""".split())


class CorpusFormatError(ValueError):
    """Raised when an input file cannot be parsed; carries the line number."""

    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


@dataclass(frozen=True)
class Token:
    surface: str
    stem: str
    pos: str
    is_sentiment: bool


@dataclass
class Sentence:
    tokens: list
    review_id: str


@dataclass
class Review:
    id: str
    entity_id: str
    sentences: list
    pros: list = field(default_factory=list)
    cons: list = field(default_factory=list)


@dataclass
class Corpus:
    reviews: list

    def sentences(self):
        for review in self.reviews:
            for sentence in review.sentences:
                yield review, sentence

    @property
    def num_sentences(self):
        return sum(len(r.sentences) for r in self.reviews)


def make_token(surface: str, pos: str, extra_sentiment=DEFAULT_EXTRA_SENTIMENT) -> Token:
    stemmed = _stem.stem(surface.lower())
    if pos not in PENN_TAGS:
        log.warning("unknown POS tag %r for token %r; treated as non-sentiment", pos, surface)
        return Token(surface, stemmed, pos, False)
    is_sentiment = pos.startswith(SENTIMENT_TAG_PREFIXES) or stemmed in extra_sentiment
    return Token(surface, stemmed, pos, is_sentiment)


def split_sentences(raw_review_text: str) -> list:
    """Split on '.', '!' and '?'; delimiters removed, blank fragments dropped."""
    fragments = re.split(r"[.!?]", raw_review_text)
    return [f for f in fragments if f.strip()]


def ingest_tagged(path, format: str = "jsonl",
                  extra_sentiment=DEFAULT_EXTRA_SENTIMENT) -> Corpus:
    if format == "jsonl":
        return _ingest_jsonl(path, extra_sentiment)
    if format == "conll":
        return _ingest_conll(path, extra_sentiment)
    raise ValueError(f"unknown corpus format: {format!r}")


def _ingest_jsonl(path, extra_sentiment) -> Corpus:
    reviews = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                review = Review(
                    id=str(obj["id"]),
                    entity_id=str(obj["entity_id"]),
                    sentences=[],
                    pros=[str(p) for p in obj.get("pros", [])],
                    cons=[str(c) for c in obj.get("cons", [])],
                )
                for sent in obj["sentences"]:
                    tokens = [make_token(str(s), str(p), extra_sentiment) for s, p in sent]
                    if tokens:
                        review.sentences.append(Sentence(tokens, review.id))
            except (KeyError, TypeError, ValueError) as exc:
                raise CorpusFormatError(path, lineno, f"bad review record: {exc}") from exc
            if not review.entity_id:
                raise CorpusFormatError(path, lineno, "empty entity_id")
            reviews.append(review)
    return Corpus(reviews)


def _ingest_conll(path, extra_sentiment) -> Corpus:
    reviews = []
    current = None
    tokens = []

    def flush_sentence():
        nonlocal tokens
        if tokens and current is not None:
            current.sentences.append(Sentence(tokens, current.id))
        tokens = []

    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if line.startswith("#REVIEW"):
                flush_sentence()
                parts = line.split()
                if len(parts) != 3:
                    raise CorpusFormatError(path, lineno, "#REVIEW needs 'id entity_id'")
                current = Review(id=parts[1], entity_id=parts[2], sentences=[])
                reviews.append(current)
            elif line.startswith("#PROS") or line.startswith("#CONS"):
                if current is None:
                    raise CorpusFormatError(path, lineno, "item line before #REVIEW")
                item = line.split(None, 1)
                text = item[1] if len(item) > 1 else ""
                (current.pros if line.startswith("#PROS") else current.cons).append(text)
            elif not line.strip():
                flush_sentence()
            else:
                if current is None:
                    raise CorpusFormatError(path, lineno, "token line before #REVIEW")
                parts = line.split("\t")
                if len(parts) != 2:
                    raise CorpusFormatError(path, lineno, f"expected 'surface<TAB>pos', got {line!r}")
                tokens.append(make_token(parts[0], parts[1], extra_sentiment))
        flush_sentence()
    return Corpus(reviews)


@dataclass
class Vocabulary:
    """Disjoint stem->index maps for the two word channels.

    A stem that ever occurs as a sentiment word is assigned to the sentiment
    vocabulary; remaining stems go to the non-sentiment (aspect) vocabulary.
    """

    aspect_stems: list
    senti_stems: list
    aspect_index: dict = field(default_factory=dict)
    senti_index: dict = field(default_factory=dict)
    drop_reasons: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.aspect_index:
            self.aspect_index = {s: i for i, s in enumerate(self.aspect_stems)}
        if not self.senti_index:
            self.senti_index = {s: i for i, s in enumerate(self.senti_stems)}

    @property
    def num_aspect_words(self):
        return len(self.aspect_stems)

    @property
    def num_senti_words(self):
        return len(self.senti_stems)

    def lookup(self, token: Token):
        """Return ('senti'|'aspect', index) or (None, drop_reason)."""
        if token.stem in self.senti_index:
            return "senti", self.senti_index[token.stem]
        if token.stem in self.aspect_index:
            return "aspect", self.aspect_index[token.stem]
        return None, self.drop_reasons.get(token.stem, "out_of_vocabulary")

    def content_hash(self) -> str:
        import hashlib
        payload = json.dumps([self.aspect_stems, self.senti_stems]).encode()
        return hashlib.sha256(payload).hexdigest()

    def to_dict(self):
        return {"aspect_stems": self.aspect_stems, "senti_stems": self.senti_stems}

    @classmethod
    def from_dict(cls, d):
        return cls(list(d["aspect_stems"]), list(d["senti_stems"]))


def build_vocabulary(corpus: Corpus, min_count: int = 5,
                     stopwords=DEFAULT_STOPWORDS) -> Vocabulary:
    if not corpus.reviews:
        raise ValueError("cannot build a vocabulary from an empty corpus")

    counts = Counter()
    senti_seen = set()
    for _, sentence in corpus.sentences():
        for token in sentence.tokens:
            counts[token.stem] += 1
            if token.is_sentiment:
                senti_seen.add(token.stem)

    aspect_stems, senti_stems, drop_reasons = [], [], {}
    for s, n in counts.items():
        if s in senti_seen:
            if n < min_count:
                drop_reasons[s] = "below_min_count"
            else:
                senti_stems.append(s)
        else:
            if s in stopwords:
                drop_reasons[s] = "stopword"
            elif n < min_count:
                drop_reasons[s] = "below_min_count"
            else:
                aspect_stems.append(s)

    if not aspect_stems and not senti_stems:
        raise ValueError("vocabulary is empty after filtering")
    aspect_stems.sort()
    senti_stems.sort()
    return Vocabulary(aspect_stems, senti_stems, drop_reasons=drop_reasons)


def _normalize_gold_item(text: str) -> str:
    return " ".join(text.lower().split())


def build_reference_summaries(corpus: Corpus) -> dict:
    """Per entity, deduplicated unions of reviewer pros and cons."""
    refs = {}
    for review in corpus.reviews:
        pros, cons = refs.setdefault(review.entity_id, (set(), set()))
        for item in review.pros:
            norm = _normalize_gold_item(item)
            if norm:
                pros.add(norm)
        for item in review.cons:
            norm = _normalize_gold_item(item)
            if norm:
                cons.add(norm)
    return refs


def load_wordlist(path) -> frozenset:
    """One lowercase stem per line; '#' comments and blanks ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.lower())
    return frozenset(words)
