"""Tiny lexicon POS tagger.

Strictly a fixture generator: the pipeline consumes pre-tagged text and this
tagger exists so tests and demo scripts can produce tagged input without an
external tagger. Coverage is a couple hundred review-domain words plus crude
suffix heuristics; do not use it for real data.
"""

import re

_LEXICON = {
    # determiners / function words
    "the": "DT", "a": "DT", "an": "DT", "this": "DT", "that": "DT",
    "some": "DT", "no": "DT", "every": "DT", "any": "DT",
    "to": "TO", "of": "IN", "in": "IN", "on": "IN", "at": "IN", "for": "IN",
    "with": "IN", "from": "IN", "about": "IN", "as": "IN", "by": "IN",
    "and": "CC", "but": "CC", "or": "CC",
    "i": "PRP", "we": "PRP", "you": "PRP", "it": "PRP", "they": "PRP",
    "he": "PRP", "she": "PRP", "my": "PRP$", "our": "PRP$", "your": "PRP$",
    "there": "EX", "when": "WRB", "which": "WDT", "what": "WP",
    # verbs
    "is": "VBZ", "was": "VBD", "are": "VBP", "were": "VBD", "be": "VB",
    "been": "VBN", "am": "VBP", "has": "VBZ", "have": "VBP", "had": "VBD",
    "do": "VBP", "does": "VBZ", "did": "VBD", "will": "MD", "would": "MD",
    "can": "MD", "could": "MD", "should": "MD", "must": "MD",
    "includes": "VBZ", "include": "VB", "makes": "VBZ", "make": "VB",
    "made": "VBD", "works": "VBZ", "work": "VB", "worked": "VBD",
    "tastes": "VBZ", "taste": "VB", "tasted": "VBD", "looks": "VBZ",
    "looked": "VBD", "smells": "VBZ", "feels": "VBZ", "felt": "VBD",
    "remove": "VB", "clean": "VB", "use": "VB", "insert": "VB", "pour": "VB",
    "press": "VB", "brew": "VB", "brews": "VBZ", "order": "VB", "get": "VB",
    "got": "VBD", "came": "VBD", "come": "VB", "go": "VB", "went": "VBD",
    "love": "VBP", "hate": "VBP", "enjoy": "VBP", "recommend": "VBP",
    "stays": "VBZ", "seems": "VBZ", "seemed": "VBD", "serve": "VB",
    "served": "VBD", "serves": "VBZ", "wait": "VB", "waited": "VBD",
    "broke": "VBD", "leaks": "VBZ", "leaked": "VBD",
    # adjectives
    "good": "JJ", "great": "JJ", "nice": "JJ", "excellent": "JJ",
    "amazing": "JJ", "best": "JJS", "better": "JJR", "bad": "JJ",
    "terrible": "JJ", "awful": "JJ", "worst": "JJS", "worse": "JJR",
    "poor": "JJ", "disappointing": "JJ", "delicious": "JJ", "fresh": "JJ",
    "tasty": "JJ", "bland": "JJ", "dry": "JJ", "cold": "JJ", "hot": "JJ",
    "soggy": "JJ", "friendly": "JJ", "rude": "JJ", "slow": "JJ",
    "quick": "JJ", "fast": "JJ", "attentive": "JJ", "prompt": "JJ",
    "cozy": "JJ", "loud": "JJ", "noisy": "JJ", "quiet": "JJ", "small": "JJ",
    "large": "JJ", "big": "JJ", "clear": "JJ", "easy": "JJ", "simple": "JJ",
    "hard": "JJ", "difficult": "JJ", "impossible": "JJ", "cheap": "JJ",
    "expensive": "JJ", "affordable": "JJ", "overpriced": "JJ",
    "striking": "JJ", "beautiful": "JJ", "romantic": "JJ", "charming": "JJ",
    "wonderful": "JJ", "perfect": "JJ", "strong": "JJ", "weak": "JJ",
    "wide": "JJ", "sturdy": "JJ", "durable": "JJ", "defective": "JJ",
    "broken": "JJ", "dirty": "JJ", "smelly": "JJ", "stale": "JJ",
    "mediocre": "JJ", "tasteless": "JJ", "authentic": "JJ", "removable": "JJ",
    "programmable": "JJ", "dripless": "JJ", "permanent": "JJ", "new": "JJ",
    "old": "JJ", "fine": "JJ", "several": "JJ", "many": "JJ", "few": "JJ",
    "enough": "JJ",
    # adverbs
    "very": "RB", "really": "RB", "extremely": "RB", "quite": "RB",
    "incredibly": "RB", "too": "RB", "so": "RB", "almost": "RB",
    "always": "RB", "never": "RB", "not": "RB", "n't": "RB", "hardly": "RB",
    "here": "RB", "again": "RB", "still": "RB", "also": "RB", "well": "RB",
    "most": "RBS", "more": "RBR",
    # nouns
    "food": "NN", "service": "NN", "staff": "NN", "place": "NN",
    "restaurant": "NN", "menu": "NN", "table": "NN", "waiter": "NN",
    "waitress": "NN", "music": "NN", "decor": "NN", "atmosphere": "NN",
    "room": "NN", "space": "NN", "bar": "NN", "price": "NN", "prices": "NNS",
    "dish": "NN", "dishes": "NNS", "sauce": "NN", "chicken": "NN",
    "cheese": "NN", "salad": "NN", "soup": "NN", "pizza": "NN",
    "coffee": "NN", "espresso": "NN", "cup": "NN", "cups": "NNS",
    "machine": "NN", "maker": "NN", "carafe": "NN", "pot": "NN",
    "filter": "NN", "basket": "NN", "water": "NN", "button": "NN",
    "buttons": "NNS", "instruction": "NN", "instructions": "NNS",
    "booklet": "NN", "design": "NN", "feature": "NN", "features": "NNS",
    "grinder": "NN", "bean": "NN", "beans": "NNS", "brewer": "NN",
    "pod": "NN", "options": "NNS", "option": "NN", "review": "NN",
    "time": "NN", "day": "NN", "week": "NN", "hour": "NN", "hours": "NNS",
    "money": "NN", "thing": "NN", "things": "NNS", "crema": "NN",
    "latte": "NN", "portion": "NN", "portions": "NNS", "dessert": "NN",
    "wine": "NN", "drink": "NN", "drinks": "NNS", "noise": "NN",
    "warranty": "NN", "plastic": "NN", "lid": "NN", "handle": "NN",
}

_SUFFIX_RULES = [
    ("ly", "RB"),
    ("ing", "VBG"),
    ("ed", "VBD"),
    ("able", "JJ"), ("ible", "JJ"), ("ous", "JJ"), ("ful", "JJ"),
    ("less", "JJ"), ("ive", "JJ"),
    ("s", "NNS"),
]

_WORD_RE = re.compile(r"[a-zA-Z']+|[.,!?]")


def tag_word(word: str) -> str:
    lower = word.lower()
    if lower in _LEXICON:
        return _LEXICON[lower]
    for suffix, tag in _SUFFIX_RULES:
        if lower.endswith(suffix) and len(lower) > len(suffix) + 2:
            return tag
    return "NN"


def tag_sentence(text: str) -> list:
    """Tokenize a raw sentence and return [(surface, tag), ...]."""
    return [(w, tag_word(w)) for w in _WORD_RE.findall(text)
            if w not in ".,!?"]
