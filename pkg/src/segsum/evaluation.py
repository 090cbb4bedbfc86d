"""Skip-bigram evaluation of candidate summaries against pros/cons gold.

Positive candidates are scored against the pros reference, negative
candidates against the cons reference, independently. Scores exist at three
levels: per segment (P(Y), R(Y) against the best-recall reference item),
per entity (averages plus the threshold-based P(E)/R(E) and their combined
forms), and per corpus (micro segment stats P_s/R_s, macro entity stats
P_e/R_e/P/R).
"""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from math import comb

from . import stem as _stem

log = logging.getLogger(__name__)

_WORD_RE = re.compile(r"[a-z0-9']+")


@dataclass
class EvalConfig:
    recall_threshold: float = 0.25
    token_normalization: str = "stemmed"   # or "surface_lower"

    def __post_init__(self):
        if not 0 < self.recall_threshold <= 1:
            raise ValueError("recall_threshold must be in (0, 1]")
        if self.token_normalization not in ("stemmed", "surface_lower"):
            raise ValueError(f"bad token_normalization: {self.token_normalization!r}")


def normalize_text(text: str, mode: str = "stemmed"):
    words = _WORD_RE.findall(text.lower())
    if mode == "stemmed":
        return tuple(_stem.stem(w) for w in words)
    return tuple(words)


def normalize_segment(segment, mode: str = "stemmed"):
    if mode == "stemmed":
        return tuple(t.stem for t in segment.tokens)
    return tuple(t.surface.lower() for t in segment.tokens)


def _pair_counts(seq):
    pairs = Counter()
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            pairs[(seq[i], seq[j])] += 1
    return pairs


def skip2(x, y) -> int:
    """Shared ordered-pair count (any gap), clipped to the minimum
    multiplicity on each side."""
    px, py = _pair_counts(x), _pair_counts(y)
    return sum(min(n, py[p]) for p, n in px.items())


def pr_pair(x, y):
    """(P(X,Y), R(X,Y)). Sequences shorter than 2 tokens fall back to token
    containment: both scores are 1 if the singleton occurs in the other
    sequence, else 0."""
    if len(x) < 2 or len(y) < 2:
        if len(x) == 0 or len(y) == 0:
            return 0.0, 0.0
        short, other = (x, y) if len(x) < len(y) else (y, x)
        hit = 1.0 if short[0] in other else 0.0
        if len(x) == 1 and len(y) == 1:
            hit = 1.0 if x[0] == y[0] else 0.0
        return hit, hit
    matches = skip2(x, y)
    return matches / comb(len(y), 2), matches / comb(len(x), 2)


@dataclass
class SegmentScore:
    precision: float
    recall: float
    x_max_index: int


def segment_scores(candidate, reference) -> SegmentScore:
    """Score one candidate against the reference item maximizing R(X, Y);
    ties break to the first item in reference order."""
    if not reference:
        raise ValueError("empty reference")
    best = None
    for idx, ref_item in enumerate(reference):
        p, r = pr_pair(ref_item, candidate)
        if best is None or r > best.recall:
            best = SegmentScore(p, r, idx)
    return best


@dataclass
class EntityScores:
    p_skip: float
    r_skip: float
    p_entity: float
    r_entity: float
    p_cb: float
    r_cb: float
    num_candidates: int
    num_references: int
    segments: list = field(default_factory=list)
    flagged_empty_candidate: bool = False

    def to_dict(self):
        return {
            "P_skip": self.p_skip, "R_skip": self.r_skip,
            "P_E": self.p_entity, "R_E": self.r_entity,
            "P_cb": self.p_cb, "R_cb": self.r_cb,
            "num_candidates": self.num_candidates,
            "num_references": self.num_references,
            "segments": [{"P": s.precision, "R": s.recall, "x_max": s.x_max_index}
                         for s in self.segments],
        }


def entity_scores(candidates, reference, alpha=0.25) -> EntityScores:
    """candidates/reference are sequences of token tuples."""
    reference = list(reference)
    candidates = list(candidates)
    if not reference:
        raise ValueError("empty reference")
    if not candidates:
        return EntityScores(0, 0, 0, 0, 0, 0, 0, len(reference),
                            flagged_empty_candidate=True)

    scored = [segment_scores(y, reference) for y in candidates]
    p_skip = sum(s.precision for s in scored) / len(scored)
    r_skip = sum(s.recall for s in scored) / len(scored)

    useful = [(y, s) for y, s in zip(candidates, scored) if s.recall >= alpha]
    p_entity = len(useful) / len(candidates)
    covered = 0
    for idx, x in enumerate(reference):
        if any(pr_pair(x, y)[1] == s.recall for y, s in useful):
            covered += 1
    r_entity = covered / len(reference)

    return EntityScores(
        p_skip, r_skip, p_entity, r_entity,
        (p_skip + p_entity) / 2, (r_skip + r_entity) / 2,
        len(candidates), len(reference), scored)


@dataclass
class CorpusStats:
    p_s: float
    r_s: float
    p_e: float
    r_e: float
    p: float
    r: float
    num_entities: int
    num_segments: int

    def to_dict(self):
        return {"P_s": self.p_s, "R_s": self.r_s, "P_e": self.p_e,
                "R_e": self.r_e, "P": self.p, "R": self.r,
                "num_entities": self.num_entities,
                "num_segments": self.num_segments}


def corpus_stats(entities) -> CorpusStats:
    """Micro-average the segment scores, macro-average the entity scores."""
    entities = list(entities)
    if not entities:
        raise ValueError("no scored entities")
    n_segments = sum(e.num_candidates for e in entities)
    p_sum = sum(s.precision for e in entities for s in e.segments)
    r_sum = sum(s.recall for e in entities for s in e.segments)
    n = len(entities)
    return CorpusStats(
        p_s=p_sum / n_segments if n_segments else 0.0,
        r_s=r_sum / n_segments if n_segments else 0.0,
        p_e=sum(e.p_entity for e in entities) / n,
        r_e=sum(e.r_entity for e in entities) / n,
        p=sum(e.p_cb for e in entities) / n,
        r=sum(e.r_cb for e in entities) / n,
        num_entities=n,
        num_segments=n_segments)


@dataclass
class PolarityReport:
    stats: CorpusStats
    entities: dict                 # entity_id -> EntityScores
    excluded_no_reference: list = field(default_factory=list)

    def to_dict(self):
        return {
            "corpus": self.stats.to_dict(),
            "entities": {e: s.to_dict() for e, s in self.entities.items()},
            "excluded_no_reference": self.excluded_no_reference,
        }


@dataclass
class EvalReport:
    pros: PolarityReport
    cons: PolarityReport
    skipped_entities: list = field(default_factory=list)

    def to_dict(self):
        return {"pros": self.pros.to_dict(), "cons": self.cons.to_dict(),
                "skipped_entities": self.skipped_entities}

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)


def _score_polarity(per_entity_candidates, per_entity_refs, cfg):
    entities = {}
    excluded = []
    for entity_id, candidates in per_entity_candidates.items():
        reference = per_entity_refs.get(entity_id, ())
        ref_norm = sorted({normalize_text(item, cfg.token_normalization)
                           for item in reference if item.strip()})
        ref_norm = [r for r in ref_norm if r]
        if not ref_norm:
            excluded.append(entity_id)
            continue
        cand_norm = [normalize_segment(seg, cfg.token_normalization)
                     for seg in candidates]
        entities[entity_id] = entity_scores(cand_norm, ref_norm,
                                            cfg.recall_threshold)
    if not entities:
        raise ValueError("no scorable entities (all lacked references)")
    return PolarityReport(corpus_stats(entities.values()), entities, excluded)


def evaluate(candidates, references, cfg=None) -> EvalReport:
    """candidates: entity_id -> {'positive': [Segment], 'negative': [Segment]};
    references: entity_id -> (pros, cons) string collections."""
    cfg = cfg if cfg is not None else EvalConfig()
    if not candidates:
        raise ValueError("empty candidate map")

    skipped = sorted(e for e in candidates if e not in references)
    for entity_id in skipped:
        log.warning("entity %r has candidates but no reference; skipped", entity_id)

    usable = {e: c for e, c in candidates.items() if e in references}
    pros = _score_polarity({e: c["positive"] for e, c in usable.items()},
                           {e: references[e][0] for e in usable}, cfg)
    cons = _score_polarity({e: c["negative"] for e, c in usable.items()},
                           {e: references[e][1] for e in usable}, cfg)
    return EvalReport(pros, cons, skipped)


def format_report_table(report, label="") -> str:
    """One aligned row of the 12-column pros/cons layout (values in %)."""
    cols = ["P_s", "R_s", "P_e", "R_e", "P", "R"]
    header = f"{'procedure':<16}" + "".join(f"{'pros ' + c:>10}" for c in cols) \
        + "".join(f"{'cons ' + c:>10}" for c in cols)
    ps, cs = report.pros.stats, report.cons.stats
    values = [ps.p_s, ps.r_s, ps.p_e, ps.r_e, ps.p, ps.r,
              cs.p_s, cs.r_s, cs.p_e, cs.r_e, cs.p, cs.r]
    row = f"{label:<16}" + "".join(f"{100 * v:>10.1f}" for v in values)
    return header + "\n" + row
