"""Pipeline configuration: an INI file with one section per stage.

Unknown sections or keys are rejected outright so typos fail fast.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field

from .evaluation import EvalConfig
from .filters import FilterConfig
from .model import Hyperparams, Schedule


class ConfigError(ValueError):
    pass


@dataclass
class Paths:
    corpus: str = ""
    corpus_format: str = "jsonl"
    output_dir: str = "out"
    checkpoint: str = ""        # defaults to <output_dir>/checkpoint.json
    stopwords: str = ""         # optional wordlist files
    extra_sentiment: str = ""
    seeds: str = ""
    lexicon: str = ""


@dataclass
class PipelineConfig:
    paths: Paths = field(default_factory=Paths)
    hyperparams: Hyperparams = field(default_factory=Hyperparams)
    schedule: Schedule = field(default_factory=Schedule)
    filters: FilterConfig = field(default_factory=FilterConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)
    pattern_spec: str = "product"
    max_words: int = 7
    min_count: int = 5
    procedure: str = "AW+SEN+SW"
    rng_seed: int = 0
    top_n: int = 0              # 0 = unlimited

    @property
    def checkpoint_path(self):
        return self.paths.checkpoint or os.path.join(self.paths.output_dir,
                                                     "checkpoint.json")


_SCHEMA = {
    "paths": {
        "corpus": str, "corpus_format": str, "output_dir": str,
        "checkpoint": str, "stopwords": str, "extra_sentiment": str,
        "seeds": str, "lexicon": str,
    },
    "model": {
        "alpha": float, "beta": float, "gamma": float,
        "sigma1_sq": float, "sigma2_sq": float, "num_topics": int,
        "mu_seed": float, "min_count": int,
    },
    "schedule": {"burn_in": int, "interleave": int, "total": int},
    "patterns": {"preset": str, "max_words": int},
    "filters": {"aw_top_x": int, "sw_top_y": int, "rank_keep_fraction": float},
    "eval": {"recall_threshold": float, "token_normalization": str},
    "run": {"procedure": str, "rng_seed": int, "top_n": int},
}


def load_config(path) -> PipelineConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file: {path}")

    values = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            caster = _SCHEMA[section][key]
            try:
                values[(section, key)] = caster(raw)
            except ValueError as exc:
                raise ConfigError(f"bad value for [{section}] {key}: {raw!r}") from exc

    def get(section, key, default):
        return values.get((section, key), default)

    try:
        cfg = PipelineConfig(
            paths=Paths(
                corpus=get("paths", "corpus", ""),
                corpus_format=get("paths", "corpus_format", "jsonl"),
                output_dir=get("paths", "output_dir", "out"),
                checkpoint=get("paths", "checkpoint", ""),
                stopwords=get("paths", "stopwords", ""),
                extra_sentiment=get("paths", "extra_sentiment", ""),
                seeds=get("paths", "seeds", ""),
                lexicon=get("paths", "lexicon", ""),
            ),
            hyperparams=Hyperparams(
                alpha=get("model", "alpha", 0.1),
                beta=get("model", "beta", 0.01),
                gamma=get("model", "gamma", 0.1),
                sigma1_sq=get("model", "sigma1_sq", 1.0),
                sigma2_sq=get("model", "sigma2_sq", 1.0),
                num_topics=get("model", "num_topics", 7),
                mu_seed=get("model", "mu_seed", 2.0),
            ),
            schedule=Schedule(
                burn_in=get("schedule", "burn_in", 500),
                interleave=get("schedule", "interleave", 100),
                total=get("schedule", "total", 2000),
            ),
            filters=FilterConfig(
                aw_top_x=get("filters", "aw_top_x", 200),
                sw_top_y=get("filters", "sw_top_y", 100),
                rank_keep_fraction=get("filters", "rank_keep_fraction", 0.5),
            ),
            eval=EvalConfig(
                recall_threshold=get("eval", "recall_threshold", 0.25),
                token_normalization=get("eval", "token_normalization", "stemmed"),
            ),
            pattern_spec=get("patterns", "preset", "product"),
            max_words=get("patterns", "max_words", 7),
            min_count=get("model", "min_count", 5),
            procedure=get("run", "procedure", "AW+SEN+SW"),
            rng_seed=get("run", "rng_seed", 0),
            top_n=get("run", "top_n", 0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    for label, p in (("corpus", cfg.paths.corpus), ("stopwords", cfg.paths.stopwords),
                     ("extra_sentiment", cfg.paths.extra_sentiment),
                     ("seeds", cfg.paths.seeds), ("lexicon", cfg.paths.lexicon)):
        if p and not os.path.exists(p):
            raise ConfigError(f"{label} file does not exist: {p}")
    return cfg
