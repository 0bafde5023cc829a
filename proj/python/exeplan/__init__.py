"""Compile natural-language task instructions into executable robot plans.

Thin layer over the C++ extension: worlds and reports travel as JSON text
across the boundary and are handed to callers as plain dicts.
"""

import json
import os
from pathlib import Path

_bundled = Path(__file__).resolve().parent / "data"
if "EXEPLAN_DATA_DIR" not in os.environ and (_bundled / "lexicon.tsv").exists():
    os.environ["EXEPLAN_DATA_DIR"] = str(_bundled)

from . import _exeplan  # noqa: E402
from ._exeplan import (  # noqa: E402,F401
    ExeplanError,
    MlnModel,
    Models,
    NonConvergence,
    RefuseNonExecutable,
    SchemaError,
    canonical_corpus,
    canonical_plan,
    classify_task,
    data_dir,
    formula_names,
    load_models,
    score_plan,
    select_plan,
)

__all__ = [
    "ExeplanError",
    "MlnModel",
    "Models",
    "NonConvergence",
    "RefuseNonExecutable",
    "SchemaError",
    "Session",
    "apply_plan",
    "canonical_corpus",
    "canonical_plan",
    "classify_task",
    "compile",
    "data_dir",
    "default_world",
    "detect",
    "eval_disambiguation",
    "eval_plans",
    "formula_names",
    "generate_corpus",
    "load_models",
    "parse_document",
    "score_plan",
    "select_plan",
    "train_planner",
]

_models = None


def _default_models():
    global _models
    if _models is None:
        _models = load_models()
    return _models


def _world_text(world):
    if world is None:
        return _exeplan.default_world()
    return world if isinstance(world, str) else json.dumps(world)


def default_world():
    return json.loads(_exeplan.default_world())


def parse_document(text, models=None):
    return _exeplan.parse_document(text, models or _default_models())


def detect(text, models=None):
    return _exeplan.detect(text, models or _default_models())


def compile(text, world=None, models=None, threshold=0.5, mode="exeplan"):  # noqa: A001
    """Compile one instruction. The result dict has ok, task_type, and
    either plan plus document (the canonical plan JSON) or failure."""
    return _exeplan.compile(text, models or _default_models(), _world_text(world), threshold, mode)


def apply_plan(document, world=None):
    return json.loads(_exeplan.apply_plan(document, _world_text(world)))


def generate_corpus(n_docs=600, seed=1, distractor_rate=0.3, omission_rate=0.5, reorder_rate=0.1, models=None):
    """JSON Lines text, one document per line."""
    return _exeplan.generate_corpus(n_docs, seed, distractor_rate, omission_rate, reorder_rate,
                                    models or _default_models())


def train_planner(corpus_jsonl, c=100.0, epsilon=1e-3):
    """Returns (MlnModel, iterations, final_violation)."""
    return _exeplan.train_planner(corpus_jsonl, c, epsilon)


def eval_disambiguation(corpus_jsonl, models=None):
    return json.loads(_exeplan.eval_disambiguation(models or _default_models(), corpus_jsonl))


def eval_plans(corpus_jsonl, mode="exeplan", threshold=0.5, models=None):
    return json.loads(_exeplan.eval_plans(models or _default_models(), corpus_jsonl, mode, threshold))


class Session:
    """Turn-by-turn instructing; the world changes only through executed plans."""

    def __init__(self, world=None, models=None, threshold=0.5, mode="exeplan", json_output=False):
        self._state = _exeplan.Session(models or _default_models(), _world_text(world), threshold, mode, json_output)

    def turn(self, line):
        return self._state.turn(line)

    @property
    def world(self):
        return json.loads(self._state.world_json)

    @property
    def transcript(self):
        return self._state.transcript
