"""Synthetic corpora with planted topics.

Stands in for the proprietary failure database: generation is seeded and
fully deterministic, and the planted assignment is the ground truth that
recovery scoring checks concepts against. Token distributions are uniform
within topic and background sets; no attempt to mimic real vocabulary.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .concepts import ConceptModel, top_terms
from .corpus import FailureRecord, RecordSet
from .errors import DataError


class SpecInfeasible(DataError):
    pass


class MoreTopicsThanConcepts(DataError):
    pass


@dataclass(frozen=True)
class PlantedSpec:
    n_topics: int = 4
    terms_per_topic: int = 40
    background_terms: int = 80
    docs: int = 400
    doc_length: tuple[int, int] = (30, 60)
    topic_weight: float = 0.8
    component_tag: str = "annular"
    seed: int = 42

    def __post_init__(self):
        if self.n_topics < 1:
            raise SpecInfeasible("need at least one topic")
        if self.terms_per_topic < 1:
            raise SpecInfeasible("need at least one term per topic")
        if self.background_terms < 0:
            raise SpecInfeasible("background_terms must be >= 0")
        if self.docs < 1:
            raise SpecInfeasible("need at least one document")
        lo, hi = self.doc_length
        if lo < 1 or hi < lo:
            raise SpecInfeasible("doc_length must satisfy 1 <= min <= max")
        if not (0.0 < self.topic_weight <= 1.0):
            raise SpecInfeasible("topic_weight must be in (0, 1]")
        if self.topic_weight < 1.0 and self.background_terms == 0:
            raise SpecInfeasible("topic_weight < 1 needs a background vocabulary")


@dataclass(frozen=True)
class GroundTruth:
    topic_of_doc: Mapping[str, int]
    topic_terms: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class RecoveryReport:
    assignment: Mapping[int, int]          # topic index -> concept index
    precision_at_n: Mapping[int, float]
    mean_precision: float
    top_n: int

    def to_dict(self) -> dict:
        return {
            "assignment": {str(t): c for t, c in sorted(self.assignment.items())},
            "precision_at_n": {str(t): p for t, p in sorted(self.precision_at_n.items())},
            "mean_precision": self.mean_precision,
            "top_n": self.top_n,
        }


def _topic_term(topic: int, idx: int) -> str:
    return f"t{topic:02d}w{idx:03d}"


def _background_term(idx: int) -> str:
    return f"bg{idx:03d}"


def generate_corpus(spec: PlantedSpec) -> tuple[RecordSet, GroundTruth]:
    """Seeded corpus: topics assigned round-robin then shuffled, tokens drawn
    i.i.d. from the doc's topic set with probability topic_weight, else from
    the background set."""
    topic_terms = tuple(
        tuple(_topic_term(t, i) for i in range(spec.terms_per_topic))
        for t in range(spec.n_topics))
    background = tuple(_background_term(i) for i in range(spec.background_terms))

    rng = random.Random(spec.seed)
    assignment = [i % spec.n_topics for i in range(spec.docs)]
    rng.shuffle(assignment)

    records = []
    topic_of_doc = {}
    lo, hi = spec.doc_length
    for doc_idx, topic in enumerate(assignment):
        length = rng.randint(lo, hi)
        tokens = []
        for _ in range(length):
            if spec.topic_weight >= 1.0 or rng.random() < spec.topic_weight:
                tokens.append(topic_terms[topic][rng.randrange(spec.terms_per_topic)])
            else:
                tokens.append(background[rng.randrange(spec.background_terms)])
        record_id = f"{spec.component_tag}-{doc_idx:05d}"
        records.append(FailureRecord(
            record_id=record_id,
            component=spec.component_tag,
            description=" ".join(tokens),
        ))
        topic_of_doc[record_id] = topic
    record_set = RecordSet(records=tuple(records),
                           source_label=f"planted:{spec.seed}")
    return record_set, GroundTruth(topic_of_doc=topic_of_doc, topic_terms=topic_terms)


def score_recovery(model: ConceptModel, truth: GroundTruth, top_n: int = 10,
                   ) -> RecoveryReport:
    """Greedy one-to-one topic-to-concept matching by top-term overlap.

    precision@n for a topic = |concept's top-n terms ∩ topic's term set| / n.
    With disjoint planted topics, greedy matching coincides with the optimal
    assignment except in ties.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    n_topics = len(truth.topic_terms)
    if n_topics > model.k:
        raise MoreTopicsThanConcepts(
            f"{n_topics} topics but only {model.k} concepts")
    term_sets = [set(ts) for ts in truth.topic_terms]
    concept_tops = [
        {t for t, _ in top_terms(model, c, top_n)} for c in range(model.k)]
    overlaps = [
        [len(term_sets[t] & concept_tops[c]) for c in range(model.k)]
        for t in range(n_topics)]

    pairs = sorted(
        ((overlaps[t][c], t, c) for t in range(n_topics) for c in range(model.k)),
        key=lambda item: (-item[0], item[1], item[2]))
    assignment: dict[int, int] = {}
    used_concepts: set[int] = set()
    for overlap, t, c in pairs:
        if t in assignment or c in used_concepts:
            continue
        assignment[t] = c
        used_concepts.add(c)
        if len(assignment) == n_topics:
            break
    precision = {t: overlaps[t][c] / top_n for t, c in assignment.items()}
    mean_precision = sum(precision.values()) / n_topics
    return RecoveryReport(assignment=assignment, precision_at_n=precision,
                          mean_precision=mean_precision, top_n=top_n)


def write_truth(truth: GroundTruth, path: str | Path) -> None:
    payload = {
        "topic_of_doc": dict(sorted(truth.topic_of_doc.items())),
        "topic_terms": [list(ts) for ts in truth.topic_terms],
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def read_truth(path: str | Path) -> GroundTruth:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return GroundTruth(
        topic_of_doc={k: int(v) for k, v in payload["topic_of_doc"].items()},
        topic_terms=tuple(tuple(ts) for ts in payload["topic_terms"]),
    )
