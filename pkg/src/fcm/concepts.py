"""Concept-term / document-concept views over the SVD factors.

Loadings are the unscaled singular-vector entries (rows of G^T, columns of
D); singular values are reported separately. Rankings are identical either
way, and unscaled loadings keep row/column norms at 1. A sigma_scaled
option multiplies loadings by the concept's singular value for export.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DataError
from .svd import SvdFactors
from .vectorize import Vocabulary

FACETS = ("failure_mode", "detection_method", "component_part",
          "corrective_action", "suspected_cause", "other")

# Component-name abbreviations used in concept names; unknown tags fall
# back to the uppercased tag plus "C".
ABBREVIATIONS = {"annular": "AC", "shear_ram": "SRC", "regulator": "RC", "ccsv": "SVC"}

DEFAULT_TERM_LIMIT = 25
DEFAULT_DOC_LIMIT = 10


class KTooLarge(DataError):
    pass


class TooFewValues(DataError):
    pass


class UnknownLabeledTerm(DataError):
    def __init__(self, term: str):
        self.term = term
        super().__init__(f"label references term {term!r} not in the concept's top terms")


@dataclass(frozen=True)
class ConceptModel:
    component: str
    k: int
    singular_values: np.ndarray      # length k, descending
    ct: np.ndarray                   # k x t concept-term loadings
    dc: np.ndarray                   # d x k document-concept loadings
    vocab_ref: Vocabulary
    record_ids: tuple[str, ...]


@dataclass(frozen=True)
class Scenario:
    concept_name: str
    component: str
    singular_value: float
    top_terms: tuple[tuple[str, float], ...]
    top_documents: tuple[tuple[str, float], ...]
    facet_labels: Mapping[str, str] = field(default_factory=dict)
    narrative: str | None = None

    def to_dict(self) -> dict:
        return {
            "concept_name": self.concept_name,
            "component": self.component,
            "singular_value": self.singular_value,
            "top_terms": [[t, l] for t, l in self.top_terms],
            "top_documents": [[r, l] for r, l in self.top_documents],
            "facet_labels": dict(self.facet_labels),
            "narrative": self.narrative,
        }


def build_concept_model(factors: SvdFactors, k: int, vocab: Vocabulary,
                        record_ids: Sequence[str], component: str) -> ConceptModel:
    """Slice the top-k factors and apply the sign convention.

    Per concept, the term with the largest absolute loading is made
    positive; the matching document column is flipped with it so the
    reconstruction G S D^T is unchanged.
    """
    if k > factors.m:
        raise KTooLarge(f"k={k} exceeds available rank {factors.m}")
    ct = np.array(factors.g[:, :k].T)     # k x t
    dc = np.array(factors.d[:, :k])       # d x k
    for c in range(k):
        extreme = int(np.argmax(np.abs(ct[c])))
        if ct[c, extreme] < 0:
            ct[c] = -ct[c]
            dc[:, c] = -dc[:, c]
    return ConceptModel(
        component=component,
        k=k,
        singular_values=np.array(factors.s[:k]),
        ct=ct,
        dc=dc,
        vocab_ref=vocab,
        record_ids=tuple(record_ids),
    )


def detect_elbow(singular_values: Sequence[float]) -> int:
    """Index of the scree elbow: max perpendicular distance to the chord.

    Indices and values are normalized to [0, 1]; the chord runs from the
    first to the last point. Ties resolve to the smallest index. Advisory
    only - analysts may override the suggested cut.
    """
    values = [float(v) for v in singular_values]
    n = len(values)
    if n < 3:
        raise TooFewValues(f"need at least 3 singular values, got {n}")
    span = values[0] - values[-1]
    best_idx = 0
    best_dist = 0.0
    # distances within 1e-9 of the running best count as ties, so exact
    # mathematical ties are not broken by float rounding
    for i, v in enumerate(values):
        x = i / (n - 1)
        y = (v - values[-1]) / span if span != 0 else 0.0
        # distance to the chord through (0,1) and (1,0), up to the 1/sqrt(2) factor
        dist = abs(x + y - 1.0)
        if dist > best_dist + 1e-9:
            best_dist = dist
            best_idx = i
    return best_idx


def _ranked(loadings: np.ndarray, names: Sequence[str], limit: int,
            min_loading: float | None) -> list[tuple[str, float]]:
    order = np.argsort(-loadings, kind="stable")
    out = []
    for idx in order[:limit] if min_loading is None else order:
        value = float(loadings[idx])
        if min_loading is not None and value < min_loading:
            break
        out.append((names[idx], value))
        if len(out) == limit:
            break
    return out


def top_terms(model: ConceptModel, concept_index: int, limit: int = DEFAULT_TERM_LIMIT,
              min_loading: float | None = None) -> list[tuple[str, float]]:
    """Terms ranked by signed loading, descending, truncated at limit."""
    if not 0 <= concept_index < model.k:
        raise IndexError(f"concept_index {concept_index} out of range")
    if limit < 1:
        raise ValueError("limit must be >= 1")
    return _ranked(model.ct[concept_index], model.vocab_ref.terms, limit, min_loading)


def top_documents(model: ConceptModel, concept_index: int, limit: int = DEFAULT_DOC_LIMIT,
                  min_loading: float | None = None) -> list[tuple[str, float]]:
    """Documents ranked by signed loading on the concept."""
    if not 0 <= concept_index < model.k:
        raise IndexError(f"concept_index {concept_index} out of range")
    if limit < 1:
        raise ValueError("limit must be >= 1")
    return _ranked(model.dc[:, concept_index], model.record_ids, limit, min_loading)


def concept_name(component: str, ordinal: int) -> str:
    """Abbreviated component tag + 1-based generation order, e.g. AC1."""
    if ordinal < 1:
        raise ValueError("ordinal is 1-based")
    prefix = ABBREVIATIONS.get(component, component.upper() + "C")
    return f"{prefix}{ordinal}"


def assemble_scenario(model: ConceptModel, concept_index: int,
                      term_limit: int = DEFAULT_TERM_LIMIT,
                      doc_limit: int = DEFAULT_DOC_LIMIT,
                      labels: Mapping[str, str] | None = None,
                      narrative: str | None = None) -> Scenario:
    """Bundle a concept with its analyst facet labels.

    Labels may only reference terms present in the concept's top terms;
    unlabeled terms get the facet "other".
    """
    terms = top_terms(model, concept_index, term_limit)
    docs = top_documents(model, concept_index, doc_limit)
    term_names = {t for t, _ in terms}
    facets: dict[str, str] = {}
    for term, facet in (labels or {}).items():
        if term not in term_names:
            raise UnknownLabeledTerm(term)
        if facet not in FACETS:
            raise DataError(f"unknown facet {facet!r}; expected one of {FACETS}")
        facets[term] = facet
    for term in term_names:
        facets.setdefault(term, "other")
    return Scenario(
        concept_name=concept_name(model.component, concept_index + 1),
        component=model.component,
        singular_value=float(model.singular_values[concept_index]),
        top_terms=tuple(terms),
        top_documents=tuple(docs),
        facet_labels=facets,
        narrative=narrative,
    )


def model_to_json_dict(model: ConceptModel, term_limit: int = DEFAULT_TERM_LIMIT,
                       doc_limit: int = DEFAULT_DOC_LIMIT,
                       sigma_scaled: bool = False) -> dict:
    """The concepts.json payload consumed by the API server and the UI."""
    concepts = []
    for c in range(model.k):
        terms = top_terms(model, c, term_limit)
        docs = top_documents(model, c, doc_limit)
        sigma = float(model.singular_values[c])
        scale = sigma if sigma_scaled else 1.0
        concepts.append({
            "name": concept_name(model.component, c + 1),
            "sigma": sigma,
            "terms": [{"term": t, "loading": l * scale} for t, l in terms],
            "documents": [{"record_id": r, "loading": l * scale} for r, l in docs],
        })
    return {
        "component": model.component,
        "k": model.k,
        "singular_values": [float(v) for v in model.singular_values],
        "concepts": concepts,
    }
