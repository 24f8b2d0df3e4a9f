"""Vocabulary construction and TF-IDF weighting.

Weights: w_ij = tf_ij * idf_i with idf_i = ln((1+N)/(1+n_i)) + 1, then each
document column is scaled to unit Euclidean norm. tf is the raw in-document
count; n_i counts distinct documents containing term i. Terms must appear
in at least ceil(min_df_fraction * N) distinct documents to enter the
vocabulary (default fraction 0.025).
"""
from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError
from .preprocess import TokenizedDoc


class EmptyVocabulary(DataError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    """Lexicographically ordered term list with document frequencies."""

    terms: tuple[str, ...]
    doc_freq: tuple[int, ...]
    min_df_fraction: float

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.terms)})

    @property
    def index(self) -> dict[str, int]:
        return self._index

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class SparseMatrix:
    """Term-by-document COO matrix; entries sorted by (col, row), unique keys."""

    rows: int
    cols: int
    row_idx: np.ndarray  # uint32
    col_idx: np.ndarray  # uint32
    values: np.ndarray   # float64

    @property
    def nnz(self) -> int:
        return len(self.values)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.rows, self.cols))
        dense[self.row_idx, self.col_idx] = self.values
        return dense

    def dot_dense(self, x: np.ndarray) -> np.ndarray:
        """self @ x for a dense x of shape (cols, k)."""
        out = np.zeros((self.rows,) + x.shape[1:])
        np.add.at(out, self.row_idx, self.values.reshape(-1, *([1] * (x.ndim - 1)))
                  * x[self.col_idx])
        return out

    def t_dot_dense(self, x: np.ndarray) -> np.ndarray:
        """self.T @ x for a dense x of shape (rows, k)."""
        out = np.zeros((self.cols,) + x.shape[1:])
        np.add.at(out, self.col_idx, self.values.reshape(-1, *([1] * (x.ndim - 1)))
                  * x[self.row_idx])
        return out


def _make_sparse(rows: int, cols: int, triplets: Iterable[tuple[int, int, float]],
                 ) -> SparseMatrix:
    entries = sorted(triplets, key=lambda t: (t[1], t[0]))
    if entries:
        r, c, v = zip(*entries)
    else:
        r, c, v = (), (), ()
    return SparseMatrix(
        rows=rows, cols=cols,
        row_idx=np.asarray(r, dtype=np.uint32),
        col_idx=np.asarray(c, dtype=np.uint32),
        values=np.asarray(v, dtype=np.float64),
    )


def min_df_threshold(min_df_fraction: float, n_docs: int) -> int:
    """Distinct-document count a term needs: ceil(fraction * N), at least 1.

    The small epsilon keeps binary float noise from bumping an exact product
    (0.1 * 30 = 3.0000000000000004) over the next integer.
    """
    return max(1, math.ceil(min_df_fraction * n_docs - 1e-9))


def build_vocabulary(docs: Sequence[TokenizedDoc], min_df_fraction: float) -> Vocabulary:
    """Terms appearing in at least ceil(min_df_fraction * N) distinct docs."""
    if not docs:
        raise ValueError("need at least one document")
    if not (0.0 < min_df_fraction <= 1.0):
        raise ValueError("min_df_fraction must be in (0, 1]")
    df: dict[str, int] = {}
    for doc in docs:
        for tok in set(doc.tokens):
            df[tok] = df.get(tok, 0) + 1
    threshold = min_df_threshold(min_df_fraction, len(docs))
    kept = sorted(t for t, n in df.items() if n >= threshold)
    if not kept:
        raise EmptyVocabulary(
            f"no term reaches document frequency {threshold} of {len(docs)} docs")
    return Vocabulary(terms=tuple(kept), doc_freq=tuple(df[t] for t in kept),
                      min_df_fraction=min_df_fraction)


def term_frequency_matrix(docs: Sequence[TokenizedDoc], vocab: Vocabulary) -> SparseMatrix:
    """Raw count of term i in document j; out-of-vocabulary tokens ignored."""
    index = vocab.index
    triplets: list[tuple[int, int, float]] = []
    for j, doc in enumerate(docs):
        counts: dict[int, int] = {}
        for tok in doc.tokens:
            i = index.get(tok)
            if i is not None:
                counts[i] = counts.get(i, 0) + 1
        triplets.extend((i, j, float(c)) for i, c in counts.items())
    return _make_sparse(len(vocab), len(docs), triplets)


def idf_weights(tf: SparseMatrix, n_docs: int) -> np.ndarray:
    """idf_i = ln((1+N)/(1+n_i)) + 1 with n_i the per-term document count."""
    if n_docs < 1:
        raise ValueError("n_docs must be >= 1")
    n_i = np.zeros(tf.rows)
    # entries have unique (row, col) keys, so each one is a distinct document
    np.add.at(n_i, tf.row_idx, (tf.values != 0).astype(float))
    return np.log((1.0 + n_docs) / (1.0 + n_i)) + 1.0


def tfidf_matrix(tf: SparseMatrix, idf: np.ndarray) -> SparseMatrix:
    """Apply w_ij = tf_ij * idf_i, then scale each column to unit L2 norm.

    All-zero document columns stay zero (no renormalization), keeping the
    document index aligned with the RecordSet.
    """
    if len(idf) != tf.rows:
        raise ValueError("idf length must equal tf.rows")
    weighted = tf.values * idf[tf.row_idx]
    norms_sq = np.zeros(tf.cols)
    np.add.at(norms_sq, tf.col_idx, weighted ** 2)
    norms = np.sqrt(norms_sq)
    scale = np.ones(tf.cols)
    nonzero = norms > 0
    scale[nonzero] = 1.0 / norms[nonzero]
    return SparseMatrix(rows=tf.rows, cols=tf.cols, row_idx=tf.row_idx.copy(),
                        col_idx=tf.col_idx.copy(), values=weighted * scale[tf.col_idx])


@dataclass(frozen=True)
class TfidfModel:
    vocab: Vocabulary
    matrix: SparseMatrix
    idf: np.ndarray
    n_docs: int


def build_tfidf(docs: Sequence[TokenizedDoc], min_df_fraction: float = 0.025) -> TfidfModel:
    vocab = build_vocabulary(docs, min_df_fraction)
    tf = term_frequency_matrix(docs, vocab)
    idf = idf_weights(tf, len(docs))
    return TfidfModel(vocab=vocab, matrix=tfidf_matrix(tf, idf), idf=idf,
                      n_docs=len(docs))


def suggest_phrases(docs: Sequence[TokenizedDoc], max_n: int = 3,
                    min_df_fraction: float = 0.025) -> list[tuple[str, int]]:
    """Contiguous bigram/trigram candidates above the document-frequency cut.

    Input should be preprocessed WITHOUT phrase merging. Ranked by document
    frequency (ties alphabetical); feeds expert curation of the phrase file.
    A trigram and its inner bigram can both appear - curation decides.
    """
    if max_n not in (2, 3):
        raise ValueError("max_n must be 2 or 3")
    df: dict[str, int] = {}
    for doc in docs:
        grams: set[str] = set()
        toks = doc.tokens
        for n in range(2, max_n + 1):
            for i in range(len(toks) - n + 1):
                grams.add(" ".join(toks[i:i + n]))
        for g in grams:
            df[g] = df.get(g, 0) + 1
    threshold = min_df_threshold(min_df_fraction, len(docs)) if docs else 1
    kept = [(g, n) for g, n in df.items() if n >= threshold]
    kept.sort(key=lambda item: (-item[1], item[0]))
    return kept


_HEADER_KEYS = ("rows", "cols", "nnz")
_TRIPLET = struct.Struct("<IId")


def write_matrix(matrix: SparseMatrix, path: str | Path) -> None:
    """JSON header line + little-endian (u32 row, u32 col, f64 value) stream."""
    header = json.dumps({"rows": matrix.rows, "cols": matrix.cols, "nnz": matrix.nnz},
                        sort_keys=True)
    with open(path, "wb") as fh:
        fh.write(header.encode("utf-8") + b"\n")
        for r, c, v in zip(matrix.row_idx, matrix.col_idx, matrix.values):
            fh.write(_TRIPLET.pack(int(r), int(c), float(v)))


def read_matrix(path: str | Path) -> SparseMatrix:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode("utf-8"))
        if set(header) != set(_HEADER_KEYS):
            raise DataError(f"bad matrix header in {path}")
        blob = fh.read()
    if len(blob) != header["nnz"] * _TRIPLET.size:
        raise DataError(f"matrix payload size mismatch in {path}")
    triplets = [_TRIPLET.unpack_from(blob, i * _TRIPLET.size) for i in range(header["nnz"])]
    return _make_sparse(header["rows"], header["cols"], triplets)


def write_matrix_text(matrix: SparseMatrix, path: str | Path) -> None:
    """Plain-text triplets (row col value) for debugging."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{matrix.rows} {matrix.cols} {matrix.nnz}\n")
        for r, c, v in zip(matrix.row_idx, matrix.col_idx, matrix.values):
            fh.write(f"{r} {c} {v!r}\n")
