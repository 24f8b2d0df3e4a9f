"""Description-to-token pipeline.

Fixed stage order: normalize -> merge phrases -> map synonyms -> drop
stopwords -> lemmatize. Phrase and synonym stages run before stopword
removal so expert-authored patterns may contain words that would later be
dropped. Every stage is a pure function.
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .corpus import FailureRecord
from .errors import DataError
from .lexicon import Lexicon


class EmptyAfterPreprocessing(DataError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"record {record_id!r} has no tokens after preprocessing")


@dataclass(frozen=True)
class TokenizedDoc:
    record_id: str
    tokens: tuple[str, ...]

    @property
    def token_count(self) -> int:
        return len(self.tokens)


def normalize_text(raw: str) -> list[str]:
    """NFKC-normalize, lowercase, strip punctuation, split on whitespace.

    Hyphens and underscores survive inside tokens ("o-ring", previously
    merged n-grams); digits are kept. Accented letters fold to their base
    letter; any other non-alphanumeric character becomes a space, so tokens
    only ever contain [a-z0-9_-].
    """
    text = unicodedata.normalize("NFKC", raw).lower()
    chars = []
    for ch in unicodedata.normalize("NFKD", text):
        if ch.isascii() and (ch.isalnum() or ch in "-_"):
            chars.append(ch)
        elif not unicodedata.combining(ch):
            chars.append(" ")
    tokens = []
    for tok in "".join(chars).split():
        tok = tok.strip("-_")
        if tok:
            tokens.append(tok)
    return tokens


def merge_phrases(tokens: list[str], lex: Lexicon) -> list[str]:
    """Left-to-right scan joining dictionary phrases with underscores.

    Longest match wins at each position (trigrams before bigrams) and
    matches never overlap.
    """
    trigrams = {p for p in lex.phrases if len(p) == 3}
    bigrams = {p for p in lex.phrases if len(p) == 2}
    if not trigrams and not bigrams:
        return list(tokens)
    out: list[str] = []
    i = 0
    n = len(tokens)
    while i < n:
        if i + 3 <= n and tuple(tokens[i:i + 3]) in trigrams:
            out.append("_".join(tokens[i:i + 3]))
            i += 3
        elif i + 2 <= n and tuple(tokens[i:i + 2]) in bigrams:
            out.append("_".join(tokens[i:i + 2]))
            i += 2
        else:
            out.append(tokens[i])
            i += 1
    return out


def apply_synonyms(tokens: list[str], lex: Lexicon) -> list[str]:
    return [lex.synonyms.get(tok, tok) for tok in tokens]


def drop_stopwords(tokens: list[str], lex: Lexicon) -> list[str]:
    return [tok for tok in tokens if tok not in lex.stopwords]


def _guess_pos(token: str) -> str | None:
    """Crude suffix heuristics, only used to pick among pos-keyed lemma entries."""
    if token.endswith("ing") or token.endswith("ed"):
        return "verb"
    if token.endswith("ly"):
        return "adv"
    if token.endswith("est") or token.endswith("er"):
        return "adj"
    if token.endswith("s"):
        return "noun"
    return None


def lemmatize(tokens: list[str], lex: Lexicon) -> list[str]:
    """Dictionary lookup per token; underscore-joined n-grams pass through."""
    out = []
    for tok in tokens:
        if "_" in tok:
            out.append(tok)
            continue
        entry = lex.lemmas.get(tok)
        if not entry:
            out.append(tok)
            continue
        pos = _guess_pos(tok)
        if pos in entry:
            out.append(entry[pos])
        elif None in entry:
            out.append(entry[None])
        else:
            out.append(entry[sorted(entry, key=str)[0]])
    return out


def preprocess_record(rec: FailureRecord, lex: Lexicon, *,
                      drop_numeric: bool = False) -> TokenizedDoc:
    """Run the five stages in order and return the tokenized document.

    ``drop_numeric`` removes pure-digit tokens (kept by default: pressures
    and part numbers carry signal in failure text). Raises
    EmptyAfterPreprocessing when nothing survives; callers that need stable
    document indexing should catch it and keep an empty doc (see
    ``preprocess_records``).
    """
    tokens = normalize_text(rec.description)
    if drop_numeric:
        tokens = [t for t in tokens if not t.isdigit()]
    tokens = merge_phrases(tokens, lex)
    tokens = apply_synonyms(tokens, lex)
    tokens = drop_stopwords(tokens, lex)
    tokens = lemmatize(tokens, lex)
    if not tokens:
        raise EmptyAfterPreprocessing(rec.record_id)
    return TokenizedDoc(record_id=rec.record_id, tokens=tuple(tokens))


def preprocess_records(records, lex: Lexicon, *, drop_numeric: bool = False,
                       ) -> tuple[list[TokenizedDoc], list[str]]:
    """Preprocess a record iterable, keeping empty docs in place.

    Returns (docs, empty_record_ids). Empty records stay in the document
    index as zero columns so downstream matrices keep RecordSet order.
    """
    docs: list[TokenizedDoc] = []
    empty: list[str] = []
    for rec in records:
        try:
            docs.append(preprocess_record(rec, lex, drop_numeric=drop_numeric))
        except EmptyAfterPreprocessing:
            docs.append(TokenizedDoc(record_id=rec.record_id, tokens=()))
            empty.append(rec.record_id)
    return docs, empty


def dump_tokens(docs, path) -> None:
    """Debug/interchange dump: one line per record, id<TAB>space-joined tokens."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(f"{doc.record_id}\t{' '.join(doc.tokens)}\n")


def load_tokens(path) -> list[TokenizedDoc]:
    docs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            record_id, _, joined = line.partition("\t")
            tokens = tuple(joined.split()) if joined else ()
            docs.append(TokenizedDoc(record_id=record_id, tokens=tokens))
    return docs
