"""The four preprocessing dictionaries: stopwords, phrases, synonyms, lemmas.

All four files are UTF-8, line oriented; '#' starts a comment and blank
lines are skipped. Phrases are one per line ("annular element"); synonyms
use "variant => canonical"; lemmas use "form<TAB>lemma" or
"form<TAB>pos<TAB>lemma" with pos in {noun, verb, adj, adv}.
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import DataError

POS_TAGS = ("noun", "verb", "adj", "adv")


class PhraseArity(DataError):
    def __init__(self, line: str):
        self.line = line
        super().__init__(f"phrase must have 2 or 3 words: {line!r}")


class SynonymCycle(DataError):
    def __init__(self, token: str):
        self.token = token
        super().__init__(f"synonym target {token!r} is itself a variant (chain or cycle)")


class DuplicateKey(DataError):
    def __init__(self, token: str, file: str):
        self.token = token
        self.file = file
        super().__init__(f"duplicate key {token!r} in {file}")


@dataclass(frozen=True)
class Lexicon:
    """Immutable after load; safe to share across threads."""

    stopwords: frozenset[str] = frozenset()
    phrases: tuple[tuple[str, ...], ...] = ()
    synonyms: dict[str, str] = field(default_factory=dict)
    # surface form -> {pos or None: lemma}
    lemmas: dict[str, dict[str | None, str]] = field(default_factory=dict)

    def phrase_strings(self) -> tuple[str, ...]:
        return tuple(" ".join(p) for p in self.phrases)


def _norm(text: str) -> str:
    return unicodedata.normalize("NFKC", text).lower()


def _lines(path: Path) -> list[str]:
    out = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append(line)
    return out


def _bundled(name: str) -> Path:
    return Path(str(resources.files("fcm") / "data" / name))


def _load_stopwords(path: Path) -> frozenset[str]:
    return frozenset(_norm(line) for line in _lines(path))


def _load_phrases(path: Path) -> tuple[tuple[str, ...], ...]:
    phrases: list[tuple[str, ...]] = []
    seen: set[tuple[str, ...]] = set()
    for line in _lines(path):
        words = tuple(_norm(line).split())
        if len(words) not in (2, 3):
            raise PhraseArity(line)
        if words in seen:
            raise DuplicateKey(" ".join(words), path.name)
        seen.add(words)
        phrases.append(words)
    return tuple(phrases)


def _load_synonyms(path: Path) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for line in _lines(path):
        if "=>" not in line:
            raise DataError(f"synonym line must be 'variant => canonical': {line!r}")
        variant, _, canonical = (part.strip() for part in line.partition("=>"))
        variant, canonical = _norm(variant), _norm(canonical)
        if not variant or not canonical:
            raise DataError(f"synonym line must be 'variant => canonical': {line!r}")
        if variant in mapping:
            raise DuplicateKey(variant, path.name)
        mapping[variant] = canonical
    for variant, canonical in mapping.items():
        if canonical in mapping:
            raise SynonymCycle(canonical)
    return mapping


def _load_lemmas(path: Path) -> dict[str, dict[str | None, str]]:
    table: dict[str, dict[str | None, str]] = {}
    for line in _lines(path):
        parts = [p.strip() for p in line.split("\t")]
        if len(parts) == 2:
            form, pos, lemma = parts[0], None, parts[1]
        elif len(parts) == 3:
            form, pos, lemma = parts
            if pos not in POS_TAGS:
                raise DataError(f"unknown pos tag {pos!r} in lemma line {line!r}")
        else:
            raise DataError(f"lemma line must have 2 or 3 tab-separated fields: {line!r}")
        form, lemma = _norm(form), _norm(lemma)
        if not lemma:
            raise DataError(f"empty lemma target in line {line!r}")
        entry = table.setdefault(form, {})
        if pos in entry:
            raise DuplicateKey(form, path.name)
        entry[pos] = lemma
    return table


def load_lexicon(stopword_path: str | Path | None = None,
                 phrase_path: str | Path | None = None,
                 synonym_path: str | Path | None = None,
                 lemma_path: str | Path | None = None) -> Lexicon:
    """Load the four dictionaries; missing paths fall back to bundled defaults.

    Stopwords default to the bundled English list and lemmas to the bundled
    inflection table; phrases and synonyms default to empty, since useful
    entries are corpus-specific and expert-curated.
    """
    stop = _load_stopwords(Path(stopword_path) if stopword_path else _bundled("stopwords.txt"))
    phrases = _load_phrases(Path(phrase_path)) if phrase_path else ()
    synonyms = _load_synonyms(Path(synonym_path)) if synonym_path else {}
    lemmas = _load_lemmas(Path(lemma_path) if lemma_path else _bundled("lemmas.tsv"))
    return Lexicon(stopwords=stop, phrases=phrases, synonyms=synonyms, lemmas=lemmas)


def validate_lexicon(lex: Lexicon) -> list[str]:
    """Cross-dictionary consistency warnings; an empty list means clean."""
    warnings: list[str] = []
    for phrase in lex.phrases:
        hit = [w for w in phrase if w in lex.stopwords]
        if hit:
            warnings.append(
                f"phrase '{' '.join(phrase)}' contains stopword(s) {hit}; "
                "merge runs before stopword removal, so it still matches")
    for variant in lex.synonyms:
        if variant in lex.lemmas:
            warnings.append(
                f"synonym variant {variant!r} shadows a lemma key; "
                "synonym mapping runs first, so the lemma entry is unreachable")
    for form, entry in lex.lemmas.items():
        for lemma in entry.values():
            if lemma in lex.lemmas:
                warnings.append(
                    f"lemma target {lemma!r} (from {form!r}) is itself a lemma key; "
                    "lemmatization will not be idempotent")
    for variant, canonical in lex.synonyms.items():
        if canonical in lex.stopwords:
            warnings.append(
                f"synonym canonical {canonical!r} (from {variant!r}) is a stopword "
                "and will be dropped")
    return warnings
