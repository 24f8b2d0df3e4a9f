"""Staged pipeline over a persistent run directory.

Stage order: ingest -> preprocess -> vectorize -> decompose -> report.
Every stage records a digest of its inputs (upstream artifacts plus the
config keys it reads); rerunning an unchanged stage is a no-op, and a
stage whose upstream digests no longer match fails with StaleArtifact
until the upstream stage is rerun. One writer per run directory,
enforced with a lock file.
"""
from __future__ import annotations

import datetime
import hashlib
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
import numpy as np

from . import __version__, jsonio
from .concepts import DEFAULT_DOC_LIMIT, DEFAULT_TERM_LIMIT, ConceptModel, \
    build_concept_model, model_to_json_dict
from .corpus import DEFAULT_COMPONENTS, load_records, segment_by_component, write_records
from .errors import DataError
from .lexicon import load_lexicon
from .preprocess import dump_tokens, load_tokens, preprocess_records
from .svd import SvdFactors, svd_exact, svd_truncated
from .vectorize import Vocabulary, build_vocabulary, idf_weights, read_matrix, \
    term_frequency_matrix, tfidf_matrix, write_matrix

STAGES = ("ingest", "preprocess", "vectorize", "decompose", "report")

RECORDS_FILE = "records.jsonl"
TOKENS_FILE = "tokens.tsv"
TFIDF_FILE = "tfidf.bin"
VOCAB_FILE = "vocab.json"
FACTORS_DIR = "factors"
CONCEPTS_FILE = "concepts.json"
MANIFEST_FILE = "manifest.json"
LOCK_FILE = ".lock"


class MissingPrerequisite(DataError):
    def __init__(self, stage: str):
        self.stage = stage
        super().__init__(f"stage {stage!r} has not produced its artifacts yet")


class StaleArtifact(DataError):
    def __init__(self, stage: str):
        self.stage = stage
        super().__init__(
            f"artifacts of stage {stage!r} are stale (inputs changed); rerun it first")


class RunLocked(DataError):
    pass


@dataclass(frozen=True)
class Config:
    """Effective pipeline configuration (defaults: 2.5% min-df, 10 concepts,
    25 terms and 10 documents per concept, seed 42)."""

    input: str | None = None
    component: str | None = None
    components: tuple[str, ...] | None = DEFAULT_COMPONENTS
    stopwords: str | None = None
    phrases: str | None = None
    synonyms: str | None = None
    lemmas: str | None = None
    drop_numeric: bool = False
    min_df: float = 0.025
    k: int = 10
    seed: int = 42
    exact: bool = False
    terms: int = DEFAULT_TERM_LIMIT
    docs: int = DEFAULT_DOC_LIMIT
    sigma_scaled: bool = False

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "Config":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "components" in raw and raw["components"] is not None:
            raw = dict(raw)
            raw["components"] = tuple(raw["components"])
        return cls(**raw)

    @classmethod
    def from_file(cls, path: str | Path) -> "Config":
        return cls.from_dict(jsonio.load(path))

    def override(self, **kwargs) -> "Config":
        """Apply non-None overrides (CLI flags beat file values)."""
        updates = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **updates) if updates else self


@dataclass
class RunManifest:
    run_id: str
    tool_version: str
    config_snapshot: dict
    input_digest: str
    stages: dict[str, dict]

    @property
    def stages_completed(self) -> list[str]:
        return [s for s in STAGES if s in self.stages]

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "tool_version": self.tool_version,
            "stages_completed": self.stages_completed,
            "config_snapshot": self.config_snapshot,
            "input_digest": self.input_digest,
            "stages": self.stages,
        }


def _sha256(*chunks: bytes) -> str:
    h = hashlib.sha256()
    for chunk in chunks:
        h.update(chunk)
    return h.hexdigest()


def _file_digest(path: Path) -> str:
    return _sha256(path.read_bytes())


def _config_subset(config: Config, keys: tuple[str, ...]) -> bytes:
    return jsonio.dumps({k: config.to_dict()[k] for k in keys}).encode("utf-8")


class _Lock:
    """Single-writer lock on a run directory (O_EXCL lock file)."""

    def __init__(self, run_dir: Path):
        self.path = run_dir / LOCK_FILE

    def __enter__(self):
        try:
            fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise RunLocked(f"run directory is locked by another writer: {self.path}")
        with os.fdopen(fd, "w") as fh:
            fh.write(str(os.getpid()))
        return self

    def __exit__(self, *exc):
        try:
            self.path.unlink()
        except FileNotFoundError:
            pass


# ---------------------------------------------------------------------------
# stage definitions

def _lexicon_paths(config: Config) -> list[Path]:
    return [Path(p) for p in (config.stopwords, config.phrases,
                              config.synonyms, config.lemmas) if p]


def _stage_config_keys(stage: str) -> tuple[str, ...]:
    # "input" is deliberately absent from the ingest keys: the file's bytes
    # are hashed directly, so moving an identical file is not a change
    return {
        "ingest": ("component", "components"),
        "preprocess": ("stopwords", "phrases", "synonyms", "lemmas", "drop_numeric"),
        "vectorize": ("min_df",),
        "decompose": ("k", "seed", "exact"),
        "report": ("terms", "docs", "sigma_scaled", "component"),
    }[stage]


def _stage_input_files(stage: str, config: Config, run_dir: Path) -> list[Path]:
    if stage == "ingest":
        return [Path(config.input)] if config.input else []
    if stage == "preprocess":
        return [run_dir / RECORDS_FILE] + _lexicon_paths(config)
    if stage == "vectorize":
        return [run_dir / TOKENS_FILE]
    if stage == "decompose":
        return [run_dir / TFIDF_FILE]
    return [run_dir / FACTORS_DIR / "manifest.json", run_dir / FACTORS_DIR / "g.f64",
            run_dir / FACTORS_DIR / "s.f64", run_dir / FACTORS_DIR / "d.f64",
            run_dir / VOCAB_FILE, run_dir / TOKENS_FILE]


def _stage_outputs(stage: str, run_dir: Path) -> list[Path]:
    return {
        "ingest": [run_dir / RECORDS_FILE],
        "preprocess": [run_dir / TOKENS_FILE],
        "vectorize": [run_dir / TFIDF_FILE, run_dir / VOCAB_FILE],
        "decompose": [run_dir / FACTORS_DIR / "manifest.json",
                      run_dir / FACTORS_DIR / "g.f64",
                      run_dir / FACTORS_DIR / "s.f64",
                      run_dir / FACTORS_DIR / "d.f64"],
        "report": [run_dir / CONCEPTS_FILE],
    }[stage]


def _stage_input_digest(stage: str, config: Config, run_dir: Path) -> str | None:
    """Digest of everything the stage consumes; None when inputs are absent."""
    files = _stage_input_files(stage, config, run_dir)
    chunks = [_config_subset(config, _stage_config_keys(stage))]
    for path in files:
        if not path.is_file():
            return None
        chunks.append(path.read_bytes())
    return _sha256(*chunks)


def _write_array(path: Path, array: np.ndarray) -> None:
    jsonio.atomic_write_bytes(path, np.ascontiguousarray(array, dtype="<f8").tobytes())


def _read_array(path: Path, shape: tuple[int, ...]) -> np.ndarray:
    return np.frombuffer(path.read_bytes(), dtype="<f8").reshape(shape).copy()


def write_factors(factors: SvdFactors, directory: Path, *, k: int, seed: int) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    _write_array(directory / "g.f64", factors.g)
    _write_array(directory / "s.f64", factors.s)
    _write_array(directory / "d.f64", factors.d)
    jsonio.dump({
        "m": factors.m,
        "k_requested": k,
        "seed": seed,
        "rank_deficient": factors.rank_deficient,
        "g_shape": list(factors.g.shape),
        "s_len": int(factors.s.shape[0]),
        "d_shape": list(factors.d.shape),
        "g_file": "g.f64",
        "s_file": "s.f64",
        "d_file": "d.f64",
    }, directory / "manifest.json")


def read_factors(directory: Path) -> SvdFactors:
    meta = jsonio.load(directory / "manifest.json")
    return SvdFactors(
        g=_read_array(directory / meta["g_file"], tuple(meta["g_shape"])),
        s=_read_array(directory / meta["s_file"], (meta["s_len"],)),
        d=_read_array(directory / meta["d_file"], tuple(meta["d_shape"])),
        m=meta["m"],
        rank_deficient=meta["rank_deficient"],
    )


def _run_ingest(config: Config, run_dir: Path) -> dict:
    if not config.input:
        raise DataError("ingest requires an input file (config key 'input')")
    records = load_records(config.input, allowed_components=(
        tuple(config.components) if config.components else None))
    if config.component:
        records = segment_by_component(records, config.component)
    write_records(records, run_dir / (RECORDS_FILE + ".tmp"))
    os.replace(run_dir / (RECORDS_FILE + ".tmp"), run_dir / RECORDS_FILE)
    return {"record_count": len(records)}


def _run_preprocess(config: Config, run_dir: Path) -> dict:
    records = load_records(run_dir / RECORDS_FILE, allowed_components=None)
    lex = load_lexicon(config.stopwords, config.phrases, config.synonyms, config.lemmas)
    docs, empty_ids = preprocess_records(records, lex, drop_numeric=config.drop_numeric)
    dump_tokens(docs, run_dir / (TOKENS_FILE + ".tmp"))
    os.replace(run_dir / (TOKENS_FILE + ".tmp"), run_dir / TOKENS_FILE)
    return {"doc_count": len(docs), "empty_records": empty_ids}


def _run_vectorize(config: Config, run_dir: Path) -> dict:
    docs = load_tokens(run_dir / TOKENS_FILE)
    vocab = build_vocabulary(docs, config.min_df)
    tf = term_frequency_matrix(docs, vocab)
    idf = idf_weights(tf, len(docs))
    weighted = tfidf_matrix(tf, idf)
    write_matrix(weighted, run_dir / (TFIDF_FILE + ".tmp"))
    os.replace(run_dir / (TFIDF_FILE + ".tmp"), run_dir / TFIDF_FILE)
    jsonio.dump({
        "terms": list(vocab.terms),
        "doc_freq": list(vocab.doc_freq),
        "min_df_fraction": vocab.min_df_fraction,
        "idf": [float(x) for x in idf],
        "n_docs": len(docs),
    }, run_dir / VOCAB_FILE)
    return {"vocab_size": len(vocab), "nnz": weighted.nnz}


def _run_decompose(config: Config, run_dir: Path) -> dict:
    matrix = read_matrix(run_dir / TFIDF_FILE)
    k = min(config.k, matrix.rows, matrix.cols)
    if config.exact:
        factors = svd_exact(matrix)
        factors = factors.truncated(min(k, factors.m))
    else:
        factors = svd_truncated(matrix, k, seed=config.seed)
    write_factors(factors, run_dir / FACTORS_DIR, k=k, seed=config.seed)
    return {"m": factors.m, "rank_deficient": factors.rank_deficient}


def _effective_component(config: Config, run_dir: Path) -> str:
    if config.component:
        return config.component
    records = load_records(run_dir / RECORDS_FILE, allowed_components=None)
    tags = {r.component for r in records}
    return tags.pop() if len(tags) == 1 else "all"


def _run_report(config: Config, run_dir: Path) -> dict:
    model = load_concept_model(run_dir, component=_effective_component(config, run_dir))
    payload = model_to_json_dict(model, term_limit=config.terms, doc_limit=config.docs,
                                 sigma_scaled=config.sigma_scaled)
    jsonio.dump(payload, run_dir / CONCEPTS_FILE)
    return {"k": model.k}


_STAGE_RUNNERS = {
    "ingest": _run_ingest,
    "preprocess": _run_preprocess,
    "vectorize": _run_vectorize,
    "decompose": _run_decompose,
    "report": _run_report,
}


def load_vocabulary(run_dir: Path) -> Vocabulary:
    raw = jsonio.load(Path(run_dir) / VOCAB_FILE)
    return Vocabulary(terms=tuple(raw["terms"]), doc_freq=tuple(raw["doc_freq"]),
                      min_df_fraction=raw["min_df_fraction"])


def load_concept_model(run_dir: str | Path, component: str | None = None) -> ConceptModel:
    """Rebuild the full ConceptModel from run artifacts (factors + vocab)."""
    run_dir = Path(run_dir)
    factors = read_factors(run_dir / FACTORS_DIR)
    vocab = load_vocabulary(run_dir)
    docs = load_tokens(run_dir / TOKENS_FILE)
    return build_concept_model(factors, factors.m, vocab,
                               [d.record_id for d in docs], component or "all")


def _load_manifest(run_dir: Path) -> RunManifest | None:
    path = run_dir / MANIFEST_FILE
    if not path.is_file():
        return None
    raw = jsonio.load(path)
    return RunManifest(
        run_id=raw["run_id"],
        tool_version=raw["tool_version"],
        config_snapshot=raw["config_snapshot"],
        input_digest=raw["input_digest"],
        stages=raw["stages"],
    )


def _save_manifest(manifest: RunManifest, run_dir: Path) -> None:
    jsonio.dump(manifest.to_dict(), run_dir / MANIFEST_FILE)


def _fresh_manifest(config: Config, run_dir: Path) -> RunManifest:
    input_path = Path(config.input) if config.input else None
    input_digest = (_file_digest(input_path)
                    if input_path and input_path.is_file() else "")
    run_id = _sha256(input_digest.encode("utf-8"),
                     jsonio.dumps(config.to_dict()).encode("utf-8"))[:12]
    return RunManifest(
        run_id=run_id,
        tool_version=__version__,
        config_snapshot=config.to_dict(),
        input_digest=input_digest,
        stages={},
    )


def run_stage(stage: str, config: Config, run_dir: str | Path) -> RunManifest:
    """Execute one stage (or no-op when its recorded digest still matches)."""
    if stage not in STAGES:
        raise ValueError(f"unknown stage {stage!r}; expected one of {STAGES}")
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    with _Lock(run_dir):
        return _run_stage_locked(stage, config, run_dir)


def _run_stage_locked(stage: str, config: Config, run_dir: Path) -> RunManifest:
    manifest = _load_manifest(run_dir) or _fresh_manifest(config, run_dir)
    position = STAGES.index(stage)

    for prior in STAGES[:position]:
        if prior not in manifest.stages or not all(
                p.is_file() for p in _stage_outputs(prior, run_dir)):
            raise MissingPrerequisite(prior)
        current = _stage_input_digest(prior, config, run_dir)
        if current is not None and current != manifest.stages[prior]["input_digest"]:
            raise StaleArtifact(prior)

    digest = _stage_input_digest(stage, config, run_dir)
    if digest is None:
        missing = [str(p) for p in _stage_input_files(stage, config, run_dir)
                   if not p.is_file()]
        raise DataError(f"stage {stage!r} inputs missing: {missing}")

    entry = manifest.stages.get(stage)
    outputs_present = all(p.is_file() for p in _stage_outputs(stage, run_dir))
    if entry and entry["input_digest"] == digest and outputs_present:
        return manifest  # no-op: nothing changed

    info = _STAGE_RUNNERS[stage](config, run_dir)
    manifest.config_snapshot = config.to_dict()
    if stage == "ingest":
        manifest.input_digest = _file_digest(Path(config.input))
    # downstream entries stay in the manifest: their recorded digests now
    # mismatch, which is what surfaces StaleArtifact until they are rerun
    manifest.stages[stage] = {
        "input_digest": digest,
        "completed_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        **info,
    }
    _save_manifest(manifest, run_dir)
    return manifest


def run_all(config: Config, run_dir: str | Path) -> RunManifest:
    """Sequential composition of the five stages."""
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    with _Lock(run_dir):
        for stage in STAGES:
            manifest = _run_stage_locked(stage, config, run_dir)
        return manifest
