import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles.py

from fcm.lexicon import Lexicon, load_lexicon


@pytest.fixture(scope="session")
def bundled_lexicon() -> Lexicon:
    return load_lexicon()


@pytest.fixture
def table1_lexicon(tmp_path) -> Lexicon:
    """Bundled stopwords/lemmas plus a small phrase + synonym dictionary."""
    phrases = tmp_path / "phrases.txt"
    phrases.write_text(
        "upper annular element\nannular element\npressure test\nblind shear ram\n",
        encoding="utf-8")
    synonyms = tmp_path / "synonyms.txt"
    synonyms.write_text("scuffing => scoring\nscratch => scoring\n", encoding="utf-8")
    return load_lexicon(phrase_path=phrases, synonym_path=synonyms)


def write_jsonl(path: Path, rows: list[dict]) -> Path:
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return path


@pytest.fixture
def small_records(tmp_path):
    rows = [
        {"record_id": "r1", "component": "annular",
         "description": "The upper annular element leaks.", "downtime_hours": 4.0},
        {"record_id": "r2", "component": "annular",
         "description": "Seal FAILED; leak observed.", "event_date": "2017-03-02"},
        {"record_id": "r3", "component": "regulator",
         "description": "Pressure test passed after seal replacement."},
        {"record_id": "r4", "component": "ccsv",
         "description": "Solenoid valve vent drips during soak test."},
    ]
    return write_jsonl(tmp_path / "records.jsonl", rows)
