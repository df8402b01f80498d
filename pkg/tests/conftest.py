"""Shared fixtures: the hand-tallied corpus and its frozen oracle."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from poumetrics import analyze_paths, load_sample

CORPUS = Path(__file__).parent / "corpus"


@pytest.fixture(scope="session")
def oracle() -> dict:
    data = json.loads((CORPUS / "expected_metrics.json").read_text())
    return data["pous"]


@pytest.fixture(scope="session")
def corpus_sample():
    return load_sample([str(CORPUS)])


@pytest.fixture(scope="session")
def corpus_pous(corpus_sample) -> dict:
    return {p.name: p for p in corpus_sample.pous}


@pytest.fixture(scope="session")
def corpus_run():
    return analyze_paths([str(CORPUS)])
