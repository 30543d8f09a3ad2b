import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def table1_doc():
    from kvdsum.corpus import load_corpus

    return load_corpus(FIXTURES / "table1.jsonl")[0]


@pytest.fixture(scope="session")
def table1_parses():
    from kvdsum.propositions import read_conllu

    return read_conllu(FIXTURES / "table1.conllu")


@pytest.fixture(scope="session")
def table1_props(table1_doc, table1_parses):
    from kvdsum.propositions import extract_document

    return extract_document(table1_doc, table1_parses)


@pytest.fixture(scope="session")
def table1_golden_props():
    from kvdsum.propositions import prop_from_dict

    raw = json.loads((FIXTURES / "table1.props.json").read_text())
    return [prop_from_dict(p) for p in raw]
