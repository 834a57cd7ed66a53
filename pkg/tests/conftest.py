from pathlib import Path

import pytest

from pntverify import zeros

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
ZERO_FILE = DATA_DIR / "zeros_100k.txt"


@pytest.fixture(scope="session")
def zero_table() -> zeros.ZeroTable:
    """The bundled 100k-zero table, parsed once per test session."""
    return zeros.ingest(ZERO_FILE)
