import os

os.environ.setdefault("LOG_FILE", "")

import pytest

from cone_cert import verdict_conflicts


@pytest.fixture(scope="session", autouse=True)
def no_conflicting_verdicts():
    """No (f, cone) pair may be both certified and refuted anywhere in the run."""
    yield
    conflicts = verdict_conflicts()
    assert not conflicts, f"certified and refuted: {conflicts}"
