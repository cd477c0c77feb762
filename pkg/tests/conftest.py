import hashlib

import pytest

from vivc import hashing
from vivc.prover import evaluate
from vivc.trusted_setup import trusted_setup


@pytest.fixture(scope="session")
def kp():
    return trusted_setup(128, b"ceremony-1")


@pytest.fixture(scope="session")
def x():
    return hashlib.sha256(b"statement").digest()


@pytest.fixture(scope="session")
def honest(kp, x):
    """(proof, trace) for T=1024, c=32, k=20."""
    return evaluate(kp, x, b"witness", 1024, 32, 20, rng_seed=b"fixture")


@pytest.fixture
def raw_sha_calls(monkeypatch):
    """Counts every SHA-256 object created through the package, independent of the tag counter."""
    calls = {"n": 0}
    real = hashlib.sha256

    def counting(data=b""):
        calls["n"] += 1
        return real(data)

    monkeypatch.setattr(hashing, "_sha256", counting)
    return calls


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
