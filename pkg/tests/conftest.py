"""
Shared fixtures for the toric blow-up engine test suite.

Everything here is exact and in-process: no network, no files outside
pytest's tmp_path.
"""

import random

import pytest
from click.testing import CliRunner

# ---------------------------------------------------------------------------
# Fixture data reused across tests
# ---------------------------------------------------------------------------

SEED = 20240611

# Semigroups from the A_n chart computations, as plain pairs
GAMMA_1 = [(1, 0), (1, 1), (1, 2)]
GAMMA_3 = [(1, 0), (1, 1), (3, 4)]
NON_NORMAL_A1 = [(1, 0), (1, 2)]

# The derivation ideal of A_n over Γ_n
def an_ideal_exps(n: int) -> list[tuple[int, int]]:
    return [(2, 0), (2, 1), (n + 1, n + 1)]


# ---------------------------------------------------------------------------
# Random sources
# ---------------------------------------------------------------------------

@pytest.fixture
def rng():
    """Reproducible random source for property suites."""
    return random.Random(SEED)


@pytest.fixture
def random_unimodular():
    """Draw a random 2x2 integer matrix with entries in [-5, 5] and determinant ±1."""
    from app.toric.lattice import Unimodular

    def _draw(rng: random.Random) -> Unimodular:
        while True:
            a, b, c, d = (rng.randint(-5, 5) for _ in range(4))
            if a * d - b * c in (1, -1):
                return Unimodular(a, b, c, d)

    return _draw


# ---------------------------------------------------------------------------
# Engine objects
# ---------------------------------------------------------------------------

@pytest.fixture
def gamma3():
    from app.toric.semigroup import gamma

    return gamma(3)


@pytest.fixture
def derivation_ideal():
    """Factory for the derivation ideal of A_n built by the full pipeline."""
    from app.algebra.matfact import derivation_ideal_An

    return derivation_ideal_An


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

@pytest.fixture
def runner(monkeypatch):
    """CliRunner with a clean toric environment."""
    for name in ("TORIC_THREADS", "TORIC_MAX_STEPS", "TORIC_NORMALIZE", "TORIC_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    return CliRunner()
