from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from idemext.basecat import balanced
from idemext.config import load_config
from idemext.exactlin import PrimeField
from idemext.quiverrep import Quiver, Rep

settings.register_profile(
    "default", deadline=None, max_examples=40, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

FIXTURES = __import__("pathlib").Path(__file__).resolve().parents[1] / "fixtures"

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record_acceptance(n: int, ok: bool, detail: str) -> None:
    _ACCEPTANCE[n] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")


@pytest.fixture(scope="session")
def a2():
    return load_config(FIXTURES / "a2_balanced.json")


@pytest.fixture(scope="session")
def a3():
    return load_config(FIXTURES / "a3_balanced.json")


@pytest.fixture(scope="session")
def a2_formal():
    return load_config(FIXTURES / "a2_formal.json")


primes = st.sampled_from([2, 3])


@st.composite
def matrices(draw, p=None, max_rows=4, max_cols=4):
    p = draw(primes) if p is None else p
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    flat = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return PrimeField(p), np.array(flat, dtype=np.int64).reshape(r, c)


@st.composite
def reps(draw, quiver: Quiver, field: PrimeField, max_dim: int = 2, dims=None):
    if dims is None:
        dims = tuple(draw(st.integers(0, max_dim)) for _ in range(quiver.vertices))
    maps = []
    for s, t in quiver.arrows:
        flat = draw(st.lists(st.integers(0, field.p - 1), min_size=dims[t] * dims[s], max_size=dims[t] * dims[s]))
        maps.append(field.matrix(np.array(flat, dtype=np.int64).reshape(dims[t], dims[s]), shape=(dims[t], dims[s])))
    return Rep(quiver, field, dims, tuple(maps))


def grid_categories():
    return [balanced(Quiver.linear(n), PrimeField(p)) for p in (2, 3) for n in (2, 3)]
