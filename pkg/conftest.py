"""
Shared fixtures and hypothesis strategies.
"""
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from config import settings as app_settings
from models.signal import Signal
from utils.prng import SplitMix64


@st.composite
def ternary_signals(draw, max_width: int = 24, min_width: int = 1):
    """Signals with values in {-1, 0, 1} at a random offset."""
    width = draw(st.integers(min_value=min_width, max_value=max_width))
    values = draw(st.lists(st.sampled_from((-1, 0, 1)), min_size=width, max_size=width))
    offset = draw(st.integers(min_value=-5, max_value=5))
    return Signal.from_values(offset, values)


@st.composite
def bounded_signals(draw, max_width: int = 16, min_width: int = 1):
    """Complex signals with |f| <= 1, drawn through SplitMix64 from a hypothesis seed."""
    width = draw(st.integers(min_value=min_width, max_value=max_width))
    seed = draw(st.integers(min_value=0, max_value=2**64 - 1))
    offset = draw(st.integers(min_value=-3, max_value=3))
    return Signal.from_values(offset, SplitMix64(seed).bounded_complex(width), exact=False)


@st.composite
def subsets(draw, n: int = 30):
    """Subsets of [n]."""
    return sorted(draw(st.sets(st.integers(min_value=1, max_value=n))))


@pytest.fixture
def rng() -> SplitMix64:
    return SplitMix64(20240607)


@pytest.fixture
def interval8() -> Signal:
    return Signal.interval(8)


@pytest.fixture
def alternating20() -> Signal:
    """(-1)^x on [20]."""
    return Signal.from_values(1, [(-1) ** x for x in range(1, 21)])


@pytest.fixture
def set_file(tmp_path):
    """Write a set file and return its path."""
    def write(elements, name: str = "A.txt"):
        path = tmp_path / name
        path.write_text("".join(f"{x}\n" for x in elements), encoding="utf-8")
        return path
    return write


@pytest.fixture
def threads(monkeypatch):
    """Set the worker-thread count for one test."""
    def use(n: int):
        monkeypatch.setattr(app_settings, "UNIFORMITY_THREADS", n)
    return use


def assert_close(a, b, tol: float = 1e-9) -> None:
    scale = max(1.0, abs(a), abs(b))
    assert abs(a - b) <= tol * scale, f"{a} != {b}"


settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")
