"""
Deterministic SplitMix64 generator.

Every randomized path (fixtures, Monte Carlo pair sampling, verify trials)
draws from this generator so a stream is reproducible from its seed alone,
in any implementation:

    state  <- (state + 0x9E3779B97F4A7C15) mod 2**64
    z      <- state
    z      <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    output <- z ^ (z >> 31)

``random()`` maps an output to ``(output >> 11) * 2**-53``. Since the state
only ever advances by the golden-ratio increment, the i-th output depends on
``seed + i * increment`` alone, which is what the vectorized block draws use.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 stream with scalar and numpy block draws."""

    INCREMENT = 0x9E3779B97F4A7C15
    MIX1 = 0xBF58476D1CE4E5B9
    MIX2 = 0x94D049BB133111EB

    def __init__(self, seed: int = 0):
        self._seed = int(seed) & MASK64
        self.state = self._seed

    @property
    def seed(self) -> int:
        return self._seed

    @classmethod
    def mix(cls, z: int) -> int:
        z = ((z ^ (z >> 30)) * cls.MIX1) & MASK64
        z = ((z ^ (z >> 27)) * cls.MIX2) & MASK64
        return z ^ (z >> 31)

    def next_u64(self) -> int:
        self.state = (self.state + self.INCREMENT) & MASK64
        return self.mix(self.state)

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi] (inclusive)."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]

    def block_u64(self, n: int) -> np.ndarray:
        """The next ``n`` outputs as a uint64 array; advances the state by ``n``."""
        steps = np.arange(1, n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.state) + steps * np.uint64(self.INCREMENT)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(self.MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(self.MIX2)
            z = z ^ (z >> np.uint64(31))
        self.state = (self.state + n * self.INCREMENT) & MASK64
        return z

    def block_random(self, n: int) -> np.ndarray:
        """The next ``n`` uniforms in [0, 1)."""
        return (self.block_u64(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def signs(self, n: int) -> np.ndarray:
        """Random +-1 integers."""
        return np.where(self.block_random(n) < 0.5, 1, -1).astype(np.int64)

    def unit_complex(self, n: int) -> np.ndarray:
        """Random points on the unit circle."""
        return np.exp(2j * np.pi * self.block_random(n))

    def bounded_complex(self, n: int) -> np.ndarray:
        """Random complex values of modulus at most one."""
        radius = self.block_random(n)
        return radius * self.unit_complex(n)

    def subset(self, n: int, density: float = 0.5) -> list[int]:
        """Random subset of [1, n], each element kept with probability ``density``."""
        keep = self.block_random(n) < density
        return [int(x) for x in np.flatnonzero(keep) + 1]


def trial_seeds(seed: int, trials: int) -> list[int]:
    """Per-trial seeds of a verify suite: successive outputs of ``SplitMix64(seed)``."""
    rng = SplitMix64(seed)
    return [rng.next_u64() for _ in range(trials)]
