"""
DFT helpers: linear autocorrelation and exponential sums on a frequency grid.
"""
import numpy as np


def next_pow2(n: int) -> int:
    """Smallest power of two that is >= n (and >= 1)."""
    return 1 << max(0, int(n - 1).bit_length())


def autocorrelation(values: np.ndarray, exact: bool = False) -> np.ndarray:
    """
    Linear autocorrelation c(h) = sum_x f(x+h) * conj f(x) for |h| < W.

    Works on the last axis, so a 2-D array is treated as a batch of rows.
    The transform length is the smallest power of two >= 2W - 1, which makes
    the circular correlation equal to the linear one.

    Args:
        values: Array of shape (..., W)
        exact: Round to int64 (valid for integer inputs)

    Returns:
        Array of shape (..., 2W - 1) indexed by h + W - 1
    """
    width = values.shape[-1]
    length = next_pow2(2 * width - 1)
    spectrum = np.fft.fft(values, n=length, axis=-1)
    corr = np.fft.ifft(spectrum * np.conj(spectrum), axis=-1)
    corr = np.concatenate([corr[..., length - (width - 1):], corr[..., :width]], axis=-1)
    if exact:
        return np.rint(corr.real).astype(np.int64)
    return corr


def grid_sums(values: np.ndarray, length: int) -> np.ndarray:
    """
    Exponential sums S(j) = sum_n f_n e(j n / length) for j in [0, length).

    Requires length >= len(values).
    """
    return np.fft.ifft(values, n=length) * length


def exponential_sum(values: np.ndarray, positions: np.ndarray, beta: float) -> complex:
    """sum_n f_n e(beta * x_n) at a single real frequency."""
    return complex(np.sum(values * np.exp(2j * np.pi * beta * positions)))


def grid_sums_2d(values: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Two-dimensional analogue of ``grid_sums``."""
    return np.fft.ifft2(values, s=shape) * (shape[0] * shape[1])
