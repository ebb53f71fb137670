"""
Преобразования Фурье произвольной длины по последней оси.

Прямое преобразование ненормировано и берется с ПОЛОЖИТЕЛЬНЫМ знаком экспоненты:
    out[k] = sum_j v[j] * exp(+2*pi*i*j*k/n),
так что out[k] совпадает со значением многочлена с коэффициентами v в точке omega_n^k.
Обратное делит на n; только матрица Фурье несет множитель 1/sqrt(n).
"""
from functools import lru_cache

import numpy as np

from core.errors import SizeError


FOURIER_MATRIX_CAP = 2048


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def _next_power_of_two(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@lru_cache(maxsize=64)
def _bit_reversal(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return _frozen(rev)


@lru_cache(maxsize=128)
def _twiddles(size: int, sign: int) -> np.ndarray:
    return _frozen(np.exp(sign * 2j * np.pi * np.arange(size // 2) / size))


@lru_cache(maxsize=64)
def _chirp(n: int, sign: int) -> np.ndarray:
    m = np.arange(n, dtype=np.int64)
    # m^2 mod 2n держит аргумент экспоненты малым
    return _frozen(np.exp(sign * 1j * np.pi * ((m * m) % (2 * n)) / n))


def fft_radix2(v, sign: int = 1) -> np.ndarray:
    """
    Итеративное БПФ по основанию 2 (длина обязана быть степенью двойки).

    Аргументы:
        v: массив (..., n) комплексных чисел.
        sign (int): +1 для прямого преобразования в нашей конвенции, -1 для сопряженного ядра.

    Возвращает:
        np.ndarray: ненормированное преобразование той же формы.
    """
    x = np.asarray(v, dtype=np.complex128)
    n = x.shape[-1]
    if not _is_power_of_two(n):
        raise ValueError(f'radix-2 transform needs a power-of-two length, got {n}')
    lead = x.shape[:-1]
    x = x[..., _bit_reversal(n)]
    size = 2
    while size <= n:
        half = size // 2
        blocks = x.reshape(lead + (n // size, size))
        even = blocks[..., :half]
        odd = blocks[..., half:] * _twiddles(size, sign)
        x = np.concatenate((even + odd, even - odd), axis=-1).reshape(lead + (n,))
        size *= 2
    return x


def fft_bluestein(v, sign: int = 1) -> np.ndarray:
    """Chirp-z (Bluestein) для любой длины; свертка считается через fft_radix2."""
    x = np.asarray(v, dtype=np.complex128)
    n = x.shape[-1]
    chirp = _chirp(n, sign)
    size = _next_power_of_two(2 * n - 1)

    a = np.zeros(x.shape[:-1] + (size,), dtype=np.complex128)
    a[..., :n] = x * chirp
    b = np.zeros(size, dtype=np.complex128)
    b[:n] = np.conj(chirp)
    b[size - n + 1:] = np.conj(chirp[1:][::-1])

    conv = fft_radix2(fft_radix2(a, -1) * fft_radix2(b, -1), 1) / size
    return conv[..., :n] * chirp


def _transform(v, sign: int) -> np.ndarray:
    x = np.asarray(v, dtype=np.complex128)
    n = x.shape[-1]
    if n == 1:
        return x.copy()
    if _is_power_of_two(n):
        return fft_radix2(x, sign)
    return fft_bluestein(x, sign)


def dft_forward(v) -> np.ndarray:
    """out[k] = sum_j v[j] exp(+2 pi i j k / n) вдоль последней оси."""
    return _transform(v, 1)


def dft_inverse(v) -> np.ndarray:
    x = np.asarray(v, dtype=np.complex128)
    return _transform(x, -1) / x.shape[-1]


def fourier_matrix(n: int) -> np.ndarray:
    """
    Унитарная матрица Фурье F_n с элементами omega_n^{jk} / sqrt(n).
    """
    if n < 1:
        raise SizeError('n must be positive')
    if n > FOURIER_MATRIX_CAP:
        raise SizeError(f'dense Fourier matrix capped at n={FOURIER_MATRIX_CAP}, got {n}')
    j = np.arange(n)
    phase = np.outer(j, j) % n
    return np.exp(2j * np.pi * phase / n) / np.sqrt(n)
