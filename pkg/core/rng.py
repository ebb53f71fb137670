import numpy as np


MASK64 = (1 << 64) - 1
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TWO_M53 = 2.0 ** -53


def _as_u64(value) -> np.ndarray:
    if isinstance(value, int):
        return np.asarray(value & MASK64, dtype=np.uint64)
    arr = np.asarray(value)
    if arr.dtype == np.uint64:
        return arr
    # отрицательные и большие python-int приводим по модулю 2^64
    return np.asarray(arr.astype(np.int64), dtype=np.int64).view(np.uint64)


def splitmix64(x) -> np.ndarray:
    """
    Финализатор splitmix64, векторизованный по numpy.

    Аргументы:
        x: uint64 скаляр или массив.

    Возвращает:
        np.ndarray: перемешанные 64-битные значения той же формы.
    """
    with np.errstate(over='ignore'):
        z = _as_u64(x) + GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        return z ^ (z >> np.uint64(31))


def mix(*parts) -> np.ndarray:
    """
    Складывает произвольное число целых (или массивов целых) в один ключ потока.
    mix(a, b) != mix(b, a); массивы транслируются по правилам numpy.
    """
    if not parts:
        raise ValueError('mix() needs at least one part')
    key = splitmix64(parts[0])
    for part in parts[1:]:
        key = splitmix64(key ^ splitmix64(part))
    return key


def uniforms(keys, counter: int = 0) -> np.ndarray:
    """Равномерные числа строго внутри (0, 1) для пары (ключ, счетчик)."""
    bits = mix(keys, counter) >> np.uint64(11)
    return (bits.astype(np.float64) + 0.5) * _TWO_M53


class RngState:
    """
    Состояние счетного генератора: ключ потока и номер следующего отсчета.

    Один экземпляр нельзя делить между параллельными вызовами;
    разные экземпляры независимы.
    """

    def __init__(self, seed: int, stream: int | None = None):
        self.key = int(mix(seed) if stream is None else mix(seed, stream))
        self.counter = 0

    def next_uniforms(self, count: int) -> np.ndarray:
        values = uniforms(np.uint64(self.key), np.arange(self.counter, self.counter + count, dtype=np.uint64))
        self.counter += count
        return values

    def __repr__(self) -> str:
        return f'RngState(key={self.key:#018x}, counter={self.counter})'
