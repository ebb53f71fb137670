import math
from dataclasses import dataclass, field

import numpy as np

from core.dft import dft_forward
from core.errors import InputError, NumericalError, ParameterError, SizeError, UnsupportedError
from core.roots import find_roots


DENSE_CAP = 4096
SVD_ORACLE_CAP = 64
EIG_ORACLE_CAP = 16
SINGULAR_RATIO = 1e-14
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60


def _row(values) -> np.ndarray:
    row = np.asarray(values)
    if row.ndim != 1 or row.size < 1:
        raise SizeError('first row must be a non-empty vector')
    if not np.all(np.isfinite(row)):
        raise InputError('first row must be finite')
    return row


@dataclass(frozen=True, eq=False)
class Circulant:
    first_row: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'first_row', _row(self.first_row))

    @property
    def n(self) -> int:
        return self.first_row.size


@dataclass(frozen=True, eq=False)
class GCirculant:
    first_row: np.ndarray
    g: int = 1

    def __post_init__(self):
        row = _row(self.first_row)
        if self.g < 1:
            raise ParameterError('g must be a positive integer')
        g = self.g % row.size or row.size
        object.__setattr__(self, 'first_row', row)
        object.__setattr__(self, 'g', g)

    @property
    def n(self) -> int:
        return self.first_row.size

    @property
    def coprime(self) -> bool:
        return math.gcd(self.n, self.g) == 1


@dataclass(frozen=True, eq=False)
class SpectralSummary:
    eigenvalues: np.ndarray
    s_min: float
    s_max: float
    argmin: int | None = None
    singular_values: np.ndarray | None = field(default=None, repr=False)

    @property
    def numerically_singular(self) -> bool:
        return self.s_min <= SINGULAR_RATIO * self.s_max


def eigenvalues(c: Circulant) -> np.ndarray:
    """Собственные значения circ(c_0..c_{n-1}): k-е равно G_n(omega_n^k)."""
    return dft_forward(c.first_row)


def extreme_singular_values(c: Circulant) -> SpectralSummary:
    """
    s_min и s_max циркулянта как min/max модулей собственных значений (матрица нормальна).
    """
    eig = eigenvalues(c)
    moduli = np.abs(eig)
    k = int(np.argmin(moduli))
    return SpectralSummary(eig, float(moduli[k]), float(moduli.max()), k)


def batch_smallest_singular_values(rows: np.ndarray) -> np.ndarray:
    """s_min для стопки первых строк формы (..., n) одним преобразованием."""
    return np.min(np.abs(dft_forward(rows)), axis=-1)


def densify(c: Circulant | GCirculant) -> np.ndarray:
    """
    Явная матрица n x n: элемент (j, l) равен first_row[(l - j g) mod n].
    """
    n = c.n
    if n > DENSE_CAP:
        raise SizeError(f'dense matrices are capped at n={DENSE_CAP}, got {n}')
    g = getattr(c, 'g', 1)
    j = np.arange(n)
    return c.first_row[(j[None, :] - g * j[:, None]) % n]


def q_factor(n: int, g: int) -> np.ndarray:
    """0/1 матрица Q^g_n (g-циркулянт с первой строкой e_0), Q^g_n C_n = C^g_n."""
    if n > DENSE_CAP:
        raise SizeError(f'dense matrices are capped at n={DENSE_CAP}, got {n}')
    e0 = np.zeros(n, dtype=np.int64)
    e0[0] = 1
    return densify(GCirculant(e0, g))


def _round_robin(m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    # круговой турнир: каждый тур состоит из непересекающихся пар столбцов
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        left = np.array(players[: m // 2])
        right = np.array(players[m // 2:][::-1])
        rounds.append((left, right))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def dense_svd_oracle(m: np.ndarray) -> np.ndarray:
    """
    Односторонний метод Якоби (Хестенс) с параллельным порядком вращений.

    Аргументы:
        m (np.ndarray): плотная матрица не больше 64 x 64.

    Возвращает:
        np.ndarray: сингулярные числа по убыванию.
    """
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or max(a.shape) > SVD_ORACLE_CAP:
        raise SizeError(f'SVD oracle accepts matrices up to {SVD_ORACLE_CAP}x{SVD_ORACLE_CAP}')
    if a.shape[0] < a.shape[1]:
        a = a.conj().T
    cols = a.shape[1]
    if cols % 2:
        a = np.hstack((a, np.zeros((a.shape[0], 1), dtype=np.complex128)))
    rounds = _round_robin(a.shape[1])

    for _ in range(JACOBI_MAX_SWEEPS):
        rotated = False
        for p, q in rounds:
            ap, aq = a[:, p], a[:, q]
            alpha = np.sum(np.abs(ap) ** 2, axis=0)
            beta = np.sum(np.abs(aq) ** 2, axis=0)
            gamma = np.sum(ap.conj() * aq, axis=0)
            mag = np.abs(gamma)
            active = mag > JACOBI_TOL * np.sqrt(alpha * beta)
            if not active.any():
                continue
            rotated = True
            p, q = p[active], q[active]
            ap, aq = ap[:, active], aq[:, active]
            alpha, beta, gamma, mag = alpha[active], beta[active], gamma[active], mag[active]
            zeta = (beta - alpha) / (2.0 * mag)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            aq = aq * (gamma.conj() / mag)
            a[:, p] = c * ap - s * aq
            a[:, q] = s * ap + c * aq
        if not rotated:
            # добавленный нулевой столбец ни с кем не вращается и остается последним
            values = np.sqrt(np.sum(np.abs(a) ** 2, axis=0))[:cols]
            return np.sort(values)[::-1]
    raise NumericalError(f'Jacobi SVD did not converge in {JACOBI_MAX_SWEEPS} sweeps')


def faddeev_leverrier(m: np.ndarray) -> np.ndarray:
    """Коэффициенты характеристического многочлена det(lambda I - M) по возрастанию степени."""
    a = np.asarray(m, dtype=np.complex128)
    n = a.shape[0]
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    coeffs[n] = 1.0
    mk = np.zeros_like(a)
    identity = np.eye(n)
    for k in range(1, n + 1):
        mk = a @ mk + coeffs[n - k + 1] * identity
        coeffs[n - k] = -np.trace(a @ mk) / k
    return coeffs


def _frobenius(a: np.ndarray) -> float:
    return max(float(np.sqrt(np.sum(np.abs(a) ** 2))), 1e-300)


def _rayleigh_refine(a: np.ndarray, lam: complex, steps: int = 3) -> tuple[complex, float]:
    n = a.shape[0]
    norm = _frobenius(a)
    v = np.exp(1j * 0.7548776662466927 * np.arange(n) ** 2) / np.sqrt(n)
    best_lam, best_res = lam, math.inf
    for step in range(steps + 1):
        shift = lam + 1e-13 * norm * (1 + step)
        try:
            w = np.linalg.solve(a - shift * np.eye(n), v)
        except np.linalg.LinAlgError:
            w = v
        w_norm = np.linalg.norm(w)
        if not np.isfinite(w_norm) or w_norm == 0:
            break
        v = w / w_norm
        candidate = complex(v.conj() @ a @ v)
        res = float(np.linalg.norm(a @ v - candidate * v))
        if res < best_res:
            best_lam, best_res = candidate, res
        lam = candidate
    return best_lam, best_res


def dense_eig_oracle(m: np.ndarray) -> np.ndarray:
    """
    Собственные значения малой матрицы (n <= 16): характеристический многочлен
    Фаддеева-Леверье, корни методом Аберта и уточнение отношением Рэлея.
    Каждое значение проверяется невязкой ||(M - lambda I) v|| <= 1e-6 ||M||.
    """
    a = np.asarray(m, dtype=np.complex128)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n or n > EIG_ORACLE_CAP:
        raise SizeError(f'eigen oracle accepts square matrices up to {EIG_ORACLE_CAP}x{EIG_ORACLE_CAP}')
    approx = find_roots(faddeev_leverrier(a), max_iter=2000, residual_tol=math.inf).roots
    norm = _frobenius(a)
    out = np.empty(n, dtype=np.complex128)
    for idx, lam in enumerate(approx):
        refined, res = _rayleigh_refine(a, complex(lam))
        if res <= 1e-6 * norm:
            # кратные корни характеристического многочлена размыты, уточнение их собирает
            lam = refined
        else:
            res = float(dense_svd_oracle(a - lam * np.eye(n))[-1])
        if res > 1e-6 * norm:
            raise NumericalError(f'eigenvalue {lam} failed its residual certificate ({res:.3e})')
        out[idx] = lam
    return out


def gcirc_spectral(gc: GCirculant) -> SpectralSummary:
    """
    Спектральная сводка g-циркулянта. При взаимно простых n и g матрица Q унитарна,
    поэтому сингулярные числа совпадают с сингулярными числами C_n; иначе плотный оракул.
    """
    n = gc.n
    eig = dense_eig_oracle(densify(gc)) if n <= EIG_ORACLE_CAP else np.empty(0, dtype=np.complex128)
    if gc.coprime:
        base = extreme_singular_values(Circulant(gc.first_row))
        return SpectralSummary(eig, base.s_min, base.s_max, base.argmin)
    if n > SVD_ORACLE_CAP:
        raise UnsupportedError(f'n={n}, g={gc.g} are not coprime and exceed the dense oracle cap')
    values = dense_svd_oracle(densify(gc))
    return SpectralSummary(eig, float(values[-1]), float(values[0]), None, values)


def lu_determinant(m: np.ndarray) -> complex:
    """Определитель через LU-разложение с выбором ведущего элемента по столбцу."""
    a = np.array(m, dtype=np.complex128)
    n = a.shape[0]
    det = 1.0 + 0j
    for k in range(n):
        pivot = k + int(np.argmax(np.abs(a[k:, k])))
        if a[pivot, k] == 0:
            return 0j
        if pivot != k:
            a[[k, pivot]] = a[[pivot, k]]
            det = -det
        det *= a[k, k]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
    return complex(det)


def matrix_to_csv(m: np.ndarray) -> str:
    """Построчный CSV, комплексные числа в виде "re+imj"."""
    a = np.asarray(m, dtype=np.complex128)
    lines = [','.join(f'{z.real:.17g}{z.imag:+.17g}j' for z in row) for row in a]
    return '\n'.join(lines) + '\n'
