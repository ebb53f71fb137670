import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from core.errors import InputError, NoRootsError
from core.polynomial import RandomPoly


logger = logging.getLogger(__name__)

STEP_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class RootSet:
    roots: np.ndarray
    residuals: np.ndarray
    converged: bool
    iterations: int
    zero_roots: int = 0


@dataclass(frozen=True)
class AnnulusStats:
    n: int
    frac_within: dict
    min_scaled_dist: float
    ks_uniform: float
    real_roots: int


def default_widths(n: int, eps: float = 1.0) -> list[float]:
    widths = {eps * n ** -2.0 * k for k in (1, 2, 4)}
    widths |= {c / n for c in (1, 2, 5, 10)}
    widths |= {0.05, 0.1}
    return sorted(widths)


def _horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def _trim(coeffs: np.ndarray) -> tuple[np.ndarray, int]:
    nonzero = np.flatnonzero(coeffs)
    if nonzero.size == 0:
        raise NoRootsError('the zero polynomial has no isolated roots')
    low, high = int(nonzero[0]), int(nonzero[-1])
    return coeffs[low:high + 1], low


def _initial_points(coeffs: np.ndarray) -> np.ndarray:
    degree = coeffs.size - 1
    radius = (abs(coeffs[0]) / abs(coeffs[-1])) ** (1.0 / degree)
    if not math.isfinite(radius) or radius == 0.0:
        radius = 1.0
    angles = 2.0 * np.pi * np.arange(degree) / degree + np.pi / (2.0 * degree)
    return radius * np.exp(1j * angles)


def _aberth(coeffs: np.ndarray, max_iter: int) -> tuple[np.ndarray, int, bool]:
    deriv = coeffs[1:] * np.arange(1, coeffs.size)
    z = _initial_points(coeffs)
    degree = z.size
    if degree == 1:
        return np.array([-coeffs[0] / coeffs[1]]), 1, True
    diag = np.eye(degree, dtype=bool)
    for iteration in range(1, max_iter + 1):
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            ratio = _horner(coeffs, z) / _horner(deriv, z)
            diff = z[:, None] - z[None, :]
            diff[diag] = 1.0
            repulsion = np.sum(np.where(diag, 0.0, 1.0 / diff), axis=1)
            step = ratio / (1.0 - ratio * repulsion)
        bad = ~np.isfinite(step)
        if bad.any():
            # стоим в критической точке: небольшой сдвиг вместо шага
            step[bad] = 1e-8 * (1.0 + np.abs(z[bad])) * np.exp(1j * iteration)
        z = z - step
        if not bad.any() and np.all(np.abs(step) < STEP_TOL * (1.0 + np.abs(z))):
            return z, iteration, True
    return z, max_iter, False


def _polish(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    deriv = coeffs[1:] * np.arange(1, coeffs.size)
    with np.errstate(divide='ignore', invalid='ignore'):
        value = _horner(coeffs, z)
        newton = z - value / _horner(deriv, z)
    better = np.isfinite(newton) & (np.abs(_horner(coeffs, newton)) < np.abs(value))
    return np.where(better, newton, z)


def residuals(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """
    |p(z)| / max(||c||_1, sum |c_j| |z|^j): для |z| <= 1 это |p(z)| / ||c||_1.
    """
    scale = np.maximum(np.sum(np.abs(coeffs)), _horner(np.abs(coeffs).astype(np.complex128), np.abs(roots).astype(np.complex128)).real)
    return np.abs(_horner(coeffs, roots)) / scale


def find_roots(p: RandomPoly | np.ndarray, max_iter: int = 500, residual_tol: float = 1e-10) -> RootSet:
    """
    Все корни многочлена методом Аберта-Эрлиха с апостериорными невязками.

    Аргументы:
        p: RandomPoly или коэффициенты c_0..c_d по возрастанию степени.
        max_iter (int): предел итераций.
        residual_tol (float): порог невязки для флага converged.

    Возвращает:
        RootSet: корни (нулевые корни от младших нулевых коэффициентов включены явно).
    """
    coeffs = np.asarray(p.coeffs if isinstance(p, RandomPoly) else p, dtype=np.complex128)
    if not np.all(np.isfinite(coeffs)):
        raise InputError('coefficients must be finite')
    core_coeffs, zero_roots = _trim(coeffs)
    if core_coeffs.size == 1 and zero_roots == 0:
        raise NoRootsError('degree-0 polynomial has no roots')

    if core_coeffs.size > 1:
        found, iterations, stepped = _aberth(core_coeffs, max_iter)
        found = _polish(core_coeffs, found)
    else:
        found, iterations, stepped = np.empty(0, dtype=np.complex128), 0, True
    roots = np.concatenate((np.zeros(zero_roots, dtype=np.complex128), found))
    res = residuals(coeffs, roots)
    converged = bool(stepped and np.all(res <= residual_tol))
    if not converged:
        logger.debug('Aberth stopped after %d iterations, max residual %.3e', iterations, float(res.max()))
    return RootSet(roots, res, converged, iterations, zero_roots)


def ks_uniform(arguments) -> float:
    """
    Расстояние Колмогорова-Смирнова аргументов корней до равномерного закона на [0, 2pi).
    """
    u = np.sort(np.asarray(arguments, dtype=np.float64)) / (2.0 * np.pi)
    m = u.size
    if m == 0:
        raise InputError('need at least one argument')
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - u), np.max(u - (i - 1) / m)))


def annulus_stats(rs: RootSet, n: int, widths=None) -> AnnulusStats:
    if rs.roots.size == 0:
        raise InputError('empty root set')
    if not rs.converged:
        raise InputError('root set did not converge')
    if widths is None:
        widths = default_widths(n)
    gap = np.abs(np.abs(rs.roots) - 1.0)
    frac = {float(w): float(np.mean(gap <= w)) for w in sorted(widths)}
    arguments = np.mod(np.angle(rs.roots), 2.0 * np.pi)
    real = int(np.sum(np.abs(rs.roots.imag) <= 1e-8 * (1.0 + np.abs(rs.roots))))
    return AnnulusStats(
        n=n,
        frac_within=frac,
        min_scaled_dist=float(n * n * gap.min()),
        ks_uniform=ks_uniform(arguments),
        real_roots=real,
    )


def kac_expected_real_roots(degree: int) -> float:
    """
    Формула Каца: среднее число вещественных корней многочлена степени degree
    с независимыми N(0,1) коэффициентами.
    """
    if degree < 1:
        return 0.0
    d = degree

    def density(t):
        inner = 1.0 / (1.0 - t * t) ** 2 - (d + 1) ** 2 * t ** (2 * d) / (1.0 - t ** (2 * d + 2)) ** 2
        return math.sqrt(max(inner, 0.0))

    value, _ = integrate.quad(density, 0.0, 1.0, limit=200)
    return 4.0 / math.pi * value
