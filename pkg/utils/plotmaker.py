from pathlib import Path

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt
import numpy as np


plt.rcParams['svg.hashsalt'] = 'circroots'
plt.rcParams['svg.fonttype'] = 'none'


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, format='svg', metadata={'Date': None})
    plt.close(fig)
    return path


def get_tail_plot(path, curves: dict, fits: dict | None = None, xlabel: str = 'param', title: str = ''):
    """
    p_hat против параметра в логарифмических осях с интервалами Уилсона.

    Аргументы:
        path: куда писать SVG.
        curves (dict): метка серии -> список TailEstimate.
        fits (dict | None): метка серии -> {'slope', 'intercept'} или None.
        xlabel (str): подпись оси параметра.
        title (str): заголовок.

    Возвращает:
        Path: путь к файлу. У каждой серии свой gid: series-<метка>, ci-<метка>, fit-<метка>.
    """
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, estimates in curves.items():
        x = np.array([e.param for e in estimates])
        p = np.array([e.p_hat for e in estimates])
        lo = np.array([e.ci_lo for e in estimates])
        hi = np.array([e.ci_hi for e in estimates])
        (line,) = ax.plot(x, p, marker='o', linestyle='none', label=f'n={label}')
        line.set_gid(f'series-{label}')
        bars = ax.vlines(x, lo, hi, colors=line.get_color())
        bars.set_gid(f'ci-{label}')
        fit = (fits or {}).get(label)
        if fit is not None:
            grid = np.geomspace(x[x > 0].min(), x.max(), 50)
            (fit_line,) = ax.plot(grid, np.exp(fit['intercept']) * grid ** fit['slope'],
                                  linestyle='--', color=line.get_color())
            fit_line.set_gid(f'fit-{label}')
    positive = all(e.param > 0 for group in curves.values() for e in group)
    if positive:
        ax.set_xscale('log')
    ax.set_yscale('symlog', linthresh=1e-4)
    ax.set_xlabel(xlabel)
    ax.set_ylabel('p_hat')
    if title:
        ax.set_title(title)
    ax.legend()
    return _save(fig, path)


def get_roots_plot(path, roots, widths, title: str = ''):
    """Корни на плоскости, единичная окружность и полосы ||z|-1| <= w."""
    roots = np.asarray(roots)
    fig, ax = plt.subplots(figsize=(5, 5))
    theta = np.linspace(0.0, 2.0 * np.pi, 721)
    (circle,) = ax.plot(np.cos(theta), np.sin(theta), color='black', linewidth=0.8)
    circle.set_gid('unit-circle')
    for idx, width in enumerate(sorted(widths)):
        outer = np.concatenate(((1 + width) * np.exp(1j * theta), max(1 - width, 0.0) * np.exp(-1j * theta)))
        (patch,) = ax.fill(outer.real, outer.imag, alpha=0.08, color='tab:blue', linewidth=0)
        patch.set_gid(f'band-{idx}')
    points = ax.scatter(roots.real, roots.imag, s=6, color='tab:red')
    points.set_gid('roots')
    ax.set_aspect('equal')
    if title:
        ax.set_title(title)
    return _save(fig, path)
