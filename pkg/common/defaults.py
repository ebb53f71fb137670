from pathlib import Path


VERSION = 'circroots 0.1.0'

THRESHOLDS_PATH = Path(__file__).resolve().parent / 'thresholds.json'

DEFAULT_DATABASE_URL = 'sqlite+aiosqlite:///circroots.sqlite3'

EXIT_OK = 0
EXIT_PILOT_REGRESSION = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_MISSING_PILOT = 4

# тестовые многочлены для команды roots: коэффициенты по возрастанию степени
builtin_polys = {
    'z8-1': [-1, 0, 0, 0, 0, 0, 0, 0, 1],
    'z4-1': [-1, 0, 0, 0, 1],
    'z2+1': [1, 0, 1],
    'z3': [0, 0, 0, 1],
}

results_columns = [
    'experiment', 'dist', 'phi', 'n', 'param', 'trials', 'hits',
    'p_hat', 'ci_lo', 'ci_hi', 'base_seed', 'prime_n',
]

charfn_columns = ['n', 'radius', 's1', 's2', 'exact', 'monte_carlo', 'trials']

roots_columns = ['re', 'im', 'abs_minus_one', 'arg']
