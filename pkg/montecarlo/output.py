import csv
import hashlib
import json
from pathlib import Path

from common.defaults import charfn_columns, results_columns
from montecarlo.config import ExperimentConfig
from montecarlo.estimates import TailEstimate


def estimate_rows(cfg: ExperimentConfig, estimates: list[TailEstimate], prime_n: dict[int, bool]) -> list[dict]:
    """Строки results.csv в порядке (n, param) как в конфигурации."""
    return [
        {
            'experiment': cfg.experiment.value,
            'dist': cfg.distribution.spec,
            'phi': cfg.weight.spec,
            'n': est.n,
            'param': est.param,
            'trials': est.trials,
            'hits': est.hits,
            'p_hat': est.p_hat,
            'ci_lo': est.ci_lo,
            'ci_hi': est.ci_hi,
            'base_seed': cfg.base_seed,
            'prime_n': int(prime_n[est.n]),
        }
        for est in estimates
    ]


def _write_csv(path: Path, fieldnames: list[str], rows: list[dict]) -> Path:
    path = Path(path)
    with path.open('w', newline='', encoding='utf-8') as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)
    return path


def write_results_csv(path, rows: list[dict]) -> Path:
    return _write_csv(path, results_columns, rows)


def write_charfn_csv(path, rows: list[dict]) -> Path:
    return _write_csv(path, charfn_columns, rows)


def write_rows_csv(path, fieldnames: list[str], rows: list[dict]) -> Path:
    return _write_csv(path, fieldnames, rows)


def dump_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + '\n'


def write_json(path, data) -> Path:
    path = Path(path)
    path.write_text(dump_json(data), encoding='utf-8')
    return path


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
