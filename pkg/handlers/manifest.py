from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from common.defaults import VERSION
from montecarlo.output import write_json


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


@dataclass
class RunManifest:
    command: str
    config: dict
    started: str = field(default_factory=utc_now)
    finished: str | None = None
    version: str = VERSION
    outputs: list[str] = field(default_factory=list)
    thresholds_hash: str | None = None

    def add_output(self, path) -> None:
        self.outputs.append(str(path))

    def write(self, out_dir) -> Path:
        """Пишет manifest.json рядом с результатами; finished ставится здесь."""
        self.finished = utc_now()
        return write_json(Path(out_dir) / 'manifest.json', asdict(self))
