"""Experiment reports with CSV and JSON emission.

Reports are self-describing: the full configuration is echoed into the
emitted file, so re-running a seeded command reproduces it bit-identically.
The in-memory report carries an environment stamp (package version and
creation timestamp); the timestamp is deliberately kept out of the emitted
files so repeated runs stay byte-identical, and is surfaced on the console
instead.
"""

from __future__ import annotations

import datetime
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__


def _format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


@dataclass
class ExperimentReport:
    """Result rows of one experiment plus the configuration that made them."""

    experiment: str
    config: dict
    columns: tuple
    rows: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    environment: dict = field(default_factory=lambda: {
        "package_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    })

    def add_row(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(
                f"row has {len(values)} values for {len(self.columns)} columns"
            )
        self.rows.append(tuple(values))

    def to_csv(self) -> str:
        lines = [f"# experiment: {self.experiment}",
                 f"# package_version: {self.environment['package_version']}"]
        for key in sorted(self.config):
            lines.append(f"# {key}: {_format_value(self.config[key])}")
        for key in sorted(self.extra):
            lines.append(f"# {key}: {_format_value(self.extra[key])}")
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(_format_value(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "experiment": self.experiment,
            "package_version": self.environment["package_version"],
            "config": self.config,
            "columns": list(self.columns),
            "rows": [list(row) for row in self.rows],
            "extra": self.extra,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def write(self, path, fmt: str = "csv") -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == "csv":
            path.write_text(self.to_csv())
        elif fmt == "json":
            path.write_text(self.to_json())
        else:
            raise ValueError(f"unknown report format {fmt!r}")
        return path


def parse_report_csv(text: str) -> tuple[dict, list, list]:
    """Parse an emitted CSV report into (config, columns, rows)."""
    config: dict = {}
    columns: list = []
    rows: list = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, value = body.split(":", 1)
                config[key.strip()] = value.strip()
            continue
        if not columns:
            columns = line.split(",")
        else:
            rows.append(line.split(","))
    return config, columns, rows
