"""Reader for cvlearn CSV artifacts.

Artifacts are plain CSV with ``# key=value`` provenance comments; this
module parses them into numpy columns and fails loudly on schema-version
mismatches or missing columns.  Nothing here recomputes any physics.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

SUPPORTED_SCHEMA = "cvlearn.v1"


class SchemaError(ValueError):
    """Artifact does not carry the schema/columns this renderer expects."""


@dataclass(frozen=True)
class Artifact:
    path: Path
    header: dict
    columns: list
    rows: list

    @property
    def config_sha256(self) -> str:
        return self.header["config_sha256"]

    @property
    def command(self) -> str:
        return self.header.get("command", "?")

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise SchemaError(f"{self.path}: missing column {name!r} (has {self.columns})")
        idx = self.columns.index(name)
        values = [row[idx] for row in self.rows]
        try:
            return np.array([float(v) for v in values])
        except ValueError:
            return np.array(values, dtype=object)

    def require(self, *names: str):
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise SchemaError(f"{self.path}: missing columns {missing} (has {self.columns})")


def read_artifact(path) -> Artifact:
    path = Path(path)
    header: dict = {}
    columns = None
    rows = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line:
            continue
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            header[key] = value
        elif columns is None:
            columns = line.split(",")
        else:
            rows.append(line.split(","))
    if columns is None:
        raise SchemaError(f"{path}: no column header found")
    schema = header.get("schema")
    if schema != SUPPORTED_SCHEMA:
        raise SchemaError(f"{path}: schema {schema!r} is not supported (need {SUPPORTED_SCHEMA!r})")
    if "config_sha256" not in header:
        raise SchemaError(f"{path}: missing config_sha256 provenance")
    return Artifact(path=path, header=header, columns=columns, rows=rows)
