"""Figure scripts for cvlearn CSV artifacts (render-only; no physics here)."""

from .artifacts import Artifact, SchemaError, read_artifact

__all__ = ["Artifact", "SchemaError", "read_artifact"]
