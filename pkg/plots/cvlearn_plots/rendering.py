"""Shared CLI plumbing and metadata-preserving figure saving."""

from __future__ import annotations

import argparse

import matplotlib

matplotlib.use("Agg")

from .artifacts import Artifact, read_artifact  # noqa: E402


def build_parser(description: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True, help="input artifact path(s)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=150)
    return parser


def load_inputs(args) -> list[Artifact]:
    return [read_artifact(p) for p in args.inputs]


def save_figure(fig, out_path: str, dpi: int, artifacts: list[Artifact]):
    """Write the image with each source artifact's config hash in the metadata."""
    hashes = ",".join(a.config_sha256 for a in artifacts)
    fig.savefig(out_path, dpi=dpi, metadata={"cvlearn-config-sha256": hashes})
