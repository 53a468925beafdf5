"""
命令行与完整流水线
"""

from .commands import RunOptions, apply_overrides, load_valid_case
from .main import build_parser, dispatch, main
from .manifest import RunManifest, case_checksum, read_manifest
from .pipeline import full_pipeline

__all__ = [
    "RunManifest",
    "RunOptions",
    "apply_overrides",
    "build_parser",
    "case_checksum",
    "dispatch",
    "full_pipeline",
    "load_valid_case",
    "main",
    "read_manifest",
]
