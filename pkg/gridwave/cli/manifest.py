"""
运行清单

记录算例校验和、版本、命令、参数、起止时间与输出文件列表，成功结束后原子写入。
"""

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from .. import __version__
from ..errors import IoError, MissingFile
from .config import CLI_CONFIG

logger = logging.getLogger(__name__)


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def case_checksum(case_dir) -> str:
    """
    算例目录的 sha256：按相对路径排序，依次计入文件名和内容

    Args:
        case_dir: 算例目录

    Returns:
        十六进制摘要
    """
    case_dir = Path(case_dir)
    if not case_dir.is_dir():
        raise MissingFile(case_dir)
    digest = hashlib.sha256()
    chunk = CLI_CONFIG["checksum_chunk"]
    for path in sorted(p for p in case_dir.rglob("*") if p.is_file()):
        digest.update(path.relative_to(case_dir).as_posix().encode("utf-8"))
        digest.update(b"\0")
        with open(path, "rb") as handle:
            for block in iter(lambda: handle.read(chunk), b""):
                digest.update(block)
    return digest.hexdigest()


@dataclass
class RunManifest:
    """一次运行的清单"""

    command: str
    case: str
    case_checksum: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    version: str = __version__
    started_at: str = field(default_factory=utc_now)
    finished_at: Optional[str] = None
    outputs: List[str] = field(default_factory=list)
    stages: List[Dict[str, Any]] = field(default_factory=list)

    def add_outputs(self, paths, root):
        root = Path(root)
        for path in paths:
            rel = Path(path).relative_to(root).as_posix()
            if rel not in self.outputs:
                self.outputs.append(rel)

    def add_stage(self, name: str, status: str = "ok", **details):
        self.stages.append({"stage": name, "status": status, **details})

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["outputs"] = sorted(self.outputs)
        return data

    def write(self, out_dir) -> Path:
        """
        原子写入 manifest.json（临时文件 + os.replace）

        Args:
            out_dir: 输出目录

        Returns:
            清单文件路径
        """
        out_dir = Path(out_dir)
        if self.finished_at is None:
            self.finished_at = utc_now()
        target = out_dir / CLI_CONFIG["manifest_file"]
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False, default=str)
        tmp = None
        try:
            fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=".manifest-", suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(text + "\n")
            os.replace(tmp, target)
        except OSError as exc:
            if tmp is not None and os.path.exists(tmp):
                os.remove(tmp)
            raise IoError(target, str(exc))
        logger.info(f"运行清单已写入 {target}（{len(self.outputs)} 个输出文件）")
        return target


def read_manifest(path) -> Dict[str, Any]:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)
