#!/usr/bin/env python3
"""
gridwave 命令行启动脚本

用法: python scripts/run.py pipeline --case ieee68 --out results/
"""

import os
import sys

# 添加项目根目录到 Python 路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from gridwave.cli.main import main  # noqa: E402

if __name__ == "__main__":
    main()
