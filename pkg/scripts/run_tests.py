#!/usr/bin/env python3
"""
测试运行脚本
"""

import os
import sys

ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
TEST_DIR = os.path.join(ROOT_DIR, "tests")


def _pytest(args):
    """在项目根目录下运行 pytest，返回是否全部通过"""
    import pytest

    sys.path.insert(0, ROOT_DIR)
    os.chdir(ROOT_DIR)
    return pytest.main(args) == 0


def run_all_tests(fast=False):
    """运行所有测试，fast 为真时跳过 68 母线慢测试"""
    args = [TEST_DIR, "-v"]
    if fast:
        args += ["-m", "not slow"]
    return _pytest(args)


def run_specific_test(test_name):
    """运行特定测试"""
    path = os.path.join(TEST_DIR, f"test_{test_name}.py")
    if not os.path.isfile(path):
        print(f"错误: 找不到测试模块 'tests/test_{test_name}.py'")
        print("可用的测试模块:")
        for file in sorted(os.listdir(TEST_DIR)):
            if file.startswith("test_") and file.endswith(".py"):
                print(f"  - {file[5:-3]}")
        return False
    return _pytest([path, "-v"])


def run_with_coverage(fast=False):
    """运行测试并生成覆盖率报告"""
    try:
        import pytest_cov  # noqa: F401
    except ImportError:
        print("错误: 未安装 pytest-cov 模块")
        print("请运行: pip install -r requirements-test.txt")
        return False

    args = [TEST_DIR, "--cov=gridwave", "--cov-report=term-missing", "--cov-report=html:coverage_report"]
    if fast:
        args += ["-m", "not slow"]
    success = _pytest(args)
    print(f"\nHTML 报告已生成: file://{os.path.join(ROOT_DIR, 'coverage_report', 'index.html')}")
    return success


if __name__ == "__main__":
    import argparse

    parser = argparse.ArgumentParser(description="运行 gridwave 测试")
    parser.add_argument("--test", "-t", help='运行特定测试（不包含"test_"前缀）')
    parser.add_argument("--coverage", "-c", action="store_true", help="运行测试并生成覆盖率报告")
    parser.add_argument("--all", "-a", action="store_true", help="运行所有测试（默认）")
    parser.add_argument("--fast", "-f", action="store_true", help="跳过标记为 slow 的 68 母线测试")

    args = parser.parse_args()

    if args.test:
        success = run_specific_test(args.test)
    elif args.coverage:
        success = run_with_coverage(args.fast)
    else:
        success = run_all_tests(args.fast)

    # 根据测试结果退出
    sys.exit(0 if success else 1)
