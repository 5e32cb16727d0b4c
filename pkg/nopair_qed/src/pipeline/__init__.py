"""
命令行流程
"""

from .commands import COMMANDS, run_command

__all__ = ["COMMANDS", "run_command"]
