"""
报告与见证模型定义
"""

# ruff: noqa
from .common import BigInt
from .witness import APWitness, SumWitness, VdwCertificate, VdwLookup
from .report import (
    LemmaCheck,
    RecoveryReport,
    Report,
    ShiftInvarianceReport,
    ShiftViolation,
)
from .run import Command, OutputFormat, RunConfig
