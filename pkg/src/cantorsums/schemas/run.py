from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator


class Command(str, Enum):
    EXPAND = "expand"
    GENERATE = "generate"
    FS = "fs"
    SUMSET = "sumset"
    GAPS = "gaps"
    DENSITY = "density"
    RULER = "ruler"
    VERIFY_THM24 = "verify-thm24"
    WITNESS = "witness"
    THM21 = "thm21"
    LEMMA23 = "lemma23"
    VDW = "vdw"
    PROP1_CONSTRUCT = "prop1-construct"
    PROP1_RECOVER = "prop1-recover"
    SHIFT_INVARIANT = "shift-invariant"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


# 需要数字来源（--alpha 或 --seed）的命令
DIGIT_SOURCE_COMMANDS = {
    Command.EXPAND,
    Command.GENERATE,
    Command.DENSITY,
    Command.VERIFY_THM24,
    Command.WITNESS,
    Command.THM21,
}


class RunConfig(BaseModel):
    """一次 CLI 调用的完整参数"""

    command: Command
    p: int = Field(2, description="基数 p")
    alpha: Optional[str] = Field(None, description='有理数 α，形如 "5/3"')
    seed: Optional[int] = Field(None, ge=0, lt=2**64, description="随机数字流种子（64 位无符号）")
    n: Optional[int] = Field(None, description="深度 / 项数")
    N: Optional[int] = Field(None, description="位图上界")
    t: Optional[int] = Field(None, description="缩放因子 t")
    s: Optional[int] = Field(None, description="颜色数")
    k: Optional[int] = Field(None, description="等差数列长度 / 前缀参数 k")
    K: Optional[int] = Field(None, description="间隔上界")
    m: Optional[int] = Field(None, description="随机有界间隔集合的大小")
    x: Optional[int] = Field(None, description="待分解的整数")
    family: Optional[str] = Field(None, description="前缀族 P1..P4")
    r: Optional[int] = Field(None, description="P4 的参数 r")
    level: Optional[int] = Field(None, description="离散 Cantor 层数")
    set: Optional[List[int]] = Field(None, description="整数集合")
    set2: Optional[List[int]] = Field(None, description="第二个整数集合")
    samples: int = Field(0, ge=0, description="抽样见证个数")
    format: OutputFormat = OutputFormat.JSON
    output: Optional[str] = None
    jobs: int = Field(1, ge=1)
    no_timing: bool = False
    include_literature: bool = False
    materialize: Optional[bool] = Field(None, description="是否展开大整数项（默认按命令决定）")
    bitmap: Optional[str] = Field(None, description="结果位图写入路径")

    @model_validator(mode="after")
    def check_sources(self):
        if self.command in DIGIT_SOURCE_COMMANDS:
            if (self.alpha is None) == (self.seed is None):
                raise ValueError(
                    f"{self.command.value} needs exactly one of --alpha / --seed"
                )
        for flag in ("n", "N", "t", "s", "k", "K", "m", "level"):
            value = getattr(self, flag)
            if value is not None and value < 0:
                raise ValueError(f"--{flag} must be non-negative, got {value}")
        if self.p < 2:
            raise ValueError(f"--p must be >= 2, got {self.p}")
        return self
