from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from cantorsums import __version__
from cantorsums.config import settings


class LemmaCheck(BaseModel):
    """Δₙ 与数字前缀和的逐项比较"""

    passed: bool
    first_failure: Optional[int] = Field(None, description="第一个不一致的下标")
    deltas: List[int] = Field(default_factory=list)
    checked_up_to: Optional[int] = Field(None, description="用 xₖ 复核到的最大下标")


class ShiftViolation(BaseModel):
    left: int
    right: int
    reason: str


class ShiftInvarianceReport(BaseModel):
    passed: bool
    gaps_checked: int = 0
    first_violation: Optional[ShiftViolation] = None
    unresolved: List[List[int]] = Field(
        default_factory=list, description="平移像超出截断范围的 gap (x, y)"
    )


class RecoveryReport(BaseModel):
    generators: List[int]
    resolvable_bound: int
    valid: bool
    first_mismatch: Optional[int] = None


class Report(BaseModel):
    """所有命令共用的报告信封"""

    model_config = ConfigDict(populate_by_name=True)

    theorem: str = Field(..., description="命令或被验证的命题")
    params: Dict[str, Any] = Field(default_factory=dict)
    passed: bool = Field(..., alias="pass")
    counterexample: Optional[Any] = None
    witnesses_sampled: int = 0
    details: Dict[str, Any] = Field(default_factory=dict)
    timing_ms: Optional[float] = None
    schema_version: int = Field(default_factory=lambda: settings.REPORT_SCHEMA_VERSION)
    library_version: str = __version__

    def to_json_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)
