from typing import Iterable, List, Optional

from pydantic import BaseModel, Field

from cantorsums.exceptions import InvalidParameter

from .common import BigInt


class APWitness(BaseModel):
    """等差数列见证 start + i·diff, 0 ≤ i < length"""

    start: BigInt = Field(..., description="首项")
    diff: int = Field(..., ge=1, description="公差")
    length: int = Field(..., ge=1, description="项数")
    translation: Optional[BigInt] = Field(
        None, description="见证在平移后的坐标中给出时，加回的平移量"
    )

    def terms(self) -> List[int]:
        return [self.start + i * self.diff for i in range(self.length)]

    @classmethod
    def within(cls, host: Iterable[int], start: int, diff: int, length: int) -> "APWitness":
        """Build a witness after checking every term against ``host``."""
        members = host if isinstance(host, (set, frozenset)) else set(host)
        witness = cls(start=start, diff=diff, length=length)
        for term in witness.terms():
            if term not in members:
                raise InvalidParameter(f"AP term {term} is not in the host set")
        return witness


class SumWitness(BaseModel):
    """x = u + v，u、v 均为 B 的子集和"""

    target: BigInt = Field(..., description="被分解的整数 x")
    left: List[int] = Field(default_factory=list, description="u 使用的 B 下标")
    right: List[int] = Field(default_factory=list, description="v 使用的 B 下标")
    u: BigInt = Field(0, description="左侧子集和")
    v: BigInt = Field(0, description="右侧子集和")


class VdwCertificate(BaseModel):
    """W(s,k) 的穷举证书"""

    s: int = Field(..., ge=1)
    k: int = Field(..., ge=1)
    W: int = Field(..., ge=1)
    witness_coloring: List[int] = Field(
        default_factory=list, description="[1, W-1] 上无单色 k 项等差数列的染色"
    )
    verified: bool = Field(..., description="[1, W] 无此类染色已穷举证明")
    nodes_explored: int = Field(0, description="回溯搜索访问的节点数")


class VdwLookup(BaseModel):
    """inverse_vdw 查询结果"""

    s: int
    N: int
    length: int = Field(..., ge=1)
    table_limited: bool = Field(
        False, description="N 超出表中已知范围，length 只是下界"
    )
