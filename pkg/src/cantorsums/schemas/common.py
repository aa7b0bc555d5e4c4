from typing import Annotated

from pydantic import PlainSerializer

# 大整数在 JSON 中一律输出为十进制字符串
BigInt = Annotated[int, PlainSerializer(lambda v: str(v), return_type=str, when_used="json")]
