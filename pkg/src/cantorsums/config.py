import os
from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # log
    LOG_LEVEL: str = "INFO"

    # data folder (.env)
    DATA_DIR: str = ""

    # van der Waerden 扩展表（JSON，条目一律按 literature 处理）
    CSL_TABLE_PATH: str = ""

    # 并行
    JOBS: int = 1

    # engine limits
    MAX_BITMAP_BOUND: int = 10**8
    VDW_NODE_BUDGET: int = 2_000_000

    # report
    REPORT_SCHEMA_VERSION: int = 1

    model_config = SettingsConfigDict(
        case_sensitive=True,
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        # 启动时尝试从数据目录下的 .env 加载设置
        self.load_config_from_file()

    @property
    def DATA_PATH(self) -> Path:
        if not self.DATA_DIR:
            return Path(__file__).parents[2] / "data"
        return Path(self.DATA_DIR)

    @property
    def ENV_FILE_PATH(self) -> Path:
        """数据目录中的环境变量文件"""
        return self.DATA_PATH / ".env"

    @property
    def TABLE_PATH(self) -> Path | None:
        if not self.CSL_TABLE_PATH:
            return None
        return Path(self.CSL_TABLE_PATH)

    def load_config_from_file(self):
        if self.ENV_FILE_PATH.exists():
            self._load_from_env_file()

    def _load_from_env_file(self):
        """从 .env 文件加载，只覆盖已声明的字段"""
        try:
            with open(self.ENV_FILE_PATH, "r", encoding="utf-8") as f:
                for line in f:
                    line = line.strip()
                    if not line or line.startswith("#") or "=" not in line:
                        continue
                    key, value = line.split("=", 1)
                    key = key.strip()
                    value = value.strip().strip('"').strip("'")
                    if key not in type(self).model_fields:
                        continue
                    os.environ.setdefault(key, value)
                    current_value = getattr(self, key)
                    if isinstance(current_value, int):
                        setattr(self, key, int(value))
                    else:
                        setattr(self, key, value)
        except Exception as e:
            print(f"加载 .env 文件失败: {e}")


settings = Settings()
