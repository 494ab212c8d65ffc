"""
Configuration settings for the tvpinn toolkit
"""
import os
from typing import Optional
from dotenv import load_dotenv
from pydantic import BaseModel

load_dotenv()


class Settings(BaseModel):
    """Process-level settings, read from the environment (.env honoured)"""

    app_name: str = "tvpinn"
    app_version: str = "1.0.0"

    # Logging
    log_level: str = "INFO"

    # Runs
    output_dir: str = "results"
    max_workers: int = 1

    # Experiment tracking
    comet_api_key: Optional[str] = None
    comet_workspace: Optional[str] = None
    comet_project: str = "tvpinn"

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from TVPINN_* and COMET_* environment variables"""
        values = {
            "log_level": os.getenv("TVPINN_LOG_LEVEL"),
            "output_dir": os.getenv("TVPINN_OUTPUT_DIR"),
            "max_workers": os.getenv("TVPINN_MAX_WORKERS"),
            "comet_api_key": os.getenv("COMET_API_KEY"),
            "comet_workspace": os.getenv("COMET_WORKSPACE"),
            "comet_project": os.getenv("COMET_PROJECT"),
        }
        return cls(**{key: value for key, value in values.items() if value is not None})


# Global settings instance
settings = Settings.from_env()
