"""
Cached shared components
"""
from functools import lru_cache
import logging

from core.config import Settings, settings
from observability.comet_integration import TrainingObserver

logger = logging.getLogger(__name__)


@lru_cache()
def get_settings() -> Settings:
    """Get the process-wide settings instance"""
    return settings


@lru_cache()
def get_observer() -> TrainingObserver:
    """Get experiment observer instance"""
    current = get_settings()
    return TrainingObserver(
        api_key=current.comet_api_key,
        workspace=current.comet_workspace,
        project=current.comet_project,
    )
