import os
from pathlib import Path
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    PROJECT_NAME: str = "FRODO"
    VERSION: str = "1.0.0"

    # Logging settings
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_JSON: bool = os.getenv("LOG_JSON", "False").lower() == "true"

    # Default location for simulated datasets, runs and reports
    OUTPUT_DIR: Path = Path(os.getenv("FRODO_OUTPUT_DIR", "./runs"))

    # Process pool size for concurrent chains; 1 runs chains in-process
    CHAIN_WORKERS: int = int(os.getenv("FRODO_CHAIN_WORKERS", "4"))

    DEFAULT_SEED: int = int(os.getenv("FRODO_SEED", "20240601"))

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"


settings = Settings()
