"""
Core configuration module for netdecode
"""
import os
from typing import Optional
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Settings:
    """Toolkit settings"""

    # Search defaults
    default_timeout: float = 600.0
    default_workers: int = 1
    default_seed: int = 0

    # Results cache
    cache_file: str = ".netdecode_cache.json"

    # Enumeration guards
    max_cut_edges: int = 24
    max_candidates: int = 65536  # 2^16
    max_scheme_tables: int = 1048576  # 2^20
    max_tabulated_domain: int = 1048576  # 2^20
    max_pigeonhole_domain: int = 1048576  # 2^20

    # Reporting
    decimals: int = 6
    capacity_tolerance: float = 1e-6

    # Logging
    log_level: str = "INFO"
    log_file: Optional[str] = None
    log_format: str = "{time:YYYY-MM-DD HH:mm:ss} | {level} | {name}:{function}:{line} | {message}"

    def __init__(self):
        # Load from environment variables
        self.default_timeout = float(os.getenv("NETDECODE_TIMEOUT", self.default_timeout))
        self.default_workers = int(os.getenv("NETDECODE_WORKERS", self.default_workers))
        self.default_seed = int(os.getenv("NETDECODE_SEED", self.default_seed))

        self.cache_file = os.getenv("NETDECODE_CACHE_FILE", self.cache_file)

        self.max_cut_edges = int(os.getenv("NETDECODE_MAX_CUT_EDGES", self.max_cut_edges))
        self.max_candidates = int(os.getenv("NETDECODE_MAX_CANDIDATES", self.max_candidates))
        self.max_scheme_tables = int(os.getenv("NETDECODE_MAX_SCHEME_TABLES", self.max_scheme_tables))
        self.max_tabulated_domain = int(os.getenv("NETDECODE_MAX_TABULATED_DOMAIN", self.max_tabulated_domain))
        self.max_pigeonhole_domain = int(
            os.getenv("NETDECODE_MAX_PIGEONHOLE_DOMAIN", self.max_pigeonhole_domain)
        )

        self.log_level = os.getenv("NETDECODE_LOG_LEVEL", self.log_level).upper()
        self.log_file = os.getenv("NETDECODE_LOG_FILE", self.log_file) or None
        self.log_format = os.getenv("NETDECODE_LOG_FORMAT", self.log_format)


# Global settings instance
settings = Settings()
