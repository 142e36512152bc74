import logging
import os

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Runtime settings (see README for the full list)
LOG_LEVEL = os.getenv("MEBIAS_LOG_LEVEL", "INFO")
WORKERS = int(os.getenv("MEBIAS_WORKERS", "1"))
CHUNK_SIZE = int(os.getenv("MEBIAS_CHUNK_SIZE", "64"))
DEFAULT_N_MAX = int(os.getenv("MEBIAS_N_MAX", "20"))
RADIAL_CACHE_PATH = os.getenv("MEBIAS_RADIAL_CACHE") or None

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level=None):
    """Configure the root logger once for command-line use."""
    logging.basicConfig(
        level=getattr(logging, (level or LOG_LEVEL).upper(), logging.INFO),
        format=LOG_FORMAT,
    )
