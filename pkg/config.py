"""
Configuration for the minimal-codes toolkit.
"""
import os
from pathlib import Path

# Load environment variables from .env file
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

# Project paths
PROJECT_ROOT = Path(__file__).parent
OUTPUT_DIR = Path(os.getenv("MINCODES_OUTPUT_DIR", str(PROJECT_ROOT / "output")))
SETTINGS_FILE = os.getenv("MINCODES_SETTINGS_FILE", "mincodes_settings.json")

# Field limits
MAX_FIELD_ORDER = int(os.getenv("MINCODES_MAX_FIELD_ORDER", str(2 ** 20)))
LOG_TABLE_LIMIT = 2 ** 16  # log/antilog tables up to this order, schoolbook above
ADD_TABLE_LIMIT = 1024  # full addition table for odd-characteristic extensions

# Enumeration limits (codeword classes, points, flats)
MAX_ENUMERATION = int(os.getenv("MINCODES_MAX_ENUM", str(2 ** 26)))

# Parallel scanning
DEFAULT_THREADS = int(os.getenv("MINCODES_THREADS", "0")) or (os.cpu_count() or 1)
CHUNK_SIZE = int(os.getenv("MINCODES_CHUNK_SIZE", "2048"))

# Report files
REPORT_SCHEMA_VERSION = "1"
MATRIX_FILE_SUFFIX = ".mat"
REPORT_FILE_SUFFIX = ".json"
