"""
Runtime settings, read from the environment (and an optional .env file).
"""

import os
from dotenv import load_dotenv

load_dotenv()

# Bit-indexed membership must fit one machine word.
UNIVERSE_CAP = 62

MAX_N = int(os.getenv("XFAM_MAX_N", "12"))
MAX_LAYER = int(os.getenv("XFAM_MAX_LAYER", "12"))
WORKERS = int(os.getenv("XFAM_WORKERS", "1"))
LOG_LEVEL = os.getenv("XFAM_LOG_LEVEL", "WARNING").upper()

DEFAULT_MAX_N = 12
DEFAULT_MAX_LAYER = 12
