import os
import logging
import logging.config
from typing import Dict, List, Optional

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == "true"


# ==================== LOGGING SETTINGS ====================

LOG_LEVEL = os.getenv("RECONF_LOG_LEVEL", "WARNING")
_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'basis_reconf': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}

# ==================== BRUTE FORCE CAPS ====================

BASIS_ENUMERATION_CAP = int(os.getenv("RECONF_BASIS_CAP", "16"))  # ground-set size
STATE_SPACE_CAP = int(os.getenv("RECONF_STATE_CAP", "1000000"))  # visited states

# ==================== RANDOM INSTANCES ====================

RANDOM_RETRY_BUDGET = int(os.getenv("RECONF_RETRY_BUDGET", "64"))
RANDOM_WALK_FACTOR = int(os.getenv("RECONF_WALK_FACTOR", "3"))

# ==================== EXCHANGE GRAPH ====================

ENABLE_PARALLEL_PROBES = _env_bool("RECONF_PARALLEL_PROBES", "False")
MAX_PROBE_WORKERS = int(os.getenv("RECONF_PROBE_WORKERS", "4"))

# ==================== HARDNESS GADGETS ====================

# The length gap of the reduction needs 7n < 2n^2 with room to spare.
GADGET_MIN_UNIVERSE = int(os.getenv("RECONF_GADGET_MIN_UNIVERSE", "4"))


# ==================== UTILITY FUNCTIONS ====================

def configure_logging(level: Optional[str] = None) -> None:
    """Install the console handler; CLI entry points call this once."""
    level = (level or LOG_LEVEL).upper()
    if level not in _LEVELS:
        level = "WARNING"
    settings = dict(LOGGING)
    settings['loggers'] = {
        'basis_reconf': dict(LOGGING['loggers']['basis_reconf'], level=level),
    }
    logging.config.dictConfig(settings)


def validate_config() -> Dict[str, List[str]]:
    """
    Validate configuration and return warnings/errors.
    Returns dict with 'errors' and 'warnings' lists.
    """
    errors = []
    warnings = []

    if BASIS_ENUMERATION_CAP <= 0:
        errors.append("RECONF_BASIS_CAP must be positive")
    if STATE_SPACE_CAP <= 0:
        errors.append("RECONF_STATE_CAP must be positive")
    if RANDOM_RETRY_BUDGET <= 0:
        errors.append("RECONF_RETRY_BUDGET must be positive")
    if MAX_PROBE_WORKERS <= 0:
        errors.append("RECONF_PROBE_WORKERS must be positive")

    if BASIS_ENUMERATION_CAP > 24:
        warnings.append("Basis enumeration cap above 24 - brute force may take very long")
    if LOG_LEVEL.upper() not in _LEVELS:
        warnings.append(f"Unknown log level {LOG_LEVEL!r} - falling back to WARNING")

    return {'errors': errors, 'warnings': warnings}


# ==================== STARTUP VALIDATION ====================

validation = validate_config()
for error in validation['errors']:
    logger.error(f"❌ CONFIG ERROR: {error}")
for warning in validation['warnings']:
    logger.warning(f"⚠️  CONFIG WARNING: {warning}")

ENV_TEMPLATE = """
# Brute force caps
RECONF_BASIS_CAP=16
RECONF_STATE_CAP=1000000

# Random instances
RECONF_RETRY_BUDGET=64
RECONF_WALK_FACTOR=3

# Exchange graph construction
RECONF_PARALLEL_PROBES=False
RECONF_PROBE_WORKERS=4

# Logging
RECONF_LOG_LEVEL=WARNING
"""
