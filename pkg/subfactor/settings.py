import os
import logging
from pathlib import Path

logger = logging.getLogger(__name__)

TOLERANCE = float(os.getenv("SUBFACTOR_TOLERANCE", "1e-9"))
MULTIPLICITY_TOLERANCE = 1e-6
CLUSTER_TOLERANCE = 1e-7
RESIDUAL_TOLERANCE = 1e-6

MAX_GROUP_ORDER = int(os.getenv("SUBFACTOR_MAX_GROUP_ORDER", 5000))
MAX_ENUMERATION_ORDER = int(os.getenv("SUBFACTOR_MAX_ENUMERATION_ORDER", 128))
# associativity is checked on every triple up to this order, sampled above it
EXHAUSTIVE_ASSOCIATIVITY_ORDER = 64
ASSOCIATIVITY_SAMPLES = 20000

DEFAULT_NMAX = int(os.getenv("SUBFACTOR_NMAX", 6))
DEFAULT_SEED = int(os.getenv("SUBFACTOR_SEED", 0))
DEFAULT_WORKERS = int(os.getenv("SUBFACTOR_WORKERS", 1))

# retries for randomized eigen-splittings before giving up
RANDOM_RETRIES = 8

SCHEMA_VERSION = 1
FIXTURE_DIR = Path(__file__).parent / "fixtures"

logger.info(
    f"settings: tol={TOLERANCE}, max_group_order={MAX_GROUP_ORDER}, "
    f"max_enumeration_order={MAX_ENUMERATION_ORDER}, nmax={DEFAULT_NMAX}, seed={DEFAULT_SEED}"
)
