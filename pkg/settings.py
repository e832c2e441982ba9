import logging
import os
import sys

# Configure logging
LOG_LEVEL = os.getenv("CARPET_LOG_LEVEL", "INFO").upper()

logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[
        logging.StreamHandler(sys.stdout)
    ]
)

# Create logger instance for the application
logger = logging.getLogger("carpet_lab")

# Set third-party loggers to WARNING to reduce noise
logging.getLogger("matplotlib").setLevel(logging.WARNING)
logging.getLogger("joblib").setLevel(logging.WARNING)

VERSION = "0.1.0"

# Enumeration budget: maximum number of cells any single enumeration may produce
CELL_BUDGET = int(os.getenv("CARPET_CELL_BUDGET", "10000000"))
if CELL_BUDGET <= 0:
    raise ValueError(f"CARPET_CELL_BUDGET must be positive, got {CELL_BUDGET}")

# Default directory for CLI outputs
OUTPUT_DIR = os.getenv("CARPET_OUTPUT_DIR", "./output")

# Workers used by grid scans (joblib)
THREADS = int(os.getenv("CARPET_THREADS", str(os.cpu_count() or 1)))
if THREADS <= 0:
    raise ValueError(f"CARPET_THREADS must be positive, got {THREADS}")

# Solver defaults
SOLVER_TOLERANCE = float(os.getenv("CARPET_SOLVER_TOLERANCE", "1e-8"))
SOLVER_MAX_ITERATIONS = int(os.getenv("CARPET_SOLVER_MAX_ITERATIONS", "10000"))

if SOLVER_TOLERANCE <= 0 or SOLVER_MAX_ITERATIONS <= 0:
    raise ValueError(
        "CARPET_SOLVER_TOLERANCE and CARPET_SOLVER_MAX_ITERATIONS must be positive"
    )

# Maximum refinement depth m per dimension for conductance scans
M_BUDGET = {2: 3, 3: 2}
# Depths at or beyond these values require --allow-slow
SLOW_M = {2: 4, 3: 2}
