import os

import datajoint as dj
from dotenv import load_dotenv

load_dotenv()

if "custom" not in dj.config:
    dj.config["custom"] = {}


dj.config["custom"]["output_root_dir"] = os.getenv(
    "OUTPUT_ROOT_DIR", dj.config["custom"].get("output_root_dir", "")
)

DEFAULT_DELTA = float(
    os.getenv("DEFAULT_DELTA", dj.config["custom"].get("default_delta", 1.0))
)
SWEEP_N_JOBS = int(
    os.getenv("SWEEP_N_JOBS", dj.config["custom"].get("sweep_n_jobs", 1))
)
CHECK_SEED = int(
    os.getenv("CHECK_SEED", dj.config["custom"].get("check_seed", 20240917))
)
CHECK_DRAWS = int(
    os.getenv("CHECK_DRAWS", dj.config["custom"].get("check_draws", 20))
)
