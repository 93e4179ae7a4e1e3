import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Certificate search configuration
SEARCH_CONFIG = {
    "max_degree": int(os.getenv("RK_MAX_DEGREE", 8)),
    "max_m": int(os.getenv("RK_MAX_M", 64)),
    "grid_denominator_cap": int(os.getenv("RK_GRID_DENOMINATOR_CAP", 64)),
    "grid_point_budget": int(os.getenv("RK_GRID_POINT_BUDGET", 20000)),
}

# Randomized cancellation sweep
SWEEP_CONFIG = {
    "trials": int(os.getenv("RK_SWEEP_TRIALS", 50)),
    "seed": int(os.getenv("RK_SWEEP_SEED", 2024)),
    "controls": int(os.getenv("RK_SWEEP_CONTROLS", 10)),
}

# File paths
IDEAL_STORE_FILE = os.getenv("RK_IDEAL_STORE_FILE", 'order_ideals.json')

# Logging configuration
LOG_FILE = os.getenv("LOG_FILE", 'rk_lab.log')
LOG_LEVEL = os.getenv("LOG_LEVEL", 'INFO')
LOG_FORMAT = os.getenv("LOG_FORMAT", '%(asctime)s - %(name)s - %(levelname)s - %(message)s')

# Caching configuration
ENABLE_PRODUCT_CACHE = os.getenv("ENABLE_PRODUCT_CACHE", "True").lower() == "true"
PRODUCT_CACHE_SIZE = int(os.getenv("RK_PRODUCT_CACHE_SIZE", 4096))
VERDICT_LEDGER_SIZE = int(os.getenv("RK_VERDICT_LEDGER_SIZE", 10000))

# Feature flags
ENABLE_VERDICT_LEDGER = os.getenv("ENABLE_VERDICT_LEDGER", "True").lower() == "true"
ENABLE_LEMMA2_PIPELINE = os.getenv("ENABLE_LEMMA2_PIPELINE", "False").lower() == "true"
