# config.py — ALL constants here, never hardcode in logic files
"""
Central configuration for the icrystal combinatorics engine.
All limits, paths, and environment variables are managed here.
"""

import os
from dotenv import load_dotenv

load_dotenv()

# ──────────────────────────────────────────────────────────────
# Construction Limits
# ──────────────────────────────────────────────────────────────
COMPONENT_CAP       = int(os.getenv('ICRYSTAL_COMPONENT_CAP', '100000'))  # max elements in a closure
STABILIZATION_DEPTH = int(os.getenv('ICRYSTAL_STABILIZATION_DEPTH', '4'))  # chain steps for limit_action
FUNDAMENTAL_SEARCH_POWER = 8   # largest natural tensor power searched for a fundamental crystal

# ──────────────────────────────────────────────────────────────
# Randomized Suites
# ──────────────────────────────────────────────────────────────
DEFAULT_SEED     = int(os.getenv('ICRYSTAL_SEED', '20240611'))
SUITE_PAIRS      = 200   # randomized (icrystal, crystal) pairs for the tensor soundness suite
SUITE_TRIPLES    = 50    # randomized triples for the associativity suite
SUITE_MAX_SIZE   = 40    # max elements per factor in randomized suites
MAX_WORD_LENGTH  = 6     # B(infinity) words enumerated by the projective suites
SUITE_WORKERS    = int(os.getenv('ICRYSTAL_SUITE_WORKERS', '1'))  # worker processes for verify-paper (1 = in-process)

# ──────────────────────────────────────────────────────────────
# Oracle Ranges (q-symbolic checks)
# ──────────────────────────────────────────────────────────────
ORACLE_MAX_N_MINUS = 5       # n_- range for the a = -1 oracle sweep
ORACLE_P_RANGE     = (-4, 4) # n_+ - s_i range for the a = -1 oracle sweep
NORM_MAX_N_MINUS   = 6       # n_- range for norm recursion vs closed form

# ──────────────────────────────────────────────────────────────
# Golden Graphs (data/golden)
# ──────────────────────────────────────────────────────────────
GOLDEN_S     = (0, 1, 2, -2)  # s_i values of the A1 golden ıcrystals Bı(s) ⊗ B(n)
GOLDEN_MAX_N = 6              # largest n of the A1 golden ıcrystals

# ──────────────────────────────────────────────────────────────
# Serialization
# ──────────────────────────────────────────────────────────────
REPORT_SCHEMA = 1

# ──────────────────────────────────────────────────────────────
# Logging
# ──────────────────────────────────────────────────────────────
LOG_LEVEL = os.getenv('ICRYSTAL_LOG_LEVEL', 'INFO')

# ──────────────────────────────────────────────────────────────
# Paths
# ──────────────────────────────────────────────────────────────
DATUM_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'datums')
GOLDEN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'golden')
