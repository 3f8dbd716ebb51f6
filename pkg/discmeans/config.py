"""
Global Configuration for Application
"""
import os
import logging

# Get configuration from environment
LOGGING_LEVEL = getattr(logging, os.getenv("LOGGING_LEVEL", "INFO").upper(), logging.INFO)

# Seed for the randomized field spot checks
DEFAULT_SEED = int(os.getenv("DISCMEANS_SEED", "42"))

# Default quadrature resolution
DEFAULT_NTHETA = int(os.getenv("DISCMEANS_NTHETA", "256"))
DEFAULT_PANELS = int(os.getenv("DISCMEANS_PANELS", "8"))
DEFAULT_ORDER = int(os.getenv("DISCMEANS_ORDER", "16"))
DEFAULT_GRADING = float(os.getenv("DISCMEANS_GRADING", "0.25"))

# Sign certificate threshold policy
CERTIFICATE_ABSOLUTE_THRESHOLD = 1e-8
CERTIFICATE_FLOOR_FACTOR = 10.0

# Disc recovery (Nelder-Mead)
RECOVERY_MAX_ITER = 500
RECOVERY_XATOL = 1e-9

OUTPUT_FORMAT = os.getenv("DISCMEANS_FORMAT", "csv")
