"""
Configuration for Bar Homology
Cell caps and modular refutation settings
"""
import os

# Largest boundary matrix (number of columns) assembled in one call
BAR_CELL_CAP = int(os.getenv('HOMFORGE_CAP', '100000'))

# Boundary matrices with more columns than this try a mod-p refutation first
REFUTE_THRESHOLD = 20000
REFUTE_PRIMES = (2, 3, 5)

# Groups above this order are refused for homology in degrees 2 and 3
BAR_GROUP_CAP = int(os.getenv('HOMFORGE_BAR_GROUP_CAP', '128'))

# Highest degree for which full homology is computed (needs the next boundary map)
MAX_HOMOLOGY_DEGREE = 3
