"""
Configuration for Finite Groups and Fields
Supported fields, fixed irreducible polynomials and construction caps
"""

# Field sizes with a fixed model
SUPPORTED_Q = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27)

# Irreducible polynomials for the non-prime fields, coefficients low degree first
# F_q = F_p[x]/(f); elements are encoded as sum(c_i * p**i)
IRREDUCIBLE_POLYNOMIALS = {
    4: (1, 1, 1),        # x^2 + x + 1 over F_2
    8: (1, 1, 0, 1),     # x^3 + x + 1 over F_2
    9: (1, 0, 1),        # x^2 + 1 over F_3
    16: (1, 1, 0, 0, 1), # x^4 + x + 1 over F_2
    25: (2, 0, 1),       # x^2 + 2 over F_5
    27: (1, 2, 0, 1),    # x^3 - x + 1 over F_3
}

# Size caps
CONSTRUCTION_CAP = 4096      # closure enumeration of matrix groups
AXIOM_CHECK_LIMIT = 256      # exhaustive associativity check up to this order
