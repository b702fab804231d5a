"""Physical constants used by the scenario front end.

All values are external inputs taken from standard reference data, not
quantities derived anywhere in this library.
"""

# SI definition of the meter (exact)
C_SI = 299_792_458.0  # m/s

# PDG 2022 positive-muon mean lifetime
MUON_LIFETIME_S = 2.1969811e-6  # s
