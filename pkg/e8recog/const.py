"""Constants for the E8 recognition toolkit."""

import logging

DOMAIN = "e8recog"

LOGGER = logging.getLogger(__package__)

# Indices d with Phi_d | |E8(q)|: every divisor of the degree doubles below.
E8_DEGREE_DOUBLES = (2, 8, 12, 14, 18, 20, 24, 30)
E8_CYCLOTOMIC_INDICES = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 15, 18, 20, 24, 30)
E8_CHARACTERISTIC_EXPONENT = 120

J4_PRIMES = (2, 3, 5, 7, 11, 23, 29, 31, 37, 43)

DEFAULT_CLASSES = (0, 1, 4)
REFERENCE_BOUND = 10000
REFERENCE_CANDIDATE_COUNT = 610
REFERENCE_EXCEPTIONAL = (919, 1289, 1931, 3911, 4691, 5381, 7589)

# Smallest |pi(E8(theta))| for theta >= 4: the characteristic plus one
# primitive prime divisor for every index except possibly d = 2.
PI_SIZE_FLOOR = 17
PI_SIZE_FLOOR_FROM = 4

TRIAL_DIVISION_BOUND = 100_000
PERFECT_POWER_MAX_EXPONENT = 6
RHO_BATCH = 128

# Bases 2..41 decide primality deterministically below this bound.
MILLER_RABIN_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MILLER_RABIN_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981

PPHI_LABELS = ("A2", "A3", "A4", "A5", "D5", "D6", "E6", "E7", "E8")

ENV_CACHE_PATH = "E8RECOG_CACHE"
DEFAULT_CACHE_FILE = "e8recog-factor-cache.json"

DEFAULT_VERIFY_BOUND = 500
SLOW_BOUND_THRESHOLD = 2000
SLOWEST_VALUES_REPORTED = 10

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
