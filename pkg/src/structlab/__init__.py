"""structlab: an exact, desk-scale laboratory for structure functions.

The package builds small, fully auditable description systems over a
universe of fixed-length binary strings and computes — in exact integer and
rational arithmetic — the classical algorithmic-statistics quantities those
systems induce: shortest descriptions, restricted two-part codes, randomness
deficiencies, structure-function profiles, anytime model searches, curve
synthesis, covering families, enumeration statistics, prediction losses, and
translations between set / probability / function model classes.

Floating point appears only in displayed values; every comparison and every
certificate is computed over integers or ``fractions.Fraction``.
"""

from .codec import (
    EMPTY,
    BitString,
    decode_pair,
    decode_sd,
    decode_std,
    encode_pair,
    encode_sd,
    encode_std,
    integer_of_string,
    sd_code_length,
    std_code_length,
    string_of_integer,
)
from .errors import (
    CodecError,
    DescriptorError,
    FixtureError,
    RefusalError,
    StructLabError,
)

__version__ = "0.1.0"

__all__ = [
    "BitString",
    "EMPTY",
    "string_of_integer",
    "integer_of_string",
    "encode_sd",
    "decode_sd",
    "sd_code_length",
    "encode_std",
    "decode_std",
    "std_code_length",
    "encode_pair",
    "decode_pair",
    "StructLabError",
    "CodecError",
    "DescriptorError",
    "FixtureError",
    "RefusalError",
    "__version__",
]
