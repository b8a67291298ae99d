"""
Reference oracle for the ballmath library.

Everything here is computed with mpmath and plain integers; the primary
implementation is never imported.  Interaction goes through its file
formats (hex-float vector files, table dumps) and its command line.
"""

from .hexfloat import format_hex, parse_hex
from .vectors import check_containment, gen_vectors
from .audit import audit_constants_dump, audit_table_dump

__all__ = ["format_hex", "parse_hex", "gen_vectors", "check_containment",
           "audit_table_dump", "audit_constants_dump"]
