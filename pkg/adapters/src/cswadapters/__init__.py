"""Batch adapters around external neural models.

Each adapter is a file-in/file-out job: it reads one of the canonical corpus
file formats, runs a model (or a built-in deterministic fallback), and writes
a line-parallel output file atomically. The core toolkit is never imported;
the two packages communicate exclusively through files.
"""

__version__ = "0.1.0"

from .jobs import AdapterJob, JobKind  # noqa: F401
