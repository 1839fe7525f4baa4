"""Deterministic seed derivation and worker-count resolution.

Child seeds are a pure function of (master seed, purpose tag, index), so
dataset generation, training, and evaluation never share RNG streams and a
re-run with the same master seed reproduces every draw.
"""

from __future__ import annotations

import hashlib
import os


def derive_seed(master: int, tag: str, index: int = 0) -> int:
    """Derive a 63-bit child seed from a master seed, a purpose tag, and an index."""
    digest = hashlib.sha256(f"{master}:{tag}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def worker_count() -> int:
    """Number of parallel workers, bounded by the METASTOP_THREADS env var."""
    cpus = os.cpu_count() or 1
    bound = os.environ.get("METASTOP_THREADS")
    if bound is not None:
        try:
            return max(1, min(cpus, int(bound)))
        except ValueError:
            return 1
    return cpus
