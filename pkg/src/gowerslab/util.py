"""Deterministic seeding, rational parsing, and canonical JSON helpers."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction


def split_seed(seed: int, label: str) -> int:
    """Derive a child seed from ``seed`` and a stage label.

    Stable across platforms and Python versions (sha256, not ``hash``),
    so every consumer of randomness in a scenario draws from a named,
    reproducible stream.
    """
    digest = hashlib.sha256(f"{seed}/{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def stable_fraction_hash(seed: int, payload: str, modulus: int = 1_000_000) -> int:
    """Map (seed, payload) to [0, modulus) reproducibly."""
    digest = hashlib.sha256(f"{seed}|{payload}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % modulus


def parse_fraction(text) -> Fraction:
    """Parse "3/20", "0.15"-free exact strings, or ints into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise TypeError(f"cannot parse fraction from {text!r}")


def fraction_str(value: Fraction) -> str:
    """Render a Fraction as "p/q" (or "p" for integers)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _json_default(obj):
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, frozenset):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def canonical_json(data) -> str:
    """Serialize with sorted keys and exact rationals; byte-stable."""
    return json.dumps(data, sort_keys=True, indent=2, default=_json_default)
