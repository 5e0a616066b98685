"""Choice-based revenue optimization toolkit."""

from rrmilp._core import (
    build_mps,
    gap_percent,
    instance_digest,
    model_counts,
    mps_roundtrip,
    oracle,
    solve,
    synth_instance,
    validate,
)

__all__ = [
    "build_mps",
    "gap_percent",
    "instance_digest",
    "model_counts",
    "mps_roundtrip",
    "oracle",
    "solve",
    "synth_instance",
    "validate",
]
