"""Shared test configuration."""

from __future__ import annotations

from hypothesis import settings

# The property suites run alongside long graph builds on shared machines;
# hypothesis's wall-clock deadline turns load spikes into spurious failures.
settings.register_profile("dcmatch", deadline=None)
settings.load_profile("dcmatch")
