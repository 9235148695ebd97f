"""Pytest configuration: make the repository root importable and register hypothesis profiles.

This avoids needing editable installs during local development.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

settings.register_profile(
    "ordpde",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", parent=settings.get_profile("ordpde"), max_examples=200)
settings.load_profile(os.getenv("ORDPDE_HYPOTHESIS_PROFILE", "ordpde"))

SAMPLE_DATA = ROOT / "sample_data"


@pytest.fixture
def sample_data() -> Path:
    return SAMPLE_DATA


@pytest.fixture
def write_spec(tmp_path):
    """Write a problem file from keyword values and return its path."""

    def _write(name: str = "problem.spec", **values) -> Path:
        lines = []
        for key, value in values.items():
            if isinstance(value, str):
                lines.append(f'{key} = "{value}"')
            else:
                lines.append(f"{key} = {value}")
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write
