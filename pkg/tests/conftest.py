from __future__ import annotations

from pathlib import Path

import pytest

from frameforge.frame_store import parse_frame_xml

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def fig1_bytes() -> bytes:
    return (GOLDEN / "fig1.frame.xml").read_bytes()


@pytest.fixture()
def fig1_diagram(fig1_bytes):
    return parse_frame_xml(fig1_bytes)


def golden_path(name: str) -> Path:
    return GOLDEN / name
