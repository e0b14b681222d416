import os
from pathlib import Path

import pytest

from lclwork.groups import FreeAbelian, FreeGroup, GenSet, ball
from lclwork.lcl import LCLInstance, Pattern


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Point the settings file at an empty temporary location and clear overrides."""
    settings_file = tmp_path / "settings" / "config.json"
    monkeypatch.setenv("LCLWORK_CONFIG_PATH", str(settings_file))
    for name in list(os.environ):
        if name.startswith("LCLWORK_") and name != "LCLWORK_CONFIG_PATH":
            monkeypatch.delenv(name)
    return settings_file


@pytest.fixture
def z() -> FreeAbelian:
    """The integers."""
    return FreeAbelian(1)


@pytest.fixture
def z2() -> FreeAbelian:
    """The integer lattice."""
    return FreeAbelian(2)


@pytest.fixture
def f2() -> FreeGroup:
    """The free group on two generators."""
    return FreeGroup(2)


@pytest.fixture
def proper_two_coloring(z: FreeAbelian) -> LCLInstance:
    """Neighbors along the generator get different colors out of two."""
    patterns = [
        Pattern((((0,), 0), ((1,), 1))),
        Pattern((((0,), 1), ((1,), 0))),
    ]
    return LCLInstance.build(z, patterns, 2, {"construction": "list"})


@pytest.fixture
def z_ball1(z: FreeAbelian) -> GenSet:
    """The radius one ball of the integers."""
    return ball(z, 1)
