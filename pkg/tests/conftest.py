import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tilepump.instances import load_fixture


@pytest.fixture(scope="session")
def line_e():
    return load_fixture("LINE-E")


@pytest.fixture(scope="session")
def col_n():
    return load_fixture("COL-N")


@pytest.fixture(scope="session")
def hook_s():
    return load_fixture("HOOK-S")


@pytest.fixture(scope="session")
def nshape():
    return load_fixture("NSHAPE")


@pytest.fixture(scope="session")
def fork():
    return load_fixture("FORK")


def zigzag_system():
    """Two interchangeable all-glue tile types; the path climbs, loops through
    a t1 plug, and re-ascends so the first pump attempt collides with the
    prefix and the branch machinery engages."""
    from tilepump.model import Assembly, Glue, TileAssemblySystem, TileType, validate_path

    a = Glue("a", 1)
    tiles = (TileType("t0", a, a, a, a), TileType("t1", a, a, a, a))
    seed = Assembly({(0, 0): "t0"}, {t.name: t for t in tiles})
    tas = TileAssemblySystem(tiles, seed)
    steps = [((0, 1), "t0"), ((0, 2), "t0"), ((1, 2), "t0"), ((1, 1), "t0"),
             ((2, 1), "t0"), ((2, 2), "t0"), ((2, 3), "t0"), ((1, 3), "t1"),
             ((0, 3), "t0"), ((0, 4), "t0"), ((0, 5), "t0"), ((0, 6), "t0")]
    return tas, validate_path(tas, steps)


@pytest.fixture(scope="session")
def zigzag():
    return zigzag_system()
