"""Pytest configuration and fixtures."""
import sys
from pathlib import Path
import os

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import pytest

# Set test environment variables BEFORE importing cartan_sub modules
os.environ["CARTAN_SUB_ENVIRONMENT"] = "test"
os.environ["CARTAN_SUB_THREADS"] = "2"
os.environ["CARTAN_SUB_SEED"] = "42"
os.environ["CARTAN_SUB_RIGIDITY_TRIALS"] = "200"
os.environ["CARTAN_SUB_RANDOM_ASSIGNMENTS"] = "20"


@pytest.fixture(scope="session")
def fixtures_dir():
    """Directory with geometry definition files."""
    return project_root / "tests" / "fixtures"


@pytest.fixture(scope="session")
def riemannian_3():
    """Riemannian geometry in dimension 3."""
    from cartan_sub.geometries import builtin
    return builtin("Riemannian", {"n": 3})


@pytest.fixture(scope="session")
def riem_sub_11():
    """Riemannian submersion with a one-dimensional base and fibre."""
    from cartan_sub.geometries import builtin
    return builtin("RiemannianSubmersion", {"p": 1, "q": 1})


@pytest.fixture(scope="session")
def riem_sub_22():
    """Riemannian submersion with p = q = 2."""
    from cartan_sub.geometries import builtin
    return builtin("RiemannianSubmersion", {"p": 2, "q": 2})


@pytest.fixture(scope="session")
def born_rigid_3():
    """Born-rigid flow in dimension 3."""
    from cartan_sub.geometries import builtin
    return builtin("BornRigid", {"n": 3})


@pytest.fixture(scope="session")
def weyl_sub_2():
    """Codimension-one Weyl submersion with p = 2."""
    from cartan_sub.geometries import builtin
    return builtin("WeylSubmersionCodim1", {"p": 2})


@pytest.fixture
def pde_problem(tmp_path):
    """Constant-source problem on [0, 0.5] x [0, 1] written to JSON."""
    import json
    path = tmp_path / "problem.json"
    path.write_text(json.dumps({
        "a": "1",
        "b": "0",
        "initial": "0",
        "x": [0.0, 0.5],
        "y": [0.0, 1.0],
        "step": 0.0625,
    }))
    return path
