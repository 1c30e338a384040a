import pytest

from cipid import VariableSet, canonical
from cipid.axioms import run_axiom_suite
from cipid.channels import degradation_redundancy
from cipid.sources import SourceCollection


@pytest.fixture(scope="session")
def axiom_reports():
    """Full randomized property run, shared by every test that needs it."""
    return run_axiom_suite(trials=200, seed=0)


@pytest.fixture(scope="session")
def boom_redundancy():
    dist = canonical("BOOM")
    target = VariableSet.of(dist.index_of("T"))
    coll = SourceCollection.of(
        (dist.index_of("Y1"),), (dist.index_of("Y2"),)
    )
    return degradation_redundancy(dist, target, coll, seed=0)
