import numpy as np
import pytest

from multisym import load_example

SEED = 42


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(SEED)


def _bundle_fixture(example_id):
    @pytest.fixture(scope="session", name=example_id)
    def fixture():
        return load_example(example_id)

    return fixture


schwarz = _bundle_fixture("schwarz")
dbh = _bundle_fixture("dbh")
control5 = _bundle_fixture("control5")
dqho = _bundle_fixture("dqho")
osc_spin = _bundle_fixture("osc_spin")
r8_volume = _bundle_fixture("r8_volume")
