"""Large-scale replays on the 1000x1000 mesh. Run with ``pytest -m slow``."""

import pytest

from batchgrow import harness
from batchgrow.estimators import estimate_diameter
from batchgrow.graph_io import gen_mesh

pytestmark = pytest.mark.slow

MESH1000_DIAMETER = 1998  # rows + cols - 2


@pytest.fixture(scope="module")
def mesh1000():
    return gen_mesh(1000, 1000)


def test_finer_granularity_diameter_row(mesh1000):
    # tau = 5 lands near the 3588-cluster granularity of the reference run
    est = estimate_diameter(mesh1000, 5, 0, use_cluster2=False)
    assert abs(est.quotient_sizes[0] - 3588) <= 0.2 * 3588
    assert est.delta_c <= MESH1000_DIAMETER <= est.delta_dprime <= est.delta_prime
    assert est.delta_dprime / MESH1000_DIAMETER < 2


def test_cluster_beats_mpx_radius(mesh1000):
    rows = harness.compare(mesh1000, 7641, [0])
    radius = {r["algo"]: r["radius"] for r in rows}
    assert radius["cluster"] <= radius["mpx"]
