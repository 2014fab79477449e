import pytest

from reboundcpg import NetworkSpec, NeuronSpec, SimConfig, simulate
from reboundcpg.presets import load_preset
from reboundcpg.scenario import run_scenario


@pytest.fixture(scope="session")
def run_root(tmp_path_factory):
    return tmp_path_factory.mktemp("runs")


@pytest.fixture(scope="session")
def preset_run(run_root, warm_kernel):
    """Run each preset at most once per session; heavy scenarios are shared
    by the topology, controller, and acceptance tests."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = run_scenario(load_preset(name), run_root / "first")
        return cache[name]

    return get


@pytest.fixture(scope="session")
def warm_kernel():
    """Compile the jitted loop before any timed assertion."""
    spec = NetworkSpec(neurons=(NeuronSpec("hh"), NeuronSpec("rs")))
    simulate(spec, SimConfig(duration=0.1, dt=0.01))
