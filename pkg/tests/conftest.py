from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from podsynth.baselines import prismatic_torus
from podsynth.pod import PodConfig, build_pod

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def skel128():
    return build_pod(PodConfig(1, 1, 2))


@pytest.fixture(scope="session")
def skel64():
    return build_pod(PodConfig(1, 1, 1))


@pytest.fixture(scope="session")
def pt448():
    return prismatic_torus((4, 4, 8))



@pytest.fixture(scope="session")
def pt448_mcf(pt448):
    from podsynth.synth import mcf_of_fixed

    return mcf_of_fixed(pt448)
