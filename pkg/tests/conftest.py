import copy

import pytest

from relhyp_hub.core.development import build_development
from relhyp_hub.core.examples import load_example
from relhyp_hub.core.schemas import load_complex
from relhyp_hub.infra.settings import SettingsLoader, SingletonMeta


@pytest.fixture(autouse=True)
def fresh_settings():
    SingletonMeta.reset(SettingsLoader)
    yield
    SingletonMeta.reset(SettingsLoader)


@pytest.fixture(scope="session")
def genus2_cog():
    return load_example("genus2").complex_of_groups()


@pytest.fixture(scope="session")
def amalgam_cog():
    return load_example("amalgam-4-2-6").complex_of_groups()


@pytest.fixture(scope="session")
def theta_cog():
    return load_example("theta-free").complex_of_groups()


@pytest.fixture(scope="session")
def genus2_dev(genus2_cog):
    return build_development(genus2_cog, bound=4, radius=2)


@pytest.fixture(scope="session")
def amalgam_dev(amalgam_cog):
    return build_development(amalgam_cog, bound=4, radius=4)


@pytest.fixture(scope="session")
def theta_dev(theta_cog):
    return build_development(theta_cog, bound=4, radius=4)


@pytest.fixture
def complex_variant():
    """
    Встроенный комплекс с заменёнными образами psi: complex_variant("genus2", {"e/u": "1"})
    """
    def build(name: str, psi: dict[str, str]):
        data = copy.deepcopy(load_example(name).data["complex"])
        for arrow, image in psi.items():
            data["psi"][arrow] = [image]
        return load_complex(data, name)

    return build
