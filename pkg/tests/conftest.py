import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from picardseq.fixture import load_extension

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = ["fix-a", "fix-b", "fix-c", "fix-d", "fix-e", "fix-f"]
CORE = FIXTURES[:4]

_cache = {}


def ext_of(name):
    if name not in _cache:
        ext = load_extension(name)
        ext.name = name.upper()
        _cache[name] = ext
    return _cache[name]


@pytest.fixture(params=FIXTURES)
def ext(request):
    return ext_of(request.param)


@pytest.fixture(params=FIXTURES)
def fixture_name(request):
    return request.param
