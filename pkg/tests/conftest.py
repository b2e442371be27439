from __future__ import annotations

import pytest

from mixedwaring import _accel

BACKENDS = ["numpy"] + (["numba"] if _accel.HAVE_NUMBA else [])


@pytest.fixture(params=BACKENDS)
def each_backend(request):
    with _accel.use_backend(request.param):
        yield request.param
