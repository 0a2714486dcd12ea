"""Shared fixtures: the small skeletal models used across the suite.

All three are group models (base group acting as objects, fiber group as
endo-1-cells, scalar 2-cells, bicharacter tensorator):

* g_base2  -- base Z/2, trivial fiber, F_2: only the pentagonator tower
              carries cohomology.
* g_fiber2 -- trivial base, fiber Z/2, F_2: tensorator and associator
              directions are nontrivial.
* g_sign3  -- base Z/2, fiber Z/2, sign bicharacter, F_3: the smallest
              model with a nonscalar tensorator table.
"""

import pytest

from graycohom.exactlinalg import GF
from graycohom.examples import (
    GroupModelSpec,
    cyclic_group,
    group_model,
    sign_bicharacter,
    trivial_bicharacter,
    trivial_group,
)


def make_model(base, fiber, bichar, field_):
    spec = GroupModelSpec(base, fiber, bichar(fiber, field_), field_)
    spec.validate()
    return group_model(spec)


@pytest.fixture(scope="session")
def g_base2():
    return make_model(cyclic_group(2), trivial_group(),
                      trivial_bicharacter, GF(2))


@pytest.fixture(scope="session")
def g_fiber2():
    return make_model(trivial_group(), cyclic_group(2),
                      trivial_bicharacter, GF(2))


@pytest.fixture(scope="session")
def g_sign3():
    return make_model(cyclic_group(2), cyclic_group(2),
                      sign_bicharacter, GF(3))
