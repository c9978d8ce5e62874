import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradedprelie.errors import MixedVariant
from gradedprelie.graded import Element, e
from gradedprelie.scalar import GaussRational, T

coeffs = st.integers(-5, 5).map(GaussRational)
elements = st.dictionaries(st.integers(-6, 6), coeffs, max_size=5).map(Element)


def test_cancellation():
    x = e(2) + e(2, GaussRational(-1))
    assert x.is_zero()
    assert x.support() == []


def test_support_and_missing_coefficient():
    x = e(-1, GaussRational(3)) + e(4, GaussRational(5))
    assert x.support() == [-1, 4]
    assert x.coefficient_at(0) == 0
    assert x.min_degree() == -1 and x.max_degree() == 4


def test_json_sorted_by_degree():
    x = Element({4: 5, -1: 3})
    assert x.to_json() == {"terms": [[-1, "3"], [4, "5"]]}
    assert Element.from_json(json.loads(json.dumps(x.to_json()))) == x


def test_mixed_variant():
    with pytest.raises(MixedVariant):
        e(1) + e(1, T)


@given(elements, elements, elements)
def test_vector_space_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x - x == Element.zero()
    c = GaussRational(3, 1)
    assert (x + y).scale(c) == x.scale(c) + y.scale(c)
    assert set((x + y).support()) <= set(x.support()) | set(y.support())
