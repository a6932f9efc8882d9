import numpy as np
import pytest

from rislink.rng import RngStream, as_generator


class TestRngStream:
    def test_same_stream_same_draws(self):
        a = RngStream(12, 34).generator().random(8)
        b = RngStream(12, 34).generator().random(8)
        assert np.array_equal(a, b)

    def test_streams_independent_of_consumption_order(self):
        # consuming stream 1 first or second never changes stream 2
        first = RngStream(5, 2).generator().random(4)
        RngStream(5, 1).generator().random(100)
        second = RngStream(5, 2).generator().random(4)
        assert np.array_equal(first, second)

    def test_distinct_streams_differ(self):
        a = RngStream(5, 0).generator().random(8)
        b = RngStream(5, 1).generator().random(8)
        c = RngStream(6, 0).generator().random(8)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_bounds(self):
        with pytest.raises(ValueError):
            RngStream(-1)
        with pytest.raises(ValueError):
            RngStream(0, 2**64)
        RngStream(2**64 - 1, 2**64 - 1)

    def test_as_generator_passthrough(self):
        gen = RngStream(1).generator()
        assert as_generator(gen) is gen
        assert isinstance(as_generator(RngStream(1)), np.random.Generator)
        with pytest.raises(TypeError):
            as_generator(42)
