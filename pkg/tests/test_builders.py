"""Builders: domains, validation of every output, and the builder registry."""

import pytest

from deltagraph import (
    ball,
    build,
    cayley,
    cycle,
    deformed_chain,
    double_chain,
    grid,
    iso_check,
    single_chain,
    spec_from_text,
    validate,
)
from deltagraph.builders import GraphSpec

ALL_BUILDERS = (
    lambda: single_chain(2),
    lambda: double_chain(2, 3),
    lambda: grid(2, 3),
    lambda: cycle(3, 2),
    lambda: cycle(4, 1),
    lambda: cayley((2, 3)),
    lambda: cayley((2.0,)),
    lambda: deformed_chain(1.05, 0.3),
)


@pytest.mark.parametrize("maker", ALL_BUILDERS)
def test_every_builder_validates_at_radius_6(maker):
    report = validate(maker(), 6)
    assert report.passed, report.failures()


class TestDomains:
    def test_single_chain_needs_delta_above_2(self):
        with pytest.raises(ValueError):
            single_chain(1)
        with pytest.raises(ValueError):
            single_chain(0)

    def test_double_chain_needs_delta_above_4(self):
        with pytest.raises(ValueError):
            double_chain(1, 1)
        assert double_chain(1, 2).delta == pytest.approx(4.5)

    def test_cycle_domain(self):
        with pytest.raises(ValueError):
            cycle(0, 2)
        with pytest.raises(ValueError):
            cycle(3, -1)
        assert len(ball(cycle(1, 2), 2).vertices) == 1

    def test_cayley_domain(self):
        with pytest.raises(ValueError):
            cayley(())
        with pytest.raises(ValueError):
            cayley((2, -3))

    def test_deformed_domain(self):
        with pytest.raises(ValueError):
            deformed_chain(1.0, 0.3)

    def test_delta_values(self):
        assert single_chain(2).delta == pytest.approx(2.5)
        assert double_chain(2, 3).delta == pytest.approx(2 + 0.5 + 3 + 1 / 3)
        assert cycle(4, 1).delta == pytest.approx(2.0)


class TestRegistry:
    def test_cayley_is_the_grid(self):
        m = iso_check(ball(cayley((2, 3)), 2), ball(grid(2, 3), 2), fix_basepoint=True)
        assert m is not None

    def test_build_dispatch(self):
        g = build(GraphSpec("cycle", {"n": 3, "q": 2}))
        assert len(ball(g, 3).vertices) == 3
        g = build(GraphSpec("cayley", {"k": 2, "w1": 2, "w2": 3}))
        assert g.basepoint == (0, 0)

    def test_build_missing_parameter(self):
        with pytest.raises(ValueError):
            build(GraphSpec("single_chain", {}))
        with pytest.raises(ValueError):
            build(GraphSpec("unknown", {}))

    def test_spec_from_text(self):
        spec = spec_from_text("double_chain:a=2,b=3")
        assert spec.variant == "double_chain"
        assert spec.params == {"a": 2.0, "b": 3.0}
        with pytest.raises(ValueError):
            spec_from_text("nope:x=1")
        with pytest.raises(ValueError):
            spec_from_text("grid:a2")
