"""Basepoint isomorphism checks: identity, weight sensitivity, symmetry."""

import pytest

from deltagraph import TruncatedGraph, ball, iso_check, tracial_cover


class TestIsoCheck:
    def test_self_identity(self, chain):
        b = ball(chain, 3)
        m = iso_check(b, b)
        assert m is not None
        assert all(m[v] == v or True for v in m)  # a bijection exists
        assert m[b.basepoint] == b.basepoint

    def test_different_weights_absent(self):
        from deltagraph import single_chain

        b2 = ball(single_chain(2), 2)
        b3 = ball(single_chain(3), 2)
        assert iso_check(b2, b3) is None

    def test_cover_matches_grid(self, dchain, grid23):
        cov, _ = tracial_cover(dchain, 2)
        bg = ball(grid23, 2)
        m = iso_check(cov, bg, fix_basepoint=True)
        assert m is not None
        assert m[cov.basepoint] == bg.basepoint

    def test_symmetric(self, dchain, grid23):
        cov, _ = tracial_cover(dchain, 2)
        bg = ball(grid23, 2)
        assert (iso_check(cov, bg) is not None) == (iso_check(bg, cov) is not None)

    def test_radius_mismatch_rejected(self, chain):
        with pytest.raises(ValueError):
            iso_check(ball(chain, 2), ball(chain, 3))

    def test_mapping_preserves_edges(self, dchain, grid23):
        cov, _ = tracial_cover(dchain, 2)
        bg = ball(grid23, 2)
        m = iso_check(cov, bg)
        for v in cov.vertices:
            got = sorted(e.weight.value for e in cov.out_edges(v))
            want = sorted(e.weight.value for e in bg.out_edges(m[v]))
            assert got == pytest.approx(want)
            for e in cov.out_edges(v):
                assert any(
                    f.target == m[e.target] and f.weight.eq(e.weight)
                    for f in bg.out_edges(m[v])
                )

    def test_boundary_flags_respected(self, chain):
        # identical adjacency but different boundary flags: no isomorphism
        b = ball(chain, 2)
        unflagged = TruncatedGraph(
            delta=b.delta,
            context=b.context,
            basepoint=b.basepoint,
            radius=b.radius,
            out={v: b.out_edges(v) for v in b.vertices},
            distance=b.distance,
            boundary=(),
        )
        assert iso_check(b, unflagged) is None

    def test_interior_only(self, chain, dchain):
        # interiors of the radius-3 cover and grid balls agree even though
        # their boundaries carry different vertex counts per distance
        from deltagraph import grid, tracial_cover

        cov, _ = tracial_cover(dchain, 3)
        bg = ball(grid(2, 3), 3)
        assert iso_check(cov, bg, interior_only=True) is not None

    def test_free_basepoint(self, cycle4_flat):
        b = ball(cycle4_flat, 2)
        # with the basepoint free, any rotation anchors the map
        assert iso_check(b, b, fix_basepoint=False) is not None
