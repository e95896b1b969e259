import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import chord_distance_km
from urbandtn.errors import DegenerateBounds
from urbandtn.geo import (EARTH_RADIUS_KM, delay_padding, geo_to_projected, geodesic_distance,
                          interpolate_path, make_projection, projected_to_geo)

lat = st.floats(-89.9, 89.9, allow_nan=False)
lon = st.floats(-179.9, 179.9, allow_nan=False)


def test_closed_form_distances():
    assert geodesic_distance((0, 0), (0, 180)) == pytest.approx(math.pi * EARTH_RADIUS_KM, rel=1e-6)
    assert geodesic_distance((0, 0), (0, 1)) == pytest.approx(111.19492664455873, rel=1e-6)
    assert geodesic_distance((0, 0), (1, 0)) == pytest.approx(111.19492664455873, rel=1e-6)
    assert geodesic_distance((90, 0), (-90, 0)) == pytest.approx(math.pi * EARTH_RADIUS_KM, rel=1e-6)
    assert geodesic_distance((19.04, 72.85), (19.04, 72.85)) == 0.0


@given(lat, lon, lat, lon)
@settings(max_examples=200, deadline=None)
def test_matches_chord_oracle(a1, o1, a2, o2):
    d = geodesic_distance((a1, o1), (a2, o2))
    assert d == pytest.approx(chord_distance_km((a1, o1), (a2, o2)), rel=1e-6, abs=1e-6)


def test_metric_properties_on_seeded_triples():
    rng = random.Random(7)
    for _ in range(1000):
        a, b, c = ((rng.uniform(-89, 89), rng.uniform(-179, 179)) for _ in range(3))
        ab, bc, ac = geodesic_distance(a, b), geodesic_distance(b, c), geodesic_distance(a, c)
        assert ab >= 0
        assert ab == pytest.approx(geodesic_distance(b, a), rel=1e-12)
        assert ac <= ab + bc + 1e-9


def test_projection_round_trip_and_orientation():
    bounds = (19.03, 72.84, 19.05, 72.87)
    spec = make_projection(bounds, (600, 900))
    assert geo_to_projected((19.05, 72.84), spec) == pytest.approx((0.0, 0.0))
    y, x = geo_to_projected((19.03, 72.87), spec)
    assert (y, x) == pytest.approx((600.0, 900.0))
    rng = random.Random(3)
    for _ in range(200):
        p = (rng.uniform(19.03, 19.05), rng.uniform(72.84, 72.87))
        back = projected_to_geo(geo_to_projected(p, spec), spec)
        assert back[0] == pytest.approx(p[0], rel=1e-9)
        assert back[1] == pytest.approx(p[1], rel=1e-9)


def test_degenerate_bounds():
    with pytest.raises(DegenerateBounds):
        make_projection((19.0, 72.0, 19.0, 73.0), (10, 10))
    with pytest.raises(DegenerateBounds):
        make_projection((19.0, 72.0, 20.0, 73.0), (0, 10))


def test_interpolation_spacing_and_endpoints():
    a, b, c = (19.04, 72.85), (19.04, 72.86), (19.05, 72.86)
    step = 0.025
    pts = interpolate_path([a, b, c], step)
    assert pts[0] == a and pts[-1] == c
    assert b in pts
    for p, q in zip(pts, pts[1:]):
        assert geodesic_distance(p, q) <= step + 1e-9
    # a leg that is an exact multiple of the step gets exactly that many pieces
    leg = geodesic_distance(a, b)
    assert len(interpolate_path([a, b], leg / 4)) == 5


def test_interpolation_collapses_repeats():
    a = (19.04, 72.85)
    assert interpolate_path([a, a], 0.01) == [a]


def test_delay_padding():
    assert delay_padding(0, 1.5) == 0
    assert delay_padding(3.0, 1.5) == 2
    assert delay_padding(3.1, 1.5) == 3
    with pytest.raises(ValueError):
        delay_padding(1, 0)
