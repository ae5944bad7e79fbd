import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from potbal import io as pio
from potbal.balayage import boundary_cdf, sweep_strip, sweep01
from potbal.charge import ChargeDistribution, LineMass
from potbal.fixtures import integers, ray
from potbal.subfun import Builtin, CanonicalProduct, Scaled, Sum

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
nonzero = finite.filter(lambda m: m != 0.0)
distributions = st.builds(
    lambda pts, lines: ChargeDistribution.from_atoms(pts, tuple(LineMass(x, c) for x, c in lines)),
    st.lists(st.tuples(st.builds(complex, finite, finite), nonzero), max_size=10),
    st.lists(st.tuples(finite, nonzero), max_size=3),
)


class TestWriter:
    def test_full_precision(self):
        assert pio.dumps(0.1, indent=None) == "0.10000000000000001"
        assert float(pio.dumps(1 / 3, indent=None)) == 1 / 3

    def test_special_values(self):
        text = pio.dumps([math.inf, -math.inf, math.nan], indent=None)
        assert text == "[Infinity,-Infinity,NaN]"
        back = json.loads(text)
        assert back[0] == math.inf and math.isnan(back[2])

    def test_structure(self):
        obj = {"a": [1, 2.5, None, True], "b": {}, "c": [], "d": np.arange(2)}
        assert json.loads(pio.dumps(obj)) == {"a": [1, 2.5, None, True], "b": {}, "c": [], "d": [0, 1]}

    def test_unknown_type(self):
        with pytest.raises(TypeError):
            pio.dumps({"x": object()})

    def test_malformed(self):
        with pytest.raises(pio.FormatError):
            pio.loads("{not json")


class TestDistributions:
    @given(distributions)
    def test_round_trip(self, nu):
        back = pio.distribution_from_dict(pio.loads(pio.dumps(pio.distribution_to_dict(nu))))
        assert back == nu
        assert np.array_equal(back.positions, nu.positions) and np.array_equal(back.masses, nu.masses)

    @pytest.mark.parametrize(
        "doc",
        [
            [],
            {"atoms": [{"re": 1}]},
            {"atoms": [{"re": 1, "im": 0, "mass": "x"}]},
            {"atoms": [{"re": 1, "im": 0, "mass": 0}]},
            {"lines": [{"x": 0}]},
            {"atoms": 3},
        ],
    )
    def test_schema_errors(self, doc):
        with pytest.raises(pio.FormatError):
            pio.distribution_from_dict(doc)

    def test_empty_document(self):
        assert pio.distribution_from_dict({}).is_empty()


class TestBoundary:
    @pytest.mark.parametrize(
        "bc",
        [
            sweep01(ray(0.3 + 1j, 20) + ChargeDistribution.from_atoms([(2j, 1.5), (-3, 2.0)])),
            sweep_strip(integers(30) + ray(1 + 1j, 5), 1.5),
        ],
    )
    def test_round_trip(self, bc):
        back = pio.boundary_from_dict(pio.loads(pio.dumps(pio.boundary_to_dict(bc))))
        ys = np.linspace(-40, 40, 81)
        for x in bc.lines():
            assert np.array_equal(boundary_cdf(back, x, ys), boundary_cdf(bc, x, ys))
        assert back.retained == bc.retained and back.genus1_only == bc.genus1_only
        assert back.targets == bc.targets


class TestFunctions:
    @pytest.mark.parametrize(
        "u",
        [
            Builtin("log_abs_sin_pi"),
            Builtin("linear_abs", a=2.5),
            Builtin("harmonic_linear", a=1 - 2j, c=0.25),
            Builtin("log_abs", center=1 + 1j),
            CanonicalProduct(np.array([1.0, -2.0, 3j]), genus=0, truncation_radius=50.0),
            Sum((Scaled(Builtin("abs_re"), 0.5), Builtin("zero"))),
        ],
    )
    def test_round_trip(self, u):
        back = pio.function_from_dict(pio.loads(pio.dumps(pio.function_to_dict(u))))
        z = np.array([0.3 + 0.1j, -2 + 5j, 7.5 - 3j])
        assert np.array_equal(back(z), u(z))

    def test_default_truncation(self):
        u = pio.function_from_dict({"variant": "canprod", "zeros": [{"re": 1, "im": 0}]}, default_trunc=7.0)
        assert u.truncation_radius == 7.0

    @pytest.mark.parametrize("doc", [{"variant": "nope"}, {"variant": "builtin", "name": "cosh"}, {"variant": "scaled"}, {}, 5])
    def test_errors(self, doc):
        with pytest.raises(pio.FormatError):
            pio.function_from_dict(doc)
