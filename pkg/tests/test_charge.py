import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from potbal.charge import (
    Atom,
    ChargeDistribution,
    LineMass,
    LineStatus,
    Region,
    mirror_iR,
    radial_counting,
    restrict,
    rotate_ccw,
    rotate_cw,
    shift,
    upper_density,
)
from potbal.errors import LinePresent, PartialLineOverlap
from potbal.fixtures import generate, integers, lattice_i, ray

A = ChargeDistribution.from_atoms

coord = st.floats(-50, 50, allow_nan=False).map(lambda v: round(v, 3))
mass = st.floats(-5, 5, allow_nan=False).filter(lambda m: abs(m) > 1e-3)
atoms = st.lists(st.tuples(st.builds(complex, coord, coord), mass), max_size=12)
charges = atoms.map(A)


class TestConstruction:
    def test_zero_mass_rejected(self):
        with pytest.raises(ValueError):
            Atom(1.0, 0.0)
        with pytest.raises(ValueError):
            ChargeDistribution(np.array([1j]), np.array([0.0]))

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            ChargeDistribution(np.array([complex(math.inf, 0)]), np.array([1.0]))

    def test_arrays_are_read_only(self):
        nu = A([(1, 1.0)])
        with pytest.raises(ValueError):
            nu.masses[0] = 3.0

    def test_merge_combines_and_drops_zero(self):
        nu = A([(1, 1.0), (2, 3.0), (1, -1.0)])
        assert nu.merged() == A([(2, 3.0)])

    def test_signed_parts(self):
        nu = A([(1, 2.0), (2, -3.0)])
        assert nu.positive_part() == A([(1, 2.0)])
        assert nu.negative_part() == A([(2, 3.0)])
        assert nu.total_variation() == 5.0
        assert not nu.is_mass and nu.variation().is_mass

    def test_subtraction_cancels(self):
        nu = integers(10)
        assert (nu - nu).is_empty()

    @given(charges)
    def test_equality_ignores_order(self, nu):
        rev = ChargeDistribution(nu.positions[::-1], nu.masses[::-1])
        assert rev == nu


class TestRegions:
    def test_restrict_right_half(self):
        assert restrict(A([(2, 1), (-2, 1)]), Region.right_half()) == A([(2, 1)])

    def test_closed_zero_cone_is_imaginary_axis(self):
        nu = A([(1j, 1)])
        assert restrict(nu, Region.cone(0.0, closed=True)) == nu

    def test_cone_boundary_point(self):
        # |Re| = 3 > 0.5 * 5, so the point lies in neither the open nor the closed cone
        nu = A([(3 + 4j, 2)])
        assert restrict(nu, Region.cone(0.5)).is_empty()
        assert restrict(nu, Region.cone(0.5, closed=True)).is_empty()

    def test_cone_closure_on_the_boundary_ray(self):
        nu = A([(3 + 4j, 2)])
        assert restrict(nu, Region.cone(0.6)).is_empty()
        assert restrict(nu, Region.cone(0.6, closed=True)) == nu

    def test_partial_line_raises(self):
        nu = ChargeDistribution(lines=(LineMass(0.5, 1.0),))
        with pytest.raises(PartialLineOverlap):
            restrict(nu, Region.disk(1.0))

    def test_line_status(self):
        assert Region.strip(1.0).line_status(0.5) is LineStatus.INSIDE
        assert Region.strip(1.0).line_status(1.0) is LineStatus.OUTSIDE
        assert Region.strip(1.0, closed=True).line_status(1.0) is LineStatus.INSIDE
        assert Region.strip(1.0).complement().line_status(2.0) is LineStatus.INSIDE
        assert Region.cone(0.0, closed=True).line_status(0.0) is LineStatus.INSIDE

    def test_annulus_is_half_open(self):
        reg = Region.annulus(1.0, 2.0)
        assert list(reg.contains(np.array([1.0, 2.0, 1.5, 2.5]))) == [False, True, True, False]

    @given(charges)
    def test_restrict_and_complement_partition(self, nu):
        for reg in (Region.right_half(), Region.cone(0.4), Region.annulus(3, 20, 1 + 1j), Region.strip(7.0)):
            assert restrict(nu, reg) + restrict(nu, reg.complement()) == nu


class TestMaps:
    def test_shift(self):
        assert shift(A([(1, 1)]), -1) == A([(0, 1)])
        nu = ChargeDistribution(lines=(LineMass(0.0, 2.0),))
        assert shift(nu, 3.0).lines == (LineMass(3.0, 2.0),)

    def test_mirror(self):
        assert mirror_iR(A([(1 + 1j, 1)])) == A([(-1 + 1j, 1)])
        assert mirror_iR(A([(2j, 3)])) == A([(2j, 3)])

    def test_rotate(self):
        assert rotate_cw(A([(1, 1)])) == A([(1j, 1)])
        assert rotate_cw(ChargeDistribution()).is_empty()
        with pytest.raises(LinePresent):
            rotate_cw(ChargeDistribution(lines=(LineMass(0, 1),)))

    @given(charges, st.builds(complex, coord, coord))
    def test_group_laws(self, nu, w):
        assert shift(shift(nu, w), -w).allclose(nu, atol=1e-9)
        assert mirror_iR(mirror_iR(nu)) == nu
        assert rotate_cw(rotate_cw(rotate_cw(rotate_cw(nu)))) == nu
        assert rotate_ccw(rotate_cw(nu)) == nu
        for image in (shift(nu, w), mirror_iR(nu), rotate_cw(nu)):
            assert math.isclose(image.total_variation(), nu.total_variation(), rel_tol=1e-12)


class TestCounting:
    def test_closed_disk(self):
        nu = A([(2, 5)])
        assert radial_counting(nu, 0, 2.0) == 5
        assert radial_counting(nu, 0, 1.99) == 0

    def test_line_chord(self):
        nu = ChargeDistribution(lines=(LineMass(0.0, 1.0),))
        assert radial_counting(nu, 0, 1.0) == 2.0

    def test_upper_density_of_integers(self):
        assert upper_density(ray(1, 1024), 1, 1024) == pytest.approx(1.0, rel=0.05)

    def test_upper_density_of_finite_charge_vanishes(self):
        nu = A([(1, 1), (3j, 2)])
        assert upper_density(nu, 1, 2.0**20) <= 3.0 / 2**10

    def test_upper_density_of_geometric_points(self):
        nu = ChargeDistribution(2.0 ** np.arange(0, 21) + 0j, np.ones(21))
        # logarithmic growth: the tail-window ratio is of order log2(r)/r at the inner window edge
        assert upper_density(nu, 1, 2.0**20) < 0.02


class TestFixtures:
    def test_generators(self):
        assert integers(3).n_atoms == 6
        assert ray(1 + 1j, 4).positions[-1] == 4 + 4j
        assert lattice_i(2) == A([(1j, 1), (2j, 1), (-1j, 1), (-2j, 1)])
        assert generate("ray:2i:3:0.5") == A([(2j, 0.5), (4j, 0.5), (6j, 0.5)])
        assert generate("integers:5") == integers(5)

    @pytest.mark.parametrize("text", ["integers", "ray:1", "foo:3", "integers:x"])
    def test_malformed_generator(self, text):
        with pytest.raises(ValueError):
            generate(text)
