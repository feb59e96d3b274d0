import math
from dataclasses import replace

import numpy as np
import pytest

from qrcs.analytic import aperture_transform_rect, qrcs_highfreq_values, qrcs_plate_highfreq
from qrcs.errors import DenominatorUnderflowError, GridTooDenseError
from qrcs.numeric import (QrcsConfig, chi_factor, denominator, interference_intensity,
                          monostatic_directions, qrcs_bistatic_values, qrcs_full,
                          qrcs_monostatic)
from qrcs.quadrature import sphere_quadrature
from qrcs.scene import Direction, PlateTarget, ScattererGrid, Wave, make_grid

P4 = PlateTarget(4.0, 4.0)
W1 = Wave(1.0)
PEAK = 1024 * math.pi

# adaptive 2-D quadrature (scipy dblquad, rel 1e-12) of the analytic |F|^2 over the
# reflection hemisphere at normal incidence, divided by lambda^2 a b
CHI_ORACLE = {0.2: 0.230238408185593, 0.5: 0.9134618764110489,
              1.0: 0.9643078978839832, 2.0: 0.980437212417107}


def test_config_validation():
    QrcsConfig()
    for bad in ({"samples_per_wavelength": 1}, {"n_polar": 1}, {"denominator_method": "x"},
                {"domain": "torus"}, {"normalization": "none"}, {"threads": 0},
                {"scatterer_cap": 1}):
        with pytest.raises(ValueError):
            QrcsConfig(**bad)


def test_config_fingerprint_ignores_threads():
    assert QrcsConfig(threads=1).fingerprint() == QrcsConfig(threads=3).fingerprint()
    assert QrcsConfig().fingerprint() != QrcsConfig(n_polar=32).fingerprint()


def test_single_scatterer_intensity_is_isotropic():
    g = ScattererGrid.from_points([[0.3, -0.2]], 1.0)
    for q in ([0, 0, 0], [5.0, -2.0, 1.0], [100.0, 3.0, 0.0]):
        assert interference_intensity(g, q) == pytest.approx(1.0, rel=1e-15)


def test_two_scatterers_cancel():
    d = 0.37
    g = ScattererGrid.from_points([[0, 0], [d, 0]], 1.0)
    assert interference_intensity(g, [math.pi / d, 0.0]) < 1e-30
    assert interference_intensity(g, [2 * math.pi / d, 0.0]) == pytest.approx(4.0)


def test_coherent_sum_at_zero_q():
    g = make_grid(P4, W1, 10)
    assert g.count == 1600
    assert interference_intensity(g, np.zeros(3)) == pytest.approx(256.0, rel=1e-12)


def test_lattice_aliasing_law():
    # the midpoint lattice differs from the continuous transform by (h/sin h)^2 per axis,
    # h = q * spacing / 2; this is what limits accuracy at large q
    g = make_grid(P4, W1, 10)
    q = np.linspace(0.05, 4 * math.pi, 37)
    numeric = interference_intensity(g, np.column_stack([q, np.zeros_like(q)]))
    exact = np.square(aperture_transform_rect(P4, q, 0.0))
    h = q * 0.1 / 2
    mask = exact > 1e-6 * 256
    assert np.allclose(numeric[mask] / exact[mask], (h / np.sin(h))[mask] ** 2, rtol=1e-9)
    # below h ~ 0.17 the discrepancy is under 1 %
    small = mask & (h < 0.17)
    assert np.all(np.abs(numeric[small] / exact[small] - 1) < 0.01)


def test_refinement_reduces_error():
    theta = np.radians(np.arange(-60, 60.5, 0.5))
    q = 2 * W1.wavenumber * np.sin(theta)
    exact = np.square(aperture_transform_rect(P4, q, 0.0))
    keep = exact > 1e-4 * 256
    exact = np.where(keep, exact, 1.0)
    qq = np.column_stack([q, np.zeros_like(q)])
    err10 = np.abs(interference_intensity(make_grid(P4, W1, 10), qq) / exact - 1)[keep]
    err20 = np.abs(interference_intensity(make_grid(P4, W1, 20), qq) / exact - 1)[keep]
    assert np.all(err20 <= err10)


def test_scatterer_order_invariance():
    g = make_grid(PlateTarget(2.0, 1.5), W1, 8)
    perm = np.random.default_rng(3).permutation(g.count)
    shuffled = ScattererGrid.from_points(g.positions[perm], g.cell_area)
    q = np.array([[0.7, 0.2], [3.1, -1.3], [6.0, 4.0]])
    assert np.allclose(interference_intensity(g, q), interference_intensity(shuffled, q), rtol=1e-12)


def test_quadrature_order_invariance():
    cfg = QrcsConfig(n_polar=16, n_azimuth=32)
    quad = cfg.quadrature
    incident = Direction(math.pi - 0.3)
    plate = PlateTarget(2.0, 2.0)
    values = qrcs_bistatic_values(plate, W1, incident, quad.directions, cfg)
    perm = np.random.default_rng(5).permutation(values.size)
    a = math.fsum(quad.weights * values)
    b = math.fsum(quad.weights[perm] * values[perm])
    assert a == pytest.approx(b, rel=1e-12)


def test_point_scatterer_sigma_equals_projected_area():
    # a plate smaller than one cell collapses to a single scatterer
    plate = PlateTarget(0.2, 0.1)
    cfg = QrcsConfig(samples_per_wavelength=2, n_polar=8, n_azimuth=8, domain="sphere")
    assert make_grid(plate, W1, 2).count == 1
    incident = Direction(math.pi - 0.4, 1.0)
    detected = Direction(2.0, 4.0)
    sigma = qrcs_full(plate, W1, incident, detected, cfg).value
    assert sigma == pytest.approx(plate.area * abs(math.cos(0.4)), rel=1e-12)


def test_hemisphere_domain_zeroes_shadow_side():
    cfg = QrcsConfig(n_polar=8, n_azimuth=8)
    plate = PlateTarget(1.0, 1.0)
    assert qrcs_full(plate, W1, Direction(math.pi), Direction(math.pi - 0.2), cfg).value == 0.0


def test_incident_must_approach_plate():
    with pytest.raises(ValueError):
        qrcs_full(P4, W1, Direction(0.2), Direction(0.2), QrcsConfig(n_polar=4, n_azimuth=4))


def test_denominator_floor():
    cfg = QrcsConfig(n_polar=4, n_azimuth=4, denominator_floor=1e30)
    with pytest.raises(DenominatorUnderflowError, match="denominator underflow"):
        qrcs_monostatic(PlateTarget(1, 1), W1, 0.0, cfg)


def test_grid_cap_propagates():
    cfg = QrcsConfig(scatterer_cap=100, n_polar=4, n_azimuth=4)
    with pytest.raises(GridTooDenseError):
        qrcs_monostatic(P4, W1, 0.0, cfg)


@pytest.mark.parametrize("side", [0.05, 1.0, 3.0])
def test_denominator_positive(side):
    plate = PlateTarget(side, side)
    assert denominator(plate, W1, Direction(math.pi - 0.5), QrcsConfig(n_polar=16, n_azimuth=32)) > 0


def test_normal_incidence_matches_highfreq_over_chi():
    cfg = QrcsConfig()
    chi = chi_factor(P4, W1, cfg)
    sigma = qrcs_monostatic(P4, W1, 0.0, cfg).value
    assert sigma == pytest.approx(PEAK / chi, rel=1e-12)
    assert sigma == pytest.approx(PEAK, rel=0.02)


def test_monostatic_null_and_grazing():
    cfg = QrcsConfig()
    assert qrcs_monostatic(P4, W1, math.pi / 6, cfg).value < 1e-4 * PEAK
    assert qrcs_monostatic(P4, W1, math.pi / 2, cfg).value < 1e-10 * PEAK
    with pytest.raises(ValueError):
        qrcs_monostatic(P4, W1, 2.0, cfg)


@pytest.mark.parametrize("deg", [7.0, 18.0, 41.5])
def test_monostatic_symmetry(deg):
    cfg = QrcsConfig(n_polar=32, n_azimuth=64)
    plus = qrcs_monostatic(P4, W1, math.radians(deg), cfg).value
    minus = qrcs_monostatic(P4, W1, -math.radians(deg), cfg).value
    assert minus == pytest.approx(plus, rel=1e-9)


def test_monostatic_directions_reverse_each_other():
    i, d = monostatic_directions(0.4)
    assert np.allclose(i.unit(), -d.unit(), atol=1e-15)
    assert i.unit()[2] < 0


@pytest.mark.parametrize("deg", [5.0, 12.0, 20.0, 40.0, 55.0])
def test_reference_normalisation_reproduces_closed_form_up_to_aliasing(deg):
    cfg = QrcsConfig(normalization="reference")
    theta = math.radians(deg)
    chi = chi_factor(P4, W1, cfg)
    numeric = qrcs_monostatic(P4, W1, theta, cfg).value
    h = 2 * W1.wavenumber * math.sin(theta) * 0.1 / 2
    assert numeric * chi / qrcs_plate_highfreq(P4, W1, theta).value == pytest.approx((h / math.sin(h)) ** 2, rel=1e-9)


@pytest.mark.parametrize("deg", [10.0, 25.0, 45.0])
def test_incident_normalisation_adds_a_cosine(deg):
    # the denominator grows like 1/cos(theta) with incidence, so the energy
    # conserving cross section falls off like cos^2, not |cos|
    theta = math.radians(deg)
    inc = qrcs_monostatic(P4, W1, theta, QrcsConfig()).value
    ref = qrcs_monostatic(P4, W1, theta, QrcsConfig(normalization="reference")).value
    assert inc / ref == pytest.approx(math.cos(theta), rel=0.03)


def test_analytic_denominator_close_to_numeric():
    num = denominator(P4, W1, Direction(math.pi - 0.3), QrcsConfig())
    ana = denominator(P4, W1, Direction(math.pi - 0.3), QrcsConfig(denominator_method="analytic"))
    assert num == pytest.approx(ana, rel=0.01)


@pytest.mark.parametrize("side, expected", sorted(CHI_ORACLE.items()))
def test_chi_against_adaptive_quadrature(side, expected):
    cfg = QrcsConfig(denominator_method="analytic", n_polar=256, n_azimuth=512)
    assert chi_factor(PlateTarget(side, side), W1, cfg) == pytest.approx(expected, rel=1e-10)


def test_chi_regimes():
    assert 0.9 <= chi_factor(PlateTarget(10, 10), W1) <= 1.1
    assert chi_factor(PlateTarget(0.2, 0.2), W1) < 0.5


def test_chi_domain_independent():
    cfg = QrcsConfig(n_polar=32, n_azimuth=64, denominator_method="analytic")
    plate = PlateTarget(1.5, 1.5)
    assert chi_factor(plate, W1, cfg) == pytest.approx(chi_factor(plate, W1, replace(cfg, domain="sphere")), rel=1e-12)


@pytest.mark.parametrize("s", [0.5, 3.0])
def test_chi_scale_invariance(s):
    cfg = QrcsConfig(n_polar=32, n_azimuth=64)
    base = chi_factor(PlateTarget(1.2, 1.2), W1, cfg)
    assert chi_factor(PlateTarget(1.2 * s, 1.2 * s), Wave(s), cfg) == pytest.approx(base, rel=1e-9)


@pytest.mark.parametrize("incidence_deg", [0.0, 30.0])
def test_energy_conservation_same_quadrature(incidence_deg):
    cfg = QrcsConfig(n_polar=32, n_azimuth=64)
    plate = PlateTarget(2.0, 2.0)
    incident = Direction(math.pi - math.radians(incidence_deg))
    quad = cfg.quadrature
    sigma = qrcs_bistatic_values(plate, W1, incident, quad.directions, cfg)
    total = quad.integrate(sigma)
    assert total == pytest.approx(4 * math.pi * plate.area * math.cos(math.radians(incidence_deg)), rel=1e-12)


def test_analytic_and_highfreq_share_peak_scale():
    theta = np.radians([0.0, 3.0])
    values = qrcs_highfreq_values(P4, W1, theta)
    assert values[0] == pytest.approx(PEAK)
    assert values[1] < values[0]


def test_threads_do_not_change_results():
    one = qrcs_monostatic(P4, W1, 0.3, QrcsConfig(threads=1, n_polar=16, n_azimuth=32)).value
    two = qrcs_monostatic(P4, W1, 0.3, QrcsConfig(threads=2, n_polar=16, n_azimuth=32)).value
    assert one == two
