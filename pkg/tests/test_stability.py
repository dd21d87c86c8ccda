"""Certificate machinery, window bounds, and the end-to-end experiment."""

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helgason.bargmann import ComplexPoint
from helgason.constants import get_constants
from helgason.errors import ValidationError
from helgason.phantoms import PhantomSpec
from helgason.radon import RestrictedWindow
from helgason.stability import (AdmissibleRegion, ExperimentConfig,
                                RectangleDomain, build_phi,
                                certificate_domain, comparison_harmonic,
                                default_certificate_grid,
                                gaussian_deconv_bound, helgason_rhs,
                                refined_bound, run_experiment,
                                stability_bound, subharmonic_certificate,
                                window_scales)

DOM = RectangleDomain(a=1.0, b=1.0, eps=0.125, lam=1.0)


def test_rectangle_domain_scales():
    # delta = min(lam / (2 a cosh(pi b / a)), a / 3), here the cosh branch
    assert abs(DOM.delta - 1.0 / (2.0 * math.cosh(math.pi))) < 1e-15
    level = -DOM.lam * DOM.delta / (2.0 * DOM.a * math.cosh(math.pi * DOM.b / DOM.a))
    assert abs(DOM.conclusion_level - level) < 1e-15
    wide = RectangleDomain(a=3.0, b=0.1, eps=0.05, lam=10.0)
    assert wide.delta == 1.0  # a/3 cap engages
    with pytest.raises(ValidationError):
        RectangleDomain(a=-1.0, b=1.0, eps=0.1, lam=1.0)


def test_comparison_harmonic_frozen_and_boundary():
    d = DOM.delta
    assert abs(comparison_harmonic(0j, DOM, d) - (-0.011654045594438863)) < 1e-12
    assert comparison_harmonic(complex(-d, 0.0), DOM, d) == 0.0
    for x in (-0.6, 0.0, 0.37):
        top = comparison_harmonic(complex(x, DOM.b), DOM, d)
        assert abs(top - (-DOM.lam * math.sin(math.pi * (x + d) / DOM.a))) < 1e-14


def test_comparison_harmonic_is_harmonic():
    d, hh = DOM.delta, 1e-3
    for x0, y0 in ((-0.5, -0.7), (-0.1, 0.0), (0.2, 0.4), (0.6, 0.0)):
        lap = (comparison_harmonic(complex(x0 + hh, y0), DOM, d)
               + comparison_harmonic(complex(x0 - hh, y0), DOM, d)
               + comparison_harmonic(complex(x0, y0 + hh), DOM, d)
               + comparison_harmonic(complex(x0, y0 - hh), DOM, d)
               - 4.0 * comparison_harmonic(complex(x0, y0), DOM, d)) / hh**2
        assert abs(lap) < 1e-4  # measured 6.3e-6 at this mesh


def test_certificate_accepts_deep_negative_function():
    xs, ys = default_certificate_grid(DOM)
    F = np.full((xs.size, ys.size), -DOM.lam - 1.0)
    res = subharmonic_certificate(xs, ys, F, DOM)
    assert res.holds
    assert res.hypotheses_ok and res.conclusion_ok
    assert res.violations == ()
    assert abs(res.delta - DOM.delta) < 1e-15


def test_certificate_rejects_flat_zero_function():
    xs, ys = default_certificate_grid(DOM)
    F = np.zeros((xs.size, ys.size))
    res = subharmonic_certificate(xs, ys, F, DOM)
    assert not res.holds
    kinds = {v[0] for v in res.violations}
    assert kinds == {"growth", "band", "conclusion"}
    # at most ten reported samples per kind
    for kind in kinds:
        assert sum(1 for v in res.violations if v[0] == kind) <= 10


def test_certificate_separates_hypotheses_from_conclusion():
    xs, ys = default_certificate_grid(DOM)
    F = np.full((xs.size, ys.size), -DOM.lam - 1.0)
    band_j = int(np.argmax(np.abs(ys) >= DOM.b))
    F[xs.size // 2, band_j] = -DOM.lam + 0.01
    res = subharmonic_certificate(xs, ys, F, DOM)
    assert not res.hypotheses_ok
    assert res.conclusion_ok
    assert not res.holds


def test_certificate_grid_requirements():
    xs, ys = default_certificate_grid(DOM)
    with pytest.raises(ValidationError):
        subharmonic_certificate(xs, ys, np.zeros((3, 3)), DOM)
    far = np.array([0.9 * DOM.a])  # misses |x| < delta/2
    with pytest.raises(ValidationError):
        subharmonic_certificate(far, ys, np.zeros((1, ys.size)), DOM)


def test_build_phi_samples_certificate_function():
    f_spec = PhantomSpec(kind="smooth_bump", center=(0.0, 0.0), radius=0.4)
    from helgason.phantoms import make_phantom

    f = make_phantom(f_spec)
    w = RestrictedWindow(y0=np.zeros(2), omega0=np.array([1.0, 0.0]),
                        alpha=1.0, beta=0.5)
    dom = certificate_domain(w.alpha, w.beta)
    assert dom.a == 0.25 and dom.b == 4.0
    xs = np.linspace(-dom.a, dom.a, 7) * (1 - 1e-12)
    ys = np.linspace(-dom.b, dom.b, 9)
    phi = build_phi(f, w, 0.5, xs, ys, M_q=10.0)
    assert phi.shape == (7, 9)
    assert np.all(np.isfinite(phi))
    with pytest.raises(ValidationError):
        build_phi(f, w, 1.5, xs, ys, M_q=10.0)  # h out of range
    bad_slice = ComplexPoint(np.array([0.1, 0.0]), np.zeros(2))  # not orthogonal
    with pytest.raises(ValidationError):
        build_phi(f, w, 0.5, xs, ys, M_q=10.0, w_slice=bad_slice)


def test_helgason_rhs_admissibility():
    w = RestrictedWindow(y0=np.zeros(2), omega0=np.array([1.0, 0.0]),
                        alpha=0.5, beta=0.5)
    good = ComplexPoint(np.array([0.1, 0.0]), np.array([2.5, 0.0]))
    bound, adm = helgason_rhs(0.01, 1.0, good, 0.5, w, gamma=2.0)
    assert adm
    assert bound > 0.0
    # re part too far from the window center
    far = ComplexPoint(np.array([0.3, 0.0]), np.array([2.5, 0.0]))
    assert not helgason_rhs(0.01, 1.0, far, 0.5, w, gamma=2.0)[1]
    # imaginary part below the gamma floor
    lowim = ComplexPoint(np.array([0.1, 0.0]), np.array([1.0, 0.0]))
    assert not helgason_rhs(0.01, 1.0, lowim, 0.5, w, gamma=2.0)[1]
    # imaginary direction outside the half-aperture cone
    c2 = 1.0 - 0.25 * w.beta**2 - 0.02
    tilted = ComplexPoint(np.array([0.1, 0.0]),
                          2.5 * np.array([math.sqrt(c2), math.sqrt(1 - c2)]))
    assert not helgason_rhs(0.01, 1.0, tilted, 0.5, w, gamma=2.0)[1]


def test_helgason_rhs_formula_and_validation():
    w = RestrictedWindow(y0=np.array([0.5, 0.0]), omega0=np.array([1.0, 0.0]),
                        alpha=0.5, beta=0.5)
    z = ComplexPoint(np.array([0.6, 0.0]), np.array([2.0, 0.0]))
    I, X, h, gamma = 0.02, 3.0, 0.25, 1.5
    bound, _ = helgason_rhs(I, X, z, h, w, gamma)
    mod = math.sqrt(float(z.re @ z.re) + z.im_norm**2)
    small = math.exp(-w.alpha**2 / (8 * h)) + math.exp(-(gamma * w.beta) ** 2 / (32 * h))
    expect = (get_constants().growth_constant[2] * h**-1.0
              * (1.0 + mod + 0.5) ** 2 * (I + X * small))
    assert abs(bound - expect) < 1e-12 * expect
    with pytest.raises(ValidationError):
        helgason_rhs(I, X, z, 1.5, w, gamma)
    with pytest.raises(ValidationError):
        helgason_rhs(I, X, z, h, w, gamma=0.0)
    # I = 0 keeps only the window-leakage terms
    b0, _ = helgason_rhs(0.0, X, z, h, w, gamma)
    assert 0.0 < b0 < bound


def test_window_scales_frozen_values():
    r_re, r_im, kappa = window_scales(2.0, 1.0)
    assert abs(r_im - 2.0 * 2.0 / math.sqrt(3.0)) < 1e-15
    assert abs(r_re - 6.080778354704649e-12) < 1e-24
    assert abs(kappa - 7.321221349010803e-23) < 1e-35
    # extreme aperture: the exponent underflows to an honest zero
    assert window_scales(1.0, 0.01)[2] == 0.0


@given(st.floats(min_value=0.08, max_value=1.0),
       st.floats(min_value=0.1, max_value=4.0))
def test_window_scales_match_highprec(beta, alpha):
    r_re, r_im, kappa = window_scales(alpha, beta)
    ch = np.cosh(np.longdouble(8.0) * np.longdouble(math.pi) / np.longdouble(beta))
    k_ref = float(np.longdouble(0.99) / (np.longdouble(8.0) * ch * ch))
    r_ref = float(np.longdouble(alpha) / (np.longdouble(8.0) * ch))
    assert kappa > 0.0
    assert abs(kappa - k_ref) < 1e-10 * k_ref  # measured worst 4.8e-14
    assert abs(r_re - r_ref) < 1e-10 * r_ref
    assert abs(r_im - 2.0 * alpha / math.sqrt(4.0 - beta * beta)) < 1e-12 * r_im


def test_refined_bound_branches():
    out = refined_bound(math.exp(-0.25), 1.0, 0.5, np.zeros(2), 2.0, 2)
    assert abs(out.h_star - 0.5) < 1e-15  # alpha^2 / (8 |log I|)
    assert not out.trivial and not out.vanishing
    c = get_constants().certificate_constant[2]
    expect = c * 2.0 * (1.0 + 0.0 + 2.0) ** 2 * math.exp(out.kappa * -0.25)
    assert abs(out.bound - expect) < 1e-12 * expect
    assert isinstance(out.region, AdmissibleRegion)
    # large data: no information, the bound is withheld
    triv = refined_bound(0.9, 1.0, 0.5, np.zeros(2), 2.0, 2)
    assert triv.trivial and triv.bound is None and triv.h_star is None
    # exactly vanishing data
    van = refined_bound(0.0, 1.0, 0.5, np.zeros(2), 2.0, 2)
    assert van.vanishing and van.bound == 0.0
    with pytest.raises(ValidationError):
        refined_bound(0.1, 1.0, 0.5, np.zeros(2), 0.5, 2)  # M_q < 1


def test_admissible_region_membership():
    reg = AdmissibleRegion(center=(0.5, 0.0), radius_re=0.2, radius_im=1.0)
    assert reg.contains(ComplexPoint(np.array([0.6, 0.0]), np.array([0.5, 0.0])))
    assert not reg.contains(ComplexPoint(np.array([0.9, 0.0]), np.array([0.5, 0.0])))
    assert not reg.contains(ComplexPoint(np.array([0.6, 0.0]), np.array([1.5, 0.0])))


def test_gaussian_deconv_bound_formula():
    rng = np.random.default_rng(2)
    th = rng.normal(size=17) + 1j * rng.normal(size=17)
    wq = rng.uniform(0.01, 0.1, size=17)
    h, p, lam, L_q = 0.25, 2.0, 0.4, 3.0
    val = gaussian_deconv_bound(th, wq, L_q, h, p, lam, 2)
    norm_p = float(np.sum(wq * np.abs(th) ** p)) ** (1.0 / p)
    c = get_constants().deconv_constant[2]
    expect = c * (h**-1.0 * norm_p + L_q * h**0.2)
    assert abs(val - expect) < 1e-12 * expect
    # zero transform samples leave only the modulus term
    z = gaussian_deconv_bound(np.zeros(5), np.ones(5) / 5, L_q, h, p, lam, 2)
    assert abs(z - c * L_q * h**0.2) < 1e-15
    with pytest.raises(ValidationError):
        gaussian_deconv_bound(th, wq, -1.0, h, p, lam, 2)
    with pytest.raises(ValidationError):
        gaussian_deconv_bound(th, wq, L_q, 2.0, p, lam, 2)


def test_stability_bound_formula_and_edges():
    I, M, lam, p = 0.5, 2.0, 0.4, 2.0
    y0 = np.array([0.5, 0.0])
    val = stability_bound(I, M, y0, 0.5, 0.5, p, lam, 2)
    r_re, _, _ = window_scales(0.5, 0.5)
    g_vol = math.pi * r_re**2
    c_n = get_constants().stability_constant[2]
    prefactor = (c_n * M * max(1.0, g_vol ** (1.0 / p)) * 1.5
                 * (0.5**-2 + 0.5**-2 + 0.5**lam))
    assert abs(val - prefactor * abs(math.log(I)) ** (-0.5 * lam)) < 1e-12 * val
    assert stability_bound(0.0, M, y0, 0.5, 0.5, p, lam, 2) == 0.0
    assert stability_bound(1.0, M, y0, 0.5, 0.5, p, lam, 2) == math.inf
    with pytest.raises(ValidationError):
        stability_bound(0.5, 0.5, y0, 0.5, 0.5, p, lam, 2)  # M < 1


def test_stability_bound_log_power_scaling():
    # alpha = 1 makes the prefactor lambda-free, isolating |log I|^{-lam/2}
    I = 0.01
    b1 = stability_bound(I, 1.0, np.zeros(2), 1.0, 0.5, 2.0, 0.2, 2)
    b2 = stability_bound(I, 1.0, np.zeros(2), 1.0, 0.5, 2.0, 0.45, 2)
    ratio = b2 / b1
    assert abs(ratio - abs(math.log(I)) ** (-0.5 * (0.45 - 0.2))) < 1e-12


def test_stability_bound_monotone_in_data():
    vals = [stability_bound(I, 2.0, np.zeros(2), 0.5, 0.5, 2.0, 0.4, 2)
            for I in (1e-8, 1e-4, 1e-2, 0.5)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def reference_config(**overrides):
    base = dict(
        phantom=PhantomSpec(kind="smooth_bump", center=(0.55, 0.0), radius=0.25),
        window=RestrictedWindow(y0=np.zeros(2), omega0=np.array([1.0, 0.0]),
                                alpha=1.0, beta=1.0),
        p=2.0, lam=0.4, n_s=129, n_dir=64, h_grid=(1.0, 0.5), label="unit")
    base.update(overrides)
    return ExperimentConfig(**base)


def test_experiment_config_round_trip():
    cfg = reference_config()
    doc = cfg.to_json_dict()
    assert doc["schema"] == 1
    assert doc["lambda"] == 0.4
    back = ExperimentConfig.from_json_dict(doc)
    assert back.p == cfg.p and back.lam == cfg.lam
    assert back.phantom.kind == cfg.phantom.kind
    assert np.allclose(back.window.y0, cfg.window.y0)
    assert back.h_grid == cfg.h_grid


def test_experiment_config_validation():
    with pytest.raises(ValidationError):
        reference_config(p=0.5)
    with pytest.raises(ValidationError):
        reference_config(lam=-0.1)
    with pytest.raises(ValidationError):
        reference_config(n_s=8)
    with pytest.raises(ValidationError):
        reference_config(h_grid=(2.0,))
    with pytest.raises(ValidationError):
        ExperimentConfig.from_json_dict({"schema": 1})
    # lam * p >= 1 is a hypothesis question, not a schema error
    cfg = reference_config(lam=0.6)
    assert cfg.lam == 0.6


def test_experiment_inapplicable_reasons():
    rep = run_experiment(reference_config(lam=0.6))
    assert not rep.applicable
    assert rep.reason == "hypothesis violated: lambda * p must be < 1"
    rep = run_experiment(reference_config(
        phantom=PhantomSpec(kind="smooth_bump", center=(0.0, 0.0, 0.0), radius=0.25)))
    assert not rep.applicable
    assert rep.reason == "window dimension differs from the phantom's"


def test_experiment_degenerate_phantom():
    rep = run_experiment(reference_config(
        phantom=PhantomSpec(kind="smooth_bump", center=(0.55, 0.0), radius=0.25,
                            amplitude=0.0)))
    assert rep.applicable and rep.degenerate
    assert rep.exact_vanishing
    assert all(rep.flags.values())


def test_experiment_report_is_deterministic():
    cfg = reference_config()
    a = json.dumps(run_experiment(cfg).to_json_dict(), sort_keys=True)
    b = json.dumps(run_experiment(cfg).to_json_dict(), sort_keys=True)
    assert a == b


def test_experiment_report_flags_present():
    rep = run_experiment(reference_config())
    assert rep.applicable
    doc = rep.to_json_dict()
    for key in ("thm25", "prop27", "prop23", "lemma29"):
        assert key in doc["flags"]
    assert len(doc["decay_curve"]) == 2
