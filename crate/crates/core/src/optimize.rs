//! Maximization of a fidelity functional over the feasible Gram set and
//! crossover location between strategy curves.
//!
//! The feasible set is {x, y in [0, 1], |z|^2 <= x y}. For any fixed
//! (x, y) the optimal z has modulus sqrt(x y) and phase -arg(W), so the
//! problem reduces to the quadratic form X s^2 + Y t^2 + 2|W| s t on the
//! unit square in s = sqrt(x), t = sqrt(y), whose maximum sits at a
//! corner or on a clamped edge vertex.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::channels::GramParams;
use crate::error::{Error, Result};
use crate::integrate::FidelityFunctional;

/// Named optimal maps the paper reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Identity,
    PiRotation,
    BitFlip,
    ChiRotation,
    BoundaryMixed,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Identity => "identity",
            Regime::PiRotation => "pi_rotation",
            Regime::BitFlip => "bit_flip",
            Regime::ChiRotation => "chi_rotation",
            Regime::BoundaryMixed => "boundary_mixed",
        }
    }
}

/// Result of maximizing a functional over the Gram set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub best: GramParams,
    pub value: f64,
    /// arg(z) of the optimal point (0 when z = 0).
    pub chi: f64,
    pub regime: Regime,
}

fn classify(g: &GramParams) -> Regime {
    const TOL: f64 = 1e-9;
    let one = C64::new(1.0, 0.0);
    if g.x.abs() < TOL && g.y.abs() < TOL {
        Regime::BitFlip
    } else if (g.x - 1.0).abs() < TOL && (g.y - 1.0).abs() < TOL {
        if (g.z - one).norm() < TOL {
            Regime::Identity
        } else if (g.z + one).norm() < TOL {
            Regime::PiRotation
        } else if (g.z.norm() - 1.0).abs() < TOL {
            Regime::ChiRotation
        } else {
            Regime::BoundaryMixed
        }
    } else {
        Regime::BoundaryMixed
    }
}

/// Global maximum of V + X x + Y y + 2 Re(W z) over the feasible set,
/// by closed-form case analysis.
pub fn maximize(f: &FidelityFunctional) -> Optimum {
    let w = f.w.norm();
    let phase = if w > 0.0 { -f.w.arg() } else { 0.0 };
    let g = |s: f64, t: f64| f.x * s * s + f.y * t * t + 2.0 * w * s * t;

    let mut candidates: Vec<(f64, f64)> = vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
    if f.y < 0.0 {
        candidates.push((1.0, (w / -f.y).clamp(0.0, 1.0)));
    }
    if f.x < 0.0 {
        candidates.push(((w / -f.x).clamp(0.0, 1.0), 1.0));
    }

    let mut best = (0.0, 0.0);
    let mut best_val = f64::NEG_INFINITY;
    for &(s, t) in &candidates {
        let val = g(s, t);
        let better = val > best_val + 1e-12
            || (val > best_val - 1e-12 && s * s + t * t < best.0 * best.0 + best.1 * best.1 - 1e-12);
        if better {
            best = (s, t);
            best_val = val;
        }
    }

    let (s, t) = best;
    let z = if w > 0.0 { C64::from_polar(s * t, phase) } else { C64::new(0.0, 0.0) };
    let gram = GramParams { x: s * s, y: t * t, z };
    let value = f.eval(&gram);
    Optimum { best: gram, value, chi: if z.norm() > 0.0 { z.arg() } else { 0.0 }, regime: classify(&gram) }
}

/// Optimal rotation angle chi = -arg(W), defined only when the optimum
/// sits at x = y = 1.
pub fn optimal_chi(f: &FidelityFunctional) -> Result<f64> {
    let opt = maximize(f);
    if (opt.best.x - 1.0).abs() > 1e-9 || (opt.best.y - 1.0).abs() > 1e-9 {
        return Err(Error::ChiUndefined { x: opt.best.x, y: opt.best.y });
    }
    let mut chi = if f.w.norm() > 0.0 { -f.w.arg() } else { 0.0 };
    if chi <= -PI {
        chi += 2.0 * PI;
    }
    Ok(chi)
}

/// Grid-search oracle over the Gram set with one local refinement pass;
/// independent of the closed-form case analysis in [`maximize`].
pub fn brute_force(f: &FidelityFunctional, n_grid: usize) -> Optimum {
    let n = n_grid.max(50);
    let w = f.w.norm();
    let phase = if w > 0.0 { -f.w.arg() } else { 0.0 };
    let eval = |x: f64, y: f64| {
        let z = C64::from_polar((x * y).sqrt(), phase);
        f.v + f.x * x + f.y * y + 2.0 * (f.w * z).re
    };

    let mut bx = 0.0;
    let mut by = 0.0;
    let mut bv = f64::NEG_INFINITY;
    let step = 1.0 / (n - 1) as f64;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (i as f64 * step, j as f64 * step);
            let v = eval(x, y);
            if v > bv {
                bv = v;
                bx = x;
                by = y;
            }
        }
    }
    // refine around the best coarse cell
    let mut half = step;
    for _ in 0..6 {
        let (cx, cy) = (bx, by);
        for i in 0..=20 {
            for j in 0..=20 {
                let x = (cx - half + i as f64 * half / 10.0).clamp(0.0, 1.0);
                let y = (cy - half + j as f64 * half / 10.0).clamp(0.0, 1.0);
                let v = eval(x, y);
                if v > bv {
                    bv = v;
                    bx = x;
                    by = y;
                }
            }
        }
        half /= 10.0;
    }

    let z = if w > 0.0 { C64::from_polar((bx * by).sqrt(), phase) } else { C64::new(0.0, 0.0) };
    let gram = GramParams { x: bx, y: by, z };
    Optimum { best: gram, value: bv, chi: if z.norm() > 0.0 { z.arg() } else { 0.0 }, regime: classify(&gram) }
}

/// Bisection root of f - g on [lo, hi]; requires a sign change.
pub fn find_crossover<F, G>(f: F, g: G, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let h = |x: f64| f(x) - g(x);
    let (mut a, mut b) = (lo, hi);
    let mut ha = h(a);
    let hb = h(b);
    if ha == 0.0 {
        return Ok(a);
    }
    if hb == 0.0 {
        return Ok(b);
    }
    if ha.signum() == hb.signum() {
        return Err(Error::NoCrossing { lo, hi });
    }
    while b - a > 1e-9 {
        let mid = 0.5 * (a + b);
        let hm = h(mid);
        if hm == 0.0 {
            return Ok(mid);
        }
        if hm.signum() == ha.signum() {
            a = mid;
            ha = hm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::{general_coefficients, orthog_coefficients};
    use std::f64::consts::FRAC_PI_2;

    fn rotation_half_sphere(beta: f64) -> FidelityFunctional {
        FidelityFunctional { v: 1.0 / 3.0, x: 1.0 / 6.0, y: 1.0 / 6.0, w: C64::new(beta.cos() / 6.0, 0.0) }
    }

    #[test]
    fn rotation_below_half_pi_is_identity() {
        for beta in [0.0, 0.4, 1.2] {
            let opt = maximize(&rotation_half_sphere(beta));
            assert_eq!(opt.regime, Regime::Identity, "beta = {beta}");
            assert!((opt.value - (2.0 / 3.0 + beta.cos() / 3.0)).abs() < 1e-12);
        }
        assert!((maximize(&rotation_half_sphere(0.0)).value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_above_half_pi_is_pi_rotation() {
        for beta in [1.8, 2.6, PI] {
            let opt = maximize(&rotation_half_sphere(beta));
            assert_eq!(opt.regime, Regime::PiRotation, "beta = {beta}");
            assert!((opt.best.z + C64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn orthog_half_pi_ties_toward_bit_flip() {
        let f = orthog_coefficients(FRAC_PI_2).unwrap();
        let opt = maximize(&f);
        assert!((opt.value - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(opt.regime, Regime::BitFlip);
        // the pi-rotation corner attains the same value
        let alt = GramParams::new(1.0, 1.0, C64::new(-1.0, 0.0)).unwrap();
        assert!((f.eval(&alt) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn orthog_regime_switch() {
        let opt = maximize(&orthog_coefficients(0.8).unwrap());
        assert_eq!(opt.regime, Regime::Identity);
        let opt = maximize(&orthog_coefficients(1.1).unwrap());
        assert_eq!(opt.regime, Regime::BitFlip);
    }

    #[test]
    fn chi_angles() {
        // delta = 0 rotation functional for beta = pi/3: W = e^{-i beta}/6
        let beta = PI / 3.0;
        let f = FidelityFunctional {
            v: 1.0 / 3.0,
            x: 1.0 / 6.0,
            y: 1.0 / 6.0,
            w: C64::from_polar(1.0 / 6.0, -beta),
        };
        assert!((optimal_chi(&f).unwrap() - beta).abs() < 1e-12);
        assert!((optimal_chi(&rotation_half_sphere(beta)).unwrap()).abs() < 1e-12);

        // optimum away from x = y = 1 has no chi
        let f = general_coefficients(1.0).unwrap();
        assert!(optimal_chi(&f).is_err());
    }

    #[test]
    fn brute_force_matches_closed_form() {
        let cases = [
            rotation_half_sphere(0.7),
            rotation_half_sphere(2.4),
            orthog_coefficients(FRAC_PI_2).unwrap(),
            orthog_coefficients(0.6).unwrap(),
            general_coefficients(FRAC_PI_2).unwrap(),
            general_coefficients(1.0).unwrap(),
            general_coefficients(2.4).unwrap(),
        ];
        for f in cases {
            let a = maximize(&f);
            let b = brute_force(&f, 101);
            assert!((a.value - b.value).abs() < 1e-6, "{f:?}: {} vs {}", a.value, b.value);
        }
    }

    #[test]
    fn corner_value_when_both_positive() {
        let f = FidelityFunctional { v: 0.2, x: 0.3, y: 0.1, w: C64::new(0.05, 0.1) };
        let opt = maximize(&f);
        assert!((opt.value - (0.2 + 0.3 + 0.1 + 2.0 * f.w.norm())).abs() < 1e-9);
        let bf = brute_force(&f, 101);
        assert!((opt.value - bf.value).abs() < 1e-9);
    }

    #[test]
    fn phase_alignment_for_real_w() {
        let f = FidelityFunctional { v: 0.3, x: 0.1, y: 0.1, w: C64::new(0.2, 0.0) };
        let opt = maximize(&f);
        assert!(opt.best.z.re > 0.0 && opt.best.z.im.abs() < 1e-12);
        let f = FidelityFunctional { v: 0.3, x: 0.1, y: 0.1, w: C64::new(-0.2, 0.0) };
        let opt = maximize(&f);
        assert!(opt.best.z.re < 0.0 && opt.best.z.im.abs() < 1e-12);
    }

    #[test]
    fn bisection_examples() {
        let r = find_crossover(|x| x, |x| 1.0 - x, 0.0, 1.0).unwrap();
        assert!((r - 0.5).abs() < 1e-6);

        // |Y_paper| vs |Z_paper| for the ORTHOG family
        let r = find_crossover(
            |d| orthog_coefficients(d).unwrap().x.abs(),
            |d| orthog_coefficients(d).unwrap().w.norm(),
            0.5,
            1.2,
        )
        .unwrap();
        assert!((r - 0.932197).abs() < 1e-3, "{r}");

        assert!(find_crossover(|x| x + 2.0, |x| x, 0.0, 1.0).is_err());
    }
}
