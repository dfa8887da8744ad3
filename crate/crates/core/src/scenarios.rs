//! Named, sweepable experiments wiring the transformation families to
//! the measurement and quantum schemes.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::channels::GramParams;
use crate::error::{Error, Result};
use crate::integrate::{
    extract_functional, general_coefficients, orthog_coefficients, MapPiece, MeasScheme,
    MeasurementEvaluator, QuadratureSpec, TargetMap,
};
use crate::optimize::{find_crossover, maximize, Optimum};

/// The three nonlinear transformation families plus the linear baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Rotation,
    Orthog,
    General,
    LinearBaseline,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::Rotation => "rotation",
            Family::Orthog => "orthog",
            Family::General => "general",
            Family::LinearBaseline => "linear_baseline",
        }
    }
}

/// A strategy to evaluate at each parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    Measurement(MeasScheme),
    QuantumOptimal,
    QuantumFixed(GramParams),
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::Measurement(m) => m.label(),
            Scheme::QuantumOptimal => "quantum_optimal",
            Scheme::QuantumFixed(_) => "quantum_fixed",
        }
    }
}

/// Parameters of one experiment point.
#[derive(Debug, Clone)]
pub struct ScenarioRequest {
    pub family: Family,
    pub delta: Option<f64>,
    pub beta: Option<f64>,
    pub alpha: Option<f64>,
    pub schemes: Vec<Scheme>,
    pub quad: QuadratureSpec,
}

/// Fidelities of the requested schemes at one abscissa.
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub abscissa: f64,
    pub fidelities: Vec<(&'static str, f64)>,
    pub optimum: Option<Optimum>,
}

/// A strategy switch: the pair of labels and the parameter value where
/// the curves cross.
#[derive(Debug, Clone)]
pub struct Crossover {
    pub pair: String,
    pub location: f64,
}

/// Builds the family's piecewise target map.
///
/// Rotation uses the paper's figure convention: the band below delta is
/// rotated by -beta, the band above by +beta. The quantum-scheme
/// functional W(delta) and the optimal angle chi are quoted in that
/// convention; measurement fidelities at delta = pi/2 are invariant
/// under flipping it.
pub fn build_map(family: Family, delta: Option<f64>, beta: Option<f64>, alpha: Option<f64>) -> Result<TargetMap> {
    match family {
        Family::Rotation => {
            let d = delta.ok_or(Error::MissingParameter("delta", "rotation"))?;
            let b = beta.ok_or(Error::MissingParameter("beta", "rotation"))?;
            if !(0.0..=PI).contains(&d) {
                return Err(Error::ParameterOutOfRange(d, "[0, pi]"));
            }
            TargetMap::new(vec![
                MapPiece { theta_lo: 0.0, theta_hi: d, theta_shift: 0.0, phi_shift: -b },
                MapPiece { theta_lo: d, theta_hi: PI, theta_shift: 0.0, phi_shift: b },
            ])
        }
        Family::Orthog => {
            let d = delta.ok_or(Error::MissingParameter("delta", "orthog"))?;
            if !(0.0..=FRAC_PI_2 + 1e-12).contains(&d) {
                return Err(Error::ParameterOutOfRange(d, "[0, pi/2]"));
            }
            TargetMap::new(vec![
                MapPiece { theta_lo: 0.0, theta_hi: d, theta_shift: -PI, phi_shift: 0.0 },
                MapPiece { theta_lo: d, theta_hi: PI - d, theta_shift: 0.0, phi_shift: 0.0 },
                MapPiece { theta_lo: PI - d, theta_hi: PI, theta_shift: -PI, phi_shift: 0.0 },
            ])
        }
        Family::General => {
            let d = delta.ok_or(Error::MissingParameter("delta", "general"))?;
            let a = alpha.ok_or(Error::MissingParameter("alpha", "general"))?;
            if !(0.0..=PI).contains(&d) {
                return Err(Error::ParameterOutOfRange(d, "[0, pi]"));
            }
            if !(0.0..=PI).contains(&a) {
                return Err(Error::ParameterOutOfRange(a, "[0, pi]"));
            }
            TargetMap::new(vec![
                MapPiece { theta_lo: 0.0, theta_hi: d, theta_shift: -a, phi_shift: 0.0 },
                MapPiece { theta_lo: d, theta_hi: PI, theta_shift: 0.0, phi_shift: 0.0 },
            ])
        }
        Family::LinearBaseline => {
            let a = alpha.ok_or(Error::MissingParameter("alpha", "linear_baseline"))?;
            TargetMap::new(vec![MapPiece { theta_lo: 0.0, theta_hi: PI, theta_shift: -a, phi_shift: 0.0 }])
        }
    }
}

fn abscissa_of(req: &ScenarioRequest) -> f64 {
    match req.family {
        Family::LinearBaseline => req.alpha.unwrap_or(0.0),
        _ => req.delta.unwrap_or(0.0),
    }
}

/// Evaluates every requested scheme at the request's parameter point.
pub fn run(req: &ScenarioRequest) -> Result<CurvePoint> {
    req.quad.validate()?;
    let map = build_map(req.family, req.delta, req.beta, req.alpha)?;
    let beta = req.beta.unwrap_or(0.0);
    let mut fidelities = Vec::with_capacity(req.schemes.len());
    let mut optimum = None;
    for scheme in &req.schemes {
        match scheme {
            Scheme::Measurement(m) => {
                if *m == MeasScheme::Rho3 && req.family != Family::Rotation {
                    return Err(Error::SchemeUnavailable("rho3", req.family.label()));
                }
                let ev = MeasurementEvaluator::new(*m, &req.quad, beta);
                fidelities.push((scheme.label(), ev.fidelity(&map)));
            }
            Scheme::QuantumOptimal => {
                let f = extract_functional(&map, &req.quad)?;
                let opt = maximize(&f);
                fidelities.push((scheme.label(), opt.value));
                optimum = Some(opt);
            }
            Scheme::QuantumFixed(g) => {
                let f = extract_functional(&map, &req.quad)?;
                fidelities.push((scheme.label(), f.eval(g)));
            }
        }
    }
    Ok(CurvePoint { abscissa: abscissa_of(req), fidelities, optimum })
}

/// The parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Delta,
    Beta,
    Alpha,
}

/// Evenly spaced evaluation of the request over [lo, hi], endpoints
/// included.
pub fn sweep(
    template: &ScenarioRequest,
    parameter: SweepParameter,
    lo: f64,
    hi: f64,
    n_points: usize,
) -> Result<Vec<CurvePoint>> {
    if n_points < 2 || hi < lo {
        return Err(Error::EmptySweep { lo, hi, n: n_points });
    }
    let step = (hi - lo) / (n_points - 1) as f64;
    let mut out = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let value = lo + step * i as f64;
        let mut req = template.clone();
        match parameter {
            SweepParameter::Delta => req.delta = Some(value),
            SweepParameter::Beta => req.beta = Some(value),
            SweepParameter::Alpha => req.alpha = Some(value),
        }
        let mut point = run(&req)?;
        point.abscissa = value;
        out.push(point);
    }
    Ok(out)
}

/// Locates the strategy switches the family exhibits.
///
/// For the ORTHOG family: the quantum identity/bit-flip switch (where
/// |Y| = |Z| in the paper's coefficients) and the rho1/sigma2
/// measurement switch. For the general family: the measurement
/// preparation switches along delta at the request's alpha, plus the
/// alpha threshold where the averaged optimum departs from the
/// universal cos^2(alpha/2) baseline.
pub fn crossover_report(req: &ScenarioRequest) -> Result<Vec<Crossover>> {
    let q = &req.quad;
    let mut out = Vec::new();
    match req.family {
        Family::Orthog => {
            let loc = find_crossover(
                |d| orthog_coefficients(d).map(|f| f.x.abs()).unwrap_or(f64::NAN),
                |d| orthog_coefficients(d).map(|f| f.w.norm()).unwrap_or(f64::NAN),
                0.5,
                1.2,
            )?;
            out.push(Crossover { pair: "identity/bit_flip".into(), location: loc });

            let rho1 = MeasurementEvaluator::new(MeasScheme::Rho1, q, 0.0);
            let sigma2 = MeasurementEvaluator::new(MeasScheme::Sigma2, q, 0.0);
            let fid = |ev: &MeasurementEvaluator, d: f64| {
                ev.fidelity(&build_map(Family::Orthog, Some(d), None, None).expect("delta in range"))
            };
            let loc = find_crossover(|d| fid(&rho1, d), |d| fid(&sigma2, d), 0.5, 1.2)?;
            out.push(Crossover { pair: "rho1/sigma2".into(), location: loc });
        }
        Family::General => {
            let alpha = req.alpha.ok_or(Error::MissingParameter("alpha", "general"))?;
            let schemes = [MeasScheme::Rho1, MeasScheme::Rho2, MeasScheme::Sigma1, MeasScheme::Sigma2];
            let evals: Vec<MeasurementEvaluator> =
                schemes.iter().map(|s| MeasurementEvaluator::new(*s, q, 0.0)).collect();
            let fid = |i: usize, d: f64| {
                evals[i].fidelity(&build_map(Family::General, Some(d), None, Some(alpha)).expect("delta in range"))
            };
            // scan for changes of the best preparation, then refine
            let n_scan = 65;
            let mut prev_best = 0;
            let mut prev_d = 0.0;
            for k in 0..n_scan {
                let d = PI * k as f64 / (n_scan - 1) as f64;
                let vals: Vec<f64> = (0..4).map(|i| fid(i, d)).collect();
                let best = (0..4).max_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap();
                if k > 0 && best != prev_best {
                    let (a, b) = (prev_best, best);
                    if let Ok(loc) = find_crossover(|d| fid(a, d), |d| fid(b, d), prev_d, d) {
                        out.push(Crossover {
                            pair: format!("{}/{}", schemes[a].label(), schemes[b].label()),
                            location: loc,
                        });
                    }
                }
                prev_best = best;
                prev_d = d;
            }
            // averaged optimum departs from the universal baseline where |Y| = |W|
            let loc = find_crossover(
                |a| general_coefficients(a).map(|f| f.y.abs()).unwrap_or(f64::NAN),
                |a| general_coefficients(a).map(|f| f.w.norm()).unwrap_or(f64::NAN),
                0.3,
                1.0,
            )?;
            out.push(Crossover { pair: "average/universal".into(), location: loc });
        }
        Family::Rotation => {
            // identity/pi-rotation switch of the hemispheric rotation
            let d = req.delta.unwrap_or(FRAC_PI_2);
            let w_re = |b: f64| {
                let map = build_map(Family::Rotation, Some(d), Some(b), None).expect("delta in range");
                extract_functional(&map, q).map(|f| f.w.re).unwrap_or(f64::NAN)
            };
            if let Ok(loc) = find_crossover(w_re, |_| 0.0, 0.1, PI - 0.1) {
                out.push(Crossover { pair: "identity/pi_rotation".into(), location: loc });
            }
        }
        Family::LinearBaseline => {
            let sigma1 = MeasurementEvaluator::new(MeasScheme::Sigma1, q, 0.0);
            let sigma2 = MeasurementEvaluator::new(MeasScheme::Sigma2, q, 0.0);
            let fid = |ev: &MeasurementEvaluator, a: f64| {
                ev.fidelity(&build_map(Family::LinearBaseline, None, None, Some(a)).expect("alpha in range"))
            };
            let loc = find_crossover(|a| fid(&sigma1, a), |a| fid(&sigma2, a), 1.0, 2.0)?;
            out.push(Crossover { pair: "sigma1/sigma2".into(), location: loc });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn rotation_anchor_point() {
        let req = ScenarioRequest {
            family: Family::Rotation,
            delta: Some(FRAC_PI_2),
            beta: Some(PI / 3.0),
            alpha: None,
            schemes: vec![
                Scheme::Measurement(MeasScheme::Rho3),
                Scheme::Measurement(MeasScheme::Rho1),
                Scheme::Measurement(MeasScheme::Sigma1),
            ],
            quad: quad(),
        };
        let pt = run(&req).unwrap();
        assert!((pt.fidelities[0].1 - 0.58333).abs() < 1e-4);
        assert!((pt.fidelities[1].1 - 0.6111).abs() < 1e-4);
        assert!((pt.fidelities[2].1 - 2.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn orthog_quantum_optimal_two_thirds() {
        let req = ScenarioRequest {
            family: Family::Orthog,
            delta: Some(FRAC_PI_2),
            beta: None,
            alpha: None,
            schemes: vec![Scheme::QuantumOptimal],
            quad: quad(),
        };
        let pt = run(&req).unwrap();
        assert!((pt.fidelities[0].1 - 2.0 / 3.0).abs() < 1e-9);
        assert!(pt.optimum.is_some());
    }

    #[test]
    fn general_identity_point_is_perfect() {
        let req = ScenarioRequest {
            family: Family::General,
            delta: Some(PI),
            beta: None,
            alpha: Some(0.0),
            schemes: vec![Scheme::QuantumOptimal],
            quad: quad(),
        };
        let pt = run(&req).unwrap();
        assert!((pt.fidelities[0].1 - 1.0).abs() < 1e-9);
        assert_eq!(pt.optimum.unwrap().regime, crate::optimize::Regime::Identity);
    }

    #[test]
    fn baseline_sigma2_at_pi() {
        let req = ScenarioRequest {
            family: Family::LinearBaseline,
            delta: None,
            beta: None,
            alpha: Some(PI),
            schemes: vec![Scheme::Measurement(MeasScheme::Sigma2)],
            quad: quad(),
        };
        let pt = run(&req).unwrap();
        assert!((pt.fidelities[0].1 - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn rho3_outside_rotation_rejected() {
        let req = ScenarioRequest {
            family: Family::Orthog,
            delta: Some(0.3),
            beta: None,
            alpha: None,
            schemes: vec![Scheme::Measurement(MeasScheme::Rho3)],
            quad: quad(),
        };
        assert!(matches!(run(&req), Err(Error::SchemeUnavailable(_, _))));
    }

    #[test]
    fn quantum_beta_sweep_endpoints() {
        let template = ScenarioRequest {
            family: Family::Rotation,
            delta: Some(FRAC_PI_2),
            beta: Some(0.0),
            alpha: None,
            schemes: vec![Scheme::QuantumOptimal],
            quad: quad(),
        };
        let curve = sweep(&template, SweepParameter::Beta, 0.0, PI, 9).unwrap();
        assert!((curve[0].fidelities[0].1 - 1.0).abs() < 1e-9);
        assert!((curve[8].fidelities[0].1 - 1.0).abs() < 1e-9);
        assert!((curve[4].fidelities[0].1 - 2.0 / 3.0).abs() < 1e-9); // beta = pi/2
        for w in curve.windows(2) {
            assert!(w[1].abscissa > w[0].abscissa);
        }
    }

    #[test]
    fn rotation_mirror_symmetry() {
        // F(delta, beta) equals F(pi - delta, -beta) through the map itself
        let q = quad();
        for (d, b) in [(0.7, 1.1), (1.1, 2.0)] {
            let f1 = extract_functional(&build_map(Family::Rotation, Some(d), Some(b), None).unwrap(), &q).unwrap();
            let f2 =
                extract_functional(&build_map(Family::Rotation, Some(PI - d), Some(-b), None).unwrap(), &q).unwrap();
            let o1 = maximize(&f1);
            let o2 = maximize(&f2);
            assert!((o1.value - o2.value).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_sweep_rejected() {
        let template = ScenarioRequest {
            family: Family::Orthog,
            delta: Some(0.3),
            beta: None,
            alpha: None,
            schemes: vec![],
            quad: quad(),
        };
        assert!(sweep(&template, SweepParameter::Delta, 0.0, 1.0, 1).is_err());
        assert!(sweep(&template, SweepParameter::Delta, 1.0, 0.0, 5).is_err());
    }

    #[test]
    fn orthog_crossovers() {
        let req = ScenarioRequest {
            family: Family::Orthog,
            delta: Some(FRAC_PI_2),
            beta: None,
            alpha: None,
            schemes: vec![],
            quad: quad(),
        };
        let xs = crossover_report(&req).unwrap();
        let quantum = xs.iter().find(|c| c.pair == "identity/bit_flip").unwrap();
        assert!((quantum.location - 0.932197).abs() < 1e-3, "{}", quantum.location);
        let meas = xs.iter().find(|c| c.pair == "rho1/sigma2").unwrap();
        assert!((meas.location - 0.82).abs() < 2e-2, "{}", meas.location);
    }
}
