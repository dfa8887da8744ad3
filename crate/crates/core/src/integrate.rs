//! Bloch-sphere quadrature, guess-basis averaging, piecewise target maps
//! and fidelity-functional extraction.
//!
//! All integrands are trigonometric polynomials of bandwidth <= 4 in each
//! angle, so Gauss-Legendre in theta (per map piece) and the periodic
//! trapezoid rule in phi are exact far below the default orders. Guess
//! averages for the rho preparations exploit linearity: the averaged
//! preparation is a fixed linear channel, assembled once from its images
//! on the four matrix units and then applied per input node.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::bloch::{density_of, fidelity_unchecked, state_from_angles, BlochAngles, PureState};
use crate::channels::{
    dilate, dm_of, mat_of, prep_kernel, quantum_output, AncillaVectors, GramParams, Mat2, PrepKind,
};
use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n and P_n'
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl_on(lo: f64, hi: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (
        x.iter().map(|&t| mid + half * t).collect(),
        w.iter().map(|&t| half * t).collect(),
    )
}

/// Node counts for input and guess quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub n_theta: usize,
    pub n_phi: usize,
    pub n_guess_theta: usize,
    pub n_guess_phi: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { n_theta: 64, n_phi: 64, n_guess_theta: 64, n_guess_phi: 64 }
    }
}

impl QuadratureSpec {
    /// Same order on every axis; the CLI's single accuracy knob.
    pub fn uniform(n: usize) -> Result<Self> {
        let q = Self { n_theta: n, n_phi: n, n_guess_theta: n, n_guess_phi: n };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        for n in [self.n_theta, self.n_phi, self.n_guess_theta, self.n_guess_phi] {
            if n < 4 {
                return Err(Error::QuadratureTooCoarse(n));
            }
        }
        Ok(())
    }

    pub fn doubled(&self) -> Self {
        Self {
            n_theta: 2 * self.n_theta,
            n_phi: 2 * self.n_phi,
            n_guess_theta: 2 * self.n_guess_theta,
            n_guess_phi: 2 * self.n_guess_phi,
        }
    }
}

/// One theta band of a piecewise target map: inputs with
/// `theta in [theta_lo, theta_hi)` map to
/// `(theta + theta_shift, phi + phi_shift)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapPiece {
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub theta_shift: f64,
    pub phi_shift: f64,
}

/// A piecewise map of the Bloch sphere; pieces partition [0, pi].
#[derive(Debug, Clone, PartialEq)]
pub struct TargetMap {
    pieces: Vec<MapPiece>,
}

impl TargetMap {
    pub fn new(pieces: Vec<MapPiece>) -> Result<Self> {
        const EPS: f64 = 1e-12;
        let kept: Vec<MapPiece> = pieces
            .into_iter()
            .filter(|p| p.theta_hi - p.theta_lo > EPS)
            .collect();
        if kept.is_empty() {
            return Err(Error::InvalidMap("no pieces of positive width".into()));
        }
        if kept[0].theta_lo.abs() > EPS {
            return Err(Error::InvalidMap(format!("first piece starts at {}, not 0", kept[0].theta_lo)));
        }
        if (kept[kept.len() - 1].theta_hi - PI).abs() > EPS {
            return Err(Error::InvalidMap(format!(
                "last piece ends at {}, not pi",
                kept[kept.len() - 1].theta_hi
            )));
        }
        for w in kept.windows(2) {
            if (w[0].theta_hi - w[1].theta_lo).abs() > EPS {
                return Err(Error::InvalidMap(format!(
                    "gap or overlap between {} and {}",
                    w[0].theta_hi, w[1].theta_lo
                )));
            }
        }
        Ok(Self { pieces: kept })
    }

    /// Identity on the whole sphere.
    pub fn identity() -> Self {
        Self::new(vec![MapPiece { theta_lo: 0.0, theta_hi: PI, theta_shift: 0.0, phi_shift: 0.0 }]).unwrap()
    }

    pub fn pieces(&self) -> &[MapPiece] {
        &self.pieces
    }

    /// Target angles for the given input. Pieces are half-open at the top
    /// except the last, which includes pi.
    pub fn apply(&self, a: BlochAngles) -> BlochAngles {
        let piece = self
            .pieces
            .iter()
            .find(|p| a.theta >= p.theta_lo && a.theta < p.theta_hi)
            .unwrap_or(&self.pieces[self.pieces.len() - 1]);
        BlochAngles::new(a.theta + piece.theta_shift, a.phi + piece.phi_shift)
    }
}

/// `(1/4pi) \int f sin(theta) dtheta dphi`, with the theta integral split
/// exactly at the map's piece boundaries. Fixed summation order.
pub fn sphere_average<F: FnMut(BlochAngles) -> f64>(mut f: F, map: &TargetMap, q: &QuadratureSpec) -> f64 {
    let dphi = 2.0 * PI / q.n_phi as f64;
    let mut total = 0.0;
    for piece in &map.pieces {
        let (thetas, wt) = gl_on(piece.theta_lo, piece.theta_hi, q.n_theta);
        for (theta, w) in thetas.iter().zip(&wt) {
            let mut row = 0.0;
            for k in 0..q.n_phi {
                let phi = dphi * k as f64;
                row += f(BlochAngles::new(*theta, phi));
            }
            total += row * w * theta.sin() * dphi;
        }
    }
    total / (4.0 * PI)
}

/// The five measurement preparations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasScheme {
    Rho1,
    Rho2,
    Rho3,
    Sigma1,
    Sigma2,
}

impl MeasScheme {
    pub fn label(&self) -> &'static str {
        match self {
            MeasScheme::Rho1 => "rho1",
            MeasScheme::Rho2 => "rho2",
            MeasScheme::Rho3 => "rho3",
            MeasScheme::Sigma1 => "sigma1",
            MeasScheme::Sigma2 => "sigma2",
        }
    }

    fn kind(&self) -> PrepKind {
        match self {
            MeasScheme::Rho1 => PrepKind::Rho1,
            MeasScheme::Rho2 => PrepKind::Rho2,
            MeasScheme::Rho3 => PrepKind::Rho3,
            MeasScheme::Sigma1 => PrepKind::Sigma1,
            MeasScheme::Sigma2 => PrepKind::Sigma2,
        }
    }
}

const MATRIX_UNITS: [Mat2; 4] = {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    [
        [[one, zero], [zero, zero]],
        [[zero, one], [zero, zero]],
        [[zero, zero], [one, zero]],
        [[zero, zero], [zero, one]],
    ]
};

/// Guess-averaged preparation as a linear channel (images of the four
/// matrix units). rho1/rho2 average over the full sphere, rho3 over the
/// upper hemisphere cap.
fn guess_averaged_channel(kind: PrepKind, q: &QuadratureSpec, beta: f64) -> [Mat2; 4] {
    let (mu_hi, norm) = match kind {
        PrepKind::Rho3 => (0.5 * PI, 2.0 * PI),
        _ => (PI, 4.0 * PI),
    };
    let (mus, wm) = gl_on(0.0, mu_hi, q.n_guess_theta);
    let dnu = 2.0 * PI / q.n_guess_phi as f64;
    let zero = C64::new(0.0, 0.0);
    let mut images = [[[zero; 2]; 2]; 4];
    for (mu, w) in mus.iter().zip(&wm) {
        for k in 0..q.n_guess_phi {
            let nu = dnu * k as f64;
            let ww = w * mu.sin() * dnu / norm;
            let guess = BlochAngles::new(*mu, nu);
            for (unit, image) in MATRIX_UNITS.iter().zip(images.iter_mut()) {
                let p = prep_kernel(kind, unit, guess, beta);
                for r in 0..2 {
                    for c in 0..2 {
                        image[r][c] += p[r][c] * ww;
                    }
                }
            }
        }
    }
    images
}

fn apply_linear(images: &[Mat2; 4], rho: &Mat2) -> Mat2 {
    let coeff = [rho[0][0], rho[0][1], rho[1][0], rho[1][1]];
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (c, img) in coeff.iter().zip(images) {
        for r in 0..2 {
            for s in 0..2 {
                out[r][s] += *c * img[r][s];
            }
        }
    }
    out
}

fn target_state(map: &TargetMap, a: BlochAngles) -> PureState {
    state_from_angles(map.apply(a))
}

/// A measurement scheme with its guess average folded into a fixed
/// linear channel, reusable across target maps. The guess average does
/// not depend on the map, so sweeps and bisections pay for it once.
pub struct MeasurementEvaluator {
    kind: PrepKind,
    images: Option<[Mat2; 4]>,
    q: QuadratureSpec,
}

impl MeasurementEvaluator {
    pub fn new(scheme: MeasScheme, q: &QuadratureSpec, beta: f64) -> Self {
        let kind = scheme.kind();
        let images = match kind {
            PrepKind::Sigma1 | PrepKind::Sigma2 => None,
            _ => Some(guess_averaged_channel(kind, q, beta)),
        };
        Self { kind, images, q: *q }
    }

    /// Average fidelity of the prepared state against the target map.
    pub fn fidelity(&self, map: &TargetMap) -> f64 {
        sphere_average(
            |a| {
                let rho_in = mat_of(&density_of(&state_from_angles(a)));
                let out = match &self.images {
                    Some(images) => apply_linear(images, &rho_in),
                    None => prep_kernel(self.kind, &rho_in, BlochAngles::new(0.0, 0.0), 0.0),
                };
                fidelity_unchecked(&target_state(map, a), &dm_of(&out))
            },
            map,
            &self.q,
        )
    }
}

/// Average fidelity of a measurement scheme against the target map.
/// `beta` is used only by rho3 (the rotation applied on a positive
/// outcome).
pub fn measurement_fidelity(scheme: MeasScheme, map: &TargetMap, q: &QuadratureSpec, beta: f64) -> f64 {
    MeasurementEvaluator::new(scheme, q, beta).fidelity(map)
}

/// Average fidelity of a quantum-scheme channel against the target map.
pub fn averaged_quantum_fidelity(ch: &AncillaVectors, map: &TargetMap, q: &QuadratureSpec) -> f64 {
    sphere_average(
        |a| fidelity_unchecked(&target_state(map, a), &quantum_output(a, ch)),
        map,
        q,
    )
}

/// Coefficients of the affine form F(x, y, z) = V + X x + Y y + 2 Re(W z)
/// the averaged quantum-scheme fidelity reduces to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityFunctional {
    pub v: f64,
    pub x: f64,
    pub y: f64,
    pub w: C64,
}

impl FidelityFunctional {
    pub fn eval(&self, g: &GramParams) -> f64 {
        self.v + self.x * g.x + self.y * g.y + 2.0 * (self.w * g.z).re
    }
}

/// Solves the symmetric positive-definite 5x5 system by Gaussian
/// elimination with partial pivoting.
fn solve5(mut m: [[f64; 5]; 5], mut b: [f64; 5]) -> [f64; 5] {
    for col in 0..5 {
        let pivot = (col..5).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..5 {
            let f = m[row][col] / m[col][col];
            let lead = m[col];
            for (entry, l) in m[row][col..].iter_mut().zip(&lead[col..]) {
                *entry -= f * l;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 5];
    for row in (0..5).rev() {
        let mut s = b[row];
        for k in row + 1..5 {
            s -= m[row][k] * x[k];
        }
        x[row] = s / m[row][row];
    }
    x
}

/// Fits (V, X, Y, W) by evaluating the averaged fidelity of seven probe
/// channels and least-squares solving the overdetermined linear system.
/// The fit residual doubles as a structural check that the map belongs to
/// the representable family; residual above 1e-9 is an error.
pub fn extract_functional(map: &TargetMap, q: &QuadratureSpec) -> Result<FidelityFunctional> {
    let probes = [
        (0.0, 0.0, C64::new(0.0, 0.0)),
        (1.0, 0.0, C64::new(0.0, 0.0)),
        (0.0, 1.0, C64::new(0.0, 0.0)),
        (1.0, 1.0, C64::new(1.0, 0.0)),
        (1.0, 1.0, C64::new(0.0, 1.0)),
        (1.0, 1.0, C64::new(-1.0, 0.0)),
        (0.5, 0.5, C64::new(0.25, 0.0)),
    ];
    let mut rows = Vec::with_capacity(probes.len());
    let mut rhs = Vec::with_capacity(probes.len());
    for &(x, y, z) in &probes {
        let g = GramParams::new(x, y, z).expect("probe points are feasible");
        rows.push([1.0, x, y, 2.0 * z.re, -2.0 * z.im]);
        rhs.push(averaged_quantum_fidelity(&dilate(&g), map, q));
    }
    // normal equations
    let mut ata = [[0.0; 5]; 5];
    let mut atb = [0.0; 5];
    for (row, &f) in rows.iter().zip(&rhs) {
        for i in 0..5 {
            for j in 0..5 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * f;
        }
    }
    let sol = solve5(ata, atb);
    let residual = rows
        .iter()
        .zip(&rhs)
        .map(|(row, &f)| (row.iter().zip(&sol).map(|(a, b)| a * b).sum::<f64>() - f).abs())
        .fold(0.0f64, f64::max);
    if residual > 1e-9 {
        return Err(Error::FunctionalResidual(residual));
    }
    Ok(FidelityFunctional { v: sol[0], x: sol[1], y: sol[2], w: C64::new(sol[3], sol[4]) })
}

/// Closed-form ORTHOG coefficients as functions of delta in [0, pi/2],
/// mapped into the (V, X, Y, W) representation.
pub fn orthog_coefficients(delta: f64) -> Result<FidelityFunctional> {
    if !(-1e-12..=0.5 * PI + 1e-12).contains(&delta) {
        return Err(Error::ParameterOutOfRange(delta, "[0, pi/2]"));
    }
    let c3 = ((3.0 * (PI - delta)).cos() - (3.0 * delta).cos(), delta.cos());
    let (d3, cd) = c3;
    let c2 = (2.0 * (PI - delta)).cos() - (2.0 * delta).cos();
    let x_paper = 2.0 / 3.0 + d3 / 24.0 - cd / 4.0;
    let y_paper = -1.0 / 6.0 - c2 / 8.0 - d3 / 24.0 + cd / 4.0;
    let z_paper = -1.0 / 6.0 + d3 / 48.0 + 3.0 * cd / 8.0;
    Ok(FidelityFunctional { v: x_paper, x: y_paper, y: y_paper, w: C64::new(z_paper, 0.0) })
}

/// Closed-form coefficients of the general map at delta = pi, as
/// functions of alpha in [0, pi]. The paper's .3926 coefficient is pi/8.
pub fn general_coefficients(alpha: f64) -> Result<FidelityFunctional> {
    if !(-1e-12..=PI + 1e-12).contains(&alpha) {
        return Err(Error::ParameterOutOfRange(alpha, "[0, pi]"));
    }
    let (s, c) = alpha.sin_cos();
    Ok(FidelityFunctional {
        v: 0.5 - c / 6.0,
        x: c / 6.0 + PI / 8.0 * s,
        y: c / 6.0 - PI / 8.0 * s,
        w: C64::new(c / 6.0, 0.0),
    })
}
