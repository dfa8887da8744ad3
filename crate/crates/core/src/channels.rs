//! Measurement-based preparations and the quantum-scheme channel.
//!
//! The quantum scheme is the most general single-qubit map obtained by a
//! unitary on the qubit plus an ancilla:
//!
//! ```text
//! |0>|Q> -> |1>|A> + |0>|B>
//! |1>|Q> -> |0>|At> + |1>|Bt>
//! ```
//!
//! with the constraints |A|^2 + |B|^2 = 1, |At|^2 + |Bt|^2 = 1 and
//! <B|At> + <A|Bt> = 0. The sphere-averaged fidelity of such a channel
//! depends only on the Gram parameters (|B|^2, |Bt|^2, <B|Bt>); `dilate`
//! provides a canonical dim-4 realization of any feasible Gram point.

use num_complex::Complex64 as C64;

use crate::bloch::{density_of, orthogonal_state, state_from_angles, BlochAngles, DensityMatrix};
use crate::error::{Error, Result};

const CONSTRAINT_TOL: f64 = 1e-10;

fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Cached inner products a channel's output matrix is built from.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ChannelProducts {
    pub a2: f64,   // |A|^2
    pub at2: f64,  // |At|^2
    pub b2: f64,   // |B|^2
    pub bt2: f64,  // |Bt|^2
    pub ab: C64,   // <A|B>
    pub btat: C64, // <Bt|At>
    pub aat: C64,  // <A|At>
    pub btb: C64,  // <Bt|B>
    pub bat: C64,  // <B|At>
    pub abt: C64,  // <A|Bt>
}

/// The four ancilla vectors defining a quantum-scheme channel.
///
/// Fields are private: construction validates the normalisation and
/// orthogonality constraints, so a value of this type is always a valid
/// channel.
#[derive(Debug, Clone)]
pub struct AncillaVectors {
    dim: usize,
    a: Vec<C64>,
    atilde: Vec<C64>,
    b: Vec<C64>,
    btilde: Vec<C64>,
    products: ChannelProducts,
}

impl AncillaVectors {
    pub fn new(a: Vec<C64>, atilde: Vec<C64>, b: Vec<C64>, btilde: Vec<C64>) -> Result<Self> {
        let dim = a.len();
        if dim == 0 || atilde.len() != dim || b.len() != dim || btilde.len() != dim {
            return Err(Error::InvalidAncilla("vectors must share a positive dimension".into()));
        }
        let products = ChannelProducts {
            a2: inner(&a, &a).re,
            at2: inner(&atilde, &atilde).re,
            b2: inner(&b, &b).re,
            bt2: inner(&btilde, &btilde).re,
            ab: inner(&a, &b),
            btat: inner(&btilde, &atilde),
            aat: inner(&a, &atilde),
            btb: inner(&btilde, &b),
            bat: inner(&b, &atilde),
            abt: inner(&a, &btilde),
        };
        let n1 = (products.a2 + products.b2 - 1.0).abs();
        let n2 = (products.at2 + products.bt2 - 1.0).abs();
        if n1 > CONSTRAINT_TOL || n2 > CONSTRAINT_TOL {
            return Err(Error::InvalidAncilla(format!(
                "normalisation violated: |A|^2+|B|^2 - 1 = {n1:.3e}, |At|^2+|Bt|^2 - 1 = {n2:.3e}"
            )));
        }
        let orth = (products.bat + products.abt).norm();
        if orth > CONSTRAINT_TOL {
            return Err(Error::InvalidAncilla(format!("orthogonality violated: |<B|At> + <A|Bt>| = {orth:.3e}")));
        }
        Ok(Self { dim, a, atilde, b, btilde, products })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> &[C64] {
        &self.a
    }

    pub fn atilde(&self) -> &[C64] {
        &self.atilde
    }

    pub fn b(&self) -> &[C64] {
        &self.b
    }

    pub fn btilde(&self) -> &[C64] {
        &self.btilde
    }

    pub(crate) fn products(&self) -> &ChannelProducts {
        &self.products
    }
}

/// Reduced channel coordinates `(x, y, z) = (|B|^2, |Bt|^2, <B|Bt>)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramParams {
    pub x: f64,
    pub y: f64,
    pub z: C64,
}

impl GramParams {
    /// Checks ranges and the Cauchy-Schwarz feasibility |z|^2 <= x*y.
    pub fn new(x: f64, y: f64, z: C64) -> Result<Self> {
        let eps = 1e-12;
        if !(-eps..=1.0 + eps).contains(&x) || !(-eps..=1.0 + eps).contains(&y) {
            return Err(Error::InfeasibleGram { z_sq: z.norm_sqr(), xy: x * y });
        }
        if z.norm_sqr() > x * y + eps {
            return Err(Error::InfeasibleGram { z_sq: z.norm_sqr(), xy: x * y });
        }
        Ok(Self { x, y, z })
    }
}

/// 2x2 complex matrix used by the linear-extension kernels below.
pub(crate) type Mat2 = [[C64; 2]; 2];

pub(crate) fn mat_of(d: &DensityMatrix) -> Mat2 {
    [[d.m00, d.m01], [d.m10, d.m11]]
}

pub(crate) fn dm_of(m: &Mat2) -> DensityMatrix {
    DensityMatrix { m00: m[0][0], m01: m[0][1], m10: m[1][0], m11: m[1][1] }
}

fn quad_form(basis: &crate::bloch::PureState, e: &Mat2) -> C64 {
    let a0 = basis.amp0;
    let a1 = basis.amp1;
    a0.conj() * (e[0][0] * a0 + e[0][1] * a1) + a1.conj() * (e[1][0] * a0 + e[1][1] * a1)
}

fn add_scaled(dst: &mut Mat2, w: C64, p: &DensityMatrix) {
    dst[0][0] += w * p.m00;
    dst[0][1] += w * p.m01;
    dst[1][0] += w * p.m10;
    dst[1][1] += w * p.m11;
}

/// Measurement-scheme preparation kernels, extended linearly from input
/// projectors to arbitrary 2x2 operators so guess-averaged channels can
/// be assembled from basis images.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PrepKind {
    Rho1,
    Rho2,
    Rho3,
    Sigma1,
    Sigma2,
}

pub(crate) fn prep_kernel(kind: PrepKind, e: &Mat2, guess: BlochAngles, beta: f64) -> Mat2 {
    let mut out: Mat2 = [[C64::new(0.0, 0.0); 2]; 2];
    match kind {
        PrepKind::Sigma1 => {
            out[0][0] = e[0][0];
            out[1][1] = e[1][1];
        }
        PrepKind::Sigma2 => {
            out[0][0] = e[1][1];
            out[1][1] = e[0][0];
        }
        PrepKind::Rho1 | PrepKind::Rho2 | PrepKind::Rho3 => {
            let phi = state_from_angles(guess);
            let phi_perp = orthogonal_state(guess);
            let p = quad_form(&phi, e);
            let q = quad_form(&phi_perp, e);
            let (pos, neg) = match kind {
                PrepKind::Rho1 => (density_of(&phi), density_of(&phi_perp)),
                PrepKind::Rho2 => (density_of(&phi_perp), density_of(&phi)),
                PrepKind::Rho3 => (
                    density_of(&state_from_angles(BlochAngles::new(guess.theta, guess.phi + beta))),
                    density_of(&state_from_angles(BlochAngles::new(
                        guess.theta - std::f64::consts::PI,
                        guess.phi - beta,
                    ))),
                ),
                _ => unreachable!(),
            };
            add_scaled(&mut out, p, &pos);
            add_scaled(&mut out, q, &neg);
        }
    }
    out
}

fn prep(kind: PrepKind, input: BlochAngles, guess: BlochAngles, beta: f64) -> DensityMatrix {
    let rho_in = mat_of(&density_of(&state_from_angles(input)));
    dm_of(&prep_kernel(kind, &rho_in, guess, beta))
}

/// Measure in the guessed basis and prepare the outcome state.
pub fn prep_rho1(input: BlochAngles, guess: BlochAngles) -> DensityMatrix {
    prep(PrepKind::Rho1, input, guess, 0.0)
}

/// Measure in the guessed basis and prepare the *opposite* outcome state.
pub fn prep_rho2(input: BlochAngles, guess: BlochAngles) -> DensityMatrix {
    prep(PrepKind::Rho2, input, guess, 0.0)
}

/// Measure in the computational basis and prepare the outcome.
pub fn prep_sigma1(input: BlochAngles) -> DensityMatrix {
    prep(PrepKind::Sigma1, input, BlochAngles::new(0.0, 0.0), 0.0)
}

/// Measure in the computational basis and prepare the flipped outcome.
pub fn prep_sigma2(input: BlochAngles) -> DensityMatrix {
    prep(PrepKind::Sigma2, input, BlochAngles::new(0.0, 0.0), 0.0)
}

/// Measure in the guessed basis, rotate the guess azimuth by `+beta` on
/// a positive outcome and use azimuth `nu - beta` on the orthogonal
/// branch. The guess must lie in the upper hemisphere.
pub fn prep_rho3(input: BlochAngles, guess: BlochAngles, beta: f64) -> Result<DensityMatrix> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&guess.theta) {
        return Err(Error::GuessOutOfRange(guess.theta));
    }
    Ok(prep(PrepKind::Rho3, input, guess, beta))
}

/// Channel output after tracing out the ancilla.
pub fn quantum_output(input: BlochAngles, ch: &AncillaVectors) -> DensityMatrix {
    let p = ch.products();
    let c = (0.5 * input.theta).cos();
    let s = (0.5 * input.theta).sin();
    let ep = C64::from_polar(1.0, input.phi);
    let em = ep.conj();
    let cc = C64::new(c * c, 0.0);
    let ss = C64::new(s * s, 0.0);
    let csp = ep * (c * s);
    let csm = em * (c * s);
    DensityMatrix {
        m00: cc * p.b2 + ss * p.at2 + csp * p.bat + csm * p.bat.conj(),
        m01: cc * p.ab + ss * p.btat + csp * p.aat + csm * p.btb,
        m10: cc * p.ab.conj() + ss * p.btat.conj() + csp * p.btb.conj() + csm * p.aat.conj(),
        m11: cc * p.a2 + ss * p.bt2 + csp * p.abt + csm * p.abt.conj(),
    }
}

/// The Buzek et al. U-NOT channel on a two-qubit (dim-4) ancilla, in the
/// basis order |00>, |01>, |10>, |11>.
pub fn buzek_unot() -> AncillaVectors {
    let z = C64::new(0.0, 0.0);
    let r23 = (2.0f64 / 3.0).sqrt();
    let r16 = (1.0f64 / 6.0).sqrt();
    let a = vec![C64::new(-r23, 0.0), z, z, z];
    let atilde = vec![z, z, z, C64::new(r23, 0.0)];
    let b = vec![z, C64::new(r16, 0.0), C64::new(r16, 0.0), z];
    let btilde = vec![z, C64::new(-r16, 0.0), C64::new(-r16, 0.0), z];
    AncillaVectors::new(a, atilde, b, btilde).expect("Buzek vectors satisfy the constraints")
}

/// Projects a channel onto the Gram coordinates the averaged fidelity
/// depends on.
pub fn gram_of(ch: &AncillaVectors) -> GramParams {
    let p = ch.products();
    GramParams { x: p.b2, y: p.bt2, z: p.btb.conj() }
}

/// Canonical dim-4 realization of a feasible Gram point. A and At sit in
/// directions orthogonal to B, Bt and to each other, so the constraint
/// <B|At> + <A|Bt> = 0 holds by construction.
pub fn dilate(g: &GramParams) -> AncillaVectors {
    let zero = C64::new(0.0, 0.0);
    let mut b = vec![zero; 4];
    let mut btilde = vec![zero; 4];
    if g.x > 0.0 {
        let sx = g.x.sqrt();
        b[0] = C64::new(sx, 0.0);
        btilde[0] = g.z / sx;
        btilde[1] = C64::new((g.y - g.z.norm_sqr() / g.x).max(0.0).sqrt(), 0.0);
    } else {
        btilde[1] = C64::new(g.y.max(0.0).sqrt(), 0.0);
    }
    let mut a = vec![zero; 4];
    let mut atilde = vec![zero; 4];
    a[2] = C64::new((1.0 - g.x).max(0.0).sqrt(), 0.0);
    atilde[3] = C64::new((1.0 - g.y).max(0.0).sqrt(), 0.0);
    AncillaVectors::new(a, atilde, b, btilde).expect("dilation satisfies the constraints by construction")
}

/// Alternative realization of the same Gram point with a nonzero <A|At>
/// overlap (`cos(eta)` fraction of the maximum). Used to exercise the
/// claim that averaged fidelities depend on the Gram parameters only.
pub fn dilate_with_overlap(g: &GramParams, eta: f64) -> AncillaVectors {
    let zero = C64::new(0.0, 0.0);
    let mut b = vec![zero; 4];
    let mut btilde = vec![zero; 4];
    if g.x > 0.0 {
        let sx = g.x.sqrt();
        b[0] = C64::new(sx, 0.0);
        btilde[0] = g.z / sx;
        btilde[1] = C64::new((g.y - g.z.norm_sqr() / g.x).max(0.0).sqrt(), 0.0);
    } else {
        btilde[1] = C64::new(g.y.max(0.0).sqrt(), 0.0);
    }
    let na = (1.0 - g.x).max(0.0).sqrt();
    let nat = (1.0 - g.y).max(0.0).sqrt();
    let mut a = vec![zero; 4];
    a[2] = C64::new(na, 0.0);
    let mut atilde = vec![zero; 4];
    atilde[2] = C64::new(nat * eta.cos(), 0.0);
    atilde[3] = C64::new(nat * eta.sin(), 0.0);
    AncillaVectors::new(a, atilde, b, btilde).expect("overlap dilation satisfies the constraints")
}
