//! The singular constants of the cubic planar graph generating functions.
//!
//! The network series D(x) has a square-root singularity at a radius rho
//! determined together with D0 = D(rho) by the polynomial system
//!
//!   (1 + D0)^2 (rho^4/4 + 1 - rho^2 (D0 - 1)) = (17/16)^2
//!   rho^2 (1 + D0)^3 = 27/256
//!
//! (the second equation places the composed triangulation series at its own
//! singular point, the first fixes the branch value of the square root in
//! the loop production). Everything else in the pipeline is a closed form in
//! (rho, D0): the one-sided derivative D'(rho), the Puiseux coefficient D3
//! of the (1 - x/rho)^(3/2) term, the core proportionality constant kappa,
//! the rescaling constant c_v of the core-size limit law, and the counting
//! constants of the 3-connected and connected classes.

use crate::error::{CpgError, Result};
use crate::series::coeff::Coeff;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rounds to a dyadic rational with `bits` fractional bits, capping the
/// operand growth of exact Newton iteration.
fn round_dyadic(x: &BigRational, bits: u64) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = x * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.round().to_integer(), scale)
}

/// Constants at the dominant singularity, exact to well beyond f64 where a
/// rational closed form exists.
#[derive(Debug, Clone)]
pub struct SingularConstants {
    /// Radius of convergence of the network and graph series.
    pub rho: f64,
    pub rho_rational: BigRational,
    /// D0 = D(rho).
    pub d0: f64,
    pub d0_rational: BigRational,
    /// One-sided derivative D'(rho).
    pub d_prime: f64,
    pub d_prime_rational: BigRational,
    /// Coefficient of the singular (1 - x/rho)^(3/2) term of D.
    pub d3: f64,
    /// Giant-core proportionality constant: the largest 3-connected core of
    /// a random cubic planar graph with n vertices has ~ kappa * n vertices.
    pub kappa: f64,
    /// Expected number of extra vertices per core edge, kappa / 2... the
    /// core of a graph with n vertices has about mu * n edges... mu =
    /// kappa / 2 restated per edge of the graph.
    pub mu: f64,
    /// Scale constant of the core-size fluctuation law.
    pub c_v: f64,
    /// Counting constant of the network class: [x^n] D ~ c_d n^(-5/2)
    /// rho^(-n).
    pub c_d: f64,
    /// Counting constant of edge-rooted connected graphs.
    pub c3_dot: f64,
    /// Singular value constant of the triangulation series,
    /// Q3+ = 1 / (4 sqrt 6).
    pub q3_plus: f64,
    /// P(Y = 0) = 1 / (1 + D0) for the per-edge component law.
    pub p_y0: f64,
    /// E[Y] = rho D'(rho) / (1 + D0).
    pub mean_y: f64,
}

/// Solves the singular system by exact Newton iteration and evaluates the
/// derived closed forms.
pub fn singular_constants() -> Result<SingularConstants> {
    let bits = 512u64;
    let one = <BigRational as One>::one();
    let mut rho = rat(32, 100);
    let mut d = rat(1, 100);
    for _ in 0..10 {
        let od = &one + &d;
        let r2 = &rho * &rho;
        let g = &r2 * &r2 * rat(1, 4) + &one - &r2 * (&d - &one);
        let f1 = &od * &od * &g - rat(289, 256);
        let f2 = &r2 * &od * &od * &od - rat(27, 256);
        let j11 = &od * &od * (&r2 * &rho - rat(2, 1) * &rho * (&d - &one));
        let j12 = rat(2, 1) * &od * &g - &od * &od * &r2;
        let j21 = rat(2, 1) * &rho * &od * &od * &od;
        let j22 = rat(3, 1) * &r2 * &od * &od;
        let det = &j11 * &j22 - &j12 * &j21;
        if Zero::is_zero(&det) {
            return Err(CpgError::NoConvergence("singular Newton Jacobian".into()));
        }
        let drho = (&f1 * &j22 - &f2 * &j12) / &det;
        let dd = (&j11 * &f2 - &j21 * &f1) / &det;
        rho = round_dyadic(&(&rho - &drho), bits);
        d = round_dyadic(&(&d - &dd), bits);
    }

    // Residual check at ~1e-100.
    let od = &one + &d;
    let r2 = &rho * &rho;
    let g = &r2 * &r2 * rat(1, 4) + &one - &r2 * (&d - &one);
    let f1 = &od * &od * &g - rat(289, 256);
    let f2 = &r2 * &od * &od * &od - rat(27, 256);
    for f in [&f1, &f2] {
        if Coeff::to_f64(&f.abs()) > 1e-100 {
            return Err(CpgError::NoConvergence(
                "singular system Newton residual".into(),
            ));
        }
    }

    // sqrt of g at the singularity is rational in D0.
    let sqrt_g0 = rat(17, 16) / &od;
    // Derivatives of the grammar residual F(x, D) = Phi(D) - D at the
    // singular point; D'(rho) = -F_x / F_D by implicit differentiation.
    let f_d = &sqrt_g0 - &r2 * &od / (rat(2, 1) * &sqrt_g0) - rat(9, 32) / &od;
    let g_x = &r2 * &rho - rat(2, 1) * &rho * (&d - &one);
    let f_x = &od * &g_x / (rat(2, 1) * &sqrt_g0) - rat(16, 9) * &rho * &od * &od * &od;
    let d_prime = -&f_x / &f_d;
    let c2 = rat(2, 1) + rat(3, 1) * &rho * &d_prime / &od;
    let kappa_rational = rat(2, 1) * &od / (rat(2, 1) * &od + rat(3, 1) * &rho * &d_prime);

    let rho_f = Coeff::to_f64(&rho);
    let d0_f = Coeff::to_f64(&d);
    let d_prime_f = Coeff::to_f64(&d_prime);
    let c2_f = Coeff::to_f64(&c2);
    let f_d_f = Coeff::to_f64(&f_d);
    let kappa = Coeff::to_f64(&kappa_rational);

    let d3 = c2_f.powf(1.5) / (8.0 * 6f64.sqrt() * f_d_f);
    let d2 = -rho_f * d_prime_f;
    let c_v = d3 * ((2.0 * d0_f - 3.0 * d2 + 2.0) / d3).powf(5.0 / 3.0)
        / (6.0 * 3f64.powf(1.0 / 3.0) * (d0_f + 1.0));
    let c_d = 3.0 * d3 / (2.0 * std::f64::consts::PI.sqrt());
    let r2f = rho_f * rho_f;
    let c3_dot = d3 * (2.0 - 2.0 * r2f - r2f * r2f)
        / (3.0 * (4.0 + 4.0 * r2f - 4.0 * d0_f * r2f + r2f * r2f).sqrt());
    let q3_plus = 1.0 / (4.0 * 6f64.sqrt());
    let p_y0 = 1.0 / (1.0 + d0_f);
    let mean_y = rho_f * d_prime_f / (1.0 + d0_f);

    Ok(SingularConstants {
        rho: rho_f,
        rho_rational: rho,
        d0: d0_f,
        d0_rational: d,
        d_prime: d_prime_f,
        d_prime_rational: d_prime,
        d3,
        kappa,
        mu: kappa / 2.0,
        c_v,
        c_d,
        c3_dot,
        q3_plus,
        p_y0,
        mean_y,
    })
}

/// The values of the network classes at the singular point, used as the
/// branching weights of the Boltzmann samplers.
#[derive(Debug, Clone)]
pub struct ClassValues {
    pub d: f64,
    pub l: f64,
    pub i: f64,
    pub s: f64,
    pub p: f64,
    pub h: f64,
    pub ns: f64,
}

/// Evaluates every class at x = rho in closed form.
pub fn class_values(c: &SingularConstants) -> ClassValues {
    let one = <BigRational as One>::one();
    let rho = &c.rho_rational;
    let d = &c.d0_rational;
    let od = &one + d;
    let r2 = rho * rho;
    let sqrt_g0 = rat(17, 16) / &od;
    let l = &one + &r2 * rat(1, 2) - &sqrt_g0;
    let i = &l * &l / &r2;
    let s = d * d / &od;
    let p = &r2 * d + &r2 * d * d * rat(1, 2);
    // Q(tau) - tau = 1/8 - 27/256 = 5/256.
    let h = rat(5, 256) / (rat(2, 1) * &od);
    let ns = &h + &r2 * d * d * rat(1, 2) + &i + &s - &l * &l;
    ClassValues {
        d: c.d0,
        l: Coeff::to_f64(&l),
        i: Coeff::to_f64(&i),
        s: Coeff::to_f64(&s),
        p: Coeff::to_f64(&p),
        h: Coeff::to_f64(&h),
        ns: Coeff::to_f64(&ns),
    }
}
