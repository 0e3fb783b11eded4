//! The cubic network grammar and its series solver.
//!
//! Networks are connected cubic planar multigraphs with an oriented root
//! edge whose removal leaves a simple graph. They split into five classes:
//! loop (L), isthmus (I), series (S), parallel (P), and polyhedral (H)
//! networks, with D = L + S + P + H the root-deletion classes and
//! N = D + I. Writing x for a vertex atom, the classes satisfy
//!
//!   L = 1 + x^2/2 - sqrt(x^4/4 + 1 - x^2 (D - 1))
//!   I = L^2 / x^2
//!   S = D^2 / (1 + D)
//!   P = x^2 D + (x^2/2) D^2
//!   H = (Q(x^2 (1+D)^3) - x^2 (1+D)^3) / (2 (1 + D))
//!   D = L + S + P + H
//!
//! where Q is the triangulation counting series. Simple networks (rootings
//! of simple graphs) satisfy Ns = H + (x^2/2) D^2 + I + (S - L^2), and the
//! edge-rooted connected class is C-dot = Ns / 3.
//!
//! The solver supports a coefficient scale: with scale s, the stored
//! coefficient of x^n is s^n times the true one. Float tables are solved at
//! s = rho (the radius of convergence) so that coefficients decay like
//! n^(-5/2) instead of overflowing f64 near order 620, and so that they feed
//! size-distribution tables directly.

use crate::error::{CpgError, Result};
use crate::series::coeff::Coeff;
use crate::series::power_series::{Parity, PowerSeries};
use crate::series::triangulation;

/// All grammar series at a common truncation order.
#[derive(Debug, Clone)]
pub struct GrammarTable<C: Coeff> {
    /// Truncation order in the vertex variable.
    pub order: usize,
    /// Coefficient scale: stored coefficient of x^n is scale^n * [x^n]F.
    /// Exact mode uses scale 1 (represented by `scale_sq` = 1).
    pub scale_sq: C,
    /// Triangulation counting series Q in its own size variable z, stored
    /// at the scale 27/256 (its singular point): coefficient k is
    /// q_k (27/256)^k. The grammar composition does not read this table;
    /// it is kept for oracles and the core-size sampler.
    pub q: PowerSeries<C>,
    /// Tree series U with U(1-U)^3 = z, at the same 27/256 scale.
    pub u: PowerSeries<C>,
    pub d: PowerSeries<C>,
    pub l: PowerSeries<C>,
    pub i: PowerSeries<C>,
    pub s: PowerSeries<C>,
    pub p: PowerSeries<C>,
    pub h: PowerSeries<C>,
    /// Simple networks.
    pub ns: PowerSeries<C>,
    /// Edge-rooted connected cubic planar graphs, C-dot = Ns / 3.
    pub cdot: PowerSeries<C>,
}

/// Q evaluated on an even series W with W(0) = 0, via the tree series:
/// V solves V(1-V)^3 = W, and Q(W) = V(1-2V). Returns (Q(W), V).
fn q_of<C: Coeff>(w: &PowerSeries<C>) -> Result<(PowerSeries<C>, PowerSeries<C>)> {
    let order = w.order();
    let one = PowerSeries::constant(C::one(), order);
    let four = PowerSeries::constant(C::from_ratio(4, 1), order);
    let two = PowerSeries::constant(C::from_ratio(2, 1), order);
    let mut v = PowerSeries::zeros(order);
    let steps = usize::BITS - order.max(1).leading_zeros() + 2;
    for _ in 0..steps {
        let one_minus = one.sub(&v);
        let residual = v.mul(&one_minus.pow(3)).sub(w);
        let derivative = one_minus.pow(2).mul(&one.sub(&four.mul(&v)));
        v = v.sub(&residual.div(&derivative)?);
    }
    let qw = v.mul(&one.sub(&two.mul(&v)));
    Ok((qw, v))
}

/// Pieces shared between the grammar map and its derivative.
struct GrammarParts<C: Coeff> {
    sqrt_g: PowerSeries<C>,
    one_plus_d: PowerSeries<C>,
    w: PowerSeries<C>,
    qw: PowerSeries<C>,
    v: PowerSeries<C>,
}

fn grammar_parts<C: Coeff>(d: &PowerSeries<C>, scale_sq: &C) -> Result<GrammarParts<C>> {
    let order = d.order();
    let one = PowerSeries::constant(C::one(), order);
    let x2 = PowerSeries::monomial(scale_sq.clone(), 2, order);
    let quarter = PowerSeries::constant(C::from_ratio(1, 4), order);

    // g = x^4/4 + 1 - x^2 (D - 1)
    let g = x2
        .mul(&x2)
        .mul(&quarter)
        .add(&one)
        .sub(&x2.mul(&d.sub(&one)));
    let sqrt_g = g.sqrt()?;
    let one_plus_d = one.add(d);
    let w = x2.mul(&one_plus_d.pow(3));
    let (qw, v) = q_of(&w)?;
    Ok(GrammarParts {
        sqrt_g,
        one_plus_d,
        w,
        qw,
        v,
    })
}

/// One application of the grammar map Phi with D as input:
/// Phi(D) = L + S + P + H expressed through D.
fn phi<C: Coeff>(d: &PowerSeries<C>, scale_sq: &C) -> Result<PowerSeries<C>> {
    let order = d.order();
    let one = PowerSeries::constant(C::one(), order);
    let half = PowerSeries::constant(C::from_ratio(1, 2), order);
    let x2 = PowerSeries::monomial(scale_sq.clone(), 2, order);
    let parts = grammar_parts(d, scale_sq)?;

    let l = one.add(&x2.mul(&half)).sub(&parts.sqrt_g);
    let s = d.mul(d).div(&parts.one_plus_d)?;
    let p = x2.mul(d).add(&x2.mul(&half).mul(&d.mul(d)));
    let h = parts
        .qw
        .sub(&parts.w)
        .div(&parts.one_plus_d)?
        .mul(&half);
    Ok(l.add(&s).add(&p).add(&h))
}

/// Derivative of Phi with respect to D (as a series in x).
fn phi_derivative<C: Coeff>(d: &PowerSeries<C>, scale_sq: &C) -> Result<PowerSeries<C>> {
    let order = d.order();
    let one = PowerSeries::constant(C::one(), order);
    let two = PowerSeries::constant(C::from_ratio(2, 1), order);
    let half = PowerSeries::constant(C::from_ratio(1, 2), order);
    let three = PowerSeries::constant(C::from_ratio(3, 1), order);
    let x2 = PowerSeries::monomial(scale_sq.clone(), 2, order);
    let parts = grammar_parts(d, scale_sq)?;

    // dL/dD = x^2 / (2 sqrt g)
    let dl = x2.div(&parts.sqrt_g.mul(&two))?;
    // dS/dD = (D^2 + 2D) / (1 + D)^2
    let ds = d
        .mul(d)
        .add(&two.mul(d))
        .div(&parts.one_plus_d.pow(2))?;
    // dP/dD = x^2 + x^2 D
    let dp = x2.add(&x2.mul(d));
    // dH/dD with Q'(W) = 1/(1 - V)^2 and dW/dD = 3 x^2 (1+D)^2
    let q_prime = one.div(&one.sub(&parts.v).pow(2))?;
    let dw = three.mul(&x2).mul(&parts.one_plus_d.pow(2));
    let dh = q_prime
        .sub(&one)
        .mul(&dw)
        .mul(&parts.one_plus_d)
        .sub(&parts.qw.sub(&parts.w))
        .div(&parts.one_plus_d.pow(2))?
        .mul(&half);
    Ok(dl.add(&ds).add(&dp).add(&dh))
}

/// Builds the full table from a D series solved with two orders of headroom
/// (`d.order() == order + 2`), needed because I = L^2 / x^2 loses two orders.
fn table_from_d<C: Coeff>(
    d: PowerSeries<C>,
    scale_sq: C,
    order: usize,
) -> Result<GrammarTable<C>> {
    let work = d.order();
    let one = PowerSeries::constant(C::one(), work);
    let half = PowerSeries::constant(C::from_ratio(1, 2), work);
    let x2 = PowerSeries::monomial(scale_sq.clone(), 2, work);
    let third = C::from_ratio(1, 3);
    let parts = grammar_parts(&d, &scale_sq)?;

    let l = one.add(&x2.mul(&half)).sub(&parts.sqrt_g);
    let s = d.mul(&d).div(&parts.one_plus_d)?;
    let p = x2.mul(&d).add(&x2.mul(&half).mul(&d.mul(&d)));
    let h = parts
        .qw
        .sub(&parts.w)
        .div(&parts.one_plus_d)?
        .mul(&half);
    // I = L^2 / x^2; with scale s the stored series must additionally be
    // divided by s^2 because I has two fewer vertices than L^2.
    let l2 = l.mul(&l);
    let i = l2
        .shift_down(2)?
        .truncated(order)
        .scale(&C::one().div(&scale_sq));
    let ns = h
        .add(&x2.mul(&half).mul(&d.mul(&d)))
        .add(&i.truncated(work))
        .add(&s.sub(&l2));
    let cdot = ns.scale(&third);

    let d = d.truncated(order);
    let l = l.truncated(order);
    let i = i.truncated(order);
    let s = s.truncated(order);
    let p = p.truncated(order);
    let h = h.truncated(order);
    let ns = ns.truncated(order);
    let cdot = cdot.truncated(order);

    for (name, series) in [
        ("D", &d),
        ("L", &l),
        ("I", &i),
        ("S", &s),
        ("P", &p),
        ("H", &h),
        ("Ns", &ns),
    ] {
        if series.clone().with_checked_parity().parity() != Parity::Even {
            return Err(CpgError::Series(format!(
                "grammar series {name} has odd-power support"
            )));
        }
    }

    let tau = C::from_ratio(27, 256);
    let q = triangulation::triangulation_series(order, &tau)?;
    let u = if order < 128 {
        triangulation::u_series_fixed_point(order, &tau)?
    } else {
        triangulation::u_series_newton(order, &tau)?
    };

    Ok(GrammarTable {
        order,
        scale_sq,
        q,
        u,
        d,
        l,
        i,
        s,
        p,
        h,
        ns,
        cdot,
    })
}

/// Solves the grammar by plain fixed-point iteration from the zero series,
/// running exactly `order + 2` sweeps. Each production adds at least two
/// vertices, so this is more than enough sweeps; the count is fixed for
/// reproducibility.
pub fn solve_grammar_fixed_point<C: Coeff>(order: usize, scale_sq: C) -> Result<GrammarTable<C>> {
    let work = order + 2;
    let mut d = PowerSeries::zeros(work);
    for _ in 0..work + 2 {
        d = phi(&d, &scale_sq)?;
    }
    let residual = phi(&d, &scale_sq)?.sub(&d);
    if residual.valuation().is_some() {
        return Err(CpgError::NoConvergence(
            "fixed-point grammar iteration did not stabilize".into(),
        ));
    }
    table_from_d(d, scale_sq, order)
}

/// Solves the grammar by Newton iteration with order doubling.
///
/// D_{k+1} = D_k - (Phi(D_k) - D_k) / (Phi'(D_k) - 1), run at truncation
/// orders 4, 8, 16, ..., order. This is the default path; it matches the
/// fixed-point solver coefficient for coefficient and is the only tractable
/// route to float tables of order ~10^3 and exact tables of order ~10^2.
pub fn solve_grammar_newton<C: Coeff>(order: usize, scale_sq: C) -> Result<GrammarTable<C>> {
    let work = order + 2;
    let one = PowerSeries::constant(C::one(), work);
    let mut d = PowerSeries::zeros(4.min(work));
    let mut m = d.order();
    loop {
        d = d.truncated(m);
        let step = phi(&d, &scale_sq)?
            .sub(&d)
            .div(&phi_derivative(&d, &scale_sq)?.sub(&one.truncated(m)))?;
        d = d.sub(&step);
        if m == work {
            // One extra full-order step guards the valuation bookkeeping.
            let step = phi(&d, &scale_sq)?
                .sub(&d)
                .div(&phi_derivative(&d, &scale_sq)?.sub(&one))?;
            d = d.sub(&step);
            break;
        }
        m = (2 * m).min(work);
    }
    d = d.with_checked_parity();
    table_from_d(d, scale_sq, order)
}

impl GrammarTable<f64> {
    /// Maximum relative plug-back residual |Phi(D) - D| / |D| over nonzero
    /// coefficients. A solved float table keeps this below 1e-12.
    pub fn plug_back_residual(&self) -> f64 {
        let image = match phi(&self.d, &self.scale_sq) {
            Ok(s) => s,
            Err(_) => return f64::INFINITY,
        };
        let mut worst = 0.0f64;
        for n in 0..=self.order {
            let d = self.d.coeff(n);
            if d != 0.0 {
                worst = worst.max((image.coeff(n) - d).abs() / d.abs());
            }
        }
        worst
    }
}

/// The size law of the components hanging off a polyhedral core.
///
/// For the Boltzmann model at the radius rho, a core edge carries an empty
/// component with probability 1/(1 + D(rho)) and a D-network with n vertices
/// with probability rho^n [x^n]D / (1 + D(rho)). `d0` is D(rho) from the
/// singular-constant solver; the table must be solved at scale rho so its
/// stored coefficients are exactly rho^n [x^n]D.
#[derive(Debug, Clone)]
pub struct YLaw {
    /// probs[k] = P(Y = k); odd entries are zero, probs[0] = 1/(1+D(rho)).
    pub probs: Vec<f64>,
    /// Mass beyond the table, assigned to the analytic n^(-5/2) tail.
    pub tail_mass: f64,
    /// E[Y] = rho D'(rho) / (1 + D(rho)), supplied exactly by the caller.
    pub mean: f64,
}

/// Tabulates P(Y = n) for n = 0..=max_n from a rho-scaled float table.
pub fn evaluate_y_law(table: &GrammarTable<f64>, d0: f64, mean: f64, max_n: usize) -> Result<YLaw> {
    if table.scale_sq == 1.0 {
        return Err(CpgError::Unsupported(
            "Y-law requires a table solved at the singular radius scale".into(),
        ));
    }
    if max_n > table.order {
        return Err(CpgError::Unsupported(format!(
            "Y-law table request {max_n} exceeds truncation order {}",
            table.order
        )));
    }
    let norm = 1.0 + d0;
    let mut probs = Vec::with_capacity(max_n + 1);
    probs.push(1.0 / norm);
    for n in 1..=max_n {
        probs.push(table.d.coeff(n) / norm);
    }
    let tail_mass = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    Ok(YLaw {
        probs,
        tail_mass,
        mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        <BigRational as Coeff>::from_ratio(n, d)
    }

    #[test]
    fn small_exact_coefficients() {
        let t: GrammarTable<BigRational> = solve_grammar_newton(12, rat(1, 1)).unwrap();
        // The only 4-vertex networks are the 12 rootings of K4.
        assert_eq!(t.d.coeff(4), rat(1, 2));
        assert_eq!(t.h.coeff(4), rat(1, 2));
        assert_eq!(t.s.coeff(4), rat(0, 1));
        assert_eq!(t.p.coeff(4), rat(0, 1));
        assert_eq!(t.l.coeff(4), rat(0, 1));
        // Edge-rooted connected graphs: 4 at n=4 (4 = 4! * 1/6),
        // 360 at n=6 (6 * 60 labelled graphs = 6! * 1/2).
        assert_eq!(t.cdot.coeff(4), rat(1, 6));
        assert_eq!(t.cdot.coeff(6), rat(1, 2));
        // Smallest loop network has 6 vertices; 6!/4 = 180 of them.
        assert_eq!(t.l.coeff(6), rat(1, 4));
        // Smallest isthmus network has 10 vertices: two loop ends joined by
        // a bridge, [x^10]I = ([x^6]L)^2 = 1/16.
        assert_eq!(t.i.valuation(), Some(10));
        assert_eq!(t.i.coeff(10), rat(1, 16));
    }

    #[test]
    fn fixed_point_matches_newton() {
        let a: GrammarTable<BigRational> = solve_grammar_fixed_point(20, rat(1, 1)).unwrap();
        let b: GrammarTable<BigRational> = solve_grammar_newton(20, rat(1, 1)).unwrap();
        assert_eq!(a.d, b.d);
        assert_eq!(a.ns, b.ns);
    }

    #[test]
    fn float_matches_exact_at_unit_scale() {
        let exact: GrammarTable<BigRational> = solve_grammar_newton(40, rat(1, 1)).unwrap();
        let float: GrammarTable<f64> = solve_grammar_newton(40, 1.0).unwrap();
        for n in 0..=40 {
            let e = Coeff::to_f64(&exact.d.coeff(n));
            let f = float.d.coeff(n);
            let tol = 1e-12 * e.abs().max(1.0);
            assert!((e - f).abs() < tol, "n={n}: {e} vs {f}");
        }
    }

    #[test]
    fn float_plug_back_residual_is_tiny() {
        let t: GrammarTable<f64> = solve_grammar_newton(200, 0.319224606195452700761429068280_f64.powi(2)).unwrap();
        assert!(t.plug_back_residual() < 1e-12);
    }

    #[test]
    fn all_series_nonnegative_in_float_mode() {
        let t: GrammarTable<f64> = solve_grammar_newton(120, 0.1019043258_f64).unwrap();
        for s in [&t.d, &t.l, &t.i, &t.s, &t.p, &t.h, &t.ns] {
            for n in 0..=120 {
                assert!(s.coeff(n) >= -1e-18, "negative coefficient at {n}");
            }
        }
    }
}
