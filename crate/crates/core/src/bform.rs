//! Checks behind the nonvanishing of the second fundamental form pairing on
//! triangle unfoldings.
//!
//! [`epsilon_profile`] computes the exponents `eps_i` that appear when the
//! product of two eigenforms is written against `omega^2`, and checks their
//! integrality constraints exactly. [`planar_integral`] evaluates
//!
//! ```text
//!   I = int_C z^e1 (z - 1)^e2 |z|^(2 a1 - 2) |z - 1|^(2 a2 - 2) dA
//! ```
//!
//! to a requested absolute tolerance, and [`nonvanishing_check`] decides
//! `I != 0` from the value and its error estimate.
//!
//! The plane is cut into five pieces: discs of radius 1/2 about 0 and 1
//! (polar coordinates, radial variable `u = r^(2a)` so the weight becomes
//! constant), the annulus `1/2 <= |z| <= 3/2` with the disc about 1 removed,
//! the annulus `3/2 <= |z| <= 2`, and `|z| > 2`, integrated in `w = 1/z`.
//! Every piece integrates over the angle first. When one `e_i` is 1 and
//! `a1 + a2 >= 1/2` the integrand is only conditionally integrable at
//! infinity, and the angle-first order computes the limit over discs
//! `|z| < R`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::angle::{t_component, t_total, AngleSystem};
use crate::error::{Error, Result};
use crate::quad::{adaptive, periodic, Adaptive, Budget, Estimate};

/// Exponents `eps_i = 2 - 2 t_i(1) - t_i(-a) - t_i(-b)` with `b = 2 - a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpsilonProfile {
    pub a: u64,
    pub b: u64,
    pub eps: Vec<i64>,
}

impl EpsilonProfile {
    pub fn sum(&self) -> i64 {
        self.eps.iter().sum()
    }
}

/// Computes the exponent profile of the pair `(a, 2 - a)` and verifies:
/// every `eps_i` is in `{-1, 0, 1}`; `sum eps_i = 4 - t(-a) - t(-b)`;
/// `eps_i = -1` only at angles of at least `pi/2`; and the sum is 0 for
/// triangles.
pub fn epsilon_profile(sys: &AngleSystem, a: i64) -> Result<EpsilonProfile> {
    sys.require_triangle()?;
    let a = sys.residue(a);
    let b = sys.residue(2 - a as i64);
    if a == 0 {
        return Err(Error::Hypothesis("a is 0 mod k".into()));
    }
    if b == 0 {
        return Err(Error::Hypothesis(format!("b = 2 - {a} is 0 mod k")));
    }
    let ta = t_total(sys, -(a as i64));
    let tb = t_total(sys, -(b as i64));
    if ta <= 1 {
        return Err(Error::Hypothesis(format!("t(-{a}) = {ta} is not > 1")));
    }
    if tb <= 1 {
        return Err(Error::Hypothesis(format!("t(-{b}) = {tb} is not > 1")));
    }

    let eps: Vec<i64> = (0..sys.n())
        .map(|i| {
            let e = Ratio::from_integer(2)
                - t_component(sys, i, 1) * 2
                - t_component(sys, i, -(a as i64))
                - t_component(sys, i, -(b as i64));
            if e.is_integer() {
                Ok(e.to_integer())
            } else {
                Err(Error::Invariant(format!(
                    "eps_{i} = {e} is not an integer for {sys}, a = {a}"
                )))
            }
        })
        .collect::<Result<_>>()?;

    let k = sys.k();
    for (i, (&e, &q)) in eps.iter().zip(sys.q()).enumerate() {
        if !(-1..=1).contains(&e) {
            return Err(Error::Invariant(format!(
                "eps_{i} = {e} outside {{-1, 0, 1}} for {sys}, a = {a}"
            )));
        }
        if e == -1 && 2 * q < k {
            return Err(Error::Invariant(format!(
                "eps_{i} = -1 at the acute angle {q}/{k} pi for {sys}, a = {a}"
            )));
        }
    }
    let sum: i64 = eps.iter().sum();
    if sum != 4 - ta as i64 - tb as i64 {
        return Err(Error::Invariant(format!(
            "sum of eps is {sum}, expected 4 - {ta} - {tb} for {sys}, a = {a}"
        )));
    }
    if sum != 0 {
        return Err(Error::Invariant(format!(
            "sum of eps is {sum} for the triangle {sys}"
        )));
    }
    Ok(EpsilonProfile { a, b, eps })
}

/// All `a` in `1..k` for which [`epsilon_profile`] has its hypotheses met.
pub fn admissible_residues(sys: &AngleSystem) -> Vec<u64> {
    (1..sys.k())
        .filter(|&a| {
            let b = sys.residue(2 - a as i64);
            b != 0 && t_total(sys, -(a as i64)) > 1 && t_total(sys, -(b as i64)) > 1
        })
        .collect()
}

/// Parameters of the planar integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntegralParams {
    pub alpha1: Ratio<i64>,
    pub alpha2: Ratio<i64>,
    pub eps1: u8,
    pub eps2: u8,
}

impl IntegralParams {
    /// Requires `0 < alpha_i < 1/2`, `eps_i` in `{0, 1}` and at most one
    /// `eps_i` nonzero.
    pub fn new(alpha1: Ratio<i64>, alpha2: Ratio<i64>, eps1: u8, eps2: u8) -> Result<Self> {
        let half = Ratio::new(1, 2);
        for (name, a) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if a <= Ratio::from_integer(0) || a >= half {
                return Err(Error::QuadratureParams(format!(
                    "{name} = {a} is not in (0, 1/2)"
                )));
            }
        }
        if eps1 > 1 || eps2 > 1 {
            return Err(Error::QuadratureParams(format!(
                "eps must be 0 or 1, got ({eps1}, {eps2})"
            )));
        }
        if eps1 == 1 && eps2 == 1 {
            return Err(Error::QuadratureParams(
                "integrand is not integrable with both eps nonzero".into(),
            ));
        }
        Ok(IntegralParams {
            alpha1,
            alpha2,
            eps1,
            eps2,
        })
    }

    fn a1(&self) -> f64 {
        self.alpha1.to_f64().expect("small rational")
    }

    fn a2(&self) -> f64 {
        self.alpha2.to_f64().expect("small rational")
    }

    /// The same integral after `z -> 1 - z`, up to the sign `(-1)^(e1 + e2)`.
    pub fn swapped(&self) -> IntegralParams {
        IntegralParams {
            alpha1: self.alpha2,
            alpha2: self.alpha1,
            eps1: self.eps2,
            eps2: self.eps1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    pub error_estimate: f64,
    pub regions_evaluated: usize,
    pub evaluations: usize,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

impl QuadratureResult {
    /// `|value| > 10 * error_estimate`.
    pub fn is_nonvanishing(&self) -> bool {
        self.value.norm() > 10.0 * self.error_estimate
    }
}

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_BUDGET: usize = 10_000_000;

/// Evaluates the planar integral to absolute tolerance `tol`.
pub fn planar_integral(params: &IntegralParams, tol: f64) -> Result<QuadratureResult> {
    planar_integral_with_budget(params, tol, DEFAULT_BUDGET)
}

pub fn planar_integral_with_budget(
    params: &IntegralParams,
    tol: f64,
    budget: usize,
) -> Result<QuadratureResult> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::QuadratureParams(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let budget = Budget::new(budget);
    let integrand = Integrand::new(params);
    // each piece gets a tenth of the tolerance, inner angular errors included
    let outer = tol / 10.0;
    let pieces = [
        integrand.disc_at_zero(outer, &budget),
        integrand.disc_at_one(outer, &budget),
        integrand.punctured_annulus(outer, &budget),
        integrand.outer_annulus(outer, &budget),
        integrand.exterior(outer, &budget),
    ];
    let total = pieces
        .iter()
        .fold(Estimate::default(), |acc, p| acc + p.estimate);
    let regions = pieces.iter().map(|p| p.panels).sum();
    if total.error > tol {
        return Err(Error::BudgetExhausted {
            tol,
            budget: budget.used(),
            value_re: total.value.re,
            value_im: total.value.im,
            error: total.error,
        });
    }
    Ok(QuadratureResult {
        value: total.value,
        error_estimate: total.error,
        regions_evaluated: regions,
        evaluations: budget.used(),
    })
}

/// Evaluates the integral and reports whether it is certifiably nonzero.
pub fn nonvanishing_check(params: &IntegralParams, tol: f64) -> Result<bool> {
    Ok(planar_integral(params, tol)?.is_nonvanishing())
}

struct Integrand {
    a1: f64,
    a2: f64,
    e1: i32,
    e2: i32,
}

fn polar(r: f64, phi: f64) -> Complex64 {
    Complex64::from_polar(r, phi)
}

/// `z^e` for `e` in `{0, 1}`.
fn spin(z: Complex64, e: i32) -> Complex64 {
    if e == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        z
    }
}

impl Integrand {
    fn new(p: &IntegralParams) -> Self {
        Integrand {
            a1: p.a1(),
            a2: p.a2(),
            e1: p.eps1 as i32,
            e2: p.eps2 as i32,
        }
    }

    /// The full integrand at `z`.
    fn eval(&self, z: Complex64) -> Complex64 {
        let zm1 = z - 1.0;
        spin(z, self.e1)
            * spin(zm1, self.e2)
            * (z.norm_sqr().powf(self.a1 - 1.0) * zm1.norm_sqr().powf(self.a2 - 1.0))
    }

    /// `|z| < 1/2` with `u = r^(2 a1)`.
    fn disc_at_zero(&self, tol: f64, budget: &Budget) -> Adaptive {
        let p = 2.0 * self.a1;
        let upper = 0.5f64.powf(p);
        let inner_tol = tol * p / (4.0 * upper);
        let mut radial = |u: f64| {
            let r = u.powf(1.0 / p);
            let ang = periodic(
                &mut |phi| {
                    let z = polar(r, phi);
                    let zm1 = z - 1.0;
                    spin(z, self.e1) * spin(zm1, self.e2) * zm1.norm_sqr().powf(self.a2 - 1.0)
                },
                inner_tol,
                budget,
            );
            scale(ang, 1.0 / p)
        };
        adaptive(&mut radial, 0.0, upper, tol, budget)
    }

    /// `|z - 1| < 1/2` with `z = 1 + w` and `u = |w|^(2 a2)`.
    fn disc_at_one(&self, tol: f64, budget: &Budget) -> Adaptive {
        let p = 2.0 * self.a2;
        let upper = 0.5f64.powf(p);
        let inner_tol = tol * p / (4.0 * upper);
        let mut radial = |u: f64| {
            let r = u.powf(1.0 / p);
            let ang = periodic(
                &mut |phi| {
                    let w = polar(r, phi);
                    let z = w + 1.0;
                    spin(z, self.e1) * spin(w, self.e2) * z.norm_sqr().powf(self.a1 - 1.0)
                },
                inner_tol,
                budget,
            );
            scale(ang, 1.0 / p)
        };
        adaptive(&mut radial, 0.0, upper, tol, budget)
    }

    /// `1/2 <= |z| <= 3/2` outside the disc about 1, with `r = 1 - cos(t)/2`
    /// so the arc endpoints move smoothly in `t`.
    fn punctured_annulus(&self, tol: f64, budget: &Budget) -> Adaptive {
        let inner_tol = tol / (4.0 * PI);
        let mut radial = |t: f64| {
            let r = 1.0 - 0.5 * t.cos();
            let jac = 0.5 * t.sin() * r;
            let c = ((r * r + 0.75) / (2.0 * r)).clamp(-1.0, 1.0);
            let phi0 = c.acos();
            let mut f = |phi: f64| Estimate::exact(self.eval(polar(r, phi)));
            let arc = adaptive(&mut f, phi0, TAU - phi0, inner_tol, budget).estimate;
            scale(arc, jac)
        };
        adaptive(&mut radial, 0.0, PI, tol, budget)
    }

    /// `3/2 <= |z| <= 2`.
    fn outer_annulus(&self, tol: f64, budget: &Budget) -> Adaptive {
        let inner_tol = tol / 4.0;
        let mut radial = |r: f64| {
            let ang = periodic(&mut |phi| self.eval(polar(r, phi)), inner_tol, budget);
            scale(ang, r)
        };
        adaptive(&mut radial, 1.5, 2.0, tol, budget)
    }

    /// `|z| > 2` as `|w| < 1/2` with `w = 1/z`. There the integrand is
    /// `w^-e (1 - w)^e2 |1 - w|^(2 a2 - 2) |w|^(-2 a1 - 2 a2) dA(w)`; the
    /// radial weight is absorbed by `u = rho^(2 - 2 a1 - 2 a2)`. For `e = 1`
    /// the constant term of `(1 - w)^e2 |1 - w|^(2 a2 - 2)`, which
    /// integrates to zero against `w^-1` over every circle, is subtracted
    /// before dividing by `rho`.
    fn exterior(&self, tol: f64, budget: &Budget) -> Adaptive {
        let e = self.e1 + self.e2;
        let beta = 2.0 - 2.0 * (self.a1 + self.a2);
        let upper = 0.5f64.powf(beta);
        let inner_tol = tol * beta / (4.0 * upper);
        let mut radial = |u: f64| {
            let rho = u.powf(1.0 / beta);
            let ang = periodic(
                &mut |psi| {
                    let w = polar(rho, psi);
                    if e == 0 {
                        let one_minus = Complex64::new(1.0, 0.0) - w;
                        spin(one_minus, self.e2) * one_minus.norm_sqr().powf(self.a2 - 1.0)
                    } else {
                        polar(1.0, -psi) * self.h_minus_one(w, rho, psi)
                    }
                },
                inner_tol * rho.powi(e),
                budget,
            );
            scale(ang, 1.0 / (beta * rho.powi(e)))
        };
        adaptive(&mut radial, 0.0, upper, tol, budget)
    }
}

impl Integrand {
    /// `(1 - w)^e2 |1 - w|^(2 a2 - 2) - 1`, free of cancellation for small `w`.
    fn h_minus_one(&self, w: Complex64, rho: f64, psi: f64) -> Complex64 {
        let x = rho * (rho - 2.0 * psi.cos());
        let em1 = ((self.a2 - 1.0) * x.ln_1p()).exp_m1();
        if self.e2 == 0 {
            Complex64::new(em1, 0.0)
        } else {
            (Complex64::new(1.0, 0.0) - w) * em1 - w
        }
    }
}

fn scale(e: Estimate, s: f64) -> Estimate {
    Estimate {
        value: e.value * s,
        error: e.error * s.abs(),
    }
}

/// Direct evaluation of the integrand, for spot checks.
pub fn integrand_at(params: &IntegralParams, z: Complex64) -> Complex64 {
    Integrand::new(params).eval(z)
}
