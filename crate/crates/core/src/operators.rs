//! The operator `I^m` and the integral operators `H1`, `H2`.
//!
//! All three act diagonally on tail coefficients. `H1` and `H2` also have a
//! quadrature path that integrates their defining integrals directly; it
//! shares no code with the coefficient transforms and serves as their oracle.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature;
use crate::scalar::Scalar;
use crate::series::{offset_in_domain, FpSeries};

/// Largest supported `m`.
pub const MAX_ORDER: u32 = 12;
/// Coefficient multipliers above this trip the overflow guard.
pub const OVERFLOW_LIMIT: f64 = 1e300;
/// Absolute tolerance requested from the quadrature oracles.
pub const ORACLE_TOLERANCE: f64 = 1e-10;
/// Oracle and transform must agree to within this.
pub const AGREEMENT_TOLERANCE: f64 = 1e-8;

/// Order `m` of the operator `I^m`, `0 <= m <= 12`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ImOrder(u32);

impl ImOrder {
    pub fn new(m: u32) -> Result<Self> {
        if m > MAX_ORDER {
            return Err(Error::OrderTooLarge { m, max: MAX_ORDER });
        }
        Ok(Self(m))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// `γ > 1` for `H1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct H1Param<T>(T);

impl<T: Scalar> H1Param<T> {
    pub fn new(gamma: T) -> Result<Self> {
        if !(gamma > T::one()) || !gamma.is_finite() {
            return Err(Error::GammaOutOfRange {
                gamma: gamma.as_f64(),
            });
        }
        Ok(Self(gamma))
    }

    pub fn gamma(self) -> T {
        self.0
    }
}

/// `C >= 1` for `H2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct H2Param<T>(T);

impl<T: Scalar> H2Param<T> {
    pub fn new(c: T) -> Result<Self> {
        if !(c >= T::one()) || !c.is_finite() {
            return Err(Error::COutOfRange { c: c.as_f64() });
        }
        Ok(Self(c))
    }

    pub fn c(self) -> T {
        self.0
    }
}

/// Which coefficient multiplier `H1` uses.
///
/// Integrating the defining integral term by term gives `(γ-1)/(γ+n)`.
/// The published closed form states `1/(γ+n)`; it is kept for comparison
/// runs and is contradicted by the quadrature oracle whenever `γ != 2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum H1Factor {
    #[default]
    Derived,
    PaperStated,
}

impl H1Factor {
    pub fn multiplier<T: Scalar>(self, gamma: T, n: u32) -> T {
        let denom = gamma + T::lit(n as f64);
        match self {
            H1Factor::Derived => (gamma - T::one()) / denom,
            H1Factor::PaperStated => T::one() / denom,
        }
    }
}

fn guarded_power<T: Scalar>(n: u32, m: u32) -> Result<T> {
    let v = T::lit(n as f64).powi(m as i32);
    if !v.is_finite() || v.as_f64() > OVERFLOW_LIMIT {
        return Err(Error::OverflowGuard { index: n });
    }
    Ok(v)
}

/// `I^m f` through its diagonal action `a_n -> n^m a_n`.
pub fn apply_im_closed<T: Scalar>(f: &FpSeries<T>, m: ImOrder) -> Result<FpSeries<T>> {
    let m = m.get();
    if m == 0 {
        return Ok(f.clone());
    }
    for &n in f.coeffs().keys() {
        guarded_power::<T>(n, m)?;
    }
    Ok(f.map_tail(|n, a| T::lit(n as f64).powi(m as i32) * a))
}

/// `I^m f` by iterating `g -> (z-w) g' + 2/(z-w)` on the general series.
pub fn apply_im_recurrence<T: Scalar>(f: &FpSeries<T>, m: ImOrder) -> Result<FpSeries<T>> {
    for &n in f.coeffs().keys() {
        guarded_power::<T>(n, m.get())?;
    }
    let two = Complex::new(T::lit(2.0), T::zero());
    let mut g = f.to_general();
    for _ in 0..m.get() {
        g = g.differentiate().shift(1);
        g.add_term(-1, two);
    }
    let narrowed = g.to_fp(f.k(), f.trunc(), T::tol(1e-12))?;
    if narrowed
        .coeffs()
        .keys()
        .any(|n| !f.coeffs().contains_key(n))
    {
        return Err(Error::NotCanonical);
    }
    Ok(f.map_tail(|n, _| narrowed.coeff(n)))
}

/// `H1 f`, with the multiplier chosen by `factor`.
pub fn apply_h1<T: Scalar>(f: &FpSeries<T>, p: H1Param<T>, factor: H1Factor) -> FpSeries<T> {
    f.map_tail(|n, a| factor.multiplier(p.gamma(), n) * a)
}

/// `H2 f`: `a_n -> C/(C+n+1) a_n`.
pub fn apply_h2<T: Scalar>(f: &FpSeries<T>, p: H2Param<T>) -> FpSeries<T> {
    let c = p.c();
    f.map_tail(|n, a| c / (c + T::lit(n as f64 + 1.0)) * a)
}

/// `(γ-1)/(z-w)^γ ∫_w^z (t-w)^(γ-1) f(t) dt` by adaptive quadrature along
/// the segment from `w` to `z`, principal branches throughout.
///
/// The path is `t = w + s (z-w)`, and `v = s^(γ-1)` removes the integrable
/// `(t-w)^(γ-2)` endpoint behaviour. The Jacobian is formed in log space so
/// that `s` underflowing near `v = 0` (small `γ - 1`) is harmless.
pub fn h1_oracle<T: Scalar>(f: &FpSeries<T>, p: H1Param<T>, z: Complex<T>) -> Result<Complex<T>> {
    let u = offset_in_domain(f.w(), z)?;
    let gamma = p.gamma();
    let gm1 = gamma - T::one();
    let log_u = u.ln();
    // The prefactor (γ-1)/(z-w)^γ goes inside so the tolerance applies to H1 itself.
    let prefactor = (-(log_u * gamma)).exp() * gm1;
    let integrand = |v: T| -> Result<Complex<T>> {
        let ln_v = v.ln();
        let ln_s = ln_v / gm1;
        let log_tw = log_u + Complex::new(ln_s, T::zero());
        let tw = u * ln_s.exp();
        // (t-w)^(γ-1) f(t) dt/dv, with f(t) = R(t)/(t-w) and dt/dv = (t-w)/((γ-1) v)
        let weight = (log_tw * gm1 - Complex::new(ln_v, T::zero())).exp();
        Ok(prefactor * weight * f.regular_part(tw) / gm1)
    };
    let q = quadrature::integrate(integrand, T::zero(), T::one(), T::tol(ORACLE_TOLERANCE))?;
    Ok(q.value)
}

/// `C ∫_0^1 ν^C f(ν(z-w) + w) dν` by adaptive quadrature after `v = ν^C`.
pub fn h2_oracle<T: Scalar>(f: &FpSeries<T>, p: H2Param<T>, z: Complex<T>) -> Result<Complex<T>> {
    let u = offset_in_domain(f.w(), z)?;
    let c = p.c();
    let integrand = |v: T| -> Result<Complex<T>> {
        let ln_v = v.ln();
        let ln_nu = ln_v / c;
        let tw = u * ln_nu.exp();
        // C ν^C f(t) dν/dv, with dν/dv = ν/(C v)
        let weight = (ln_nu * c - ln_v).exp();
        Ok(f.regular_part(tw) / tw * (weight * ln_nu.exp()))
    };
    let q = quadrature::integrate(integrand, T::zero(), T::one(), T::tol(ORACLE_TOLERANCE))?;
    Ok(q.value)
}

/// Outcome of comparing a quadrature oracle with a transformed series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleCheck<T> {
    pub z: Complex<T>,
    pub oracle: Complex<T>,
    pub transform: Complex<T>,
    pub abs_diff: T,
    pub agrees: bool,
}

impl<T: Scalar> OracleCheck<T> {
    fn new(z: Complex<T>, oracle: Complex<T>, transform: Complex<T>) -> Self {
        let abs_diff = (oracle - transform).norm();
        Self {
            z,
            oracle,
            transform,
            abs_diff,
            agrees: abs_diff <= T::tol(AGREEMENT_TOLERANCE),
        }
    }
}

pub fn check_h1<T: Scalar>(
    f: &FpSeries<T>,
    p: H1Param<T>,
    factor: H1Factor,
    z: Complex<T>,
) -> Result<OracleCheck<T>> {
    let oracle = h1_oracle(f, p, z)?;
    let transform = apply_h1(f, p, factor).evaluate(z)?;
    Ok(OracleCheck::new(z, oracle, transform))
}

pub fn check_h2<T: Scalar>(
    f: &FpSeries<T>,
    p: H2Param<T>,
    z: Complex<T>,
) -> Result<OracleCheck<T>> {
    let oracle = h2_oracle(f, p, z)?;
    let transform = apply_h2(f, p).evaluate(z)?;
    Ok(OracleCheck::new(z, oracle, transform))
}

/// Predicted value of `H1_derived f(z) - H1_stated f(z)`:
/// `Σ (γ-2)/(γ+n) a_n (z-w)^n`.
pub fn h1_factor_discrepancy<T: Scalar>(
    f: &FpSeries<T>,
    p: H1Param<T>,
    z: Complex<T>,
) -> Complex<T> {
    let u = z - f.w();
    let gamma = p.gamma();
    f.coeffs()
        .iter()
        .map(|(&n, &a)| {
            let r = (gamma - T::lit(2.0)) / (gamma + T::lit(n as f64)) * a;
            u.powi(n as i32) * r
        })
        .fold(Complex::new(T::zero(), T::zero()), |acc, x| acc + x)
}
