//! Truncated Laurent series about a fixed point `w` of the unit disk.
//!
//! [`FpSeries`] is the canonical class object `1/(z-w) + Σ_{n=k}^{N} a_n (z-w)^n`
//! with real `a_n >= 0`. [`GeneralSeries`] drops those restrictions and is
//! closed under differentiation; it carries derivatives and intermediates of
//! the operator recurrence.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Scalar};

/// Default cap on the highest stored index.
pub const DEFAULT_MAX_TRUNC: u32 = 64;
/// Hard cap; configurable caps may not exceed this.
pub const HARD_MAX_TRUNC: u32 = 256;
/// `|z - w|` below this is treated as evaluation at the pole.
pub const POLE_TOLERANCE: f64 = 1e-14;
/// Convex weights must sum to one within this.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;
/// Coefficient-wise tolerance for series equality.
pub const EQ_TOLERANCE: f64 = 1e-12;

/// Truncated series `1/(z-w) + Σ_{n=k}^{N} a_n (z-w)^n` with `a_n >= 0`.
///
/// The principal coefficient is an implicit 1. Indices below `k` are the
/// missing coefficients and are never stored. Absent indices in `[k, N]`
/// read as zero.
#[derive(Clone, Debug, PartialEq)]
pub struct FpSeries<T> {
    w: Complex<T>,
    k: u32,
    trunc: u32,
    coeffs: BTreeMap<u32, T>,
}

impl<T: Scalar> FpSeries<T> {
    /// Builds a validated series under the default truncation cap. The
    /// truncation order is the largest stored index, or `k` for an empty tail.
    pub fn new(w: Complex<T>, k: u32, coeffs: impl IntoIterator<Item = (u32, T)>) -> Result<Self> {
        Self::with_trunc(w, k, None, coeffs, DEFAULT_MAX_TRUNC)
    }

    /// Builds a validated series with an explicit truncation order and cap.
    /// `cap` is clamped to [`HARD_MAX_TRUNC`].
    pub fn with_trunc(
        w: Complex<T>,
        k: u32,
        trunc: Option<u32>,
        coeffs: impl IntoIterator<Item = (u32, T)>,
        cap: u32,
    ) -> Result<Self> {
        check_fixed_point(w)?;
        if k == 0 {
            return Err(Error::ZeroK);
        }
        let mut map = BTreeMap::new();
        for (n, a) in coeffs {
            if !a.is_finite() || a < T::zero() {
                return Err(Error::NegativeCoefficient {
                    index: n,
                    value: a.as_f64(),
                });
            }
            if n < k {
                return Err(Error::IndexBelowK { index: n, k });
            }
            map.insert(n, a);
        }
        let top = map.keys().next_back().copied().unwrap_or(k);
        let trunc = match trunc {
            Some(t) if t < top => {
                return Err(Error::IndexAboveTrunc {
                    index: top,
                    trunc: t,
                })
            }
            Some(t) => t,
            None => top,
        };
        let cap = cap.min(HARD_MAX_TRUNC);
        if trunc > cap {
            return Err(Error::TruncTooLarge { trunc, cap });
        }
        Ok(Self {
            w,
            k,
            trunc,
            coeffs: map,
        })
    }

    /// The bare principal part `1/(z-w)`.
    pub fn principal(w: Complex<T>, k: u32) -> Result<Self> {
        Self::new(w, k, std::iter::empty())
    }

    pub fn w(&self) -> Complex<T> {
        self.w
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    /// Stored tail coefficients in ascending index order.
    pub fn coeffs(&self) -> &BTreeMap<u32, T> {
        &self.coeffs
    }

    pub fn coeff(&self, n: u32) -> T {
        self.coeffs.get(&n).copied().unwrap_or_else(T::zero)
    }

    pub fn is_principal_only(&self) -> bool {
        self.coeffs.values().all(|a| a.is_zero())
    }

    /// Applies a diagonal transform `a_n -> g(n, a_n)` to the tail, keeping
    /// `w`, `k`, `trunc` and the support. The caller guarantees `g` maps
    /// nonnegative finite values to nonnegative finite values.
    pub(crate) fn map_tail(&self, mut g: impl FnMut(u32, T) -> T) -> Self {
        Self {
            w: self.w,
            k: self.k,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|(&n, &a)| (n, g(n, a))).collect(),
        }
    }

    /// Widens the series to a [`GeneralSeries`] with explicit principal part.
    pub fn to_general(&self) -> GeneralSeries<T> {
        let mut g = GeneralSeries::zero(self.w);
        g.add_term(-1, Complex::new(T::one(), T::zero()));
        for (&n, &a) in &self.coeffs {
            g.add_term(n as i32, Complex::new(a, T::zero()));
        }
        g
    }

    pub fn evaluate(&self, z: Complex<T>) -> Result<Complex<T>> {
        let u = offset_in_domain(self.w, z)?;
        let mut acc = Complex::new(T::zero(), T::zero());
        if let Some(&top) = self.coeffs.keys().next_back() {
            for n in (self.k..=top).rev() {
                acc = acc * u + Complex::new(self.coeff(n), T::zero());
            }
            acc = acc * u.powi(self.k as i32);
        }
        Ok(acc + u.inv())
    }

    /// `(z-w) f(z)` as a function of the offset `u = z - w`, i.e.
    /// `1 + Σ a_n u^(n+1)`. Regular at `u = 0`; no domain check.
    pub fn regular_part(&self, u: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        if let Some(&top) = self.coeffs.keys().next_back() {
            for n in (self.k..=top).rev() {
                acc = acc * u + Complex::new(self.coeff(n), T::zero());
            }
            acc = acc * u.powi(self.k as i32 + 1);
        }
        acc + Complex::new(T::one(), T::zero())
    }

    /// Coefficient-wise comparison with identical `w` and `k`.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        if self.w != other.w || self.k != other.k {
            return false;
        }
        self.coeffs
            .keys()
            .chain(other.coeffs.keys())
            .all(|&n| (self.coeff(n) - other.coeff(n)).abs() <= tol)
    }
}

impl<T: Scalar> fmt::Display for FpSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/(z-w)")?;
        for (n, a) in &self.coeffs {
            write!(f, " + {a}(z-w)^{n}")?;
        }
        write!(f, "  [w = {}{:+}i, k = {}]", self.w.re, self.w.im, self.k)
    }
}

/// `Σ_j d_j f_j` for convex weights `d_j` over series sharing one fixed point.
///
/// The principal part stays `1/(z-w)` because the weights sum to one. The
/// result has `k = min k_j` and `trunc = max trunc_j`.
pub fn linear_combine<T: Scalar>(terms: &[(T, &FpSeries<T>)]) -> Result<FpSeries<T>> {
    let (_, first) = terms.first().ok_or(Error::EmptyCombination)?;
    let sum: CompensatedSum<T> = terms.iter().map(|(d, _)| *d).collect();
    let sum = sum.value();
    let bad_weight = terms.iter().any(|(d, _)| !d.is_finite() || *d < T::zero());
    if bad_weight || (sum - T::one()).abs() > T::tol(WEIGHT_TOLERANCE) {
        return Err(Error::WeightsNotConvex { sum: sum.as_f64() });
    }
    if terms.iter().any(|(_, s)| s.w != first.w) {
        return Err(Error::MixedFixedPoints);
    }
    let k = terms.iter().map(|(_, s)| s.k).min().unwrap_or(first.k);
    let trunc = terms
        .iter()
        .map(|(_, s)| s.trunc)
        .max()
        .unwrap_or(first.trunc);
    let mut acc: BTreeMap<u32, CompensatedSum<T>> = BTreeMap::new();
    for (d, s) in terms {
        for (&n, &a) in &s.coeffs {
            acc.entry(n).or_default().add(*d * a);
        }
    }
    Ok(FpSeries {
        w: first.w,
        k,
        trunc,
        coeffs: acc.into_iter().map(|(n, c)| (n, c.value())).collect(),
    })
}

/// Finite Laurent series `Σ_{p=low}^{high} c_p (z-w)^p` with complex
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralSeries<T> {
    w: Complex<T>,
    low: i32,
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> GeneralSeries<T> {
    pub fn zero(w: Complex<T>) -> Self {
        Self {
            w,
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn w(&self) -> Complex<T> {
        self.w
    }

    /// Lowest power with a stored slot (meaningless for the zero series).
    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_zero() && c.im.is_zero())
    }

    /// Coefficient of `(z-w)^p`.
    pub fn coeff(&self, p: i32) -> Complex<T> {
        let i = p - self.low;
        if i < 0 {
            return Complex::new(T::zero(), T::zero());
        }
        self.coeffs
            .get(i as usize)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// Powers carrying a nonzero coefficient, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Complex<T>)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !(c.re.is_zero() && c.im.is_zero()))
            .map(move |(i, &c)| (self.low + i as i32, c))
    }

    /// Adds `c (z-w)^p`, growing storage as needed.
    pub fn add_term(&mut self, p: i32, c: Complex<T>) {
        let zero = Complex::new(T::zero(), T::zero());
        if self.coeffs.is_empty() {
            self.low = p;
            self.coeffs.push(c);
            return;
        }
        if p < self.low {
            let pad = (self.low - p) as usize;
            self.coeffs.splice(0..0, std::iter::repeat_n(zero, pad));
            self.low = p;
        }
        let i = (p - self.low) as usize;
        if i >= self.coeffs.len() {
            self.coeffs.resize(i + 1, zero);
        }
        self.coeffs[i] = self.coeffs[i] + c;
    }

    /// Term-by-term derivative: `c (z-w)^p -> c p (z-w)^(p-1)`.
    pub fn differentiate(&self) -> Self {
        let mut out = Self::zero(self.w);
        for (p, c) in self.terms() {
            if p != 0 {
                out.add_term(p - 1, c * T::lit(p as f64));
            }
        }
        out
    }

    /// Multiplies by `(z-w)^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            w: self.w,
            low: self.low + shift,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            w: self.w,
            low: self.low,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// Sum of two series about the same fixed point.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.w != other.w {
            return Err(Error::MixedFixedPoints);
        }
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.add_term(p, c);
        }
        Ok(out)
    }

    /// Horner evaluation in powers of `z - w`.
    pub fn evaluate(&self, z: Complex<T>) -> Result<Complex<T>> {
        let u = offset_in_domain(self.w, z)?;
        let mut acc = Complex::new(T::zero(), T::zero());
        for &c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        Ok(acc * u.powi(self.low))
    }

    /// Narrows back to the canonical form: principal coefficient 1, no other
    /// negative or zero powers, real nonnegative tail starting at `k` or later.
    /// Imaginary parts and deviations up to `tol` are absorbed.
    pub fn to_fp(&self, k: u32, trunc: u32, tol: T) -> Result<FpSeries<T>> {
        let mut coeffs = BTreeMap::new();
        for (p, c) in self.terms() {
            if c.im.abs() > tol {
                return Err(Error::NotCanonical);
            }
            if p == -1 {
                if (c.re - T::one()).abs() > tol {
                    return Err(Error::NotCanonical);
                }
                continue;
            }
            if p < k as i32 || p > trunc as i32 {
                if c.re.abs() > tol {
                    return Err(Error::NotCanonical);
                }
                continue;
            }
            if c.re < -tol {
                return Err(Error::NotCanonical);
            }
            coeffs.insert(p as u32, c.re.max(T::zero()));
        }
        if (self.coeff(-1).re - T::one()).abs() > tol {
            return Err(Error::NotCanonical);
        }
        Ok(FpSeries {
            w: self.w,
            k,
            trunc,
            coeffs,
        })
    }
}

fn check_fixed_point<T: Scalar>(w: Complex<T>) -> Result<()> {
    let modulus = w.norm();
    if !modulus.is_finite() || modulus >= T::one() {
        return Err(Error::FixedPointOutsideDisk {
            modulus: modulus.as_f64(),
        });
    }
    Ok(())
}

/// `z - w`, checked against the pole and the domain `|z - w| < 1`.
pub(crate) fn offset_in_domain<T: Scalar>(w: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    let u = z - w;
    let r = u.norm();
    if r < T::lit(POLE_TOLERANCE) {
        return Err(Error::EvalAtPole);
    }
    if !(r < T::one()) {
        return Err(Error::OutsideDomain {
            distance: r.as_f64(),
        });
    }
    Ok(u)
}
