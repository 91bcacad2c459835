//! Membership in the class `M_w(A, B, m)`.
//!
//! Two independent routes: the coefficient functional
//! `phi(f) = Σ n^(m+1) [n(B+1) + A + 2] a_n` compared with `1 + A - B`, and
//! direct sampling of the modulus ratio `|Q + 1| / |B Q + A + 1|` with
//! `Q = 1 + (z-w) g''(z) / g'(z)`, `g = I^m f`.
//!
//! The coefficient bound is necessary for the ratio condition (test along
//! `z - w = r`, `r -> 1`). It is sufficient when `B n + A + 1 >= 0` for every
//! index carrying a positive coefficient; see [`sufficiency_certified`].
//! Outside that region there are coefficient-members whose ratio exceeds 1 at
//! non-real `z - w`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operators::{apply_im_closed, ImOrder, OVERFLOW_LIMIT};
use crate::scalar::{CompensatedSum, Scalar};
use crate::series::{offset_in_domain, FpSeries, GeneralSeries};

/// `phi <= bound + MEMBER_TOLERANCE` counts as a member.
pub const MEMBER_TOLERANCE: f64 = 1e-12;
/// A sample passes when `ratio <= 1 + RATIO_TOLERANCE`.
pub const RATIO_TOLERANCE: f64 = 1e-9;
/// `|g'(z)| < VANISHING_THRESHOLD / |z-w|^2` is reported as a vanishing derivative.
pub const VANISHING_THRESHOLD: f64 = 1e-13;
pub const DEFAULT_RADII: [f64; 4] = [0.5, 0.9, 0.99, 0.999];
pub const DEFAULT_ANGLES: usize = 64;

/// Parameters `(A, B, m)` with `-1 <= B < A < 1` and `A >= 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassParams<T> {
    a: T,
    b: T,
    m: ImOrder,
}

impl<T: Scalar> ClassParams<T> {
    pub fn new(a: T, b: T, m: ImOrder) -> Result<Self> {
        let ok = a.is_finite()
            && b.is_finite()
            && -T::one() <= b
            && b < a
            && a < T::one()
            && a >= T::zero();
        if !ok {
            return Err(Error::InvalidClassParams {
                a: a.as_f64(),
                b: b.as_f64(),
            });
        }
        Ok(Self { a, b, m })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn m(&self) -> ImOrder {
        self.m
    }

    /// Right-hand side `1 + A - B`; always greater than 1.
    pub fn bound(&self) -> T {
        T::one() + self.a - self.b
    }

    /// Weight of `a_n` in the functional: `n^(m+1) [n(B+1) + A + 2]`.
    pub fn weight(&self, n: u32) -> Result<T> {
        let nf = T::lit(n as f64);
        let v =
            nf.powi(self.m.get() as i32 + 1) * (nf * (self.b + T::one()) + self.a + T::lit(2.0));
        if !v.is_finite() || v.as_f64() > OVERFLOW_LIMIT {
            return Err(Error::OverflowGuard { index: n });
        }
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MembershipReport<T> {
    pub phi: T,
    pub bound: T,
    pub margin: T,
    pub member: bool,
}

/// `Σ_{n=k}^{N} n^(m+1) [n(B+1) + A + 2] a_n`, compensated, ascending in `n`.
pub fn phi_functional<T: Scalar>(f: &FpSeries<T>, p: &ClassParams<T>) -> Result<T> {
    let mut acc = CompensatedSum::new();
    for (&n, &a) in f.coeffs() {
        acc.add(p.weight(n)? * a);
    }
    Ok(acc.value())
}

pub fn is_member<T: Scalar>(f: &FpSeries<T>, p: &ClassParams<T>) -> Result<MembershipReport<T>> {
    let phi = phi_functional(f, p)?;
    let bound = p.bound();
    let margin = bound - phi;
    Ok(MembershipReport {
        phi,
        bound,
        margin,
        member: margin >= -T::tol(MEMBER_TOLERANCE),
    })
}

/// `Σ n^(m+1) [n(B+1) + A + 2] a_n r^(n+1) - (1 + A - B)`: the cleared
/// denominator of the ratio condition at real `z - w = r`, valid while the
/// denominator stays positive. Positive means the condition fails at `r`.
pub fn radial_gap<T: Scalar>(f: &FpSeries<T>, p: &ClassParams<T>, r: T) -> Result<T> {
    let mut acc = CompensatedSum::new();
    for (&n, &a) in f.coeffs() {
        acc.add(p.weight(n)? * a * r.powi(n as i32 + 1));
    }
    Ok(acc.value() - p.bound())
}

/// True when `B n + A + 1 >= 0` for every index with a positive coefficient.
/// Under this sign condition the coefficient bound implies the ratio
/// condition at every `0 < |z-w| < 1` (triangle inequality).
pub fn sufficiency_certified<T: Scalar>(f: &FpSeries<T>, p: &ClassParams<T>) -> bool {
    f.coeffs()
        .iter()
        .filter(|(_, a)| **a > T::zero())
        .all(|(&n, _)| p.b * T::lit(n as f64) + p.a + T::one() >= T::zero())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionSample<T> {
    pub z: Complex<T>,
    pub ratio: T,
    pub pass: bool,
}

/// Precomputed `g'` and `g''` for `g = I^m f`; evaluates the ratio at many points.
#[derive(Clone, Debug)]
pub struct ConditionEvaluator<T> {
    params: ClassParams<T>,
    d1: GeneralSeries<T>,
    d2: GeneralSeries<T>,
}

impl<T: Scalar> ConditionEvaluator<T> {
    pub fn new(f: &FpSeries<T>, p: &ClassParams<T>) -> Result<Self> {
        let g = apply_im_closed(f, p.m)?.to_general();
        let d1 = g.differentiate();
        let d2 = d1.differentiate();
        Ok(Self { params: *p, d1, d2 })
    }

    pub fn sample(&self, z: Complex<T>) -> Result<ConditionSample<T>> {
        let u = offset_in_domain(self.d1.w(), z)?;
        let g1 = self.d1.evaluate(z)?;
        let g2 = self.d2.evaluate(z)?;
        if g1.norm() < T::lit(VANISHING_THRESHOLD) / u.norm_sqr() {
            return Err(Error::DerivativeVanishes);
        }
        let one = Complex::new(T::one(), T::zero());
        let q = one + u * g2 / g1;
        let num = (q + one).norm();
        let den = (q * self.params.b + Complex::new(self.params.a + T::one(), T::zero())).norm();
        let ratio = if den.is_zero() {
            if num.is_zero() {
                T::zero()
            } else {
                T::infinity()
            }
        } else {
            num / den
        };
        Ok(ConditionSample {
            z,
            ratio,
            pass: ratio <= T::one() + T::tol(RATIO_TOLERANCE),
        })
    }
}

/// Evaluates the analytic condition at a single point.
pub fn condition_ratio<T: Scalar>(
    f: &FpSeries<T>,
    p: &ClassParams<T>,
    z: Complex<T>,
) -> Result<ConditionSample<T>> {
    ConditionEvaluator::new(f, p)?.sample(z)
}

/// Polar sampling grid `z = w + r e^(iθ)`, `θ_j = 2πj / angles`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    radii: Vec<T>,
    angles: usize,
}

impl<T: Scalar> Grid<T> {
    pub fn new(radii: Vec<T>, angles: usize) -> Result<Self> {
        if angles == 0
            || radii.is_empty()
            || radii.iter().any(|r| !(*r > T::zero() && *r < T::one()))
        {
            return Err(Error::InvalidGrid);
        }
        Ok(Self { radii, angles })
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Offsets `z - w` in grid order: radius-major, then angle.
    pub fn offsets(&self) -> impl Iterator<Item = Complex<T>> + '_ {
        let step = T::TAU() / T::lit(self.angles as f64);
        self.radii.iter().flat_map(move |&r| {
            (0..self.angles).map(move |j| Complex::from_polar(r, step * T::lit(j as f64)))
        })
    }
}

impl<T: Scalar> Default for Grid<T> {
    fn default() -> Self {
        Self {
            radii: DEFAULT_RADII.iter().map(|&r| T::lit(r)).collect(),
            angles: DEFAULT_ANGLES,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GridReport<T> {
    /// Per-sample outcomes in grid order.
    pub samples: Vec<Result<ConditionSample<T>>>,
    pub passes: usize,
    pub failures: usize,
    pub errors: usize,
    /// Largest finite-or-infinite ratio seen, with its point.
    pub worst: Option<ConditionSample<T>>,
}

/// Samples the analytic condition over `grid`. Per-sample errors are
/// recorded, not propagated; samples may be computed in parallel but the
/// result order is the grid order.
pub fn verify_on_grid<T: Scalar>(
    f: &FpSeries<T>,
    p: &ClassParams<T>,
    grid: &Grid<T>,
) -> Result<GridReport<T>> {
    let eval = ConditionEvaluator::new(f, p)?;
    let w = f.w();
    let points: Vec<Complex<T>> = grid.offsets().map(|u| w + u).collect();
    let samples: Vec<Result<ConditionSample<T>>> = if points.len() >= 256 {
        points.par_iter().map(|&z| eval.sample(z)).collect()
    } else {
        points.iter().map(|&z| eval.sample(z)).collect()
    };
    let mut report = GridReport {
        samples: Vec::new(),
        passes: 0,
        failures: 0,
        errors: 0,
        worst: None,
    };
    for s in &samples {
        match s {
            Ok(s) => {
                if s.pass {
                    report.passes += 1;
                } else {
                    report.failures += 1;
                }
                if report.worst.is_none_or(|w| s.ratio > w.ratio) {
                    report.worst = Some(*s);
                }
            }
            Err(_) => report.errors += 1,
        }
    }
    report.samples = samples;
    Ok(report)
}
