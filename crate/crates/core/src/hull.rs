//! Extreme points of `M_w(A, B, m)` and barycentric coordinates over them.
//!
//! `f_0 = 1/(z-w)` and `f_n = 1/(z-w) + (1+A-B) / (n^(m+1) [n(B+1)+A+2]) (z-w)^n`
//! for `n >= k` generate the class: every member is `C_0 f_0 + Σ C_n f_n`
//! with `C_n = n^(m+1) [n(B+1)+A+2] a_n / (1+A-B)` and `C_0 = 1 - Σ C_n`.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::membership::{is_member, ClassParams, MembershipReport};
use crate::scalar::{CompensatedSum, Scalar};
use crate::series::{linear_combine, FpSeries, HARD_MAX_TRUNC, WEIGHT_TOLERANCE};

/// Barycentric weights over `f_0, f_k, f_(k+1), ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct HullWeights<T> {
    c0: T,
    cn: BTreeMap<u32, T>,
}

impl<T: Scalar> HullWeights<T> {
    /// Validates nonnegativity, unit sum and that no index lies in `0..k`.
    pub fn new(c0: T, cn: BTreeMap<u32, T>, k: u32) -> Result<Self> {
        let mut sum = CompensatedSum::new();
        sum.add(c0);
        let mut bad = !c0.is_finite() || c0 < T::zero();
        for (&n, &c) in &cn {
            if n < k {
                return Err(Error::IndexBetween1AndKminus1 { n, k });
            }
            bad |= !c.is_finite() || c < T::zero();
            sum.add(c);
        }
        let sum = sum.value();
        if bad || (sum - T::one()).abs() > T::tol(WEIGHT_TOLERANCE) {
            return Err(Error::WeightsNotConvex { sum: sum.as_f64() });
        }
        Ok(Self { c0, cn })
    }

    pub fn c0(&self) -> T {
        self.c0
    }

    pub fn cn(&self) -> &BTreeMap<u32, T> {
        &self.cn
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        let get = |m: &BTreeMap<u32, T>, n| m.get(&n).copied().unwrap_or_else(T::zero);
        (self.c0 - other.c0).abs() <= tol
            && self
                .cn
                .keys()
                .chain(other.cn.keys())
                .all(|&n| (get(&self.cn, n) - get(&other.cn, n)).abs() <= tol)
    }
}

/// `f_0` for `n = 0`, otherwise the single-term series saturating the bound.
pub fn extreme_point<T: Scalar>(
    n: u32,
    p: &ClassParams<T>,
    w: Complex<T>,
    k: u32,
) -> Result<FpSeries<T>> {
    if n == 0 {
        return FpSeries::with_trunc(w, k, None, std::iter::empty(), HARD_MAX_TRUNC);
    }
    if n < k {
        return Err(Error::IndexBetween1AndKminus1 { n, k });
    }
    let a = p.bound() / p.weight(n)?;
    FpSeries::with_trunc(w, k, None, [(n, a)], HARD_MAX_TRUNC)
}

/// Barycentric coordinates of a member. The support of `cn` equals the
/// stored support of `f`.
pub fn decompose<T: Scalar>(f: &FpSeries<T>, p: &ClassParams<T>) -> Result<HullWeights<T>> {
    let report = is_member(f, p)?;
    if !report.member {
        return Err(Error::NotAMember {
            margin: report.margin.as_f64(),
        });
    }
    let bound = p.bound();
    let mut cn = BTreeMap::new();
    let mut total = CompensatedSum::new();
    for (&n, &a) in f.coeffs() {
        let c = p.weight(n)? * a / bound;
        total.add(c);
        cn.insert(n, c);
    }
    // Members at exact saturation may land a rounding error below zero.
    let c0 = (T::one() - total.value()).max(T::zero());
    Ok(HullWeights { c0, cn })
}

/// `C_0 f_0 + Σ C_n f_n`.
pub fn recompose<T: Scalar>(
    ws: &HullWeights<T>,
    p: &ClassParams<T>,
    w: Complex<T>,
    k: u32,
) -> Result<FpSeries<T>> {
    let mut points = vec![(ws.c0, extreme_point(0, p, w, k)?)];
    for (&n, &c) in &ws.cn {
        if n < k {
            return Err(Error::IndexBetween1AndKminus1 { n, k });
        }
        points.push((c, extreme_point(n, p, w, k)?));
    }
    let terms: Vec<(T, &FpSeries<T>)> = points.iter().map(|(c, f)| (*c, f)).collect();
    linear_combine(&terms)
}

/// Convex combination of members together with the membership report of
/// the result.
pub fn convex_combine_members<T: Scalar>(
    fs: &[FpSeries<T>],
    ds: &[T],
    p: &ClassParams<T>,
) -> Result<(FpSeries<T>, MembershipReport<T>)> {
    if fs.len() != ds.len() {
        return Err(Error::LengthMismatch {
            functions: fs.len(),
            weights: ds.len(),
        });
    }
    for (position, f) in fs.iter().enumerate() {
        let r = is_member(f, p)?;
        if !r.member {
            return Err(Error::InputNotMember {
                position,
                margin: r.margin.as_f64(),
            });
        }
    }
    let terms: Vec<(T, &FpSeries<T>)> = ds.iter().copied().zip(fs.iter()).collect();
    let combined = linear_combine(&terms)?;
    let report = is_member(&combined, p)?;
    Ok((combined, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::phi_functional;
    use crate::operators::ImOrder;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn params(a: f64, b: f64, m: u32) -> ClassParams<f64> {
        ClassParams::new(a, b, ImOrder::new(m).unwrap()).unwrap()
    }

    #[test]
    fn extreme_point_examples() {
        let w = c(0.1, 0.2);
        let p = params(0.5, 0.0, 1);
        let f0 = extreme_point(0, &p, w, 3).unwrap();
        assert!(f0.is_principal_only());
        assert_eq!(f0.k(), 3);

        // 1.5 / (2^2 * 4.5)
        let f2 = extreme_point(2, &p, w, 1).unwrap();
        assert!((f2.coeff(2) - 1.5 / 18.0).abs() < 1e-16);

        // B = -1 removes the n-linear term: (1 + 0.2 + 1) / (k^(m+1) * 2.2) = 1 / k^(m+1)
        let p = params(0.2, -1.0, 2);
        for k in [1u32, 2, 5] {
            let fk = extreme_point(k, &p, w, k).unwrap();
            let expected = 1.0 / (k as f64).powi(3);
            assert!((fk.coeff(k) - expected).abs() < 1e-15 * expected);
        }

        assert_eq!(
            extreme_point(2, &p, w, 3),
            Err(Error::IndexBetween1AndKminus1 { n: 2, k: 3 })
        );
    }

    #[test]
    fn decompose_examples() {
        let w = c(0.0, 0.0);
        let p = params(0.7, -0.3, 2);
        let f0 = extreme_point(0, &p, w, 1).unwrap();
        let ws = decompose(&f0, &p).unwrap();
        assert_eq!(ws.c0(), 1.0);
        assert!(ws.cn().is_empty());

        let f5 = extreme_point(5, &p, w, 2).unwrap();
        let ws = decompose(&f5, &p).unwrap();
        assert!(ws.c0().abs() < 1e-15);
        assert!((ws.cn()[&5] - 1.0).abs() < 1e-15);

        // phi = 0.4 * bound  =>  c0 = 0.6
        let raw = FpSeries::new(w, 2, [(2, 0.3), (4, 0.01)]).unwrap();
        let s = 0.4 * p.bound() / phi_functional(&raw, &p).unwrap();
        let f = FpSeries::new(w, 2, raw.coeffs().iter().map(|(&n, &a)| (n, a * s))).unwrap();
        let ws = decompose(&f, &p).unwrap();
        assert!((ws.c0() - 0.6).abs() < 1e-15);
        assert_eq!(ws.cn().keys().copied().collect::<Vec<_>>(), vec![2, 4]);
    }

    #[test]
    fn decompose_rejects_non_member() {
        let p = params(0.2, 0.0, 0);
        let f = FpSeries::new(c(0.0, 0.0), 1, [(1, 10.0)]).unwrap();
        assert!(matches!(decompose(&f, &p), Err(Error::NotAMember { .. })));
    }

    #[test]
    fn recompose_examples() {
        let w = c(0.3, -0.3);
        let p = params(0.1, -0.6, 1);
        let ws = HullWeights::new(1.0, BTreeMap::new(), 2).unwrap();
        assert!(recompose(&ws, &p, w, 2).unwrap().is_principal_only());

        let ws = HullWeights::new(0.0, BTreeMap::from([(2, 1.0)]), 2).unwrap();
        let f = recompose(&ws, &p, w, 2).unwrap();
        assert!(f.approx_eq(&extreme_point(2, &p, w, 2).unwrap(), 1e-16));

        let ws = HullWeights::new(0.25, BTreeMap::from([(3, 0.5), (6, 0.25)]), 2).unwrap();
        let f = recompose(&ws, &p, w, 2).unwrap();
        assert!(decompose(&f, &p).unwrap().approx_eq(&ws, 1e-12));
        let phi = phi_functional(&f, &p).unwrap();
        assert!((phi - 0.75 * p.bound()).abs() < 1e-12 * p.bound());
    }

    #[test]
    fn weights_validation() {
        assert!(matches!(
            HullWeights::new(0.5, BTreeMap::from([(2, 0.6)]), 1),
            Err(Error::WeightsNotConvex { .. })
        ));
        assert!(matches!(
            HullWeights::new(1.2, BTreeMap::from([(2, -0.2)]), 1),
            Err(Error::WeightsNotConvex { .. })
        ));
        assert_eq!(
            HullWeights::new(0.5, BTreeMap::from([(1, 0.5)]), 2),
            Err(Error::IndexBetween1AndKminus1 { n: 1, k: 2 })
        );
    }

    #[test]
    fn convex_combine_examples() {
        let w = c(0.0, -0.1);
        let p = params(0.4, 0.1, 1);
        let f = FpSeries::new(w, 1, [(1, 0.1), (2, 0.02)]).unwrap();
        let (same, r) = convex_combine_members(std::slice::from_ref(&f), &[1.0], &p).unwrap();
        assert!(same.approx_eq(&f, 0.0));
        assert_eq!(r, is_member(&f, &p).unwrap());

        let e2 = extreme_point(2, &p, w, 1).unwrap();
        let e7 = extreme_point(7, &p, w, 1).unwrap();
        let (mix, r) = convex_combine_members(&[e2, e7], &[0.5, 0.5], &p).unwrap();
        assert!(r.member);
        assert!((r.phi - p.bound()).abs() < 1e-14);
        assert_eq!(mix.coeffs().len(), 2);

        let scaled = |u: f64| {
            let s = u * p.bound() / phi_functional(&f, &p).unwrap();
            FpSeries::new(w, 1, f.coeffs().iter().map(|(&n, &a)| (n, a * s))).unwrap()
        };
        let (_, r) =
            convex_combine_members(&[scaled(0.2), scaled(0.6)], &[0.25, 0.75], &p).unwrap();
        assert!((r.phi - 0.5 * p.bound()).abs() < 1e-14);
    }

    #[test]
    fn convex_combine_errors() {
        let w = c(0.0, 0.0);
        let p = params(0.4, 0.1, 1);
        let good = extreme_point(1, &p, w, 1).unwrap();
        let bad = FpSeries::new(w, 1, [(1, 5.0)]).unwrap();
        assert!(matches!(
            convex_combine_members(&[good.clone(), bad], &[0.5, 0.5], &p),
            Err(Error::InputNotMember { position: 1, .. })
        ));
        assert!(matches!(
            convex_combine_members(std::slice::from_ref(&good), &[0.5, 0.5], &p),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            convex_combine_members(&[good.clone(), good.clone()], &[0.7, 0.7], &p),
            Err(Error::WeightsNotConvex { .. })
        ));
        let other = extreme_point(1, &p, c(0.1, 0.0), 1).unwrap();
        assert_eq!(
            convex_combine_members(&[good, other], &[0.5, 0.5], &p).unwrap_err(),
            Error::MixedFixedPoints
        );
    }
}
