//! Seeded generators for test functions and parameters.

use num_complex::Complex;
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::Result;
use crate::membership::{phi_functional, ClassParams};
use crate::operators::ImOrder;
use crate::scalar::Scalar;
use crate::series::FpSeries;

/// Tail with support drawn uniformly from `[k, trunc]` (random size) and
/// exponentially distributed magnitudes. Always has at least one index.
pub fn random_series<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    w: Complex<T>,
    k: u32,
    trunc: u32,
) -> Result<FpSeries<T>> {
    let span = (trunc.max(k) - k + 1) as usize;
    let size = rng.gen_range(1..=span);
    let coeffs: Vec<(u32, T)> = sample(rng, span, size)
        .into_iter()
        .map(|i| {
            let a: f64 = Exp1.sample(rng);
            (k + i as u32, T::lit(a))
        })
        .collect();
    FpSeries::with_trunc(w, k, Some(trunc.max(k)), coeffs, trunc.max(k))
}

/// Rescales the tail of `f` so that `phi(f) = fraction * (1 + A - B)`.
pub fn rescale_to_phi<T: Scalar>(
    f: &FpSeries<T>,
    p: &ClassParams<T>,
    fraction: T,
) -> Result<FpSeries<T>> {
    let phi = phi_functional(f, p)?;
    if phi.is_zero() {
        return Ok(f.clone());
    }
    let s = fraction * p.bound() / phi;
    FpSeries::with_trunc(
        f.w(),
        f.k(),
        Some(f.trunc()),
        f.coeffs().iter().map(|(&n, &a)| (n, a * s)),
        f.trunc(),
    )
}

/// Random member with `phi = u * (1 + A - B)`, `u ~ U[0, 1]`.
pub fn random_member<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    p: &ClassParams<T>,
    w: Complex<T>,
    k: u32,
    trunc: u32,
) -> Result<FpSeries<T>> {
    let u: f64 = rng.gen();
    let f = random_series(rng, w, k, trunc)?;
    rescale_to_phi(&f, p, T::lit(u))
}

/// Admissible `(A, B)` drawn uniformly from `0 <= A < 1`, `-1 <= B < A`, with
/// `m` uniform in `0..=max_m`.
pub fn random_params<T: Scalar, R: Rng + ?Sized>(rng: &mut R, max_m: u32) -> ClassParams<T> {
    loop {
        let a: f64 = rng.gen_range(0.0..1.0);
        let b: f64 = rng.gen_range(-1.0..=a);
        let m = rng.gen_range(0..=max_m);
        if let Ok(p) = ClassParams::new(T::lit(a), T::lit(b), ImOrder::new(m).expect("max_m <= 12"))
        {
            return p;
        }
    }
}

/// Fixed point uniform in the disk of radius `radius`.
pub fn random_fixed_point<T: Scalar, R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex<T> {
    let r = radius * rng.gen::<f64>().sqrt();
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex::new(T::lit(r * t.cos()), T::lit(r * t.sin()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::is_member;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn members_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = random_params::<f64, _>(&mut rng, 6);
            let w = random_fixed_point(&mut rng, 0.9);
            let k = rng.gen_range(1..=5);
            let trunc = k + rng.gen_range(0..40);
            let f = random_member(&mut rng, &p, w, k, trunc).unwrap();
            assert!(is_member(&f, &p).unwrap().member);
            assert!(f.coeffs().keys().all(|&n| n >= k && n <= f.trunc()));
        }
    }

    #[test]
    fn rescale_hits_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = random_params::<f64, _>(&mut rng, 3);
        let f = random_series(&mut rng, Complex::new(0.0, 0.0), 2, 30).unwrap();
        let g = rescale_to_phi(&f, &p, 1.1).unwrap();
        let r = is_member(&g, &p).unwrap();
        assert!((r.phi - 1.1 * p.bound()).abs() < 1e-13);
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            let p = random_params::<f64, _>(&mut rng, 3);
            random_member(&mut rng, &p, Complex::new(0.1, 0.0), 1, 20).unwrap()
        };
        assert_eq!(draw(), draw());
    }
}
