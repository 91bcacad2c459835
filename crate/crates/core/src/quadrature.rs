//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex-valued
//! integrands on a real interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Upper bound on the number of live subintervals.
pub const MAX_SUBINTERVALS: usize = 1 << 14;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct Quadrature<T> {
    pub value: Complex<T>,
    pub error: T,
    pub subintervals: usize,
}

struct Piece<T> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
}

impl<T: Scalar> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Piece<T> {}

impl<T: Scalar> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn gk15<T: Scalar, F>(f: &mut F, a: T, b: T) -> Result<Piece<T>>
where
    F: FnMut(T) -> Result<Complex<T>>,
{
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let x = half_len * T::lit(XGK[j]);
        let sum = f(center - x)? + f(center + x)?;
        kronrod = kronrod + sum * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + sum * T::lit(WG[j / 2]);
        }
    }
    let value = kronrod * half_len;
    let error = ((kronrod - gauss) * half_len).norm();
    Ok(Piece { a, b, value, error })
}

/// Integrates `f` over `[a, b]` until the summed error estimate falls below
/// `abs_tol`. The integrand is never evaluated at the endpoints.
pub fn integrate<T: Scalar, F>(mut f: F, a: T, b: T, abs_tol: T) -> Result<Quadrature<T>>
where
    F: FnMut(T) -> Result<Complex<T>>,
{
    let mut heap = BinaryHeap::new();
    let first = gk15(&mut f, a, b)?;
    let mut total_err = first.error;
    heap.push(first);

    loop {
        if total_err <= abs_tol {
            // Confirm with a fresh sum; the running total accumulates rounding.
            total_err = heap.iter().map(|p| p.error).sum();
            if total_err <= abs_tol {
                break;
            }
        }
        if heap.len() >= MAX_SUBINTERVALS {
            return Err(non_convergence(abs_tol, total_err));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = T::lit(0.5) * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            return Err(non_convergence(abs_tol, total_err));
        }
        let left = gk15(&mut f, worst.a, mid)?;
        let right = gk15(&mut f, mid, worst.b)?;
        total_err = total_err - worst.error + left.error + right.error;
        heap.push(left);
        heap.push(right);
    }

    let value = heap
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, p| acc + p.value);
    Ok(Quadrature {
        value,
        error: total_err,
        subintervals: heap.len(),
    })
}

fn non_convergence<T: Scalar>(tol: T, err: T) -> Error {
    Error::QuadratureNonConvergence {
        tolerance: tol.as_f64(),
        estimate: err.as_f64(),
    }
}
