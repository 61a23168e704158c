//! Recovery of small integer ratios between eigenvalues.

use num_integer::Integer;
use num_rational::Ratio;

/// Relative tolerance for accepting a continued-fraction convergent.
pub const RATIO_TOLERANCE: f64 = 1e-9;
/// Largest denominator (and common multiple) accepted as "exact".
pub const DENOMINATOR_CAP: u64 = 4096;

/// Best rational approximation of `x > 0` whose denominator does not exceed
/// `cap`, accepted only if it lies within `tol` of `x`.
///
/// Walks the continued-fraction convergents of `x` and returns the first one
/// that is close enough.
pub fn approximate(x: f64, tol: f64, cap: u64) -> Option<Ratio<u64>> {
    if !(x.is_finite() && x > 0.0) {
        return None;
    }
    let (mut h_prev, mut h) = (1u64, x.floor() as u64);
    let (mut k_prev, mut k) = (0u64, 1u64);
    let mut frac = x - x.floor();
    loop {
        let approx = h as f64 / k as f64;
        if (approx - x).abs() <= tol * x.max(1.0) {
            return Some(Ratio::new(h, k));
        }
        if frac < f64::EPSILON {
            return None;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let a = a as u64;
        let h_next = a.checked_mul(h)?.checked_add(h_prev)?;
        let k_next = a.checked_mul(k)?.checked_add(k_prev)?;
        if k_next > cap {
            return None;
        }
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
    }
}

/// Reduced positive integers proportional to `values` (all positive), or
/// `None` when no such ratio exists within the tolerance and cap.
///
/// Each value is compared against the smallest; the per-value fractions are
/// brought to a common denominator and the result divided by its gcd.
pub fn integer_ratio(values: &[f64]) -> Option<Vec<u64>> {
    integer_ratio_with_tolerance(values, RATIO_TOLERANCE)
}

/// [`integer_ratio`] with an explicit relative tolerance.
pub fn integer_ratio_with_tolerance(values: &[f64], tol: f64) -> Option<Vec<u64>> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if values.is_empty() || !(min > 0.0) {
        return None;
    }
    let fracs: Vec<Ratio<u64>> = values
        .iter()
        .map(|&v| approximate(v / min, tol, DENOMINATOR_CAP))
        .collect::<Option<_>>()?;
    let mut common = 1u64;
    for f in &fracs {
        common = common.lcm(f.denom());
        if common > DENOMINATOR_CAP {
            return None;
        }
    }
    let ints: Vec<u64> = fracs
        .iter()
        .map(|f| f.numer() * (common / f.denom()))
        .collect();
    let g = ints.iter().fold(0u64, |acc, &x| acc.gcd(&x));
    Some(ints.into_iter().map(|x| x / g).collect())
}
