//! Problem instances and the spectral quantities both backends consume.

use num_traits::Zero;

use crate::eigen::{hermitian_eigen, HermitianEigen};
use crate::error::{HhlError, Result};
use crate::matrix::{inner, vec_norm, CMatrix};
use crate::ratio;
use crate::scalar::{Real, C};

pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
pub const UNIT_TOLERANCE: f64 = 1e-12;
pub const SINGULAR_TOLERANCE: f64 = 1e-12;
/// Largest clock register the planner will produce.
pub const MAX_CLOCK_QUBITS: u32 = 24;

/// A validated `A x = b` instance: `A` Hermitian of size `2^n`, `b` a unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSystem<T> {
    matrix: CMatrix<T>,
    rhs: Vec<C<T>>,
    qubits: u32,
    sparsity: usize,
}

impl<T: Real> HermitianSystem<T> {
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn rhs(&self) -> &[C<T>] {
        &self.rhs
    }

    /// `n`, the width of the b register.
    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    /// `N = 2^n`.
    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    /// Maximum number of nonzero entries in any row. Informational only.
    pub fn sparsity(&self) -> usize {
        self.sparsity
    }
}

/// Checks that `a` is a power-of-two-sized Hermitian matrix and `b` a matching
/// unit vector. A non-unit `b` is rejected rather than normalized.
pub fn validate_system<T: Real>(a: CMatrix<T>, b: Vec<C<T>>) -> Result<HermitianSystem<T>> {
    if !a.is_square() {
        return Err(HhlError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let dim = a.rows();
    if b.len() != dim {
        return Err(HhlError::DimensionMismatch {
            expected: dim,
            found: b.len(),
        });
    }
    if dim < 2 || !dim.is_power_of_two() {
        return Err(HhlError::NotPowerOfTwo(dim));
    }
    let deviation = a.hermiticity_deviation();
    if !(deviation <= T::tol(HERMITIAN_TOLERANCE)) {
        return Err(HhlError::NotHermitian {
            deviation: deviation.as_f64(),
        });
    }
    let norm = vec_norm(&b);
    if !((norm - T::one()).abs() <= T::tol(UNIT_TOLERANCE)) {
        return Err(HhlError::NotUnitVector {
            norm: norm.as_f64(),
        });
    }
    let sparsity = (0..dim)
        .map(|i| (0..dim).filter(|&j| !a[(i, j)].is_zero()).count())
        .max()
        .unwrap_or(0);
    Ok(HermitianSystem {
        matrix: a,
        rhs: b,
        qubits: dim.trailing_zeros(),
        sparsity,
    })
}

/// Ascending eigenvalues and the unitary whose columns are the eigenvectors.
pub fn eigendecompose<T: Real>(sys: &HermitianSystem<T>) -> Result<HermitianEigen<T>> {
    let eig = hermitian_eigen(sys.matrix())?;
    let min_abs = eig
        .values
        .iter()
        .fold(T::infinity(), |acc, &l| acc.min(l.abs()));
    if !(min_abs > T::tol(SINGULAR_TOLERANCE)) {
        return Err(HhlError::Singular {
            min_abs: min_abs.as_f64(),
        });
    }
    Ok(eig)
}

/// `β_j = <u_j|b>` for the columns `u_j` of `u`.
pub fn expansion_coefficients<T: Real>(u: &CMatrix<T>, b: &[C<T>]) -> Result<Vec<C<T>>> {
    if u.rows() != b.len() {
        return Err(HhlError::DimensionMismatch {
            expected: u.rows(),
            found: b.len(),
        });
    }
    Ok((0..u.cols()).map(|j| inner(&u.column(j), b)).collect())
}

/// `κ = max|λ| / min|λ|`.
pub fn condition_number<T: Real>(eigenvalues: &[T]) -> Result<T> {
    if eigenvalues.is_empty() {
        return Err(HhlError::Singular { min_abs: 0.0 });
    }
    let (lo, hi) = eigenvalues
        .iter()
        .fold((T::infinity(), T::zero()), |(lo, hi), &l| {
            (lo.min(l.abs()), hi.max(l.abs()))
        });
    if !(lo > T::tol(SINGULAR_TOLERANCE)) {
        return Err(HhlError::Singular {
            min_abs: lo.as_f64(),
        });
    }
    Ok(hi / lo)
}

/// How the spectrum is laid out on the clock register.
#[derive(Debug, Clone, PartialEq)]
pub struct ClockPlan<T> {
    /// Integer clock values `λ̃_j`, one per eigenvalue, in `1..2^m`.
    pub scaled_eigs: Vec<u64>,
    /// Unrounded `λ_j t 2^m / 2π`; equals `scaled_eigs` when `exact`.
    pub scaled_values: Vec<T>,
    /// Clock register width `m`.
    pub clock_qubits: u32,
    /// Evolution time `t` in `exp(iAt)`.
    pub evolution_time: T,
    /// Whether every `λ̃_j` encodes its eigenvalue exactly.
    pub exact: bool,
}

/// Chooses clock width, evolution time and integer clock values.
///
/// When the eigenvalues stand in a reduced integer ratio `r_1 : … : r_max`,
/// `λ̃_j = r_j`, `m = ⌈log2(r_max + 1)⌉` and `t` makes `λ_j t 2^m / 2π = r_j`.
/// A larger `m_override` keeps the same integers on a wider clock. Without an
/// exact ratio (or with a clock too narrow for it) `m_override` is required;
/// `t = π / λ_max` puts the largest value at `2^(m-1)` and the rest are rounded.
pub fn clock_register_plan<T: Real>(eigenvalues: &[T], m_override: Option<u32>) -> Result<ClockPlan<T>> {
    if eigenvalues.is_empty() {
        return Err(HhlError::Singular { min_abs: 0.0 });
    }
    if let Some(&neg) = eigenvalues.iter().find(|&&l| !(l > T::zero())) {
        return Err(if neg.is_zero() {
            HhlError::Singular { min_abs: 0.0 }
        } else {
            HhlError::IndefiniteSpectrum(neg.as_f64())
        });
    }
    if let Some(m) = m_override {
        if m == 0 || m > MAX_CLOCK_QUBITS {
            return Err(HhlError::InvalidClockSize(m));
        }
    }
    let lmax = eigenvalues.iter().fold(T::zero(), |acc, &l| acc.max(l));
    let two_pi = T::PI() + T::PI();
    let as_f64: Vec<f64> = eigenvalues.iter().map(|l| l.as_f64()).collect();

    if let Some(ints) = ratio::integer_ratio_with_tolerance(&as_f64, T::tol(ratio::RATIO_TOLERANCE).as_f64()) {
        let rmax = *ints.iter().max().unwrap();
        let natural = u64::BITS - rmax.leading_zeros();
        let m = match m_override {
            None if natural > MAX_CLOCK_QUBITS => return Err(HhlError::InvalidClockSize(natural)),
            None => Some(natural),
            Some(m) if m >= natural => Some(m),
            Some(_) => None,
        };
        if let Some(m) = m {
            let clock = T::lit((1u64 << m) as f64);
            let t = two_pi * T::lit(rmax as f64) / (clock * lmax);
            return Ok(ClockPlan {
                scaled_values: ints.iter().map(|&r| T::lit(r as f64)).collect(),
                scaled_eigs: ints,
                clock_qubits: m,
                evolution_time: t,
                exact: true,
            });
        }
    }

    let m = m_override.ok_or(HhlError::InexactRatioNoOverride)?;
    let clock = T::lit((1u64 << m) as f64);
    let t = T::PI() / lmax;
    let scaled_values: Vec<T> = eigenvalues.iter().map(|&l| l * t * clock / two_pi).collect();
    let top = (1u64 << m) - 1;
    let scaled_eigs = scaled_values
        .iter()
        .map(|s| (s.round().to_u64().unwrap_or(0)).clamp(1, top))
        .collect();
    Ok(ClockPlan {
        scaled_eigs,
        scaled_values,
        clock_qubits: m,
        evolution_time: t,
        exact: false,
    })
}

/// `C = min_j λ̃_j`, the largest constant keeping every `C / λ̃_j ≤ 1`.
pub fn rotation_constant<T: Real>(scaled_eigs: &[u64]) -> T {
    T::lit(scaled_eigs.iter().copied().min().unwrap_or(1) as f64)
}

/// Everything derived from `A` and `b` that the emulator and simulator use.
#[derive(Debug, Clone)]
pub struct SpectralData<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: CMatrix<T>,
    pub coefficients: Vec<C<T>>,
    pub kappa: T,
    pub plan: ClockPlan<T>,
    pub rotation_constant: T,
}

impl<T: Real> SpectralData<T> {
    pub fn analyze(sys: &HermitianSystem<T>, m_override: Option<u32>) -> Result<Self> {
        let eig = eigendecompose(sys)?;
        let coefficients = expansion_coefficients(&eig.vectors, sys.rhs())?;
        let kappa = condition_number(&eig.values)?;
        let plan = clock_register_plan(&eig.values, m_override)?;
        let rotation_constant = rotation_constant(&plan.scaled_eigs);
        Ok(Self {
            eigenvalues: eig.values,
            eigenvectors: eig.vectors,
            coefficients,
            kappa,
            plan,
            rotation_constant,
        })
    }

    pub fn clock_qubits(&self) -> u32 {
        self.plan.clock_qubits
    }

    pub fn evolution_time(&self) -> T {
        self.plan.evolution_time
    }

    pub fn scaled_eigs(&self) -> &[u64] {
        &self.plan.scaled_eigs
    }

    pub fn is_exact(&self) -> bool {
        self.plan.exact
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp1() -> HermitianSystem<f64> {
        let a = CMatrix::from_real_rows(&[&[1.0, -1.0 / 3.0], &[-1.0 / 3.0, 1.0]]).unwrap();
        validate_system(a, vec![C::zero(), C::new(1.0, 0.0)]).unwrap()
    }

    fn exp2() -> HermitianSystem<f64> {
        let a = CMatrix::from_real_rows(&[&[6.5, -0.5], &[-0.5, 6.5]]).unwrap();
        validate_system(a, vec![C::zero(), C::new(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn validate_accepts_worked_example() {
        let sys = exp1();
        assert_eq!(sys.qubits(), 1);
        assert_eq!(sys.dim(), 2);
        assert_eq!(sys.sparsity(), 2);
    }

    #[test]
    fn validate_accepts_identity() {
        let sys = validate_system(
            CMatrix::<f64>::identity(2),
            vec![C::new(1.0, 0.0), C::zero()],
        )
        .unwrap();
        assert_eq!(sys.qubits(), 1);
        assert_eq!(sys.sparsity(), 1);
    }

    #[test]
    fn validate_rejects() {
        let upper = CMatrix::<f64>::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            validate_system(upper, vec![C::zero(), C::new(1.0, 0.0)]),
            Err(HhlError::NotHermitian { .. })
        ));
        let three = CMatrix::<f64>::identity(3);
        assert_eq!(
            validate_system(three, vec![C::new(1.0, 0.0), C::zero(), C::zero()]),
            Err(HhlError::NotPowerOfTwo(3))
        );
        let id = CMatrix::<f64>::identity(2);
        assert!(matches!(
            validate_system(id.clone(), vec![C::new(1.0, 0.0), C::new(1.0, 0.0)]),
            Err(HhlError::NotUnitVector { .. })
        ));
        assert!(matches!(
            validate_system(id, vec![C::new(1.0, 0.0)]),
            Err(HhlError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn singular_found_by_eigendecomposition() {
        let a = CMatrix::<f64>::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let sys = validate_system(a, vec![C::new(1.0, 0.0), C::zero()]).unwrap();
        assert!(matches!(eigendecompose(&sys), Err(HhlError::Singular { .. })));
    }

    #[test]
    fn worked_eigenvalues() {
        let e1 = eigendecompose(&exp1()).unwrap();
        assert!((e1.values[0] - 2.0 / 3.0).abs() < 1e-14);
        assert!((e1.values[1] - 4.0 / 3.0).abs() < 1e-14);
        let e2 = eigendecompose(&exp2()).unwrap();
        assert!((e2.values[0] - 6.0).abs() < 1e-13);
        assert!((e2.values[1] - 7.0).abs() < 1e-13);
    }

    #[test]
    fn coefficients_worked_example() {
        // Direct oracle: inner products against the hand-computed eigenvectors.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sys = exp1();
        let e = eigendecompose(&sys).unwrap();
        let beta = expansion_coefficients(&e.vectors, sys.rhs()).unwrap();
        let u1 = [C::new(h, 0.0), C::new(h, 0.0)];
        let u2 = [C::new(h, 0.0), C::new(-h, 0.0)];
        let oracle = [inner(&u1, sys.rhs()), inner(&u2, sys.rhs())];
        assert!((oracle[0] - C::new(h, 0.0)).norm() < 1e-15);
        assert!((oracle[1] - C::new(-h, 0.0)).norm() < 1e-15);
        for (b, o) in beta.iter().zip(&oracle) {
            assert!((b - o).norm() < 1e-14);
        }

        let sys2 = exp2();
        let e2 = eigendecompose(&sys2).unwrap();
        let beta2 = expansion_coefficients(&e2.vectors, sys2.rhs()).unwrap();
        assert!((beta2[0].norm_sqr() - 0.5).abs() < 1e-14);
        assert!((beta2[1].norm_sqr() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn coefficients_of_an_eigenvector() {
        let sys = exp1();
        let e = eigendecompose(&sys).unwrap();
        let beta = expansion_coefficients(&e.vectors, &e.vectors.column(1)).unwrap();
        assert!(beta[0].norm() < 1e-15);
        assert!((beta[1] - C::new(1.0, 0.0)).norm() < 1e-15);
        assert!(expansion_coefficients(&e.vectors, &[C::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn condition_numbers() {
        assert!((condition_number::<f64>(&[2.0 / 3.0, 4.0 / 3.0]).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(condition_number(&[1.0, 1.0]).unwrap(), 1.0);
        assert!((condition_number::<f64>(&[6.0, 7.0]).unwrap() - 7.0 / 6.0).abs() < 1e-15);
        assert!(condition_number(&[0.0, 1.0]).is_err());
        assert!(condition_number::<f64>(&[]).is_err());
    }

    #[test]
    fn clock_plans_for_worked_spectra() {
        let p = clock_register_plan(&[2.0 / 3.0, 4.0 / 3.0], None).unwrap();
        assert_eq!((p.scaled_eigs.as_slice(), p.clock_qubits, p.exact), (&[1, 2][..], 2, true));
        let p = clock_register_plan(&[6.0, 7.0], None).unwrap();
        assert_eq!((p.scaled_eigs.as_slice(), p.clock_qubits, p.exact), (&[6, 7][..], 3, true));
        let p = clock_register_plan(&[5.0, 5.0], None).unwrap();
        assert_eq!((p.scaled_eigs.as_slice(), p.clock_qubits, p.exact), (&[1, 1][..], 1, true));
    }

    #[test]
    fn evolution_time_maps_eigenvalues_onto_clock_integers() {
        for (eigs, m) in [(vec![2.0 / 3.0, 4.0 / 3.0], None), (vec![6.0, 7.0], None), (vec![2.0 / 3.0, 4.0 / 3.0], Some(5))] {
            let p = clock_register_plan(&eigs, m).unwrap();
            let clock = (1u64 << p.clock_qubits) as f64;
            for (l, &r) in eigs.iter().zip(&p.scaled_eigs) {
                let s = l * p.evolution_time * clock / (2.0 * std::f64::consts::PI);
                assert!((s - r as f64).abs() < 1e-12, "{s} vs {r}");
            }
        }
    }

    #[test]
    fn wider_override_keeps_exact_integers() {
        let p = clock_register_plan(&[2.0 / 3.0, 4.0 / 3.0], Some(4)).unwrap();
        assert!(p.exact);
        assert_eq!(p.clock_qubits, 4);
        assert_eq!(p.scaled_eigs, vec![1, 2]);
    }

    #[test]
    fn narrow_override_rounds() {
        let p = clock_register_plan(&[6.0, 7.0], Some(2)).unwrap();
        assert!(!p.exact);
        assert_eq!(p.clock_qubits, 2);
        // t = π/7: scaled values 6/7·2 and 2.
        assert_eq!(p.scaled_eigs, vec![2, 2]);
    }

    #[test]
    fn inexact_ratio_requires_override() {
        let eigs = [1.0, std::f64::consts::E];
        assert_eq!(clock_register_plan(&eigs, None), Err(HhlError::InexactRatioNoOverride));
        let p = clock_register_plan(&eigs, Some(4)).unwrap();
        assert!(!p.exact);
        assert_eq!(p.scaled_eigs, vec![3, 8]);
        assert!(p.scaled_eigs.iter().all(|&e| (1..16).contains(&e)));
    }

    #[test]
    fn plan_rejects_bad_spectra() {
        assert_eq!(
            clock_register_plan(&[-1.0, 2.0], None),
            Err(HhlError::IndefiniteSpectrum(-1.0))
        );
        assert_eq!(clock_register_plan(&[1.0, 2.0], Some(0)), Err(HhlError::InvalidClockSize(0)));
    }

    #[test]
    fn rotation_constants() {
        assert_eq!(rotation_constant::<f64>(&[1, 2]), 1.0);
        assert_eq!(rotation_constant::<f64>(&[6, 7]), 6.0);
        assert_eq!(rotation_constant::<f64>(&[1, 1]), 1.0);
    }

    #[test]
    fn spectral_data_for_worked_examples() {
        let s = SpectralData::analyze(&exp1(), None).unwrap();
        assert_eq!(s.clock_qubits(), 2);
        assert!((s.kappa - 2.0).abs() < 1e-14);
        assert_eq!(s.rotation_constant, 1.0);
        let s = SpectralData::analyze(&exp2(), None).unwrap();
        assert_eq!(s.scaled_eigs(), &[6, 7]);
        assert_eq!(s.rotation_constant, 6.0);
        let total: f64 = s.coefficients.iter().map(|b| b.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
