//! Random problem generators for property tests and benchmarks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linsys::{validate_system, HermitianSystem};
use crate::matrix::{inner, vec_norm, CMatrix};
use crate::scalar::{Real, C};

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C::new(T::lit(re), T::lit(im))
}

/// Uniformly random unit vector in `C^dim`.
pub fn random_unit_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C<T>> {
    let v: Vec<C<T>> = (0..dim).map(|_| gaussian(rng)).collect();
    let n = vec_norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Haar-distributed unitary from Gram-Schmidt on Gaussian columns.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix<T> {
    let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C<T>> = (0..dim).map(|_| gaussian(rng)).collect();
        // Two passes keep the columns orthogonal to working precision.
        for _ in 0..2 {
            for q in &cols {
                let p = inner(q, &v);
                for (vi, &qi) in v.iter_mut().zip(q) {
                    *vi = *vi - qi * p;
                }
            }
        }
        let n = vec_norm(&v);
        if n > T::lit(1e-6) {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    CMatrix::from_columns(&cols).unwrap()
}

/// `U diag(eigenvalues) U^H` for a Haar-random `U`, exactly Hermitian.
pub fn hermitian_with_spectrum<T: Real, R: Rng + ?Sized>(rng: &mut R, eigenvalues: &[T]) -> CMatrix<T> {
    let u = haar_unitary(rng, eigenvalues.len());
    let d: Vec<C<T>> = eigenvalues.iter().map(|&l| C::new(l, T::zero())).collect();
    let a = u.matmul(&CMatrix::from_diagonal(&d)).matmul(&u.adjoint());
    symmetrize(&a)
}

/// Dense random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix<T> {
    let mut a = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            a[(i, j)] = gaussian(rng);
        }
    }
    symmetrize(&a)
}

fn symmetrize<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    let n = a.rows();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = C::new(a[(i, i)].re, T::zero());
        for j in i + 1..n {
            let v = (a[(i, j)] + a[(j, i)].conj()) * T::lit(0.5);
            out[(i, j)] = v;
            out[(j, i)] = v.conj();
        }
    }
    out
}

/// A system whose eigenvalues are `scale · ratios[j]`, with random
/// eigenvectors and a random unit right-hand side.
pub fn exact_ratio_system<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    ratios: &[u64],
    scale: T,
) -> Result<HermitianSystem<T>> {
    let eigs: Vec<T> = ratios.iter().map(|&r| scale * T::lit(r as f64)).collect();
    let a = hermitian_with_spectrum(rng, &eigs);
    let b = random_unit_vector(rng, ratios.len());
    validate_system(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use num_traits::Zero;

    #[test]
    fn generated_objects_have_their_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = haar_unitary::<f64, _>(&mut rng, 8);
        assert!(u.unitarity_deviation() < 1e-13);
        let a = random_hermitian::<f64, _>(&mut rng, 4);
        assert!(a.hermiticity_deviation().is_zero());
        let v = random_unit_vector::<f64, _>(&mut rng, 4);
        assert!((vec_norm(&v) - 1.0).abs() < 1e-15);
        let sys = exact_ratio_system::<f64, _>(&mut rng, &[3, 4], 0.7).unwrap();
        assert_eq!(sys.dim(), 2);
    }
}
