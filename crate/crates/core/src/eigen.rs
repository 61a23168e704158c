//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.

use num_traits::{One, Zero};

use crate::error::{HhlError, Result};
use crate::matrix::CMatrix;
use crate::scalar::{Real, C};

const MAX_SWEEPS: usize = 64;

/// Eigenpairs of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    /// Ascending.
    pub values: Vec<T>,
    /// Column `j` is the unit eigenvector for `values[j]`.
    pub vectors: CMatrix<T>,
}

/// Diagonalizes a Hermitian matrix.
///
/// Eigenvalues come out ascending. Each eigenvector is phased so that its
/// first largest-modulus component is real and positive, which makes the
/// output deterministic for a given input.
pub fn hermitian_eigen<T: Real>(a: &CMatrix<T>) -> Result<HermitianEigen<T>> {
    if !a.is_square() {
        return Err(HhlError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut m = a.clone();
    // Symmetrize so round-off in the input cannot feed a non-Hermitian drift.
    for i in 0..n {
        m[(i, i)] = C::new(m[(i, i)].re, T::zero());
        for j in i + 1..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * T::lit(0.5);
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    let mut v = CMatrix::identity(n);
    let frob = m.as_slice().iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let stop = frob * T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&m);
        if off <= stop || off.is_zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = v.column(src);
        let phase = canonical_phase(&col);
        for (i, z) in col.into_iter().enumerate() {
            vectors[(i, dst)] = z * phase;
        }
    }
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm<T: Real>(m: &CMatrix<T>) -> T {
    let n = m.rows();
    let mut acc = T::zero();
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc = acc + m[(p, q)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi step annihilating `m[(p, q)]`.
fn rotate<T: Real>(m: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let g = apq.norm();
    if g.is_zero() {
        return;
    }
    let a = m[(p, p)].re;
    let d = m[(q, q)].re;
    if g <= T::epsilon() * T::epsilon() * (a.abs() + d.abs()) {
        m[(p, q)] = C::zero();
        m[(q, p)] = C::zero();
        return;
    }
    // Remove the phase of the off-diagonal entry, then a real Givens rotation.
    let phase = apq / g;
    let theta = (d - a) / (g + g);
    let t = if theta >= T::zero() {
        T::one() / (theta + (theta * theta + T::one()).sqrt())
    } else {
        -T::one() / (-theta + (theta * theta + T::one()).sqrt())
    };
    let cs = T::one() / (t * t + T::one()).sqrt();
    let sn = t * cs;
    let e = phase.conj();
    let r_pp = C::new(cs, T::zero());
    let r_pq = C::new(sn, T::zero());
    let r_qp = e * (-sn);
    let r_qq = e * cs;

    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * r_pp + mkq * r_qp;
        m[(k, q)] = mkp * r_pq + mkq * r_qq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = r_pp.conj() * mpk + r_qp.conj() * mqk;
        m[(q, k)] = r_pq.conj() * mpk + r_qq.conj() * mqk;
    }
    m[(p, q)] = C::zero();
    m[(q, p)] = C::zero();
    m[(p, p)] = C::new(m[(p, p)].re, T::zero());
    m[(q, q)] = C::new(m[(q, q)].re, T::zero());
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * r_pp + vkq * r_qp;
        v[(k, q)] = vkp * r_pq + vkq * r_qq;
    }
}

fn canonical_phase<T: Real>(col: &[C<T>]) -> C<T> {
    let max = col.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
    if max.is_zero() {
        return C::one();
    }
    let cut = max * (T::one() - T::tol(1e-9));
    let pivot = col.iter().find(|z| z.norm() >= cut).copied().unwrap();
    (pivot / pivot.norm()).conj()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_already_diagonal() {
        let e = hermitian_eigen(&CMatrix::<f64>::identity(2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        assert_eq!(e.vectors, CMatrix::identity(2));
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let a = CMatrix::from_rows(&[
            vec![C::new(2.0, 0.0), C::new(0.0, 1.0)],
            vec![C::new(0.0, -1.0), C::new(2.0, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eigen::<f64>(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        let lam = CMatrix::from_diagonal(&[C::new(1.0, 0.0), C::new(3.0, 0.0)]);
        let rebuilt = e.vectors.matmul(&lam).matmul(&e.vectors.adjoint());
        assert!(rebuilt.max_abs_diff(&a) < 1e-14);
    }

    #[test]
    fn eigenvector_phase_is_canonical() {
        let a = CMatrix::<f64>::from_real_rows(&[&[1.0, -1.0 / 3.0], &[-1.0 / 3.0, 1.0]]).unwrap();
        let e = hermitian_eigen(&a).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.vectors[(0, 0)] - C::new(h, 0.0)).norm() < 1e-15);
        assert!((e.vectors[(1, 0)] - C::new(h, 0.0)).norm() < 1e-15);
        assert!((e.vectors[(0, 1)] - C::new(h, 0.0)).norm() < 1e-15);
        assert!((e.vectors[(1, 1)] - C::new(-h, 0.0)).norm() < 1e-15);
    }
}
