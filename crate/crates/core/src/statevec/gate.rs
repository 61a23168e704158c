use std::borrow::Cow;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{HhlError, Result};
use crate::matrix::CMatrix;
use crate::scalar::{c, cr, Real, C};

/// Unitary payload tolerance, `max |G^H G - I|`.
pub const GATE_UNITARY_TOLERANCE: f64 = 1e-12;

type Qubits = SmallVec<[usize; 4]>;

#[derive(Debug, Clone, PartialEq)]
enum Payload<T> {
    /// Row-major 2×2.
    Single([C<T>; 4]),
    /// Exchange of the two targets.
    Swap,
    Dense {
        matrix: CMatrix<T>,
        /// `Some(p)` when row `r` is basis row `p[r]`.
        permutation: Option<Vec<usize>>,
    },
}

impl<T: Real> Payload<T> {
    fn from_matrix(matrix: Cow<'_, CMatrix<T>>) -> Self {
        if let (2, 2, [a, b, c, d]) = (matrix.rows(), matrix.cols(), matrix.as_slice()) {
            return Payload::Single([*a, *b, *c, *d]);
        }
        let permutation = permutation_of(&matrix);
        Payload::Dense {
            matrix: matrix.into_owned(),
            permutation,
        }
    }

    fn dim(&self) -> (usize, usize) {
        match self {
            Payload::Single(_) => (2, 2),
            Payload::Swap => (4, 4),
            Payload::Dense { matrix, .. } => (matrix.rows(), matrix.cols()),
        }
    }
}

/// A (possibly multi-)controlled unitary on one or more target qubits.
///
/// `targets[k]` carries bit `k` of the payload's local index. Controls are
/// `(qubit, required value)` pairs; the payload acts only on amplitudes whose
/// control qubits match.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp<T> {
    name: Cow<'static, str>,
    /// Parameter shown in traces, such as a rotation angle.
    param: Option<T>,
    payload: Payload<T>,
    targets: Qubits,
    /// Control qubits as a bit mask, and the bits they must hold.
    ctrl_mask: usize,
    ctrl_val: usize,
    /// Every qubit the gate touches, as a bit mask.
    qubits: usize,
    max_qubit: usize,
}

impl<T: Real> GateOp<T> {
    pub fn new(
        name: impl Into<Cow<'static, str>>,
        payload: CMatrix<T>,
        targets: Vec<usize>,
        controls: Vec<(usize, bool)>,
    ) -> Result<Self> {
        Self::with_tolerance(name, payload, targets, controls, T::tol(GATE_UNITARY_TOLERANCE))
    }

    /// Like [`GateOp::new`] with an explicit unitarity tolerance.
    pub fn with_tolerance(
        name: impl Into<Cow<'static, str>>,
        payload: CMatrix<T>,
        targets: Vec<usize>,
        controls: Vec<(usize, bool)>,
        tol: T,
    ) -> Result<Self> {
        let deviation = payload.unitarity_deviation();
        if !(deviation <= tol) {
            return Err(HhlError::NonUnitaryGate {
                deviation: deviation.as_f64(),
            });
        }
        Self::prechecked(name, None, Cow::Owned(payload), targets, &controls)
    }

    /// A payload the caller has already verified to be unitary.
    pub(crate) fn prechecked(
        name: impl Into<Cow<'static, str>>,
        param: Option<T>,
        payload: Cow<'_, CMatrix<T>>,
        targets: impl IntoIterator<Item = usize>,
        controls: &[(usize, bool)],
    ) -> Result<Self> {
        Self::structural(
            name.into(),
            param,
            Payload::from_matrix(payload),
            targets.into_iter().collect(),
            controls,
        )
    }

    /// Checks everything but unitarity.
    fn structural(
        name: Cow<'static, str>,
        param: Option<T>,
        payload: Payload<T>,
        targets: Qubits,
        controls: &[(usize, bool)],
    ) -> Result<Self> {
        if targets.is_empty() {
            return Err(HhlError::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        let dim = 1usize << targets.len();
        let (rows, cols) = payload.dim();
        if rows != dim || cols != dim {
            return Err(HhlError::DimensionMismatch {
                expected: dim,
                found: rows,
            });
        }
        let mut qubits = 0;
        for &q in &targets {
            claim(&mut qubits, q)?;
        }
        let max_qubit = targets.iter().copied().max().unwrap_or(0);
        Self {
            name,
            param,
            payload,
            targets,
            ctrl_mask: 0,
            ctrl_val: 0,
            qubits,
            max_qubit,
        }
        .controlled(controls)
    }

    fn fixed(name: &'static str, param: Option<T>, g: [C<T>; 4], target: usize) -> Self {
        Self {
            name: Cow::Borrowed(name),
            param,
            payload: Payload::Single(g),
            targets: smallvec::smallvec![target],
            ctrl_mask: 0,
            ctrl_val: 0,
            qubits: 1usize.checked_shl(target as u32).unwrap_or(0),
            max_qubit: target,
        }
    }

    pub fn h(target: usize) -> Self {
        let s = cr(T::FRAC_1_SQRT_2());
        Self::fixed("h", None, [s, s, s, -s], target)
    }

    pub fn x(target: usize) -> Self {
        Self::fixed("x", None, [C::zero(), C::one(), C::one(), C::zero()], target)
    }

    /// `RY(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
    pub fn ry(theta: T, target: usize) -> Self {
        let half = theta / T::lit(2.0);
        let (s, co) = half.sin_cos();
        Self::fixed("ry", Some(theta), [cr(co), cr(-s), cr(s), cr(co)], target)
    }

    /// `diag(1, e^{iφ})`.
    pub fn phase(phi: T, target: usize) -> Self {
        let (s, co) = phi.sin_cos();
        Self::fixed("p", Some(phi), [C::one(), C::zero(), C::zero(), c(co, s)], target)
    }

    pub fn swap(a: usize, b: usize) -> Result<Self> {
        Self::structural(Cow::Borrowed("swap"), None, Payload::Swap, smallvec::smallvec![a, b], &[])
    }

    /// Adds controls; fails if any overlaps an existing qubit.
    pub fn controlled(mut self, controls: &[(usize, bool)]) -> Result<Self> {
        for &(q, v) in controls {
            claim(&mut self.qubits, q)?;
            self.max_qubit = self.max_qubit.max(q);
            self.ctrl_mask |= 1 << q;
            self.ctrl_val |= (v as usize) << q;
        }
        Ok(self)
    }

    /// The inverse gate under a new name: same targets and controls, payload
    /// replaced by its conjugate transpose.
    pub fn dagger(mut self, name: impl Into<Cow<'static, str>>) -> Self {
        self.name = name.into();
        self.payload = match self.payload {
            Payload::Single([a, b, c, d]) => Payload::Single([a.conj(), c.conj(), b.conj(), d.conj()]),
            Payload::Swap => Payload::Swap,
            Payload::Dense { matrix, .. } => Payload::from_matrix(Cow::Owned(matrix.adjoint())),
        };
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The payload as a `2^k`-square matrix over the `k` targets.
    pub fn payload(&self) -> CMatrix<T> {
        match &self.payload {
            Payload::Single(g) => CMatrix::from_row_major(2, 2, g.to_vec()).unwrap(),
            Payload::Swap => {
                let mut m = CMatrix::zeros(4, 4);
                for (r, c) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                    m[(r, c)] = C::one();
                }
                m
            }
            Payload::Dense { matrix, .. } => matrix.clone(),
        }
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Control qubits in ascending order, each with its required value.
    pub fn controls(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        (0..usize::BITS as usize)
            .filter(|&q| self.ctrl_mask >> q & 1 == 1)
            .map(|q| (q, self.ctrl_val >> q & 1 == 1))
    }

    /// Highest qubit index the gate touches.
    pub fn max_qubit(&self) -> usize {
        self.max_qubit
    }

    /// One trace line: `name targets=q,.. controls=q:v,..`, with the
    /// parameter, if any, as `name(param)`.
    pub fn describe(&self) -> String {
        let mut s = self.name.to_string();
        if let Some(p) = self.param {
            write!(s, "({p})").unwrap();
        }
        s.push_str(" targets=");
        for (i, t) in self.targets.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            write!(s, "{t}").unwrap();
        }
        if self.ctrl_mask != 0 {
            s.push_str(" controls=");
            for (i, (q, v)) in self.controls().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write!(s, "{q}:{}", v as u8).unwrap();
            }
        }
        s
    }

    /// Applies the gate to a raw amplitude array over `num_qubits` qubits.
    ///
    /// Visits each group of amplitudes that differ only in the target bits,
    /// skipping groups whose control bits do not match.
    pub fn apply_to(&self, amps: &mut [C<T>], num_qubits: usize) -> Result<()> {
        if self.max_qubit >= num_qubits {
            return Err(HhlError::IndexOutOfRange {
                index: self.max_qubit,
                qubits: num_qubits,
            });
        }
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        let (ctrl_mask, ctrl_val) = (self.ctrl_mask, self.ctrl_val);

        let (matrix, permutation) = match &self.payload {
            Payload::Single([m00, m01, m10, m11]) => {
                let bit = 1usize << self.targets[0];
                let low = bit - 1;
                for j in 0..amps.len() / 2 {
                    // `j` with a zero inserted at the target bit.
                    let i = (j & !low) << 1 | j & low;
                    if i & ctrl_mask != ctrl_val {
                        continue;
                    }
                    let a0 = amps[i];
                    let a1 = amps[i | bit];
                    amps[i] = *m00 * a0 + *m01 * a1;
                    amps[i | bit] = *m10 * a0 + *m11 * a1;
                }
                return Ok(());
            }
            Payload::Swap => {
                let (lo, hi) = (1usize << self.targets[0], 1usize << self.targets[1]);
                for i in 0..amps.len() {
                    if i & lo != 0 && i & hi == 0 && i & ctrl_mask == ctrl_val {
                        amps.swap(i, i ^ lo ^ hi);
                    }
                }
                return Ok(());
            }
            Payload::Dense { matrix, permutation } => (matrix, permutation),
        };

        let dim = 1usize << self.targets.len();
        let target_mask = self.targets.iter().fold(0usize, |m, &q| m | 1 << q);
        let offsets: SmallVec<[usize; 16]> = (0..dim)
            .map(|loc| {
                self.targets
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| loc >> k & 1 == 1)
                    .fold(0usize, |acc, (_, &q)| acc | 1 << q)
            })
            .collect();
        let mut buf: SmallVec<[C<T>; 16]> = smallvec::smallvec![C::zero(); dim];
        for base in 0..amps.len() {
            if base & target_mask != 0 || base & ctrl_mask != ctrl_val {
                continue;
            }
            for (slot, &off) in buf.iter_mut().zip(&offsets) {
                *slot = amps[base | off];
            }
            if let Some(perm) = permutation {
                for (&src, &off) in perm.iter().zip(&offsets) {
                    amps[base | off] = buf[src];
                }
                continue;
            }
            for (row, &off) in offsets.iter().enumerate() {
                let mut acc = C::zero();
                for (col, &v) in buf.iter().enumerate() {
                    acc = acc + matrix[(row, col)] * v;
                }
                amps[base | off] = acc;
            }
        }
        Ok(())
    }
}

/// Adds qubit `q` to `mask`, rejecting repeats and indices past the mask width.
fn claim(mask: &mut usize, q: usize) -> Result<()> {
    let bit = u32::try_from(q)
        .ok()
        .and_then(|s| 1usize.checked_shl(s))
        .ok_or(HhlError::IndexOutOfRange {
            index: q,
            qubits: usize::BITS as usize,
        })?;
    if *mask & bit != 0 {
        return Err(HhlError::OverlappingQubits(q));
    }
    *mask |= bit;
    Ok(())
}

/// For a 0/1 permutation matrix, the column holding the 1 in each row.
fn permutation_of<T: Real>(m: &CMatrix<T>) -> Option<Vec<usize>> {
    (0..m.rows())
        .map(|r| {
            let mut hit = None;
            for c in 0..m.cols() {
                let v = m[(r, c)];
                if v == C::one() && hit.is_none() {
                    hit = Some(c);
                } else if v != C::zero() {
                    return None;
                }
            }
            hit
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_gates() {
        let m = CMatrix::<f64>::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            GateOp::new("bad", m, vec![0], vec![]),
            Err(HhlError::NonUnitaryGate { .. })
        ));
        assert_eq!(
            GateOp::<f64>::x(1).controlled(&[(1, true)]),
            Err(HhlError::OverlappingQubits(1))
        );
        assert!(GateOp::<f64>::swap(2, 2).is_err());
        assert!(matches!(
            GateOp::<f64>::h(0).controlled(&[(64, true)]),
            Err(HhlError::IndexOutOfRange { index: 64, .. })
        ));
        assert_eq!(
            GateOp::<f64>::h(70).apply_to(&mut [C::zero(); 2], 1),
            Err(HhlError::IndexOutOfRange { index: 70, qubits: 1 })
        );
        let mut amps = vec![C::<f64>::zero(); 4];
        assert_eq!(
            GateOp::<f64>::h(2).apply_to(&mut amps, 2),
            Err(HhlError::IndexOutOfRange { index: 2, qubits: 2 })
        );
    }

    #[test]
    fn describe_format() {
        let g = GateOp::<f64>::x(0).controlled(&[(2, true), (3, false)]).unwrap();
        assert_eq!(g.describe(), "x targets=0 controls=2:1,3:0");
        assert_eq!(GateOp::<f64>::ry(0.5, 1).describe(), "ry(0.5) targets=1");
    }

    #[test]
    fn swap_matches_its_payload() {
        let amps: Vec<C<f64>> = (0..16).map(|i| C::new(i as f64, (i * i) as f64 % 7.0)).collect();
        for (a, b, ctrl) in [(0, 1, 3), (3, 1, 0), (2, 0, 1)] {
            let fast = GateOp::<f64>::swap(a, b).unwrap().controlled(&[(ctrl, true)]).unwrap();
            let dense = GateOp::new("swap", fast.payload(), vec![a, b], vec![(ctrl, true)]).unwrap();
            let (mut x, mut y) = (amps.clone(), amps.clone());
            fast.apply_to(&mut x, 4).unwrap();
            dense.apply_to(&mut y, 4).unwrap();
            assert_eq!(x, y);
        }
    }

    #[test]
    fn dagger_is_adjoint() {
        let g = GateOp::<f64>::phase(0.3, 1).controlled(&[(0, false)]).unwrap().dagger("p_inv");
        assert_eq!(g.name(), "p_inv");
        assert_eq!(g.payload(), GateOp::<f64>::phase(0.3, 1).payload().adjoint());
        assert_eq!(g.controls().collect::<Vec<_>>(), vec![(0, false)]);
        let u = CMatrix::<f64>::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]).unwrap();
        let d = GateOp::new("cyc", u, vec![0, 1], vec![]);
        assert!(d.is_err());
        let u4 = CMatrix::<f64>::from_real_rows(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        let d = GateOp::new("cyc", u4.clone(), vec![0, 1], vec![]).unwrap().dagger("cyc_inv");
        assert_eq!(d.payload(), u4.adjoint());
        let mut amps: Vec<C<f64>> = (0..4).map(|i| cr(i as f64)).collect();
        let orig = amps.clone();
        GateOp::new("cyc", u4, vec![0, 1], vec![]).unwrap().apply_to(&mut amps, 2).unwrap();
        d.apply_to(&mut amps, 2).unwrap();
        assert_eq!(amps, orig);
    }

    #[test]
    fn swap_exchanges_qubits() {
        let mut amps = vec![C::<f64>::zero(); 4];
        amps[0b01] = C::one();
        GateOp::swap(0, 1).unwrap().apply_to(&mut amps, 2).unwrap();
        assert_eq!(amps[0b10], C::one());
    }
}
