//! Dense operators, states and the metrics used to compare them.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

const HERMITIAN_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// Sum of singular values.
pub fn trace_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().sum()
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    let dev = (m - m.adjoint()).norm();
    let scale = m.norm().max(1.0);
    if dev > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian {
            deviation: dev,
            scale,
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
struct Eigen {
    values: DVector<f64>,
    vectors: CMatrix,
}

/// A Hermitian matrix with a lazily cached eigendecomposition.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: CMatrix,
    eigen: OnceLock<Eigen>,
}

impl HermitianOperator {
    /// Validates and symmetrizes `matrix`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        check_hermitian(&matrix)?;
        let sym = (&matrix + matrix.adjoint()).scale(0.5);
        Ok(Self::from_hermitian_unchecked(sym))
    }

    pub fn from_real(matrix: DMatrix<f64>) -> Result<Self> {
        Self::new(matrix.map(|x| C64::new(x, 0.0)))
    }

    pub(crate) fn from_hermitian_unchecked(matrix: CMatrix) -> Self {
        Self {
            matrix,
            eigen: OnceLock::new(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_hermitian_unchecked(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_hermitian_unchecked(identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    fn eigen(&self) -> &Eigen {
        self.eigen.get_or_init(|| {
            let e = self.matrix.clone().symmetric_eigen();
            Eigen {
                values: e.eigenvalues,
                vectors: e.eigenvectors,
            }
        })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigen().values
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigen().vectors
    }

    /// Eigenvector for the smallest eigenvalue, with its eigenvalue.
    pub fn ground_state(&self) -> (f64, CVector) {
        let e = self.eigen();
        let i = e.values.argmin().0;
        (e.values[i], e.vectors.column(i).into_owned())
    }

    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues().amax()
    }

    /// `exp(-i theta H)` as a raw matrix.
    pub fn expm_matrix(&self, theta: f64) -> CMatrix {
        let e = self.eigen();
        let mut w = e.vectors.clone();
        for (j, mut col) in w.column_iter_mut().enumerate() {
            col *= C64::from_polar(1.0, -theta * e.values[j]);
        }
        w * e.vectors.adjoint()
    }

    /// `exp(-i theta H) v` without forming the exponential.
    pub fn expm_apply(&self, theta: f64, v: &CVector) -> CVector {
        let e = self.eigen();
        let mut c = e.vectors.ad_mul(v);
        for (j, z) in c.iter_mut().enumerate() {
            *z *= C64::from_polar(1.0, -theta * e.values[j]);
        }
        &e.vectors * c
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_hermitian_unchecked(self.matrix.map(|z| z * s))
    }

    /// `Σ w_i H_i` over operators of one dimension.
    pub fn linear_combination(parts: &[(f64, &HermitianOperator)]) -> Result<Self> {
        let dim = parts
            .first()
            .map(|p| p.1.dim())
            .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
        let mut acc = CMatrix::zeros(dim, dim);
        for (w, h) in parts {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: h.dim(),
                });
            }
            acc.zip_apply(h.matrix(), |a, b| *a += b * *w);
        }
        Ok(Self::from_hermitian_unchecked(acc))
    }
}

/// `exp(-i theta H)`.
pub fn herm_expm(h: &HermitianOperator, theta: f64) -> UnitaryOperator {
    UnitaryOperator {
        matrix: h.expm_matrix(theta),
    }
}

/// A unitary matrix, checked at construction.
#[derive(Debug, Clone)]
pub struct UnitaryOperator {
    matrix: CMatrix,
}

impl UnitaryOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = check_square(&matrix)?;
        let dev = max_abs_entry(&(matrix.ad_mul(&matrix) - identity(dim)));
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn compose(&self, other: &UnitaryOperator) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// Max-entry deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        max_abs_entry(&(self.matrix.ad_mul(&self.matrix) - identity(self.dim())))
    }

    pub fn apply(&self, psi: &QuantumState) -> Result<QuantumState> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: psi.dim(),
            });
        }
        Ok(QuantumState::normalized(&self.matrix * psi.amplitudes()))
    }

    /// Spectral-norm distance between two operators.
    pub fn distance(&self, other: &UnitaryOperator) -> f64 {
        spectral_norm(&(&self.matrix - &other.matrix))
    }
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: CVector,
}

impl QuantumState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let n = amplitudes.norm();
        if amplitudes.is_empty() || (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(v: CVector) -> Self {
        let n = v.norm();
        Self {
            amplitudes: v.unscale(n),
        }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    /// `|+⟩^{⊗n}`.
    pub fn plus_state(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let a = C64::new((dim as f64).sqrt().recip(), 0.0);
        Self {
            amplitudes: CVector::from_element(dim, a),
        }
    }

    /// Tensor product of single-site states, first factor most significant.
    pub fn product(factors: &[QuantumState]) -> Result<Self> {
        let mut it = factors.iter();
        let first = it
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty product state".into()))?;
        let mut acc = first.amplitudes.clone();
        for f in it {
            acc = acc.kronecker(&f.amplitudes);
        }
        Ok(Self { amplitudes: acc })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn inner(&self, other: &QuantumState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator {
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }
}

/// Trace distance of two pure states, `2 sqrt(1 - |⟨ψ|φ⟩|²)`.
///
/// Evaluated as twice the norm of the component of `phi` orthogonal to `psi`,
/// which keeps full relative precision for nearly equal states.
pub fn pure_trace_distance(psi: &QuantumState, phi: &QuantumState) -> f64 {
    let ov = psi.inner(phi);
    let perp = phi.amplitudes() - psi.amplitudes() * ov;
    2.0 * perp.norm()
}

/// A density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        check_hermitian(&matrix)
            .map_err(|e| Error::InvalidDensity(format!("not Hermitian ({e})")))?;
        let m = (&matrix + matrix.adjoint()).scale(0.5);
        let tr = m.trace().re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min = m.clone().symmetric_eigenvalues().min();
        if min < -1e-10 {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix: m })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: identity(dim).unscale(dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(O ρ)`.
    pub fn expectation(&self, o: &HermitianOperator) -> Result<f64> {
        if o.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: o.dim(),
            });
        }
        Ok((o.matrix() * &self.matrix).trace().re)
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &CMatrix) -> Self {
        Self {
            matrix: u * &self.matrix * u.adjoint(),
        }
    }

    /// Checks the density-operator invariants on the stored matrix.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.matrix.clone()).map(|_| ())
    }
}

/// Schatten-1 distance `‖a − b‖₁`, without a factor 1/2.
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let diff = a.matrix() - b.matrix();
    let diff = (&diff + diff.adjoint()).scale(0.5);
    Ok(diff.symmetric_eigenvalues().iter().map(|x| x.abs()).sum())
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn fidelity(psi: &QuantumState, rho: &DensityOperator) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: psi.dim(),
            right: rho.dim(),
        });
    }
    let v = psi.amplitudes();
    Ok(v.dotc(&(rho.matrix() * v)).re)
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use rand::Rng;

    pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> HermitianOperator {
        let a = CMatrix::from_fn(dim, dim, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        HermitianOperator::new((&a + a.adjoint()).scale(0.5)).unwrap()
    }

    pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> QuantumState {
        let v = CVector::from_fn(dim, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        QuantumState::normalized(v)
    }

    /// Scaling and squaring with a truncated Taylor series.
    pub fn expm_taylor(a: &CMatrix) -> CMatrix {
        let n = a.norm();
        let s = if n > 0.5 {
            (n / 0.5).log2().ceil() as i32
        } else {
            0
        };
        let b = a.unscale(2f64.powi(s));
        let dim = a.nrows();
        let mut term = identity(dim);
        let mut sum = identity(dim);
        for k in 1..30 {
            term = &term * &b / C64::new(k as f64, 0.0);
            sum += &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }

    pub fn pauli_z() -> HermitianOperator {
        HermitianOperator::from_real(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]))
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn expm_of_zero_is_identity() {
        for dim in [1, 3, 8] {
            let u = herm_expm(&HermitianOperator::zeros(dim), 1.0);
            assert!(max_abs_entry(&(u.matrix() - identity(dim))) < 1e-15);
        }
    }

    #[test]
    fn expm_of_pauli_z() {
        let u = herm_expm(&pauli_z(), std::f64::consts::FRAC_PI_2);
        let expect = CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
        ]));
        assert!(max_abs_entry(&(u.matrix() - expect)) < 1e-15);
    }

    #[test]
    fn expm_matches_taylor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let h = random_hermitian(&mut rng, 4);
            let u = herm_expm(&h, 0.37);
            let oracle = expm_taylor(&(h.matrix() * C64::new(0.0, -0.37)));
            assert!(max_abs_entry(&(u.matrix() - oracle)) < 1e-11);
        }
    }

    #[test]
    fn expm_apply_matches_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hermitian(&mut rng, 6);
        let psi = random_state(&mut rng, 6);
        let a = h.expm_apply(0.8, psi.amplitudes());
        let b = h.expm_matrix(0.8) * psi.amplitudes();
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        );
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            HermitianOperator::new(CMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn trace_distance_examples() {
        let a = QuantumState::basis(2, 0);
        let b = QuantumState::basis(2, 1);
        assert!(trace_distance(&a.to_density(), &a.to_density()).unwrap() < 1e-15);
        assert!((trace_distance(&a.to_density(), &b.to_density()).unwrap() - 2.0).abs() < 1e-14);

        let c = QuantumState::new(CVector::from_vec(vec![
            C64::new(0.99f64.sqrt(), 0.0),
            C64::new(0.01f64.sqrt(), 0.0),
        ]))
        .unwrap();
        let d = trace_distance(&a.to_density(), &c.to_density()).unwrap();
        assert!((d - 0.2).abs() < 1e-12);
        assert!((pure_trace_distance(&a, &c) - 0.2).abs() < 1e-14);
    }

    #[test]
    fn trace_distance_dimension_mismatch() {
        let a = DensityOperator::maximally_mixed(2);
        let b = DensityOperator::maximally_mixed(4);
        assert!(matches!(
            trace_distance(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn fidelity_examples() {
        let psi = QuantumState::basis(2, 0);
        let phi = QuantumState::basis(2, 1);
        assert!((fidelity(&psi, &psi.to_density()).unwrap() - 1.0).abs() < 1e-15);
        assert!(fidelity(&psi, &phi.to_density()).unwrap().abs() < 1e-15);
        let mix = DensityOperator::new(
            (psi.to_density().matrix() + phi.to_density().matrix()).scale(0.5),
        )
        .unwrap();
        assert!((fidelity(&psi, &mix).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn density_validation() {
        let bad = CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::new(1.5, 0.0),
            C64::new(-0.5, 0.0),
        ]));
        assert!(DensityOperator::new(bad).is_err());
        let bad_trace = identity(2);
        assert!(DensityOperator::new(bad_trace).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn expm_inverse_pairs(seed in any::<u64>(), dim in 1usize..=64, theta in -3.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_hermitian(&mut rng, dim);
            let u = herm_expm(&h, theta);
            let v = herm_expm(&h, -theta);
            let p = u.compose(&v);
            prop_assert!(max_abs_entry(&(p.matrix() - identity(dim))) < 1e-10);
            prop_assert!(u.unitarity_defect() < 1e-10);
        }

        #[test]
        fn trace_distance_triangle(seed in any::<u64>(), dim in 2usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s: Vec<DensityOperator> =
                (0..3).map(|_| random_state(&mut rng, dim).to_density()).collect();
            let ab = trace_distance(&s[0], &s[1]).unwrap();
            let bc = trace_distance(&s[1], &s[2]).unwrap();
            let ac = trace_distance(&s[0], &s[2]).unwrap();
            prop_assert!(ac <= ab + bc + 1e-10);
            prop_assert!((ab - trace_distance(&s[1], &s[0]).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn pure_distance_matches_eigen_sum(seed in any::<u64>(), dim in 2usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_state(&mut rng, dim);
            let b = random_state(&mut rng, dim);
            let d1 = pure_trace_distance(&a, &b);
            let d2 = trace_distance(&a.to_density(), &b.to_density()).unwrap();
            prop_assert!((d1 - d2).abs() < 1e-10);
        }
    }
}
