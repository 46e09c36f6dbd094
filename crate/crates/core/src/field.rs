//! Anisotropy tensor field.
//!
//! A symmetric positive definite tensor `G` is factored through its spectral
//! decomposition `G = Q Λ Qᵗ` into the frame `M = Σ Qᵗ` (rows `σ_i q_iᵗ`,
//! `σ_i = √λ_i`), so that `MᵗM = G` and `vᵗGv = ‖Mv‖²`. The closed-form
//! integration requires `det M = 1`; [`normalize_det`] rescales the frame and
//! keeps the original determinant in [`FrameMatrix::raw_det`].

use nalgebra::SymmetricEigen;

use crate::{Error, Mat3, Result, Vec3};

/// Eigenvalues at or below this are rejected as not positive definite.
pub const EPS_PD: f64 = 1e-12;
/// Frames with a determinant at or below this cannot be normalized.
pub const EPS_DET: f64 = 1e-14;

/// Symmetric 3×3 metric, stored as its upper triangle
/// `[g11, g12, g13, g22, g23, g33]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnisotropyTensor {
    g: [f64; 6],
}

impl AnisotropyTensor {
    pub fn new(g11: f64, g12: f64, g13: f64, g22: f64, g23: f64, g33: f64) -> Self {
        Self {
            g: [g11, g12, g13, g22, g23, g33],
        }
    }

    pub fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0, 0.0, 1.0)
    }

    pub fn diagonal(a: f64, b: f64, c: f64) -> Self {
        Self::new(a, 0.0, 0.0, b, 0.0, c)
    }

    /// Symmetrizes `m` by averaging it with its transpose.
    pub fn from_matrix(m: &Mat3) -> Self {
        let s = |i: usize, j: usize| 0.5 * (m[(i, j)] + m[(j, i)]);
        Self::new(s(0, 0), s(0, 1), s(0, 2), s(1, 1), s(1, 2), s(2, 2))
    }

    pub fn upper(&self) -> [f64; 6] {
        self.g
    }

    pub fn matrix(&self) -> Mat3 {
        let [a, b, c, d, e, f] = self.g;
        Mat3::new(a, b, c, b, d, e, c, e, f)
    }
}

/// Factor `M` of an anisotropy tensor with `MᵗM = G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameMatrix {
    pub m: Mat3,
    /// Determinant of the factor before det-normalization.
    pub raw_det: f64,
}

impl FrameMatrix {
    pub fn identity() -> Self {
        Self {
            m: Mat3::identity(),
            raw_det: 1.0,
        }
    }

    /// Wraps an arbitrary matrix; `raw_det` is its own determinant.
    pub fn from_matrix(m: Mat3) -> Self {
        Self {
            m,
            raw_det: m.determinant(),
        }
    }

    pub fn det(&self) -> f64 {
        self.m.determinant()
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        self.m * v
    }
}

/// Spectral factorization `G = MᵗM` with `M = Σ Qᵗ`.
///
/// Eigenvalues are sorted in descending order and each eigenvector is signed
/// so that its largest-magnitude component is positive. If that leaves `Q`
/// as a reflection, the last eigenvector is flipped so `det M > 0`.
pub fn spectral_factor(g: &AnisotropyTensor) -> Result<FrameMatrix> {
    let eig = SymmetricEigen::new(g.matrix());
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let min_eigenvalue = eig.eigenvalues[order[2]];
    if !(min_eigenvalue > EPS_PD) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue });
    }

    let mut q: [Vec3; 3] = [Vec3::zeros(); 3];
    for (slot, &col) in order.iter().enumerate() {
        let mut v: Vec3 = eig.eigenvectors.column(col).into_owned();
        v /= v.norm();
        let lead = (0..3)
            .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
            .unwrap_or(0);
        if v[lead] < 0.0 {
            v = -v;
        }
        q[slot] = v;
    }
    if q[0].dot(&q[1].cross(&q[2])) < 0.0 {
        q[2] = -q[2];
    }

    let mut m = Mat3::zeros();
    for (row, &col) in order.iter().enumerate() {
        let sigma = eig.eigenvalues[col].sqrt();
        m.set_row(row, &(sigma * q[row]).transpose());
    }
    Ok(FrameMatrix::from_matrix(m))
}

/// Rescales `m` to unit determinant. `raw_det` records the input determinant.
pub fn normalize_det(m: &FrameMatrix) -> Result<FrameMatrix> {
    let det = m.m.determinant();
    if !(det > EPS_DET) {
        return Err(Error::DegenerateFrame { det });
    }
    Ok(FrameMatrix {
        m: m.m * det.powf(-1.0 / 3.0),
        raw_det: det,
    })
}

/// `vᵗ G v`.
pub fn quadratic_form(g: &AnisotropyTensor, v: &Vec3) -> f64 {
    v.dot(&(g.matrix() * v))
}

/// Factor and det-normalize in one step.
pub fn unit_frame(g: &AnisotropyTensor) -> Result<FrameMatrix> {
    normalize_det(&spectral_factor(g)?)
}

#[derive(Debug, Clone)]
struct Sample {
    position: Vec3,
    tensor: AnisotropyTensor,
    frame: FrameMatrix,
}

/// Anisotropy field: either one constant tensor or a set of samples queried
/// by nearest neighbour (lowest index wins ties). Frames are factored once at
/// construction.
#[derive(Debug, Clone)]
pub struct TensorField {
    constant: bool,
    samples: Vec<Sample>,
}

impl TensorField {
    pub fn constant(tensor: AnisotropyTensor) -> Result<Self> {
        Ok(Self {
            constant: true,
            samples: vec![Sample {
                position: Vec3::zeros(),
                tensor,
                frame: unit_frame(&tensor)?,
            }],
        })
    }

    pub fn identity() -> Self {
        Self::constant(AnisotropyTensor::identity()).expect("identity is SPD")
    }

    pub fn nearest(samples: Vec<(Vec3, AnisotropyTensor)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyField);
        }
        let samples = samples
            .into_iter()
            .map(|(position, tensor)| {
                Ok(Sample {
                    position,
                    tensor,
                    frame: unit_frame(&tensor)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            constant: false,
            samples,
        })
    }

    pub fn is_constant(&self) -> bool {
        self.constant
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> impl Iterator<Item = (Vec3, AnisotropyTensor)> + '_ {
        self.samples.iter().map(|s| (s.position, s.tensor))
    }

    /// Det-normalized frame at `x`.
    pub fn eval(&self, x: &Vec3) -> Result<FrameMatrix> {
        if self.samples.is_empty() {
            return Err(Error::EmptyField);
        }
        if self.constant {
            return Ok(self.samples[0].frame);
        }
        let mut best = 0;
        let mut best_d2 = f64::INFINITY;
        for (i, s) in self.samples.iter().enumerate() {
            let d2 = (s.position - x).norm_squared();
            if d2 < best_d2 {
                best = i;
                best_d2 = d2;
            }
        }
        Ok(self.samples[best].frame)
    }
}

/// Free-function form of [`TensorField::eval`].
pub fn field_eval(field: &TensorField, x: &Vec3) -> Result<FrameMatrix> {
    field.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_abs(m: &Mat3) -> f64 {
        m.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    }

    fn random_spd(rng: &mut ChaCha8Rng) -> AnisotropyTensor {
        let r = Mat3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        AnisotropyTensor::from_matrix(&(r.transpose() * r + Mat3::identity()))
    }

    #[test]
    fn identity_factors_to_identity() {
        let f = spectral_factor(&AnisotropyTensor::identity()).unwrap();
        assert!(max_abs(&(f.m - Mat3::identity())) < 1e-15);
        assert!((f.raw_det - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_factor_has_sqrt_eigenvalues() {
        let g = AnisotropyTensor::diagonal(4.0, 1.0, 1.0);
        let f = spectral_factor(&g).unwrap();
        assert!(max_abs(&(f.m.transpose() * f.m - g.matrix())) < 1e-14);
        // Descending order puts σ = 2 in the first row.
        assert!((f.m[(0, 0)] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn random_spd_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let g = random_spd(&mut rng);
            let f = spectral_factor(&g).unwrap();
            assert!(max_abs(&(f.m.transpose() * f.m - g.matrix())) <= 1e-10);
            assert!(f.raw_det > 0.0);
            let n = normalize_det(&f).unwrap();
            assert!((n.det() - 1.0).abs() < 1e-12);
            let scaled = g.matrix() * f.raw_det.powf(-2.0 / 3.0);
            assert!(max_abs(&(n.m.transpose() * n.m - scaled)) <= 1e-10);
        }
    }

    #[test]
    fn eigenvector_matrix_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let g = random_spd(&mut rng);
            let f = spectral_factor(&g).unwrap();
            // Rows of M are σ_i q_iᵗ; recover Q by normalizing the rows.
            let mut q = f.m;
            for r in 0..3 {
                let n = q.row(r).norm();
                q.row_mut(r).scale_mut(1.0 / n);
            }
            assert!(max_abs(&(q * q.transpose() - Mat3::identity())) < 1e-12);
        }
    }

    #[test]
    fn rejects_indefinite_and_semidefinite() {
        let g = AnisotropyTensor::diagonal(1.0, 0.0, 1.0);
        assert!(matches!(
            spectral_factor(&g),
            Err(Error::NotPositiveDefinite { .. })
        ));
        let g = AnisotropyTensor::diagonal(1.0, -2.0, 1.0);
        assert!(spectral_factor(&g).is_err());
    }

    #[test]
    fn normalize_uniform_scale() {
        let f = normalize_det(&FrameMatrix::from_matrix(Mat3::identity() * 2.0)).unwrap();
        assert!(max_abs(&(f.m - Mat3::identity())) < 1e-15);
        assert!((f.raw_det - 8.0).abs() < 1e-14);

        let f = normalize_det(&FrameMatrix::identity()).unwrap();
        assert_eq!(f.raw_det, 1.0);
        assert!(max_abs(&(f.m - Mat3::identity())) < 1e-15);
    }

    #[test]
    fn normalize_anisotropic() {
        let m = Mat3::from_diagonal(&Vec3::new(4.0, 1.0, 1.0));
        let f = normalize_det(&FrameMatrix::from_matrix(m)).unwrap();
        assert!((f.det() - 1.0).abs() < 1e-12);
        assert!((f.m[(0, 0)] - 4.0 * 4f64.powf(-1.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn normalize_rejects_degenerate() {
        let m = Mat3::from_diagonal(&Vec3::new(1.0, 1.0, 0.0));
        assert!(matches!(
            normalize_det(&FrameMatrix::from_matrix(m)),
            Err(Error::DegenerateFrame { .. })
        ));
    }

    #[test]
    fn quadratic_form_examples() {
        let v = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(quadratic_form(&AnisotropyTensor::identity(), &v), 14.0);
        let g = AnisotropyTensor::diagonal(4.0, 1.0, 1.0);
        assert_eq!(quadratic_form(&g, &Vec3::x()), 4.0);
        assert_eq!(quadratic_form(&g, &Vec3::zeros()), 0.0);
    }

    #[test]
    fn field_lookup() {
        let id = TensorField::identity();
        let f = id.eval(&Vec3::new(3.0, -1.0, 8.0)).unwrap();
        assert_eq!(f.m, Mat3::identity());

        let field = TensorField::nearest(vec![
            (Vec3::zeros(), AnisotropyTensor::diagonal(4.0, 1.0, 1.0)),
            (Vec3::new(10.0, 0.0, 0.0), AnisotropyTensor::identity()),
        ])
        .unwrap();
        let s0 = unit_frame(&AnisotropyTensor::diagonal(4.0, 1.0, 1.0)).unwrap();
        assert_eq!(field.eval(&Vec3::new(1.0, 0.0, 0.0)).unwrap(), s0);
        assert_eq!(field.eval(&Vec3::new(5.0, 0.0, 0.0)).unwrap(), s0);
        assert_eq!(
            field.eval(&Vec3::new(9.0, 0.0, 0.0)).unwrap().m,
            Mat3::identity()
        );
        assert!(matches!(TensorField::nearest(vec![]), Err(Error::EmptyField)));
    }

    proptest! {
        #[test]
        fn quadratic_form_matches_frame_norm(
            entries in proptest::array::uniform9(-1.0f64..1.0),
            v in proptest::array::uniform3(-5.0f64..5.0),
        ) {
            let r = Mat3::from_row_slice(&entries);
            let g = AnisotropyTensor::from_matrix(&(r.transpose() * r + Mat3::identity()));
            let v = Vec3::from(v);
            let m = spectral_factor(&g).unwrap();
            let q = quadratic_form(&g, &v);
            prop_assert!(q >= 0.0);
            prop_assert!((q - m.apply(&v).norm_squared()).abs() <= 1e-10 * (1.0 + q));
        }
    }
}
