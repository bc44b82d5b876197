//! Haar sampling and actions for the sign-flip group `{±1}ⁿ`, the symmetric
//! group `Sₙ` and the rotation group `SO(n)`.

use crate::error::{check_len, domain, Error, Result};
use crate::linalg::Matrix;
use crate::rng::SeededStream;
use crate::scalar::Real;

/// Largest dimension accepted by [`enumerate_signs`].
pub const MAX_ENUMERATION_DIM: usize = 20;

/// Element of `{−1, +1}ⁿ`, acting by coordinatewise sign flips.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector {
    signs: Vec<i8>,
}

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return domain("sign vector must have dimension >= 1");
        }
        if let Some(bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return domain(format!("sign entries must be ±1, found {bad}"));
        }
        Ok(SignVector { signs })
    }

    pub fn identity(n: usize) -> Self {
        SignVector { signs: vec![1; n] }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn dimension(&self) -> usize {
        self.signs.len()
    }
}

/// Bijection of `0..n`; acts by relabeling, `(g·x)_i = x_{mapping[i]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        if mapping.is_empty() {
            return domain("permutation must have dimension >= 1");
        }
        let mut seen = vec![false; mapping.len()];
        for &i in &mapping {
            if i >= mapping.len() || std::mem::replace(&mut seen[i], true) {
                return domain("mapping is not a bijection of 0..n");
            }
        }
        Ok(Permutation { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            mapping: (0..n).collect(),
        }
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn dimension(&self) -> usize {
        self.mapping.len()
    }
}

/// Element of `SO(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation<F> {
    matrix: Matrix<F>,
}

fn orthogonality_tolerance<F: Real>(n: usize) -> F {
    F::lit(1e-10).max(F::epsilon() * F::from_usize_lossy(100 * n.max(1)))
}

impl<F: Real> Rotation<F> {
    /// Validates `MᵀM = I` and `det M = 1` to within `1e-10`.
    pub fn new(matrix: Matrix<F>) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return domain("rotation must be a non-empty square matrix");
        }
        let n = matrix.rows();
        let tol = orthogonality_tolerance::<F>(n);
        let gram = matrix.transpose().matmul(&matrix)?;
        if gram.max_abs_diff(&Matrix::identity(n)) > tol {
            return domain("matrix is not orthogonal");
        }
        if (matrix.determinant()? - F::one()).abs() > tol {
            return domain("matrix has determinant != 1");
        }
        Ok(Rotation { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Rotation {
            matrix: Matrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<F> {
        self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }
}

/// A sampled group element together with its action on `ℝⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement<F> {
    Signs(SignVector),
    Permutation(Permutation),
    Rotation(Rotation<F>),
}

impl<F: Real> GroupElement<F> {
    pub fn dimension(&self) -> usize {
        match self {
            GroupElement::Signs(s) => s.dimension(),
            GroupElement::Permutation(p) => p.dimension(),
            GroupElement::Rotation(r) => r.dimension(),
        }
    }

    /// `π_g x`.
    pub fn apply(&self, x: &[F]) -> Result<Vec<F>> {
        check_len(self.dimension(), x.len())?;
        Ok(match self {
            GroupElement::Signs(s) => x
                .iter()
                .zip(&s.signs)
                .map(|(&v, &e)| if e < 0 { -v } else { v })
                .collect(),
            GroupElement::Permutation(p) => p.mapping.iter().map(|&i| x[i]).collect(),
            GroupElement::Rotation(r) => r.matrix.mul_vec(x)?,
        })
    }
}

impl<F> From<SignVector> for GroupElement<F> {
    fn from(s: SignVector) -> Self {
        GroupElement::Signs(s)
    }
}

impl<F> From<Permutation> for GroupElement<F> {
    fn from(p: Permutation) -> Self {
        GroupElement::Permutation(p)
    }
}

impl<F> From<Rotation<F>> for GroupElement<F> {
    fn from(r: Rotation<F>) -> Self {
        GroupElement::Rotation(r)
    }
}

/// Free-function form of [`GroupElement::apply`].
pub fn apply<F: Real>(g: &GroupElement<F>, x: &[F]) -> Result<Vec<F>> {
    g.apply(x)
}

fn require_dim(n: usize) -> Result<()> {
    if n == 0 {
        domain("group dimension must be >= 1")
    } else {
        Ok(())
    }
}

/// Uniform element of `{±1}ⁿ`: independent fair signs.
pub fn sample_signs(n: usize, stream: &mut SeededStream) -> Result<SignVector> {
    require_dim(n)?;
    Ok(SignVector {
        signs: (0..n).map(|_| if stream.coin() { -1 } else { 1 }).collect(),
    })
}

/// Uniform element of `Sₙ` by Fisher–Yates.
pub fn sample_permutation(n: usize, stream: &mut SeededStream) -> Result<Permutation> {
    require_dim(n)?;
    let mut mapping: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = stream.below(i + 1);
        mapping.swap(i, j);
    }
    Ok(Permutation { mapping })
}

/// Haar element of `SO(n)`.
///
/// QR of a standard Gaussian matrix, columns of `Q` rescaled by the signs of
/// `diag(R)` (Haar on `O(n)`), then the first column negated when the
/// determinant is `-1`.
pub fn sample_rotation<F: Real>(n: usize, stream: &mut SeededStream) -> Result<Rotation<F>> {
    require_dim(n)?;
    let gauss = Matrix::from_row_major(n, n, (0..n * n).map(|_| stream.normal_as::<F>()).collect())?;
    let (mut q, r_diag) = gauss.householder_qr()?;
    for (j, &d) in r_diag.iter().enumerate() {
        if d < F::zero() {
            q.scale_column(j, -F::one());
        }
    }
    if q.determinant()? < F::zero() {
        q.scale_column(0, -F::one());
    }
    Ok(Rotation { matrix: q })
}

/// All `2ⁿ` sign vectors; entry `k` has `−1` exactly at the set bits of `k`.
pub fn enumerate_signs(n: usize) -> Result<Vec<SignVector>> {
    require_dim(n)?;
    if n > MAX_ENUMERATION_DIM {
        return Err(Error::Capacity(format!(
            "sign enumeration limited to n <= {MAX_ENUMERATION_DIM}, got {n}"
        )));
    }
    Ok((0u64..1 << n)
        .map(|k| SignVector {
            signs: (0..n).map(|i| if k >> i & 1 == 1 { -1 } else { 1 }).collect(),
        })
        .collect())
}

/// A Haar sampler for one of the concrete groups.
pub trait GroupSampler<F: Real>: Sync {
    fn dimension(&self) -> usize;

    fn sample(&self, stream: &mut SeededStream) -> Result<GroupElement<F>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignFlipGroup {
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetricGroup {
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RotationGroup {
    pub n: usize,
}

impl SignFlipGroup {
    pub fn enumerate<F: Real>(&self) -> Result<Vec<GroupElement<F>>> {
        Ok(enumerate_signs(self.n)?.into_iter().map(GroupElement::Signs).collect())
    }
}

impl<F: Real> GroupSampler<F> for SignFlipGroup {
    fn dimension(&self) -> usize {
        self.n
    }

    fn sample(&self, stream: &mut SeededStream) -> Result<GroupElement<F>> {
        sample_signs(self.n, stream).map(GroupElement::Signs)
    }
}

impl<F: Real> GroupSampler<F> for SymmetricGroup {
    fn dimension(&self) -> usize {
        self.n
    }

    fn sample(&self, stream: &mut SeededStream) -> Result<GroupElement<F>> {
        sample_permutation(self.n, stream).map(GroupElement::Permutation)
    }
}

impl<F: Real> GroupSampler<F> for RotationGroup {
    fn dimension(&self) -> usize {
        self.n
    }

    fn sample(&self, stream: &mut SeededStream) -> Result<GroupElement<F>> {
        sample_rotation(self.n, stream).map(GroupElement::Rotation)
    }
}
