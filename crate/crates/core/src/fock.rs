//! Truncated Fock spaces, ladder matrices and the dense operator algebra.
//!
//! A [`FockSpace`] keeps `D` number states per factor; with `d` factors the
//! composite index of `Φ_{n₁,…,n_d}` is row-major (first factor slowest), so
//! for two modes `Φ_{n,m}` sits at `n·D + m`.
//!
//! Truncation corrupts only the rows and columns next to the top of each
//! factor. Operators record the width of that band in `trust_margin`;
//! [`interior_defect`] compares two operators on the block whose every factor
//! index is below `D − margin`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockSpace {
    dim: usize,
    factors: usize,
}

impl FockSpace {
    pub fn new(dim: usize, factors: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if factors == 0 {
            return Err(Error::NoFactors);
        }
        Ok(Self { dim, factors })
    }

    pub fn single(dim: usize) -> Result<Self> {
        Self::new(dim, 1)
    }

    pub fn two_mode(dim: usize) -> Result<Self> {
        Self::new(dim, 2)
    }

    /// Per-factor dimension `D`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    /// Side of the composite matrices, `Dᵈ`.
    pub fn total_dim(&self) -> usize {
        self.dim.pow(self.factors as u32)
    }

    /// The one-mode space with the same per-factor dimension.
    pub fn factor_space(&self) -> FockSpace {
        FockSpace {
            dim: self.dim,
            factors: 1,
        }
    }

    pub fn composite_index(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.factors {
            return Err(Error::FactorCount {
                expected: self.factors,
                found: index.len(),
            });
        }
        if index.iter().any(|&n| n >= self.dim) {
            return Err(Error::IndexOutOfRange {
                index: index.to_vec(),
                dim: self.dim,
            });
        }
        Ok(index.iter().fold(0, |acc, &n| acc * self.dim + n))
    }

    pub fn multi_index(&self, mut composite: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors];
        for slot in out.iter_mut().rev() {
            *slot = composite % self.dim;
            composite /= self.dim;
        }
        out
    }

    /// Composite indices whose every factor index is below `D − margin`.
    pub fn interior_indices(&self, margin: usize) -> Result<Vec<usize>> {
        if margin >= self.dim {
            return Err(Error::EmptyInterior {
                margin,
                dim: self.dim,
            });
        }
        let keep = self.dim - margin;
        Ok((0..self.total_dim())
            .filter(|&i| self.multi_index(i).iter().all(|&n| n < keep))
            .collect())
    }

    fn require_factors(&self, expected: usize) -> Result<()> {
        if self.factors != expected {
            return Err(Error::FactorCount {
                expected,
                found: self.factors,
            });
        }
        Ok(())
    }

    fn require_same(&self, other: &FockSpace) -> Result<()> {
        if self != other {
            return Err(Error::SpaceMismatch {
                left: *self,
                right: *other,
            });
        }
        Ok(())
    }
}

/// Coefficients of a state in the number basis.
///
/// `tail_bound` is an upper bound on the norm of the part of the represented
/// vector that lies beyond the truncation. It is zero for finitely supported
/// vectors and set by the series constructors in [`crate::pairs`]. Applying
/// an operator to a vector with a nonzero tail yields an uncertified
/// (infinite) bound unless the caller knows better.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    space: FockSpace,
    coeffs: DVector<C64>,
    tail_bound: f64,
}

impl FockVector {
    pub fn from_coeffs(space: FockSpace, coeffs: DVector<C64>, tail_bound: f64) -> Result<Self> {
        if coeffs.len() != space.total_dim() {
            return Err(Error::Shape {
                rows: coeffs.len(),
                cols: 1,
                side: space.total_dim(),
            });
        }
        Ok(Self {
            space,
            coeffs,
            tail_bound: tail_bound.max(0.0),
        })
    }

    pub fn zeros(space: FockSpace) -> Self {
        Self {
            space,
            coeffs: DVector::zeros(space.total_dim()),
            tail_bound: 0.0,
        }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn coeffs(&self) -> &DVector<C64> {
        &self.coeffs
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn with_tail_bound(mut self, tail_bound: f64) -> Self {
        self.tail_bound = tail_bound.max(0.0);
        self
    }

    pub fn get(&self, index: &[usize]) -> Result<C64> {
        Ok(self.coeffs[self.space.composite_index(index)?])
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs.norm_squared()
    }

    /// Norm restricted to composite indices with every factor index below
    /// `D − margin`.
    pub fn interior_norm(&self, margin: usize) -> Result<f64> {
        let idx = self.space.interior_indices(margin)?;
        Ok(idx
            .iter()
            .map(|&i| self.coeffs[i].norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Highest composite index carrying a nonzero coefficient.
    pub fn support_max(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != ZERO)
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &FockVector) -> Result<C64> {
        self.space.require_same(&other.space)?;
        Ok(self.coeffs.dotc(&other.coeffs))
    }

    pub fn add(&self, other: &FockVector) -> Result<FockVector> {
        self.space.require_same(&other.space)?;
        Ok(FockVector {
            space: self.space,
            coeffs: &self.coeffs + &other.coeffs,
            tail_bound: self.tail_bound + other.tail_bound,
        })
    }

    pub fn sub(&self, other: &FockVector) -> Result<FockVector> {
        self.space.require_same(&other.space)?;
        Ok(FockVector {
            space: self.space,
            coeffs: &self.coeffs - &other.coeffs,
            tail_bound: self.tail_bound + other.tail_bound,
        })
    }

    pub fn scale(&self, factor: C64) -> FockVector {
        FockVector {
            space: self.space,
            coeffs: &self.coeffs * factor,
            tail_bound: self.tail_bound * factor.norm(),
        }
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &FockVector) -> Result<f64> {
        self.space.require_same(&other.space)?;
        Ok((&self.coeffs - &other.coeffs).norm())
    }
}

/// Inner product `⟨u, v⟩`, conjugate-linear in `u`.
pub fn inner(u: &FockVector, v: &FockVector) -> Result<C64> {
    u.inner(v)
}

/// Dense operator on a truncated space.
///
/// `trust_margin` is the per-factor width of the boundary band whose rows and
/// columns may differ from the untruncated operator. Composition adds
/// margins; it saturates at `D`, which marks an operator with no trusted
/// interior.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    space: FockSpace,
    matrix: DMatrix<C64>,
    trust_margin: usize,
}

impl FockOperator {
    pub fn from_matrix(space: FockSpace, matrix: DMatrix<C64>, trust_margin: usize) -> Result<Self> {
        let side = space.total_dim();
        if matrix.nrows() != side || matrix.ncols() != side {
            return Err(Error::Shape {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                side,
            });
        }
        Ok(Self {
            space,
            matrix,
            trust_margin: trust_margin.min(space.dim),
        })
    }

    pub fn identity(space: FockSpace) -> Self {
        let side = space.total_dim();
        Self {
            space,
            matrix: DMatrix::identity(side, side),
            trust_margin: 0,
        }
    }

    pub fn zeros(space: FockSpace) -> Self {
        let side = space.total_dim();
        Self {
            space,
            matrix: DMatrix::zeros(side, side),
            trust_margin: 0,
        }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trust_margin(&self) -> usize {
        self.trust_margin
    }

    pub fn with_trust_margin(mut self, trust_margin: usize) -> Self {
        self.trust_margin = trust_margin.min(self.space.dim);
        self
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        self.space.require_same(&v.space)?;
        let tail_bound = if v.tail_bound == 0.0 { 0.0 } else { f64::INFINITY };
        Ok(FockVector {
            space: self.space,
            coeffs: &self.matrix * &v.coeffs,
            tail_bound,
        })
    }

    /// `self · other`.
    pub fn compose(&self, other: &FockOperator) -> Result<FockOperator> {
        self.space.require_same(&other.space)?;
        Ok(FockOperator {
            space: self.space,
            matrix: &self.matrix * &other.matrix,
            trust_margin: (self.trust_margin + other.trust_margin).min(self.space.dim),
        })
    }

    pub fn add(&self, other: &FockOperator) -> Result<FockOperator> {
        self.space.require_same(&other.space)?;
        Ok(FockOperator {
            space: self.space,
            matrix: &self.matrix + &other.matrix,
            trust_margin: self.trust_margin.max(other.trust_margin),
        })
    }

    pub fn sub(&self, other: &FockOperator) -> Result<FockOperator> {
        self.space.require_same(&other.space)?;
        Ok(FockOperator {
            space: self.space,
            matrix: &self.matrix - &other.matrix,
            trust_margin: self.trust_margin.max(other.trust_margin),
        })
    }

    pub fn scale(&self, factor: C64) -> FockOperator {
        FockOperator {
            space: self.space,
            matrix: &self.matrix * factor,
            trust_margin: self.trust_margin,
        }
    }

    /// `self + shift·𝟙`.
    pub fn shift(&self, shift: C64) -> FockOperator {
        let mut matrix = self.matrix.clone();
        for i in 0..matrix.nrows() {
            matrix[(i, i)] += shift;
        }
        FockOperator {
            space: self.space,
            matrix,
            trust_margin: self.trust_margin,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> FockOperator {
        FockOperator {
            space: self.space,
            matrix: self.matrix.adjoint(),
            trust_margin: self.trust_margin,
        }
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &FockOperator) -> Result<FockOperator> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    pub fn power(&self, k: u32) -> FockOperator {
        let mut out = FockOperator::identity(self.space);
        for _ in 0..k {
            out = FockOperator {
                space: self.space,
                matrix: &out.matrix * &self.matrix,
                trust_margin: (out.trust_margin + self.trust_margin).min(self.space.dim),
            };
        }
        out
    }

    /// Largest entrywise modulus of `self − other` over the whole matrix.
    pub fn max_abs_diff(&self, other: &FockOperator) -> Result<f64> {
        self.space.require_same(&other.space)?;
        Ok(self
            .matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    /// Exchanges the two tensor factors: `(X ⊗ Y) ↦ (Y ⊗ X)`.
    pub fn swap_factors(&self) -> Result<FockOperator> {
        self.space.require_factors(2)?;
        let d = self.space.dim;
        let swap = |i: usize| (i % d) * d + i / d;
        let side = self.space.total_dim();
        let matrix = DMatrix::from_fn(side, side, |r, c| self.matrix[(swap(r), swap(c))]);
        Ok(FockOperator {
            space: self.space,
            matrix,
            trust_margin: self.trust_margin,
        })
    }
}

/// Ladder matrix `a` with `aΦ_n = √n Φ_{n−1}`. Exact under truncation.
pub fn annihilator(space: FockSpace) -> Result<FockOperator> {
    space.require_factors(1)?;
    let d = space.dim;
    let mut matrix = DMatrix::zeros(d, d);
    for n in 1..d {
        matrix[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Ok(FockOperator {
        space,
        matrix,
        trust_margin: 0,
    })
}

/// Ladder matrix `a†`. The top state is sent to zero by truncation, hence a
/// trust margin of one.
pub fn creator(space: FockSpace) -> Result<FockOperator> {
    Ok(annihilator(space)?.adjoint().with_trust_margin(1))
}

/// `Φ_n` (or `Φ_{n,m}` on a two-mode space).
pub fn basis_state(space: FockSpace, index: &[usize]) -> Result<FockVector> {
    let i = space.composite_index(index)?;
    let mut v = FockVector::zeros(space);
    v.coeffs[i] = ONE;
    Ok(v)
}

/// Kronecker product of two one-mode operators on the two-mode space.
pub fn tensor(left: &FockOperator, right: &FockOperator) -> Result<FockOperator> {
    left.space.require_factors(1)?;
    left.space.require_same(&right.space)?;
    let space = FockSpace::two_mode(left.space.dim)?;
    Ok(FockOperator {
        space,
        matrix: left.matrix.kronecker(&right.matrix),
        trust_margin: left.trust_margin.max(right.trust_margin),
    })
}

/// `u ⊗ v` on the two-mode space.
///
/// The tail bound uses `‖u⊗v − Pu⊗Pv‖ ≤ t_u(‖Pv‖ + t_v) + ‖Pu‖·t_v`.
pub fn tensor_vec(left: &FockVector, right: &FockVector) -> Result<FockVector> {
    left.space.require_factors(1)?;
    left.space.require_same(&right.space)?;
    let space = FockSpace::two_mode(left.space.dim)?;
    let tail_bound =
        left.tail_bound * (right.norm() + right.tail_bound) + left.norm() * right.tail_bound;
    Ok(FockVector {
        space,
        coeffs: left.coeffs.kronecker(&right.coeffs),
        tail_bound,
    })
}

/// Lifts a one-mode operator to factor `slot` (0 or 1) of the two-mode space.
pub fn lift(op: &FockOperator, slot: usize) -> Result<FockOperator> {
    let id = FockOperator::identity(op.space);
    match slot {
        0 => tensor(op, &id),
        1 => tensor(&id, op),
        other => Err(Error::ModeIndex(other + 1)),
    }
}

/// Maximum entrywise deviation between `op` and `expected` on the interior
/// block left after removing a band of width `margin` at the top of every
/// factor.
pub fn interior_defect(op: &FockOperator, expected: &FockOperator, margin: usize) -> Result<f64> {
    op.space.require_same(&expected.space)?;
    let required = op.trust_margin.max(expected.trust_margin);
    if margin < required {
        return Err(Error::MarginBelowTrust { margin, required });
    }
    let idx = op.space.interior_indices(margin)?;
    let mut worst = 0.0_f64;
    for &c in &idx {
        for &r in &idx {
            worst = worst.max((op.matrix[(r, c)] - expected.matrix[(r, c)]).norm());
        }
    }
    Ok(worst)
}
