//! Truncated frame operators `S_φ = Σ|φ_n⟩⟨φ_n|`, `S_Ψ = Σ|Ψ_n⟩⟨Ψ_n|` and the
//! identities they satisfy on the span of the families.
//!
//! Partial sums of these series do not converge in norm on the whole space,
//! so every check here acts on family vectors or finitely supported probes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FockOperator, FockVector};
use crate::pairs::{BiorthogonalSystem, ExpansionResidual, PseudoBosonPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Phi,
    Psi,
}

/// `Σ conj(x_i)·y_i` accumulated in doubled working precision
/// (error-free products via FMA, error-free sums via TwoSum).
fn compensated_dotc(x: &[C64], y: &[C64]) -> C64 {
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }
    let mut acc = [(0.0f64, 0.0f64); 2];
    let mut push = |slot: usize, a: f64, b: f64| {
        let p = a * b;
        let e = a.mul_add(b, -p);
        let (s, c) = two_sum(acc[slot].0, p);
        acc[slot] = (s, acc[slot].1 + c + e);
    };
    for (u, v) in x.iter().zip(y) {
        push(0, u.re, v.re);
        push(0, u.im, v.im);
        push(1, u.re, v.im);
        push(1, -u.im, v.re);
    }
    C64::new(acc[0].0 + acc[0].1, acc[1].0 + acc[1].1)
}

#[derive(Debug, Clone)]
pub struct FrameOperator {
    /// Assembled `V V†`.
    pub matrix: FockOperator,
    /// `V`: one column per family vector.
    columns: DMatrix<C64>,
    /// Sum runs over `n = 0..=order`.
    pub order: usize,
    pub side: Side,
}

impl FrameOperator {
    /// `S v` evaluated as `V (V† v)`.
    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        let space = self.matrix.space();
        if v.space() != space {
            return Err(Error::SpaceMismatch {
                left: space,
                right: v.space(),
            });
        }
        let x = v.coeffs().as_slice();
        let weights = DVector::from_iterator(
            self.columns.ncols(),
            self.columns.column_iter().map(|c| compensated_dotc(c.as_slice(), x)),
        );
        FockVector::from_coeffs(space, &self.columns * weights, 0.0)
    }

    /// Largest entrywise `|S − S†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = self.matrix.matrix();
        (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Ascending eigenvalues of `S = V V†`: the squared singular values of
    /// `V`, padded with zeros up to the space dimension.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .columns
            .singular_values()
            .iter()
            .map(|s| s * s)
            .collect();
        ev.resize(self.columns.nrows(), 0.0);
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Ascending eigenvalues of the assembled `(S + S†)/2` from a dense
    /// Hermitian solver. Small eigenvalues carry errors of order `ε·λ_max`.
    pub fn dense_eigenvalues(&self) -> Vec<f64> {
        let m = self.matrix.matrix();
        let herm: DMatrix<C64> = (m + m.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }
}

pub fn frame_operator(system: &BiorthogonalSystem, side: Side, order: usize) -> Result<FrameOperator> {
    if order >= system.len() {
        return Err(Error::OrderTooLarge {
            requested: order,
            limit: system.len().saturating_sub(1),
        });
    }
    let family = match side {
        Side::Phi => &system.phis,
        Side::Psi => &system.psis,
    };
    let space = family[0].space();
    let side_len = space.total_dim();
    let columns = DMatrix::from_fn(side_len, order + 1, |i, n| family[n].coeffs()[i]);
    let matrix = FockOperator::from_matrix(space, &columns * columns.adjoint(), 0)?;
    Ok(FrameOperator {
        matrix,
        columns,
        order,
        side,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameActionResidual {
    /// `‖S_φΨ_n − φ_n‖`
    pub phi_from_psi: f64,
    /// `‖S_Ψφ_n − Ψ_n‖`
    pub psi_from_phi: f64,
    /// `‖S_ΨS_φΨ_n − Ψ_n‖`
    pub psi_round_trip: f64,
    /// `‖S_φS_Ψφ_n − φ_n‖`
    pub phi_round_trip: f64,
}

impl FrameActionResidual {
    pub fn max(&self) -> f64 {
        self.phi_from_psi
            .max(self.psi_from_phi)
            .max(self.psi_round_trip)
            .max(self.phi_round_trip)
    }
}

fn check_sides(s_phi: &FrameOperator, s_psi: &FrameOperator) -> Result<()> {
    if s_phi.side != Side::Phi || s_psi.side != Side::Psi {
        return Err(Error::FamilyMismatch(format!(
            "expected (Phi, Psi) frames, got ({:?}, {:?})",
            s_phi.side, s_psi.side
        )));
    }
    Ok(())
}

pub fn frame_action_check(
    s_phi: &FrameOperator,
    s_psi: &FrameOperator,
    system: &BiorthogonalSystem,
    n: usize,
) -> Result<FrameActionResidual> {
    check_sides(s_phi, s_psi)?;
    let order = s_phi.order.min(s_psi.order);
    if n > order {
        return Err(Error::OrderTooLarge {
            requested: n,
            limit: order,
        });
    }
    let phi = &system.phis[n];
    let psi = &system.psis[n];
    let s_phi_psi = s_phi.apply(psi)?;
    let s_psi_phi = s_psi.apply(phi)?;
    Ok(FrameActionResidual {
        phi_from_psi: s_phi_psi.distance(phi)?,
        psi_from_phi: s_psi_phi.distance(psi)?,
        psi_round_trip: s_psi.apply(&s_phi_psi)?.distance(psi)?,
        phi_round_trip: s_phi.apply(&s_psi_phi)?.distance(phi)?,
    })
}

/// Expansion residuals of a finitely supported probe over `n ≤ order`.
pub fn resolution_check(
    system: &BiorthogonalSystem,
    probe: &FockVector,
    order: usize,
) -> Result<ExpansionResidual> {
    let support = probe.support_max().unwrap_or(0);
    if support > order {
        return Err(Error::ProbeSupport { support, order });
    }
    system.expansion_residuals(probe, order)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntertwiningResidual {
    /// `‖(S_Ψ N)φ_n − (𝔑 S_Ψ)φ_n‖`
    pub psi_side: f64,
    /// `‖(N S_φ)Ψ_n − (S_φ 𝔑)Ψ_n‖`
    pub phi_side: f64,
    /// `‖Nφ_n − nφ_n‖`
    pub number_eigen: f64,
    /// `‖𝔑Ψ_n − nΨ_n‖`
    pub dual_number_eigen: f64,
}

/// Checks `S_Ψ N = 𝔑 S_Ψ` and `N S_φ = S_φ 𝔑` on `φ_n`, `Ψ_n`, with
/// `N = BA` and `𝔑 = N†`. Needs `n < order` so that `Nφ_n` stays in the
/// span the frames were built from.
pub fn intertwining_check(
    system: &BiorthogonalSystem,
    pair: &PseudoBosonPair,
    s_phi: &FrameOperator,
    s_psi: &FrameOperator,
    n: usize,
) -> Result<IntertwiningResidual> {
    check_sides(s_phi, s_psi)?;
    let order = s_phi.order.min(s_psi.order);
    if n + 1 > order {
        return Err(Error::OrderTooLarge {
            requested: n,
            limit: order.saturating_sub(1),
        });
    }
    let number = pair.number_operator()?;
    let dual = number.adjoint();
    let phi = &system.phis[n];
    let psi = &system.psis[n];

    let left = s_psi.apply(&number.apply(phi)?)?;
    let right = dual.apply(&s_psi.apply(phi)?)?;
    let psi_side = left.distance(&right)?;

    let left = number.apply(&s_phi.apply(psi)?)?;
    let right = s_phi.apply(&dual.apply(psi)?)?;
    let phi_side = left.distance(&right)?;

    let nn = C64::new(n as f64, 0.0);
    Ok(IntertwiningResidual {
        psi_side,
        phi_side,
        number_eigen: number.apply(phi)?.distance(&phi.scale(nn))?,
        dual_number_eigen: dual.apply(psi)?.distance(&psi.scale(nn))?,
    })
}

/// Largest eigenvalue of the `side` frame operator at each order.
pub fn largest_eigenvalue_by_order(
    system: &BiorthogonalSystem,
    side: Side,
    orders: &[usize],
) -> Result<Vec<(usize, f64)>> {
    orders
        .iter()
        .map(|&order| Ok((order, frame_operator(system, side, order)?.max_eigenvalue())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{basis_state, FockSpace};
    use crate::pairs::{build_pair, DeformationFamily};

    fn system(alpha: f64, d: usize, n_max: usize) -> BiorthogonalSystem {
        BiorthogonalSystem::for_family(
            DeformationFamily::gauss_lowering(C64::new(alpha, 0.0)),
            FockSpace::single(d).unwrap(),
            n_max,
        )
        .unwrap()
    }

    #[test]
    fn compensated_dot_recovers_cancellation() {
        let big = 1e17;
        let x = [C64::new(big, 0.0), C64::new(1.0, 0.0), C64::new(-big, 0.0)];
        let y = [C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        assert_eq!(compensated_dotc(&x, &y), C64::new(1.0, 0.0));
        let z = [C64::new(0.0, 2.0)];
        let w = [C64::new(3.0, 1.0)];
        assert_eq!(compensated_dotc(&z, &w), C64::new(2.0, -6.0));
    }

    #[test]
    fn orthonormal_frame_is_identity() {
        let sys = system(0.0, 12, 11);
        let s = frame_operator(&sys, Side::Phi, 11).unwrap();
        let id = FockOperator::identity(FockSpace::single(12).unwrap());
        assert_eq!(s.matrix.max_abs_diff(&id).unwrap(), 0.0);
    }

    #[test]
    fn order_bounds() {
        let sys = system(0.2, 20, 5);
        assert!(matches!(
            frame_operator(&sys, Side::Phi, 6),
            Err(Error::OrderTooLarge { .. })
        ));
        let s_phi = frame_operator(&sys, Side::Phi, 5).unwrap();
        let s_psi = frame_operator(&sys, Side::Psi, 5).unwrap();
        let pair = build_pair(DeformationFamily::gauss_lowering(C64::new(0.2, 0.0)), FockSpace::single(20).unwrap())
            .unwrap();
        assert!(intertwining_check(&sys, &pair, &s_phi, &s_psi, 5).is_err());
        assert!(intertwining_check(&sys, &pair, &s_phi, &s_psi, 4).is_ok());
        assert!(frame_action_check(&s_psi, &s_phi, &sys, 1).is_err());
    }

    #[test]
    fn vacuum_probe_is_exact() {
        let sys = system(0.3, 40, 4);
        let probe = basis_state(FockSpace::single(40).unwrap(), &[0]).unwrap();
        let res = resolution_check(&sys, &probe, 0).unwrap();
        assert_eq!(res.phi_expansion, 0.0);
        let wide = basis_state(FockSpace::single(40).unwrap(), &[3]).unwrap();
        assert!(matches!(
            resolution_check(&sys, &wide, 2),
            Err(Error::ProbeSupport { .. })
        ));
    }

    #[test]
    fn orthonormal_intertwining_is_trivial() {
        let s = FockSpace::single(16).unwrap();
        let sys = system(0.0, 16, 8);
        let pair = build_pair(DeformationFamily::gauss_lowering(C64::new(0.0, 0.0)), s).unwrap();
        let s_phi = frame_operator(&sys, Side::Phi, 8).unwrap();
        let s_psi = frame_operator(&sys, Side::Psi, 8).unwrap();
        let res = intertwining_check(&sys, &pair, &s_phi, &s_psi, 5).unwrap();
        assert_eq!(res.psi_side, 0.0);
        assert_eq!(res.phi_side, 0.0);
    }
}
