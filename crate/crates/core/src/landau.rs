//! Landau levels in the symmetric gauge and their pseudo-bosonic deformations.
//!
//! With `ħ = m = eB/c = 1` the quadratures `Q₁ = p_x + y/2`, `P₁ = p_y − x/2`,
//! `Q₂ = p_y + x/2`, `P₂ = p_x − y/2` form two independent canonical pairs,
//! and `A_k = (Q_k + iP_k)/√2` are ordinary ladder operators on the factors
//! of `𝓗 = 𝓗₁ ⊗ 𝓗₂`. Here they are realized the other way round: `A_k` is
//! the truncated annihilator on factor `k` and the quadratures are built
//! from it.
//!
//! Mode 1 carries the `GaussLowering(α)` pair, mode 2 the `GaussRaising(β)`
//! pair. One-mode operators are lifted to the composite space by tensoring
//! with the identity.

use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::fock::{
    annihilator, creator, interior_defect, lift, tensor_vec, FockOperator, FockSpace, FockVector,
};
use crate::pairs::{
    build_pair, pairing_matrix, phi_closed_form, psi_series, BiorthogonalSystem, DeformationFamily,
    PseudoBosonPair, SystemLabel,
};

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn slot_of(which: usize) -> Result<usize> {
    match which {
        1 | 2 => Ok(which - 1),
        other => Err(Error::ModeIndex(other)),
    }
}

fn require_two_mode(space: FockSpace) -> Result<()> {
    if space.factors() != 2 {
        return Err(Error::FactorCount {
            expected: 2,
            found: space.factors(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct QuadratureFrame {
    pub q1: FockOperator,
    pub p1: FockOperator,
    pub q2: FockOperator,
    pub p2: FockOperator,
}

impl QuadratureFrame {
    /// `x = Q₂ − P₁`
    pub fn x(&self) -> Result<FockOperator> {
        self.q2.sub(&self.p1)
    }

    /// `y = Q₁ − P₂`
    pub fn y(&self) -> Result<FockOperator> {
        self.q1.sub(&self.p2)
    }

    /// `p_x = (Q₁ + P₂)/2`
    pub fn px(&self) -> Result<FockOperator> {
        Ok(self.q1.add(&self.p2)?.scale(re(0.5)))
    }

    /// `p_y = (Q₂ + P₁)/2`
    pub fn py(&self) -> Result<FockOperator> {
        Ok(self.q2.add(&self.p1)?.scale(re(0.5)))
    }
}

/// `Q_k = (A_k + A_k†)/√2`, `P_k = (A_k − A_k†)/(i√2)` on the two-mode space.
pub fn build_quadratures(space: FockSpace) -> Result<QuadratureFrame> {
    require_two_mode(space)?;
    let one = space.factor_space();
    let a = annihilator(one)?;
    let ad = creator(one)?;
    let q = a.add(&ad)?.scale(re(FRAC_1_SQRT_2));
    let p = a.sub(&ad)?.scale(C64::new(0.0, -FRAC_1_SQRT_2));
    Ok(QuadratureFrame {
        q1: lift(&q, 0)?,
        p1: lift(&p, 0)?,
        q2: lift(&q, 1)?,
        p2: lift(&p, 1)?,
    })
}

/// `H_k = A_k†A_k + ½𝟙` lifted to the two-mode space.
pub fn hamiltonian(space: FockSpace, k: usize) -> Result<FockOperator> {
    require_two_mode(space)?;
    let slot = slot_of(k)?;
    let one = space.factor_space();
    let h = creator(one)?.compose(&annihilator(one)?)?.shift(re(0.5));
    lift(&h, slot)
}

/// The two-mode model: `GaussLowering(α)` on mode 1, `GaussRaising(β)` on
/// mode 2.
#[derive(Debug, Clone)]
pub struct LandauModel {
    space: FockSpace,
    alpha: C64,
    beta: C64,
    mode1: PseudoBosonPair,
    mode2: PseudoBosonPair,
}

impl LandauModel {
    pub fn new(per_factor_dim: usize, alpha: C64, beta: C64) -> Result<Self> {
        let space = FockSpace::two_mode(per_factor_dim)?;
        let one = space.factor_space();
        let mode1 = build_pair(DeformationFamily::gauss_lowering(alpha), one)?;
        let mode2 = build_pair(DeformationFamily::gauss_raising(beta), one)?;
        Ok(Self {
            space,
            alpha,
            beta,
            mode1,
            mode2,
        })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn per_factor_dim(&self) -> usize {
        self.space.dim()
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    /// The one-mode pair acting on mode `which` (1 or 2).
    pub fn pair(&self, which: usize) -> Result<&PseudoBosonPair> {
        match which {
            1 => Ok(&self.mode1),
            2 => Ok(&self.mode2),
            other => Err(Error::ModeIndex(other)),
        }
    }

    pub fn lifted_a(&self, which: usize) -> Result<FockOperator> {
        lift(self.pair(which)?.a(), slot_of(which)?)
    }

    pub fn lifted_b(&self, which: usize) -> Result<FockOperator> {
        lift(self.pair(which)?.b(), slot_of(which)?)
    }

    fn family(&self, which: usize) -> Result<DeformationFamily> {
        Ok(self.pair(which)?.family())
    }

    /// `φ_{n,m} = φ_n⁽¹⁾(α) ⊗ φ_m⁽²⁾(β) = T(α,β)Φ_{n,m}`.
    pub fn phi_nm(&self, n: usize, m: usize) -> Result<FockVector> {
        let one = self.space.factor_space();
        tensor_vec(
            &phi_closed_form(self.family(1)?, n, one)?,
            &phi_closed_form(self.family(2)?, m, one)?,
        )
    }

    /// `Ψ_{n,m} = Ψ_n⁽¹⁾(α) ⊗ Ψ_m⁽²⁾(β) = (T(α,β)†)^{−1}Φ_{n,m}`.
    pub fn psi_nm(&self, n: usize, m: usize) -> Result<FockVector> {
        let one = self.space.factor_space();
        tensor_vec(
            &psi_series(self.family(1)?, n, one)?,
            &psi_series(self.family(2)?, m, one)?,
        )
    }

    /// `B₁(α)ⁿB₂(β)ᵐφ_{0,0}/√(n!m!)` applied directly on the composite space.
    pub fn phi_nm_ladder(&self, n: usize, m: usize) -> Result<FockVector> {
        let limit = self.space.dim().saturating_sub(2);
        if n.max(m) > limit {
            return Err(Error::OrderTooLarge {
                requested: n.max(m),
                limit,
            });
        }
        let b1 = self.lifted_b(1)?;
        let b2 = self.lifted_b(2)?;
        let start = self.phi_nm(0, 0)?;
        let tail = self.phi_nm(n, m)?.tail_bound();
        let mut v = start;
        for j in 1..=m {
            v = b2.apply(&v)?.scale(re(1.0 / (j as f64).sqrt()));
        }
        for j in 1..=n {
            v = b1.apply(&v)?.scale(re(1.0 / (j as f64).sqrt()));
        }
        Ok(v.with_tail_bound(tail))
    }

    /// `X = (A₁(α) + A₂(β))/√2`, `Y = (B₁(α) + B₂(β))/√2`.
    pub fn xy_operators(&self) -> Result<(FockOperator, FockOperator)> {
        let x = self.lifted_a(1)?.add(&self.lifted_a(2)?)?.scale(re(FRAC_1_SQRT_2));
        let y = self.lifted_b(1)?.add(&self.lifted_b(2)?)?.scale(re(FRAC_1_SQRT_2));
        Ok((x, y))
    }
}

/// `h_k = B_k A_k + ½𝟙` on the composite space.
pub fn deformed_hamiltonian(model: &LandauModel, which: usize) -> Result<FockOperator> {
    let pair = model.pair(which)?;
    let h = pair.number_operator()?.shift(re(0.5));
    lift(&h, slot_of(which)?)
}

/// Interior defect between `B_kA_k + ½𝟙` and its quadratic form in the
/// quadratures:
///
/// - `h₁(α) = (½+α)Q₁² + (½−α)P₁² + 2iαQ₁P₁ + α𝟙`
/// - `h₂(β) = (½−β)Q₂² + (½+β)P₂² + 2iβQ₂P₂ + β𝟙`
pub fn coordinate_form_defect(model: &LandauModel, which: usize, margin: usize) -> Result<f64> {
    let frame = build_quadratures(model.space)?;
    let half = re(0.5);
    let (q, p, c_q, c_p, c_mix, shift) = match which {
        1 => {
            let a = model.alpha;
            (&frame.q1, &frame.p1, half + a, half - a, C64::new(0.0, 2.0) * a, a)
        }
        2 => {
            let b = model.beta;
            (&frame.q2, &frame.p2, half - b, half + b, C64::new(0.0, 2.0) * b, b)
        }
        other => return Err(Error::ModeIndex(other)),
    };
    let form = q
        .compose(q)?
        .scale(c_q)
        .add(&p.compose(p)?.scale(c_p))?
        .add(&q.compose(p)?.scale(c_mix))?
        .shift(shift);
    interior_defect(&deformed_hamiltonian(model, which)?, &form, margin)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    /// `|⟨f, η_n⟩|` for `n = 0..=n_max`.
    pub overlaps: Vec<f64>,
    pub max_overlap: f64,
    pub f_norm: f64,
}

/// Builds `η_n = Yⁿφ_{0,0}/√(n!)` and
/// `f = Ψ₁⁽¹⁾⊗Ψ₀⁽²⁾ − Ψ₀⁽¹⁾⊗Ψ₁⁽²⁾` and measures their overlaps. `f` is
/// nonzero yet orthogonal to every `η_n`, so the single-index family cannot
/// be complete.
pub fn single_index_counterexample(model: &LandauModel, n_max: usize) -> Result<CounterexampleReport> {
    let limit = model.space.dim().saturating_sub(2);
    if n_max > limit {
        return Err(Error::OrderTooLarge {
            requested: n_max,
            limit,
        });
    }
    let f = model.psi_nm(1, 0)?.sub(&model.psi_nm(0, 1)?)?;
    let (_, y) = model.xy_operators()?;
    let mut eta = model.phi_nm(0, 0)?;
    let mut overlaps = Vec::with_capacity(n_max + 1);
    overlaps.push(f.inner(&eta)?.norm());
    for n in 1..=n_max {
        eta = y.apply(&eta)?.scale(re(1.0 / (n as f64).sqrt()));
        overlaps.push(f.inner(&eta)?.norm());
    }
    let max_overlap = overlaps.iter().copied().fold(0.0, f64::max);
    Ok(CounterexampleReport {
        overlaps,
        max_overlap,
        f_norm: f.norm(),
    })
}

/// Two-index families `φ_{n,m}`, `Ψ_{n,m}` for `n ≤ n_max`, `m ≤ m_max`,
/// ordered `n·(m_max+1) + m`.
pub fn two_index_family(model: &LandauModel, n_max: usize, m_max: usize) -> Result<BiorthogonalSystem> {
    let mut phis = Vec::with_capacity((n_max + 1) * (m_max + 1));
    let mut psis = Vec::with_capacity(phis.capacity());
    for n in 0..=n_max {
        for m in 0..=m_max {
            phis.push(model.phi_nm(n, m)?);
            psis.push(model.psi_nm(n, m)?);
        }
    }
    let label = SystemLabel::TwoMode {
        alpha: model.alpha,
        beta: model.beta,
        n_max,
        m_max,
    };
    pairing_matrix(label, phis, label, psis)
}
