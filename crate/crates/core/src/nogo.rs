//! Kernel recurrences for nonlinear deformations of `a`, `a†`.
//!
//! For `A = a − αa†ᵖ` (`p ≥ 2`) a vacuum `Aφ₀ = 0` would have number-basis
//! coefficients obeying
//!
//! ```text
//! c₁ = … = c_p = 0,   c_{m+1}√(m+1) = α c_{m−p} √(m!/(m−p)!)   (m ≥ p)
//! ```
//!
//! so only `c_{k(p+1)}` survive, and the ratio of consecutive squared moduli
//! `r_k = |α|² (M−p)(M−p+1)⋯(M−1)/M` with `M = (k+1)(p+1)` grows without
//! bound. The norm series diverges for every `α ≠ 0`.
//!
//! The dual family `A = a − α𝟙`, `B = a† − βaᵐ` fails on the Ψ side:
//! `B†Ψ₀ = (a − β̄a†ᵐ)Ψ₀ = 0` is the same recurrence with `α ↦ β̄`.
//!
//! Magnitudes are kept as `log|c|²`; factorials are never formed.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{annihilator, creator, interior_defect, FockOperator, FockSpace};
use crate::pairs::{log_add_exp, SeriesClass};

/// Default partial-sum level for the informational blow-up index.
pub const DEFAULT_BLOW_UP_THRESHOLD: f64 = 1e12;

/// Fewest nonzero terms needed before a ratio trend is classified.
pub const MIN_CLASSIFY_TERMS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NogoFamily {
    /// `A = a − αa†ᵖ`, `B = a† − β𝟙`.
    PowerRaising { power: usize, alpha: C64, beta: C64 },
    /// `A = a − α𝟙`, `B = a† − βaᵐ`.
    DualPowerLowering { power: usize, alpha: C64, beta: C64 },
}

impl NogoFamily {
    pub fn power_raising(power: usize, alpha: C64) -> Self {
        NogoFamily::PowerRaising {
            power,
            alpha,
            beta: C64::new(0.0, 0.0),
        }
    }

    pub fn dual_power_lowering(power: usize, beta: C64) -> Self {
        NogoFamily::DualPowerLowering {
            power,
            alpha: C64::new(0.0, 0.0),
            beta,
        }
    }

    pub fn power(&self) -> usize {
        match *self {
            NogoFamily::PowerRaising { power, .. } | NogoFamily::DualPowerLowering { power, .. } => power,
        }
    }

    /// Coefficient multiplying the power in the kernel equation: `α` for the
    /// raising family, `β̄` for the dual one.
    pub fn kernel_parameter(&self) -> C64 {
        match *self {
            NogoFamily::PowerRaising { alpha, .. } => alpha,
            NogoFamily::DualPowerLowering { beta, .. } => beta.conj(),
        }
    }

    fn require_power(&self) -> Result<()> {
        if self.power() < 2 {
            Err(Error::PowerTooSmall(self.power()))
        } else {
            Ok(())
        }
    }

    /// The pair `(A, B)` on a one-mode space.
    pub fn operators(&self, space: FockSpace) -> Result<(FockOperator, FockOperator)> {
        self.require_power()?;
        let a = annihilator(space)?;
        let ad = creator(space)?;
        let id = FockOperator::identity(space);
        let p = self.power() as u32;
        match *self {
            NogoFamily::PowerRaising { alpha, beta, .. } => {
                let big_a = a.sub(&ad.power(p).scale(alpha))?;
                let big_b = ad.sub(&id.scale(beta))?;
                Ok((big_a, big_b))
            }
            NogoFamily::DualPowerLowering { alpha, beta, .. } => {
                let big_a = a.sub(&id.scale(alpha))?;
                let big_b = ad.sub(&a.power(p).scale(beta))?;
                Ok((big_a, big_b))
            }
        }
    }
}

/// A nonzero coefficient `c_index = exp(log_sq/2)·phase`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTerm {
    pub index: usize,
    pub log_sq: f64,
    pub phase: C64,
}

impl KernelTerm {
    pub fn value(&self) -> C64 {
        self.phase * (0.5 * self.log_sq).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelClassification {
    pub class: SeriesClass,
    /// First `k` with `r_k > 1`.
    pub crossing_index: Option<usize>,
    /// `r_k` strictly increasing from the crossing to the end of the window.
    pub increasing_after_crossing: bool,
    /// First `k` at which `log Σ_{j≤k}|c_{j(p+1)}|²` exceeds the threshold.
    pub blow_up_index: Option<usize>,
    pub last_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelRecurrence {
    pub family: NogoFamily,
    /// Nonzero coefficients `c_{k(p+1)}`, `k = 0, 1, …`; `c₀ = 1`.
    pub terms: Vec<KernelTerm>,
    /// `r_k = |c_{(k+1)(p+1)}|² / |c_{k(p+1)}|²`.
    pub ratios: Vec<f64>,
    pub k_max: usize,
    /// Filled by [`solve_kernel`] when [`classify`] is conclusive.
    pub classification: Option<KernelClassification>,
}

impl KernelRecurrence {
    /// `c_n` for `n < len`, zero off the `p+1` lattice.
    pub fn dense_coefficients(&self, len: usize) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); len];
        for t in self.terms.iter().filter(|t| t.index < len) {
            out[t.index] = t.value();
        }
        out
    }

    /// `log_e` of the ratio `r_k`.
    fn log_ratio(power: usize, param_abs: f64, k: usize) -> f64 {
        let big_m = (k + 1) * (power + 1);
        let falling: f64 = (big_m - power..big_m).map(|j| (j as f64).ln()).sum();
        2.0 * param_abs.ln() + falling - (big_m as f64).ln()
    }
}

/// Solves the kernel recurrence for the first `k_max` nonzero terms.
pub fn solve_kernel(family: NogoFamily, k_max: usize) -> Result<KernelRecurrence> {
    family.require_power()?;
    if k_max == 0 {
        return Err(Error::TooFewTerms { k_max, needed: 1 });
    }
    let p = family.power();
    let param = family.kernel_parameter();
    let mut terms = vec![KernelTerm {
        index: 0,
        log_sq: 0.0,
        phase: C64::new(1.0, 0.0),
    }];
    let mut ratios = Vec::new();
    if param.norm() > 0.0 {
        let unit = param / param.norm();
        for k in 0..k_max - 1 {
            let log_r = KernelRecurrence::log_ratio(p, param.norm(), k);
            ratios.push(log_r.exp());
            let prev = terms[k];
            terms.push(KernelTerm {
                index: (k + 1) * (p + 1),
                log_sq: prev.log_sq + log_r,
                phase: prev.phase * unit,
            });
        }
    }
    let mut rec = KernelRecurrence {
        family,
        terms,
        ratios,
        k_max,
        classification: None,
    };
    rec.classification = classify(&rec).ok();
    Ok(rec)
}

/// Crossing estimate `k ≈ |α|^{−2/(p−1)}/(p+1)` where `r_k` reaches 1.
pub fn crossing_estimate(power: usize, param_abs: f64) -> usize {
    let k = param_abs.powf(-2.0 / (power as f64 - 1.0)) / (power as f64 + 1.0);
    k.ceil() as usize
}

pub fn classify(rec: &KernelRecurrence) -> Result<KernelClassification> {
    classify_with_threshold(rec, DEFAULT_BLOW_UP_THRESHOLD)
}

pub fn classify_with_threshold(rec: &KernelRecurrence, threshold: f64) -> Result<KernelClassification> {
    let param = rec.family.kernel_parameter();
    if param.norm() == 0.0 {
        return Ok(KernelClassification {
            class: SeriesClass::Convergent,
            crossing_index: None,
            increasing_after_crossing: false,
            blow_up_index: None,
            last_ratio: None,
        });
    }
    if rec.k_max < MIN_CLASSIFY_TERMS {
        return Err(Error::TooFewTerms {
            k_max: rec.k_max,
            needed: MIN_CLASSIFY_TERMS,
        });
    }
    let inconclusive = || Error::Inconclusive {
        k_max: rec.k_max,
        estimate: crossing_estimate(rec.family.power(), param.norm()),
    };
    let crossing = rec.ratios.iter().position(|&r| r > 1.0).ok_or_else(inconclusive)?;
    let increasing = rec.ratios[crossing..].windows(2).all(|w| w[1] > w[0]);
    if !increasing {
        return Err(inconclusive());
    }

    let log_threshold = threshold.ln();
    let mut log_sum = f64::NEG_INFINITY;
    let mut blow_up_index = None;
    for (k, t) in rec.terms.iter().enumerate() {
        log_sum = log_add_exp(log_sum, t.log_sq);
        if log_sum > log_threshold {
            blow_up_index = Some(k);
            break;
        }
    }
    Ok(KernelClassification {
        class: SeriesClass::Divergent,
        crossing_index: Some(crossing),
        increasing_after_crossing: increasing,
        blow_up_index,
        last_ratio: rec.ratios.last().copied(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NogoCommutatorReport {
    pub margin: usize,
    /// `interior_defect([A, B], 𝟙, p + 1)`.
    pub commutator_defect: f64,
    /// `max |A† − B|` over all entries.
    pub adjoint_gap: f64,
    /// The constant shift carried by the family. It commutes with everything
    /// and does not enter the kernel recurrence of `A`.
    pub shift: C64,
}

pub fn nogo_commutator_check(family: NogoFamily, space: FockSpace) -> Result<NogoCommutatorReport> {
    let (a, b) = family.operators(space)?;
    let margin = family.power() + 1;
    let comm = a.commutator(&b)?;
    let commutator_defect = interior_defect(&comm, &FockOperator::identity(space), margin)?;
    let adjoint_gap = a.adjoint().max_abs_diff(&b)?;
    let shift = match family {
        NogoFamily::PowerRaising { beta, .. } => beta,
        NogoFamily::DualPowerLowering { alpha, .. } => alpha,
    };
    Ok(NogoCommutatorReport {
        margin,
        commutator_defect,
        adjoint_gap,
        shift,
    })
}
