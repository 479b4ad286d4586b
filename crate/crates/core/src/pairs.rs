//! The two Gaussian deformation families and their biorthonormal vectors.
//!
//! - `GaussLowering(α)`: `A = a`, `B = a† + 2αa`, similarity `U = e^{αa²}`.
//!   `φ_n = UΦ_n` is a finite descending sum; `Ψ_n = e^{−ᾱa†²}Φ_n` is an
//!   ascending series that converges only for `|α| < 1/2`.
//! - `GaussRaising(β)`: `A = a − 2βa†`, `B = a†`, `U = e^{βa†²}`. Here `φ_n`
//!   is the series side (again `|β| < 1/2`) and `Ψ_n = e^{−β̄a²}Φ_n` is finite.
//!
//! Series vectors are truncated at the last index below `D` and carry a
//! certified bound on the norm of what was dropped.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::fock::{annihilator, basis_state, creator, FockOperator, FockSpace, FockVector};
use crate::series;

/// `ω_N / ω_0` above which sustained growth of `ω_n = ‖φ_n‖‖Ψ_n‖` is reported
/// as evidence that the families are not Riesz bases.
pub const RIESZ_GROWTH_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    GaussLowering,
    GaussRaising,
}

impl FamilyKind {
    pub fn parameter_name(self) -> &'static str {
        match self {
            FamilyKind::GaussLowering => "alpha",
            FamilyKind::GaussRaising => "beta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationFamily {
    pub kind: FamilyKind,
    pub parameter: C64,
}

impl DeformationFamily {
    pub fn new(kind: FamilyKind, parameter: C64) -> Self {
        Self { kind, parameter }
    }

    pub fn gauss_lowering(alpha: C64) -> Self {
        Self::new(FamilyKind::GaussLowering, alpha)
    }

    pub fn gauss_raising(beta: C64) -> Self {
        Self::new(FamilyKind::GaussRaising, beta)
    }

    /// Limit of the norm-series term ratio, `4|p|²`.
    pub fn limiting_ratio(&self) -> f64 {
        4.0 * self.parameter.norm_sqr()
    }

    pub fn in_disk(&self) -> bool {
        self.limiting_ratio() < 1.0
    }

    fn require_finite(&self) -> Result<()> {
        if self.parameter.re.is_finite() && self.parameter.im.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFiniteParameter)
        }
    }

    fn require_disk(&self) -> Result<()> {
        self.require_finite()?;
        if self.in_disk() {
            Ok(())
        } else {
            Err(Error::OutsideDisk {
                name: self.kind.parameter_name(),
                abs: self.parameter.norm(),
                limiting_ratio: self.limiting_ratio(),
            })
        }
    }
}

/// Exact value of `‖e^{p a†²}Φ₀‖² = Σ_k C(2k,k)|p|^{2k} = (1 − 4|p|²)^{−1/2}`.
pub fn gaussian_vacuum_norm_sq(p_abs: f64) -> f64 {
    (1.0 - 4.0 * p_abs * p_abs).powf(-0.5)
}

#[derive(Debug, Clone)]
pub struct PseudoBosonPair {
    family: DeformationFamily,
    a: FockOperator,
    b: FockOperator,
    space: FockSpace,
}

impl PseudoBosonPair {
    pub fn family(&self) -> DeformationFamily {
        self.family
    }

    pub fn a(&self) -> &FockOperator {
        &self.a
    }

    pub fn b(&self) -> &FockOperator {
        &self.b
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    /// `N = B·A`.
    pub fn number_operator(&self) -> Result<FockOperator> {
        self.b.compose(&self.a)
    }

    /// `𝔑 = N† = A†B†`.
    pub fn dual_number_operator(&self) -> Result<FockOperator> {
        Ok(self.number_operator()?.adjoint())
    }

    /// `φ₀`: `Φ₀` for `GaussLowering`, the series `e^{βa†²}Φ₀` for
    /// `GaussRaising`.
    pub fn phi_vacuum(&self) -> Result<FockVector> {
        phi_closed_form(self.family, 0, self.space)
    }

    /// `Ψ₀`: the series `e^{−ᾱa†²}Φ₀` for `GaussLowering`, `Φ₀` for
    /// `GaussRaising`.
    pub fn psi_vacuum(&self) -> Result<FockVector> {
        psi_series(self.family, 0, self.space)
    }
}

pub fn build_pair(family: DeformationFamily, space: FockSpace) -> Result<PseudoBosonPair> {
    family.require_finite()?;
    let a = annihilator(space)?;
    let ad = creator(space)?;
    let two_p = family.parameter * 2.0;
    let (a_op, b_op) = match family.kind {
        FamilyKind::GaussLowering => {
            let b = ad.add(&a.scale(two_p))?;
            (a, b)
        }
        FamilyKind::GaussRaising => {
            let lowered = a.sub(&ad.scale(two_p))?;
            (lowered, ad)
        }
    };
    Ok(PseudoBosonPair {
        family,
        a: a_op,
        b: b_op,
        space,
    })
}

fn check_index(n: usize, space: FockSpace) -> Result<()> {
    if space.factors() != 1 {
        return Err(Error::FactorCount {
            expected: 1,
            found: space.factors(),
        });
    }
    if n >= space.dim() {
        return Err(Error::IndexOutOfRange {
            index: vec![n],
            dim: space.dim(),
        });
    }
    Ok(())
}

fn from_terms(space: FockSpace, terms: &[(usize, C64)], tail_bound: f64) -> Result<FockVector> {
    let mut v = nalgebra::DVector::zeros(space.total_dim());
    for &(i, c) in terms {
        v[i] = c;
    }
    FockVector::from_coeffs(space, v, tail_bound)
}

fn series_tail_sq(family: DeformationFamily, n: usize, space: FockSpace) -> Result<f64> {
    let last_k = series::last_kept(n, space.dim());
    series::ascending_tail_sq(family.parameter.norm(), n, last_k)
}

/// `φ_n = Bⁿφ₀/√(n!)` by repeated application of `B`.
pub fn phi_ladder(pair: &PseudoBosonPair, n_max: usize) -> Result<Vec<FockVector>> {
    let limit = pair.space.dim().saturating_sub(2);
    if n_max > limit {
        return Err(Error::OrderTooLarge {
            requested: n_max,
            limit,
        });
    }
    let mut out = Vec::with_capacity(n_max + 1);
    let mut current = pair.phi_vacuum()?;
    out.push(current.clone());
    for n in 1..=n_max {
        let next = pair.b.apply(&current)?.scale(C64::new(1.0 / (n as f64).sqrt(), 0.0));
        // a† acting on a truncated series keeps exactly the retained part
        let tail = match pair.family.kind {
            FamilyKind::GaussLowering => 0.0,
            FamilyKind::GaussRaising => series_tail_sq(pair.family, n, pair.space)?.sqrt(),
        };
        current = next.with_tail_bound(tail);
        out.push(current.clone());
    }
    Ok(out)
}

/// `Ψ_n = (A†)ⁿΨ₀/√(n!)` by repeated application of `A†`.
pub fn psi_ladder(pair: &PseudoBosonPair, n_max: usize) -> Result<Vec<FockVector>> {
    let limit = pair.space.dim().saturating_sub(2);
    if n_max > limit {
        return Err(Error::OrderTooLarge {
            requested: n_max,
            limit,
        });
    }
    let a_dag = pair.a.adjoint();
    let mut out = Vec::with_capacity(n_max + 1);
    let mut current = pair.psi_vacuum()?;
    out.push(current.clone());
    for n in 1..=n_max {
        let next = a_dag.apply(&current)?.scale(C64::new(1.0 / (n as f64).sqrt(), 0.0));
        let tail = match pair.family.kind {
            FamilyKind::GaussLowering => series_tail_sq(pair.family, n, pair.space)?.sqrt(),
            FamilyKind::GaussRaising => 0.0,
        };
        current = next.with_tail_bound(tail);
        out.push(current.clone());
    }
    Ok(out)
}

/// `φ_n = UΦ_n` from the closed-form expansion of `U`.
pub fn phi_closed_form(family: DeformationFamily, n: usize, space: FockSpace) -> Result<FockVector> {
    check_index(n, space)?;
    family.require_finite()?;
    match family.kind {
        FamilyKind::GaussLowering => from_terms(space, &series::descending(family.parameter, n), 0.0),
        FamilyKind::GaussRaising => {
            family.require_disk()?;
            let terms = series::ascending(family.parameter, n, space.dim());
            from_terms(space, &terms, series_tail_sq(family, n, space)?.sqrt())
        }
    }
}

/// `Ψ_n = (U†)^{−1}Φ_n` from the closed-form expansion.
pub fn psi_series(family: DeformationFamily, n: usize, space: FockSpace) -> Result<FockVector> {
    check_index(n, space)?;
    family.require_finite()?;
    let w = -family.parameter.conj();
    match family.kind {
        FamilyKind::GaussLowering => {
            family.require_disk()?;
            let terms = series::ascending(w, n, space.dim());
            from_terms(space, &terms, series_tail_sq(family, n, space)?.sqrt())
        }
        FamilyKind::GaussRaising => from_terms(space, &series::descending(w, n), 0.0),
    }
}

/// Bound on the squared norm of the discarded tail of `Ψ_n`.
///
/// `GaussRaising` has finite `Ψ_n`, so the bound is zero there.
pub fn tail_bound_psi(family: DeformationFamily, n: usize, space: FockSpace) -> Result<f64> {
    check_index(n, space)?;
    match family.kind {
        FamilyKind::GaussLowering => {
            family.require_disk()?;
            series_tail_sq(family, n, space)
        }
        FamilyKind::GaussRaising => Ok(0.0),
    }
}

/// Bound on the squared norm of the discarded tail of `φ_n`.
pub fn tail_bound_phi(family: DeformationFamily, n: usize, space: FockSpace) -> Result<f64> {
    check_index(n, space)?;
    match family.kind {
        FamilyKind::GaussLowering => Ok(0.0),
        FamilyKind::GaussRaising => {
            family.require_disk()?;
            series_tail_sq(family, n, space)
        }
    }
}

/// What a [`BiorthogonalSystem`] was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemLabel {
    Single(DeformationFamily),
    /// Two-mode family; vectors are ordered `n·(m_max+1) + m`.
    TwoMode {
        alpha: C64,
        beta: C64,
        n_max: usize,
        m_max: usize,
    },
}

#[derive(Debug, Clone)]
pub struct BiorthogonalSystem {
    pub label: SystemLabel,
    pub phis: Vec<FockVector>,
    pub psis: Vec<FockVector>,
    /// `pairing[(n, m)] = ⟨Ψ_n, φ_m⟩`.
    pub pairing: DMatrix<C64>,
    /// `ω_n = ‖φ_n‖·‖Ψ_n‖` (truncated norms).
    pub omega: Vec<f64>,
}

/// Residuals of the two expansions of a probe vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionResidual {
    /// `‖v − Σ_{n≤N}⟨Ψ_n, v⟩φ_n‖`
    pub phi_expansion: f64,
    /// `‖v − Σ_{n≤N}⟨φ_n, v⟩Ψ_n‖`
    pub psi_expansion: f64,
}

impl BiorthogonalSystem {
    /// Both families for `n = 0..=n_max`, from the closed forms.
    pub fn for_family(family: DeformationFamily, space: FockSpace, n_max: usize) -> Result<Self> {
        family.require_disk()?;
        let phis = (0..=n_max)
            .map(|n| phi_closed_form(family, n, space))
            .collect::<Result<Vec<_>>>()?;
        let psis = (0..=n_max)
            .map(|n| psi_series(family, n, space))
            .collect::<Result<Vec<_>>>()?;
        pairing_matrix(SystemLabel::Single(family), phis, SystemLabel::Single(family), psis)
    }

    pub fn len(&self) -> usize {
        self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phis.is_empty()
    }

    /// `max_{n,m} |⟨Ψ_n, φ_m⟩ − δ_{n,m}|`.
    pub fn max_pairing_defect(&self) -> f64 {
        let id = DMatrix::<C64>::identity(self.pairing.nrows(), self.pairing.ncols());
        (&self.pairing - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Expands `probe` over the first `order + 1` vectors of each family.
    pub fn expansion_residuals(&self, probe: &FockVector, order: usize) -> Result<ExpansionResidual> {
        if order >= self.len() {
            return Err(Error::OrderTooLarge {
                requested: order,
                limit: self.len().saturating_sub(1),
            });
        }
        let mut via_phi = probe.clone();
        let mut via_psi = probe.clone();
        for n in 0..=order {
            let c_phi = self.psis[n].inner(probe)?;
            via_phi = via_phi.sub(&self.phis[n].scale(c_phi))?;
            let c_psi = self.phis[n].inner(probe)?;
            via_psi = via_psi.sub(&self.psis[n].scale(c_psi))?;
        }
        Ok(ExpansionResidual {
            phi_expansion: via_phi.norm(),
            psi_expansion: via_psi.norm(),
        })
    }
}

/// Assembles the pairing matrix `⟨Ψ_n, φ_m⟩` and the sequence `ω_n`.
pub fn pairing_matrix(
    phi_label: SystemLabel,
    phis: Vec<FockVector>,
    psi_label: SystemLabel,
    psis: Vec<FockVector>,
) -> Result<BiorthogonalSystem> {
    if phi_label != psi_label {
        return Err(Error::FamilyMismatch(format!("{phi_label:?} vs {psi_label:?}")));
    }
    if phis.len() != psis.len() {
        return Err(Error::FamilyMismatch(format!(
            "{} φ vectors vs {} Ψ vectors",
            phis.len(),
            psis.len()
        )));
    }
    let len = phis.len();
    let mut pairing = DMatrix::zeros(len, len);
    for (n, psi) in psis.iter().enumerate() {
        for (m, phi) in phis.iter().enumerate() {
            pairing[(n, m)] = psi.inner(phi)?;
        }
    }
    let omega = phis.iter().zip(&psis).map(|(p, q)| p.norm() * q.norm()).collect();
    Ok(BiorthogonalSystem {
        label: phi_label,
        phis,
        psis,
        pairing,
        omega,
    })
}

/// Eigen-relation residuals of `h = BA + ½𝟙` on one pair of family vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralResidual {
    pub n: usize,
    /// `‖hφ_n − (n+½)φ_n‖ / ‖φ_n‖`
    pub phi_relative: f64,
    /// `‖h†Ψ_n − (n+½)Ψ_n‖`
    pub psi_residual: f64,
    /// Sum of the tail bounds carried by `φ_n` and `Ψ_n`.
    pub tail_allowance: f64,
}

/// Checks `hφ_n = (n+½)φ_n` and `h†Ψ_n = (n+½)Ψ_n` for every member of a
/// single-mode system built from `pair`.
pub fn spectral_residuals(pair: &PseudoBosonPair, system: &BiorthogonalSystem) -> Result<Vec<SpectralResidual>> {
    let h = pair.number_operator()?.shift(C64::new(0.5, 0.0));
    let hd = h.adjoint();
    system
        .phis
        .iter()
        .zip(&system.psis)
        .enumerate()
        .map(|(n, (phi, psi))| {
            let e = C64::new(n as f64 + 0.5, 0.0);
            Ok(SpectralResidual {
                n,
                phi_relative: h.apply(phi)?.distance(&phi.scale(e))? / phi.norm(),
                psi_residual: hd.apply(psi)?.distance(&psi.scale(e))?,
                tail_allowance: phi.tail_bound() + psi.tail_bound(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeResidual {
    pub support: usize,
    pub residual: ExpansionResidual,
}

/// Numerical evidence for the four assumptions of a pseudo-bosonic pair.
#[derive(Debug, Clone)]
pub struct AssumptionReport {
    pub family: DeformationFamily,
    /// `‖Aφ₀‖` on the interior (top index dropped).
    pub vacuum_residual: f64,
    /// `‖Bⁿφ₀‖` for `n = 0..=n_max`.
    pub phi_power_norms: Vec<f64>,
    /// `‖B†Ψ₀‖` on the interior.
    pub dual_vacuum_residual: f64,
    /// `‖(A†)ⁿΨ₀‖` for `n = 0..=n_max`.
    pub psi_power_norms: Vec<f64>,
    pub reconstruction: Vec<ProbeResidual>,
    pub omega: Vec<f64>,
    /// `ω_{n_max}/ω₀`.
    pub omega_growth: f64,
    /// `ω_{n+2} ≥ ω_n` throughout and `omega_growth ≥ RIESZ_GROWTH_THRESHOLD`.
    pub riesz_failure_evidence: bool,
}

/// Probe vectors with finite support used for reconstruction evidence.
pub fn reconstruction_probes(space: FockSpace) -> Result<Vec<FockVector>> {
    let mut probes = vec![basis_state(space, &[0])?, basis_state(space, &[2])?];
    if space.dim() > 5 {
        probes.push(basis_state(space, &[5])?);
    }
    let s = 8.min(space.dim() - 1);
    let coeffs = nalgebra::DVector::from_fn(space.total_dim(), |j, _| {
        if j <= s {
            C64::from_polar(1.0 / (1.0 + j as f64), 0.7 * j as f64)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    probes.push(FockVector::from_coeffs(space, coeffs, 0.0)?);
    Ok(probes)
}

pub fn assumption_report(
    family: DeformationFamily,
    space: FockSpace,
    n_max: usize,
) -> Result<AssumptionReport> {
    family.require_disk()?;
    let pair = build_pair(family, space)?;
    let phis = phi_ladder(&pair, n_max)?;
    let psis = psi_ladder(&pair, n_max)?;

    let vacuum_residual = pair.a.apply(&phis[0])?.interior_norm(1)?;
    let dual_vacuum_residual = pair.b.adjoint().apply(&psis[0])?.interior_norm(1)?;
    let sqrt_fact = |n: usize| (0.5 * ln_factorial(n as u64)).exp();
    let phi_power_norms = phis.iter().enumerate().map(|(n, v)| sqrt_fact(n) * v.norm()).collect();
    let psi_power_norms = psis.iter().enumerate().map(|(n, v)| sqrt_fact(n) * v.norm()).collect();

    let system = pairing_matrix(SystemLabel::Single(family), phis, SystemLabel::Single(family), psis)?;
    let mut reconstruction = Vec::new();
    for probe in reconstruction_probes(space)? {
        let support = probe.support_max().unwrap_or(0);
        let order = support.max(1).min(n_max);
        if support > order {
            continue;
        }
        reconstruction.push(ProbeResidual {
            support,
            residual: system.expansion_residuals(&probe, order)?,
        });
    }

    let omega = system.omega.clone();
    let omega_growth = omega.last().copied().unwrap_or(1.0) / omega[0];
    let stepwise = omega.windows(3).all(|w| w[2] >= w[0]);
    Ok(AssumptionReport {
        family,
        vacuum_residual,
        phi_power_norms,
        dual_vacuum_residual,
        psi_power_norms,
        reconstruction,
        omega,
        omega_growth,
        riesz_failure_evidence: stepwise && omega_growth >= RIESZ_GROWTH_THRESHOLD,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesClass {
    Convergent,
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    /// Partial-sum level that defines the blow-up index of a divergent series.
    pub blow_up_threshold: f64,
    /// Number of terms summed when looking for the blow-up index.
    pub max_terms: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            blow_up_threshold: 1e12,
            max_terms: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusClass {
    pub parameter: C64,
    /// `4|p|²`.
    pub limiting_ratio: f64,
    pub class: SeriesClass,
    /// First `k` at which `Σ_{j≤k} t_j` exceeds the threshold, if reached.
    pub blow_up_index: Option<usize>,
}

/// Classifies the norm series `Σ_k |p|^{2k}(n+2k)!/(k!²n!)` of the series-side
/// vector for every parameter.
pub fn radius_scan(
    kind: FamilyKind,
    n: usize,
    parameters: &[C64],
    config: ScanConfig,
) -> Vec<RadiusClass> {
    parameters
        .iter()
        .map(|&p| {
            let family = DeformationFamily::new(kind, p);
            let limiting_ratio = family.limiting_ratio();
            if limiting_ratio < 1.0 {
                return RadiusClass {
                    parameter: p,
                    limiting_ratio,
                    class: SeriesClass::Convergent,
                    blow_up_index: None,
                };
            }
            let threshold = config.blow_up_threshold.ln();
            let mut log_sum = f64::NEG_INFINITY;
            let mut blow_up_index = None;
            for k in 0..config.max_terms {
                let t = series::log_term(p.norm(), n, k);
                log_sum = log_add_exp(log_sum, t);
                if log_sum > threshold {
                    blow_up_index = Some(k);
                    break;
                }
            }
            RadiusClass {
                parameter: p,
                limiting_ratio,
                class: SeriesClass::Divergent,
                blow_up_index,
            }
        })
        .collect()
}

pub(crate) fn log_add_exp(x: f64, y: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return y;
    }
    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn single(d: usize) -> FockSpace {
        FockSpace::single(d).unwrap()
    }

    #[test]
    fn lowering_pair_entries() {
        let pair = build_pair(DeformationFamily::gauss_lowering(r(0.3)), single(4)).unwrap();
        let b = pair.b().matrix();
        for n in 0..3 {
            assert_abs_diff_eq!(b[(n + 1, n)].re, ((n + 1) as f64).sqrt(), epsilon = 1e-15);
        }
        for n in 1..4 {
            assert_abs_diff_eq!(b[(n - 1, n)].re, 0.6 * (n as f64).sqrt(), epsilon = 1e-15);
        }
    }

    #[test]
    fn undeformed_limit_is_ordinary_boson() {
        let s = single(6);
        let pair = build_pair(DeformationFamily::gauss_lowering(r(0.0)), s).unwrap();
        assert_eq!(pair.a().matrix(), annihilator(s).unwrap().matrix());
        assert_eq!(pair.b().matrix(), creator(s).unwrap().matrix());
        let phis = phi_ladder(&pair, 4).unwrap();
        for (n, phi) in phis.iter().enumerate() {
            assert!(phi.distance(&basis_state(s, &[n]).unwrap()).unwrap() < 1e-15);
        }
    }

    #[test]
    fn non_finite_parameter_rejected() {
        let fam = DeformationFamily::gauss_lowering(C64::new(f64::NAN, 0.0));
        assert!(matches!(build_pair(fam, single(4)), Err(Error::NonFiniteParameter)));
    }

    #[test]
    fn deformed_pair_is_not_adjoint() {
        for fam in [
            DeformationFamily::gauss_lowering(r(0.2)),
            DeformationFamily::gauss_raising(r(0.2)),
        ] {
            let pair = build_pair(fam, single(10)).unwrap();
            assert!(pair.a().adjoint().max_abs_diff(pair.b()).unwrap() > 1e-6);
        }
    }

    #[test]
    fn phi_two_by_hand() {
        // (a† + 0.6a)Φ₀ = Φ₁, then (a† + 0.6a)Φ₁ = √2Φ₂ + 0.6Φ₀, over √2
        let s = single(10);
        let fam = DeformationFamily::gauss_lowering(r(0.3));
        let phis = phi_ladder(&build_pair(fam, s).unwrap(), 2).unwrap();
        assert_eq!(phis[1], basis_state(s, &[1]).unwrap());
        assert_abs_diff_eq!(phis[2].get(&[2]).unwrap().re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(phis[2].get(&[0]).unwrap().re, 0.3 * 2f64.sqrt(), epsilon = 1e-15);
        let closed = phi_closed_form(fam, 2, s).unwrap();
        assert!(closed.distance(&phis[2]).unwrap() < 1e-12);
        for n in 0..2 {
            assert_eq!(phi_closed_form(fam, n, s).unwrap(), basis_state(s, &[n]).unwrap());
        }
    }

    #[test]
    fn raising_phi_series_first_term() {
        let s = single(40);
        let phi0 = phi_closed_form(DeformationFamily::gauss_raising(r(0.3)), 0, s).unwrap();
        assert_abs_diff_eq!(phi0.get(&[2]).unwrap().re, 0.3 * 2f64.sqrt(), epsilon = 1e-14);
        assert!(phi0.tail_bound() > 0.0);
    }

    #[test]
    fn psi_lowering_coefficients() {
        let s = single(40);
        let psi0 = psi_series(DeformationFamily::gauss_lowering(r(0.3)), 0, s).unwrap();
        assert_abs_diff_eq!(psi0.get(&[0]).unwrap().re, 1.0);
        assert_abs_diff_eq!(psi0.get(&[2]).unwrap().re, -0.424_264, epsilon = 1e-6);
        assert_abs_diff_eq!(psi0.get(&[4]).unwrap().re, 0.220_454, epsilon = 1e-6);
    }

    #[test]
    fn psi_raising_is_finite() {
        let s = single(10);
        let psi2 = psi_series(DeformationFamily::gauss_raising(r(0.3)), 2, s).unwrap();
        assert_eq!(psi2.tail_bound(), 0.0);
        assert_abs_diff_eq!(psi2.get(&[2]).unwrap().re, 1.0);
        assert_abs_diff_eq!(psi2.get(&[0]).unwrap().re, -0.3 * 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(psi2.support_max(), Some(2));
    }

    #[test]
    fn series_sides_reject_outside_disk() {
        let s = single(20);
        for p in [0.5, 0.6, 1.0] {
            let low = DeformationFamily::gauss_lowering(r(p));
            assert!(matches!(psi_series(low, 0, s), Err(Error::OutsideDisk { .. })));
            let high = DeformationFamily::gauss_raising(r(p));
            assert!(matches!(phi_closed_form(high, 0, s), Err(Error::OutsideDisk { .. })));
            let pair = build_pair(high, s).unwrap();
            assert!(matches!(phi_ladder(&pair, 3), Err(Error::OutsideDisk { .. })));
        }
        // the finite sides exist for every parameter
        assert!(phi_closed_form(DeformationFamily::gauss_lowering(r(2.0)), 5, s).is_ok());
        assert!(psi_series(DeformationFamily::gauss_raising(r(2.0)), 5, s).is_ok());
    }

    #[test]
    fn ladder_order_limit() {
        let pair = build_pair(DeformationFamily::gauss_lowering(r(0.1)), single(8)).unwrap();
        assert!(phi_ladder(&pair, 6).is_ok());
        assert!(matches!(phi_ladder(&pair, 7), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn tail_bounds() {
        let s = single(96);
        let low = |a: f64| DeformationFamily::gauss_lowering(r(a));
        assert!(tail_bound_psi(low(0.3), 0, s).unwrap() <= 1e-12);
        assert_eq!(tail_bound_psi(low(0.0), 7, s).unwrap(), 0.0);
        let wide = tail_bound_psi(low(0.49), 0, s).unwrap();
        assert!(wide.is_finite() && wide > 1e-3);
        assert_eq!(tail_bound_phi(low(0.3), 4, s).unwrap(), 0.0);
    }

    #[test]
    fn pairing_mismatch_rejected() {
        let s = single(20);
        let f1 = DeformationFamily::gauss_lowering(r(0.1));
        let f2 = DeformationFamily::gauss_lowering(r(0.2));
        let phis = vec![phi_closed_form(f1, 0, s).unwrap()];
        let psis = vec![psi_series(f2, 0, s).unwrap()];
        assert!(matches!(
            pairing_matrix(SystemLabel::Single(f1), phis, SystemLabel::Single(f2), psis),
            Err(Error::FamilyMismatch(_))
        ));
    }

    #[test]
    fn orthonormal_limit_pairing() {
        let sys = BiorthogonalSystem::for_family(DeformationFamily::gauss_lowering(r(0.0)), single(20), 8)
            .unwrap();
        assert_eq!(sys.max_pairing_defect(), 0.0);
        assert!(sys.omega.iter().all(|&w| w == 1.0));
    }

    #[test]
    fn radius_scan_boundary_and_zero() {
        let out = radius_scan(
            FamilyKind::GaussLowering,
            0,
            &[r(0.0), r(0.5), r(1.0)],
            ScanConfig::default(),
        );
        assert_eq!(out[0].class, SeriesClass::Convergent);
        assert_eq!(out[1].class, SeriesClass::Divergent);
        assert_eq!(out[1].blow_up_index, None);
        assert_eq!(out[2].class, SeriesClass::Divergent);
        assert!(out[2].blow_up_index.is_some());
    }

    #[test]
    fn assumption_report_orthonormal_limit() {
        let rep = assumption_report(DeformationFamily::gauss_lowering(r(0.0)), single(32), 10).unwrap();
        assert!(rep.omega.iter().all(|&w| (w - 1.0).abs() < 1e-15));
        assert!(!rep.riesz_failure_evidence);
        assert_eq!(rep.vacuum_residual, 0.0);
    }
}
