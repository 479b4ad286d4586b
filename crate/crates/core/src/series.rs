//! Coefficients of `e^{w a†²}Φ_n` and `e^{w a²}Φ_n`, plus the geometric tail
//! bound for the ascending series. Coefficients follow the term-ratio
//! recurrence and switch to log-factorial evaluation when the recurrence
//! would overflow or underflow.

use num_complex::Complex64 as C64;
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};

fn lnf(n: usize) -> f64 {
    ln_factorial(n as u64)
}

fn phase_power(w: C64, k: usize) -> C64 {
    if k == 0 {
        return C64::new(1.0, 0.0);
    }
    (w / w.norm()).powu(k as u32)
}

/// Advances a coefficient by one ratio step. Uses the linear recurrence
/// while it stays in the normal floating range and the log-domain value
/// `phase · e^{log_mag}` otherwise.
fn step(prev: C64, ratio: C64, phase: C64, log_mag: f64) -> C64 {
    let next = prev * ratio;
    let mag = next.norm();
    if mag.is_normal() && prev.norm().is_normal() {
        next
    } else {
        phase * log_mag.exp()
    }
}

/// Nonzero coefficients `(index, value)` of `e^{w a†²}Φ_n` with index `< dim`:
/// `w^k/k! · √((n+2k)!/n!)` at `n + 2k`.
pub(crate) fn ascending(w: C64, n: usize, dim: usize) -> Vec<(usize, C64)> {
    let mut out = vec![(n, C64::new(1.0, 0.0))];
    if w.norm() == 0.0 {
        return out;
    }
    let lw = w.norm().ln();
    let mut k = 1;
    while n + 2 * k < dim {
        let log_mag = k as f64 * lw - lnf(k) + 0.5 * (lnf(n + 2 * k) - lnf(n));
        let ratio = w * (((n + 2 * k - 1) * (n + 2 * k)) as f64).sqrt() / k as f64;
        let prev = out[k - 1].1;
        out.push((n + 2 * k, step(prev, ratio, phase_power(w, k), log_mag)));
        k += 1;
    }
    out
}

/// Coefficients of the finite sum `e^{w a²}Φ_n`: `w^k/k! · √(n!/(n−2k)!)` at
/// `n − 2k`.
pub(crate) fn descending(w: C64, n: usize) -> Vec<(usize, C64)> {
    let mut out = vec![(n, C64::new(1.0, 0.0))];
    if w.norm() == 0.0 {
        return out;
    }
    let lw = w.norm().ln();
    for k in 1..=n / 2 {
        let log_mag = k as f64 * lw - lnf(k) + 0.5 * (lnf(n) - lnf(n - 2 * k));
        let ratio = w * (((n - 2 * k + 2) * (n - 2 * k + 1)) as f64).sqrt() / k as f64;
        let prev = out[k - 1].1;
        out.push((n - 2 * k, step(prev, ratio, phase_power(w, k), log_mag)));
    }
    out
}

/// `log t_k` for `t_k = |w|^{2k} (n+2k)! / (k!² n!)`, the squared modulus of
/// the k-th ascending coefficient.
pub(crate) fn log_term(w_abs: f64, n: usize, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    2.0 * k as f64 * w_abs.ln() + lnf(n + 2 * k) - 2.0 * lnf(k) - lnf(n)
}

/// `t_{k+1} / t_k = |w|²(2k+n+1)(2k+n+2)/(k+1)²`.
pub(crate) fn term_ratio(w_abs: f64, n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    w_abs * w_abs * (2.0 * k + n + 1.0) * (2.0 * k + n + 2.0) / ((k + 1.0) * (k + 1.0))
}

/// Largest `k` kept by [`ascending`] at this truncation.
pub(crate) fn last_kept(n: usize, dim: usize) -> usize {
    (dim - 1 - n) / 2
}

/// Upper bound on `Σ_{k > last_k} t_k`.
///
/// For `n ≥ 1` the ratio `t_{k+1}/t_k` decreases to `4|w|²`; for `n = 0` it
/// increases to it. Either way `sup_{k ≥ K} r_k = max(r_K, 4|w|²) =: q`, and
/// the tail is at most `t_K · q/(1 − q)` once `q < 1`.
pub(crate) fn ascending_tail_sq(w_abs: f64, n: usize, last_k: usize) -> Result<f64> {
    if w_abs == 0.0 {
        return Ok(0.0);
    }
    let q = term_ratio(w_abs, n, last_k).max(4.0 * w_abs * w_abs);
    if q >= 1.0 {
        return Err(Error::TailNotGeometric { last_k, ratio: q });
    }
    Ok(log_term(w_abs, n, last_k).exp() * q / (1.0 - q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ascending_first_terms() {
        // (−0.3)^k √((2k)!)/k!  for k = 0, 1, 2
        let c = ascending(C64::new(-0.3, 0.0), 0, 6);
        assert_eq!(c.len(), 3);
        assert_relative_eq!(c[1].1.re, -0.3 * 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(c[2].1.re, 0.09 * 24f64.sqrt() / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn descending_matches_hand_expansion() {
        // e^{w a²}Φ₄ = Φ₄ + w√12 Φ₂ + w²/2 √24 Φ₀
        let w = C64::new(0.2, 0.1);
        let c = descending(w, 4);
        assert_eq!(c.iter().map(|p| p.0).collect::<Vec<_>>(), vec![4, 2, 0]);
        assert!((c[1].1 - w * 12f64.sqrt()).norm() < 1e-14);
        assert!((c[2].1 - w * w * 0.5 * 24f64.sqrt()).norm() < 1e-14);
    }

    #[test]
    fn ratio_matches_log_terms() {
        for n in [0, 1, 5] {
            for k in [0, 3, 20] {
                let r = (log_term(0.3, n, k + 1) - log_term(0.3, n, k)).exp();
                assert_relative_eq!(r, term_ratio(0.3, n, k), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn tail_bound_dominates_brute_force_tail() {
        for &(w, n, last_k) in &[(0.3, 0usize, 20usize), (0.3, 5, 10), (0.45, 2, 60), (0.1, 0, 3)] {
            let bound = ascending_tail_sq(w, n, last_k).unwrap();
            let brute: f64 = (last_k + 1..last_k + 4000).map(|k| log_term(w, n, k).exp()).sum();
            assert!(brute <= bound, "w={w} n={n} K={last_k}: {brute} > {bound}");
        }
    }

    #[test]
    fn tail_needs_geometric_regime() {
        // n = 40, K = 1: ratio 0.09·43·44/4 ≈ 42.6
        assert!(matches!(
            ascending_tail_sq(0.3, 40, 1),
            Err(Error::TailNotGeometric { .. })
        ));
    }
}
