//! Hofbauer's potential on the full 2-shift.
//!
//! `φ = a_k` on `M_k = [1ᵏ0]`, `φ(1^∞) = 0`, with `a_k < 0`, `a_k → 0` and
//! `s_k = a_0 + ⋯ + a_k`. The pressure of `βφ` is computed from the renewal
//! equation `Σ_k exp(βs_k − (k+1)P) = 1` (and `P = 0` when `Σ_k e^{βs_k} ≤ 1`);
//! the cylinder-maximization `P_n` is the independent check.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::potentials::Observable;

/// Parametric description of the sequence `a_k`.
#[derive(Clone)]
pub enum HofbauerFamily {
    /// `a_k = −γ log((k+1)/k)` for `k ≥ 1`, `a_0 = −log ζ(γ)`; `e^{s_k} = (k+1)^{−γ}/ζ(γ)`.
    PowerLog { gamma: f64 },
    /// `a_k = −1/(k+1)²`.
    InverseSquare,
    /// Arbitrary generator; must be negative with `|a_k|` nonincreasing for `k ≥ 1`.
    Explicit { name: String, a: Arc<dyn Fn(usize) -> f64 + Send + Sync> },
}

impl fmt::Debug for HofbauerFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HofbauerFamily::PowerLog { gamma } => write!(f, "PowerLog {{ gamma: {gamma} }}"),
            HofbauerFamily::InverseSquare => write!(f, "InverseSquare"),
            HofbauerFamily::Explicit { name, .. } => write!(f, "Explicit({name})"),
        }
    }
}

/// Terms of an explicit family checked at construction.
const EXPLICIT_CHECK: usize = 4096;

#[derive(Debug, Clone)]
pub struct HofbauerPotential {
    family: HofbauerFamily,
    /// `log ζ(γ)` for the power-log family.
    log_zeta: f64,
}

impl HofbauerPotential {
    pub fn new(family: HofbauerFamily) -> Result<Self> {
        let mut log_zeta = 0.0;
        match &family {
            HofbauerFamily::PowerLog { gamma } => {
                if !(*gamma > 1.0) || !gamma.is_finite() {
                    return Err(Error::Invalid(format!("power-log family needs gamma > 1, got {gamma}")));
                }
                log_zeta = zeta(*gamma).ln();
            }
            HofbauerFamily::InverseSquare => {}
            HofbauerFamily::Explicit { a, .. } => {
                let mut prev = f64::INFINITY;
                for k in 0..EXPLICIT_CHECK {
                    let v = a(k);
                    if !(v < 0.0) || !v.is_finite() {
                        return Err(Error::Invalid(format!("a_{k} = {v} is not negative")));
                    }
                    if k >= 1 {
                        if v.abs() > prev {
                            return Err(Error::Invalid(format!("|a_{k}| exceeds |a_{}|", k - 1)));
                        }
                        prev = v.abs();
                    }
                }
            }
        }
        Ok(HofbauerPotential { family, log_zeta })
    }

    /// The critical family with `γ = 3`.
    pub fn cubic() -> Self {
        Self::new(HofbauerFamily::PowerLog { gamma: 3.0 }).expect("gamma > 1")
    }

    pub fn inverse_square() -> Self {
        Self::new(HofbauerFamily::InverseSquare).expect("valid family")
    }

    pub fn family(&self) -> &HofbauerFamily {
        &self.family
    }

    pub fn a(&self, k: usize) -> f64 {
        match &self.family {
            HofbauerFamily::PowerLog { gamma } => {
                if k == 0 {
                    -self.log_zeta
                } else {
                    -gamma * (1.0 / k as f64).ln_1p()
                }
            }
            HofbauerFamily::InverseSquare => -1.0 / ((k + 1) as f64).powi(2),
            HofbauerFamily::Explicit { a, .. } => a(k),
        }
    }

    /// `s_k`, in closed form where the family has one.
    pub fn s(&self, k: usize) -> f64 {
        match &self.family {
            HofbauerFamily::PowerLog { gamma } => -gamma * ((k + 1) as f64).ln() - self.log_zeta,
            _ => (0..=k).map(|j| self.a(j)).sum(),
        }
    }

    /// `sup_{j ≥ k} |a_j|`, using the monotonicity of `|a_j|` for `j ≥ 1`.
    fn tail_sup(&self, k: usize) -> f64 {
        if k == 0 {
            self.a(0).abs().max(self.a(1).abs())
        } else {
            self.a(k).abs()
        }
    }

    /// `Σ_{k>K} e^{s_k}` and `Σ_{k>K} (k+1)e^{s_k}` as certified upper
    /// bounds (`∞` when the series diverges); `None` without an analytic tail.
    fn tail_bounds(&self, depth: usize) -> Option<(f64, f64)> {
        let k1 = (depth + 1) as f64;
        match &self.family {
            HofbauerFamily::PowerLog { gamma } => {
                let z = self.log_zeta.exp();
                let plain = k1.powf(1.0 - gamma) / ((gamma - 1.0) * z);
                let weighted =
                    if *gamma > 2.0 { k1.powf(2.0 - gamma) / ((gamma - 2.0) * z) } else { f64::INFINITY };
                Some((plain, weighted))
            }
            HofbauerFamily::InverseSquare => Some((f64::INFINITY, f64::INFINITY)),
            HofbauerFamily::Explicit { .. } => None,
        }
    }

    /// `Σ_k e^{βs_k}` in closed form; `∞` when divergent, `None` when unknown.
    fn series_at_zero(&self, beta: f64) -> Option<f64> {
        match &self.family {
            HofbauerFamily::PowerLog { gamma } => {
                let g = gamma * beta;
                Some(if g > 1.0 { zeta(g) / (beta * self.log_zeta).exp() } else { f64::INFINITY })
            }
            // s_k decreases to −ζ(2) > −∞, so the terms do not tend to 0
            HofbauerFamily::InverseSquare => Some(f64::INFINITY),
            HofbauerFamily::Explicit { .. } => None,
        }
    }

    /// Length of the run of 1s at the end of `word` and the sum of `φ` over
    /// the positions before it, which the word determines.
    fn split(&self, word: &[usize]) -> (usize, f64) {
        let mut fixed = 0.0;
        let mut next_zero: Option<usize> = None;
        let mut trailing = 0;
        for (i, &s) in word.iter().enumerate().rev() {
            if s == 0 {
                next_zero = Some(i);
            }
            match next_zero {
                Some(j) => fixed += self.a(j - i),
                None => trailing += 1,
            }
        }
        (trailing, fixed)
    }
}

impl Observable for HofbauerPotential {
    /// `max(|a_{k−1}|, sup_{j≥k} |a_j|)`: the oscillation on `[1ᵏ]` plus one index of slack.
    fn var_k(&self, k: usize) -> f64 {
        if k == 0 {
            self.tail_sup(0)
        } else {
            self.a(k - 1).abs().max(self.tail_sup(k))
        }
    }

    /// Attained on the continuation `1^∞`, where the trailing run contributes 0.
    fn birkhoff_sup(&self, word: &[usize]) -> f64 {
        self.split(word).1
    }

    /// Attained on the continuation `0…`, where the trailing run gives `a_1 + ⋯ + a_t`.
    fn birkhoff_inf(&self, word: &[usize]) -> f64 {
        let (t, fixed) = self.split(word);
        fixed + (1..=t).map(|q| self.a(q)).sum::<f64>()
    }
}

/// Riemann zeta for real `s > 1` by Euler–Maclaurin summation.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta needs s > 1");
    const N: usize = 12;
    // B_{2j} / (2j)!
    const B: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
    ];
    let n = N as f64;
    let mut sum: f64 = (1..N).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial s(s+1)…(s+2j−2) times N^{−s−2j+1}
    let mut factor = s * n.powf(-s - 1.0);
    for (j, b) in B.iter().enumerate() {
        sum += b * factor;
        let m = 2.0 * j as f64;
        factor *= (s + m + 1.0) * (s + m + 2.0) / (n * n);
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Unique,
    NonUnique,
    Undetermined,
}

/// Partial sums of `Σ e^{s_k}` and `Σ (k+1)e^{s_k}` up to `depth`, with
/// certified tail bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionDiagnostic {
    pub sum_exp_s: f64,
    pub sum_weighted: f64,
    pub depth: usize,
    pub tail_bound: f64,
    pub weighted_tail_bound: f64,
    pub classification: Classification,
}

/// Largest truncation depth tried by the adaptive series routines.
pub const MAX_DEPTH: usize = 1 << 26;

/// Extends the depth from `depth` until the tail of `Σe^{s_k}` is below
/// `tol/10`, then classifies by Hofbauer's criterion.
pub fn diagnose(pot: &HofbauerPotential, depth: usize, tol: f64) -> Result<TransitionDiagnostic> {
    if depth == 0 || !(tol > 0.0) {
        return Err(Error::Invalid("need depth >= 1 and tol > 0".into()));
    }
    pot.tail_bounds(depth).ok_or(Error::UndeterminedTail)?;
    let mut k = depth;
    let (tail, wtail) = loop {
        let (t, w) = pot.tail_bounds(k).expect("family has a tail");
        if t < tol / 10.0 || k >= MAX_DEPTH || t.is_infinite() {
            break (t, w);
        }
        k = (2 * k).min(MAX_DEPTH);
    };
    let (mut plain, mut weighted) = (0.0, 0.0);
    // small terms first
    for j in (0..=k).rev() {
        let e = pot.s(j).exp();
        plain += e;
        weighted += (j + 1) as f64 * e;
    }
    let classification = if plain > 1.0 + tol || plain + tail < 1.0 - tol {
        Classification::Unique
    } else if tail <= tol && (plain - 1.0).abs() <= tol {
        // Σe^{s_k} = 1; uniqueness then hinges on the weighted series
        if wtail.is_finite() {
            Classification::NonUnique
        } else {
            Classification::Unique
        }
    } else {
        Classification::Undetermined
    };
    Ok(TransitionDiagnostic {
        sum_exp_s: plain,
        sum_weighted: weighted,
        depth: k,
        tail_bound: tail,
        weighted_tail_bound: wtail,
        classification,
    })
}

/// `P(βφ)` from the renewal equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenewalPressure {
    pub beta: f64,
    pub pressure: f64,
    /// `Σ_k e^{βs_k}`, `∞` when divergent.
    pub series_at_zero: f64,
    /// Terms summed at the last bisection step; 0 when `P = 0` from the closed form.
    pub depth: usize,
    /// Certified bound on the truncated tail at the last step.
    pub tail_bound: f64,
}

/// Weights `e^{βs_k}` computed on demand.
struct Weights<'a> {
    pot: &'a HofbauerPotential,
    beta: f64,
    w: Vec<f64>,
    s: f64,
}

impl Weights<'_> {
    fn extend(&mut self, k: usize) {
        while self.w.len() <= k {
            let j = self.w.len();
            let s = match self.pot.family {
                HofbauerFamily::PowerLog { .. } => self.pot.s(j),
                _ => {
                    self.s += self.pot.a(j);
                    self.s
                }
            };
            self.w.push((self.beta * s).exp());
        }
    }

    /// Bound on `Σ_{k>K} e^{βs_k − (k+1)P}` for `P > 0`, `β ≥ 0`.
    fn tail(&self, k: usize, p: f64) -> f64 {
        // s_j ≤ s_K for j > K
        let generic = self.w[k] * (-((k + 2) as f64) * p).exp() / -(-p).exp_m1();
        match self.pot.family {
            HofbauerFamily::PowerLog { gamma } if gamma * self.beta > 1.0 => {
                let g = gamma * self.beta;
                let poly = (-self.beta * self.pot.log_zeta).exp() * ((k + 1) as f64).powf(1.0 - g) / (g - 1.0)
                    * (-((k + 2) as f64) * p).exp();
                generic.min(poly)
            }
            _ => generic,
        }
    }

    /// `Σ_{k≤K} e^{βs_k − (k+1)P} − 1`.
    fn partial(&self, k: usize, p: f64) -> f64 {
        let q = (-p).exp();
        let mut sum = 0.0;
        let mut decay = q;
        for (j, w) in self.w[..=k].iter().enumerate() {
            if j % 256 == 0 {
                decay = (-((j + 1) as f64) * p).exp();
            }
            sum += w * decay;
            decay *= q;
        }
        sum - 1.0
    }
}

pub fn pressure_renewal(pot: &HofbauerPotential, beta: f64, tol: f64) -> Result<RenewalPressure> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::OutOfRange(beta));
    }
    if !(tol > 0.0) {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    let series_at_zero = pot.series_at_zero(beta).ok_or(Error::TailUncertified(f64::INFINITY))?;
    if series_at_zero <= 1.0 {
        return Ok(RenewalPressure { beta, pressure: 0.0, series_at_zero, depth: 0, tail_bound: 0.0 });
    }
    if beta == 0.0 {
        return Ok(RenewalPressure { beta, pressure: 2f64.ln(), series_at_zero, depth: 0, tail_bound: 0.0 });
    }
    let mut weights = Weights { pot, beta, w: Vec::new(), s: 0.0 };
    // every weight is below 1, so the root is below log 2
    let (mut lo, mut hi) = (0.0, 2f64.ln());
    let (mut depth, mut tail_bound) = (0, 0.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let mut k = 64;
        loop {
            weights.extend(k);
            tail_bound = weights.tail(k, mid);
            if tail_bound <= tol / 10.0 {
                break;
            }
            if k >= MAX_DEPTH {
                return Err(Error::TailUncertified(tail_bound));
            }
            k = (2 * k).min(MAX_DEPTH);
        }
        depth = k;
        let f = weights.partial(k, mid);
        if f > 0.0 {
            lo = mid;
        } else if f + tail_bound < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            hi = mid;
        }
    }
    Ok(RenewalPressure { beta, pressure: 0.5 * (lo + hi), series_at_zero, depth, tail_bound })
}

/// Renewal pressure on a grid of `β ≥ 0`.
pub fn pressure_curve(pot: &HofbauerPotential, betas: &[f64], tol: f64) -> Result<Vec<RenewalPressure>> {
    betas.iter().map(|&b| pressure_renewal(pot, b, tol)).collect()
}

/// Outward one-sided difference quotients of `β ↦ P(βφ)` at `β₀`:
/// `left = (P(β₀−h) − P(β₀))/h`, `right = (P(β₀+h) − P(β₀))/h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkQuotients {
    pub beta: f64,
    pub step: f64,
    pub left: f64,
    pub right: f64,
}

pub fn kink_quotients(pot: &HofbauerPotential, beta: f64, step: f64, tol: f64) -> Result<KinkQuotients> {
    if !(step > 0.0) || step > beta {
        return Err(Error::Invalid(format!("step {step} must lie in (0, {beta}]")));
    }
    let p0 = pressure_renewal(pot, beta, tol)?.pressure;
    let pl = pressure_renewal(pot, beta - step, tol)?.pressure;
    let pr = pressure_renewal(pot, beta + step, tol)?.pressure;
    Ok(KinkQuotients { beta, step, left: (pl - p0) / step, right: (pr - p0) / step })
}

/// `−Σ s_k e^{s_k} / Σ (k+1)e^{s_k}`, the slope of the renewal solution
/// as `β ↑ 1` in the critical case, truncated at `depth`.
pub fn left_slope_estimate(pot: &HofbauerPotential, depth: usize) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for k in (0..=depth).rev() {
        let s = pot.s(k);
        let e = s.exp();
        num -= s * e;
        den += (k + 1) as f64 * e;
    }
    num / den
}

/// CSV `beta,pressure,left_quotient,right_quotient` with quotients taken
/// against the neighbouring grid points; blank at the ends.
pub fn write_scan_csv<W: Write>(curve: &[RenewalPressure], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["beta", "pressure", "left_quotient", "right_quotient"]).map_err(io)?;
    for (i, pt) in curve.iter().enumerate() {
        let left = i
            .checked_sub(1)
            .map(|j| format!("{:.16e}", (curve[j].pressure - pt.pressure) / (pt.beta - curve[j].beta)))
            .unwrap_or_default();
        let right = curve
            .get(i + 1)
            .map(|n| format!("{:.16e}", (n.pressure - pt.pressure) / (n.beta - pt.beta)))
            .unwrap_or_default();
        w.write_record([format!("{}", pt.beta), format!("{:.16e}", pt.pressure), left, right]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Invalid(format!("csv: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::Scaled;
    use crate::sft::{Sft, DEFAULT_BUDGET};
    use crate::variational::pressure_pn;
    use std::f64::consts::PI;

    const ZETA3: f64 = 1.202_056_903_159_594_2;

    /// Direct `S_nφ` on a finite word followed by an explicit tail.
    fn birkhoff_direct(pot: &HofbauerPotential, word: &[usize], tail: &[usize]) -> f64 {
        let x: Vec<usize> = word.iter().chain(tail).copied().collect();
        (0..word.len())
            .map(|i| match x[i..].iter().position(|&s| s == 0) {
                Some(k) => pot.a(k),
                None => 0.0,
            })
            .sum()
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(3.0) - ZETA3).abs() < 1e-15);
        assert!((zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta(1.5) - 2.612_375_348_685_488).abs() < 1e-14);
        // pole: ζ(1+ε) ≈ 1/ε + γ_E
        let s = 1.0 + 1e-6;
        assert!((zeta(s) - 1.0 / (s - 1.0) - 0.577_215_664_901_532_9).abs() < 1e-6);
        assert!((zeta(30.0) - 1.0 - 2f64.powi(-30) - 3f64.powi(-30)).abs() < 1e-15);
    }

    #[test]
    fn cubic_family_terms() {
        let c = HofbauerPotential::cubic();
        assert!((c.a(0) + ZETA3.ln()).abs() < 1e-15);
        assert!((c.a(1) + 3.0 * 2f64.ln()).abs() < 1e-15);
        for k in [0, 1, 5, 100, 10_000] {
            let direct: f64 = (0..=k).map(|j| c.a(j)).sum();
            assert!((c.s(k) - direct).abs() < 1e-10 * (1.0 + direct.abs()));
            assert!((c.s(k).exp() - ((k + 1) as f64).powi(-3) / ZETA3).abs() < 1e-15);
        }
        assert!(HofbauerPotential::new(HofbauerFamily::PowerLog { gamma: 1.0 }).is_err());
    }

    #[test]
    fn diagnose_examples() {
        let d = diagnose(&HofbauerPotential::cubic(), 100, 1e-8).unwrap();
        assert_eq!(d.classification, Classification::NonUnique);
        assert!((d.sum_exp_s - 1.0).abs() <= 1e-8);
        assert!(d.tail_bound < 1e-9);
        let target = PI * PI / 6.0 / ZETA3;
        assert!((target - 1.36843).abs() < 1e-5);
        assert!(d.sum_weighted <= target && target <= d.sum_weighted + d.weighted_tail_bound);

        let d = diagnose(&HofbauerPotential::inverse_square(), 100, 1e-8).unwrap();
        assert_eq!(d.classification, Classification::Unique);
        assert!(d.sum_exp_s > 1.0 + 1e-8);

        let explicit = HofbauerPotential::new(HofbauerFamily::Explicit {
            name: "cubes".into(),
            a: Arc::new(|k| -1.0 / ((k + 1) as f64).powi(3)),
        })
        .unwrap();
        assert_eq!(diagnose(&explicit, 10, 1e-8).unwrap_err(), Error::UndeterminedTail);
    }

    #[test]
    fn partial_sums_increase_with_depth() {
        let c = HofbauerPotential::cubic();
        let mut prev = (0.0, 0.0);
        for k in [1, 2, 4, 8, 16] {
            let d = diagnose(&c, k, 1.0).unwrap();
            assert!(d.sum_exp_s >= prev.0 && d.sum_weighted >= prev.1);
            prev = (d.sum_exp_s, d.sum_weighted);
        }
    }

    #[test]
    fn power_log_classification_around_gamma_two() {
        let quad = HofbauerPotential::new(HofbauerFamily::PowerLog { gamma: 2.0 }).unwrap();
        let d = diagnose(&quad, 1 << 20, 1e-3).unwrap();
        // Σe^{s_k} = 1 but Σ(k+1)e^{s_k} = ∞
        assert_eq!(d.classification, Classification::Unique);
        assert!(d.weighted_tail_bound.is_infinite());
    }

    #[test]
    fn explicit_family_validation() {
        let bad = HofbauerFamily::Explicit { name: "pos".into(), a: Arc::new(|k| if k == 7 { 0.1 } else { -1.0 }) };
        assert!(HofbauerPotential::new(bad).is_err());
        let growing = HofbauerFamily::Explicit { name: "up".into(), a: Arc::new(|k| -(k as f64 + 1.0)) };
        assert!(HofbauerPotential::new(growing).is_err());
    }

    #[test]
    fn renewal_examples() {
        let c = HofbauerPotential::cubic();
        for beta in [1.0, 1.2, 1.5] {
            assert_eq!(pressure_renewal(&c, beta, 1e-12).unwrap().pressure, 0.0);
        }
        let p = pressure_renewal(&c, 0.8, 1e-12).unwrap();
        assert!((p.pressure - 0.108387).abs() < 1e-6, "{}", p.pressure);
        let p0 = pressure_renewal(&c, 0.0, 1e-12).unwrap();
        assert!((p0.pressure - 2f64.ln()).abs() < 1e-15);
        assert_eq!(pressure_renewal(&c, -0.5, 1e-12).unwrap_err(), Error::OutOfRange(-0.5));
    }

    #[test]
    fn renewal_root_satisfies_the_equation() {
        // independent evaluation of Σ exp(βs_k − (k+1)P) with a generous truncation
        let c = HofbauerPotential::cubic();
        for beta in [0.4, 0.7, 0.95] {
            let p = pressure_renewal(&c, beta, 1e-13).unwrap().pressure;
            let series: f64 = (0..200_000).rev().map(|k| (beta * c.s(k) - (k + 1) as f64 * p).exp()).sum();
            assert!((series - 1.0).abs() < 1e-9, "beta {beta}: {series}");
        }
        let inv = HofbauerPotential::inverse_square();
        for beta in [0.5, 1.0, 2.0] {
            let p = pressure_renewal(&inv, beta, 1e-12).unwrap().pressure;
            assert!(p > 0.0);
            let series: f64 = {
                let mut s = 0.0;
                let mut acc = 0.0;
                for k in 0..20_000 {
                    s += inv.a(k);
                    acc += (beta * s - (k + 1) as f64 * p).exp();
                }
                acc
            };
            assert!((series - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn curve_is_monotone_convex_and_flat_after_one() {
        let c = HofbauerPotential::cubic();
        let grid: Vec<f64> = (0..=20).map(|i| 0.5 + 0.05 * i as f64).collect();
        let curve = pressure_curve(&c, &grid, 1e-12).unwrap();
        for w in curve.windows(2) {
            assert!(w[1].pressure <= w[0].pressure);
        }
        for w in curve.windows(3) {
            assert!(w[0].pressure - 2.0 * w[1].pressure + w[2].pressure >= -1e-11);
        }
        assert!(curve.iter().all(|p| p.pressure >= 0.0));
        assert!(curve.iter().filter(|p| p.beta >= 1.0 - 1e-12).all(|p| p.pressure == 0.0));
    }

    #[test]
    fn kink_at_one() {
        let c = HofbauerPotential::cubic();
        let slope = left_slope_estimate(&c, 1 << 20);
        assert!((slope - 0.496).abs() < 1e-3, "{slope}");
        let q = kink_quotients(&c, 1.0, 1e-3, 1e-13).unwrap();
        assert!(q.left >= 0.1);
        assert_eq!(q.right, 0.0);
        let mut last = f64::INFINITY;
        for h in [1e-2, 1e-3, 1e-4] {
            let q = kink_quotients(&c, 1.0, h, 1e-13).unwrap();
            assert!(q.left > 0.4 && q.left < last + 1e-12);
            last = q.left;
        }
        assert!((last - slope).abs() < 2e-3);
    }

    #[test]
    fn birkhoff_sums_match_direct_evaluation() {
        let c = HofbauerPotential::cubic();
        let full = Sft::full_shift(2);
        for n in 1..=9 {
            for w in full.cylinders(n) {
                let w = w.symbols();
                let sup = birkhoff_direct(&c, w, &[1; 40]);
                let inf = birkhoff_direct(&c, w, &[0]);
                assert!((c.birkhoff_sup(w) - sup).abs() < 1e-12);
                assert!((c.birkhoff_inf(w) - inf).abs() < 1e-12);
                // every other continuation lies between
                for tail in [vec![1, 0], vec![1, 1, 1, 0], vec![1, 1, 1, 1, 1, 1, 1, 0]] {
                    let v = birkhoff_direct(&c, w, &tail);
                    assert!(v <= sup + 1e-12 && v >= inf - 1e-12);
                }
                assert!(c.birkhoff_sup(w) - c.birkhoff_inf(w) <= c.slack_bound(n) + 1e-12);
            }
        }
    }

    #[test]
    fn declared_variation_bounds_the_oscillation() {
        let c = HofbauerPotential::cubic();
        assert!((c.var_k(5) - c.a(4).abs()).abs() < 1e-15);
        for k in 1..30 {
            // on [1ᵏ] the value ranges over {a_j : j ≥ k} ∪ {0}
            let osc = (k..2000).map(|j| c.a(j).abs()).fold(0.0, f64::max);
            assert!(c.var_k(k) >= osc);
        }
    }

    #[test]
    fn variational_oracle_brackets_the_renewal_value() {
        let c = HofbauerPotential::cubic();
        let full = Sft::full_shift(2);
        let renewal = pressure_renewal(&c, 0.8, 1e-12).unwrap().pressure;
        let scaled = Scaled::new(&c, 0.8);
        let pn: Vec<f64> =
            [6, 9, 12].iter().map(|&n| pressure_pn(&full, &scaled, n, DEFAULT_BUDGET).unwrap().per_symbol).collect();
        assert!(pn.windows(2).all(|w| w[1] < w[0]));
        assert!(pn.iter().all(|&p| p > renewal));
    }

    #[test]
    fn scan_csv_layout() {
        let c = HofbauerPotential::cubic();
        let curve = pressure_curve(&c, &[0.9, 1.0, 1.1], 1e-12).unwrap();
        let mut buf = Vec::new();
        write_scan_csv(&curve, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "beta,pressure,left_quotient,right_quotient");
        assert_eq!(lines[1].split(',').nth(2), Some(""));
        assert!(lines[3].ends_with(','));
    }
}
