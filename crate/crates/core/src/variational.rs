//! Equilibrium distributions of finite systems and finite periodic lattices,
//! the cylinder-maximization pressure `P_n`, and constraint solvers that
//! pick the multiplier `β` from a prescribed mean.

use std::io::Write;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::potentials::{LocallyConstantPotential, Observable};
use crate::roots;
use crate::sft::{Alphabet, Sft};
use crate::transfer::{self, GibbsMeasure};

/// Running `log Σ exp(xᵢ)`.
#[derive(Debug, Clone, Copy)]
struct LogSumExp {
    max: f64,
    sum: f64,
}

impl LogSumExp {
    fn new() -> Self {
        LogSumExp { max: f64::NEG_INFINITY, sum: 0.0 }
    }

    fn push(&mut self, x: f64) {
        if x > self.max {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.sum += (x - self.max).exp();
        }
    }

    fn value(&self) -> f64 {
        self.max + self.sum.ln()
    }
}

/// A real observable `U` on a finite state set.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSystem {
    u: Vec<f64>,
}

/// `μ_β(x) = exp(βU(x) − p)` together with its first two moments.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteEquilibrium {
    pub beta: f64,
    pub distribution: Vec<f64>,
    /// `p(βU) = log Σ_x e^{βU(x)}`.
    pub pressure: f64,
    pub mean: f64,
    pub variance: f64,
}

impl FiniteSystem {
    pub fn new(u: Vec<f64>) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::Invalid("state set is empty".into()));
        }
        if u.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("observable has a non-finite value".into()));
        }
        Ok(FiniteSystem { u })
    }

    pub fn observable(&self) -> &[f64] {
        &self.u
    }
}

pub fn finite_equilibrium(sys: &FiniteSystem, beta: f64) -> FiniteEquilibrium {
    let mut lse = LogSumExp::new();
    sys.u.iter().for_each(|&x| lse.push(beta * x));
    let pressure = lse.value();
    let distribution: Vec<f64> = sys.u.iter().map(|&x| (beta * x - pressure).exp()).collect();
    let mean: f64 = distribution.iter().zip(&sys.u).map(|(p, x)| p * x).sum();
    let variance = distribution.iter().zip(&sys.u).map(|(p, x)| p * (x - mean).powi(2)).sum();
    FiniteEquilibrium { beta, distribution, pressure, mean, variance }
}

/// The unique `β` with `⟨U, μ_β⟩ = target`.
pub fn solve_beta(sys: &FiniteSystem, target: f64) -> Result<f64> {
    let lo_u = sys.u.iter().copied().fold(f64::INFINITY, f64::min);
    let hi_u = sys.u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo_u == hi_u {
        return Err(Error::DegenerateObservable);
    }
    if !(target > lo_u && target < hi_u) {
        return Err(Error::TargetOutOfRange { target, lo: lo_u, hi: hi_u });
    }
    let gap = |beta: f64| finite_equilibrium(sys, beta).mean - target;
    let (lo, hi) = expand_bracket(gap)?;
    roots::newton_bracketed(
        |beta| {
            let eq = finite_equilibrium(sys, beta);
            (eq.mean - target, eq.variance)
        },
        lo,
        hi,
        1e-13 * (hi_u - lo_u),
    )
}

/// `[lo, hi]` around 0 with `g(lo) ≤ 0 ≤ g(hi)` for increasing `g`.
fn expand_bracket(mut g: impl FnMut(f64) -> f64) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (-1.0, 1.0);
    for _ in 0..64 {
        let (glo, ghi) = (g(lo), g(hi));
        if glo <= 0.0 && ghi >= 0.0 {
            return Ok((lo, hi));
        }
        if glo > 0.0 {
            lo *= 2.0;
        }
        if ghi < 0.0 {
            hi *= 2.0;
        }
    }
    Err(Error::Invalid("could not bracket the multiplier".into()))
}

/// How a lattice partition function was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeMethod {
    Enumeration,
    Trace,
}

/// Gibbs distribution `μ(a₀…a_{n−1}) = exp(βΣᵢφ(aᵢ…a_{i+r−1}) − nP)` on `Aⁿ`
/// with indices mod `n`.
#[derive(Debug, Clone)]
pub struct LatticeEquilibrium {
    pub n: usize,
    pub beta: f64,
    pub pressure: f64,
    pub method: LatticeMethod,
    potential: LocallyConstantPotential,
}

impl LatticeEquilibrium {
    /// `β Σᵢ φ` around the ring; `None` if some window is inadmissible.
    pub fn ring_energy(&self, config: &[usize]) -> Option<f64> {
        ring_sum(&self.potential, config).map(|s| self.beta * s)
    }

    pub fn probability(&self, config: &[usize]) -> f64 {
        if config.len() != self.n {
            return 0.0;
        }
        match self.ring_energy(config) {
            Some(e) => (e - self.n as f64 * self.pressure).exp(),
            None => 0.0,
        }
    }

    pub fn potential(&self) -> &LocallyConstantPotential {
        &self.potential
    }
}

fn ring_sum(phi: &LocallyConstantPotential, config: &[usize]) -> Option<f64> {
    let n = config.len();
    let sft = phi.sft();
    if (0..n).any(|i| config[i] >= sft.size() || !sft.allows(config[i], config[(i + 1) % n])) {
        return None;
    }
    let r = phi.range();
    let mut window = vec![0; r];
    let mut total = 0.0;
    for i in 0..n {
        for (j, slot) in window.iter_mut().enumerate() {
            *slot = config[(i + j) % n];
        }
        total += phi.value(&window)?;
    }
    Some(total)
}

/// Largest lattice evaluated by enumeration in [`lattice_equilibrium`].
pub const ENUMERATION_LIMIT: usize = 16;

/// Ring Gibbs distribution, by enumeration up to [`ENUMERATION_LIMIT`] sites
/// and by transfer-matrix trace beyond.
pub fn lattice_equilibrium(
    n: usize,
    phi: &LocallyConstantPotential,
    beta: f64,
    budget: u64,
) -> Result<LatticeEquilibrium> {
    if n <= ENUMERATION_LIMIT {
        lattice_enumerated(n, phi, beta, budget)
    } else {
        lattice_trace(n, phi, beta)
    }
}

fn check_lattice(n: usize, phi: &LocallyConstantPotential) -> Result<()> {
    if n == 0 || phi.range() > n {
        return Err(Error::Invalid(format!("lattice of {n} sites cannot carry range {}", phi.range())));
    }
    Ok(())
}

/// `P = n⁻¹ log Σ_{Aⁿ} exp(βΣφ)` by summing over every configuration.
pub fn lattice_enumerated(
    n: usize,
    phi: &LocallyConstantPotential,
    beta: f64,
    budget: u64,
) -> Result<LatticeEquilibrium> {
    check_lattice(n, phi)?;
    let m = phi.sft().size();
    let count = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > u128::from(budget) {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let mut config = vec![0usize; n];
    let mut lse = LogSumExp::new();
    loop {
        if let Some(s) = ring_sum(phi, &config) {
            lse.push(beta * s);
        }
        // odometer increment, last site fastest
        let mut i = n;
        loop {
            if i == 0 {
                return finish_lattice(n, phi, beta, lse.value(), LatticeMethod::Enumeration);
            }
            i -= 1;
            config[i] += 1;
            if config[i] < m {
                break;
            }
            config[i] = 0;
        }
    }
}

/// `P = n⁻¹ log trace(Aⁿ)` for the block transfer matrix of `βφ`.
pub fn lattice_trace(n: usize, phi: &LocallyConstantPotential, beta: f64) -> Result<LatticeEquilibrium> {
    check_lattice(n, phi)?;
    let rec = phi.recode_range2();
    let (sft, pot) = (&rec.sft, &rec.potential);
    let a = Matrix::from_fn(sft.size(), |i, j| {
        if !sft.allows(i, j) {
            return 0.0;
        }
        let v = match pot.range() {
            1 => pot.value(&[i]),
            _ => pot.value(&[i, j]),
        };
        (beta * v.expect("admissible")).exp()
    });
    let log_z = a.log_trace_pow(n as u64);
    finish_lattice(n, phi, beta, log_z, LatticeMethod::Trace)
}

fn finish_lattice(
    n: usize,
    phi: &LocallyConstantPotential,
    beta: f64,
    log_z: f64,
    method: LatticeMethod,
) -> Result<LatticeEquilibrium> {
    if !log_z.is_finite() {
        return Err(Error::Invalid(format!("no admissible periodic configuration of {n} sites")));
    }
    Ok(LatticeEquilibrium { n, beta, pressure: log_z / n as f64, method, potential: phi.clone() })
}

/// `P_n(φ) = log Σ_{|w|=n} exp(sup_{[w]} S_nφ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PnEstimate {
    pub n: usize,
    pub log_sum: f64,
    /// `P_n / n`.
    pub per_symbol: f64,
    pub cylinders: u128,
}

/// One maximizing value per admissible `n`-cylinder.
pub fn pressure_pn<O: Observable + ?Sized>(sft: &Sft, obs: &O, n: usize, budget: u64) -> Result<PnEstimate> {
    if n == 0 {
        return Err(Error::Invalid("depth must be at least 1".into()));
    }
    let cylinders = sft.check_budget(n, budget)?;
    let mut lse = LogSumExp::new();
    sft.for_each_word(n, |w| lse.push(obs.birkhoff_sup(w)));
    let log_sum = lse.value();
    Ok(PnEstimate { n, log_sum, per_symbol: log_sum / n as f64, cylinders })
}

/// `β` with `⟨φ, μ_{βφ}⟩ = 2p − 1` for the Ising coupling, and the
/// adjacency probability recomputed from the resulting Gibbs chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingMatch {
    pub beta: f64,
    pub round_trip: f64,
}

fn ising_coupling_mean(phi: &LocallyConstantPotential, beta: f64) -> Result<f64> {
    let mu = transfer::gibbs_measure(&phi.scaled(beta))?;
    mu.markov().expectation(phi)
}

/// Solves for the inverse temperature at which two adjacent spins agree with probability `p`.
pub fn ising_match(p: f64) -> Result<IsingMatch> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::OutOfRange(p));
    }
    let (_, phi) = LocallyConstantPotential::ising();
    let target = 2.0 * p - 1.0;
    let beta = if target == 0.0 {
        0.0
    } else {
        let mut failure = None;
        let mut gap = |beta: f64| match ising_coupling_mean(&phi, beta) {
            Ok(e) => e - target,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        };
        let (lo, hi) = expand_bracket(&mut gap)?;
        let beta = roots::bisect(&mut gap, lo, hi, 1e-14)?;
        if let Some(e) = failure {
            return Err(e);
        }
        beta
    };
    let round_trip = (ising_coupling_mean(&phi, beta)? + 1.0) / 2.0;
    Ok(IsingMatch { beta, round_trip })
}

/// Gibbs measure of `φ(a, b) = log q_ab` on the support of `q`.
pub fn markov_as_gibbs(q: &Matrix) -> Result<GibbsMeasure> {
    markov_as_gibbs_on(Alphabet::numeric(q.dim())?, q)
}

pub fn markov_as_gibbs_on(alphabet: Alphabet, q: &Matrix) -> Result<GibbsMeasure> {
    let m = q.dim();
    if alphabet.len() != m {
        return Err(Error::Invalid(format!("expected {m} labels")));
    }
    for a in 0..m {
        let row = q.row(a);
        if row.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::Invalid(format!("row {a} has a negative or non-finite entry")));
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > crate::measures::STOCHASTIC_TOL {
            return Err(Error::Invalid(format!("row {a} sums to {s}, not 1")));
        }
    }
    let sft = Sft::from_fn(alphabet, |a, b| q[(a, b)] > 0.0)?;
    let phi = LocallyConstantPotential::from_fn(&sft, 2, |w| q[(w[0], w[1])].ln())?;
    transfer::gibbs_measure(&phi)
}

/// Spectral pressure `β ↦ P(βφ)` on a grid.
pub fn pressure_curve(phi: &LocallyConstantPotential, betas: &[f64]) -> Result<Vec<(f64, f64)>> {
    betas.iter().map(|&b| Ok((b, transfer::pressure(&phi.scaled(b))?))).collect()
}

/// CSV `beta,pressure`.
pub fn write_pressure_curve_csv<W: Write>(points: &[(f64, f64)], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["beta", "pressure"]).map_err(io)?;
    for (b, p) in points {
        w.write_record([format!("{b}"), format!("{p:.16e}")]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Invalid(format!("csv: {e}")))
}
