//! Invariant measures in stationary Markov form: entropy, expectations,
//! relative entropy by closed form and by cylinder sums, sampling, the
//! Shannon–McMillan–Breiman estimate, AEP partitions, periodic-orbit
//! approximation and entropy production.

use std::io::Write;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::potentials::LocallyConstantPotential;
use crate::sft::{Sft, Word};
use crate::transfer::GibbsMeasure;

/// Tolerance for user-supplied stochastic matrices and probability vectors.
pub const STOCHASTIC_TOL: f64 = 1e-9;

/// `x log x` with `0 log 0 = 0`.
fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Stationary Markov measure `(π, P)` on a subshift.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMeasure {
    sft: Sft,
    pi: Vec<f64>,
    p: Matrix,
}

impl MarkovMeasure {
    /// Validates rows, stationarity and compatibility with `sft`.
    pub fn new(sft: Sft, pi: Vec<f64>, p: Matrix) -> Result<Self> {
        let m = sft.size();
        if pi.len() != m || p.dim() != m {
            return Err(Error::Invalid(format!("expected {m} states")));
        }
        for a in 0..m {
            let row = p.row(a);
            if row.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::Invalid(format!("row {a} has a negative or non-finite entry")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::Invalid(format!("row {a} sums to {s}, not 1")));
            }
            for b in 0..m {
                if row[b] > 0.0 && !sft.allows(a, b) {
                    return Err(Error::Invalid(format!("transition {a}->{b} is forbidden by the shift")));
                }
            }
        }
        if pi.iter().any(|&x| !(x >= 0.0)) || (pi.iter().sum::<f64>() - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::Invalid("stationary vector is not a probability vector".into()));
        }
        let pi_p = p.vec_mul(&pi);
        if pi_p.iter().zip(&pi).any(|(x, y)| (x - y).abs() > STOCHASTIC_TOL) {
            return Err(Error::Invalid("vector is not stationary for the chain".into()));
        }
        Ok(MarkovMeasure { sft, pi, p })
    }

    pub(crate) fn from_parts(sft: Sft, pi: Vec<f64>, p: Matrix) -> Self {
        MarkovMeasure { sft, pi, p }
    }

    /// Chain started from its stationary vector. `q` must be irreducible.
    pub fn from_chain(sft: Sft, q: Matrix) -> Result<Self> {
        let m = q.dim();
        if m != sft.size() {
            return Err(Error::Invalid(format!("expected {m} states")));
        }
        // Left Perron vector of q+I equals π of q, and q+I is aperiodic.
        let lazy = Matrix::from_fn(m, |a, b| q[(a, b)] + if a == b { 1.0 } else { 0.0 });
        let perron = linalg::perron(&lazy, 1e-15, 10_000_000)?;
        let s: f64 = perron.left.iter().sum();
        let pi = perron.left.iter().map(|x| x / s).collect();
        MarkovMeasure::new(sft, pi, q)
    }

    /// Product measure with the given symbol weights on the full shift.
    pub fn bernoulli(weights: &[f64]) -> Result<Self> {
        let m = weights.len();
        let sft = Sft::full_shift(m);
        let p = Matrix::from_fn(m, |_, b| weights[b]);
        MarkovMeasure::new(sft, weights.to_vec(), p)
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn stationary(&self) -> &[f64] {
        &self.pi
    }

    pub fn transition(&self) -> &Matrix {
        &self.p
    }

    /// `ν[w] = π_{w₀} Π P_{wᵢ wᵢ₊₁}`; zero for words outside the alphabet.
    pub fn cylinder(&self, word: &[usize]) -> f64 {
        let m = self.sft.size();
        match word.first() {
            None => 1.0,
            Some(&a) if a >= m => 0.0,
            Some(&a) => word.windows(2).fold(self.pi[a], |acc, w| {
                if w[1] >= m {
                    0.0
                } else {
                    acc * self.p[(w[0], w[1])]
                }
            }),
        }
    }

    /// Cylinder probabilities at depth `n`.
    pub fn cylinder_table(&self, n: usize, budget: u64) -> Result<CylinderTable> {
        self.sft.check_budget(n, budget)?;
        let entries = self.sft.cylinders(n).map(|w| {
            let p = self.cylinder(w.symbols());
            (w, p)
        });
        Ok(CylinderTable { depth: n, entries: entries.collect() })
    }

    /// Entropy rate `−Σ_a π_a Σ_b P_ab log P_ab` in nats.
    pub fn entropy(&self) -> f64 {
        let m = self.sft.size();
        -(0..m).map(|a| self.pi[a] * self.p.row(a).iter().map(|&x| xlogx(x)).sum::<f64>()).sum::<f64>()
    }

    /// `H_n = −Σ_{|w|=n} ν[w] log ν[w]`.
    pub fn block_entropy(&self, n: usize, budget: u64) -> Result<f64> {
        self.sft.check_budget(n, budget)?;
        let mut h = 0.0;
        self.sft.for_each_word(n, |w| h -= xlogx(self.cylinder(w)));
        Ok(h)
    }

    /// `H_n/n` and `H_{n+1} − H_n` for `n = 1..=n_max`.
    pub fn entropy_by_blocks(&self, n_max: usize, budget: u64) -> Result<BlockEntropies> {
        self.sft.check_budget(n_max + 1, budget)?;
        let h: Vec<f64> =
            (1..=n_max + 1).map(|n| self.block_entropy(n, budget)).collect::<Result<_>>()?;
        Ok(BlockEntropies {
            per_symbol: (0..n_max).map(|i| h[i] / (i + 1) as f64).collect(),
            increments: h.windows(2).map(|w| w[1] - w[0]).collect(),
        })
    }

    /// `⟨φ, ν⟩ = Σ_w ν[w] φ(w)` over admissible `r`-words of `φ`.
    pub fn expectation(&self, potential: &LocallyConstantPotential) -> Result<f64> {
        if potential.sft().size() != self.sft.size() {
            return Err(Error::Invalid("potential and measure have different alphabets".into()));
        }
        let r = potential.range();
        self.sft.check_budget(r, crate::sft::DEFAULT_BUDGET)?;
        let mut sum = 0.0;
        let mut outside = false;
        self.sft.for_each_word(r, |w| {
            let mass = self.cylinder(w);
            if mass > 0.0 {
                match potential.value(w) {
                    Some(v) => sum += mass * v,
                    None => outside = true,
                }
            }
        });
        if outside {
            Err(Error::SupportMismatch)
        } else {
            Ok(sum)
        }
    }

    /// Time reversal `Q_ab = π_b P_ba / π_a`, on the transposed shift.
    pub fn time_reversal(&self) -> Result<Self> {
        let m = self.sft.size();
        if self.pi.iter().any(|&x| x <= 0.0) {
            return Err(Error::Invalid("reversal needs a fully supported stationary vector".into()));
        }
        let sft = Sft::from_fn(self.sft.alphabet().clone(), |a, b| self.sft.allows(b, a))?;
        let q = Matrix::from_fn(m, |a, b| self.pi[b] * self.p[(b, a)] / self.pi[a]);
        Ok(MarkovMeasure { sft, pi: self.pi.clone(), p: q })
    }

    /// Path of `length` symbols: first from `π`, then from the rows of `P`.
    ///
    /// Uses ChaCha8 seeded from `seed`; each draw is `u = (x >> 11)·2⁻⁵³` and
    /// picks the first symbol whose cumulative weight exceeds `u`.
    pub fn sample_path(&self, length: usize, seed: u64) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |weights: &[f64]| -> usize {
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            let mut acc = 0.0;
            let mut last = 0;
            for (i, &w) in weights.iter().enumerate() {
                if w > 0.0 {
                    last = i;
                    acc += w;
                    if u < acc {
                        return i;
                    }
                }
            }
            last
        };
        let mut path = Vec::with_capacity(length);
        if length == 0 {
            return path;
        }
        path.push(draw(&self.pi));
        for _ in 1..length {
            let a = *path.last().expect("nonempty");
            path.push(draw(self.p.row(a)));
        }
        path
    }

    /// `−(1/n) log ν[x₀…x_{n−1}]`.
    pub fn smb_estimate(&self, path: &[usize]) -> Result<f64> {
        let m = self.sft.size();
        let first = *path.first().ok_or_else(|| Error::Invalid("empty path".into()))?;
        if first >= m || self.pi[first] <= 0.0 {
            return Err(Error::ZeroMassPath(0));
        }
        // transition counts, so each distinct log is rounded once
        let mut counts = vec![0u64; m * m];
        for (i, w) in path.windows(2).enumerate() {
            if w[1] >= m || self.p[(w[0], w[1])] <= 0.0 {
                return Err(Error::ZeroMassPath(i + 1));
            }
            counts[w[0] * m + w[1]] += 1;
        }
        let mut log_mass = self.pi[first].ln();
        for (k, &c) in counts.iter().enumerate() {
            if c > 0 {
                log_mass += c as f64 * self.p[(k / m, k % m)].ln();
            }
        }
        Ok(-log_mass / path.len() as f64)
    }

    /// Splits the `n`-words into those with `e^{−n(h+α)} ≤ ν[w] ≤ e^{−n(h−α)}` and the rest.
    pub fn aep_partition(&self, n: usize, alpha: f64, budget: u64) -> Result<AepPartition> {
        if n == 0 || !(alpha > 0.0) {
            return Err(Error::Invalid("need n >= 1 and alpha > 0".into()));
        }
        self.sft.check_budget(n, budget)?;
        let h = self.entropy();
        let nf = n as f64;
        // the comparison is done on −(1/n) log ν[w] with a rounding allowance
        let slack = 1e-12;
        let mut typical = Vec::new();
        let mut typical_mass = 0.0;
        self.sft.for_each_word(n, |w| {
            let mass = self.cylinder(w);
            if mass > 0.0 && (-mass.ln() / nf - h).abs() <= alpha + slack {
                typical.push(Word(w.to_vec()));
                typical_mass += mass;
            }
        });
        Ok(AepPartition { n, alpha, entropy: h, typical, typical_mass, exceptional_mass: 1.0 - typical_mass })
    }
}

/// Cylinder probabilities at a fixed depth, in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderTable {
    pub depth: usize,
    pub entries: Vec<(Word, f64)>,
}

impl CylinderTable {
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    /// CSV with header `word,probability`; words spelled with the alphabet
    /// labels, probabilities with 17 significant digits.
    pub fn write_csv<W: Write>(&self, sft: &Sft, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["word", "probability"]).map_err(io)?;
        for (word, p) in &self.entries {
            w.write_record([sft.alphabet().spell(word.symbols()), format!("{p:.16e}")]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
        Ok(())
    }
}

/// Block entropy sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockEntropies {
    /// `H_n / n`, starting at `n = 1`.
    pub per_symbol: Vec<f64>,
    /// `H_{n+1} − H_n`, starting at `n = 1`.
    pub increments: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AepPartition {
    pub n: usize,
    pub alpha: f64,
    pub entropy: f64,
    pub typical: Vec<Word>,
    pub typical_mass: f64,
    pub exceptional_mass: f64,
}

fn check_support(nu: &MarkovMeasure, mu: &GibbsMeasure) -> Result<()> {
    let sft = mu.sft();
    let m = sft.size();
    if nu.sft().size() != m {
        return Err(Error::Invalid("measures have different alphabets".into()));
    }
    for a in 0..m {
        if nu.stationary()[a] <= 0.0 {
            continue;
        }
        for b in 0..m {
            if nu.transition()[(a, b)] > 0.0 && !sft.allows(a, b) {
                return Err(Error::SupportMismatch);
            }
        }
    }
    Ok(())
}

/// `h(ν|μ_φ) = P(φ) − ⟨φ, ν⟩ − h(ν)`.
pub fn relative_entropy(nu: &MarkovMeasure, mu: &GibbsMeasure) -> Result<f64> {
    check_support(nu, mu)?;
    let phi = nu.expectation(mu.potential())?;
    Ok(mu.pressure() - phi - nu.entropy())
}

/// `H_n(ν|μ)/n` with `0 log(0/0) = 0`.
pub fn relative_entropy_direct(nu: &MarkovMeasure, mu: &GibbsMeasure, n: usize, budget: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("depth must be at least 1".into()));
    }
    if nu.sft().size() != mu.sft().size() {
        return Err(Error::Invalid("measures have different alphabets".into()));
    }
    nu.sft().check_budget(n, budget)?;
    let mut sum = 0.0;
    let mut mismatch = false;
    nu.sft().for_each_word(n, |w| {
        let p = nu.cylinder(w);
        if p > 0.0 {
            let q = mu.cylinder(w);
            if q > 0.0 {
                sum += p * (p / q).ln();
            } else {
                mismatch = true;
            }
        }
    });
    if mismatch {
        return Err(Error::SupportMismatch);
    }
    Ok(sum / n as f64)
}

/// Ratio of period-`n` points in the cylinder `[word]` to all period-`n` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicApproximation {
    pub in_cylinder: u128,
    pub total: u128,
    pub ratio: f64,
    /// `μ₀[word]` for comparison.
    pub measure: f64,
}

/// Counts fixed points of `σⁿ` in `[word]` as `(M^{n−|w|+1})_{w_last, w_0}`.
pub fn periodic_approximation(mu0: &GibbsMeasure, n: usize, word: &[usize]) -> Result<PeriodicApproximation> {
    let sft = mu0.sft();
    if word.is_empty() || n < word.len() {
        return Err(Error::Invalid("need a nonempty word no longer than the period".into()));
    }
    let as_period = |e: Error| match e {
        Error::Overflow(_) => Error::PeriodTooLarge(n),
        other => other,
    };
    let total = sft.periodic_count(n).map_err(as_period)?;
    let in_cylinder = if sft.is_admissible(word) {
        count_closed_paths(sft, *word.last().expect("nonempty"), word[0], n - word.len() + 1)
            .map_err(as_period)?
    } else {
        0
    };
    Ok(PeriodicApproximation {
        in_cylinder,
        total,
        ratio: in_cylinder as f64 / total as f64,
        measure: mu0.cylinder(word),
    })
}

/// Number of admissible paths of `steps` transitions from `from` to `to`.
fn count_closed_paths(sft: &Sft, from: usize, to: usize, steps: usize) -> Result<u128> {
    let m = sft.size();
    let mut counts = vec![0u128; m];
    counts[from] = 1;
    for _ in 0..steps {
        let mut next = vec![0u128; m];
        for a in 0..m {
            if counts[a] == 0 {
                continue;
            }
            for (b, slot) in next.iter_mut().enumerate() {
                if sft.allows(a, b) {
                    *slot = slot.checked_add(counts[a]).ok_or(Error::Overflow("path count"))?;
                }
            }
        }
        counts = next;
    }
    Ok(counts[to])
}

/// `h(μ⁺|μ⁻)` between two Gibbs states of the same shift.
pub fn entropy_production(mu_plus: &GibbsMeasure, mu_minus: &GibbsMeasure) -> Result<f64> {
    if mu_plus.sft() != mu_minus.sft() {
        return Err(Error::SupportMismatch);
    }
    relative_entropy(mu_plus.markov(), mu_minus)
}
