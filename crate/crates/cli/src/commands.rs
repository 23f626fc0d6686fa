//! Argument parsing and dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gibbs_core::hofbauer::{self, Classification, HofbauerPotential};
use gibbs_core::interval_maps::{self, PiecewiseLinearMarkovMap};
use gibbs_core::measures::{self, MarkovMeasure};
use gibbs_core::potentials::{Observable, Recoding, Scaled};
use gibbs_core::transfer::{self, GibbsMeasure};
use gibbs_core::variational::{self, LatticeMethod};
use gibbs_core::{LocallyConstantPotential, Sft, DEFAULT_BUDGET};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::model::{self, Loaded, Model};
use crate::report::{digest, Method, Report, NATS};

/// Tolerances of `--check` cross-validations, per command.
pub mod check_tol {
    pub const ENTROPY_TRACE_SCALE: f64 = 1.0;
    pub const BLOCK_ENTROPY: f64 = 1e-9;
    pub const PRESSURE_VARIATIONAL: f64 = 0.1;
    pub const VARIATIONAL_IDENTITY: f64 = 1e-9;
    pub const RELATIVE_ENTROPY: f64 = 0.06;
    pub const PERIODIC_RELATIVE: f64 = 1e-3;
    pub const PRODUCTION: f64 = 0.05;
    pub const LATTICE_PATHS: f64 = 1e-10;
    pub const ISING_CLOSED_FORM: f64 = 1e-10;
    pub const ISING_VARIATIONAL: f64 = 5e-2;
    pub const ISING_RING: f64 = 1e-2;
    pub const DIMENSION_SQUARE: f64 = 1e-10;
    pub const LINEAR_DISTORTION: f64 = 1e-9;
    pub const PN_REFERENCE: f64 = 5e-2;
}

#[derive(Debug, Parser)]
#[command(name = "gibbs", version, about = "Pressure, Gibbs states, entropy and dimension from model files")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Solver tolerance (command-specific default).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Word length for enumerations (command-specific default).
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Largest number of cylinders any enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Cross-validate with a second method where one exists.
    #[arg(long, global = true)]
    pub check: bool,
    /// CSV artifact path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report entropies and pressures in bits.
    #[arg(long, global = true)]
    pub bits: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Topological entropy of a shift, or entropy rate of a chain.
    Entropy { model: PathBuf },
    /// Pressure of β·φ; `--out` writes a curve over `--from..--to`.
    Pressure {
        sft: PathBuf,
        potential: PathBuf,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
    /// Gibbs state of β·φ and its cylinder masses.
    Gibbs {
        sft: PathBuf,
        potential: PathBuf,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        beta: f64,
    },
    /// Enumerated Gibbs constants against the analytic envelope.
    Bounds {
        sft: PathBuf,
        potential: PathBuf,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        beta: f64,
    },
    /// Relative entropy of a chain with respect to the Gibbs state of β·φ.
    Relent {
        chain: PathBuf,
        sft: PathBuf,
        potential: PathBuf,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        beta: f64,
    },
    /// Seeded sample path with its Shannon–McMillan–Breiman estimate.
    Sample {
        #[arg(num_args = 1..=2, required = true)]
        models: Vec<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        length: usize,
    },
    /// Typical-set partition of the depth-n cylinders.
    Aep {
        #[arg(num_args = 1..=2, required = true)]
        models: Vec<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
    },
    /// Period-n point count; with `--word`, the orbit-counting cylinder estimate.
    Periodic {
        sft: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: Option<String>,
    },
    /// Entropy production of a chain against its time reversal.
    Production { chain: PathBuf },
    /// Equilibrium of β·φ on a ring of n sites.
    Lattice {
        sft: PathBuf,
        potential: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        beta: f64,
    },
    /// Ising chain: closed form, spectral, variational and ring pressures.
    Ising {
        #[arg(long, conflicts_with = "beta", allow_hyphen_values = true)]
        p: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        /// Ring size.
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Renewal pressure of a Hofbauer family over a β grid.
    HofbauerScan {
        family: PathBuf,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Hausdorff dimension of the repeller of a Markov map.
    Dimension { map: PathBuf },
    /// Absolutely continuous invariant measure of a Markov map.
    Acim { map: PathBuf },
    /// Cylinder-maximization estimates P_n/n over a range of n.
    PnScan {
        #[arg(num_args = 1..=2, required = true)]
        models: Vec<PathBuf>,
        #[arg(long, default_value_t = 2)]
        from: usize,
        #[arg(long, default_value_t = 12)]
        to: usize,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        beta: f64,
    },
}

/// A finished command: the report and an optional CSV artifact.
pub struct Outcome {
    pub report: Report,
    pub csv: Option<Vec<u8>>,
}

struct Inputs {
    loaded: Vec<Loaded>,
}

impl Inputs {
    fn new() -> Self {
        Inputs { loaded: Vec::new() }
    }

    fn load(&mut self, path: &Path) -> Result<Model, CliError> {
        let l = model::load(path)?;
        let m = l.model.clone();
        self.loaded.push(l);
        Ok(m)
    }

    fn last_path(&self) -> &str {
        &self.loaded.last().expect("loaded").path
    }

    fn sft(&mut self, path: &Path) -> Result<Sft, CliError> {
        match self.load(path)? {
            Model::Sft(s) => Ok(s),
            other => wrong_kind(path, "sft", &other),
        }
    }

    fn potential(&mut self, sft: &Sft, path: &Path) -> Result<LocallyConstantPotential, CliError> {
        match self.load(path)? {
            Model::Potential(p) => p.resolve(self.last_path(), sft),
            other => wrong_kind(path, "potential", &other),
        }
    }

    fn chain(&mut self, path: &Path) -> Result<MarkovMeasure, CliError> {
        match self.load(path)? {
            Model::MarkovChain(c) => Ok(c),
            other => wrong_kind(path, "markov-chain", &other),
        }
    }

    fn map(&mut self, path: &Path) -> Result<PiecewiseLinearMarkovMap, CliError> {
        match self.load(path)? {
            Model::MarkovMap(m) => Ok(m),
            other => wrong_kind(path, "markov-map", &other),
        }
    }

    fn family(&mut self, path: &Path) -> Result<HofbauerPotential, CliError> {
        match self.load(path)? {
            Model::Hofbauer(h) => Ok(h),
            other => wrong_kind(path, "hofbauer-family", &other),
        }
    }

    /// A chain file, the measure of maximal entropy of a shift, or the Gibbs state of a shift and potential.
    fn measure(&mut self, paths: &[PathBuf]) -> Result<(MarkovMeasure, Sft, Option<Recoding>), CliError> {
        match paths {
            [one] => match self.load(one)? {
                Model::MarkovChain(c) => {
                    let sft = c.sft().clone();
                    Ok((c, sft, None))
                }
                Model::Sft(s) => {
                    let mu = transfer::gibbs_measure(&LocallyConstantPotential::zero(&s))?;
                    Ok((mu.markov().clone(), s, None))
                }
                other => wrong_kind(one, "markov-chain or sft", &other),
            },
            [s, p] => {
                let sft = self.sft(s)?;
                let phi = self.potential(&sft, p)?;
                let mu = transfer::gibbs_measure(&phi)?;
                let recoding = Some(mu.recoding().clone()).filter(|r| r.block > 1);
                Ok((mu.markov().clone(), sft, recoding))
            }
            _ => Err(CliError::Usage("expected one or two model files".into())),
        }
    }

    fn digest(&self) -> String {
        digest(self.loaded.iter().map(|l| l.text.as_str()))
    }
}

fn wrong_kind<T>(path: &Path, expected: &str, got: &Model) -> Result<T, CliError> {
    Err(CliError::Usage(format!("{} is a {} model, expected {expected}", path.display(), got.kind().name())))
}

fn grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps == 0 || !(from <= to) {
        return Err(CliError::Usage("grid needs from <= to and at least one step".into()));
    }
    Ok((0..=steps).map(|i| from + (to - from) * i as f64 / steps as f64).collect())
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let fail = |e: csv::Error| CliError::Compute(gibbs_core::Error::Invalid(format!("csv: {e}")));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(&r).map_err(fail)?;
    }
    w.into_inner().map_err(|e| fail(e.into_error().into()))
}

fn core_csv(f: impl FnOnce(&mut Vec<u8>) -> gibbs_core::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn gibbs(inputs: &mut Inputs, sft: &Path, pot: &Path, beta: f64, tol: f64) -> Result<(Sft, LocallyConstantPotential, GibbsMeasure), CliError> {
    let sft = inputs.sft(sft)?;
    let phi = inputs.potential(&sft, pot)?.scaled(beta);
    let mu = transfer::gibbs_measure_with_tol(&phi, tol)?;
    Ok((sft, phi, mu))
}

fn spell(sft: &Sft, w: &[usize]) -> String {
    sft.alphabet().spell(w)
}

/// Runs a parsed invocation; `argv` is echoed into the report.
pub fn run(cli: &Cli, argv: Vec<String>) -> Result<Outcome, CliError> {
    let g = &cli.global;
    let mut inputs = Inputs::new();
    let mut report = Report::new(argv, String::new());
    let mut csv: Option<Vec<u8>> = None;
    let tol = g.tol.unwrap_or(transfer::DEFAULT_TOL);
    let budget = g.budget;

    match &cli.command {
        Command::Entropy { model } => match inputs.load(model)? {
            Model::Sft(sft) => {
                let h = sft.topological_entropy()?;
                report.push("topological_entropy", h, Method::Spectral, NATS);
                report.push("alphabet_size", sft.size(), Method::Enumeration, "count");
                if g.check {
                    let n = g.depth.unwrap_or(24);
                    let count = sft.periodic_count(n)?;
                    let est = (count as f64).ln() / n as f64;
                    report.push("periodic_points", count.to_string(), Method::Enumeration, "count");
                    let scale = check_tol::ENTROPY_TRACE_SCALE * (sft.size() as f64).ln().max(1.0) / n as f64;
                    report.certify("topological_entropy", [Method::Spectral, Method::Enumeration], [h, est], scale, NATS);
                }
            }
            Model::MarkovChain(nu) => {
                let h = nu.entropy();
                report.push("entropy_rate", h, Method::ClosedForm, NATS);
                if g.check {
                    let n = g.depth.unwrap_or(8).max(2);
                    let blocks = nu.entropy_by_blocks(n, budget)?;
                    let inc = *blocks.increments.last().expect("n >= 2");
                    report.certify("entropy_rate", [Method::ClosedForm, Method::Enumeration], [h, inc], check_tol::BLOCK_ENTROPY, NATS);
                }
            }
            other => return wrong_kind(model, "sft or markov-chain", &other),
        },

        Command::Pressure { sft, potential, beta, from, to, steps } => {
            let (sft, phi, mu) = gibbs(&mut inputs, sft, potential, *beta, tol)?;
            report.push("pressure", mu.pressure(), Method::Spectral, NATS);
            report.push("spectral_radius", mu.eigen().lambda, Method::Spectral, "dimensionless");
            report.push("eigen_residual", mu.eigen().residual, Method::Spectral, "dimensionless");
            if g.check {
                let n = g.depth.unwrap_or(12);
                let pn = variational::pressure_pn(&sft, &phi, n, budget)?;
                report.push("pn_depth", n, Method::Variational, "count");
                report.certify(
                    "pressure",
                    [Method::Spectral, Method::Variational],
                    [mu.pressure(), pn.per_symbol],
                    check_tol::PRESSURE_VARIATIONAL,
                    NATS,
                );
            }
            if g.out.is_some() {
                let base = phi.scaled(if *beta == 0.0 { 0.0 } else { 1.0 / beta });
                let betas = grid(from.unwrap_or(0.0), to.unwrap_or(2.0 * beta.abs().max(1.0)), *steps)?;
                let curve = if *beta == 0.0 {
                    return Err(CliError::Usage("a pressure curve needs a nonzero --beta to fix the potential".into()));
                } else {
                    variational::pressure_curve(&base, &betas)?
                };
                let scale = if g.bits { std::f64::consts::LN_2 } else { 1.0 };
                let curve: Vec<(f64, f64)> = curve.into_iter().map(|(b, p)| (b, p / scale)).collect();
                csv = Some(core_csv(|buf| variational::write_pressure_curve_csv(&curve, buf))?);
            }
        }

        Command::Gibbs { sft, potential, beta } => {
            let (sft, _, mu) = gibbs(&mut inputs, sft, potential, *beta, tol)?;
            let n = g.depth.unwrap_or(6);
            sft.check_budget(n, budget)?;
            let h = mu.markov().entropy();
            let energy = mu.markov().expectation(mu.potential())?;
            report.push("pressure", mu.pressure(), Method::Spectral, NATS);
            report.push("entropy", h, Method::ClosedForm, NATS);
            report.push("mean_potential", energy, Method::ClosedForm, NATS);
            let pi: Vec<f64> = (0..sft.size()).map(|a| mu.cylinder_original(&[a])).collect();
            report.push("symbol_marginals", pi, Method::Spectral, "probability");
            let rows: Vec<(String, f64)> =
                sft.cylinders(n).map(|w| (spell(&sft, w.symbols()), mu.cylinder_original(w.symbols()))).collect();
            let total: f64 = rows.iter().map(|r| r.1).sum();
            report.push("cylinders", rows.len(), Method::Enumeration, "count");
            report.push("cylinder_mass", total, Method::Enumeration, "probability");
            if g.check {
                report.certify(
                    "variational_identity",
                    [Method::Spectral, Method::Variational],
                    [mu.pressure(), h + energy],
                    check_tol::VARIATIONAL_IDENTITY,
                    NATS,
                );
            }
            if g.out.is_some() {
                csv = Some(csv_rows(
                    &["word", "probability"],
                    rows.into_iter().map(|(w, p)| vec![w, format!("{p:.16e}")]),
                )?);
            }
        }

        Command::Bounds { sft, potential, beta } => {
            let (_, _, mu) = gibbs(&mut inputs, sft, potential, *beta, tol)?;
            let n = g.depth.unwrap_or(10);
            let b = mu.gibbs_bounds(n, budget)?;
            report.push("depth", b.depth, Method::Enumeration, "count");
            report.push("c_min", b.c_min, Method::Enumeration, "dimensionless");
            report.push("c_max", b.c_max, Method::Enumeration, "dimensionless");
            report.push("envelope_min", b.envelope.0, Method::Spectral, "dimensionless");
            report.push("envelope_max", b.envelope.1, Method::Spectral, "dimensionless");
            report.push(
                "inside_envelope",
                b.c_min > 0.0 && b.c_min >= b.envelope.0 * (1.0 - 1e-10) && b.c_max <= b.envelope.1 * (1.0 + 1e-10),
                Method::Enumeration,
                "flag",
            );
        }

        Command::Relent { chain, sft, potential, beta } => {
            let nu = inputs.chain(chain)?;
            let (_, _, mu) = gibbs(&mut inputs, sft, potential, *beta, tol)?;
            let h = measures::relative_entropy(&nu, &mu)?;
            report.push("relative_entropy", h, Method::ClosedForm, NATS);
            if g.check {
                let n = g.depth.unwrap_or(12);
                let d = measures::relative_entropy_direct(&nu, &mu, n, budget)?;
                report.push("direct_depth", n, Method::Enumeration, "count");
                report.certify(
                    "relative_entropy",
                    [Method::ClosedForm, Method::Enumeration],
                    [h, d],
                    check_tol::RELATIVE_ENTROPY,
                    NATS,
                );
            }
        }

        Command::Sample { models, length } => {
            let seed = g.seed.ok_or_else(|| CliError::Usage("sample requires --seed".into()))?;
            let (nu, sft, recoding) = inputs.measure(models)?;
            let path = nu.sample_path(*length, seed);
            let smb = nu.smb_estimate(&path)?;
            let symbols: Vec<usize> = match &recoding {
                Some(r) => r.project(&path).into_iter().take(*length).collect(),
                None => path.clone(),
            };
            let spelled: Vec<String> = symbols.iter().map(|&s| sft.alphabet().label(s).to_string()).collect();
            let mut h = Sha256::new();
            for s in &spelled {
                h.update(s.as_bytes());
                h.update([0u8]);
            }
            report.push("seed", seed.to_string(), Method::Sampling, "seed");
            report.push("length", *length, Method::Sampling, "count");
            report.push("path_sha256", hex::encode(h.finalize()), Method::Sampling, "digest");
            report.push("path_prefix", spelled.iter().take(64).cloned().collect::<Vec<_>>().join(" "), Method::Sampling, "symbols");
            report.push("smb_estimate", smb, Method::Sampling, NATS);
            report.push("entropy", nu.entropy(), Method::ClosedForm, NATS);
            if g.out.is_some() {
                csv = Some(csv_rows(
                    &["index", "symbol"],
                    spelled.into_iter().enumerate().map(|(i, s)| vec![i.to_string(), s]),
                )?);
            }
        }

        Command::Aep { models, alpha } => {
            let (nu, _, recoding) = inputs.measure(models)?;
            if recoding.is_some() {
                return Err(CliError::Usage("aep needs a potential of range at most 2".into()));
            }
            let n = g.depth.unwrap_or(12);
            let a = nu.aep_partition(n, *alpha, budget)?;
            report.push("depth", a.n, Method::Enumeration, "count");
            report.push("alpha", a.alpha, Method::Enumeration, "dimensionless");
            report.push("entropy", a.entropy, Method::ClosedForm, NATS);
            report.push("typical_words", a.typical.len(), Method::Enumeration, "count");
            report.push("typical_mass", a.typical_mass, Method::Enumeration, "probability");
            report.push("exceptional_mass", a.exceptional_mass, Method::Enumeration, "probability");
        }

        Command::Periodic { sft, n, word } => {
            let sft = inputs.sft(sft)?;
            let count = sft.periodic_count(*n)?;
            report.push("periodic_points", count.to_string(), Method::Spectral, "count");
            if g.check {
                sft.check_budget(*n, budget)?;
                let mut cycles: u128 = 0;
                sft.for_each_word(*n, |w| {
                    if sft.allows(w[*n - 1], w[0]) {
                        cycles += 1;
                    }
                });
                report.push("enumerated_cycles", cycles.to_string(), Method::Enumeration, "count");
                report.push("counts_agree", cycles == count, Method::Enumeration, "flag");
            }
            if let Some(w) = word {
                let w = sft.alphabet().parse_word(w)?;
                let mu0 = transfer::gibbs_measure(&LocallyConstantPotential::zero(&sft))?;
                let pa = measures::periodic_approximation(&mu0, *n, w.symbols())?;
                report.push("points_in_cylinder", pa.in_cylinder.to_string(), Method::Enumeration, "count");
                report.certify(
                    "cylinder_measure",
                    [Method::Spectral, Method::Enumeration],
                    [pa.measure, pa.ratio],
                    check_tol::PERIODIC_RELATIVE * pa.measure,
                    "probability",
                );
            }
        }

        Command::Production { chain } => {
            let nu = inputs.chain(chain)?;
            let alphabet = nu.sft().alphabet().clone();
            let plus = variational::markov_as_gibbs_on(alphabet.clone(), nu.transition())?;
            let reversed = nu.time_reversal()?;
            let minus = variational::markov_as_gibbs_on(alphabet, reversed.transition())?;
            let ep = measures::entropy_production(&plus, &minus)?;
            report.push("entropy_production", ep, Method::ClosedForm, NATS);
            if g.check {
                let n = g.depth.unwrap_or(12);
                let d = measures::relative_entropy_direct(plus.markov(), &minus, n, budget)?;
                report.push("direct_depth", n, Method::Enumeration, "count");
                report.certify("entropy_production", [Method::ClosedForm, Method::Enumeration], [ep, d], check_tol::PRODUCTION, NATS);
            }
        }

        Command::Lattice { sft, potential, n, beta } => {
            let sft_m = inputs.sft(sft)?;
            let phi = inputs.potential(&sft_m, potential)?;
            let eq = variational::lattice_equilibrium(*n, &phi, *beta, budget)?;
            let method = match eq.method {
                LatticeMethod::Enumeration => Method::Enumeration,
                LatticeMethod::Trace => Method::Spectral,
            };
            let spectral = transfer::pressure_with_tol(&phi.scaled(*beta), tol)?;
            report.push("ring_pressure", eq.pressure, method, NATS);
            report.push("pressure", spectral, Method::Spectral, NATS);
            report.push("finite_size_gap", eq.pressure - spectral, method, NATS);
            if g.check && *n <= variational::ENUMERATION_LIMIT {
                let t = variational::lattice_trace(*n, &phi, *beta)?;
                report.certify(
                    "ring_pressure",
                    [Method::Enumeration, Method::Spectral],
                    [eq.pressure, t.pressure],
                    check_tol::LATTICE_PATHS,
                    NATS,
                );
            }
        }

        Command::Ising { p, beta, n } => {
            let (sft, phi) = LocallyConstantPotential::ising();
            let beta = match (p, beta) {
                (Some(p), None) => {
                    let m = variational::ising_match(*p)?;
                    report.push("agreement_probability", *p, Method::Bisection, "probability");
                    report.push("round_trip", m.round_trip, Method::Spectral, "probability");
                    m.beta
                }
                (None, Some(b)) => *b,
                _ => return Err(CliError::Usage("ising needs exactly one of --p or --beta".into())),
            };
            report.push("beta", beta, Method::Bisection, "dimensionless");
            let closed = (2.0 * beta.cosh()).ln();
            let spectral = transfer::pressure_with_tol(&phi.scaled(beta), tol)?;
            let depth = g.depth.unwrap_or(14);
            let pn = variational::pressure_pn(&sft, &phi.scaled(beta), depth, budget)?;
            let ring = variational::lattice_equilibrium(*n, &phi, beta, budget)?;
            report.push("pressure", spectral, Method::Spectral, NATS);
            report.push("pn_depth", depth, Method::Variational, "count");
            report.push("ring_sites", *n, Method::Enumeration, "count");
            report.push("ring_correction", (1.0 + beta.tanh().powi(*n as i32)).ln() / *n as f64, Method::ClosedForm, NATS);
            report.certify("closed_form", [Method::Spectral, Method::ClosedForm], [spectral, closed], check_tol::ISING_CLOSED_FORM, NATS);
            report.certify("variational", [Method::Spectral, Method::Variational], [spectral, pn.per_symbol], check_tol::ISING_VARIATIONAL, NATS);
            let ring_method = match ring.method {
                LatticeMethod::Enumeration => Method::Enumeration,
                LatticeMethod::Trace => Method::Spectral,
            };
            report.certify("ring", [Method::Spectral, ring_method], [spectral, ring.pressure], check_tol::ISING_RING, NATS);
        }

        Command::HofbauerScan { family, from, to, steps } => {
            let pot = inputs.family(family)?;
            let tol = g.tol.unwrap_or(1e-10);
            let diag = hofbauer::diagnose(&pot, 1 << 12, tol)?;
            let class = match diag.classification {
                Classification::Unique => "unique",
                Classification::NonUnique => "non-unique",
                Classification::Undetermined => "undetermined",
            };
            report.push("classification", class, Method::Renewal, "label");
            report.push("sum_exp_s", diag.sum_exp_s, Method::Renewal, "dimensionless");
            report.push("tail_bound", diag.tail_bound, Method::Renewal, "dimensionless");
            report.push("sum_weighted", finite_or_null(diag.sum_weighted), Method::Renewal, "dimensionless");
            report.push("series_depth", diag.depth, Method::Renewal, "count");
            let betas = grid(*from, *to, *steps)?;
            let curve = hofbauer::pressure_curve(&pot, &betas, tol)?;
            report.push("betas", betas.clone(), Method::Renewal, "dimensionless");
            report.push("pressures", curve.iter().map(|r| r.pressure).collect::<Vec<_>>(), Method::Renewal, NATS);
            let mut lefts = Vec::new();
            let mut rights = Vec::new();
            for step in [1e-2, 1e-3, 1e-4] {
                let k = hofbauer::kink_quotients(&pot, 1.0, step, tol)?;
                lefts.push(k.left);
                rights.push(k.right);
            }
            report.push("kink_steps", vec![1e-2, 1e-3, 1e-4], Method::Renewal, "dimensionless");
            report.push("left_quotients", lefts, Method::Renewal, NATS);
            report.push("right_quotients", rights, Method::Renewal, NATS);
            report.push("left_slope_estimate", hofbauer::left_slope_estimate(&pot, 1 << 20), Method::Renewal, NATS);
            if g.out.is_some() {
                let mut curve = curve;
                if g.bits {
                    for r in &mut curve {
                        r.pressure /= std::f64::consts::LN_2;
                    }
                }
                csv = Some(core_csv(|buf| hofbauer::write_scan_csv(&curve, buf))?);
            }
        }

        Command::Dimension { map } => {
            let map = inputs.map(map)?;
            let d = interval_maps::bowen_dimension(&map)?;
            report.push("dimension", d.dimension, Method::Bisection, "dimensionless");
            report.push("bracket", vec![d.bracket.0, d.bracket.1], Method::Bisection, "dimensionless");
            report.push("residual", d.residual, Method::Spectral, NATS);
            report.push("iterations", d.iterations, Method::Bisection, "count");
            if g.check {
                let d2 = interval_maps::bowen_dimension(&map.square())?;
                report.certify("dimension_under_square", [Method::Bisection, Method::Bisection], [d.dimension, d2.dimension], check_tol::DIMENSION_SQUARE, "dimensionless");
            }
        }

        Command::Acim { map } => {
            let map = inputs.map(map)?;
            let depth = g.depth.unwrap_or(10);
            let a = interval_maps::acim(&map, depth, budget)?;
            let coding = interval_maps::code(&map)?;
            let density: Vec<f64> = coding
                .branches
                .iter()
                .enumerate()
                .map(|(sym, &interval)| a.measure.cylinder_original(&[sym]) / map.length(interval))
                .collect();
            report.push("pressure", a.pressure, Method::Spectral, NATS);
            report.push("branch_intervals", coding.branches.clone(), Method::Enumeration, "index");
            report.push("density", density, Method::Spectral, "density");
            report.push("depth", a.depth, Method::Enumeration, "count");
            report.push("ratio_min", a.ratio_min, Method::Enumeration, "dimensionless");
            report.push("ratio_max", a.ratio_max, Method::Enumeration, "dimensionless");
            report.push("distortion_constant", a.constant, Method::Enumeration, "dimensionless");
            if g.check {
                let c = interval_maps::distortion_certificate(&map, depth, budget)?;
                report.certify("linear_distortion", [Method::Enumeration, Method::ClosedForm], [c.linear_max, 1.0], check_tol::LINEAR_DISTORTION, "dimensionless");
            }
        }

        Command::PnScan { models, from, to, beta } => {
            if *from == 0 || from > to {
                return Err(CliError::Usage("pn-scan needs 1 <= --from <= --to".into()));
            }
            let (sft, obs, reference): (Sft, Box<dyn Observable>, (f64, Method)) = match models.as_slice() {
                [fam] => {
                    let pot = inputs.family(fam)?;
                    let r = hofbauer::pressure_renewal(&pot, *beta, g.tol.unwrap_or(1e-10))?;
                    (Sft::full_shift(2), Box::new(ScaledOwned { inner: pot, beta: *beta }), (r.pressure, Method::Renewal))
                }
                [s, p] => {
                    let sft = inputs.sft(s)?;
                    let phi = inputs.potential(&sft, p)?.scaled(*beta);
                    let pr = transfer::pressure_with_tol(&phi, tol)?;
                    (sft, Box::new(phi), (pr, Method::Spectral))
                }
                _ => return Err(CliError::Usage("pn-scan takes a family file or an sft and a potential".into())),
            };
            let mut rows = Vec::new();
            for n in *from..=*to {
                let e = variational::pressure_pn(&sft, obs.as_ref(), n, budget)?;
                rows.push(e);
            }
            report.push("n", rows.iter().map(|e| e.n).collect::<Vec<_>>(), Method::Variational, "count");
            report.push("per_symbol", rows.iter().map(|e| e.per_symbol).collect::<Vec<_>>(), Method::Variational, NATS);
            report.push("reference_pressure", reference.0, reference.1, NATS);
            if g.check {
                let last = rows.last().expect("nonempty").per_symbol;
                report.certify("pressure", [reference.1, Method::Variational], [reference.0, last], check_tol::PN_REFERENCE, NATS);
            }
            if g.out.is_some() {
                let scale = if g.bits { std::f64::consts::LN_2 } else { 1.0 };
                csv = Some(csv_rows(
                    &["n", "log_sum", "per_symbol"],
                    rows.iter().map(|e| {
                        vec![e.n.to_string(), format!("{:.16e}", e.log_sum / scale), format!("{:.16e}", e.per_symbol / scale)]
                    }),
                )?);
            }
        }
    }

    if g.out.is_some() && csv.is_none() {
        return Err(CliError::Usage("this command writes no CSV artifact".into()));
    }
    report.inputs_digest = inputs.digest();
    if g.bits {
        report.to_bits();
    }
    Ok(Outcome { report, csv })
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// `β·O` owning its observable.
struct ScaledOwned<O> {
    inner: O,
    beta: f64,
}

impl<O: Observable> Observable for ScaledOwned<O> {
    fn var_k(&self, k: usize) -> f64 {
        Scaled::new(&self.inner, self.beta).var_k(k)
    }

    fn birkhoff_sup(&self, word: &[usize]) -> f64 {
        Scaled::new(&self.inner, self.beta).birkhoff_sup(word)
    }

    fn birkhoff_inf(&self, word: &[usize]) -> f64 {
        Scaled::new(&self.inner, self.beta).birkhoff_inf(word)
    }
}
