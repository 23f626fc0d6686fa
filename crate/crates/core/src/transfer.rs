//! Ruelle's transfer operator for range-2 potentials as a nonnegative
//! matrix, its Perron eigendata, the pressure, and the Gibbs state as a
//! stationary Markov chain.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::measures::MarkovMeasure;
use crate::potentials::{LocallyConstantPotential, Observable, Recoding};
use crate::sft::Sft;

/// Relative residual used when callers do not pass a tolerance.
pub const DEFAULT_TOL: f64 = 1e-13;
/// Iteration cap for power iteration.
pub const MAX_ITER: usize = 1_000_000;

/// `A_ab = M_ab · exp φ(a, b)`.
///
/// On functions of the first symbol the operator acts as
/// `(Lf)(b) = Σ_a A_ab f(a)`, i.e. by `Aᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    sft: Sft,
    matrix: Matrix,
}

/// Leading eigendata of a transfer matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenData {
    pub lambda: f64,
    /// Right eigenvector of `A`, summing to 1: the eigenmeasure `ν` on 1-cylinders.
    pub v: Vec<f64>,
    /// Left eigenvector of `A` with `u·v = 1`: the eigenfunction `h` of `L`.
    pub u: Vec<f64>,
    pub residual: f64,
}

impl TransferMatrix {
    /// Requires a primitive shift and a potential of range at most 2.
    pub fn build(potential: &LocallyConstantPotential) -> Result<Self> {
        if potential.range() > 2 {
            return Err(Error::RangeTooLarge(potential.range()));
        }
        let sft = potential.sft();
        sft.require_primitive()?;
        let matrix = Matrix::from_fn(sft.size(), |a, b| {
            if !sft.allows(a, b) {
                return 0.0;
            }
            let phi = match potential.range() {
                1 => potential.value(&[a]),
                _ => potential.value(&[a, b]),
            };
            phi.expect("admissible").exp()
        });
        Ok(TransferMatrix { sft: sft.clone(), matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    /// Power iteration from the uniform vector on both sides.
    pub fn leading_eigen(&self, tol: f64) -> Result<EigenData> {
        if !(tol > 0.0) {
            return Err(Error::Invalid("tolerance must be positive".into()));
        }
        let p = linalg::perron(&self.matrix, tol, MAX_ITER)?;
        Ok(EigenData { lambda: p.lambda, v: p.right, u: p.left, residual: p.residual })
    }

    /// One application of `L` to a function of the first symbol.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.matrix.vec_mul(f)
    }

    /// `‖λ⁻ⁿ Lⁿ f − ⟨f, ν⟩ h‖_∞`.
    pub fn rpf_convergence(&self, eigen: &EigenData, f: &[f64], n: usize) -> f64 {
        let mut g = f.to_vec();
        for _ in 0..n {
            g = self.apply(&g).into_iter().map(|x| x / eigen.lambda).collect();
        }
        let mass: f64 = f.iter().zip(&eigen.v).map(|(a, b)| a * b).sum();
        g.iter().zip(&eigen.u).fold(0.0, |d, (x, h)| d.max((x - mass * h).abs()))
    }
}

/// `P(φ)` as `log λ` of the (recoded) transfer matrix.
pub fn pressure(potential: &LocallyConstantPotential) -> Result<f64> {
    pressure_with_tol(potential, DEFAULT_TOL)
}

pub fn pressure_with_tol(potential: &LocallyConstantPotential, tol: f64) -> Result<f64> {
    let rec = potential.recode_range2();
    let eig = TransferMatrix::build(&rec.potential)?.leading_eigen(tol)?;
    Ok(eig.lambda.ln())
}

/// The Gibbs state of a locally constant potential in stationary Markov form.
///
/// For range above 2 the chain lives on the higher-block shift of the
/// recoding; [`GibbsMeasure::cylinder_original`] reads masses of words of
/// the original shift.
#[derive(Debug, Clone)]
pub struct GibbsMeasure {
    recoding: Recoding,
    eigen: EigenData,
    markov: MarkovMeasure,
    pressure: f64,
}

/// Gibbs measure of `potential`.
pub fn gibbs_measure(potential: &LocallyConstantPotential) -> Result<GibbsMeasure> {
    gibbs_measure_with_tol(potential, DEFAULT_TOL)
}

pub fn gibbs_measure_with_tol(potential: &LocallyConstantPotential, tol: f64) -> Result<GibbsMeasure> {
    let recoding = potential.recode_range2();
    let transfer = TransferMatrix::build(&recoding.potential)?;
    let eigen = transfer.leading_eigen(tol)?;
    let a = transfer.matrix();
    let m = a.dim();
    let p = Matrix::from_fn(m, |i, j| a[(i, j)] * eigen.v[j] / (eigen.lambda * eigen.v[i]));
    let pi: Vec<f64> = eigen.u.iter().zip(&eigen.v).map(|(u, v)| u * v).collect();
    let markov = MarkovMeasure::from_parts(recoding.sft.clone(), pi, p);
    let pressure = eigen.lambda.ln();
    Ok(GibbsMeasure { recoding, eigen, markov, pressure })
}

/// Enumerated and analytic bounds on `μ[w] / exp(S_nφ(w) − nP)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsBounds {
    pub depth: usize,
    pub c_min: f64,
    pub c_max: f64,
    /// Bounds valid at every depth, from eigenvector extremes.
    pub envelope: (f64, f64),
}

impl GibbsMeasure {
    pub fn markov(&self) -> &MarkovMeasure {
        &self.markov
    }

    pub fn pressure(&self) -> f64 {
        self.pressure
    }

    pub fn eigen(&self) -> &EigenData {
        &self.eigen
    }

    /// The shift the chain lives on (the recoded one for range above 2).
    pub fn sft(&self) -> &Sft {
        &self.recoding.sft
    }

    /// Potential of range at most 2 on [`GibbsMeasure::sft`].
    pub fn potential(&self) -> &LocallyConstantPotential {
        &self.recoding.potential
    }

    pub fn recoding(&self) -> &Recoding {
        &self.recoding
    }

    /// `μ[w]` for a word of [`GibbsMeasure::sft`].
    pub fn cylinder(&self, word: &[usize]) -> f64 {
        self.markov.cylinder(word)
    }

    /// `μ[w]` for a word of the shift the potential was defined on.
    pub fn cylinder_original(&self, word: &[usize]) -> f64 {
        let block = self.recoding.block;
        if word.len() >= block {
            return match self.recoding.lift(word) {
                Some(b) => self.markov.cylinder(&b),
                None => 0.0,
            };
        }
        // shorter than a block: sum over blocks extending the word
        self.sft()
            .cylinders(1)
            .filter(|b| self.recoding.project(b.symbols()).starts_with(word))
            .map(|b| self.markov.cylinder(b.symbols()))
            .sum()
    }

    /// `max_c φ(b, c)` over successors, per symbol.
    fn boundary_max(&self) -> Vec<f64> {
        let pot = self.potential();
        let sft = self.sft();
        (0..sft.size())
            .map(|b| match pot.range() {
                1 => pot.value(&[b]).expect("symbol"),
                _ => (0..sft.size())
                    .filter(|&c| sft.allows(b, c))
                    .map(|c| pot.value(&[b, c]).expect("admissible"))
                    .fold(f64::NEG_INFINITY, f64::max),
            })
            .collect()
    }

    /// Ratio bounds `[λ·min u·min g, λ·max u·max g]` with `g_b = v_b e^{−max φ(b,·)}`.
    pub fn gibbs_envelope(&self) -> (f64, f64) {
        let e = &self.eigen;
        let g: Vec<f64> =
            self.boundary_max().iter().zip(&e.v).map(|(mx, v)| v * (-mx).exp()).collect();
        let min = |x: &[f64]| x.iter().copied().fold(f64::INFINITY, f64::min);
        let max = |x: &[f64]| x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (e.lambda * min(&e.u) * min(&g), e.lambda * max(&e.u) * max(&g))
    }

    /// Exact extremes of the Gibbs ratio over all admissible `n`-cylinders.
    pub fn gibbs_bounds(&self, n: usize, budget: u64) -> Result<GibbsBounds> {
        if n == 0 {
            return Err(Error::Invalid("depth must be at least 1".into()));
        }
        self.sft().check_budget(n, budget)?;
        let pot = self.potential();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let np = n as f64 * self.pressure;
        self.sft().for_each_word(n, |w| {
            let ratio = self.markov.cylinder(w) / (pot.birkhoff_sup(w) - np).exp();
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        });
        Ok(GibbsBounds { depth: n, c_min: lo, c_max: hi, envelope: self.gibbs_envelope() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::Sft;

    const GOLDEN: f64 = 1.618_033_988_749_895;

    /// Dominant root of the characteristic polynomial of a 2x2 matrix.
    fn dominant_root_2x2(a: &Matrix) -> f64 {
        let tr = a.trace();
        let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        (tr + (tr * tr - 4.0 * det).sqrt()) / 2.0
    }

    /// Dominant real root of the characteristic polynomial of a 3x3 matrix.
    fn dominant_root_3x3(a: &Matrix) -> f64 {
        let c2 = -a.trace();
        let minors = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)] + a[(0, 0)] * a[(2, 2)]
            - a[(0, 2)] * a[(2, 0)]
            + a[(1, 1)] * a[(2, 2)]
            - a[(1, 2)] * a[(2, 1)];
        let det = a[(0, 0)] * (a[(1, 1)] * a[(2, 2)] - a[(1, 2)] * a[(2, 1)])
            - a[(0, 1)] * (a[(1, 0)] * a[(2, 2)] - a[(1, 2)] * a[(2, 0)])
            + a[(0, 2)] * (a[(1, 0)] * a[(2, 1)] - a[(1, 1)] * a[(2, 0)]);
        let p = |x: f64| ((x + c2) * x + minors) * x - det;
        let dp = |x: f64| (3.0 * x + 2.0 * c2) * x + minors;
        // Newton from above the Gershgorin bound decreases monotonically to the largest root.
        let mut x = (0..3).map(|i| a.row(i).iter().sum::<f64>()).fold(0.0, f64::max) + 1.0;
        for _ in 0..200 {
            x -= p(x) / dp(x);
        }
        x
    }

    #[test]
    fn build_examples() {
        let g = Sft::golden_mean();
        let t = TransferMatrix::build(&LocallyConstantPotential::zero(&g)).unwrap();
        assert_eq!(t.matrix(), &g.matrix());

        let (_, ising) = LocallyConstantPotential::ising();
        let t = TransferMatrix::build(&ising).unwrap();
        let e = std::f64::consts::E;
        assert_eq!(t.matrix().rows(), vec![vec![e, 1.0 / e], vec![1.0 / e, e]]);

        let full = Sft::full_shift(3);
        let t = TransferMatrix::build(&LocallyConstantPotential::constant(&full, 0.7)).unwrap();
        assert!(t.matrix().rows().iter().flatten().all(|&x| (x - 0.7f64.exp()).abs() < 1e-15));

        let p3 = LocallyConstantPotential::from_fn(&full, 3, |_| 0.0).unwrap();
        assert_eq!(TransferMatrix::build(&p3), Err(Error::RangeTooLarge(3)));
    }

    #[test]
    fn leading_eigen_examples() {
        let g = Sft::golden_mean();
        let eig = TransferMatrix::build(&LocallyConstantPotential::zero(&g)).unwrap().leading_eigen(1e-13).unwrap();
        assert!((eig.lambda - GOLDEN).abs() < 1e-12);

        let (_, ising) = LocallyConstantPotential::ising();
        let eig = TransferMatrix::build(&ising).unwrap().leading_eigen(1e-13).unwrap();
        assert!((eig.lambda - 2.0 * 1f64.cosh()).abs() < 1e-12);

        let full = Sft::full_shift(2);
        let eig = TransferMatrix::build(&LocallyConstantPotential::constant(&full, 0.3))
            .unwrap()
            .leading_eigen(1e-13)
            .unwrap();
        assert!((eig.lambda - 2.0 * 0.3f64.exp()).abs() < 1e-12);
        let dot: f64 = eig.u.iter().zip(&eig.v).map(|(a, b)| a * b).sum();
        assert!((dot - 1.0).abs() < 1e-14);
        assert!((eig.v.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalue_matches_characteristic_polynomial() {
        let full2 = Sft::full_shift(2);
        let full3 = Sft::full_shift(3);
        let g = Sft::golden_mean();
        let pots = [
            LocallyConstantPotential::from_fn(&full2, 2, |w| 0.3 * w[0] as f64 - 0.7 * w[1] as f64).unwrap(),
            LocallyConstantPotential::from_fn(&g, 2, |w| 0.5 + w[0] as f64 * 0.2 - w[1] as f64).unwrap(),
            LocallyConstantPotential::from_fn(&full3, 2, |w| ((w[0] * 3 + w[1]) as f64).sin()).unwrap(),
            LocallyConstantPotential::from_fn(&full3, 1, |w| w[0] as f64 * 0.4).unwrap(),
        ];
        for pot in &pots {
            let t = TransferMatrix::build(pot).unwrap();
            let lam = t.leading_eigen(1e-14).unwrap().lambda;
            let exact = if t.matrix().dim() == 2 {
                dominant_root_2x2(t.matrix())
            } else {
                dominant_root_3x3(t.matrix())
            };
            assert!((lam - exact).abs() < 1e-10, "{lam} vs {exact}");
        }
    }

    #[test]
    fn pressure_examples() {
        assert!((pressure(&LocallyConstantPotential::zero(&Sft::full_shift(2))).unwrap() - 2f64.ln()).abs() < 1e-12);
        let (_, ising) = LocallyConstantPotential::ising();
        let p = pressure(&ising).unwrap();
        assert!((p - (2.0 * 1f64.cosh()).ln()).abs() < 1e-12);
        assert!((p - 1.12693).abs() < 1e-5);
        let c = pressure(&LocallyConstantPotential::constant(&Sft::full_shift(2), 1.5)).unwrap();
        assert!((c - 1.5 - 2f64.ln()).abs() < 1e-12);
        for shift in [-1.0, 0.5, 2.0] {
            let q = pressure(&ising.shifted(shift)).unwrap();
            assert!((q - p - shift).abs() < 1e-12);
        }
    }

    #[test]
    fn parry_measure() {
        let g = Sft::golden_mean();
        let mu = gibbs_measure(&LocallyConstantPotential::zero(&g)).unwrap();
        let p = mu.markov().transition();
        assert!((p[(0, 0)] - 1.0 / GOLDEN).abs() < 1e-12);
        assert!((p[(0, 1)] - 1.0 / (GOLDEN * GOLDEN)).abs() < 1e-12);
        assert!((p[(1, 0)] - 1.0).abs() < 1e-12);
        assert_eq!(p[(1, 1)], 0.0);
        let pi = mu.markov().stationary();
        let pi0 = GOLDEN * GOLDEN / (GOLDEN * GOLDEN + 1.0);
        assert!((pi[0] - pi0).abs() < 1e-12 && (pi[0] - 0.7236).abs() < 1e-4);
    }

    #[test]
    fn product_measures() {
        let full = Sft::full_shift(2);
        let mu = gibbs_measure(&LocallyConstantPotential::zero(&full)).unwrap();
        for w in full.cylinders(4) {
            assert!((mu.cylinder(w.symbols()) - 1.0 / 16.0).abs() < 1e-15);
        }
        let pot = LocallyConstantPotential::per_symbol(&full, &[0.25f64.ln(), 0.75f64.ln()]).unwrap();
        let mu = gibbs_measure(&pot).unwrap();
        assert!(mu.pressure().abs() < 1e-14);
        assert!((mu.cylinder(&[0, 1, 1]) - 0.25 * 0.75 * 0.75).abs() < 1e-15);
    }

    #[test]
    fn kolmogorov_consistency_and_shift_invariance() {
        let full3 = Sft::full_shift(3);
        let pot = LocallyConstantPotential::from_fn(&full3, 2, |w| (w[0] as f64 - 1.0) * (w[1] as f64) * 0.6).unwrap();
        let mu = gibbs_measure(&pot).unwrap();
        for n in 1..=6 {
            let total: f64 = full3.cylinders(n).map(|w| mu.cylinder(w.symbols())).sum();
            assert!((total - 1.0).abs() < 1e-12);
            for w in full3.cylinders(n) {
                let w = w.symbols();
                let right: f64 = (0..3).map(|b| mu.cylinder(&[w, &[b]].concat())).sum();
                let left: f64 = (0..3).map(|a| mu.cylinder(&[&[a], w].concat())).sum();
                assert!((right - mu.cylinder(w)).abs() < 1e-14);
                assert!((left - mu.cylinder(w)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn recoded_gibbs_projects_to_original_cylinders() {
        let g = Sft::golden_mean();
        let pot = LocallyConstantPotential::from_fn(&g, 3, |w| 0.4 * w[0] as f64 - 0.9 * w[2] as f64 + 0.1).unwrap();
        let mu = gibbs_measure(&pot).unwrap();
        assert_eq!(mu.recoding().block, 2);
        for n in 1..=6 {
            let total: f64 = g.cylinders(n).map(|w| mu.cylinder_original(w.symbols())).sum();
            assert!((total - 1.0).abs() < 1e-12);
            for w in g.cylinders(n) {
                let w = w.symbols();
                let ext: f64 = (0..2).filter(|&b| g.allows(w[n - 1], b)).map(|b| mu.cylinder_original(&[w, &[b]].concat())).sum();
                assert!((ext - mu.cylinder_original(w)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gibbs_bounds_examples() {
        let full = Sft::full_shift(2);
        let mu = gibbs_measure(&LocallyConstantPotential::zero(&full)).unwrap();
        for n in 1..=8 {
            let b = mu.gibbs_bounds(n, 1 << 20).unwrap();
            assert!((b.c_min - 1.0).abs() < 1e-12 && (b.c_max - 1.0).abs() < 1e-12);
        }
        let parry = gibbs_measure(&LocallyConstantPotential::zero(&Sft::golden_mean())).unwrap();
        for n in 1..=10 {
            let b = parry.gibbs_bounds(n, 1 << 20).unwrap();
            assert!(b.c_min > 0.0);
            assert!(b.envelope.0 <= b.c_min + 1e-12 && b.c_max <= b.envelope.1 + 1e-12);
        }
        let (_, ising) = LocallyConstantPotential::ising();
        let b = gibbs_measure(&ising).unwrap().gibbs_bounds(8, 1 << 20).unwrap();
        assert!(b.c_min > 0.0 && b.c_min <= b.c_max);
        assert!(b.envelope.0 <= b.c_min + 1e-12 && b.c_max <= b.envelope.1 + 1e-12);
        assert!(matches!(parry.gibbs_bounds(40, 1000), Err(Error::DepthTooLarge { .. })));
    }

    #[test]
    fn rpf_convergence_examples() {
        let g = Sft::golden_mean();
        let t = TransferMatrix::build(&LocallyConstantPotential::zero(&g)).unwrap();
        let eig = t.leading_eigen(1e-14).unwrap();
        for n in [0, 5, 20] {
            assert!(t.rpf_convergence(&eig, &eig.u, n) < 1e-12);
        }
        let ratio: f64 = (GOLDEN - 1.0) / GOLDEN;
        let d0 = t.rpf_convergence(&eig, &[1.0, 0.0], 0);
        let d20 = t.rpf_convergence(&eig, &[1.0, 0.0], 20);
        assert!(d20 <= ratio.powi(20) * d0 * 1.0001, "{d20}");
        let d: Vec<f64> = (5..25).map(|n| t.rpf_convergence(&eig, &[1.0, 0.0], n)).collect();
        assert!(d.windows(2).all(|w| w[1] <= w[0]));
        assert!(((d[10] / d[9]) - ratio).abs() < 1e-6);

        let full = Sft::full_shift(2);
        let t = TransferMatrix::build(&LocallyConstantPotential::zero(&full)).unwrap();
        let eig = t.leading_eigen(1e-14).unwrap();
        assert!(t.rpf_convergence(&eig, &[0.3, -2.0], 1) < 1e-15);
    }
}
