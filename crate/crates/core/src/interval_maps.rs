//! Piecewise-linear expanding Markov maps of `[0, 1]` and their repellers.
//!
//! The partition is `u_0 = 0 < u_1 < … < u_N = 1`. Each interval is either a
//! branch, mapped linearly onto a run of consecutive intervals, or a gap whose
//! points leave the system. Branches are the symbols of the coding; gaps may
//! appear inside images.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::potentials::LocallyConstantPotential;
use crate::sft::{Alphabet, Sft};
use crate::transfer::{self, GibbsMeasure, TransferMatrix};

/// Relative tolerance when matching a branch's image length to its partition intervals.
pub const LENGTH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearMarkovMap {
    breakpoints: Vec<f64>,
    /// Signed slopes; 0 on gaps.
    slopes: Vec<f64>,
    /// Interval indices covered by each image, ascending and consecutive; empty on gaps.
    images: Vec<Vec<usize>>,
}

impl PiecewiseLinearMarkovMap {
    pub fn new(breakpoints: Vec<f64>, slopes: Vec<f64>, images: Vec<Vec<usize>>) -> Result<Self> {
        let n = breakpoints.len().saturating_sub(1);
        if n == 0 || breakpoints[0] != 0.0 || breakpoints[n] != 1.0 {
            return Err(Error::Invalid("breakpoints must run from 0 to 1".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Invalid("breakpoints must be strictly increasing".into()));
        }
        if slopes.len() != n || images.len() != n {
            return Err(Error::Invalid(format!("expected {n} slopes and {n} images")));
        }
        let map = PiecewiseLinearMarkovMap { breakpoints, slopes, images };
        for i in 0..n {
            let (s, img) = (map.slopes[i], &map.images[i]);
            let not_markov = |reason: String| Err(Error::NotMarkov { branch: i, reason });
            if img.is_empty() {
                if s != 0.0 {
                    return not_markov(format!("slope {s} on an interval with empty image"));
                }
                continue;
            }
            if !s.is_finite() || s.abs() <= 1.0 {
                return Err(Error::NotExpanding { branch: i, slope: s });
            }
            if img.windows(2).any(|w| w[1] != w[0] + 1) || img[img.len() - 1] >= n {
                return not_markov("image is not a run of consecutive intervals".into());
            }
            let target = map.breakpoints[img[img.len() - 1] + 1] - map.breakpoints[img[0]];
            let actual = map.length(i) * s.abs();
            if (actual - target).abs() > LENGTH_TOL * target {
                return not_markov(format!("image has length {actual}, partition intervals span {target}"));
            }
        }
        if map.branches().is_empty() {
            return Err(Error::Invalid("map has no branches".into()));
        }
        Ok(map)
    }

    /// Linear full-branch map with the given slopes; interval lengths are `1/|sᵢ|`.
    pub fn full_branches(slopes: &[f64]) -> Result<Self> {
        let total: f64 = slopes.iter().map(|s| 1.0 / s.abs()).sum();
        if (total - 1.0).abs() > LENGTH_TOL {
            return Err(Error::Invalid(format!("reciprocal slopes sum to {total}, not 1")));
        }
        let mut breakpoints = vec![0.0];
        for s in &slopes[..slopes.len() - 1] {
            breakpoints.push(breakpoints.last().unwrap() + 1.0 / s.abs());
        }
        breakpoints.push(1.0);
        let n = slopes.len();
        Self::new(breakpoints, slopes.to_vec(), vec![(0..n).collect(); n])
    }

    pub fn doubling() -> Self {
        Self::full_branches(&[2.0, 2.0]).expect("valid map")
    }

    /// Two branches of slope 3 on `[0, 1/3]` and `[2/3, 1]` over the middle gap.
    pub fn middle_third() -> Self {
        let all = vec![0, 1, 2];
        Self::new(vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0], vec![3.0, 0.0, 3.0], vec![all.clone(), vec![], all])
            .expect("valid map")
    }

    pub fn intervals(&self) -> usize {
        self.slopes.len()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    pub fn length(&self, i: usize) -> f64 {
        self.breakpoints[i + 1] - self.breakpoints[i]
    }

    /// Interval indices of the branches, which are the symbols of the coding.
    pub fn branches(&self) -> Vec<usize> {
        (0..self.intervals()).filter(|&i| !self.images[i].is_empty()).collect()
    }

    /// True when some interval is a gap.
    pub fn is_repeller(&self) -> bool {
        self.images.iter().any(|i| i.is_empty())
    }

    /// `min |T′|` over branches.
    pub fn expansion(&self) -> f64 {
        self.branches().iter().map(|&i| self.slopes[i].abs()).fold(f64::INFINITY, f64::min)
    }

    /// The map `T²` on the partition refined by `T⁻¹` of the original intervals.
    pub fn square(&self) -> Self {
        // pieces of each original interval, in spatial order: (length, slope, image interval)
        let mut pieces: Vec<(f64, f64, Option<usize>)> = Vec::new();
        let mut first_piece = Vec::with_capacity(self.intervals() + 1);
        for i in 0..self.intervals() {
            first_piece.push(pieces.len());
            let s = self.slopes[i];
            if self.images[i].is_empty() {
                pieces.push((self.length(i), 0.0, None));
                continue;
            }
            let mut order = self.images[i].clone();
            if s < 0.0 {
                order.reverse();
            }
            for l in order {
                pieces.push((self.length(l) / s.abs(), s * self.slopes[l], Some(l)));
            }
        }
        first_piece.push(pieces.len());
        let mut breakpoints = vec![0.0];
        for (len, ..) in &pieces[..pieces.len() - 1] {
            breakpoints.push(breakpoints.last().unwrap() + len);
        }
        breakpoints.push(1.0);
        let mut slopes = Vec::with_capacity(pieces.len());
        let mut images = Vec::with_capacity(pieces.len());
        for &(_, s, l) in &pieces {
            match l {
                Some(l) if !self.images[l].is_empty() => {
                    let img = &self.images[l];
                    slopes.push(s);
                    images.push((first_piece[img[0]]..first_piece[img[img.len() - 1] + 1]).collect());
                }
                _ => {
                    slopes.push(0.0);
                    images.push(Vec::new());
                }
            }
        }
        PiecewiseLinearMarkovMap { breakpoints, slopes, images }
    }
}

/// Symbolic description of a map: the shift on branches and `φ̃ = −log|T′|`.
#[derive(Debug, Clone)]
pub struct Coding {
    pub sft: Sft,
    pub potential: LocallyConstantPotential,
    /// Interval index of each symbol.
    pub branches: Vec<usize>,
    lengths: Vec<f64>,
    slopes: Vec<f64>,
}

impl Coding {
    /// `|I_w| = |I_{w_{n−1}}| · Π_{i<n−1} |s_{wᵢ}|⁻¹` for an admissible `w`.
    pub fn cylinder_length(&self, word: &[usize]) -> f64 {
        match word.split_last() {
            None => 1.0,
            Some((&last, rest)) => rest.iter().fold(self.lengths[last], |acc, &a| acc / self.slopes[a]),
        }
    }

    /// `|T(I_a)|` for each symbol, which bounds the plain distortion ratio.
    pub fn image_lengths(&self) -> Vec<f64> {
        self.lengths.iter().zip(&self.slopes).map(|(l, s)| l * s).collect()
    }
}

pub fn code(map: &PiecewiseLinearMarkovMap) -> Result<Coding> {
    let branches = map.branches();
    let alphabet = Alphabet::numeric(branches.len().max(2))?;
    if branches.len() < 2 {
        return Err(Error::Invalid("coding needs at least two branches".into()));
    }
    let sft = Sft::from_fn(alphabet, |a, b| map.images[branches[a]].contains(&branches[b]))?;
    let slopes: Vec<f64> = branches.iter().map(|&i| map.slopes[i].abs()).collect();
    let lengths = branches.iter().map(|&i| map.length(i)).collect();
    let values: Vec<f64> = slopes.iter().map(|s| -s.ln()).collect();
    let potential = LocallyConstantPotential::per_symbol(&sft, &values)?;
    Ok(Coding { sft, potential, branches, lengths, slopes })
}

/// Extremes over `n`-cylinders of two length ratios.
///
/// `ratio = |I_w|·exp(−S_nφ̃(w))` equals `|T(I_{w_{n−1}})|`, constant only for
/// full-branch maps. `linear = |I_w| / (|I_{w_{n−1}}|·exp(S_{n−1}φ̃(w)))` is
/// identically 1 for linear branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionCertificate {
    pub depth: usize,
    pub min: f64,
    pub max: f64,
    /// `max(max, 1/min)`, so that `C⁻¹ ≤ ratio ≤ C`.
    pub constant: f64,
    pub linear_min: f64,
    pub linear_max: f64,
}

pub fn distortion_certificate(map: &PiecewiseLinearMarkovMap, n: usize, budget: u64) -> Result<DistortionCertificate> {
    if n == 0 {
        return Err(Error::Invalid("depth must be at least 1".into()));
    }
    let coding = code(map)?;
    coding.sft.check_budget(n, budget)?;
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut lmin, mut lmax) = (f64::INFINITY, f64::NEG_INFINITY);
    coding.sft.for_each_word(n, |w| {
        let len = coding.cylinder_length(w);
        let stretch: f64 = w.iter().map(|&a| coding.slopes[a]).product();
        let r = len * stretch;
        min = min.min(r);
        max = max.max(r);
        let last = w[n - 1];
        let l = len * stretch / coding.slopes[last] / coding.lengths[last];
        lmin = lmin.min(l);
        lmax = lmax.max(l);
    });
    Ok(DistortionCertificate { depth: n, min, max, constant: max.max(1.0 / min), linear_min: lmin, linear_max: lmax })
}

/// The absolutely continuous invariant measure as the Gibbs state of `φ̃`.
#[derive(Debug, Clone)]
pub struct Acim {
    pub measure: GibbsMeasure,
    pub pressure: f64,
    pub depth: usize,
    /// Extremes of `μ[w] / |I_w|` over `depth`-cylinders.
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// `max(ratio_max, 1/ratio_min)`.
    pub constant: f64,
}

/// Pressure below this is treated as leakage, i.e. a repeller.
pub const CONSERVATIVE_TOL: f64 = 1e-10;

pub fn acim(map: &PiecewiseLinearMarkovMap, depth: usize, budget: u64) -> Result<Acim> {
    if depth == 0 {
        return Err(Error::Invalid("depth must be at least 1".into()));
    }
    let coding = code(map)?;
    let measure = transfer::gibbs_measure(&coding.potential)?;
    let pressure = measure.pressure();
    if pressure < -CONSERVATIVE_TOL || map.is_repeller() {
        return Err(Error::IsRepeller(pressure));
    }
    coding.sft.check_budget(depth, budget)?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    coding.sft.for_each_word(depth, |w| {
        let r = measure.cylinder(w) / coding.cylinder_length(w);
        lo = lo.min(r);
        hi = hi.max(r);
    });
    Ok(Acim { measure, pressure, depth, ratio_min: lo, ratio_max: hi, constant: hi.max(1.0 / lo) })
}

/// Root of `s ↦ P(sφ̃)` with the final bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BowenDimension {
    pub dimension: f64,
    pub bracket: (f64, f64),
    /// `|P(s*φ̃)|`.
    pub residual: f64,
    pub iterations: usize,
}

/// Target for `|P(s*φ̃)|`.
pub const DIMENSION_TOL: f64 = 1e-12;

/// `P(sφ̃)` and its derivative `⟨φ̃, μ_s⟩`.
fn pressure_and_slope(coding: &Coding, s: f64) -> Result<(f64, f64)> {
    let scaled = coding.potential.scaled(s);
    let mu = transfer::gibbs_measure(&scaled)?;
    let slope = mu.markov().expectation(&coding.potential)?;
    Ok((mu.pressure(), slope))
}

/// Bisection on `[0, P(0)/log α + 1]`, switching to safeguarded Newton once
/// the bracket is shorter than `1e−3`.
pub fn bowen_dimension(map: &PiecewiseLinearMarkovMap) -> Result<BowenDimension> {
    let coding = code(map)?;
    let alpha = map.expansion();
    let p0 = TransferMatrix::build(&coding.potential.scaled(0.0))?.leading_eigen(transfer::DEFAULT_TOL)?.lambda.ln();
    if !(p0 > 0.0) {
        return Err(Error::Invalid(format!("P(0) = {p0} is not positive")));
    }
    let (mut lo, mut hi) = (0.0, p0 / alpha.ln() + 1.0);
    let mut x = 0.5 * (lo + hi);
    for it in 1..=200 {
        let (p, dp) = pressure_and_slope(&coding, x)?;
        if p.abs() <= DIMENSION_TOL {
            return Ok(BowenDimension { dimension: x, bracket: (lo, hi), residual: p.abs(), iterations: it });
        }
        // P is strictly decreasing
        if p > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - p / dp;
        x = if hi - lo < 1e-3 && dp < 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= f64::EPSILON * hi {
            let (p, _) = pressure_and_slope(&coding, x)?;
            return Ok(BowenDimension { dimension: x, bracket: (lo, hi), residual: p.abs(), iterations: it });
        }
    }
    let (p, _) = pressure_and_slope(&coding, x)?;
    Ok(BowenDimension { dimension: x, bracket: (lo, hi), residual: p.abs(), iterations: 200 })
}

/// Total length of the `n`-cylinders, i.e. of the points surviving `n − 1` steps.
pub fn surviving_length(map: &PiecewiseLinearMarkovMap, n: usize, budget: u64) -> Result<f64> {
    let coding = code(map)?;
    coding.sft.check_budget(n, budget)?;
    let mut total = 0.0;
    coding.sft.for_each_word(n, |w| total += coding.cylinder_length(w));
    Ok(total)
}

/// The `m × m` matrix `M_ab |s_a|^{−s}`.
pub fn dimension_matrix(coding: &Coding, s: f64) -> Matrix {
    Matrix::from_fn(coding.sft.size(), |a, b| {
        if coding.sft.allows(a, b) {
            coding.slopes[a].powf(-s)
        } else {
            0.0
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::DEFAULT_BUDGET;

    const PHI: f64 = 1.618_033_988_749_895;

    /// Golden-mean repeller: `[0, 1/2]` slope 2 onto `[0, 1]`, gap, `[3/4, 1]` slope 2 onto `[0, 1/2]`.
    fn golden_repeller() -> PiecewiseLinearMarkovMap {
        PiecewiseLinearMarkovMap::new(
            vec![0.0, 0.5, 0.75, 1.0],
            vec![2.0, 0.0, 2.0],
            vec![vec![0, 1, 2], vec![], vec![0]],
        )
        .unwrap()
    }

    /// Conservative golden map: `[0, 1/φ]` onto `[0, 1]` and `[1/φ, 1]` folded onto `[0, 1/φ]`.
    fn golden_tent() -> PiecewiseLinearMarkovMap {
        PiecewiseLinearMarkovMap::new(vec![0.0, 1.0 / PHI, 1.0], vec![PHI, -PHI], vec![vec![0, 1], vec![0]]).unwrap()
    }

    #[test]
    fn coding_examples() {
        let c = code(&PiecewiseLinearMarkovMap::doubling()).unwrap();
        assert_eq!(c.sft.transitions(), vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(c.potential.value(&[0]), Some(-(2f64.ln())));

        let c = code(&golden_tent()).unwrap();
        assert_eq!(c.sft.transitions(), Sft::golden_mean().transitions());

        let c = code(&PiecewiseLinearMarkovMap::middle_third()).unwrap();
        assert_eq!(c.sft.transitions(), vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(c.branches, vec![0, 2]);
        assert!((c.potential.value(&[1]).unwrap() + 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        let bad_len = PiecewiseLinearMarkovMap::new(vec![0.0, 0.5, 1.0], vec![2.0, 2.0], vec![vec![0, 1], vec![0]]);
        assert!(matches!(bad_len, Err(Error::NotMarkov { branch: 1, .. })));
        let slow = PiecewiseLinearMarkovMap::new(vec![0.0, 0.5, 1.0], vec![1.0, 2.0], vec![vec![0], vec![0, 1]]);
        assert!(matches!(slow, Err(Error::NotExpanding { branch: 0, .. })));
        let gapped = PiecewiseLinearMarkovMap::new(vec![0.0, 0.5, 1.0], vec![2.0, 2.0], vec![vec![0, 1], vec![0, 2]]);
        assert!(matches!(gapped, Err(Error::NotMarkov { .. })));
        assert!(PiecewiseLinearMarkovMap::new(vec![0.0, 0.6, 0.5, 1.0], vec![2.0; 3], vec![vec![0]; 3]).is_err());
    }

    #[test]
    fn cylinder_lengths_cover_the_survivors() {
        let doubling = PiecewiseLinearMarkovMap::doubling();
        let full = PiecewiseLinearMarkovMap::full_branches(&[2.0, 4.0, 4.0]).unwrap();
        for n in 1..=8 {
            assert!((surviving_length(&doubling, n, DEFAULT_BUDGET).unwrap() - 1.0).abs() < 1e-14);
            assert!((surviving_length(&full, n, DEFAULT_BUDGET).unwrap() - 1.0).abs() < 1e-14);
            let cantor = surviving_length(&PiecewiseLinearMarkovMap::middle_third(), n, DEFAULT_BUDGET).unwrap();
            assert!((cantor - (2.0f64 / 3.0).powi(n as i32)).abs() < 1e-14);
        }
        let g = golden_repeller();
        let lens: Vec<f64> = (1..=10).map(|n| surviving_length(&g, n, DEFAULT_BUDGET).unwrap()).collect();
        assert!(lens.windows(2).all(|w| w[1] < w[0]));
        // decay rate λ_golden / 2
        let rate = lens[9] / lens[8];
        assert!((rate - PHI / 2.0).abs() < 1e-3);
    }

    #[test]
    fn cylinder_length_matches_preimage_geometry() {
        let map = golden_tent();
        let c = code(&map).unwrap();
        // [0 1]: x in [0, 1/φ] with φx in [1/φ, 1], i.e. x in [1/φ², 1/φ]
        assert!((c.cylinder_length(&[0, 1]) - (1.0 / PHI - 1.0 / (PHI * PHI))).abs() < 1e-15);
        assert!((c.image_lengths()[1] - 1.0 / PHI).abs() < 1e-15);
        assert!((c.cylinder_length(&[1, 0]) - (1.0 - 1.0 / PHI)).abs() < 1e-15);
    }

    #[test]
    fn acim_examples() {
        let a = acim(&PiecewiseLinearMarkovMap::doubling(), 8, DEFAULT_BUDGET).unwrap();
        assert!(a.pressure.abs() < 1e-10);
        assert!((a.ratio_min - 1.0).abs() < 1e-12 && (a.ratio_max - 1.0).abs() < 1e-12);

        let full = PiecewiseLinearMarkovMap::full_branches(&[2.0, 4.0, 4.0]).unwrap();
        let a = acim(&full, 6, DEFAULT_BUDGET).unwrap();
        assert!(a.pressure.abs() < 1e-10);
        assert!((a.measure.cylinder(&[0]) - 0.5).abs() < 1e-12);
        assert!((a.measure.cylinder(&[2]) - 0.25).abs() < 1e-12);
        assert!((a.constant - 1.0).abs() < 1e-12);

        let a = acim(&golden_tent(), 8, DEFAULT_BUDGET).unwrap();
        assert!(a.pressure.abs() < 1e-10);
        assert!(a.ratio_min > 0.0 && a.constant < 2.0);

        match acim(&golden_repeller(), 4, DEFAULT_BUDGET) {
            Err(Error::IsRepeller(p)) => assert!((p - (PHI.ln() - 2f64.ln())).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bowen_examples() {
        let d = bowen_dimension(&PiecewiseLinearMarkovMap::middle_third()).unwrap();
        assert!((d.dimension - 2f64.ln() / 3f64.ln()).abs() < 1e-10);
        assert!(d.residual <= DIMENSION_TOL);

        let two_four = PiecewiseLinearMarkovMap::new(
            vec![0.0, 0.5, 0.75, 1.0],
            vec![2.0, 0.0, 4.0],
            vec![vec![0, 1, 2], vec![], vec![0, 1, 2]],
        )
        .unwrap();
        let d = bowen_dimension(&two_four).unwrap();
        assert!((d.dimension - PHI.log2()).abs() < 1e-10);
        assert!((d.dimension - 0.6942419).abs() < 1e-7);

        let d = bowen_dimension(&PiecewiseLinearMarkovMap::doubling()).unwrap();
        assert!((d.dimension - 1.0).abs() < 1e-10);

        let d = bowen_dimension(&golden_repeller()).unwrap();
        assert!((d.dimension - PHI.ln() / 2f64.ln()).abs() < 1e-10);
        assert!(d.bracket.0 <= d.dimension && d.dimension <= d.bracket.1);
    }

    #[test]
    fn dimension_is_stable_under_squaring() {
        for map in [PiecewiseLinearMarkovMap::middle_third(), golden_repeller(), golden_tent()] {
            let sq = map.square();
            let sq = PiecewiseLinearMarkovMap::new(sq.breakpoints.clone(), sq.slopes.clone(), sq.images.clone()).unwrap();
            let a = bowen_dimension(&map).unwrap().dimension;
            let b = bowen_dimension(&sq).unwrap().dimension;
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn square_of_doubling_is_quadrupling() {
        let sq = PiecewiseLinearMarkovMap::doubling().square();
        assert_eq!(sq.intervals(), 4);
        assert!(sq.slopes.iter().all(|&s| s == 4.0));
        assert!(sq.breakpoints.iter().zip([0.0, 0.25, 0.5, 0.75, 1.0]).all(|(a, b)| (a - b).abs() < 1e-15));
        assert!(sq.images.iter().all(|i| i == &vec![0, 1, 2, 3]));
        // the middle-third square has four branches of slope 9 and three gaps
        let c = PiecewiseLinearMarkovMap::middle_third().square();
        assert_eq!(c.branches().len(), 4);
        assert_eq!(c.intervals(), 7);
    }

    #[test]
    fn distortion_examples() {
        let d = distortion_certificate(&PiecewiseLinearMarkovMap::doubling(), 10, DEFAULT_BUDGET).unwrap();
        assert_eq!((d.min, d.max, d.constant), (1.0, 1.0, 1.0));
        let full = PiecewiseLinearMarkovMap::full_branches(&[2.0, 4.0, 4.0]).unwrap();
        let d = distortion_certificate(&full, 10, DEFAULT_BUDGET).unwrap();
        assert!((d.constant - 1.0).abs() < 1e-12);
        let d = distortion_certificate(&golden_tent(), 8, DEFAULT_BUDGET).unwrap();
        assert!((d.linear_min - 1.0).abs() < 1e-12 && (d.linear_max - 1.0).abs() < 1e-12);
        // the folded branch covers only [0, 1/φ]
        assert!((d.min - 1.0 / PHI).abs() < 1e-12 && (d.max - 1.0).abs() < 1e-12);
        assert!(matches!(distortion_certificate(&full, 40, 1000), Err(Error::DepthTooLarge { .. })));
    }

    #[test]
    fn dimension_matrix_radius_is_one_at_the_root() {
        let map = golden_repeller();
        let c = code(&map).unwrap();
        let s = bowen_dimension(&map).unwrap().dimension;
        let p = crate::linalg::perron(&dimension_matrix(&c, s), 1e-14, 100_000).unwrap();
        assert!((p.lambda - 1.0).abs() < 1e-11);
    }
}
