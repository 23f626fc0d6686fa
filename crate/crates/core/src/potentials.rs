//! Observables on a subshift: locally constant tables, variation bounds,
//! Birkhoff sums over cylinders, and higher-block recoding to range 2.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::sft::{Alphabet, Sft, Word};

/// An observable whose oscillation over cylinders can be bounded and whose
/// Birkhoff sums over a cylinder can be bracketed exactly.
pub trait Observable {
    /// Upper bound on `sup |φ(x) - φ(y)|` over `x, y` agreeing on `k` symbols.
    fn var_k(&self, k: usize) -> f64;

    /// `sup` of `S_nφ` over the cylinder of `word` (`n = word.len()`).
    fn birkhoff_sup(&self, word: &[usize]) -> f64;

    /// `inf` of `S_nφ` over the cylinder of `word`.
    fn birkhoff_inf(&self, word: &[usize]) -> f64;

    /// `Σ_{j=1..n} var_j`, which bounds `sup - inf` of `S_nφ` on any `n`-cylinder.
    fn slack_bound(&self, n: usize) -> f64 {
        (1..=n).map(|j| self.var_k(j)).sum()
    }

    fn birkhoff(&self, word: &[usize]) -> BirkhoffSum {
        let value = self.birkhoff_sup(word);
        let slack = value - self.birkhoff_inf(word);
        BirkhoffSum { word: Word(word.to_vec()), value, slack }
    }
}

/// Birkhoff sum over a cylinder under the sup tail convention.
#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffSum {
    pub word: Word,
    pub value: f64,
    /// Every point of the cylinder has `S_nφ` in `[value - slack, value]`.
    pub slack: f64,
}

/// `φ` depending on the first `range` symbols, stored for every admissible `range`-word.
#[derive(Debug, Clone, PartialEq)]
pub struct LocallyConstantPotential {
    sft: Sft,
    range: usize,
    /// Indexed by the base-m code of the word; `None` for inadmissible words.
    values: Vec<Option<f64>>,
}

fn code(word: &[usize], m: usize) -> usize {
    word.iter().fold(0, |c, &s| c * m + s)
}

impl LocallyConstantPotential {
    /// Tabulates `f` on all admissible words of length `range`.
    pub fn from_fn(sft: &Sft, range: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        if range == 0 {
            return Err(Error::Invalid("potential range must be at least 1".into()));
        }
        let m = sft.size();
        let len = m
            .checked_pow(range as u32)
            .filter(|&l| l <= 1 << 26)
            .ok_or_else(|| Error::Invalid(format!("range {range} table is too large")))?;
        let mut values = vec![None; len];
        sft.for_each_word(range, |w| values[code(w, m)] = Some(f(w)));
        Ok(LocallyConstantPotential { sft: sft.clone(), range, values })
    }

    /// Builds from an explicit table, which must cover exactly the admissible words.
    pub fn from_table(sft: &Sft, range: usize, table: &HashMap<Word, f64>) -> Result<Self> {
        for (w, v) in table {
            if w.len() != range {
                return Err(Error::Invalid(format!("word {w} does not have length {range}")));
            }
            if !sft.is_admissible(w.symbols()) {
                return Err(Error::Invalid(format!("word {w} is not admissible")));
            }
            if !v.is_finite() {
                return Err(Error::Invalid(format!("value for word {w} is not finite")));
            }
        }
        let mut missing = None;
        let pot = Self::from_fn(sft, range, |w| match table.get(&Word(w.to_vec())) {
            Some(&v) => v,
            None => {
                missing.get_or_insert_with(|| Word(w.to_vec()));
                0.0
            }
        })?;
        match missing {
            Some(w) => Err(Error::Invalid(format!(
                "table has no value for admissible word {}",
                sft.alphabet().spell(w.symbols())
            ))),
            None => Ok(pot),
        }
    }

    pub fn zero(sft: &Sft) -> Self {
        Self::constant(sft, 0.0)
    }

    pub fn constant(sft: &Sft, c: f64) -> Self {
        Self::from_fn(sft, 1, |_| c).expect("range 1")
    }

    /// Range-1 potential with one value per symbol.
    pub fn per_symbol(sft: &Sft, values: &[f64]) -> Result<Self> {
        if values.len() != sft.size() {
            return Err(Error::Invalid("one value per symbol expected".into()));
        }
        Self::from_fn(sft, 1, |w| values[w[0]])
    }

    /// Nearest-neighbour coupling `φ(a, b) = spin(a)·spin(b)`.
    pub fn spin_products(sft: &Sft, spins: &[f64]) -> Result<Self> {
        if spins.len() != sft.size() {
            return Err(Error::Invalid("one spin per symbol expected".into()));
        }
        Self::from_fn(sft, 2, |w| spins[w[0]] * spins[w[1]])
    }

    /// Full shift on `{-, +}` with the Ising coupling `φ(a, b) = ab`.
    pub fn ising() -> (Sft, Self) {
        let sft = Sft::from_fn(Alphabet::new(["-", "+"]).unwrap(), |_, _| true).unwrap();
        let pot = Self::spin_products(&sft, &[-1.0, 1.0]).unwrap();
        (sft, pot)
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn range(&self) -> usize {
        self.range
    }

    /// Value on an admissible `range`-word.
    pub fn value(&self, word: &[usize]) -> Option<f64> {
        if word.len() != self.range || word.iter().any(|&s| s >= self.sft.size()) {
            return None;
        }
        self.values[code(word, self.sft.size())]
    }

    /// `(word, value)` for every admissible `range`-word, lexicographically.
    pub fn table(&self) -> Vec<(Word, f64)> {
        self.sft
            .cylinders(self.range)
            .map(|w| {
                let v = self.value(w.symbols()).expect("admissible");
                (w, v)
            })
            .collect()
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        LocallyConstantPotential {
            sft: self.sft.clone(),
            range: self.range,
            values: self.values.iter().map(|v| v.map(&f)).collect(),
        }
    }

    /// `βφ`
    pub fn scaled(&self, beta: f64) -> Self {
        self.map(|v| beta * v)
    }

    /// `φ + c`
    pub fn shifted(&self, c: f64) -> Self {
        self.map(|v| v + c)
    }

    /// The same function viewed as depending on `range` symbols.
    pub fn with_range(&self, range: usize) -> Result<Self> {
        if range < self.range {
            return Err(Error::Invalid("cannot lower the range of a potential".into()));
        }
        let r = self.range;
        Self::from_fn(&self.sft, range, |w| self.value(&w[..r]).expect("admissible prefix"))
    }

    /// `φ + ψ` on the same shift.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.sft != other.sft {
            return Err(Error::Invalid("potentials live on different shifts".into()));
        }
        let r = self.range.max(other.range);
        let a = self.with_range(r)?;
        let b = other.with_range(r)?;
        Ok(LocallyConstantPotential {
            sft: self.sft.clone(),
            range: r,
            values: a.values.iter().zip(&b.values).map(|(x, y)| x.zip(*y).map(|(x, y)| x + y)).collect(),
        })
    }

    /// Largest and smallest value.
    pub fn extremes(&self) -> (f64, f64) {
        self.values.iter().flatten().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
    }

    /// Extreme `S_nφ` over continuations of `word` by `range - 1` admissible symbols.
    fn birkhoff_extreme(&self, word: &[usize], better: impl Fn(f64, f64) -> bool) -> f64 {
        let n = word.len();
        let r = self.range;
        if n == 0 {
            return 0.0;
        }
        // windows fully inside the word
        let inner_end = (n + 1).saturating_sub(r);
        let fixed: f64 =
            (0..inner_end).map(|i| self.value(&word[i..i + r]).expect("admissible window")).sum();
        if r == 1 {
            return fixed;
        }
        let start = inner_end;
        let mut ext: Vec<usize> = word[start..].to_vec();
        let keep = ext.len();
        let mut best: Option<f64> = None;
        self.visit_tails(&mut ext, keep + r - 1, &mut |ext| {
            let s: f64 = (0..keep).map(|i| self.value(&ext[i..i + r]).expect("admissible")).sum();
            if best.is_none_or(|b| better(s, b)) {
                best = Some(s);
            }
        });
        fixed + best.expect("every symbol has a successor")
    }

    fn visit_tails(&self, ext: &mut Vec<usize>, target: usize, f: &mut impl FnMut(&[usize])) {
        if ext.len() == target {
            f(ext);
            return;
        }
        let last = *ext.last().expect("nonempty");
        for b in 0..self.sft.size() {
            if self.sft.allows(last, b) {
                ext.push(b);
                self.visit_tails(ext, target, f);
                ext.pop();
            }
        }
    }

    /// Higher-block presentation on `(range-1)`-words with a range-2 potential.
    /// Identity when the range is at most 2.
    pub fn recode_range2(&self) -> Recoding {
        if self.range <= 2 {
            let blocks = self.sft.cylinders(1).collect();
            return Recoding::new(self.sft.clone(), self.clone(), 1, blocks);
        }
        let block = self.range - 1;
        let blocks: Vec<Word> = self.sft.cylinders(block).collect();
        let labels: Vec<String> = blocks.iter().map(|w| self.sft.alphabet().spell(w.symbols())).collect();
        let alphabet = Alphabet::new(labels)
            .or_else(|_| Alphabet::numeric(blocks.len()))
            .expect("at least two blocks");
        let sft = Sft::from_fn(alphabet, |i, j| {
            let (a, b) = (blocks[i].symbols(), blocks[j].symbols());
            a[1..] == b[..block - 1] && self.sft.allows(a[block - 1], b[block - 1])
        })
        .expect("higher block shift has no stranded symbols");
        let potential = LocallyConstantPotential::from_fn(&sft, 2, |w| {
            let mut full = blocks[w[0]].symbols().to_vec();
            full.push(*blocks[w[1]].symbols().last().expect("nonempty block"));
            self.value(&full).expect("admissible")
        })
        .expect("range 2");
        Recoding::new(sft, potential, block, blocks)
    }
}

impl Observable for LocallyConstantPotential {
    fn var_k(&self, k: usize) -> f64 {
        if k >= self.range {
            return 0.0;
        }
        let m = self.sft.size();
        let group = m.pow((self.range - k) as u32);
        let mut spread: HashMap<usize, (f64, f64)> = HashMap::new();
        for (c, v) in self.values.iter().enumerate() {
            if let Some(v) = v {
                let e = spread.entry(c / group).or_insert((*v, *v));
                e.0 = e.0.min(*v);
                e.1 = e.1.max(*v);
            }
        }
        spread.values().fold(0.0, |m, (lo, hi)| m.max(hi - lo))
    }

    fn birkhoff_sup(&self, word: &[usize]) -> f64 {
        self.birkhoff_extreme(word, |a, b| a > b)
    }

    fn birkhoff_inf(&self, word: &[usize]) -> f64 {
        self.birkhoff_extreme(word, |a, b| a < b)
    }
}

/// `βφ` for an arbitrary observable; sup and inf swap when `β < 0`.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<'a, O: ?Sized> {
    inner: &'a O,
    beta: f64,
}

impl<'a, O: Observable + ?Sized> Scaled<'a, O> {
    pub fn new(inner: &'a O, beta: f64) -> Self {
        Scaled { inner, beta }
    }
}

impl<O: Observable + ?Sized> Observable for Scaled<'_, O> {
    fn var_k(&self, k: usize) -> f64 {
        self.beta.abs() * self.inner.var_k(k)
    }

    fn birkhoff_sup(&self, word: &[usize]) -> f64 {
        if self.beta >= 0.0 {
            self.beta * self.inner.birkhoff_sup(word)
        } else {
            self.beta * self.inner.birkhoff_inf(word)
        }
    }

    fn birkhoff_inf(&self, word: &[usize]) -> f64 {
        if self.beta >= 0.0 {
            self.beta * self.inner.birkhoff_inf(word)
        } else {
            self.beta * self.inner.birkhoff_sup(word)
        }
    }
}

/// Result of higher-block recoding: shift on blocks, range-2 potential, and
/// the translation between words of the two shifts.
#[derive(Debug, Clone)]
pub struct Recoding {
    pub sft: Sft,
    pub potential: LocallyConstantPotential,
    /// Block length; 1 when no recoding took place.
    pub block: usize,
    blocks: Vec<Word>,
    index: HashMap<Vec<usize>, usize>,
}

impl Recoding {
    fn new(sft: Sft, potential: LocallyConstantPotential, block: usize, blocks: Vec<Word>) -> Self {
        let index = blocks.iter().enumerate().map(|(i, w)| (w.0.clone(), i)).collect();
        Recoding { sft, potential, block, blocks, index }
    }

    /// The block word of an original word of length at least `block`.
    pub fn lift(&self, word: &[usize]) -> Option<Vec<usize>> {
        if word.len() < self.block {
            return None;
        }
        word.windows(self.block).map(|w| self.index.get(w).copied()).collect()
    }

    /// The original word spelled by a block word.
    pub fn project(&self, blocks: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(blocks.len() + self.block - 1);
        if let Some(&first) = blocks.first() {
            out.extend_from_slice(self.blocks[first].symbols());
            for &b in &blocks[1..] {
                out.push(*self.blocks[b].symbols().last().expect("nonempty block"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variation_examples() {
        let (_, ising) = LocallyConstantPotential::ising();
        assert_eq!(ising.var_k(1), 2.0);
        assert_eq!(ising.var_k(2), 0.0);
        let g = Sft::golden_mean();
        let one = LocallyConstantPotential::per_symbol(&g, &[0.3, -1.0]).unwrap();
        assert_eq!(one.var_k(1), 0.0);
    }

    #[test]
    fn variation_is_nonincreasing_and_vanishes_at_range() {
        let sft = Sft::full_shift(3);
        let pot = LocallyConstantPotential::from_fn(&sft, 3, |w| {
            (w[0] as f64) - 0.5 * (w[1] as f64) + 0.25 * (w[2] as f64 * w[0] as f64)
        })
        .unwrap();
        let vars: Vec<f64> = (1..6).map(|k| pot.var_k(k)).collect();
        assert!(vars.windows(2).all(|w| w[1] <= w[0]));
        assert!(vars[1] > 0.0 && vars[2] == 0.0);
    }

    #[test]
    fn birkhoff_sup_examples() {
        let g = Sft::golden_mean();
        let zero = LocallyConstantPotential::zero(&g);
        assert_eq!(zero.birkhoff_sup(&[0, 1, 0, 0]), 0.0);
        let (_, ising) = LocallyConstantPotential::ising();
        assert_eq!(ising.birkhoff_sup(&[1, 1, 1]), 3.0);
        assert_eq!(ising.birkhoff_inf(&[1, 1, 1]), 1.0);
        let b = ising.birkhoff(&[1, 0, 1]);
        assert_eq!(b.value, -1.0);
        assert_eq!(b.slack, 2.0);
        assert!(b.slack <= ising.slack_bound(3));
    }

    #[test]
    fn table_must_cover_admissible_words() {
        let g = Sft::golden_mean();
        let mut t = HashMap::new();
        t.insert(Word(vec![0, 0]), 1.0);
        t.insert(Word(vec![0, 1]), 1.0);
        assert!(LocallyConstantPotential::from_table(&g, 2, &t).is_err());
        t.insert(Word(vec![1, 0]), 2.0);
        let p = LocallyConstantPotential::from_table(&g, 2, &t).unwrap();
        assert_eq!(p.value(&[1, 0]), Some(2.0));
        assert_eq!(p.value(&[1, 1]), None);
        t.insert(Word(vec![1, 1]), 2.0);
        assert!(LocallyConstantPotential::from_table(&g, 2, &t).is_err());
    }

    #[test]
    fn recoding_examples() {
        let (sft, ising) = LocallyConstantPotential::ising();
        let same = ising.recode_range2();
        assert_eq!(same.block, 1);
        assert_eq!(same.sft, sft);

        let full = Sft::full_shift(2);
        let p3 = LocallyConstantPotential::from_fn(&full, 3, |w| w.iter().sum::<usize>() as f64).unwrap();
        let rec = p3.recode_range2();
        assert_eq!(rec.sft.size(), 4);
        assert_eq!(rec.sft.transition_count(), 8);

        let g = Sft::golden_mean();
        let g3 = LocallyConstantPotential::from_fn(&g, 3, |w| w[0] as f64 - w[2] as f64).unwrap();
        let rec = g3.recode_range2();
        assert_eq!(rec.sft.alphabet().labels(), ["00", "01", "10"]);
        assert_eq!(rec.sft.transition_count(), 5);
        let lifted = rec.lift(&[0, 1, 0, 0]).unwrap();
        assert_eq!(rec.project(&lifted), vec![0, 1, 0, 0]);
        assert_eq!(rec.potential.value(&lifted[..2]), g3.value(&[0, 1, 0]));
    }

    #[test]
    fn arithmetic() {
        let (_, ising) = LocallyConstantPotential::ising();
        let c = LocallyConstantPotential::constant(ising.sft(), 0.5);
        let sum = ising.add(&c).unwrap();
        assert_eq!(sum.range(), 2);
        assert_eq!(sum.value(&[0, 1]), Some(-0.5));
        assert_eq!(ising.scaled(2.0).shifted(1.0).value(&[1, 1]), Some(3.0));
    }
}
