//! Topological Markov chains: admissible words, cylinders, periodic points
//! and topological entropy.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, BoolMatrix, Matrix};

/// Default cap on the number of cylinders any enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Ordered symbol labels; a symbol is identified by its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::Invalid("alphabet needs at least two symbols".into()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::Invalid("empty symbol label".into()));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate symbol label {l:?}")));
            }
        }
        Ok(Alphabet { labels, index })
    }

    /// Labels `0, 1, …, m-1`.
    pub fn numeric(m: usize) -> Result<Self> {
        Self::new((0..m).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Concatenated labels of a word.
    pub fn spell(&self, word: &[usize]) -> String {
        word.iter().map(|&s| self.label(s)).collect()
    }

    /// Splits a concatenation of labels back into symbols. Fails if the
    /// string has no decomposition or more than one.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        // parses[i] = decompositions of s[i..], capped at 2
        let bytes = s.len();
        let mut count = vec![0u8; bytes + 1];
        let mut next: Vec<Option<(usize, usize)>> = vec![None; bytes + 1];
        count[bytes] = 1;
        for i in (0..bytes).rev() {
            if !s.is_char_boundary(i) {
                continue;
            }
            for (sym, l) in self.labels.iter().enumerate() {
                if s[i..].starts_with(l.as_str()) && count[i + l.len()] > 0 {
                    count[i] = (count[i] + count[i + l.len()]).min(2);
                    next[i] = Some((sym, i + l.len()));
                }
            }
        }
        match count[0] {
            0 => Err(Error::Invalid(format!("{s:?} is not a word over the alphabet"))),
            1 => {
                let mut out = Vec::new();
                let mut i = 0;
                while i < bytes {
                    let (sym, j) = next[i].expect("decomposition exists");
                    out.push(sym);
                    i = j;
                }
                Ok(Word(out))
            }
            _ => Err(Error::Invalid(format!("{s:?} splits into symbols ambiguously"))),
        }
    }
}

/// A finite sequence of symbol indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Result of the mixing check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixingReport {
    pub primitive: bool,
    /// Least power with all entries positive.
    pub p0: Option<usize>,
}

/// One-sided subshift of finite type given by a 0/1 transition matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sft {
    alphabet: Alphabet,
    allowed: Vec<bool>,
}

impl Sft {
    /// Builds the shift; every symbol must have a successor and a predecessor.
    pub fn new(alphabet: Alphabet, transitions: &[Vec<u8>]) -> Result<Self> {
        let m = alphabet.len();
        if transitions.len() != m || transitions.iter().any(|r| r.len() != m) {
            return Err(Error::Invalid(format!("transition matrix must be {m}x{m}")));
        }
        let mut allowed = Vec::with_capacity(m * m);
        for row in transitions {
            for &e in row {
                match e {
                    0 => allowed.push(false),
                    1 => allowed.push(true),
                    _ => return Err(Error::Invalid("transition entries must be 0/1".into())),
                }
            }
        }
        let sft = Sft { alphabet, allowed };
        sft.check_rows_and_columns()?;
        Ok(sft)
    }

    pub fn from_fn(alphabet: Alphabet, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let m = alphabet.len();
        let rows: Vec<Vec<u8>> =
            (0..m).map(|a| (0..m).map(|b| u8::from(f(a, b))).collect()).collect();
        Sft::new(alphabet, &rows)
    }

    pub fn full_shift(m: usize) -> Self {
        Sft::from_fn(Alphabet::numeric(m).expect("m >= 2"), |_, _| true).expect("full shift")
    }

    /// The shift forbidding the factor `11`.
    pub fn golden_mean() -> Self {
        Sft::new(Alphabet::numeric(2).unwrap(), &[vec![1, 1], vec![1, 0]]).unwrap()
    }

    fn check_rows_and_columns(&self) -> Result<()> {
        let m = self.size();
        for a in 0..m {
            if !(0..m).any(|b| self.allows(a, b)) {
                return Err(Error::ZeroRowOrColumn { symbol: a, side: "successor" });
            }
            if !(0..m).any(|b| self.allows(b, a)) {
                return Err(Error::ZeroRowOrColumn { symbol: a, side: "predecessor" });
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn allows(&self, a: usize, b: usize) -> bool {
        self.allowed[a * self.size() + b]
    }

    pub fn transitions(&self) -> Vec<Vec<u8>> {
        let m = self.size();
        (0..m).map(|a| (0..m).map(|b| u8::from(self.allows(a, b))).collect()).collect()
    }

    pub fn transition_count(&self) -> usize {
        self.allowed.iter().filter(|&&x| x).count()
    }

    /// The transition matrix as reals.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_fn(self.size(), |a, b| if self.allows(a, b) { 1.0 } else { 0.0 })
    }

    pub fn is_admissible(&self, word: &[usize]) -> bool {
        word.iter().all(|&s| s < self.size()) && word.windows(2).all(|w| self.allows(w[0], w[1]))
    }

    /// Primitivity check up to the Wielandt bound `(m-1)² + 1`.
    pub fn validate(&self) -> Result<MixingReport> {
        self.check_rows_and_columns()?;
        let m = self.size();
        let base = BoolMatrix::from_fn(m, |a, b| self.allows(a, b));
        let bound = (m - 1) * (m - 1) + 1;
        let mut power = base.clone();
        for p in 1..=bound {
            if power.all_set() {
                return Ok(MixingReport { primitive: true, p0: Some(p) });
            }
            power = power.mul(&base);
        }
        Ok(MixingReport { primitive: false, p0: None })
    }

    pub(crate) fn require_primitive(&self) -> Result<()> {
        if self.validate()?.primitive {
            Ok(())
        } else {
            Err(Error::NotPrimitive)
        }
    }

    fn int_power(&self, n: usize) -> Result<Vec<u128>> {
        let m = self.size();
        let base: Vec<u128> = self.allowed.iter().map(|&x| u128::from(x)).collect();
        let mul = |x: &[u128], y: &[u128]| -> Result<Vec<u128>> {
            let mut out = vec![0u128; m * m];
            for i in 0..m {
                for k in 0..m {
                    let a = x[i * m + k];
                    if a == 0 {
                        continue;
                    }
                    for j in 0..m {
                        let prod = a.checked_mul(y[k * m + j]).ok_or(Error::Overflow("matrix power"))?;
                        out[i * m + j] =
                            out[i * m + j].checked_add(prod).ok_or(Error::Overflow("matrix power"))?;
                    }
                }
            }
            Ok(out)
        };
        let mut acc: Vec<u128> = (0..m * m).map(|k| u128::from(k / m == k % m)).collect();
        let mut b = base;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(&acc, &b)?;
            }
            e >>= 1;
            if e > 0 {
                b = mul(&b, &b)?;
            }
        }
        Ok(acc)
    }

    /// Number of admissible words of length `n`, the entry sum of `M^{n-1}`.
    pub fn word_count(&self, n: usize) -> Result<u128> {
        if n == 0 {
            return Ok(1);
        }
        self.int_power(n - 1)?
            .iter()
            .try_fold(0u128, |s, &x| s.checked_add(x))
            .ok_or(Error::Overflow("word count"))
    }

    /// Number of admissible words of length `n` starting with `first`.
    pub fn word_count_from(&self, first: usize, n: usize) -> Result<u128> {
        let m = self.size();
        let p = self.int_power(n.saturating_sub(1))?;
        p[first * m..(first + 1) * m]
            .iter()
            .try_fold(0u128, |s, &x| s.checked_add(x))
            .ok_or(Error::Overflow("word count"))
    }

    /// Errors with `DepthTooLarge` unless the `n`-cylinders fit in `budget`.
    pub fn check_budget(&self, n: usize, budget: u64) -> Result<u128> {
        let count = self.word_count(n).unwrap_or(u128::MAX);
        if count > u128::from(budget) {
            Err(Error::DepthTooLarge { depth: n, count, budget })
        } else {
            Ok(count)
        }
    }

    /// Admissible words of length `n` in lexicographic order.
    pub fn cylinders(&self, n: usize) -> Cylinders<'_> {
        Cylinders::new(self, n, None)
    }

    /// Admissible words of length `n` beginning with `first`.
    pub fn cylinders_from(&self, first: usize, n: usize) -> Cylinders<'_> {
        Cylinders::new(self, n, Some(first))
    }

    /// Visits every admissible `n`-word in lexicographic order without allocating per word.
    pub fn for_each_word(&self, n: usize, mut f: impl FnMut(&[usize])) {
        let mut it = self.cylinders(n);
        while let Some(w) = it.advance() {
            f(w);
        }
    }

    /// Fixed points of `σⁿ`, i.e. `trace(Mⁿ)`.
    pub fn periodic_count(&self, n: usize) -> Result<u128> {
        if n == 0 {
            return Err(Error::Invalid("period must be at least 1".into()));
        }
        let m = self.size();
        let p = self.int_power(n)?;
        (0..m)
            .map(|i| p[i * m + i])
            .try_fold(0u128, |s, x| s.checked_add(x))
            .ok_or(Error::Overflow("periodic count"))
    }

    /// `log` of the spectral radius of the transition matrix, in nats.
    pub fn topological_entropy(&self) -> Result<f64> {
        self.require_primitive()?;
        let eig = linalg::perron(&self.matrix(), 1e-13, 1_000_000)?;
        Ok(eig.lambda.ln())
    }
}

/// Depth-first lexicographic stream of admissible words; memory `O(n·m)`.
pub struct Cylinders<'a> {
    sft: &'a Sft,
    n: usize,
    word: Vec<usize>,
    started: bool,
    done: bool,
    fixed_first: Option<usize>,
}

impl<'a> Cylinders<'a> {
    fn new(sft: &'a Sft, n: usize, fixed_first: Option<usize>) -> Self {
        let done = n == 0 || fixed_first.is_some_and(|f| f >= sft.size());
        Cylinders { sft, n, word: Vec::with_capacity(n), started: false, done, fixed_first }
    }

    fn successor_from(&self, prev: Option<usize>, start: usize) -> Option<usize> {
        (start..self.sft.size()).find(|&b| prev.is_none_or(|a| self.sft.allows(a, b)))
    }

    /// Extends the current prefix with the smallest admissible choices.
    fn fill(&mut self) -> bool {
        while self.word.len() < self.n {
            let prev = self.word.last().copied();
            match self.successor_from(prev, 0) {
                Some(b) => self.word.push(b),
                // unreachable: every symbol has a successor
                None => return false,
            }
        }
        true
    }

    /// Moves to the next word and borrows it.
    pub fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.word.push(self.fixed_first.unwrap_or(0));
            self.fill();
            return Some(&self.word);
        }
        loop {
            let last = match self.word.pop() {
                Some(l) => l,
                None => {
                    self.done = true;
                    return None;
                }
            };
            if self.word.is_empty() && self.fixed_first.is_some() {
                self.done = true;
                return None;
            }
            let prev = self.word.last().copied();
            if let Some(b) = self.successor_from(prev, last + 1) {
                self.word.push(b);
                self.fill();
                return Some(&self.word);
            }
        }
    }
}

impl Iterator for Cylinders<'_> {
    type Item = Word;
    fn next(&mut self) -> Option<Word> {
        self.advance().map(|w| Word(w.to_vec()))
    }
}
