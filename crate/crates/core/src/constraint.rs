//! The (b,k) constraint and its equivalent presentations.
//!
//! A word is (b,k)-constrained when no two of its k-windows at distance at
//! most b-1 coincide, i.e. every b consecutive windows of length k are
//! pairwise distinct. The same language can be described through periods
//! (no substring of period p and length p+k for any p < b) or through a
//! finite forbidden-pattern family, and the three descriptions are
//! interchangeable; the enumeration and automaton modules lean on that.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::words::{CyclicWord, Word};

/// Parameters (b, k) of the window constraint together with the alphabet
/// size. `b = 1` means unconstrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstraintParams {
    pub b: usize,
    pub k: usize,
    pub sigma: u32,
}

impl ConstraintParams {
    pub fn new(b: usize, k: usize, sigma: u32) -> Result<Self> {
        if b < 1 || k < 1 {
            return Err(Error::InvalidInput(format!(
                "constraint parameters must satisfy b >= 1 and k >= 1, got b={b} k={k}"
            )));
        }
        if !(2..=crate::words::MAX_SIGMA).contains(&sigma) {
            return Err(Error::InvalidInput(format!("unsupported alphabet size {sigma}")));
        }
        Ok(ConstraintParams { b, k, sigma })
    }
}

/// True iff the k-windows of `s` at distance at most b-1 are pairwise
/// distinct. Words shorter than k are vacuously constrained.
pub fn is_constrained_acyclic(s: &Word, c: &ConstraintParams) -> Result<bool> {
    s.check_sigma(c.sigma)?;
    let sy = s.symbols();
    let n = sy.len();
    if n < c.k {
        return Ok(true);
    }
    let windows = n - c.k + 1;
    for i in 0..windows {
        let hi = (i + c.b - 1).min(windows - 1);
        for j in i + 1..=hi {
            if sy[i..i + c.k] == sy[j..j + c.k] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Cyclic variant: every pair of cyclic k-windows whose cyclic distance is
/// at most b-1 must differ. Windows wrap around, also when k exceeds the
/// length of the word.
pub fn is_constrained_cyclic(s: &CyclicWord, c: &ConstraintParams) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::InvalidInput("empty cyclic word".into()));
    }
    s.linearization().check_sigma(c.sigma)?;
    let n = s.len();
    let window = |start: usize| -> Vec<u32> { (0..c.k).map(|t| s.at(start + t)).collect() };
    for i in 0..n {
        for d in 1..c.b.min(n) {
            let j = (i + d) % n;
            // each unordered pair is visited twice; harmless
            if window(i) == window(j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Least p >= 1 with `s[i] = s[i+p]` wherever both indices exist; equals the
/// length when no smaller period works.
pub fn period_of(s: &Word) -> Result<usize> {
    let sy = s.symbols();
    let n = sy.len();
    if n == 0 {
        return Err(Error::InvalidInput("period of the empty word is undefined".into()));
    }
    'outer: for p in 1..n {
        for i in 0..n - p {
            if sy[i] != sy[i + p] {
                continue 'outer;
            }
        }
        return Ok(p);
    }
    Ok(n)
}

/// True iff `s` satisfies period `p` in the window sense (every `s[i]`
/// equals `s[i+p]` where both exist). Vacuously true for short words.
fn has_period(sy: &[u32], p: usize) -> bool {
    if sy.len() <= p {
        return true;
    }
    (0..sy.len() - p).all(|i| sy[i] == sy[i + p])
}

/// Maximum substring length `m` allowed for substrings of period `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpParams {
    pub m: usize,
    pub p: usize,
}

impl LpParams {
    pub fn new(m: usize, p: usize) -> Result<Self> {
        if p < 1 || m < p {
            return Err(Error::InvalidInput(format!(
                "limited-period parameters must satisfy m >= p >= 1, got m={m} p={p}"
            )));
        }
        Ok(LpParams { m, p })
    }
}

/// True iff every substring of `s` having period `lp.p` has length at most
/// `lp.m`; equivalently, no window of length m+1 has period p.
pub fn is_lp_member(s: &Word, lp: &LpParams) -> bool {
    let sy = s.symbols();
    let n = sy.len();
    if n <= lp.m {
        return true;
    }
    for i in 0..=n - (lp.m + 1) {
        if has_period(&sy[i..i + lp.m + 1], lp.p) {
            return false;
        }
    }
    true
}

/// A finite set of forbidden patterns over a common alphabet.
///
/// Kept sorted for deterministic iteration. The empty pattern is legal and
/// forbids every word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    patterns: BTreeSet<Word>,
    pub sigma: u32,
}

impl PatternSet {
    pub fn new(patterns: impl IntoIterator<Item = Word>, sigma: u32) -> Self {
        PatternSet {
            patterns: patterns.into_iter().collect(),
            sigma,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.patterns.contains(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.patterns.iter()
    }

    /// True when the empty pattern is present, i.e. nothing avoids the set.
    pub fn forbids_everything(&self) -> bool {
        self.patterns.iter().any(|p| p.is_empty())
    }

    pub fn max_len(&self) -> usize {
        self.patterns.iter().map(|p| p.len()).max().unwrap_or(0)
    }
}

/// The forbidden family of the (b,k) constraint: for each p in 1..b the
/// words of length p+k whose least period is exactly p. Using the least
/// period keeps the union free of duplicates; a word whose period divides p
/// already contains the shorter family member.
pub fn forbidden_family(c: &ConstraintParams) -> PatternSet {
    let mut patterns = BTreeSet::new();
    if c.b >= 2 {
        for p in 1..c.b {
            // a period-p word of length p+k is determined by its first p symbols
            let mut stem = vec![0u32; p];
            loop {
                let ext: Vec<u32> = (0..p + c.k).map(|i| stem[i % p]).collect();
                let w = Word::new(ext);
                if period_of(&w).expect("nonempty") == p {
                    patterns.insert(w);
                }
                // odometer over the stem
                let mut i = p;
                loop {
                    if i == 0 {
                        stem.clear();
                        break;
                    }
                    i -= 1;
                    stem[i] += 1;
                    if stem[i] < c.sigma {
                        break;
                    }
                    stem[i] = 0;
                }
                if stem.is_empty() {
                    break;
                }
            }
        }
    }
    PatternSet {
        patterns,
        sigma: c.sigma,
    }
}

/// Reduce a forbidden set: replace every complete sibling family
/// `{u0, u1, .., u(sigma-1)}` by `u`, drop patterns that contain another
/// pattern as a substring, and repeat to a fixpoint.
///
/// Every avoider of the reduced set avoids the original. The converse can
/// fail only for dead ends: a word avoiding the original but not the
/// reduced set carries a collapsed stem as a suffix, so none of its long
/// extensions avoids the original either. Growth rates and automata are
/// therefore unaffected, and for the (b,k) families sibling collapse
/// never applies at all (the periodic completion of a stem is unique), so
/// there the avoiding sets agree exactly.
pub fn reduce_forbidden(f: &PatternSet) -> PatternSet {
    let sigma = f.sigma;
    let mut set: BTreeSet<Word> = f.patterns.clone();
    loop {
        let mut changed = false;

        // sibling replacement, repeated: a complete family {u a : a in
        // Sigma} collapses to u and may enable further collapses
        'siblings: loop {
            let snapshot: Vec<Word> = set.iter().cloned().collect();
            for w in &snapshot {
                if w.is_empty() || !set.contains(w) {
                    continue;
                }
                let stem = &w.symbols()[..w.len() - 1];
                let family: Vec<Word> = (0..sigma)
                    .map(|a| {
                        let mut v = stem.to_vec();
                        v.push(a);
                        Word::new(v)
                    })
                    .collect();
                if family.iter().all(|m| set.contains(m)) {
                    for m in &family {
                        set.remove(m);
                    }
                    set.insert(Word::new(stem.to_vec()));
                    changed = true;
                    continue 'siblings;
                }
            }
            break;
        }

        // subsumption: a pattern containing another pattern is redundant
        let snapshot: Vec<Word> = set.iter().cloned().collect();
        for w in &snapshot {
            if set.contains(w)
                && snapshot
                    .iter()
                    .any(|u| u != w && set.contains(u) && contains_subword(w, u))
            {
                set.remove(w);
                changed = true;
            }
        }

        if !changed {
            return PatternSet { patterns: set, sigma };
        }
    }
}

fn contains_subword(haystack: &Word, needle: &Word) -> bool {
    let h = haystack.symbols();
    let n = needle.symbols();
    if n.is_empty() {
        return true;
    }
    if n.len() > h.len() {
        return false;
    }
    (0..=h.len() - n.len()).any(|i| &h[i..i + n.len()] == n)
}

/// True iff no pattern of `f` occurs as a contiguous substring of `s`. The
/// empty pattern occurs in every word, including the empty one.
pub fn avoids(s: &Word, f: &PatternSet) -> bool {
    !f.patterns.iter().any(|p| contains_subword(s, p))
}
