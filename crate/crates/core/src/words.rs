//! Sequence types shared by every module: acyclic words, cyclic words, and
//! the line-oriented text format used by the CLI.
//!
//! Symbols are small unsigned integers `0..sigma`. Alphabets up to 2^16
//! symbols are supported, which covers every field and product alphabet
//! used elsewhere in the crate.

use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Largest supported alphabet size.
pub const MAX_SIGMA: u32 = 1 << 16;

/// An alphabet `{0, 1, .., sigma-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabet {
    sigma: u32,
}

impl Alphabet {
    pub fn new(sigma: u32) -> Result<Self> {
        if sigma < 2 {
            return Err(Error::InvalidInput(format!(
                "alphabet size must be at least 2, got {sigma}"
            )));
        }
        if sigma > MAX_SIGMA {
            return Err(Error::InvalidInput(format!(
                "alphabet size {sigma} exceeds the supported maximum {MAX_SIGMA}"
            )));
        }
        Ok(Alphabet { sigma })
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    /// Iterator over all words of length `n`, in lexicographic order.
    pub fn words(&self, n: usize) -> WordsIter {
        WordsIter {
            sigma: self.sigma,
            current: Some(vec![0; n]),
        }
    }
}

/// Lexicographic odometer over `Sigma^n`.
pub struct WordsIter {
    sigma: u32,
    current: Option<Vec<u32>>,
}

impl Iterator for WordsIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.take()?;
        let item = Word::from(cur.clone());
        let mut next = cur;
        let mut i = next.len();
        loop {
            if i == 0 {
                // odometer wrapped: iteration done
                self.current = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < self.sigma {
                self.current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(item)
    }
}

/// A finite sequence of symbols, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<u32>,
}

impl Word {
    pub fn new(symbols: Vec<u32>) -> Self {
        Word { symbols }
    }

    pub fn empty() -> Self {
        Word { symbols: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u32> {
        self.symbols
    }

    /// Largest symbol plus one, i.e. the smallest alphabet containing the word.
    pub fn min_sigma(&self) -> u32 {
        self.symbols.iter().max().map_or(0, |m| m + 1)
    }

    pub fn check_sigma(&self, sigma: u32) -> Result<()> {
        if let Some(&s) = self.symbols.iter().find(|&&s| s >= sigma) {
            return Err(Error::InvalidInput(format!(
                "symbol {s} out of alphabet 0..{sigma}"
            )));
        }
        Ok(())
    }

    /// Parse a line of the shared text format: base-10 symbols separated by
    /// single spaces.
    pub fn parse_line(line: &str) -> Result<Self> {
        let mut symbols = Vec::new();
        for tok in line.split_whitespace() {
            let v: u32 = tok
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad symbol {tok:?}")))?;
            symbols.push(v);
        }
        Ok(Word { symbols })
    }
}

impl From<Vec<u32>> for Word {
    fn from(symbols: Vec<u32>) -> Self {
        Word { symbols }
    }
}

impl From<&[u32]> for Word {
    fn from(symbols: &[u32]) -> Self {
        Word {
            symbols: symbols.to_vec(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.symbols {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        Ok(())
    }
}

/// A sequence read with wraparound. Two cyclic words compare equal when one
/// is a rotation of the other.
#[derive(Debug, Clone)]
pub struct CyclicWord {
    symbols: Vec<u32>,
}

impl CyclicWord {
    pub fn new(symbols: Vec<u32>) -> Self {
        CyclicWord { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    /// Symbol at position `i` taken modulo the length.
    pub fn at(&self, i: usize) -> u32 {
        self.symbols[i % self.symbols.len()]
    }

    /// The word as stored, without rotation.
    pub fn linearization(&self) -> Word {
        Word::new(self.symbols.clone())
    }

    /// Lexicographically least rotation. Equal for any two rotations of the
    /// same cyclic word, which makes it usable as a canonical form.
    pub fn canonical_rotation(&self) -> Word {
        if self.symbols.is_empty() {
            return Word::empty();
        }
        let n = self.symbols.len();
        let mut best = 0usize;
        for cand in 1..n {
            for off in 0..n {
                let a = self.symbols[(cand + off) % n];
                let b = self.symbols[(best + off) % n];
                if a < b {
                    best = cand;
                    break;
                }
                if a > b {
                    break;
                }
            }
        }
        let mut out = Vec::with_capacity(n);
        for off in 0..n {
            out.push(self.symbols[(best + off) % n]);
        }
        Word::new(out)
    }

    pub fn rotated(&self, by: usize) -> CyclicWord {
        let n = self.symbols.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.symbols[(i + by) % n]);
        }
        CyclicWord::new(out)
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.canonical_rotation() == other.canonical_rotation()
    }
}

impl Eq for CyclicWord {}

impl std::hash::Hash for CyclicWord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical_rotation().hash(state);
    }
}

impl From<Word> for CyclicWord {
    fn from(w: Word) -> Self {
        CyclicWord::new(w.into_symbols())
    }
}

/// Result of reading a word file: the words plus the alphabet size from an
/// optional `# sigma=<n>` header line.
pub struct WordFile {
    pub words: Vec<Word>,
    pub sigma: Option<u32>,
}

/// Read the shared text format: one word per line, symbols separated by
/// single spaces, optional `# sigma=<n>` header. Blank lines are skipped.
pub fn read_words<R: BufRead>(reader: R) -> Result<WordFile> {
    let mut words = Vec::new();
    let mut sigma = None;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("sigma=") {
                sigma = Some(v.trim().parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("bad sigma header {rest:?}"),
                })?);
            }
            continue;
        }
        let w = Word::parse_line(trimmed).map_err(|e| Error::Parse {
            line: idx + 1,
            msg: e.to_string(),
        })?;
        words.push(w);
    }
    Ok(WordFile { words, sigma })
}

/// Write words in the shared text format.
pub fn write_words<W: Write>(mut out: W, sigma: Option<u32>, words: &[Word]) -> Result<()> {
    if let Some(s) = sigma {
        writeln!(out, "# sigma={s}")?;
    }
    for w in words {
        writeln!(out, "{w}")?;
    }
    Ok(())
}
