//! Synchronization-error channels built on constrained words.
//!
//! The read head of a shift-based memory emits, per position, the tuple of
//! the next `ell` symbols. Shift faults repeat a read (sticky insertion)
//! or skip reads (a burst of deletions). With `ell = k + b - 2` and a
//! (b,k)-constrained source, consecutive reads overlap enough to identify
//! the advance between them, which is what the decoder exploits.
//!
//! Submodules: [`decoder`] recovers words from corrupted read streams;
//! [`marker`] locates deletions against a known (b,1)-constrained marker;
//! [`erasure`] provides the pluggable erasure codes; [`product`] zips a
//! marker with an erasure codeword; [`racetrack`] combines a constrained
//! first segment with an erasure overlay across heads; [`rates`] evaluates
//! the achievable-rate formulas; [`sim`] runs seeded Monte-Carlo trials.

pub mod decoder;
pub mod erasure;
pub mod marker;
pub mod product;
pub mod racetrack;
pub mod rates;
pub mod sim;

pub use decoder::{decode_lsymbol, decode_lsymbol_interpretations, LsymbolDecode};
pub use erasure::{erasure_code_by_name, ErasureCode, GroupedRsErasure, RsErasure};
pub use marker::{correct_sticky_then_deletions, locate_deletions_b1, ErrorSets};
pub use product::{ProductCode, StickyMode};
pub use racetrack::{RacetrackCode, RacetrackLayout, RacetrackReads};
pub use rates::{achievable_rate, BoundSpec, RateModel};
pub use sim::{simulate_lsymbol, simulate_racetrack, SimulationManifest};

use std::io::Write;

use crate::error::{Error, Result};
use crate::words::Word;

/// Whether reads wrap past the end of the word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReadMode {
    Cyclic,
    Acyclic,
}

impl std::fmt::Display for ReadMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReadMode::Cyclic => write!(f, "cyclic"),
            ReadMode::Acyclic => write!(f, "acyclic"),
        }
    }
}

impl std::str::FromStr for ReadMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" => Ok(ReadMode::Cyclic),
            "acyclic" => Ok(ReadMode::Acyclic),
            other => Err(Error::InvalidInput(format!(
                "unknown read mode {other:?} (expected cyclic or acyclic)"
            ))),
        }
    }
}

/// A sequence of `ell`-symbol reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadVector {
    reads: Vec<Vec<u32>>,
    ell: usize,
}

impl ReadVector {
    pub fn new(reads: Vec<Vec<u32>>, ell: usize) -> Result<Self> {
        if reads.iter().any(|r| r.len() != ell) {
            return Err(Error::InvalidInput("all reads must have length ell".into()));
        }
        Ok(ReadVector { reads, ell })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    pub fn reads(&self) -> &[Vec<u32>] {
        &self.reads
    }

    /// Dump format: one read per line, tuple symbols space-separated.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        for read in &self.reads {
            let line: Vec<String> = read.iter().map(|s| s.to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// The read vector of a word: read i carries symbols i..i+ell-1, wrapping
/// around in cyclic mode and padding past the end in acyclic mode.
pub fn lsymbol_read(x: &Word, ell: usize, mode: ReadMode, pad: u32) -> Result<ReadVector> {
    if ell < 1 {
        return Err(Error::InvalidInput("ell must be at least 1".into()));
    }
    let sy = x.symbols();
    let n = sy.len();
    let reads = (0..n)
        .map(|i| {
            (0..ell)
                .map(|t| match mode {
                    ReadMode::Cyclic => sy[(i + t) % n],
                    ReadMode::Acyclic => {
                        if i + t < n {
                            sy[i + t]
                        } else {
                            pad
                        }
                    }
                })
                .collect()
        })
        .collect();
    Ok(ReadVector { reads, ell })
}

/// The synchronization-error model: per received read, the advance from
/// the previous read's source position. 0 repeats the previous read
/// (sticky insertion), 1 is a clean step, and j >= 2 skips j-1 reads (a
/// burst of j-1 deletions). Every advance is capped at b-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdvancePattern {
    pub advances: Vec<usize>,
    pub cyclic: bool,
}

impl AdvancePattern {
    pub fn new(advances: Vec<usize>, cyclic: bool) -> Self {
        AdvancePattern { advances, cyclic }
    }

    pub fn validate(&self, b: usize) -> Result<()> {
        if let Some(&a) = self.advances.iter().find(|&&a| a > b - 1) {
            return Err(Error::Domain(format!(
                "advance {a} outside the admissible range 0..{}",
                b - 1
            )));
        }
        Ok(())
    }

    /// 0-based source read index of each output read: the first output is
    /// the first source read, then each advance is applied in turn.
    pub fn positions(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.advances.len() + 1);
        let mut p = 0usize;
        out.push(p);
        for &a in &self.advances {
            p += a;
            out.push(p);
        }
        out
    }
}

/// Corrupt a read vector: emit the source reads selected by the advance
/// pattern. Cyclic positions wrap at most once around the source.
pub fn apply_advances(r: &ReadVector, a: &AdvancePattern, b: usize) -> Result<ReadVector> {
    a.validate(b)?;
    let n = r.len();
    if n == 0 {
        return Err(Error::InvalidInput("cannot corrupt an empty read vector".into()));
    }
    let mut reads = Vec::with_capacity(a.advances.len() + 1);
    for p in a.positions() {
        let idx = if a.cyclic {
            if p >= 2 * n {
                return Err(Error::Domain(
                    "advance pattern wraps around the source more than once".into(),
                ));
            }
            p % n
        } else {
            if p >= n {
                return Err(Error::Domain(format!(
                    "advance pattern runs past the {n} source reads"
                )));
            }
            p
        };
        reads.push(r.reads()[idx].clone());
    }
    ReadVector::new(reads, r.ell())
}
