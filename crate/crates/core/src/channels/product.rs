//! Zipping a marker word with an erasure codeword.
//!
//! Each stored symbol is a pair (data symbol, marker symbol) over the
//! product alphabet q2 * q1. Shift errors hit both tracks identically, so
//! the marker track reveals where symbols were re-read or deleted; the
//! deletions then become erasures at known positions for the data track.

use crate::constraint::{is_constrained_acyclic, ConstraintParams};
use crate::error::{Error, Result};
use crate::words::Word;

use super::erasure::ErasureCode;
use super::marker::{correct_sticky_then_deletions, locate_deletions_b1, ErrorSets};

/// Which error regime the decoder assumes. Deletion bursts of length up
/// to b-1 are locatable on their own; tolerating sticky insertions costs
/// one burst symbol, capping bursts at b-2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StickyMode {
    DeletionsOnly,
    WithSticky,
}

/// The marker-and-erasure product code.
pub struct ProductCode {
    marker: Word,
    b: usize,
    q1: u32,
    mode: StickyMode,
    code: Box<dyn ErasureCode>,
}

impl ProductCode {
    pub fn new(
        marker: Word,
        b: usize,
        q1: u32,
        mode: StickyMode,
        code: Box<dyn ErasureCode>,
    ) -> Result<Self> {
        if (q1 as usize) < b {
            return Err(Error::InvalidInput(format!(
                "marker alphabet q1={q1} cannot carry a ({b},1) constraint"
            )));
        }
        if marker.len() != code.length() {
            return Err(Error::InvalidInput(format!(
                "marker length {} does not match the code length {}",
                marker.len(),
                code.length()
            )));
        }
        let c = ConstraintParams::new(b, 1, q1)?;
        if !is_constrained_acyclic(&marker, &c)? {
            return Err(Error::InvalidInput(format!(
                "marker word is not ({b},1)-constrained"
            )));
        }
        Ok(ProductCode {
            marker,
            b,
            q1,
            mode,
            code,
        })
    }

    /// The default marker: 0,1,..,b-1 repeating, which keeps any b
    /// consecutive symbols distinct.
    pub fn cyclic_marker(b: usize, q1: u32, len: usize) -> Word {
        Word::new((0..len).map(|i| (i % b.max(1)) as u32 % q1).collect())
    }

    pub fn length(&self) -> usize {
        self.code.length()
    }

    pub fn data_len(&self) -> usize {
        self.code.data_len()
    }

    /// Product alphabet size q1 * q2.
    pub fn product_alphabet(&self) -> u32 {
        self.q1 * self.code.alphabet()
    }

    fn zip(&self, data_sym: u32, marker_sym: u32) -> u32 {
        data_sym * self.q1 + marker_sym
    }

    fn unzip(&self, f: u32) -> (u32, u32) {
        (f / self.q1, f % self.q1)
    }

    /// Encode a message: erasure-encode, then pair each code symbol with
    /// the marker symbol at its position.
    pub fn encode(&self, data: &Word) -> Result<Word> {
        let coded = self.code.encode(data)?;
        Ok(Word::new(
            coded
                .symbols()
                .iter()
                .zip(self.marker.symbols())
                .map(|(&c, &s)| self.zip(c, s))
                .collect(),
        ))
    }

    /// Decode a received stream of product symbols, returning the message
    /// and the located error sets.
    pub fn decode(&self, received: &Word) -> Result<(Word, ErrorSets)> {
        received.check_sigma(self.product_alphabet())?;
        let (data_track, marker_track): (Vec<u32>, Vec<u32>) =
            received.symbols().iter().map(|&f| self.unzip(f)).unzip();

        let sets = match self.mode {
            StickyMode::DeletionsOnly => {
                locate_deletions_b1(&self.marker, &Word::new(marker_track), self.b)?
            }
            StickyMode::WithSticky => {
                correct_sticky_then_deletions(&self.marker, &Word::new(marker_track), self.b)?
            }
        };

        // strip the extra copies from the data track, then spread the
        // survivors over their positions with erasures at the deletions
        let mut stream = data_track;
        if self.mode == StickyMode::WithSticky {
            let mut dedup = Vec::with_capacity(stream.len());
            let mut last_marker: Option<u32> = None;
            for (i, &d) in stream.iter().enumerate() {
                let m = received.symbols()[i] % self.q1;
                if last_marker == Some(m) {
                    continue;
                }
                last_marker = Some(m);
                dedup.push(d);
            }
            stream = dedup;
        }
        let deleted: std::collections::HashSet<usize> =
            sets.deletions.iter().copied().collect();
        let mut columns: Vec<Option<u32>> = Vec::with_capacity(self.length());
        let mut it = stream.into_iter();
        for pos in 1..=self.length() {
            if deleted.contains(&pos) {
                columns.push(None);
            } else {
                columns.push(Some(it.next().ok_or_else(|| {
                    Error::Decode("received stream shorter than the located survivors".into())
                })?));
            }
        }
        if it.next().is_some() {
            return Err(Error::Decode(
                "received stream longer than the located survivors".into(),
            ));
        }
        Ok((self.code.decode(&columns)?, sets))
    }
}
