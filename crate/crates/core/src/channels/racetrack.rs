//! Shift-error correction for multi-head racetrack memories.
//!
//! The memory stores m segments of n cells; every head reads its own
//! segment, and all heads shift together, so one advance pattern corrupts
//! all streams identically. Secondary heads next to the first one turn
//! segment 1 into an acyclic ell-symbol read channel: decoding it
//! recovers both the segment and the advance pattern, which converts the
//! other segments' deletions into erasures for the overlay code.

use num_bigint::BigUint;

use crate::constraint::ConstraintParams;
use crate::enumeration::CodeIndex;
use crate::error::{Error, Result};
use crate::words::Word;

use super::decoder::decode_lsymbol_interpretations;
use super::erasure::ErasureCode;
use super::{AdvancePattern, ReadMode, ReadVector};

/// Geometry of the memory: m primary heads over segments of n cells, plus
/// extra secondary heads next to the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RacetrackLayout {
    pub heads: usize,
    pub segment_len: usize,
    pub extra_heads: usize,
}

impl RacetrackLayout {
    pub fn new(heads: usize, segment_len: usize, extra_heads: usize) -> Result<Self> {
        if heads < 2 || segment_len < 1 {
            return Err(Error::InvalidInput(
                "a racetrack layout needs at least two heads and one cell per segment".into(),
            ));
        }
        Ok(RacetrackLayout {
            heads,
            segment_len,
            extra_heads,
        })
    }

    pub fn total_cells(&self) -> usize {
        self.heads * self.segment_len
    }
}

/// What the heads deliver after a (possibly faulty) pass: the stacked
/// ell-symbol reads of segment 1 and the raw streams of the other heads.
#[derive(Debug, Clone)]
pub struct RacetrackReads {
    pub segment1: ReadVector,
    /// `rows[i]` is the stream of head i+2 (0-based over the m-1 others)
    pub rows: Vec<Vec<u32>>,
}

/// Binary racetrack code: segment 1 carries a (b,k)-constrained word
/// selected by index, segments 2..m carry an erasure codeword over the
/// column alphabet 2^(m-1).
pub struct RacetrackCode {
    layout: RacetrackLayout,
    c: ConstraintParams,
    index: CodeIndex,
    code: Box<dyn ErasureCode>,
    pad: u32,
}

impl RacetrackCode {
    pub fn new(
        layout: RacetrackLayout,
        c: ConstraintParams,
        code: Box<dyn ErasureCode>,
        pad: u32,
    ) -> Result<Self> {
        if c.sigma != 2 {
            return Err(Error::InvalidInput("racetrack cells are binary".into()));
        }
        let ell = c.k + c.b - 2;
        if layout.extra_heads + 1 != ell {
            return Err(Error::InvalidInput(format!(
                "ell = k + b - 2 = {ell} requires {} extra heads, layout has {}",
                ell - 1,
                layout.extra_heads
            )));
        }
        if code.length() != layout.segment_len {
            return Err(Error::InvalidInput(format!(
                "erasure code length {} does not match the segment length {}",
                code.length(),
                layout.segment_len
            )));
        }
        let q2 = 1u32 << (layout.heads - 1);
        if code.alphabet() != q2 {
            return Err(Error::InvalidInput(format!(
                "erasure code alphabet {} does not match the column alphabet {q2}",
                code.alphabet()
            )));
        }
        let index = CodeIndex::new(layout.segment_len, &c)?;
        Ok(RacetrackCode {
            layout,
            c,
            index,
            code,
            pad,
        })
    }

    pub fn layout(&self) -> RacetrackLayout {
        self.layout
    }

    /// Number of selectable first segments.
    pub fn segment1_count(&self) -> BigUint {
        self.index.count()
    }

    pub fn data_len(&self) -> usize {
        self.code.data_len()
    }

    /// Store a codeword: segment 1 is the seg1_index-th constrained word,
    /// the remaining segments hold the erasure-coded data column-wise.
    pub fn encode(&self, seg1_index: &BigUint, data: &Word) -> Result<Word> {
        let n = self.layout.segment_len;
        let seg1 = self.index.unrank(seg1_index)?;
        let coded = self.code.encode(data)?;
        let mut cells = Vec::with_capacity(self.layout.total_cells());
        cells.extend_from_slice(seg1.symbols());
        // column j holds the base-2 digits of the j-th code symbol,
        // one digit per remaining head
        for head in 0..self.layout.heads - 1 {
            for j in 0..n {
                cells.push((coded.symbols()[j] >> head) & 1);
            }
        }
        Ok(Word::new(cells))
    }

    /// Simulate one pass of all heads under a shared advance pattern.
    pub fn read(&self, stored: &Word, pattern: &AdvancePattern) -> Result<RacetrackReads> {
        pattern.validate(self.c.b)?;
        let n = self.layout.segment_len;
        if stored.len() != self.layout.total_cells() {
            return Err(Error::InvalidInput("stored word has the wrong cell count".into()));
        }
        let ell = self.layout.extra_heads + 1;
        let positions = pattern.positions();
        if positions.iter().any(|&p| p >= n) {
            return Err(Error::Domain("advance pattern runs past the segment".into()));
        }
        let seg1 = Word::new(stored.symbols()[..n].to_vec());
        let base = super::lsymbol_read(&seg1, ell, ReadMode::Acyclic, self.pad)?;
        let reads: Vec<Vec<u32>> = positions
            .iter()
            .map(|&p| base.reads()[p].clone())
            .collect();
        let rows: Vec<Vec<u32>> = (0..self.layout.heads - 1)
            .map(|head| {
                positions
                    .iter()
                    .map(|&p| stored.symbols()[(head + 1) * n + p])
                    .collect()
            })
            .collect();
        Ok(RacetrackReads {
            segment1: ReadVector::new(reads, ell)?,
            rows,
        })
    }

    /// Recover the stored information from the head outputs. Tries every
    /// alignment the first segment admits and keeps the first one that is
    /// consistent with all other heads and the erasure code.
    pub fn decode(&self, reads: &RacetrackReads) -> Result<(BigUint, Word)> {
        let n = self.layout.segment_len;
        let interps =
            decode_lsymbol_interpretations(&reads.segment1, n, &self.c, ReadMode::Acyclic, self.pad)?;
        if interps.is_empty() {
            return Err(Error::Decode(
                "segment 1 admits no alignment within the error model".into(),
            ));
        }
        let mut last_err = None;
        'interp: for interp in &interps {
            // assemble the received columns at the inferred positions
            let mut columns: Vec<Option<u32>> = vec![None; n];
            for (read_idx, &p) in interp.positions.iter().enumerate() {
                let mut value = 0u32;
                for (head, row) in reads.rows.iter().enumerate() {
                    value |= (row[read_idx] & 1) << head;
                }
                match columns[p] {
                    // a re-read column must repeat identically
                    Some(v) if v != value => {
                        last_err = Some(Error::Decode(
                            "re-read columns disagree across heads".into(),
                        ));
                        continue 'interp;
                    }
                    _ => columns[p] = Some(value),
                }
            }
            match self.code.decode(&columns) {
                Ok(data) => {
                    let seg1_index = self.index.rank(&interp.word)?;
                    return Ok((seg1_index, data));
                }
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap_or_else(|| Error::Decode("no consistent interpretation".into())))
    }
}
