//! Recovering a constrained word from a corrupted read stream.
//!
//! Between two consecutive received reads the source advanced by some
//! j in 0..b-1. For a (b,k)-constrained source with ell = k+b-2 the
//! overlap of the two reads pins j down: the k-symbol prefix of the next
//! read must match the current read at offset j, and two such offsets
//! would mean two equal k-windows at distance below b. Near the padded
//! tail of an acyclic word that uniqueness can lapse, so the decoder
//! explores every consistent alignment and only reports success when the
//! surviving interpretations agree on the word.

use crate::constraint::{is_constrained_acyclic, is_constrained_cyclic, ConstraintParams};
use crate::error::{Error, Result};
use crate::words::{CyclicWord, Word};

use super::{ReadMode, ReadVector};

/// A decoded word together with the inferred source position of every
/// received read (0-based). Positions are what downstream consumers need
/// to turn deletions into erasures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LsymbolDecode {
    pub word: Word,
    pub positions: Vec<usize>,
}

const MAX_INTERPRETATIONS: usize = 128;
const MAX_SEARCH_NODES: usize = 200_000;

struct Search<'a> {
    reads: &'a [Vec<u32>],
    n: usize,
    b: usize,
    ell: usize,
    cyclic: bool,
    pad: u32,
    c: ConstraintParams,
    known: Vec<Option<u32>>,
    positions: Vec<usize>,
    out: Vec<LsymbolDecode>,
    nodes: usize,
    /// deepest read the search managed to align, for error reporting
    deepest: usize,
}

impl<'a> Search<'a> {
    /// Read-only version of [`place`](Self::place).
    fn consistent(&self, p: usize, read: &[u32]) -> bool {
        for (t, &sym) in read.iter().enumerate() {
            let q = p + t;
            let idx = if self.cyclic {
                q % self.n
            } else if q >= self.n {
                if sym != self.pad {
                    return false;
                }
                continue;
            } else {
                q
            };
            match self.known[idx] {
                Some(v) if v != sym => return false,
                _ => {}
            }
        }
        true
    }

    /// Check read content against everything known at position `p`; on
    /// success write the new symbols and return the indices written.
    fn place(&mut self, p: usize, read: &[u32]) -> Option<Vec<usize>> {
        let mut written = Vec::new();
        for (t, &sym) in read.iter().enumerate() {
            let q = p + t;
            let idx = if self.cyclic {
                q % self.n
            } else if q >= self.n {
                if sym != self.pad {
                    for &w in &written {
                        self.known[w] = None;
                    }
                    return None;
                }
                continue;
            } else {
                q
            };
            match self.known[idx] {
                Some(v) if v == sym => {}
                Some(_) => {
                    for &w in &written {
                        self.known[w] = None;
                    }
                    return None;
                }
                None => {
                    self.known[idx] = Some(sym);
                    written.push(idx);
                }
            }
        }
        Some(written)
    }

    fn unplace(&mut self, written: &[usize]) {
        for &w in written {
            self.known[w] = None;
        }
    }

    fn finalize(&mut self) -> Result<()> {
        let p_last = *self.positions.last().expect("at least one read");
        if self.cyclic {
            // the gap that closes the loop is one clean step plus at most
            // b-2 deleted reads
            let wrap = self.n - p_last;
            if !(1..=self.b - 1).contains(&wrap) {
                return Ok(());
            }
        } else {
            // trailing deleted reads form a burst of at most b-2
            let trailing = (self.n - 1).saturating_sub(p_last);
            if trailing > self.b - 2 {
                return Ok(());
            }
        }
        if self.known.iter().any(|s| s.is_none()) {
            return Ok(());
        }
        let word = Word::new(self.known.iter().map(|s| s.unwrap()).collect());
        let valid = if self.cyclic {
            is_constrained_cyclic(&CyclicWord::new(word.symbols().to_vec()), &self.c)?
        } else {
            is_constrained_acyclic(&word, &self.c)?
        };
        if valid {
            self.out.push(LsymbolDecode {
                word,
                positions: self.positions.clone(),
            });
        }
        Ok(())
    }

    fn explore(&mut self, next_read: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > MAX_SEARCH_NODES {
            return Err(Error::Resource(
                "alignment search exceeded its node budget".into(),
            ));
        }
        if self.out.len() >= MAX_INTERPRETATIONS {
            return Ok(());
        }
        if next_read == self.reads.len() {
            return self.finalize();
        }
        self.deepest = self.deepest.max(next_read);
        let p = *self.positions.last().expect("at least one read");
        let reads = self.reads;
        let read = &reads[next_read];

        // Advances up to b-2 leave a full k-window in the overlap with the
        // previous read, so their check is decisive: for a constrained
        // source at most one of them fits, and if the true advance is b-1
        // none of them does. The b-1 advance only overlaps k-1 symbols,
        // so it is tried when no full match exists. Inside the padded
        // tail, where windows may collide, both routes are explored.
        //
        // Order is by plausibility (clean step, re-read, bursts) so the
        // first complete interpretation is the natural one.
        let mut candidates: Vec<usize> = Vec::new();
        for j in std::iter::once(1).chain(std::iter::once(0)).chain(2..=self.b.saturating_sub(2)) {
            if j > self.b - 2 || p + j >= self.n {
                continue;
            }
            if self.consistent(p + j, read) {
                candidates.push(j);
            }
        }
        let in_padded_tail = !self.cyclic && p + self.ell >= self.n;
        if (candidates.is_empty() || in_padded_tail) && p + self.b - 1 < self.n {
            candidates.push(self.b - 1);
        }

        for j in candidates {
            let q = p + j;
            if let Some(written) = self.place(q, read) {
                self.positions.push(q);
                self.explore(next_read + 1)?;
                self.positions.pop();
                self.unplace(&written);
            }
        }
        Ok(())
    }
}

/// Every consistent interpretation of the received reads: inferred
/// positions plus the word they reconstruct, where the word satisfies the
/// constraint and the alignment respects the error model. With a valid
/// source the true interpretation is always among them.
pub fn decode_lsymbol_interpretations(
    r: &ReadVector,
    n: usize,
    c: &ConstraintParams,
    mode: ReadMode,
    pad: u32,
) -> Result<Vec<LsymbolDecode>> {
    search_interpretations(r, n, c, mode, pad).map(|(out, _)| out)
}

fn search_interpretations(
    r: &ReadVector,
    n: usize,
    c: &ConstraintParams,
    mode: ReadMode,
    pad: u32,
) -> Result<(Vec<LsymbolDecode>, usize)> {
    if c.b < 2 {
        return Err(Error::Domain("the decoder needs b >= 2".into()));
    }
    if r.ell() != c.k + c.b - 2 {
        return Err(Error::Domain(format!(
            "ell must equal k + b - 2 = {}, got {}",
            c.k + c.b - 2,
            r.ell()
        )));
    }
    let cyclic = mode == ReadMode::Cyclic;
    if cyclic && r.ell() > n {
        return Err(Error::Domain("cyclic decoding needs ell <= n".into()));
    }
    if r.is_empty() {
        return Err(Error::Decode("no reads received".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("word length must be positive".into()));
    }

    let mut search = Search {
        reads: r.reads(),
        n,
        b: c.b,
        ell: r.ell(),
        cyclic,
        pad,
        c: *c,
        known: vec![None; n],
        positions: Vec::with_capacity(r.len()),
        out: Vec::new(),
        nodes: 0,
        deepest: 0,
    };
    // the first read anchors the coordinate system; in acyclic mode it is
    // assumed error-free
    if search.place(0, &r.reads()[0]).is_some() {
        search.positions.push(0);
        search.explore(1)?;
    }
    Ok((search.out, search.deepest))
}

/// Recover the stored word from a corrupted read stream.
///
/// Fails when no interpretation fits the error model, or when several fit
/// but disagree on the word; a disagreement means the reads were corrupted
/// beyond the model, and the decoder never silently picks one.
pub fn decode_lsymbol(
    r: &ReadVector,
    n: usize,
    c: &ConstraintParams,
    mode: ReadMode,
    pad: u32,
) -> Result<LsymbolDecode> {
    let (interps, deepest) = search_interpretations(r, n, c, mode, pad)?;
    let Some(first) = interps.first() else {
        return Err(Error::Decode(format!(
            "no valid offset aligns received read {deepest} with its predecessor"
        )));
    };
    if interps.iter().any(|i| i.word != first.word) {
        return Err(Error::Decode(
            "reads admit conflicting reconstructions; corrupted beyond the model".into(),
        ));
    }
    Ok(first.clone())
}
