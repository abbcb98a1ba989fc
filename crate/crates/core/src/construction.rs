//! Codes with a large constrained segment, built from m-sequences.
//!
//! Concatenating m-sequences of degree k over F_q, each padded with a short
//! run of zeroes, yields (q^k-1, 2k)-constrained words: windows of length
//! 2k identify their source sequence because any 2k-tuple appears in at
//! most one m-sequence, and the zero runs at the junctions are too short
//! to fake the unique in-sequence run of k-1 zeroes. Each block carries
//! log2(M) bits where M = phi(q^k-1)(k+2)/k.
//!
//! The same recipe works for any family of cycles that pairwise share no
//! long window; the independent-set search at the bottom of the module
//! looks for such families among all de Bruijn cycles of a given order.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{
    canonicalize_msequence, enumerate_primitive_polys, field_of_order, lfsr_msequence, Field,
};
use crate::words::{CyclicWord, Word};

/// One block choice: a primitive generator polynomial (low-to-high
/// coefficients) and the length of the zero run appended after its
/// m-sequence, at most k+1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction1Choice {
    pub blocks: Vec<(Vec<u32>, usize)>,
}

/// The m-sequence concatenation code for fixed (q, k).
pub struct Construction1 {
    field: Field,
    k: usize,
    generators: Vec<Vec<u32>>,
    mseqs: Vec<Word>,
}

impl Construction1 {
    /// Requires k >= 3: with shorter windows the zero runs at block
    /// junctions could collide with in-sequence runs.
    pub fn new(q: u32, k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::Domain(format!(
                "the construction is stated for k >= 3, got k={k}"
            )));
        }
        let field = field_of_order(q)?;
        let generators = enumerate_primitive_polys(&field, k)?;
        if generators.is_empty() {
            return Err(Error::Domain(format!("no primitive polynomials for q={q} k={k}")));
        }
        let mseqs = generators
            .iter()
            .map(|g| Ok(canonicalize_msequence(&lfsr_msequence(&field, g)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Construction1 {
            field,
            k,
            generators,
            mseqs,
        })
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn msequences(&self) -> &[Word] {
        &self.mseqs
    }

    /// Number of distinct single-block words `(m-sequence, zero run)`.
    pub fn block_choices(&self) -> usize {
        self.generators.len() * (self.k + 2)
    }

    /// Code size M^ell.
    pub fn code_size(&self, ell: usize) -> BigUint {
        BigUint::from(self.block_choices()).pow(ell as u32)
    }

    /// Least and greatest codeword lengths for ell blocks.
    pub fn length_bounds(&self, ell: usize) -> (usize, usize) {
        let qk = (self.q() as usize).pow(self.k as u32);
        (ell * (qk - 1), ell * (qk + self.k))
    }

    fn resolve(&self, choice: &Construction1Choice) -> Result<Vec<(usize, usize)>> {
        if choice.blocks.is_empty() {
            return Err(Error::InvalidInput("a codeword needs at least one block".into()));
        }
        choice
            .blocks
            .iter()
            .map(|(poly, eps)| {
                let norm = self.field.poly_normalize(poly.clone());
                let idx = self
                    .generators
                    .iter()
                    .position(|g| *g == norm)
                    .ok_or_else(|| {
                        Error::Domain(format!(
                            "generator {} is not primitive of degree {} over F_{}",
                            crate::gf::format_poly_text(poly),
                            self.k,
                            self.q()
                        ))
                    })?;
                if *eps > self.k + 1 {
                    return Err(Error::Domain(format!(
                        "zero run {eps} exceeds the maximum {}",
                        self.k + 1
                    )));
                }
                Ok((idx, *eps))
            })
            .collect()
    }

    /// Concatenate the chosen blocks: `s_1 0^e1 s_2 0^e2 .. s_l 0^el`.
    pub fn encode(&self, choice: &Construction1Choice) -> Result<Word> {
        let blocks = self.resolve(choice)?;
        Ok(self.encode_indices(&blocks))
    }

    /// Same as [`encode`](Self::encode) with blocks given as
    /// (generator index, zero run) pairs.
    pub fn encode_indices(&self, blocks: &[(usize, usize)]) -> Word {
        let mut out = Vec::new();
        for &(gen, eps) in blocks {
            out.extend_from_slice(self.mseqs[gen].symbols());
            out.extend(std::iter::repeat_n(0, eps));
        }
        Word::new(out)
    }

    /// Decode a code index into ell blocks: mixed radix with the first
    /// block most significant; within a block the generator index is the
    /// major digit and the zero run the minor one.
    pub fn index_to_blocks(&self, ell: usize, index: &BigUint) -> Result<Vec<(usize, usize)>> {
        if *index >= self.code_size(ell) {
            return Err(Error::Domain(format!(
                "index {index} out of range for {} codewords",
                self.code_size(ell)
            )));
        }
        let m = BigUint::from(self.block_choices());
        let mut digits = vec![0usize; ell];
        let mut rest = index.clone();
        for slot in digits.iter_mut().rev() {
            let digit = &rest % &m;
            rest /= &m;
            *slot = digit.to_u32_digits().first().copied().unwrap_or(0) as usize;
        }
        Ok(digits
            .into_iter()
            .map(|d| (d / (self.k + 2), d % (self.k + 2)))
            .collect())
    }

    /// The lexicographically least maximal-length codeword of ell blocks:
    /// the least m-sequence with the longest zero run, repeated. Its
    /// length is exactly ell (q^k + k), so its prefixes extend any
    /// codeword.
    pub fn reference_word(&self, ell: usize) -> Word {
        let least = self
            .mseqs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.cmp(b))
            .map(|(i, _)| i)
            .expect("at least one generator");
        let blocks: Vec<(usize, usize)> = (0..ell).map(|_| (least, self.k + 1)).collect();
        self.encode_indices(&blocks)
    }

    /// Fixed-length codeword: emit the indexed choice, then extend with a
    /// prefix of the reference codeword to exactly ell (q^k + k) symbols.
    pub fn encode_fixed_length(&self, ell: usize, index: &BigUint) -> Result<Word> {
        let blocks = self.index_to_blocks(ell, index)?;
        let mut out = self.encode_indices(&blocks).into_symbols();
        let target = self.length_bounds(ell).1;
        let reference = self.reference_word(ell);
        let deficit = target - out.len();
        out.extend_from_slice(&reference.symbols()[..deficit]);
        Ok(Word::new(out))
    }

    /// Cyclic codeword: the zero runs must sum to floor(ell (k+1) / 2) so
    /// that all cyclic codewords share one length.
    pub fn encode_cyclic(&self, choice: &Construction1Choice) -> Result<CyclicWord> {
        let blocks = self.resolve(choice)?;
        let needed = choice.blocks.len() * (self.k + 1) / 2;
        let total: usize = blocks.iter().map(|&(_, e)| e).sum();
        if total != needed {
            return Err(Error::Domain(format!(
                "cyclic codewords need zero runs summing to {needed}, got {total}"
            )));
        }
        Ok(CyclicWord::new(self.encode_indices(&blocks).into_symbols()))
    }
}

/// All de Bruijn cycles of order k over a binary-sized alphabet, one per
/// rotation class, found by depth-first search for Hamiltonian cycles in
/// the order-k de Bruijn graph. Each cycle is emitted starting at the
/// all-zero k-tuple.
pub fn enumerate_de_bruijn_cycles(sigma: u32, k: usize) -> Result<Vec<CyclicWord>> {
    let n = (sigma as u64)
        .checked_pow(k as u32)
        .filter(|&n| n <= 64)
        .ok_or_else(|| {
            Error::Resource(format!(
                "de Bruijn cycle enumeration is limited to sigma^k <= 64, got {sigma}^{k}"
            ))
        })? as usize;
    let sigma = sigma as usize;
    let tail = n / sigma;

    let mut cycles = Vec::new();
    let mut path = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    path.push(0usize);
    visited[0] = true;

    // iterative DFS: stack of (vertex, next symbol to try)
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    while let Some(top) = stack.last_mut() {
        let v = top.0;
        if path.len() == n {
            // must close back to the all-zero vertex
            if v % tail == 0 {
                let word: Vec<u32> = path.iter().map(|&u| (u / tail) as u32).collect();
                cycles.push(CyclicWord::new(word));
            }
            stack.pop();
            path.pop();
            visited[v] = false;
            continue;
        }
        if top.1 == sigma {
            stack.pop();
            path.pop();
            visited[v] = false;
            continue;
        }
        let next = (v % tail) * sigma + top.1;
        top.1 += 1;
        if !visited[next] {
            visited[next] = true;
            path.push(next);
            stack.push((next, 0));
        }
    }
    Ok(cycles)
}

/// Find a large set of de Bruijn cycles of order k such that no two share
/// a cyclic window longer than k + delta, by greedy selection plus a
/// 1-out-2-in local search over the conflict graph. Deterministic for a
/// fixed seed.
pub fn db_independent_set(
    sigma: u32,
    k: usize,
    delta: usize,
    seed: u64,
) -> Result<Vec<CyclicWord>> {
    let cycles = enumerate_de_bruijn_cycles(sigma, k)?;
    let window = k + delta + 1;
    let n = cycles.len();

    // conflict graph: an edge when two cycles share a window of length
    // k + delta + 1 (sharing anything longer implies sharing one of these)
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, c) in cycles.iter().enumerate() {
        let mut seen = HashSet::new();
        for start in 0..c.len() {
            let mut code = 0u64;
            for t in 0..window {
                code = code * sigma as u64 + c.at(start + t) as u64;
            }
            if seen.insert(code) {
                buckets.entry(code).or_default().push(i);
            }
        }
    }
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    for members in buckets.values() {
        for (ai, &a) in members.iter().enumerate() {
            for &b in &members[ai + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<usize> = Vec::new();
    let restarts = 40;
    for _round in 0..restarts {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);

        // greedy: repeatedly take a minimum-degree vertex of the residual graph
        let mut alive: Vec<bool> = vec![true; n];
        let mut degree: Vec<usize> = adj.iter().map(|s| s.len()).collect();
        let mut solution = Vec::new();
        loop {
            let mut pick = None;
            for &v in &order {
                if alive[v] && pick.is_none_or(|p: usize| degree[v] < degree[p]) {
                    pick = Some(v);
                }
            }
            let Some(v) = pick else { break };
            solution.push(v);
            alive[v] = false;
            for &u in &adj[v] {
                if alive[u] {
                    alive[u] = false;
                    for &w in &adj[u] {
                        degree[w] = degree[w].saturating_sub(1);
                    }
                }
            }
        }

        // local search: drop one chosen cycle, insert two compatible ones
        let mut improved = true;
        while improved {
            improved = false;
            let chosen: HashSet<usize> = solution.iter().copied().collect();
            'swap: for (si, &v) in solution.iter().enumerate() {
                // vertices compatible with everything except v
                let mut cands: Vec<usize> = (0..n)
                    .filter(|&u| {
                        !chosen.contains(&u)
                            && u != v
                            && solution
                                .iter()
                                .all(|&w| w == v || !adj[u].contains(&w))
                    })
                    .collect();
                cands.shuffle(&mut rng);
                for (ci, &a) in cands.iter().enumerate() {
                    for &b in &cands[ci + 1..] {
                        if !adj[a].contains(&b) {
                            solution.remove(si);
                            solution.push(a);
                            solution.push(b);
                            improved = true;
                            break 'swap;
                        }
                    }
                }
            }
        }

        if solution.len() > best.len() {
            best = solution;
        }
    }

    best.sort_unstable();
    Ok(best.into_iter().map(|i| cycles[i].clone()).collect())
}

/// Exhaustive validity check for an independent set: no window of length
/// k + delta + 1 occurs in two of the cycles.
pub fn independent_set_is_valid(set: &[CyclicWord], sigma: u32, k: usize, delta: usize) -> bool {
    let window = k + delta + 1;
    let mut census: HashMap<u64, usize> = HashMap::new();
    for (i, c) in set.iter().enumerate() {
        for start in 0..c.len() {
            let mut code = 0u64;
            for t in 0..window {
                code = code * sigma as u64 + c.at(start + t) as u64;
            }
            match census.get(&code) {
                Some(&owner) if owner != i => return false,
                _ => {
                    census.insert(code, i);
                }
            }
        }
    }
    true
}
