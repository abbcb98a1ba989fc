//! Seeded Monte-Carlo harnesses for the channel codecs.
//!
//! All randomness flows from the caller's master seed; per-trial
//! generators are derived from it, so runs are reproducible and trials
//! are independent of each other.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constraint::{is_constrained_cyclic, ConstraintParams};
use crate::enumeration::{random_biguint_below, CodeIndex};
use crate::error::{Error, Result};
use crate::words::{CyclicWord, Word};

use super::decoder::decode_lsymbol;
use super::erasure::erasure_code_by_name;
use super::racetrack::{RacetrackCode, RacetrackLayout};
use super::{apply_advances, lsymbol_read, AdvancePattern, ReadMode};

/// Machine-readable outcome of a simulation run. Identical inputs produce
/// byte-identical manifests; timing is never part of them.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationManifest {
    pub schema: u32,
    pub kind: String,
    pub seed: u64,
    pub n: usize,
    pub b: usize,
    pub k: usize,
    pub ell: usize,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t1: Option<usize>,
    pub trials: u64,
    pub failures: u64,
    pub failure_indices: Vec<u64>,
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// A random admissible advance pattern for a word of length n: sticky
/// repeats, clean steps, and bursts of up to b-2 deletions, ending with an
/// admissible trailing or wrap-around gap.
pub fn random_advance_pattern<R: Rng>(
    n: usize,
    b: usize,
    cyclic: bool,
    rng: &mut R,
) -> AdvancePattern {
    let mut advances = Vec::new();
    let mut p = 0usize;
    loop {
        // stop once the remaining gap is admissible
        let may_stop = if cyclic {
            (1..=b - 1).contains(&(n - p))
        } else {
            n - 1 - p <= b - 2
        };
        if may_stop && (p == n - 1 || rng.gen_bool(0.25)) {
            // a few extra re-reads of the final position
            while rng.gen_bool(0.15) && advances.len() < 4 * n {
                advances.push(0);
            }
            break;
        }
        let a = if rng.gen_bool(0.12) {
            0
        } else {
            let max = (b - 1).min(n - 1 - p);
            if max <= 1 || rng.gen_bool(0.7) {
                1
            } else {
                rng.gen_range(2..=max)
            }
        };
        advances.push(a);
        p += a;
    }
    AdvancePattern::new(advances, cyclic)
}

/// A random pattern with at most `max_bursts` deletion bursts, each of
/// length up to b-2, and any number of sticky repeats.
pub fn random_bounded_pattern<R: Rng>(
    n: usize,
    b: usize,
    max_bursts: usize,
    rng: &mut R,
) -> AdvancePattern {
    let mut advances = Vec::new();
    let mut p = 0usize;
    let mut bursts = 0usize;
    while p < n - 1 {
        let a = if rng.gen_bool(0.1) {
            0
        } else if bursts < max_bursts && b > 2 && rng.gen_bool(0.2) {
            let max = (b - 1).min(n - 1 - p);
            if max >= 2 {
                bursts += 1;
                rng.gen_range(2..=max)
            } else {
                1
            }
        } else {
            1
        };
        advances.push(a);
        p += a;
    }
    // optional trailing burst
    if bursts < max_bursts && b > 2 && rng.gen_bool(0.2) {
        let cut = rng.gen_range(1..=b - 2);
        let mut dropped = 0;
        while dropped < cut {
            match advances.last() {
                Some(&1) => {
                    advances.pop();
                    dropped += 1;
                }
                _ => break,
            }
        }
    }
    AdvancePattern::new(advances, false)
}

/// Every admissible advance pattern for length n with at most
/// `max_stickies` sticky repeats; bursts are bounded by b-2 as always.
pub fn enumerate_advance_patterns(
    n: usize,
    b: usize,
    cyclic: bool,
    max_stickies: usize,
) -> Vec<AdvancePattern> {
    let mut out = Vec::new();
    let mut advances = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        p: usize,
        stickies: usize,
        n: usize,
        b: usize,
        cyclic: bool,
        max_stickies: usize,
        advances: &mut Vec<usize>,
        out: &mut Vec<AdvancePattern>,
    ) {
        let may_stop = if cyclic {
            (1..=b - 1).contains(&(n - p))
        } else {
            n - 1 - p <= b - 2
        };
        if may_stop {
            out.push(AdvancePattern::new(advances.clone(), cyclic));
        }
        if stickies < max_stickies {
            advances.push(0);
            go(p, stickies + 1, n, b, cyclic, max_stickies, advances, out);
            advances.pop();
        }
        for a in 1..=(b - 1).min(n.saturating_sub(1).saturating_sub(p)) {
            advances.push(a);
            go(p + a, stickies, n, b, cyclic, max_stickies, advances, out);
            advances.pop();
        }
    }
    go(0, 0, n, b, cyclic, max_stickies, &mut advances, &mut out);
    out
}

/// Sample a cyclically constrained word by rejection from the acyclic
/// sampler.
pub fn sample_cyclic_word<R: Rng>(
    index: &CodeIndex,
    c: &ConstraintParams,
    rng: &mut R,
) -> Result<Word> {
    for _ in 0..100_000 {
        let w = index.sample(rng)?;
        if is_constrained_cyclic(&CyclicWord::new(w.symbols().to_vec()), c)? {
            return Ok(w);
        }
    }
    Err(Error::Numeric(
        "rejection sampling of cyclic words did not terminate".into(),
    ))
}

/// Reproduce the corrupted read vector of one simulation trial, for
/// inspection or dumping.
pub fn lsymbol_trial_reads(
    c: &ConstraintParams,
    n: usize,
    mode: ReadMode,
    seed: u64,
    trial: u64,
) -> Result<super::ReadVector> {
    let index = CodeIndex::new(n, c)?;
    let mut rng = trial_rng(seed, trial);
    let word = match mode {
        ReadMode::Acyclic => index.sample(&mut rng)?,
        ReadMode::Cyclic => sample_cyclic_word(&index, c, &mut rng)?,
    };
    let pattern = random_advance_pattern(n, c.b, mode == ReadMode::Cyclic, &mut rng);
    let reads = lsymbol_read(&word, c.k + c.b - 2, mode, 0)?;
    apply_advances(&reads, &pattern, c.b)
}

/// Run seeded round-trips through the ell-symbol read channel: random
/// constrained word, random admissible pattern, decode, compare.
pub fn simulate_lsymbol(
    c: &ConstraintParams,
    n: usize,
    mode: ReadMode,
    trials: u64,
    seed: u64,
) -> Result<SimulationManifest> {
    let ell = c.k + c.b - 2;
    let index = CodeIndex::new(n, c)?;
    let mut failures = 0u64;
    let mut failure_indices = Vec::new();
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let word = match mode {
            ReadMode::Acyclic => index.sample(&mut rng)?,
            ReadMode::Cyclic => sample_cyclic_word(&index, c, &mut rng)?,
        };
        let pattern = random_advance_pattern(n, c.b, mode == ReadMode::Cyclic, &mut rng);
        let reads = lsymbol_read(&word, ell, mode, 0)?;
        let corrupted = apply_advances(&reads, &pattern, c.b)?;
        let ok = match decode_lsymbol(&corrupted, n, c, mode, 0) {
            Ok(decoded) => decoded.word == word,
            Err(_) => false,
        };
        if !ok {
            failures += 1;
            if failure_indices.len() < 100 {
                failure_indices.push(trial);
            }
        }
    }
    Ok(SimulationManifest {
        schema: 1,
        kind: "lsymbol".into(),
        seed,
        n,
        b: c.b,
        k: c.k,
        ell,
        mode: mode.to_string(),
        t1: None,
        trials,
        failures,
        failure_indices,
    })
}

/// Seeded round-trips through the racetrack codec: random segment-1 index
/// and data, a shared advance pattern with at most t1 bursts, decode,
/// compare.
pub fn simulate_racetrack(
    heads: usize,
    n: usize,
    c: &ConstraintParams,
    t1: usize,
    trials: u64,
    seed: u64,
) -> Result<SimulationManifest> {
    let ell = c.k + c.b - 2;
    let t = t1 * (c.b - 2).max(1);
    let q2 = 1u32 << (heads - 1);
    let code = erasure_code_by_name("auto", q2, n, t)?;
    let layout = RacetrackLayout::new(heads, n, ell - 1)?;
    let rt = RacetrackCode::new(layout, *c, code, 0)?;
    let total = rt.segment1_count();
    if total.to_u64() == Some(0) {
        return Err(Error::Domain("no valid first segments".into()));
    }

    let mut failures = 0u64;
    let mut failure_indices = Vec::new();
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let seg1 = random_biguint_below(&total, &mut rng);
        let data = Word::new(
            (0..rt.data_len())
                .map(|_| rng.gen_range(0..q2))
                .collect(),
        );
        let stored = rt.encode(&seg1, &data)?;
        let pattern = random_bounded_pattern(n, c.b, t1, &mut rng);
        let reads = rt.read(&stored, &pattern)?;
        let ok = match rt.decode(&reads) {
            Ok((got_seg1, got_data)) => got_seg1 == seg1 && got_data == data,
            Err(_) => false,
        };
        if !ok {
            failures += 1;
            if failure_indices.len() < 100 {
                failure_indices.push(trial);
            }
        }
    }
    Ok(SimulationManifest {
        schema: 1,
        kind: "racetrack".into(),
        seed,
        n,
        b: c.b,
        k: c.k,
        ell,
        mode: "acyclic".into(),
        t1: Some(t1),
        trials,
        failures,
        failure_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patterns_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let pat = random_advance_pattern(20, 3, false, &mut rng);
            pat.validate(3).unwrap();
            let last = *pat.positions().last().unwrap();
            assert!(19 - last <= 1);
        }
        for _ in 0..200 {
            let pat = random_advance_pattern(20, 3, true, &mut rng);
            let last = *pat.positions().last().unwrap();
            assert!((1..=2).contains(&(20 - last)));
        }
    }

    #[test]
    fn bounded_patterns_respect_the_burst_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let pat = random_bounded_pattern(32, 3, 2, &mut rng);
            pat.validate(3).unwrap();
            let bursts = pat.advances.iter().filter(|&&a| a >= 2).count();
            let trailing = 31 - pat.positions().last().unwrap();
            assert!(bursts + usize::from(trailing > 0) <= 2);
        }
    }

    #[test]
    fn enumeration_contains_the_identity() {
        let pats = enumerate_advance_patterns(6, 3, false, 1);
        assert!(pats.iter().any(|p| p.advances == vec![1; 5]));
        // deterministic order and reasonable size
        assert!(!pats.is_empty() && pats.len() < 20_000);
    }

    #[test]
    fn small_simulation_runs_clean() {
        let c = ConstraintParams::new(3, 3, 2).unwrap();
        let m = simulate_lsymbol(&c, 24, ReadMode::Acyclic, 50, 1234).unwrap();
        assert_eq!(m.failures, 0, "failures at {:?}", m.failure_indices);
        let m = simulate_lsymbol(&c, 24, ReadMode::Cyclic, 50, 1234).unwrap();
        assert_eq!(m.failures, 0, "failures at {:?}", m.failure_indices);
    }

    #[test]
    fn manifests_are_deterministic() {
        let c = ConstraintParams::new(3, 3, 2).unwrap();
        let a = simulate_lsymbol(&c, 16, ReadMode::Acyclic, 20, 99).unwrap();
        let b = simulate_lsymbol(&c, 16, ReadMode::Acyclic, 20, 99).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn small_racetrack_simulation() {
        let c = ConstraintParams::new(3, 2, 2).unwrap();
        let m = simulate_racetrack(3, 16, &c, 2, 50, 7).unwrap();
        assert_eq!(m.failures, 0, "failures at {:?}", m.failure_indices);
    }
}
