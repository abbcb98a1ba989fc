//! Locating synchronization errors against a known marker word.
//!
//! When the stored word is (b,1)-constrained, any b consecutive symbols
//! are pairwise distinct. Deleting at most b-1 consecutive symbols then
//! always changes the symbol at the first deleted position, so a greedy
//! left-to-right comparison recovers the deletion set exactly. With
//! deletions capped at b-2 per burst, surviving neighbours also stay
//! distinct, so any adjacent equal pair in the received word must be a
//! sticky insertion and can be stripped first.

use crate::constraint::{is_constrained_acyclic, ConstraintParams};
use crate::error::{Error, Result};
use crate::words::Word;

/// Recovered error locations, as 1-based positions in the reference word.
/// `insertions` lists the position of the symbol that was read again, once
/// per extra copy, so a triple read contributes the same position twice.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ErrorSets {
    pub deletions: Vec<usize>,
    pub insertions: Vec<usize>,
}

fn check_marker(sref: &Word, b: usize, q: u32) -> Result<()> {
    let c = ConstraintParams::new(b, 1, q)?;
    if !is_constrained_acyclic(sref, &c)? {
        return Err(Error::Domain(format!(
            "reference word is not ({b},1)-constrained"
        )));
    }
    Ok(())
}

/// Deletion positions of a received word against its reference, assuming
/// runs of at most b-1 consecutive deletions. Greedy: the leftmost
/// disagreement is always the first deletion.
pub fn locate_deletions_b1(sref: &Word, received: &Word, b: usize) -> Result<ErrorSets> {
    check_marker(sref, b, sref.min_sigma().max(2))?;
    let n = sref.len();
    if received.len() > n {
        return Err(Error::Decode(
            "received word is longer than the reference; it contains insertions".into(),
        ));
    }
    let mut r = received.symbols().to_vec();
    let mut deletions = Vec::with_capacity(n - r.len());
    let sy = sref.symbols();
    while r.len() < n {
        let i = (0..r.len()).find(|&i| r[i] != sy[i]).unwrap_or(r.len());
        r.insert(i, sy[i]);
        deletions.push(i + 1);
    }
    if r != sy {
        return Err(Error::Decode(
            "received word is not obtainable from the reference by deletions".into(),
        ));
    }
    Ok(ErrorSets {
        deletions,
        insertions: Vec::new(),
    })
}

/// Strip sticky insertions (adjacent equal symbols), then locate the
/// deletions. Requires deletion bursts of at most b-2 so that genuine
/// neighbours remain distinct.
pub fn correct_sticky_then_deletions(
    sref: &Word,
    received: &Word,
    b: usize,
) -> Result<ErrorSets> {
    check_marker(sref, b, sref.min_sigma().max(2))?;
    let mut dedup: Vec<u32> = Vec::with_capacity(received.len());
    // index into `dedup` of the symbol each extra copy repeats
    let mut dup_indices: Vec<usize> = Vec::new();
    for &s in received.symbols() {
        if dedup.last() == Some(&s) {
            dup_indices.push(dedup.len() - 1);
        } else {
            dedup.push(s);
        }
    }
    let sets = locate_deletions_b1(sref, &Word::new(dedup), b)?;

    // map deduplicated indices to reference positions: the deduplicated
    // stream is the reference minus the deletions
    let deleted: std::collections::HashSet<usize> = sets.deletions.iter().copied().collect();
    let surviving: Vec<usize> = (1..=sref.len()).filter(|p| !deleted.contains(p)).collect();
    let mut insertions: Vec<usize> = dup_indices
        .into_iter()
        .map(|d| surviving[d])
        .collect();
    insertions.sort_unstable();
    Ok(ErrorSets {
        deletions: sets.deletions,
        insertions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(sy: &[u32]) -> Word {
        Word::from(sy)
    }

    #[test]
    fn deletion_run_example() {
        let sref = w(&[0, 1, 2, 0, 1, 2]);
        let sets = locate_deletions_b1(&sref, &w(&[0, 0, 1, 2]), 3).unwrap();
        assert_eq!(sets.deletions, vec![2, 3]);
    }

    #[test]
    fn clean_input_has_no_errors() {
        let sref = w(&[0, 1, 2, 0, 1, 2]);
        let sets = locate_deletions_b1(&sref, &sref, 3).unwrap();
        assert!(sets.deletions.is_empty());
        let sets = correct_sticky_then_deletions(&sref, &sref, 3).unwrap();
        assert_eq!(sets, ErrorSets::default());
    }

    #[test]
    fn deletion_at_the_last_position() {
        let sref = w(&[0, 1, 2, 0, 1, 2]);
        let sets = locate_deletions_b1(&sref, &w(&[0, 1, 2, 0, 1]), 3).unwrap();
        assert_eq!(sets.deletions, vec![6]);
    }

    #[test]
    fn sticky_example() {
        let sref = w(&[0, 1, 2, 0, 1, 2]);
        let sets = correct_sticky_then_deletions(&sref, &w(&[0, 1, 1, 2, 0, 1, 2]), 3).unwrap();
        assert_eq!(sets.insertions, vec![2]);
        assert!(sets.deletions.is_empty());
    }

    #[test]
    fn combined_sticky_and_deletion() {
        // delete positions 3,4 (burst of 2 needs b >= 4) and re-read position 1
        let sref = w(&[0, 1, 2, 3, 0, 1, 2, 3]);
        let received = w(&[0, 0, 1, 0, 1, 2, 3]);
        let sets = correct_sticky_then_deletions(&sref, &received, 4).unwrap();
        assert_eq!(sets.deletions, vec![3, 4]);
        assert_eq!(sets.insertions, vec![1]);
    }

    #[test]
    fn unconstrained_reference_is_rejected() {
        let sref = w(&[0, 0, 1]);
        assert!(locate_deletions_b1(&sref, &w(&[0, 1]), 2).is_err());
    }

    #[test]
    fn inconsistent_received_fails() {
        let sref = w(&[0, 1, 2, 0, 1, 2]);
        assert!(locate_deletions_b1(&sref, &w(&[2, 2, 2]), 3).is_err());
        assert!(locate_deletions_b1(&sref, &w(&[0, 1, 2, 0, 1, 2, 0]), 3).is_err());
    }

    fn periodic_marker(q: u32, n: usize) -> Word {
        Word::new((0..n).map(|i| (i % q as usize) as u32).collect())
    }

    #[test]
    fn randomized_exactness_deletions_only() {
        // recovered sets must equal the injected ones, not merely fit
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let b = rng.gen_range(2..=4usize);
            let q = b as u32 + rng.gen_range(0..2);
            let n = rng.gen_range(8..=24usize);
            let sref = periodic_marker(q, n);
            // up to 3 bursts, each of length <= b-1, separated by survivors
            let mut deleted = vec![false; n];
            let mut starts: Vec<usize> = (0..n).collect();
            starts.shuffle(&mut rng);
            let mut bursts = 0;
            for &s in &starts {
                if bursts == 3 {
                    break;
                }
                let len = rng.gen_range(1..=b - 1);
                let end = (s + len).min(n);
                // keep bursts separated by at least one survivor
                let lo = s.saturating_sub(1);
                let hi = (end + 1).min(n);
                if deleted[lo..hi].iter().any(|&d| d) {
                    continue;
                }
                for slot in deleted.iter_mut().take(end).skip(s) {
                    *slot = true;
                }
                bursts += 1;
            }
            let expected: Vec<usize> = (0..n).filter(|&i| deleted[i]).map(|i| i + 1).collect();
            let received: Vec<u32> = (0..n)
                .filter(|&i| !deleted[i])
                .map(|i| sref.symbols()[i])
                .collect();
            let sets = locate_deletions_b1(&sref, &Word::new(received), b).unwrap();
            assert_eq!(sets.deletions, expected);
        }
    }

    #[test]
    fn randomized_exactness_with_sticky() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..2000 {
            let b = rng.gen_range(3..=5usize);
            let q = b as u32;
            let n = rng.gen_range(8..=24usize);
            let sref = periodic_marker(q, n);
            // one burst of <= b-2 deletions plus a few stickies
            let start = rng.gen_range(0..n);
            let len = rng.gen_range(0..=b - 2).min(n - start);
            let deleted: Vec<bool> = (0..n).map(|i| i >= start && i < start + len).collect();
            let expected_del: Vec<usize> =
                (0..n).filter(|&i| deleted[i]).map(|i| i + 1).collect();

            let mut stream: Vec<(u32, usize)> = (0..n)
                .filter(|&i| !deleted[i])
                .map(|i| (sref.symbols()[i], i + 1))
                .collect();
            let mut expected_ins = Vec::new();
            for _ in 0..rng.gen_range(0..3) {
                let at = rng.gen_range(0..stream.len());
                let (sym, pos) = stream[at];
                stream.insert(at + 1, (sym, pos));
                expected_ins.push(pos);
            }
            expected_ins.sort_unstable();

            let received = Word::new(stream.iter().map(|&(s, _)| s).collect());
            let sets = correct_sticky_then_deletions(&sref, &received, b).unwrap();
            assert_eq!(sets.deletions, expected_del);
            assert_eq!(sets.insertions, expected_ins);
        }
    }
}
