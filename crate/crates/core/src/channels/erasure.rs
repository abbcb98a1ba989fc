//! Pluggable erasure codes behind a common trait.
//!
//! The decoders in this crate turn located deletions into erasures at
//! known positions, so all they need from a code is `encode` plus
//! `decode` from a partially erased word. Realizations are registered by
//! name: plain Reed-Solomon when the alphabet is large enough for the
//! length, and a grouped variant that packs several symbols into one
//! super-symbol over an extension field when it is not.

use crate::error::{Error, Result};
use crate::gf::{field_of_order, Field};
use crate::words::Word;

/// A q2-ary code of length n that recovers any t erased positions.
pub trait ErasureCode {
    /// Codeword length n.
    fn length(&self) -> usize;
    /// Number of erasures the decoder is guaranteed to fill.
    fn capability(&self) -> usize;
    /// Message length.
    fn data_len(&self) -> usize;
    /// Alphabet size q2.
    fn alphabet(&self) -> u32;
    fn name(&self) -> &'static str;
    fn encode(&self, data: &Word) -> Result<Word>;
    /// `received[i] = None` marks an erasure at position i.
    fn decode(&self, received: &[Option<u32>]) -> Result<Word>;
}

/// Systematic Reed-Solomon code: the codeword is the evaluation of the
/// interpolating polynomial of the message over n distinct field points,
/// with the first n-t evaluations equal to the message itself. MDS, so t
/// redundancy symbols buy t erasures. Requires q2 >= n.
pub struct RsErasure {
    field: Field,
    n: usize,
    t: usize,
}

impl RsErasure {
    pub fn new(q2: u32, n: usize, t: usize) -> Result<Self> {
        let field = field_of_order(q2)?;
        if n > q2 as usize {
            return Err(Error::InvalidInput(format!(
                "Reed-Solomon needs q2 >= n, got q2={q2} n={n}"
            )));
        }
        if t == 0 || t >= n {
            return Err(Error::InvalidInput(format!(
                "erasure capability must satisfy 0 < t < n, got t={t} n={n}"
            )));
        }
        Ok(RsErasure { field, n, t })
    }

    /// Lagrange interpolation through `points`, evaluated at `x`.
    fn interpolate_at(&self, points: &[(u32, u32)], x: u32) -> Result<u32> {
        let f = &self.field;
        let mut acc = 0u32;
        for (i, &(xi, yi)) in points.iter().enumerate() {
            let mut term = yi;
            for (j, &(xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let num = f.sub(x, xj);
                let den = f.sub(xi, xj);
                term = f.mul(term, f.div(num, den)?);
            }
            acc = f.add(acc, term);
        }
        Ok(acc)
    }
}

impl ErasureCode for RsErasure {
    fn length(&self) -> usize {
        self.n
    }

    fn capability(&self) -> usize {
        self.t
    }

    fn data_len(&self) -> usize {
        self.n - self.t
    }

    fn alphabet(&self) -> u32 {
        self.field.q()
    }

    fn name(&self) -> &'static str {
        "rs"
    }

    fn encode(&self, data: &Word) -> Result<Word> {
        if data.len() != self.data_len() {
            return Err(Error::InvalidInput(format!(
                "message length {} does not match the code dimension {}",
                data.len(),
                self.data_len()
            )));
        }
        data.check_sigma(self.field.q())?;
        let points: Vec<(u32, u32)> = data
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, &y)| (i as u32, y))
            .collect();
        let mut out = data.symbols().to_vec();
        for x in self.data_len()..self.n {
            out.push(self.interpolate_at(&points, x as u32)?);
        }
        Ok(Word::new(out))
    }

    fn decode(&self, received: &[Option<u32>]) -> Result<Word> {
        if received.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "received length {} does not match the code length {}",
                received.len(),
                self.n
            )));
        }
        let known: Vec<(u32, u32)> = received
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|y| (i as u32, y)))
            .collect();
        if known.len() < self.data_len() {
            let missing: Vec<usize> = received
                .iter()
                .enumerate()
                .filter_map(|(i, s)| s.is_none().then_some(i))
                .collect();
            return Err(Error::Decode(format!(
                "{} erasures exceed the capability {}; unrecoverable positions {:?}",
                missing.len(),
                self.t,
                missing
            )));
        }
        let base = &known[..self.data_len()];
        // consistency over the remaining known symbols catches corruption
        // beyond pure erasures
        for &(x, y) in &known[self.data_len()..] {
            if self.interpolate_at(base, x)? != y {
                return Err(Error::Decode(
                    "received symbols are inconsistent with any codeword".into(),
                ));
            }
        }
        let mut data = Vec::with_capacity(self.data_len());
        for (x, slot) in received.iter().enumerate().take(self.data_len()) {
            match slot {
                Some(y) => data.push(*y),
                None => data.push(self.interpolate_at(base, x as u32)?),
            }
        }
        Ok(Word::new(data))
    }
}

/// Reed-Solomon over an extension field for lengths beyond the alphabet:
/// groups of g consecutive symbols form one super-symbol over GF(q2^g),
/// so t erased positions erase at most t super-symbols. Costs g times the
/// redundancy of a plain MDS code but keeps the q2-ary, length-n
/// interface.
pub struct GroupedRsErasure {
    inner: RsErasure,
    q2: u32,
    group: usize,
    n: usize,
}

impl GroupedRsErasure {
    pub fn new(q2: u32, n: usize, t: usize) -> Result<Self> {
        field_of_order(q2)?;
        let mut group = None;
        for g in 1..=8usize {
            if !n.is_multiple_of(g) {
                continue;
            }
            let super_q = (q2 as u64).checked_pow(g as u32);
            match super_q {
                Some(sq) if sq <= crate::gf::MAX_Q && sq >= (n / g) as u64 && n / g > t => {
                    group = Some(g);
                    break;
                }
                _ => continue,
            }
        }
        let group = group.ok_or_else(|| {
            Error::InvalidInput(format!(
                "no feasible grouping for q2={q2} n={n} t={t}"
            ))
        })?;
        let inner = RsErasure::new((q2 as u64).pow(group as u32) as u32, n / group, t)?;
        Ok(GroupedRsErasure {
            inner,
            q2,
            group,
            n,
        })
    }

    pub fn group(&self) -> usize {
        self.group
    }

    fn pack(&self, symbols: &[u32]) -> u32 {
        // any bijection F_q2^g <-> F_(q2^g) works here; erasures are
        // always whole super-symbols
        let mut acc = 0u32;
        for &s in symbols.iter().rev() {
            acc = acc * self.q2 + s;
        }
        acc
    }

    fn unpack(&self, mut v: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.group);
        for _ in 0..self.group {
            out.push(v % self.q2);
            v /= self.q2;
        }
        out
    }
}

impl ErasureCode for GroupedRsErasure {
    fn length(&self) -> usize {
        self.n
    }

    fn capability(&self) -> usize {
        self.inner.capability()
    }

    fn data_len(&self) -> usize {
        self.inner.data_len() * self.group
    }

    fn alphabet(&self) -> u32 {
        self.q2
    }

    fn name(&self) -> &'static str {
        "rs-grouped"
    }

    fn encode(&self, data: &Word) -> Result<Word> {
        if data.len() != self.data_len() {
            return Err(Error::InvalidInput(format!(
                "message length {} does not match the code dimension {}",
                data.len(),
                self.data_len()
            )));
        }
        data.check_sigma(self.q2)?;
        let packed: Vec<u32> = data
            .symbols()
            .chunks(self.group)
            .map(|chunk| self.pack(chunk))
            .collect();
        let coded = self.inner.encode(&Word::new(packed))?;
        let mut out = Vec::with_capacity(self.n);
        for &sup in coded.symbols() {
            out.extend(self.unpack(sup));
        }
        Ok(Word::new(out))
    }

    fn decode(&self, received: &[Option<u32>]) -> Result<Word> {
        if received.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "received length {} does not match the code length {}",
                received.len(),
                self.n
            )));
        }
        let supers: Vec<Option<u32>> = received
            .chunks(self.group)
            .map(|chunk| {
                chunk
                    .iter()
                    .map(|s| s.as_ref().copied())
                    .collect::<Option<Vec<u32>>>()
                    .map(|syms| self.pack(&syms))
            })
            .collect();
        let data = self.inner.decode(&supers)?;
        let mut out = Vec::with_capacity(self.data_len());
        for &sup in data.symbols() {
            out.extend(self.unpack(sup));
        }
        Ok(Word::new(out))
    }
}

/// Look up an erasure-code realization by name. `auto` picks plain
/// Reed-Solomon when the alphabet covers the length and the grouped
/// variant otherwise.
pub fn erasure_code_by_name(
    name: &str,
    q2: u32,
    n: usize,
    t: usize,
) -> Result<Box<dyn ErasureCode>> {
    match name {
        "rs" => Ok(Box::new(RsErasure::new(q2, n, t)?)),
        "rs-grouped" => Ok(Box::new(GroupedRsErasure::new(q2, n, t)?)),
        "auto" => {
            if n <= q2 as usize {
                Ok(Box::new(RsErasure::new(q2, n, t)?))
            } else {
                Ok(Box::new(GroupedRsErasure::new(q2, n, t)?))
            }
        }
        other => Err(Error::InvalidInput(format!(
            "unknown erasure code {other:?} (expected rs, rs-grouped, or auto)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rs_example_two_erasures() {
        let code = RsErasure::new(16, 6, 2).unwrap();
        let data = Word::new(vec![3, 7, 1, 14]);
        let cw = code.encode(&data).unwrap();
        assert_eq!(cw.len(), 6);
        assert_eq!(&cw.symbols()[..4], data.symbols(), "systematic");
        let mut rec: Vec<Option<u32>> = cw.symbols().iter().map(|&s| Some(s)).collect();
        rec[0] = None;
        rec[4] = None;
        assert_eq!(code.decode(&rec).unwrap(), data);
    }

    #[test]
    fn rs_zero_erasures_is_projection() {
        let code = RsErasure::new(16, 6, 2).unwrap();
        let data = Word::new(vec![0, 15, 8, 2]);
        let cw = code.encode(&data).unwrap();
        let rec: Vec<Option<u32>> = cw.symbols().iter().map(|&s| Some(s)).collect();
        assert_eq!(code.decode(&rec).unwrap(), data);
    }

    #[test]
    fn rs_too_many_erasures_is_flagged() {
        let code = RsErasure::new(16, 6, 2).unwrap();
        let data = Word::new(vec![3, 7, 1, 14]);
        let cw = code.encode(&data).unwrap();
        let mut rec: Vec<Option<u32>> = cw.symbols().iter().map(|&s| Some(s)).collect();
        rec[0] = None;
        rec[2] = None;
        rec[5] = None;
        let err = code.decode(&rec);
        assert!(matches!(err, Err(Error::Decode(_))));
    }

    #[test]
    fn rs_detects_substitution() {
        let code = RsErasure::new(16, 8, 3).unwrap();
        let data = Word::new(vec![1, 2, 3, 4, 5]);
        let cw = code.encode(&data).unwrap();
        let mut rec: Vec<Option<u32>> = cw.symbols().iter().map(|&s| Some(s)).collect();
        rec[7] = Some(rec[7].unwrap() ^ 1);
        assert!(code.decode(&rec).is_err());
    }

    #[test]
    fn rs_all_small_erasure_patterns() {
        let code = RsErasure::new(16, 9, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let data = Word::new((0..6).map(|_| rng.gen_range(0..16)).collect());
            let cw = code.encode(&data).unwrap();
            // every pattern of <= 3 erasures over 9 positions
            for mask in 0u32..(1 << 9) {
                if mask.count_ones() > 3 {
                    continue;
                }
                let rec: Vec<Option<u32>> = cw
                    .symbols()
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| (mask >> i & 1 == 0).then_some(s))
                    .collect();
                assert_eq!(code.decode(&rec).unwrap(), data, "mask {mask:b}");
            }
        }
    }

    #[test]
    fn rs_rejects_length_above_alphabet() {
        assert!(RsErasure::new(4, 32, 2).is_err());
    }

    #[test]
    fn grouped_covers_small_alphabets() {
        let code = GroupedRsErasure::new(4, 32, 2).unwrap();
        assert_eq!(code.group(), 2);
        assert_eq!(code.length(), 32);
        assert_eq!(code.alphabet(), 4);
        assert_eq!(code.data_len(), 28);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let data = Word::new((0..28).map(|_| rng.gen_range(0..4)).collect());
            let cw = code.encode(&data).unwrap();
            assert_eq!(cw.len(), 32);
            let mut rec: Vec<Option<u32>> = cw.symbols().iter().map(|&s| Some(s)).collect();
            // two erased positions anywhere
            let a = rng.gen_range(0..32);
            let b = rng.gen_range(0..32);
            rec[a] = None;
            rec[b] = None;
            assert_eq!(code.decode(&rec).unwrap(), data);
        }
    }

    #[test]
    fn registry_selects_by_name() {
        assert_eq!(erasure_code_by_name("rs", 16, 8, 2).unwrap().name(), "rs");
        assert_eq!(
            erasure_code_by_name("auto", 4, 32, 2).unwrap().name(),
            "rs-grouped"
        );
        assert_eq!(erasure_code_by_name("auto", 16, 8, 2).unwrap().name(), "rs");
        assert!(erasure_code_by_name("hamming", 16, 8, 2).is_err());
    }
}
