//! Finite fields F_q with q = p^m up to 2^16, polynomial arithmetic,
//! primitive polynomials, and linear feedback shift registers.
//!
//! Field elements are integers 0..q encoding polynomial residues over F_p
//! in base p. Multiplication goes through exp/log tables built once per
//! field from a fixed generator, so all per-element operations are table
//! lookups. Polynomials over the field are coefficient vectors stored low
//! to high; their text form is comma-separated coefficients, e.g.
//! `1,1,0,1` for 1 + x + x^3.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::words::{CyclicWord, Word};

/// Largest supported field size.
pub const MAX_Q: u64 = 1 << 16;

/// Budget for factoring q^k - 1 in the primitivity test.
pub const MAX_ORDER: u128 = 1 << 40;

/// A concrete finite field with precomputed multiplication tables.
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    /// monic irreducible modulus over F_p, low-to-high; empty when m = 1
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Field {
    /// Prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1)
    }

    /// F_{p^m} with the default modulus: the irreducible monic polynomial
    /// of degree m whose high-to-low coefficient encoding is smallest.
    pub fn new(p: u32, m: u32) -> Result<Field> {
        if m == 1 {
            return Field::with_modulus(p, 1, Vec::new());
        }
        let modulus = default_modulus(p, m)?;
        Field::with_modulus(p, m, modulus)
    }

    pub fn with_modulus(p: u32, m: u32, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime_u64(p as u64) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if m < 1 {
            return Err(Error::InvalidInput("extension degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_Q).ok_or_else(|| {
            Error::InvalidInput(format!("field size {p}^{m} exceeds the supported maximum"))
        })? as u32;
        if m > 1 {
            if modulus.len() != m as usize + 1
                || modulus[m as usize] != 1
                || modulus.iter().any(|&c| c >= p)
            {
                return Err(Error::InvalidInput(
                    "modulus must be monic of degree m with coefficients in F_p".into(),
                ));
            }
            if !base_poly_irreducible(p, &modulus) {
                return Err(Error::InvalidInput("modulus is not irreducible".into()));
            }
        }

        let mut field = Field {
            p,
            m,
            q,
            modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables()?;
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    fn check(&self, a: u32) -> Result<()> {
        if a >= self.q {
            return Err(Error::InvalidInput(format!(
                "element {a} outside the field of size {}",
                self.q
            )));
        }
        Ok(())
    }

    /// Multiplication without tables, used while the tables are built.
    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let da = digits(a, self.p, self.m as usize);
        let db = digits(b, self.p, self.m as usize);
        let mut prod = vec![0u64; 2 * self.m as usize];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] += x as u64 * y as u64;
            }
        }
        // reduce degree by degree using the monic modulus
        let p64 = self.p as u64;
        for d in (self.m as usize..prod.len()).rev() {
            let coef = prod[d] % p64;
            if coef != 0 {
                for (i, &mc) in self.modulus.iter().take(self.m as usize).enumerate() {
                    // x^d = -modulus_low(x) * x^(d-m)
                    let sub = coef * mc as u64 % p64;
                    let idx = d - self.m as usize + i;
                    prod[idx] = (prod[idx] + (p64 - sub)) % p64;
                }
            }
            prod[d] = 0;
        }
        let mut enc = 0u32;
        for d in (0..self.m as usize).rev() {
            enc = enc * self.p + (prod[d] % p64) as u32;
        }
        enc
    }

    fn build_tables(&mut self) -> Result<()> {
        let order = (self.q - 1) as u64;
        let factors = factorize(order as u128);
        let mut generator = None;
        for cand in 1..self.q {
            if cand == 1 && order > 1 {
                continue;
            }
            let ok = factors.iter().all(|&(r, _)| {
                self.raw_pow(cand, order as u128 / r) != 1
            });
            if ok && self.raw_pow(cand, order as u128) == 1 {
                generator = Some(cand);
                break;
            }
        }
        let generator = generator
            .ok_or_else(|| Error::Numeric("no multiplicative generator found".into()))?;
        let mut exp = vec![0u32; 2 * (self.q as usize - 1)];
        let mut log = vec![0u32; self.q as usize];
        let mut acc = 1u32;
        for i in 0..self.q as usize - 1 {
            exp[i] = acc;
            exp[i + self.q as usize - 1] = acc;
            log[acc as usize] = i as u32;
            acc = self.raw_mul(acc, generator);
        }
        if acc != 1 {
            return Err(Error::Numeric("generator order check failed".into()));
        }
        self.generator = generator;
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    fn raw_pow(&self, base: u32, mut e: u128) -> u32 {
        let mut result = 1u32;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = self.raw_mul(result, b);
            }
            b = self.raw_mul(b, b);
            e >>= 1;
        }
        result
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let mut out = 0u32;
        let (mut x, mut y) = (a, b);
        let mut place = 1u32;
        for _ in 0..self.m {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        debug_assert!(a < self.q);
        if self.m == 1 {
            return (self.p - a) % self.p;
        }
        let mut out = 0u32;
        let mut x = a;
        let mut place = 1u32;
        for _ in 0..self.m {
            let d = (self.p - x % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        // the exp table is doubled, so the sum of two logs stays in range
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        self.check(a)?;
        if a == 0 {
            return Err(Error::Domain("zero has no multiplicative inverse".into()));
        }
        let qm1 = (self.q - 1) as usize;
        Ok(self.exp[(qm1 - self.log[a as usize] as usize) % qm1])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u128) -> u32 {
        debug_assert!(a < self.q);
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let qm1 = (self.q - 1) as u128;
        let r = (self.log[a as usize] as u128 * (e % qm1)) % qm1;
        self.exp[r as usize]
    }

    // ---- polynomial arithmetic over the field ----

    pub fn poly_normalize(&self, mut p: Vec<u32>) -> Vec<u32> {
        while p.last() == Some(&0) {
            p.pop();
        }
        p
    }

    pub fn poly_deg(&self, p: &[u32]) -> Option<usize> {
        p.iter().rposition(|&c| c != 0)
    }

    pub fn poly_add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; a.len().max(b.len())];
        for (i, slot) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *slot = self.add(x, y);
        }
        self.poly_normalize(out)
    }

    pub fn poly_mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        self.poly_normalize(out)
    }

    /// Remainder of `a` modulo `b`, where `b` is nonzero.
    #[allow(clippy::needless_range_loop)]
    pub fn poly_rem(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        let db = self
            .poly_deg(b)
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        let lead_inv = self.inv(b[db])?;
        let mut rem = a.to_vec();
        while let Some(dr) = self.poly_deg(&rem) {
            if dr < db {
                break;
            }
            let factor = self.mul(rem[dr], lead_inv);
            let shift = dr - db;
            for i in 0..=db {
                let sub = self.mul(factor, b[i]);
                rem[shift + i] = self.sub(rem[shift + i], sub);
            }
        }
        Ok(self.poly_normalize(rem))
    }

    pub fn poly_mulmod(&self, a: &[u32], b: &[u32], modp: &[u32]) -> Result<Vec<u32>> {
        self.poly_rem(&self.poly_mul(a, b), modp)
    }

    pub fn poly_powmod(&self, base: &[u32], mut e: u128, modp: &[u32]) -> Result<Vec<u32>> {
        let mut result = self.poly_rem(&[1], modp)?;
        let mut b = self.poly_rem(base, modp)?;
        while e > 0 {
            if e & 1 == 1 {
                result = self.poly_mulmod(&result, &b, modp)?;
            }
            b = self.poly_mulmod(&b, &b, modp)?;
            e >>= 1;
        }
        Ok(result)
    }

    /// Order test for primitivity: x generates the full multiplicative
    /// group of `F_q[x]/(f)`, i.e. x^(q^k-1) = 1 and x^((q^k-1)/r) != 1 for
    /// every prime r dividing q^k-1. A polynomial passing this test is
    /// automatically irreducible.
    pub fn is_primitive(&self, poly: &[u32]) -> Result<bool> {
        let poly = self.poly_normalize(poly.to_vec());
        let k = match self.poly_deg(&poly) {
            Some(d) if d >= 1 => d,
            _ => return Ok(false),
        };
        if poly[k] != 1 || poly[0] == 0 {
            return Ok(false);
        }
        let order = (self.q as u128)
            .checked_pow(k as u32)
            .map(|v| v - 1)
            .filter(|&v| v <= MAX_ORDER)
            .ok_or_else(|| {
                Error::Resource(format!(
                    "q^k - 1 exceeds the factoring budget for q={} k={k}",
                    self.q
                ))
            })?;
        let x = vec![0, 1];
        if self.poly_powmod(&x, order, &poly)? != vec![1] {
            return Ok(false);
        }
        for (r, _) in factorize(order) {
            if self.poly_powmod(&x, order / r, &poly)? == vec![1] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn digits(mut v: u32, p: u32, m: usize) -> Vec<u32> {
    let mut out = vec![0u32; m];
    for slot in out.iter_mut() {
        *slot = v % p;
        v /= p;
    }
    out
}

/// All monic primitive polynomials of degree k over the field, sorted by
/// their high-to-low coefficient encoding. There are phi(q^k-1)/k of them.
pub fn enumerate_primitive_polys(field: &Field, k: usize) -> Result<Vec<Vec<u32>>> {
    if k < 1 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let count = (field.q() as u128).checked_pow(k as u32).ok_or_else(|| {
        Error::Resource("too many candidate polynomials".into())
    })?;
    if count > 1 << 24 {
        return Err(Error::Resource(format!(
            "enumerating q^k = {count} candidate polynomials exceeds the budget"
        )));
    }
    let mut out = Vec::new();
    // the base-q digits of enc are the low coefficients, so the scan order
    // matches the high-to-low encoding order
    for enc in 0..count {
        let mut poly = Vec::with_capacity(k + 1);
        let mut v = enc;
        for _ in 0..k {
            poly.push((v % field.q() as u128) as u32);
            v /= field.q() as u128;
        }
        poly.push(1);
        if field.is_primitive(&poly)? {
            out.push(poly);
        }
    }
    Ok(out)
}

/// Field of a given order, when the order is a prime power.
pub fn field_of_order(q: u32) -> Result<Field> {
    let factors = factorize(q as u128);
    match factors.as_slice() {
        [(p, e)] => Field::new(*p as u32, *e),
        _ => Err(Error::InvalidInput(format!("{q} is not a prime power"))),
    }
}

/// Euler's totient via trial-division factorization.
pub fn euler_phi(n: u128) -> u128 {
    let mut phi = n;
    for (r, _) in factorize(n) {
        phi = phi / r * (r - 1);
    }
    phi
}

/// Trial-division factorization, adequate for the desk-scale orders used
/// here (below 2^40).
pub fn factorize(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Irreducibility of a polynomial over the base prime field F_p, by trial
/// division with all monic polynomials of degree up to deg/2.
#[allow(clippy::needless_range_loop)]
fn base_poly_irreducible(p: u32, poly: &[u32]) -> bool {
    let deg = poly.len() - 1;
    let rem = |a: &[u32], b: &[u32]| -> Vec<u32> {
        let db = b.iter().rposition(|&c| c != 0).unwrap();
        let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
        let p64 = p as u64;
        // b is monic
        for d in (db..r.len()).rev() {
            let coef = r[d] % p64;
            if coef != 0 {
                for i in 0..=db {
                    let idx = d - db + i;
                    r[idx] = (r[idx] + (p64 - coef * b[i] as u64 % p64)) % p64;
                }
            }
        }
        let mut out: Vec<u32> = r.into_iter().map(|c| (c % p64) as u32).collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    };
    for d in 1..=deg / 2 {
        let total = (p as u64).pow(d as u32);
        for enc in 0..total {
            let mut g = Vec::with_capacity(d + 1);
            let mut v = enc;
            for _ in 0..d {
                g.push((v % p as u64) as u32);
                v /= p as u64;
            }
            g.push(1);
            if rem(poly, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The irreducible monic polynomial of degree m over F_p with the smallest
/// high-to-low coefficient encoding.
pub fn default_modulus(p: u32, m: u32) -> Result<Vec<u32>> {
    let pm = (p as u64).checked_pow(m).ok_or_else(|| {
        Error::InvalidInput("modulus search space too large".into())
    })?;
    for enc in 0..pm {
        let mut poly = Vec::with_capacity(m as usize + 1);
        let mut v = enc;
        for _ in 0..m {
            poly.push((v % p as u64) as u32);
            v /= p as u64;
        }
        poly.push(1);
        if base_poly_irreducible(p, &poly) {
            return Ok(poly);
        }
    }
    Err(Error::Numeric(format!("no irreducible polynomial of degree {m} over F_{p}")))
}

/// Parse the polynomial text form: comma-separated coefficients, low to
/// high degree.
pub fn parse_poly_text(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidInput(format!("bad coefficient {tok:?}")))
        })
        .collect()
}

pub fn format_poly_text(p: &[u32]) -> String {
    p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

/// Linear feedback shift register over a finite field. The state holds k
/// consecutive sequence symbols, oldest first; each step emits the oldest
/// symbol and feeds back a linear combination of the state.
#[derive(Debug, Clone)]
pub struct Lfsr {
    /// feedback coefficients c_1..c_k; c_i multiplies the i-th most recent
    /// symbol
    taps: Vec<u32>,
    state: Vec<u32>,
}

impl Lfsr {
    /// Register realizing the characteristic polynomial `poly` (low to
    /// high, nonzero constant term): taps are c_i = -p_i / p_0.
    pub fn from_characteristic_poly(field: &Field, poly: &[u32]) -> Result<Lfsr> {
        let poly = field.poly_normalize(poly.to_vec());
        let k = field
            .poly_deg(&poly)
            .ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
        if k < 1 {
            return Err(Error::InvalidInput("polynomial must have degree >= 1".into()));
        }
        if poly[0] == 0 {
            return Err(Error::InvalidInput(
                "characteristic polynomial needs a nonzero constant term".into(),
            ));
        }
        let c0_inv = field.inv(poly[0])?;
        let taps: Vec<u32> = (1..=k)
            .map(|i| field.neg(field.mul(poly[i], c0_inv)))
            .collect();
        Ok(Lfsr {
            taps,
            state: vec![1; k],
        })
    }

    pub fn order(&self) -> usize {
        self.taps.len()
    }

    pub fn state(&self) -> &[u32] {
        &self.state
    }

    pub fn set_state(&mut self, state: Vec<u32>) -> Result<()> {
        if state.len() != self.taps.len() {
            return Err(Error::InvalidInput("state length must equal the register order".into()));
        }
        self.state = state;
        Ok(())
    }

    /// Advance one step, returning the symbol shifted out.
    pub fn step(&mut self, field: &Field) -> u32 {
        let k = self.taps.len();
        let mut feedback = 0u32;
        for (i, &c) in self.taps.iter().enumerate() {
            // taps[i] = c_(i+1) pairs with the (i+1)-th most recent symbol
            feedback = field.add(feedback, field.mul(c, self.state[k - 1 - i]));
        }
        let out = self.state[0];
        self.state.remove(0);
        self.state.push(feedback);
        out
    }
}

/// A maximal-length shift-register sequence: one period of the LFSR of a
/// primitive polynomial, of length q^k - 1, containing every nonzero
/// k-tuple exactly once as a cyclic window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MSequence {
    pub word: Word,
    pub generator: Vec<u32>,
    pub q: u32,
    pub k: usize,
}

/// Generate the m-sequence of a primitive polynomial from the all-ones
/// seed.
pub fn lfsr_msequence(field: &Field, poly: &[u32]) -> Result<MSequence> {
    if !field.is_primitive(poly)? {
        return Err(Error::Domain(format!(
            "polynomial {} is not primitive over F_{}",
            format_poly_text(poly),
            field.q()
        )));
    }
    let poly = field.poly_normalize(poly.to_vec());
    let k = field.poly_deg(&poly).unwrap();
    let period = (field.q() as u64).pow(k as u32) as usize - 1;
    let mut reg = Lfsr::from_characteristic_poly(field, &poly)?;
    reg.set_state(vec![1; k])?;
    let mut symbols = Vec::with_capacity(period);
    for _ in 0..period {
        symbols.push(reg.step(field));
    }
    debug_assert_eq!(reg.state(), vec![1; k]);
    Ok(MSequence {
        word: Word::new(symbols),
        generator: poly,
        q: field.q(),
        k,
    })
}

/// Rotate an m-sequence so that its unique run of k-1 zeroes sits at the
/// end. For k = 1 there is no zero run and the word is returned as is.
pub fn canonicalize_msequence(m: &MSequence) -> Word {
    let sy = m.word.symbols();
    let n = sy.len();
    if m.k < 2 {
        return m.word.clone();
    }
    let run = m.k - 1;
    for start in 0..n {
        let all_zero = (0..run).all(|t| sy[(start + t) % n] == 0);
        let before = sy[(start + n - 1) % n] != 0;
        let after = sy[(start + run) % n] != 0;
        if all_zero && before && after {
            let rot = (start + run) % n;
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                out.push(sy[(rot + i) % n]);
            }
            return Word::new(out);
        }
    }
    unreachable!("an m-sequence always contains its zero run");
}

/// True iff every 2k-tuple occurs as a cyclic window in at most one of the
/// given sequences, and at most once there.
pub fn verify_pairwise_2k(seqs: &[Word], k: usize) -> bool {
    let mut census: HashMap<Vec<u32>, u32> = HashMap::new();
    for s in seqs {
        let sy = s.symbols();
        let n = sy.len();
        for start in 0..n {
            let window: Vec<u32> = (0..2 * k).map(|t| sy[(start + t) % n]).collect();
            let c = census.entry(window).or_insert(0);
            *c += 1;
            if *c > 1 {
                return false;
            }
        }
    }
    true
}

/// Decompose the state diagram of the LFSR with the given characteristic
/// polynomial into its cycles, returned as cyclic symbol sequences.
pub fn lfsr_cycles(field: &Field, poly: &[u32]) -> Result<Vec<CyclicWord>> {
    let poly = field.poly_normalize(poly.to_vec());
    let k = field
        .poly_deg(&poly)
        .ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    let q = field.q() as u64;
    let total = q.checked_pow(k as u32).filter(|&t| t <= 1 << 22).ok_or_else(|| {
        Error::Resource(format!("state diagram with q^k = {q}^{k} states exceeds the budget"))
    })? as usize;

    let encode = |state: &[u32]| -> usize {
        let mut acc = 0usize;
        for &s in state.iter().rev() {
            acc = acc * q as usize + s as usize;
        }
        acc
    };
    let decode = |mut v: usize| -> Vec<u32> {
        let mut out = Vec::with_capacity(k);
        for _ in 0..k {
            out.push((v % q as usize) as u32);
            v /= q as usize;
        }
        out
    };

    let mut reg = Lfsr::from_characteristic_poly(field, &poly)?;
    let mut seen = vec![false; total];
    let mut cycles: Vec<CyclicWord> = Vec::new();
    for start in 0..total {
        if seen[start] {
            continue;
        }
        // walk until revisiting the start; the map is a permutation
        reg.set_state(decode(start))?;
        let mut symbols = Vec::new();
        let mut cur = start;
        loop {
            seen[cur] = true;
            symbols.push(reg.state()[0]);
            reg.step(field);
            cur = encode(reg.state());
            if cur == start {
                break;
            }
            debug_assert!(!seen[cur], "state diagram must decompose into cycles");
        }
        cycles.push(CyclicWord::new(symbols));
    }
    Ok(cycles)
}
