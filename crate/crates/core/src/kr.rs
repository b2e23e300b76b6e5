//! Extended Karp–Rabin fingerprints.
//!
//! The fingerprint of `s[0..k)` is `Σ s[i] · r^(k-1-i) mod q`. The extended
//! form carries `r^k` and `r^-k` as well, so fingerprints of adjacent pieces
//! combine (and split apart) in constant time. Algebraically an extended
//! fingerprint is the affine map `x ↦ x·r^k + hash`, and concatenation is
//! composition of those maps; [`KrFunction::inverse`] exposes the
//! group inverse used by the prefix-fingerprint walk of the Γ-tree.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// The default modulus, the Mersenne prime 2^61 − 1.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// A fingerprint function: prime modulus `q` and base `r` in `[1, q-1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KrFunction {
    q: u64,
    r: u64,
    r_inv: u64,
}

/// `⟨hash, r^len, r^-len⟩` of some string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExtendedFingerprint {
    pub hash: u64,
    pub r_pow: u64,
    pub r_pow_inv: u64,
}

impl ExtendedFingerprint {
    pub const EMPTY: ExtendedFingerprint = ExtendedFingerprint {
        hash: 0,
        r_pow: 1,
        r_pow_inv: 1,
    };
}

impl KrFunction {
    /// Samples a function with the default modulus.
    ///
    /// The modulus is fixed at 2^61 − 1, which exceeds `n^(c+2)` for every
    /// text length this crate targets with `c = security_exponent ≤ 2`.
    /// The probability that two distinct equal-length substrings of a text of
    /// length `n` collide is at most `n^3 / q`.
    pub fn new(security_exponent: u32, seed: u64) -> Result<Self> {
        if security_exponent == 0 {
            return Err(Error::BadParameters(
                "security exponent must be at least 1".into(),
            ));
        }
        Self::with_modulus(MERSENNE_61, seed)
    }

    /// Samples `r` uniformly in `[1, q-1]` for an arbitrary prime `q`.
    /// Small moduli are accepted so tests can force collisions.
    pub fn with_modulus(q: u64, seed: u64) -> Result<Self> {
        if !(3..=MERSENNE_61).contains(&q) || !is_prime(q) {
            return Err(Error::BadParameters(format!(
                "fingerprint modulus {q} must be a prime in [3, 2^61-1]"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(1..q);
        Self::from_parts(q, r)
    }

    /// Rebuilds a function from a stored `(q, r)` pair.
    pub fn from_parts(q: u64, r: u64) -> Result<Self> {
        if !(3..=MERSENNE_61).contains(&q) || !is_prime(q) || r == 0 || r >= q {
            return Err(Error::BadParameters(format!(
                "invalid fingerprint function q={q} r={r}"
            )));
        }
        let r_inv = pow_mod(r, q - 2, q);
        Ok(KrFunction { q, r, r_inv })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn base(&self) -> u64 {
        self.r
    }

    pub fn base_inverse(&self) -> u64 {
        self.r_inv
    }

    #[inline]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        let p = a as u128 * b as u128;
        if self.q == MERSENNE_61 {
            let lo = (p as u64) & MERSENNE_61;
            let hi = (p >> 61) as u64;
            let s = lo + hi;
            if s >= MERSENNE_61 {
                s - MERSENNE_61
            } else {
                s
            }
        } else {
            (p % self.q as u128) as u64
        }
    }

    #[inline]
    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    pub(crate) fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `r^len` and `r^-len`.
    pub(crate) fn powers(&self, len: u64) -> (u64, u64) {
        (self.pow(self.r, len), self.pow(self.r_inv, len))
    }

    #[inline]
    pub fn of_symbol(&self, c: u8) -> ExtendedFingerprint {
        ExtendedFingerprint {
            hash: c as u64 % self.q,
            r_pow: self.r,
            r_pow_inv: self.r_inv,
        }
    }

    pub fn of_string(&self, s: &[u8]) -> ExtendedFingerprint {
        let mut fp = ExtendedFingerprint::EMPTY;
        for &c in s {
            fp.hash = self.add(self.mul(fp.hash, self.r), c as u64 % self.q);
            fp.r_pow = self.mul(fp.r_pow, self.r);
            fp.r_pow_inv = self.mul(fp.r_pow_inv, self.r_inv);
        }
        fp
    }

    /// Plain (non-extended) fingerprint.
    pub fn hash(&self, s: &[u8]) -> u64 {
        s.iter()
            .fold(0, |h, &c| self.add(self.mul(h, self.r), c as u64 % self.q))
    }

    /// `φ(UV)` from `φ(U)` and `φ(V)`.
    #[inline]
    pub fn concat(&self, u: ExtendedFingerprint, v: ExtendedFingerprint) -> ExtendedFingerprint {
        ExtendedFingerprint {
            hash: self.add(self.mul(u.hash, v.r_pow), v.hash),
            r_pow: self.mul(u.r_pow, v.r_pow),
            r_pow_inv: self.mul(u.r_pow_inv, v.r_pow_inv),
        }
    }

    /// `φ(V)` from `φ(UV)` and `φ(U)`.
    #[inline]
    pub fn split_right(&self, uv: ExtendedFingerprint, u: ExtendedFingerprint) -> ExtendedFingerprint {
        let r_pow = self.mul(uv.r_pow, u.r_pow_inv);
        ExtendedFingerprint {
            hash: self.sub(uv.hash, self.mul(u.hash, r_pow)),
            r_pow,
            r_pow_inv: self.mul(uv.r_pow_inv, u.r_pow),
        }
    }

    /// `φ(U)` from `φ(UV)` and `φ(V)`.
    #[inline]
    pub fn split_left(&self, uv: ExtendedFingerprint, v: ExtendedFingerprint) -> ExtendedFingerprint {
        ExtendedFingerprint {
            hash: self.mul(self.sub(uv.hash, v.hash), v.r_pow_inv),
            r_pow: self.mul(uv.r_pow, v.r_pow_inv),
            r_pow_inv: self.mul(uv.r_pow_inv, v.r_pow),
        }
    }

    /// Group inverse: `concat(u, inverse(u)) == EMPTY`.
    pub fn inverse(&self, u: ExtendedFingerprint) -> ExtendedFingerprint {
        ExtendedFingerprint {
            hash: self.sub(0, self.mul(u.hash, u.r_pow_inv)),
            r_pow: u.r_pow_inv,
            r_pow_inv: u.r_pow,
        }
    }
}

/// Prefix fingerprints of a byte string, for O(1) substring fingerprints.
#[derive(Clone, Debug)]
pub struct PrefixHashes {
    kr: KrFunction,
    prefix: Vec<u64>,
    pow: Vec<u64>,
}

impl PrefixHashes {
    /// Powers are tabulated up to `max_window`; longer windows fall back to
    /// exponentiation.
    pub fn new(kr: KrFunction, s: &[u8], max_window: usize) -> Self {
        let mut prefix = Vec::with_capacity(s.len() + 1);
        prefix.push(0);
        let mut h = 0;
        for &c in s {
            h = kr.add(kr.mul(h, kr.r), c as u64 % kr.q);
            prefix.push(h);
        }
        let cap = max_window.min(s.len());
        let mut pow = Vec::with_capacity(cap + 1);
        let mut p = 1;
        for _ in 0..=cap {
            pow.push(p);
            p = kr.mul(p, kr.r);
        }
        PrefixHashes { kr, prefix, pow }
    }

    pub fn len(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    fn r_pow(&self, len: usize) -> u64 {
        match self.pow.get(len) {
            Some(&p) => p,
            None => self.kr.pow(self.kr.r, len as u64),
        }
    }

    /// Fingerprint of `s[start..end)`.
    #[inline]
    pub fn hash(&self, start: usize, end: usize) -> u64 {
        let len = end - start;
        self.kr
            .sub(self.prefix[end], self.kr.mul(self.prefix[start], self.r_pow(len)))
    }

    pub fn extended(&self, start: usize, end: usize) -> ExtendedFingerprint {
        let len = (end - start) as u64;
        let (r_pow, r_pow_inv) = self.kr.powers(len);
        ExtendedFingerprint {
            hash: self.hash(start, end),
            r_pow,
            r_pow_inv,
        }
    }
}

#[derive(Default)]
struct IdentityHasher(u64);

impl Hasher for IdentityHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = self.0.rotate_left(8) ^ b as u64;
        }
    }

    fn write_u64(&mut self, i: u64) {
        // fingerprints are already uniform; spread them over the high bits too
        self.0 = i.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    }
}

type FpMap = HashMap<u64, usize, BuildHasherDefault<IdentityHasher>>;

/// Checks that no two distinct substrings of `s` whose common length is a
/// power of two share a fingerprint.
///
/// Lengths are processed in increasing order. Once length `ℓ` is known to be
/// collision-free, two windows of length `2ℓ` are equal exactly when both of
/// their halves have equal fingerprints, so every comparison is O(1).
pub fn verify_pow2_collision_free(kr: &KrFunction, s: &[u8]) -> bool {
    let n = s.len();
    if n == 0 {
        return true;
    }
    let ph = PrefixHashes::new(*kr, s, n);
    let mut first: FpMap = FpMap::with_capacity_and_hasher(n, Default::default());
    let mut len = 1usize;
    while len <= n {
        first.clear();
        let half = len / 2;
        for i in 0..=n - len {
            let h = ph.hash(i, i + len);
            match first.get(&h) {
                None => {
                    first.insert(h, i);
                }
                Some(&j) => {
                    let equal = if len == 1 {
                        s[i] == s[j]
                    } else {
                        ph.hash(i, i + half) == ph.hash(j, j + half)
                            && ph.hash(i + half, i + len) == ph.hash(j + half, j + len)
                    };
                    if !equal {
                        return false;
                    }
                }
            }
        }
        len *= 2;
    }
    true
}

/// Largest power of two not exceeding `len` (`len > 0`).
#[inline]
pub(crate) fn pow2_floor(len: usize) -> usize {
    1usize << (usize::BITS - 1 - len.leading_zeros())
}

fn pow_mod(base: u64, mut exp: u64, q: u64) -> u64 {
    let m = q as u128;
    let mut acc = 1u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let m = n as u128;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n) as u128;
        if x == 1 || x == m - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % m;
            if x == m - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
