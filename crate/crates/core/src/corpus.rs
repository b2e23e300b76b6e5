//! Deterministic generators for repetitive and random test texts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

pub const MAX_FIBONACCI_ORDER: u32 = 32;
pub const MAX_THUE_MORSE_ORDER: u32 = 28;

/// A corpus family with its parameters.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CorpusSpec {
    /// `W_0 = b`, `W_1 = a`, `W_k = W_{k-1} W_{k-2}`; `|W_k|` is the
    /// `(k+1)`-th Fibonacci number, so order 10 has length 89.
    Fibonacci { order: u32 },
    /// The first `2^order` symbols of the Thue–Morse sequence over {a, b}.
    ThueMorse { order: u32 },
    Random { len: usize, sigma: usize, seed: u64 },
    /// `copies` copies of one random block of length `len`, each symbol
    /// independently replaced with probability `rate`.
    MutatedCopies {
        copies: usize,
        len: usize,
        rate: f64,
        sigma: usize,
        seed: u64,
    },
}

impl CorpusSpec {
    pub fn generate(&self) -> Result<Vec<u8>> {
        match *self {
            CorpusSpec::Fibonacci { order } => fibonacci(order),
            CorpusSpec::ThueMorse { order } => thue_morse(order),
            CorpusSpec::Random { len, sigma, seed } => random(sigma, len, seed),
            CorpusSpec::MutatedCopies {
                copies,
                len,
                rate,
                sigma,
                seed,
            } => mutated_copies(copies, len, rate, sigma, seed),
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParameters(msg.into())
}

pub fn fibonacci(order: u32) -> Result<Vec<u8>> {
    if order > MAX_FIBONACCI_ORDER {
        return Err(bad(format!("fibonacci order must be at most {MAX_FIBONACCI_ORDER}")));
    }
    let (mut prev, mut cur) = (b"b".to_vec(), b"a".to_vec());
    if order == 0 {
        return Ok(prev);
    }
    for _ in 1..order {
        let next = [cur.as_slice(), prev.as_slice()].concat();
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

pub fn thue_morse(order: u32) -> Result<Vec<u8>> {
    if order > MAX_THUE_MORSE_ORDER {
        return Err(bad(format!("thue-morse order must be at most {MAX_THUE_MORSE_ORDER}")));
    }
    Ok((0..1u64 << order)
        .map(|i| if i.count_ones() % 2 == 0 { b'a' } else { b'b' })
        .collect())
}

/// The `sigma` symbols used by the random families: letters and digits
/// while they last, then raw bytes from 1.
pub fn alphabet(sigma: usize) -> Result<Vec<u8>> {
    match sigma {
        0 | 256.. => Err(bad("alphabet size must be in 1..=255")),
        s if s <= LETTERS.len() => Ok(LETTERS[..s].to_vec()),
        s => Ok((1..=s as u8).collect()),
    }
}

pub fn random(sigma: usize, len: usize, seed: u64) -> Result<Vec<u8>> {
    let symbols = alphabet(sigma)?;
    if len == 0 {
        return Err(bad("length must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..len).map(|_| symbols[rng.gen_range(0..sigma)]).collect())
}

pub fn mutated_copies(copies: usize, len: usize, rate: f64, sigma: usize, seed: u64) -> Result<Vec<u8>> {
    if copies == 0 {
        return Err(bad("copy count must be positive"));
    }
    if !(0.0..=1.0).contains(&rate) {
        return Err(bad("mutation rate must be in [0, 1]"));
    }
    let symbols = alphabet(sigma)?;
    let base = random(sigma, len, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut out = Vec::with_capacity(copies * len);
    for _ in 0..copies {
        for &c in &base {
            if sigma > 1 && rng.gen_bool(rate) {
                // a different symbol, uniformly
                let old = symbols.iter().position(|&s| s == c).unwrap();
                let shift = rng.gen_range(1..sigma);
                out.push(symbols[(old + shift) % sigma]);
            } else {
                out.push(c);
            }
        }
    }
    Ok(out)
}
