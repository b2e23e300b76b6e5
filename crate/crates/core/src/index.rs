//! The complete self-index: a Γ-tree plus the pattern-location structures,
//! built under a Las Vegas fingerprint policy.

use std::fmt;
use std::path::Path;

use crate::attractor::{attractor_from_lz77, lz77_parse, Attractor};
use crate::error::{Error, Result};
use crate::gamma_tree::{GammaTree, PaddedText, TreeStats};
use crate::kr::{verify_pow2_collision_free, ExtendedFingerprint, KrFunction};
use crate::pattern_index::{Occurrence, PatternIndex, PatternStats, Split};
use crate::text::Text;

type Sampler = Box<dyn Fn(u32) -> Result<KrFunction>>;

/// Configures and runs index construction.
///
/// With verification on (the default) the builder samples fingerprint
/// functions until one is collision-free on all power-of-two-length
/// substrings of the padded text and of its reverse, and confirms every
/// source symbol by symbol. The resulting index answers every query
/// exactly. With verification off the first sample is used as is.
pub struct IndexBuilder {
    security_exponent: u32,
    seed: u64,
    verify: bool,
    max_attempts: u32,
    sampler: Option<Sampler>,
}

impl Default for IndexBuilder {
    fn default() -> Self {
        IndexBuilder {
            security_exponent: 2,
            seed: 0,
            verify: true,
            max_attempts: 64,
            sampler: None,
        }
    }
}

impl fmt::Debug for IndexBuilder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndexBuilder")
            .field("security_exponent", &self.security_exponent)
            .field("seed", &self.seed)
            .field("verify", &self.verify)
            .field("max_attempts", &self.max_attempts)
            .field("custom_sampler", &self.sampler.is_some())
            .finish()
    }
}

/// What happened during a build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildReport {
    /// Fingerprint functions tried, including the accepted one.
    pub attempts: u32,
    /// The accepted function.
    pub kr: KrFunction,
}

impl IndexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn security_exponent(mut self, c: u32) -> Self {
        self.security_exponent = c;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn verify(mut self, on: bool) -> Self {
        self.verify = on;
        self
    }

    pub fn max_attempts(mut self, attempts: u32) -> Self {
        self.max_attempts = attempts;
        self
    }

    /// Replaces the sampler of fingerprint functions; it receives the
    /// 0-based attempt number. Meant for tests that force collisions.
    pub fn fingerprint_sampler(mut self, f: impl Fn(u32) -> Result<KrFunction> + 'static) -> Self {
        self.sampler = Some(Box::new(f));
        self
    }

    fn sample(&self, attempt: u32) -> Result<KrFunction> {
        match &self.sampler {
            Some(f) => f(attempt),
            None => KrFunction::new(
                self.security_exponent,
                self.seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            ),
        }
    }

    pub fn build(&self, text: &Text, attractor: &Attractor) -> Result<Index> {
        self.build_with_report(text, attractor).map(|(index, _)| index)
    }

    /// Builds with the attractor induced by the LZ77 parse.
    pub fn build_lz77(&self, text: &Text) -> Result<Index> {
        let attractor = attractor_from_lz77(&lz77_parse(text), text);
        self.build(text, &attractor)
    }

    pub fn build_with_report(&self, text: &Text, attractor: &Attractor) -> Result<(Index, BuildReport)> {
        if self.security_exponent == 0 {
            return Err(Error::BadParameters("security exponent must be at least 1".into()));
        }
        let padded = PaddedText::new(text, attractor)?;
        let reversed: Vec<u8> = padded.as_bytes().iter().rev().copied().collect();
        for attempt in 0..self.max_attempts.max(1) {
            let kr = self.sample(attempt)?;
            if self.verify
                && !(verify_pow2_collision_free(&kr, padded.as_bytes())
                    && verify_pow2_collision_free(&kr, &reversed))
            {
                continue;
            }
            let tree = GammaTree::build_padded(&padded, kr, self.verify)?;
            let patterns = PatternIndex::build(&tree, &padded);
            let index = Index {
                tree,
                patterns,
                verified: self.verify,
                security_exponent: self.security_exponent,
            };
            let report = BuildReport {
                attempts: attempt + 1,
                kr,
            };
            return Ok((index, report));
        }
        Err(Error::FingerprintSelectionFailed {
            attempts: self.max_attempts,
        })
    }
}

/// Combined size accounting.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct IndexStats {
    #[serde(flatten)]
    pub tree: TreeStats,
    pub pattern: PatternStats,
    pub bound_ratio: f64,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct Index {
    pub(crate) tree: GammaTree,
    pub(crate) patterns: PatternIndex,
    pub(crate) verified: bool,
    pub(crate) security_exponent: u32,
}

impl Index {
    /// Verified build with default parameters and the LZ77 attractor.
    pub fn from_text(text: &Text) -> Result<Index> {
        IndexBuilder::new().build_lz77(text)
    }

    pub fn tree(&self) -> &GammaTree {
        &self.tree
    }

    pub fn patterns(&self) -> &PatternIndex {
        &self.patterns
    }

    /// Length of the indexed text.
    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    /// Whether the build verified its fingerprint function and sources.
    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn security_exponent(&self) -> u32 {
        self.security_exponent
    }

    /// Sorted 0-based starting positions of `pattern`.
    pub fn locate(&self, pattern: &[u8]) -> Result<Vec<usize>> {
        self.patterns.locate(&self.tree, pattern)
    }

    /// Occurrences with their kind, before sorting.
    pub fn locate_detailed(&self, pattern: &[u8]) -> Result<Vec<Occurrence>> {
        self.patterns.locate_detailed(&self.tree, pattern)
    }

    pub fn count(&self, pattern: &[u8]) -> Result<usize> {
        self.locate_detailed(pattern).map(|v| v.len())
    }

    pub fn find_split_ranges(&self, pattern: &[u8]) -> Result<Vec<Split>> {
        self.patterns.find_split_ranges(&self.tree, pattern)
    }

    pub fn extract(&self, start: usize, len: usize) -> Result<Vec<u8>> {
        self.tree.extract(start, len)
    }

    pub fn extract_symbol(&self, i: usize) -> Result<u8> {
        self.tree.extract_symbol(i)
    }

    /// Fingerprint of padded-text symbols `[start, end)`.
    pub fn substring_fingerprint(&self, start: usize, end: usize) -> Result<ExtendedFingerprint> {
        self.tree.substring_fingerprint(start, end)
    }

    pub fn stats(&self) -> IndexStats {
        let tree = self.tree.stats();
        IndexStats {
            bound_ratio: tree.bound_ratio(),
            tree,
            pattern: self.patterns.stats(),
            verified: self.verified,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        crate::format::encode(self)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Index> {
        crate::format::decode(bytes)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Index> {
        Index::from_bytes(&std::fs::read(path)?)
    }
}
