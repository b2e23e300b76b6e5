//! A compressed self-index built on a string attractor of the text.
//!
//! The text is padded and cut into a tree of halving blocks; only blocks
//! near an attractor position are stored, and every other block points at
//! an earlier copy of itself that crosses a stored one. On top of that tree
//! sit Karp–Rabin fingerprints for any substring, two z-fast tries over
//! leaf boundaries, a range-reporting grid and a source array, which
//! together locate every occurrence of a pattern exactly once.
//!
//! ```
//! use gamma_index::{Index, Text};
//!
//! let text = Text::try_from("abaababa")?;
//! let index = Index::from_text(&text)?;
//! assert_eq!(index.locate(b"aba")?, vec![0, 3, 5]);
//! assert_eq!(index.extract(2, 3)?, b"aab");
//! # Ok::<(), gamma_index::Error>(())
//! ```

pub mod attractor;
pub mod cli;
pub mod corpus;
pub mod error;
mod format;
pub mod gamma_tree;
pub mod index;
pub mod kr;
pub mod oracle;
pub mod pattern_index;
mod suffix;
pub mod text;

pub use attractor::{attractor_from_lz77, lz77_parse, validate_attractor, Attractor};
pub use error::{Error, Result};
pub use gamma_tree::GammaTree;
pub use index::{Index, IndexBuilder, IndexStats};
pub use kr::{ExtendedFingerprint, KrFunction};
pub use pattern_index::{Occurrence, OccurrenceKind};
pub use text::Text;
