use std::ops::Deref;

use crate::error::{Error, Result};

/// Byte 0 is never part of an indexed text. The index uses it for the
/// sentinel and the padding that rounds the text up to whole blocks.
pub const RESERVED_SYMBOL: u8 = 0;

/// A non-empty byte string without the reserved symbol.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Text(Vec<u8>);

impl Text {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Result<Self> {
        let bytes = bytes.into();
        if bytes.is_empty() {
            return Err(Error::EmptyText);
        }
        if let Some(offset) = bytes.iter().position(|&b| b == RESERVED_SYMBOL) {
            return Err(Error::InputContainsZeroByte { offset });
        }
        Ok(Text(bytes))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    /// Number of distinct symbols.
    pub fn alphabet_size(&self) -> usize {
        let mut seen = [false; 256];
        self.0.iter().for_each(|&b| seen[b as usize] = true);
        seen.iter().filter(|&&s| s).count()
    }
}

impl Deref for Text {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl AsRef<[u8]> for Text {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl TryFrom<&[u8]> for Text {
    type Error = Error;

    fn try_from(value: &[u8]) -> Result<Self> {
        Text::new(value.to_vec())
    }
}

impl TryFrom<&str> for Text {
    type Error = Error;

    fn try_from(value: &str) -> Result<Self> {
        Text::new(value.as_bytes().to_vec())
    }
}

impl std::fmt::Debug for Text {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Text({:?})", String::from_utf8_lossy(&self.0))
    }
}

/// Rejects empty patterns and patterns containing the reserved symbol.
pub fn check_pattern(pattern: &[u8]) -> Result<()> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    match pattern.iter().position(|&b| b == RESERVED_SYMBOL) {
        Some(offset) => Err(Error::PatternContainsReservedSymbol { offset }),
        None => Ok(()),
    }
}
