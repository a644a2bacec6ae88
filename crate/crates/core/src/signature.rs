use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Topological type `(g, h, r, s)` of a bordered surface: genus, boundary
/// components, boundary marked points, interior marked points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub g: u32,
    pub h: u32,
    pub r: u32,
    pub s: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("h must be at least 1")]
    NoBoundary,
    #[error("excluded unstable signature {0}: the moduli space is empty")]
    Excluded(Signature),
}

impl Signature {
    pub const fn new_unchecked(g: u32, h: u32, r: u32, s: u32) -> Self {
        Signature { g, h, r, s }
    }

    pub fn new(g: u32, h: u32, r: u32, s: u32) -> Result<Self, SignatureError> {
        let sig = Signature { g, h, r, s };
        if h == 0 {
            return Err(SignatureError::NoBoundary);
        }
        if sig.is_excluded() {
            return Err(SignatureError::Excluded(sig));
        }
        Ok(sig)
    }

    /// The empty cases: discs with `r + 2s < 3` and the bare annulus.
    pub fn is_excluded(&self) -> bool {
        self.g == 0
            && ((self.h == 1 && self.r + 2 * self.s < 3)
                || (self.h == 2 && self.r == 0 && self.s == 0))
    }

    /// Real dimension `6g - 6 + 3h + r + 2s` of the compactified moduli space.
    pub fn moduli_dim(&self) -> i64 {
        6 * self.g as i64 - 6 + 3 * self.h as i64 + self.r as i64 + 2 * self.s as i64
    }

    /// Euler characteristic `2 - 2g - h` shared by every graph of this type.
    pub fn euler_char(&self) -> i64 {
        2 - 2 * self.g as i64 - self.h as i64
    }

    /// Fewest internal edges a graph of this type can have.
    ///
    /// Without interior marks the minimum is a single vertex carrying only
    /// loops; otherwise it is reached when every vertex carries a mark.
    pub fn min_edges(&self) -> i64 {
        if self.s == 0 {
            1 - self.euler_char()
        } else {
            self.s as i64 - self.euler_char()
        }
    }

    pub fn max_edges(&self) -> i64 {
        self.moduli_dim()
    }

    pub fn as_array(&self) -> [u32; 4] {
        [self.g, self.h, self.r, self.s]
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.g, self.h, self.r, self.s)
    }
}
