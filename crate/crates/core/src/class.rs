use std::fmt;
use std::str::FromStr;

use crate::algebra::MulTable;
use crate::error::Error;

/// Subclasses of L-algebras understood by the enumeration and database
/// tools.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraClass {
    All,
    Hilbert,
    Discrete,
    Linear,
    Semiregular,
    Regular,
}

impl AlgebraClass {
    pub const ALL: [AlgebraClass; 6] = [
        AlgebraClass::All,
        AlgebraClass::Hilbert,
        AlgebraClass::Discrete,
        AlgebraClass::Linear,
        AlgebraClass::Semiregular,
        AlgebraClass::Regular,
    ];

    /// Membership test; assumes `m` is a valid L-algebra.
    pub fn contains(self, m: &MulTable) -> bool {
        match self {
            AlgebraClass::All => true,
            AlgebraClass::Hilbert => m.is_hilbert(),
            AlgebraClass::Discrete => m.is_discrete(),
            AlgebraClass::Linear => m.is_linear(),
            AlgebraClass::Semiregular => m.is_semiregular(),
            AlgebraClass::Regular => m.is_regular(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraClass::All => "all",
            AlgebraClass::Hilbert => "hilbert",
            AlgebraClass::Discrete => "discrete",
            AlgebraClass::Linear => "linear",
            AlgebraClass::Semiregular => "semiregular",
            AlgebraClass::Regular => "regular",
        }
    }
}

impl fmt::Display for AlgebraClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgebraClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        AlgebraClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown class {s:?}")))
    }
}
