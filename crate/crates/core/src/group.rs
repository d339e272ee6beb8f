use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    Gl,
    Sl,
    Sp,
    SoOdd,
    SoEven,
    G2,
}

impl Group {
    pub const ALL: [Group; 6] = [Group::Gl, Group::Sl, Group::Sp, Group::SoOdd, Group::SoEven, Group::G2];

    pub fn tag(self) -> &'static str {
        match self {
            Group::Gl => "gl",
            Group::Sl => "sl",
            Group::Sp => "sp",
            Group::SoOdd => "so-odd",
            Group::SoEven => "so-even",
            Group::G2 => "g2",
        }
    }

    /// Characteristics in which constructions for this group are refused.
    pub fn forbidden_characteristics(self) -> &'static [u64] {
        match self {
            Group::Gl | Group::Sl => &[],
            Group::Sp | Group::SoOdd | Group::SoEven => &[2],
            Group::G2 => &[2, 3, 7],
        }
    }

    pub fn check_characteristic(self, characteristic: u64) -> Result<()> {
        if self.forbidden_characteristics().contains(&characteristic) {
            return Err(Error::BadCharacteristic {
                characteristic,
                reason: format!("not allowed for group {}", self.tag()),
            });
        }
        Ok(())
    }

    /// Classical tags carry an integrality and a degree condition on lattices.
    pub fn has_form(self) -> bool {
        !matches!(self, Group::Gl | Group::Sl)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Group> {
        Group::ALL
            .iter()
            .copied()
            .find(|g| g.tag() == s)
            .ok_or_else(|| Error::Parse(format!("unknown group `{s}`")))
    }
}
