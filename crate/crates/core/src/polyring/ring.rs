use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::scalar::{is_prime, Scalar};
use crate::error::{Error, Result};
use crate::group::Group;

/// Generators, their weights and the characteristic of the base field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyRing {
    pub names: Vec<String>,
    pub weights: Vec<u32>,
    pub characteristic: u64,
}

pub type Ring = Arc<PolyRing>;

impl PolyRing {
    pub fn new<S: AsRef<str>>(names: &[S], weights: &[u32], characteristic: u64) -> Result<Ring> {
        if names.len() != weights.len() {
            return Err(Error::InvalidInput("one weight per generator".into()));
        }
        let mut seen = HashSet::new();
        for n in names {
            let n = n.as_ref();
            if n.is_empty() || !n.chars().next().unwrap().is_alphabetic() {
                return Err(Error::InvalidInput(format!("bad generator name `{n}`")));
            }
            if !seen.insert(n.to_string()) {
                return Err(Error::DuplicateGenerator(n.to_string()));
            }
        }
        if weights.contains(&0) {
            return Err(Error::InvalidInput("gradings must be positive".into()));
        }
        if characteristic != 0 && (!is_prime(characteristic) || characteristic >= 1 << 31) {
            return Err(Error::BadCharacteristic {
                characteristic,
                reason: "must be 0 or a prime below 2^31".into(),
            });
        }
        Ok(Arc::new(PolyRing {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            weights: weights.to_vec(),
            characteristic,
        }))
    }

    /// As [`PolyRing::new`], refusing characteristics excluded for `group`.
    pub fn for_group<S: AsRef<str>>(group: Group, names: &[S], weights: &[u32], characteristic: u64) -> Result<Ring> {
        group.check_characteristic(characteristic)?;
        PolyRing::new(names, weights, characteristic)
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn scalar(&self, n: i64) -> Scalar {
        Scalar::from_i64(n, self.characteristic)
    }

    pub fn ratio(&self, n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(&n.into(), &d.into(), self.characteristic).expect("denominator invertible")
    }

    /// The same generators followed by `extra`.
    pub fn extend<S: AsRef<str>>(&self, extra: &[S], weights: &[u32]) -> Result<Ring> {
        let mut names = self.names.clone();
        names.extend(extra.iter().map(|s| s.as_ref().to_string()));
        let mut w = self.weights.clone();
        w.extend_from_slice(weights);
        PolyRing::new(&names, &w, self.characteristic)
    }

    /// The same generators over a different characteristic.
    pub fn with_characteristic(&self, characteristic: u64) -> Result<Ring> {
        PolyRing::new(&self.names, &self.weights, characteristic)
    }
}

pub fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
