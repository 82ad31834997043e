//! Per-check records shared by the verification suites.

use serde::{Deserialize, Serialize};
use std::fmt::Display;

use crate::hecke::FormalSum;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub identity: String,
    pub q: u64,
    /// Digest of the inputs: a lattice key, parameter tuple or sample index.
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Check {
    pub fn new(identity: &str, q: u64, inputs: impl Display, lhs: impl Display, rhs: impl Display, pass: bool) -> Check {
        Check {
            identity: identity.to_string(),
            q,
            inputs: inputs.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass,
        }
    }

    /// Compare two values by equality, serializing both sides.
    pub fn equal<T: PartialEq + Display>(identity: &str, q: u64, inputs: impl Display, lhs: &T, rhs: &T) -> Check {
        Check::new(identity, q, inputs, lhs, rhs, lhs == rhs)
    }

    /// Compare formal sums; large sums are serialized as digests.
    pub fn sums(identity: &str, q: u64, inputs: impl Display, lhs: &FormalSum, rhs: &FormalSum) -> Check {
        Check::new(identity, q, inputs, short(lhs), short(rhs), lhs == rhs)
    }

    pub fn sort_key(&self) -> (String, u64, String) {
        (self.identity.clone(), self.q, self.inputs.clone())
    }
}

fn short(s: &FormalSum) -> String {
    if s.len() <= 8 {
        s.render()
    } else {
        s.digest()
    }
}
