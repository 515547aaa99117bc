//! Bigraded Hodge dimension grids.
//!
//! A [`HodgeGrid`] stores `h[p][q] = dim H^q(X, Ω^p ⊗ V)` for a smooth proper
//! variety `X` of dimension `n` as a dense `(n+1) × (n+1)` table of
//! arbitrary-precision naturals. Grids carry no geometric data beyond these
//! dimensions.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::json::JsonNat;
use crate::Error;

/// Characteristic of the ground field: `0` or a prime.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Characteristic(u64);

impl Characteristic {
    pub const ZERO: Characteristic = Characteristic(0);

    pub fn new(c: u64) -> Result<Self, Error> {
        if c == 0 || is_prime(c) {
            Ok(Characteristic(c))
        } else {
            Err(Error::Argument(format!(
                "characteristic must be 0 or a prime, got {c}"
            )))
        }
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Whether `char(k) = 0` or `char(k) ≥ dim`.
    pub fn at_least(self, dim: usize) -> bool {
        self.0 == 0 || self.0 >= dim as u64
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dimension table `h[p][q]` of a smooth proper variety, possibly with
/// coefficients in a locally free sheaf (`twisted`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HodgeGrid {
    dim: usize,
    char: Characteristic,
    twisted: bool,
    h: Vec<Vec<BigUint>>,
}

/// One failed grid invariant, as reported by [`HodgeGrid::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `h[0][0] ≠ 1` on an untwisted grid.
    Origin { value: BigUint },
    /// `h[n][n] ≠ 1` on an untwisted grid.
    Top { value: BigUint },
    /// `h[p][q] ≠ h[n-p][n-q]` on an untwisted grid. Each unordered pair is
    /// reported once, with `(p, q)` the lexicographically smaller index.
    Serre {
        p: usize,
        q: usize,
        value: BigUint,
        dual: BigUint,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Origin { value } => write!(f, "h[0][0] = {value}, expected 1"),
            Violation::Top { value } => write!(f, "h[n][n] = {value}, expected 1"),
            Violation::Serre { p, q, value, dual } => write!(
                f,
                "Serre duality fails at ({p},{q}): {value} vs dual entry {dual}"
            ),
        }
    }
}

impl HodgeGrid {
    /// Builds a grid, checking only the shape. Use [`validate`](Self::validate)
    /// for the remaining invariants.
    pub fn new(
        dim: usize,
        char: Characteristic,
        twisted: bool,
        h: Vec<Vec<BigUint>>,
    ) -> Result<Self, Error> {
        if h.len() != dim + 1 || h.iter().any(|row| row.len() != dim + 1) {
            return Err(Error::Argument(format!(
                "grid of dimension {dim} must be {0}x{0}",
                dim + 1
            )));
        }
        Ok(HodgeGrid {
            dim,
            char,
            twisted,
            h,
        })
    }

    /// Convenience constructor from machine integers, untwisted, characteristic 0.
    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Result<Self, Error> {
        let dim = rows
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::Argument("grid must have at least one row".to_string()))?;
        let h = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| BigUint::from(v)).collect())
            .collect();
        HodgeGrid::new(dim, Characteristic::ZERO, false, h)
    }

    /// The all-zero grid of the given shape.
    pub fn zeros(dim: usize, char: Characteristic, twisted: bool) -> Self {
        HodgeGrid {
            dim,
            char,
            twisted,
            h: vec![vec![BigUint::zero(); dim + 1]; dim + 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn characteristic(&self) -> Characteristic {
        self.char
    }

    pub fn is_twisted(&self) -> bool {
        self.twisted
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.h
    }

    pub fn with_characteristic(mut self, char: Characteristic) -> Self {
        self.char = char;
        self
    }

    pub fn with_twisted(mut self, twisted: bool) -> Self {
        self.twisted = twisted;
        self
    }

    /// `h[p][q]`, reading indices outside `0..=n` as zero.
    pub fn get(&self, p: i64, q: i64) -> &BigUint {
        static ZERO: BigUint = BigUint::ZERO;
        if p < 0 || q < 0 {
            return &ZERO;
        }
        self.h
            .get(p as usize)
            .and_then(|row| row.get(q as usize))
            .unwrap_or(&ZERO)
    }

    pub(crate) fn entry_mut(&mut self, p: usize, q: usize) -> &mut BigUint {
        &mut self.h[p][q]
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        if self.twisted {
            return Ok(());
        }
        let n = self.dim;
        let mut report = Vec::new();
        if !self.h[0][0].is_one() {
            report.push(Violation::Origin {
                value: self.h[0][0].clone(),
            });
        }
        if !self.h[n][n].is_one() {
            report.push(Violation::Top {
                value: self.h[n][n].clone(),
            });
        }
        for p in 0..=n {
            for q in 0..=n {
                let (dp, dq) = (n - p, n - q);
                if (p, q) < (dp, dq) && self.h[p][q] != self.h[dp][dq] {
                    report.push(Violation::Serre {
                        p,
                        q,
                        value: self.h[p][q].clone(),
                        dual: self.h[dp][dq].clone(),
                    });
                }
            }
        }
        if report.is_empty() {
            Ok(())
        } else {
            Err(report)
        }
    }

    /// `Σ_{p+q=l} h[p][q]`, the `l`-th total Hodge dimension.
    pub fn total_hodge(&self, l: i64) -> Result<BigUint, Error> {
        let n = self.dim as i64;
        if !(0..=2 * n).contains(&l) {
            return Err(Error::Range(format!(
                "total Hodge degree {l} outside 0..={}",
                2 * n
            )));
        }
        Ok((0..=n).map(|p| self.get(p, l - p)).sum())
    }

    /// `Σ_{p-q=l} h[p][q]`, the HKR upper bound for `HH_l`.
    pub fn anti_diagonal(&self, l: i64) -> Result<BigUint, Error> {
        let n = self.dim as i64;
        if !(-n..=n).contains(&l) {
            return Err(Error::Range(format!(
                "anti-diagonal index {l} outside {}..={n}",
                -n
            )));
        }
        Ok((0..=n).map(|p| self.get(p, p - l)).sum())
    }

    /// All total Hodge dimensions for `l = 0..=2n`.
    pub fn total_hodge_vector(&self) -> Vec<BigUint> {
        let n = self.dim as i64;
        (0..=2 * n)
            .map(|l| self.total_hodge(l).expect("degree in range"))
            .collect()
    }

    /// All anti-diagonal sums for `l = -n..=n`.
    pub fn anti_diagonal_vector(&self) -> Vec<BigUint> {
        let n = self.dim as i64;
        (-n..=n)
            .map(|l| self.anti_diagonal(l).expect("degree in range"))
            .collect()
    }

    pub fn sum(&self) -> BigUint {
        self.h.iter().flatten().sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grid serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    dim: usize,
    char: u64,
    twisted: bool,
    h: Vec<Vec<JsonNat>>,
}

impl Serialize for HodgeGrid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GridRepr {
            dim: self.dim,
            char: self.char.value(),
            twisted: self.twisted,
            h: self
                .h
                .iter()
                .map(|row| row.iter().cloned().map(JsonNat).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HodgeGrid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = GridRepr::deserialize(d)?;
        let char = Characteristic::new(repr.char).map_err(D::Error::custom)?;
        let h = repr
            .h
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.0).collect())
            .collect();
        HodgeGrid::new(repr.dim, char, repr.twisted, h).map_err(D::Error::custom)
    }
}

/// A grid with coefficients `V` together with the grid for `V^∨`, tied by the
/// twisted Serre pairing `h^q(Ω^p ⊗ V) = h^{n-q}(Ω^{n-p} ⊗ V^∨)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPair {
    forward: HodgeGrid,
    backward: HodgeGrid,
}

impl GridPair {
    pub fn new(forward: HodgeGrid, backward: HodgeGrid) -> Result<Self, Error> {
        if forward.dim != backward.dim {
            return Err(Error::Argument(format!(
                "paired grids have dimensions {} and {}",
                forward.dim, backward.dim
            )));
        }
        let n = forward.dim;
        for p in 0..=n {
            for q in 0..=n {
                if forward.h[p][q] != backward.h[n - p][n - q] {
                    return Err(Error::Inconsistent(format!(
                        "Serre pairing fails at ({p},{q}): {} vs {}",
                        forward.h[p][q],
                        backward.h[n - p][n - q]
                    )));
                }
            }
        }
        Ok(GridPair { forward, backward })
    }

    /// Pairs a grid with its Serre-dual partner, computed entrywise.
    pub fn from_forward(forward: HodgeGrid) -> Self {
        let n = forward.dim;
        let mut backward = HodgeGrid::zeros(n, forward.char, forward.twisted);
        for p in 0..=n {
            for q in 0..=n {
                backward.h[n - p][n - q] = forward.h[p][q].clone();
            }
        }
        GridPair { forward, backward }
    }

    pub fn forward(&self) -> &HodgeGrid {
        &self.forward
    }

    pub fn backward(&self) -> &HodgeGrid {
        &self.backward
    }

    pub fn dim(&self) -> usize {
        self.forward.dim
    }
}
