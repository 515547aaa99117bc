//! Cohomology of twisted differential forms on projective space,
//! `h^q(P^n, Ω^p(m))`.
//!
//! [`bott_h`] is the closed form. [`bott_oracle`] recomputes the same number
//! without it: an induction on `p` through the twisted Euler sequences
//!
//! ```text
//! 0 → Ω^p(m) → O(m-p)^{C(n+1,p)} → Ω^{p-1}(m) → 0
//! ```
//!
//! starting from `Ω^0(m) = O(m)`. Line bundles only have cohomology in degrees
//! `0` and `n`, so every connecting map in the long exact sequence is pinned
//! down by exactness once `h^0(Ω^p(m))` is known, and that is the kernel of
//! the Koszul differential `Λ^p k^{n+1} ⊗ S_{m-p} → Λ^{p-1} k^{n+1} ⊗ S_{m-p+1}`
//! on the polynomial ring, whose dimension follows from exactness of the
//! Koszul complex in positive degree.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Largest `n` accepted by [`bott_oracle`].
pub const ORACLE_MAX_DIM: u32 = 5;
/// Largest `|m|` accepted by [`bott_oracle`].
pub const ORACLE_MAX_TWIST: i64 = 8;

/// Index of `H^q(P^n, Ω^p(m))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BottQuery {
    n: u32,
    p: u32,
    m: i64,
    q: u32,
}

impl BottQuery {
    pub fn new(n: u32, p: u32, m: i64, q: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::Argument("projective space needs n >= 1".to_string()));
        }
        if p > n || q > n {
            return Err(Error::Range(format!(
                "need 0 <= p, q <= {n}, got p = {p}, q = {q}"
            )));
        }
        Ok(BottQuery { n, p, m, q })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }
}

/// `C(a, b)`, zero when `b < 0` or `a < b`.
pub fn binomial(a: i64, b: i64) -> BigUint {
    if b < 0 || a < b {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= BigUint::from((a - i) as u64);
        acc /= BigUint::from((i + 1) as u64);
    }
    acc
}

/// Closed form for `h^q(P^n, Ω^p(m))`.
pub fn bott_h(query: BottQuery) -> BigUint {
    let BottQuery { n, p, m, q } = query;
    let (n, p, q) = (n as i64, p as i64, q as i64);
    if q == 0 && m > p {
        binomial(m + n - p, m) * binomial(m - 1, p)
    } else if m == 0 && q == p {
        BigUint::one()
    } else if q == n && m < p - n {
        binomial(-m + p, -m) * binomial(-m - 1, n - p)
    } else {
        BigUint::zero()
    }
}

/// Full `(p, q)` table of `h^q(P^n, Ω^p(m))` for fixed `n` and `m`.
pub fn bott_table(n: u32, m: i64) -> Result<Vec<Vec<BigUint>>> {
    (0..=n)
        .map(|p| {
            (0..=n)
                .map(|q| BottQuery::new(n, p, m, q).map(bott_h))
                .collect()
        })
        .collect()
}

/// A twisted cohomology group on projective space that fails to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub query: BottQuery,
    pub value: BigUint,
}

/// Checks `h^q(P^n, Ω^p(m)) = 0` for `1 ≤ q ≤ n`, `1 ≤ m ≤ bound_m` and all `p`.
pub fn bott_vanishing_check(n: u32, bound_m: i64) -> Result<(), Counterexample> {
    for m in 1..=bound_m {
        for p in 0..=n {
            for q in 1..=n {
                let query = BottQuery::new(n, p, m, q).expect("indices in range");
                let value = bott_h(query);
                if !value.is_zero() {
                    return Err(Counterexample { query, value });
                }
            }
        }
    }
    Ok(())
}

fn check_oracle_scale(n: u32, m: i64) -> Result<()> {
    if n > ORACLE_MAX_DIM || m.abs() > ORACLE_MAX_TWIST {
        return Err(Error::Range(format!(
            "oracle handles n <= {ORACLE_MAX_DIM} and |m| <= {ORACLE_MAX_TWIST}, got n = {n}, m = {m}"
        )));
    }
    Ok(())
}

/// `h^q(P^n, O(d))` for `q = 0..=n`.
fn line_bundle(n: i64, d: i64) -> Vec<BigInt> {
    let mut h = vec![BigInt::zero(); n as usize + 1];
    if d >= 0 {
        h[0] = binomial(d + n, n).into();
    }
    if d < -n {
        h[n as usize] = binomial(-d - 1, n).into();
    }
    h
}

/// `dim ker(Λ^p W ⊗ S_{m-p} → Λ^{p-1} W ⊗ S_{m-p+1})`, `W = k^{n+1}`, which is
/// `h^0(Ω^p(m))`.
fn koszul_kernel(n: i64, p: i64, m: i64) -> BigInt {
    if m < 0 {
        return BigInt::zero();
    }
    if m == 0 {
        // degree-0 strand is k in homological degree 0
        return if p == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        };
    }
    // exact in positive degree: ker d_p = im d_{p+1} = alternating tail sum
    let mut acc = BigInt::zero();
    for j in (p + 1)..=(n + 1) {
        let term = BigInt::from(binomial(n + 1, j)) * BigInt::from(binomial(m - j + n, n));
        if (j - p - 1) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn scaled(v: &[BigInt], k: &BigInt) -> Vec<BigInt> {
    v.iter().map(|x| x * k).collect()
}

fn rank_step(dim: &BigInt, incoming: &BigInt) -> Result<BigInt> {
    let r = dim - incoming;
    if r.sign() == Sign::Minus {
        return Err(Error::Inconsistent(format!(
            "long exact sequence forces a negative rank ({dim} - {incoming})"
        )));
    }
    Ok(r)
}

/// Cohomology of `Ω^p(m)` from that of `Ω^{p-1}(m)` (`prev`) and of the middle
/// term `O(m-p)^{C(n+1,p)}` (`mid`), given `h^0(Ω^p(m))`.
fn chase(n: usize, h0: BigInt, mid: &[BigInt], prev: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut out = vec![BigInt::zero(); n + 1];
    out[0] = h0;
    // rank of the map leaving out[q]
    let mut leaving = out[0].clone();
    for q in 0..=n {
        if q > 0 {
            // prev[q-1] → out[q] → mid[q]
            let into = leaving.clone();
            let out_rank = if q == n {
                // mid[n] → prev[n] → 0 is surjective
                rank_step(&mid[n], &prev[n])?
            } else if mid[q].is_zero() {
                BigInt::zero()
            } else {
                return Err(Error::Inconsistent(format!(
                    "middle term has cohomology in degree {q}"
                )));
            };
            out[q] = into + &out_rank;
            leaving = out_rank;
        }
        if q == n {
            break;
        }
        // out[q] → mid[q] → prev[q] → out[q+1]
        let mid_rank = rank_step(&mid[q], &leaving)?;
        leaving = rank_step(&prev[q], &mid_rank)?;
    }
    Ok(out)
}

/// `h^q(P^n, Ω^p(m))` for all `(p, q)` at one twist, by the Euler-sequence chase.
pub fn oracle_table(n: u32, m: i64) -> Result<Vec<Vec<BigUint>>> {
    check_oracle_scale(n, m)?;
    if n < 1 {
        return Err(Error::Argument("projective space needs n >= 1".to_string()));
    }
    let ni = n as i64;
    let mut rows: Vec<Vec<BigInt>> = vec![line_bundle(ni, m)];
    for p in 1..=ni {
        let mult = BigInt::from(binomial(ni + 1, p));
        let mid = scaled(&line_bundle(ni, m - p), &mult);
        let h0 = koszul_kernel(ni, p, m);
        let row = chase(n as usize, h0, &mid, &rows[p as usize - 1])?;
        rows.push(row);
    }
    rows.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| {
                    v.to_biguint().ok_or_else(|| {
                        Error::Inconsistent("negative dimension from the chase".to_string())
                    })
                })
                .collect()
        })
        .collect()
}

/// Independent recomputation of [`bott_h`] on the scale `n ≤ 5`, `|m| ≤ 8`.
pub fn bott_oracle(query: BottQuery) -> Result<BigUint> {
    let table = oracle_table(query.n, query.m)?;
    Ok(table[query.p as usize][query.q as usize].clone())
}

/// `χ(P^n, Ω^p(m))` from line-bundle cohomology alone, via
/// `χ(Ω^p(m)) = C(n+1,p)·χ(O(m-p)) − χ(Ω^{p-1}(m))`.
pub fn oracle_euler_characteristic(n: u32, p: u32, m: i64) -> BigInt {
    let ni = n as i64;
    let chi_line = |d: i64| -> BigInt {
        line_bundle(ni, d)
            .into_iter()
            .enumerate()
            .map(|(q, v)| if q % 2 == 0 { v } else { -v })
            .sum()
    };
    let mut chi = chi_line(m);
    for j in 1..=p as i64 {
        chi = BigInt::from(binomial(ni + 1, j)) * chi_line(m - j) - chi;
    }
    chi
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u32, p: u32, m: i64, qq: u32) -> BottQuery {
        BottQuery::new(n, p, m, qq).unwrap()
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(2, 3), BigUint::zero());
        assert_eq!(binomial(3, -1), BigUint::zero());
        assert_eq!(binomial(-1, 0), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
    }

    #[test]
    fn documented_values() {
        assert_eq!(bott_h(q(1, 1, 3, 0)), BigUint::from(2u32));
        assert_eq!(bott_h(q(2, 2, 3, 0)), BigUint::one());
        assert_eq!(bott_h(q(3, 3, 0, 3)), BigUint::one());
        assert!(bott_h(q(2, 1, 1, 1)).is_zero());
        assert!(bott_h(q(2, 1, 1, 2)).is_zero());
        for n in 1..5 {
            for p in 0..=n {
                assert_eq!(bott_h(q(n, p, 0, p)), BigUint::one());
            }
        }
    }

    #[test]
    fn oracle_documented_values() {
        assert_eq!(bott_oracle(q(1, 1, 3, 0)).unwrap(), BigUint::from(2u32));
        assert_eq!(bott_oracle(q(2, 2, 3, 0)).unwrap(), BigUint::one());
        assert_eq!(bott_oracle(q(3, 3, 0, 3)).unwrap(), BigUint::one());
        // tangent bundle of the plane: Ω^1(3) ≅ T(0) has 8 sections
        assert_eq!(bott_oracle(q(2, 1, 3, 0)).unwrap(), BigUint::from(8u32));
    }

    #[test]
    fn oracle_scale_is_bounded() {
        assert!(matches!(bott_oracle(q(6, 0, 0, 0)), Err(Error::Range(_))));
        assert!(matches!(bott_oracle(q(2, 0, 9, 0)), Err(Error::Range(_))));
        assert!(matches!(bott_oracle(q(2, 0, -9, 0)), Err(Error::Range(_))));
    }

    #[test]
    fn query_ranges() {
        assert!(BottQuery::new(0, 0, 0, 0).is_err());
        assert!(BottQuery::new(2, 3, 0, 0).is_err());
        assert!(BottQuery::new(2, 0, 0, 3).is_err());
    }

    #[test]
    fn vanishing_sweeps() {
        assert_eq!(bott_vanishing_check(3, 10), Ok(()));
        assert_eq!(bott_vanishing_check(1, 10), Ok(()));
    }

    #[test]
    fn table_shape() {
        let t = bott_table(2, 0).unwrap();
        assert_eq!(t.len(), 3);
        for (p, row) in t.iter().enumerate() {
            for (qq, v) in row.iter().enumerate() {
                assert_eq!(v.is_one(), p == qq);
            }
        }
    }
}
