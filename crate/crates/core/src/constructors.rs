//! Grids of atomic varieties and the three grid-transforming formulas:
//! Künneth products, projective bundles and blow-ups along smooth centers.
//!
//! None of these operations can see the geometry. `blow_up(x, z, c)` trusts
//! the caller that `z` is the grid of a smooth closed subvariety of
//! codimension `c` in the variety whose grid is `x` (and, for twisted grids,
//! that `z` carries the restricted coefficients); only the dimension
//! arithmetic is checked.
//!
//! Curves are assigned the diamond `(1, g; g, 1)` in every characteristic.

use num_bigint::BigUint;
use num_traits::One;

use crate::grid::{Characteristic, GridPair, HodgeGrid};
use crate::{Error, Result};

/// The 0-dimensional grid `[[1]]`.
pub fn point() -> HodgeGrid {
    HodgeGrid::from_rows(&[[1]]).expect("1x1 grid")
}

/// `h^q(P^n, Ω^p) = δ_{pq}`.
pub fn projective_space(n: usize) -> Result<HodgeGrid> {
    if n < 1 {
        return Err(Error::Argument(format!(
            "projective space needs dimension at least 1, got {n}"
        )));
    }
    let mut g = HodgeGrid::zeros(n, Characteristic::ZERO, false);
    for i in 0..=n {
        *g.entry_mut(i, i) = BigUint::one();
    }
    Ok(g)
}

/// Smooth proper curve of genus `g`.
pub fn curve(genus: BigUint) -> HodgeGrid {
    let mut c = HodgeGrid::zeros(1, Characteristic::ZERO, false);
    *c.entry_mut(0, 0) = BigUint::one();
    *c.entry_mut(1, 1) = BigUint::one();
    *c.entry_mut(0, 1) = genus.clone();
    *c.entry_mut(1, 0) = genus;
    c
}

fn common_char(a: &HodgeGrid, b: &HodgeGrid) -> Result<Characteristic> {
    if a.characteristic() != b.characteristic() {
        return Err(Error::Argument(format!(
            "grids over characteristics {} and {}",
            a.characteristic(),
            b.characteristic()
        )));
    }
    Ok(a.characteristic())
}

/// Künneth formula: the bigraded convolution of the two grids.
pub fn product(a: &HodgeGrid, b: &HodgeGrid) -> Result<HodgeGrid> {
    if a.is_twisted() || b.is_twisted() {
        return Err(Error::Unsupported(
            "Künneth product of twisted grids".to_string(),
        ));
    }
    let char = common_char(a, b)?;
    let (na, nb) = (a.dim(), b.dim());
    let mut out = HodgeGrid::zeros(na + nb, char, false);
    for (r, row_a) in a.rows().iter().enumerate() {
        for (s, x) in row_a.iter().enumerate() {
            if *x == BigUint::ZERO {
                continue;
            }
            for (t, row_b) in b.rows().iter().enumerate() {
                for (u, y) in row_b.iter().enumerate() {
                    *out.entry_mut(r + t, s + u) += x * y;
                }
            }
        }
    }
    Ok(out)
}

/// Projective bundle `P(E) → base` for a locally free `E` of rank `rank`:
/// `h[p][q] = Σ_{i=0}^{rank-1} base[p-i][q-i]`.
pub fn projective_bundle(base: &HodgeGrid, rank: usize) -> Result<HodgeGrid> {
    if rank < 1 {
        return Err(Error::Argument(format!(
            "projective bundle rank must be at least 1, got {rank}"
        )));
    }
    if base.is_twisted() {
        return Err(Error::Unsupported(
            "projective bundle over a twisted grid".to_string(),
        ));
    }
    let n = base.dim() + rank - 1;
    let mut out = HodgeGrid::zeros(n, base.characteristic(), false);
    for p in 0..=n {
        for q in 0..=n {
            let e = out.entry_mut(p, q);
            for i in 0..rank {
                *e += base.get(p as i64 - i as i64, q as i64 - i as i64);
            }
        }
    }
    Ok(out)
}

/// Blow-up of `x` along a center `z` of codimension `codim`:
/// `h[p][q] = x[p][q] + Σ_{i=1}^{codim-1} z[p-i][q-i]`.
pub fn blow_up(x: &HodgeGrid, z: &HodgeGrid, codim: usize) -> Result<HodgeGrid> {
    if codim < 2 {
        return Err(Error::Codimension(codim));
    }
    if z.dim() + codim != x.dim() {
        return Err(Error::Argument(format!(
            "center of dimension {} cannot have codimension {codim} in dimension {}",
            z.dim(),
            x.dim()
        )));
    }
    if x.is_twisted() != z.is_twisted() {
        return Err(Error::Argument(
            "ambient and center grids must both be twisted or both untwisted".to_string(),
        ));
    }
    common_char(x, z)?;
    let n = x.dim();
    let mut out = x.clone();
    for p in 0..=n {
        for q in 0..=n {
            let e = out.entry_mut(p, q);
            for i in 1..codim {
                *e += z.get(p as i64 - i as i64, q as i64 - i as i64);
            }
        }
    }
    Ok(out)
}

/// Blow-up of a Serre-paired twisted grid: the `V` side uses `ι*V` on the
/// center and the `V^∨` side uses `ι*V^∨`.
pub fn blow_up_pair(x: &GridPair, z: &GridPair, codim: usize) -> Result<GridPair> {
    let forward = blow_up(x.forward(), z.forward(), codim)?;
    let backward = blow_up(x.backward(), z.backward(), codim)?;
    GridPair::new(forward, backward)
}
