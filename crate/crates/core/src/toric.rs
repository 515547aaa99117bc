//! Smooth complete toric fans in dimension at most 3, used as an independent
//! check on the blow-up, de Rham and Künneth formulas.
//!
//! For a smooth complete toric variety `h^{p,q} = 0` when `p ≠ q` and
//! `h^{p,p}` is the `h`-number
//! `h_p = Σ_{i=p}^{n} (-1)^{i-p} C(i,p) d_{n-i}` of the fan's f-vector,
//! over any ground field. Blowing up the torus-invariant subvariety of a cone
//! is the stellar subdivision at that cone, and the center is the toric
//! variety of the star fan in the quotient lattice.
//!
//! Completeness is checked combinatorially: every ridge lies in exactly two
//! maximal cones, on opposite sides of it, and the adjacency graph of maximal
//! cones is connected. That holds for every complete fan and is what the
//! seeds and their stellar subdivisions need; for arbitrary user fans it is
//! a necessary condition only.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bott::binomial;
use crate::constructors::blow_up;
use crate::grid::{Characteristic, HodgeGrid};
use crate::spectral::{de_rham_blowup, DeRhamDims};
use crate::{Error, Result};

/// Largest lattice rank handled.
pub const MAX_DIM: usize = 3;

/// Simplicial fan given by primitive rays and maximal cones (as sorted
/// ray-index sets).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        _ => (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// Inverse of a unimodular integer matrix (rows are basis vectors), by adjugate.
fn unimodular_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let d = det(m);
    if d.abs() != 1 {
        return None;
    }
    let minor = |skip_r: usize, skip_c: usize| -> Vec<Vec<i64>> {
        m.iter()
            .enumerate()
            .filter(|&(r, _)| r != skip_r)
            .map(|(_, row)| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != skip_c)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect()
    };
    let mut inv = vec![vec![0; n]; n];
    for (r, row) in inv.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            let sign = if (r + c) % 2 == 0 { 1 } else { -1 };
            // inverse = adj / det, adj[r][c] = cofactor[c][r]
            *slot = sign * det(&minor(c, r)) * d;
        }
    }
    Some(inv)
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn normalize(cone: &[usize]) -> Vec<usize> {
    let mut c = cone.to_vec();
    c.sort_unstable();
    c.dedup();
    c
}

impl Fan {
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        let mut max_cones: Vec<Vec<usize>> = max_cones.iter().map(|c| normalize(c)).collect();
        max_cones.sort();
        let fan = Fan {
            dim,
            rays,
            max_cones,
        };
        fan.check()?;
        Ok(fan)
    }

    /// The fan of a point: rank-0 lattice, one empty cone.
    pub fn point() -> Self {
        Fan {
            dim: 0,
            rays: Vec::new(),
            max_cones: vec![Vec::new()],
        }
    }

    /// `P^n`: rays `e_1, ..., e_n, -(e_1 + ... + e_n)`.
    pub fn projective_space(n: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&n) {
            return Err(Error::Range(format!("P^{n} outside 1..={MAX_DIM}")));
        }
        let mut rays: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i64).collect())
            .collect();
        rays.push(vec![-1; n]);
        let all: Vec<usize> = (0..=n).collect();
        Fan::new(n, rays, subsets(&all, n))
    }

    /// Named seed fans: `P1`, `P2`, `P3`, `P1xP1`.
    pub fn seed(name: &str) -> Result<Self> {
        match name {
            "P1" => Fan::projective_space(1),
            "P2" => Fan::projective_space(2),
            "P3" => Fan::projective_space(3),
            "P1xP1" => {
                let p1 = Fan::projective_space(1)?;
                product_fan(&p1, &p1)
            }
            other => Err(Error::Argument(format!(
                "unknown seed {other:?}; expected P1, P2, P3 or P1xP1"
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    fn generators(&self, cone: &[usize]) -> Vec<Vec<i64>> {
        cone.iter().map(|&i| self.rays[i].clone()).collect()
    }

    fn check(&self) -> Result<()> {
        let n = self.dim;
        let bad = |msg: String| Err(Error::InvalidFan(msg));
        if n > MAX_DIM {
            return Err(Error::Range(format!("fan dimension {n} exceeds {MAX_DIM}")));
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != n {
                return bad(format!("ray {i} has {} coordinates, expected {n}", r.len()));
            }
            if gcd_all(r) != 1 {
                return bad(format!("ray {i} = {r:?} is not primitive"));
            }
        }
        let distinct: BTreeSet<&Vec<i64>> = self.rays.iter().collect();
        if distinct.len() != self.rays.len() {
            return bad("repeated ray".to_string());
        }
        if self.max_cones.is_empty() {
            return bad("no maximal cones".to_string());
        }
        let mut used = vec![false; self.rays.len()];
        for cone in &self.max_cones {
            if cone.len() != n {
                return bad(format!("cone {cone:?} does not have {n} rays"));
            }
            if let Some(&i) = cone.iter().find(|&&i| i >= self.rays.len()) {
                return bad(format!("cone {cone:?} refers to missing ray {i}"));
            }
            if det(&self.generators(cone)).abs() != 1 {
                return bad(format!("cone {cone:?} is not unimodular"));
            }
            for &i in cone {
                used[i] = true;
            }
        }
        if used.iter().any(|u| !u) {
            return bad("a ray lies in no maximal cone".to_string());
        }
        if self.max_cones.windows(2).any(|w| w[0] == w[1]) {
            return bad("repeated maximal cone".to_string());
        }
        if n == 0 {
            return if self.max_cones.len() == 1 {
                Ok(())
            } else {
                bad("a rank-0 fan has exactly one cone".to_string())
            };
        }
        // ridge -> maximal cones containing it
        let mut ridges: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for ridge in subsets(cone, n - 1) {
                ridges.entry(ridge).or_default().push(ci);
            }
        }
        let mut adjacency = vec![Vec::new(); self.max_cones.len()];
        for (ridge, owners) in &ridges {
            if owners.len() != 2 {
                return bad(format!(
                    "ridge {ridge:?} lies in {} maximal cones, expected 2",
                    owners.len()
                ));
            }
            let side = |ci: usize| {
                let apex = self.max_cones[ci]
                    .iter()
                    .find(|i| !ridge.contains(i))
                    .copied()
                    .expect("maximal cone strictly contains its ridge");
                let mut m = self.generators(ridge);
                m.push(self.rays[apex].clone());
                det(&m).signum()
            };
            if side(owners[0]) == side(owners[1]) {
                return bad(format!(
                    "maximal cones {:?} and {:?} overlap across ridge {ridge:?}",
                    self.max_cones[owners[0]], self.max_cones[owners[1]]
                ));
            }
            adjacency[owners[0]].push(owners[1]);
            adjacency[owners[1]].push(owners[0]);
        }
        let mut seen = vec![false; self.max_cones.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(c) = queue.pop_front() {
            for &d in &adjacency[c] {
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("maximal cones are not connected through ridges".to_string());
        }
        Ok(())
    }

    /// Order-independent identity of the fan: cones as sets of ray vectors.
    pub fn canonical_key(&self) -> Vec<Vec<Vec<i64>>> {
        let mut cones: Vec<Vec<Vec<i64>>> = self
            .max_cones
            .iter()
            .map(|c| {
                let mut g = self.generators(c);
                g.sort();
                g
            })
            .collect();
        cones.sort();
        cones
    }

    /// All cones with `k` rays, `k = 0..=n`.
    pub fn cones(&self, k: usize) -> Vec<Vec<usize>> {
        let set: BTreeSet<Vec<usize>> = self.max_cones.iter().flat_map(|c| subsets(c, k)).collect();
        set.into_iter().collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Fan = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Fan::new(raw.dim, raw.rays, raw.max_cones)
    }
}

/// `(d_0, ..., d_n)`, the number of cones of each dimension.
pub fn f_vector(f: &Fan) -> Vec<u64> {
    (0..=f.dim).map(|k| f.cones(k).len() as u64).collect()
}

fn h_numbers(f: &Fan) -> Result<Vec<BigUint>> {
    let d = f_vector(f);
    let n = f.dim;
    (0..=n)
        .map(|p| {
            let mut acc = BigInt::from(0);
            for i in p..=n {
                let term = BigInt::from(binomial(i as i64, p as i64)) * BigInt::from(d[n - i]);
                if (i - p) % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc.to_biguint()
                .ok_or_else(|| Error::InvalidFan(format!("negative h-number h_{p}")))
        })
        .collect()
}

/// Hodge grid of the toric variety: diagonal with the fan's `h`-numbers. The
/// values hold in every characteristic; the tag is set to 0.
pub fn hodge_from_fan(f: &Fan) -> Result<HodgeGrid> {
    let h = h_numbers(f)?;
    let n = f.dim;
    let rows = (0..=n)
        .map(|p| {
            (0..=n)
                .map(|q| {
                    if p == q {
                        h[p].clone()
                    } else {
                        BigUint::from(0u32)
                    }
                })
                .collect()
        })
        .collect();
    HodgeGrid::new(n, Characteristic::ZERO, false, rows)
}

/// Betti numbers: `b[2p] = h_p`, odd degrees vanish.
pub fn betti_from_fan(f: &Fan) -> Result<DeRhamDims> {
    let h = h_numbers(f)?;
    let b = (0..=2 * f.dim)
        .map(|l| {
            if l % 2 == 0 {
                h[l / 2].clone()
            } else {
                BigUint::from(0u32)
            }
        })
        .collect();
    DeRhamDims::new(f.dim, b)
}

fn containing<'a>(f: &'a Fan, cone: &'a [usize]) -> impl Iterator<Item = &'a Vec<usize>> + 'a {
    f.max_cones
        .iter()
        .filter(move |c| cone.iter().all(|i| c.contains(i)))
}

fn admissible(f: &Fan, cone: &[usize]) -> Result<Vec<usize>> {
    let cone = normalize(cone);
    if cone.len() < 2 {
        return Err(Error::Codimension(cone.len()));
    }
    if containing(f, &cone).next().is_none() {
        return Err(Error::Argument(format!(
            "{cone:?} is not a cone of the fan"
        )));
    }
    Ok(cone)
}

/// Stellar subdivision at `cone`: the toric blow-up along the orbit closure
/// of `cone`, a center of codimension `|cone|`.
pub fn stellar_subdivision(f: &Fan, cone: &[usize]) -> Result<Fan> {
    let cone = admissible(f, cone)?;
    let mut ray = vec![0i64; f.dim];
    for &i in &cone {
        for (a, b) in ray.iter_mut().zip(&f.rays[i]) {
            *a += b;
        }
    }
    let g = gcd_all(&ray);
    ray.iter_mut().for_each(|x| *x /= g);
    let new_index = f.rays.len();
    let mut rays = f.rays.clone();
    rays.push(ray);
    let mut cones = Vec::new();
    for c in &f.max_cones {
        if cone.iter().all(|i| c.contains(i)) {
            for &drop in &cone {
                let mut sub: Vec<usize> = c.iter().copied().filter(|&i| i != drop).collect();
                sub.push(new_index);
                cones.push(sub);
            }
        } else {
            cones.push(c.clone());
        }
    }
    Fan::new(f.dim, rays, cones)
}

/// Star of `cone` in the quotient lattice `N / span(cone)`: the fan of the
/// torus-invariant subvariety that [`stellar_subdivision`] blows up.
pub fn star_quotient(f: &Fan, cone: &[usize]) -> Result<Fan> {
    let cone = admissible(f, cone)?;
    let k = cone.len();
    let n = f.dim;
    let anchor = containing(f, &cone).next().expect("admissible cone");
    // basis of N: the cone's generators first, then the rest of the anchor
    let mut basis_idx = cone.clone();
    basis_idx.extend(anchor.iter().copied().filter(|i| !cone.contains(i)));
    let basis = f.generators(&basis_idx);
    let inv = unimodular_inverse(&basis).expect("maximal cones are unimodular");
    // coordinates of v in the basis: v = Σ c_j basis_j, c = v · inv
    let project = |v: &[i64]| -> Vec<i64> {
        (k..n)
            .map(|j| (0..n).map(|r| v[r] * inv[r][j]).sum())
            .collect()
    };
    let mut rays: Vec<Vec<i64>> = Vec::new();
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cones = Vec::new();
    for c in containing(f, &cone) {
        let mut quotient_cone = Vec::new();
        for &i in c.iter().filter(|i| !cone.contains(i)) {
            let j = *index.entry(i).or_insert_with(|| {
                rays.push(project(&f.rays[i]));
                rays.len() - 1
            });
            quotient_cone.push(j);
        }
        cones.push(quotient_cone);
    }
    Fan::new(n - k, rays, cones)
}

/// Product fan in the direct-sum lattice.
pub fn product_fan(a: &Fan, b: &Fan) -> Result<Fan> {
    let dim = a.dim + b.dim;
    if dim > MAX_DIM {
        return Err(Error::Range(format!(
            "product dimension {dim} exceeds {MAX_DIM}"
        )));
    }
    let mut rays: Vec<Vec<i64>> = a
        .rays
        .iter()
        .map(|r| {
            r.iter()
                .copied()
                .chain(std::iter::repeat_n(0, b.dim))
                .collect()
        })
        .collect();
    rays.extend(b.rays.iter().map(|r| {
        std::iter::repeat_n(0, a.dim)
            .chain(r.iter().copied())
            .collect()
    }));
    let offset = a.rays.len();
    let cones = a
        .max_cones
        .iter()
        .flat_map(|ca| {
            b.max_cones.iter().map(move |cb| {
                ca.iter()
                    .copied()
                    .chain(cb.iter().map(|&j| j + offset))
                    .collect()
            })
        })
        .collect();
    Fan::new(dim, rays, cones)
}

/// One disagreement found by [`verify_sweep`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepFailure {
    pub fan: Fan,
    pub cone: Vec<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    /// Distinct fans whose subdivisions were checked.
    pub fans: usize,
    /// Blow-up comparisons performed (one per fan and admissible cone).
    pub checks: usize,
    pub failures: Vec<SweepFailure>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares the toric and formula-side answers for one subdivision.
pub fn check_subdivision(f: &Fan, cone: &[usize]) -> Result<Option<String>> {
    let codim = normalize(cone).len();
    let blown = stellar_subdivision(f, cone)?;
    let center = star_quotient(f, cone)?;
    let lhs = hodge_from_fan(&blown)?;
    let rhs = blow_up(&hodge_from_fan(f)?, &hodge_from_fan(&center)?, codim)?;
    if lhs != rhs {
        return Ok(Some(format!(
            "Hodge grids differ: fan gives {}, formula gives {}",
            lhs.to_json(),
            rhs.to_json()
        )));
    }
    let betti = betti_from_fan(&blown)?;
    let expected = de_rham_blowup(&betti_from_fan(f)?, &betti_from_fan(&center)?, codim)?;
    if betti != expected {
        return Ok(Some(format!(
            "Betti numbers differ: fan gives {}, formula gives {}",
            betti.to_json(),
            expected.to_json()
        )));
    }
    let top = *f_vector(&blown).last().expect("non-empty f-vector");
    if lhs.sum() != BigUint::from(top) {
        return Ok(Some(format!(
            "Euler count {} differs from {top} maximal cones",
            lhs.sum()
        )));
    }
    Ok(None)
}

/// Cones of `f` that can be blown up (at least two rays).
pub fn admissible_cones(f: &Fan) -> Vec<Vec<usize>> {
    (2..=f.dim).flat_map(|k| f.cones(k)).collect()
}

/// Per-fan outcome: checks performed, failures, children for the next level.
type LevelResult = Result<(usize, Vec<SweepFailure>, Vec<Fan>)>;

/// Breadth-first sweep over fans reachable from `seed` by fewer than `depth`
/// stellar subdivisions of maximal cones. Every admissible cone of every such
/// fan is subdivided and checked, so all fans up to `depth` subdivisions
/// appear on the left-hand side of some comparison.
pub fn verify_sweep(seed: &Fan, depth: usize) -> Result<SweepReport> {
    let mut report = SweepReport::default();
    let mut seen: BTreeSet<Vec<Vec<Vec<i64>>>> = BTreeSet::from([seed.canonical_key()]);
    let mut level = vec![seed.clone()];
    for step in 0..depth {
        let results: Vec<LevelResult> = level
            .par_iter()
            .map(|f| {
                let mut failures = Vec::new();
                let cones = admissible_cones(f);
                for cone in &cones {
                    if let Some(reason) = check_subdivision(f, cone)? {
                        failures.push(SweepFailure {
                            fan: f.clone(),
                            cone: cone.clone(),
                            reason,
                        });
                    }
                }
                let children = if step + 1 < depth {
                    f.max_cones
                        .iter()
                        .map(|c| stellar_subdivision(f, c))
                        .collect::<Result<Vec<_>>>()?
                } else {
                    Vec::new()
                };
                Ok((cones.len(), failures, children))
            })
            .collect();
        let mut next = Vec::new();
        for r in results {
            let (checks, failures, children) = r?;
            report.fans += 1;
            report.checks += checks;
            report.failures.extend(failures);
            for child in children {
                if seen.insert(child.canonical_key()) {
                    next.push(child);
                }
            }
        }
        level = next;
    }
    Ok(report)
}
