//! De Rham and Hochschild dimension vectors, their behavior under blow-ups and
//! projective bundles, and degeneracy defects of the Hodge–de Rham (`E1`) and
//! HKR (`E2`) spectral sequences.
//!
//! De Rham and Hochschild dimensions are always inputs. The only place where
//! they are derived from a Hodge grid is [`hh_from_grid`], which refuses to
//! run unless `char(k) = 0` or `char(k) ≥ dim X`, the range where the strong
//! HKR decomposition is known.
//!
//! A defect is `upper bound − actual dimension` per degree. Degeneracy is
//! the statement that every entry vanishes, and the blow-up and bundle laws
//! below make defects additive, so degeneracy of a blow-up is equivalent to
//! degeneracy of both the ambient variety and the center.

use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Deserialize, Serialize};

use crate::grid::HodgeGrid;
use crate::json::{nats, unnats, JsonNat};
use crate::{Error, Result};

fn check_codim(dim_x: usize, dim_z: usize, codim: usize) -> Result<()> {
    if codim < 2 {
        return Err(Error::Codimension(codim));
    }
    if dim_z + codim != dim_x {
        return Err(Error::Argument(format!(
            "center of dimension {dim_z} cannot have codimension {codim} in dimension {dim_x}"
        )));
    }
    Ok(())
}

fn read(values: &[BigUint], idx: i64) -> &BigUint {
    static ZERO: BigUint = BigUint::ZERO;
    if idx < 0 {
        &ZERO
    } else {
        values.get(idx as usize).unwrap_or(&ZERO)
    }
}

/// Shift-and-add along a degree vector: `out[l] = x[l] + Σ_{i=1}^{codim-1} z[l - 2i]`.
fn add_shifted(x: &[BigUint], z: &[BigUint], codim: usize) -> Vec<BigUint> {
    (0..x.len() as i64)
        .map(|l| {
            let mut v = x[l as usize].clone();
            for i in 1..codim as i64 {
                v += read(z, l - 2 * i);
            }
            v
        })
        .collect()
}

/// Algebraic de Rham dimensions `b[l] = dim H^l_dR`, `l = 0..=2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeRhamDims {
    dim: usize,
    twisted: bool,
    b: Vec<BigUint>,
}

impl DeRhamDims {
    pub fn new(dim: usize, b: Vec<BigUint>) -> Result<Self> {
        Self::build(dim, false, b)
    }

    /// De Rham dimensions with coefficients in a bundle with integrable
    /// connection. `b[0] ≥ 1` is not required.
    pub fn twisted(dim: usize, b: Vec<BigUint>) -> Result<Self> {
        Self::build(dim, true, b)
    }

    pub fn from_u64(dim: usize, b: &[u64]) -> Result<Self> {
        Self::new(dim, b.iter().map(|&v| BigUint::from(v)).collect())
    }

    fn build(dim: usize, twisted: bool, b: Vec<BigUint>) -> Result<Self> {
        if b.len() != 2 * dim + 1 {
            return Err(Error::Argument(format!(
                "de Rham vector of dimension {dim} needs {} entries, got {}",
                2 * dim + 1,
                b.len()
            )));
        }
        if !twisted && b[0].is_zero() {
            return Err(Error::Argument("b[0] must be at least 1".to_string()));
        }
        Ok(DeRhamDims { dim, twisted, b })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_twisted(&self) -> bool {
        self.twisted
    }

    pub fn values(&self) -> &[BigUint] {
        &self.b
    }

    pub fn get(&self, l: i64) -> &BigUint {
        read(&self.b, l)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DeRhamRepr {
            dim: self.dim,
            b: nats(&self.b),
            twisted: self.twisted,
        })
        .expect("serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: DeRhamRepr =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::build(repr.dim, repr.twisted, unnats(repr.b))
    }
}

#[derive(Serialize, Deserialize)]
struct DeRhamRepr {
    dim: usize,
    b: Vec<JsonNat>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    twisted: bool,
}

/// Hochschild homology dimensions `hh[l] = dim HH_l`, `l = -n..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildDims {
    dim: usize,
    // stored at offset l + n
    hh: Vec<BigUint>,
}

impl HochschildDims {
    /// `hh` lists `HH_{-n}, ..., HH_n`.
    pub fn new(dim: usize, hh: Vec<BigUint>) -> Result<Self> {
        if hh.len() != 2 * dim + 1 {
            return Err(Error::Argument(format!(
                "Hochschild vector of dimension {dim} needs {} entries, got {}",
                2 * dim + 1,
                hh.len()
            )));
        }
        Ok(HochschildDims { dim, hh })
    }

    pub fn from_u64(dim: usize, hh: &[u64]) -> Result<Self> {
        Self::new(dim, hh.iter().map(|&v| BigUint::from(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degrees(&self) -> RangeInclusive<i64> {
        -(self.dim as i64)..=self.dim as i64
    }

    /// `HH_l`, zero outside `-n..=n`.
    pub fn get(&self, l: i64) -> &BigUint {
        read(&self.hh, l + self.dim as i64)
    }

    pub fn values(&self) -> &[BigUint] {
        &self.hh
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: HochschildRepr =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let n = repr.dim as i64;
        let mut hh = vec![None; 2 * repr.dim + 1];
        for (key, value) in repr.hh {
            let l = parse_signed_key(&key)?;
            if !(-n..=n).contains(&l) {
                return Err(Error::Format(format!("degree {key} outside -{n}..={n}")));
            }
            let slot = &mut hh[(l + n) as usize];
            if slot.is_some() {
                return Err(Error::Format(format!("degree {l} given twice")));
            }
            *slot = Some(value.0);
        }
        let hh = hh
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| Error::Format(format!("missing degree {}", i as i64 - n)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(repr.dim, hh)
    }
}

/// Degree labels carry an explicit sign for positive degrees: `"-1"`, `"0"`, `"+1"`.
pub fn signed_key(l: i64) -> String {
    if l > 0 {
        format!("+{l}")
    } else {
        l.to_string()
    }
}

fn parse_signed_key(key: &str) -> Result<i64> {
    let digits = key
        .strip_prefix('+')
        .or_else(|| key.strip_prefix('-'))
        .unwrap_or(key);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Format(format!("invalid degree label {key:?}")));
    }
    key.trim_start_matches('+')
        .parse()
        .map_err(|_| Error::Format(format!("invalid degree label {key:?}")))
}

#[derive(Deserialize)]
struct HochschildRepr {
    dim: usize,
    hh: std::collections::BTreeMap<String, JsonNat>,
}

struct LabelledDegrees<'a>(&'a HochschildDims);

impl Serialize for LabelledDegrees<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.hh.len()))?;
        for l in self.0.degrees() {
            map.serialize_entry(&signed_key(l), &JsonNat(self.0.get(l).clone()))?;
        }
        map.end()
    }
}

impl Serialize for HochschildDims {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("dim", &self.dim)?;
        map.serialize_entry("hh", &LabelledDegrees(self))?;
        map.end()
    }
}

/// Which spectral sequence a defect vector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefectKind {
    /// Hodge–de Rham, degrees `0..=2n`.
    E1,
    /// HKR, degrees `-n..=n`.
    E2,
}

/// Per-degree gap between a spectral-sequence bound and the supplied abutment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectVector {
    dim: usize,
    kind: DefectKind,
    d: Vec<BigUint>,
}

impl DefectVector {
    pub fn new(dim: usize, kind: DefectKind, d: Vec<BigUint>) -> Result<Self> {
        if d.len() != 2 * dim + 1 {
            return Err(Error::Argument(format!(
                "defect vector of dimension {dim} needs {} entries, got {}",
                2 * dim + 1,
                d.len()
            )));
        }
        Ok(DefectVector { dim, kind, d })
    }

    pub fn zero(dim: usize, kind: DefectKind) -> Self {
        DefectVector {
            dim,
            kind,
            d: vec![BigUint::zero(); 2 * dim + 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> DefectKind {
        self.kind
    }

    fn offset(&self) -> i64 {
        match self.kind {
            DefectKind::E1 => 0,
            DefectKind::E2 => self.dim as i64,
        }
    }

    pub fn degrees(&self) -> RangeInclusive<i64> {
        let lo = -self.offset();
        lo..=lo + 2 * self.dim as i64
    }

    /// Defect in degree `l`, zero outside the range.
    pub fn get(&self, l: i64) -> &BigUint {
        read(&self.d, l + self.offset())
    }

    pub fn values(&self) -> &[BigUint] {
        &self.d
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, &BigUint)> + '_ {
        self.degrees().zip(self.d.iter())
    }

    /// All-zero: the spectral sequence degenerates for the supplied data.
    pub fn is_zero(&self) -> bool {
        self.d.iter().all(Zero::is_zero)
    }

    /// `[{"degree": l, "defect": d}, ...]` in increasing degree.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialization is infallible")
    }
}

impl Serialize for DefectVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            degree: i64,
            defect: JsonNat,
        }
        let mut seq = s.serialize_seq(Some(self.d.len()))?;
        for (degree, d) in self.entries() {
            seq.serialize_element(&Entry {
                degree,
                defect: JsonNat(d.clone()),
            })?;
        }
        seq.end()
    }
}

/// `bound − actual` per degree, rejecting negative gaps.
fn gaps(
    bound: &[BigUint],
    actual: &[BigUint],
    degrees: RangeInclusive<i64>,
) -> Result<Vec<BigUint>> {
    bound
        .iter()
        .zip(actual)
        .zip(degrees)
        .map(|((u, a), l)| {
            if a > u {
                Err(Error::Inconsistent(format!(
                    "degree {l}: dimension {a} exceeds its spectral-sequence bound {u}"
                )))
            } else {
                Ok(u - a)
            }
        })
        .collect()
}

/// De Rham dimensions of the blow-up: `b[l] = bx[l] + Σ_{i=1}^{c-1} bz[l-2i]`.
pub fn de_rham_blowup(bx: &DeRhamDims, bz: &DeRhamDims, codim: usize) -> Result<DeRhamDims> {
    if bx.twisted || bz.twisted {
        return Err(Error::Hypothesis(
            "twisted de Rham blow-up needs de_rham_blowup_twisted with an explicit assumption"
                .to_string(),
        ));
    }
    check_codim(bx.dim, bz.dim, codim)?;
    DeRhamDims::new(bx.dim, add_shifted(&bx.b, &bz.b, codim))
}

/// Whether the caller assumes the twisted de Rham blow-up decomposition in
/// positive characteristic. It is not known to hold, so the default refuses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TwistedDeRhamBlowup {
    #[default]
    Unassumed,
    Assumed,
}

/// Twisted analogue of [`de_rham_blowup`], conditional on
/// [`TwistedDeRhamBlowup::Assumed`].
pub fn de_rham_blowup_twisted(
    bx: &DeRhamDims,
    bz: &DeRhamDims,
    codim: usize,
    assumption: TwistedDeRhamBlowup,
) -> Result<DeRhamDims> {
    if assumption == TwistedDeRhamBlowup::Unassumed {
        return Err(Error::Hypothesis(
            "the twisted de Rham blow-up decomposition is an open question; pass Assumed to proceed"
                .to_string(),
        ));
    }
    check_codim(bx.dim, bz.dim, codim)?;
    DeRhamDims::build(bx.dim, true, add_shifted(&bx.b, &bz.b, codim))
}

/// Hodge–de Rham defect `d[l] = total_hodge(g, l) − b[l]`.
pub fn e1_defect(g: &HodgeGrid, b: &DeRhamDims) -> Result<DefectVector> {
    if g.dim() != b.dim {
        return Err(Error::Argument(format!(
            "grid of dimension {} with de Rham data of dimension {}",
            g.dim(),
            b.dim
        )));
    }
    if g.is_twisted() != b.twisted {
        return Err(Error::Argument(
            "grid and de Rham data disagree on twisting".to_string(),
        ));
    }
    let n = g.dim() as i64;
    let d = gaps(&g.total_hodge_vector(), &b.b, 0..=2 * n)?;
    DefectVector::new(g.dim(), DefectKind::E1, d)
}

fn expect_kind(d: &DefectVector, kind: DefectKind) -> Result<()> {
    if d.kind != kind {
        return Err(Error::Argument(format!(
            "expected an {kind:?} defect vector, got {:?}",
            d.kind
        )));
    }
    Ok(())
}

/// Hodge–de Rham defect of a blow-up from the defects of `X` and `Z`.
pub fn e1_defect_blowup(
    dx: &DefectVector,
    dz: &DefectVector,
    codim: usize,
) -> Result<DefectVector> {
    expect_kind(dx, DefectKind::E1)?;
    expect_kind(dz, DefectKind::E1)?;
    check_codim(dx.dim, dz.dim, codim)?;
    DefectVector::new(dx.dim, DefectKind::E1, add_shifted(&dx.d, &dz.d, codim))
}

/// `HH_l(X̃) = HH_l(X) ⊕ HH_l(Z)^{⊕(c-1)}`.
pub fn hh_blowup(hx: &HochschildDims, hz: &HochschildDims, codim: usize) -> Result<HochschildDims> {
    check_codim(hx.dim, hz.dim, codim)?;
    let times = BigUint::from(codim - 1);
    let hh = hx
        .degrees()
        .map(|l| hx.get(l) + &times * hz.get(l))
        .collect();
    HochschildDims::new(hx.dim, hh)
}

/// `HH_l(P(E)) = HH_l(X)^{⊕c}` for `E` of rank `c`.
pub fn hh_projbundle(hx: &HochschildDims, rank: usize) -> Result<HochschildDims> {
    if rank < 1 {
        return Err(Error::Argument(format!(
            "projective bundle rank must be at least 1, got {rank}"
        )));
    }
    let dim = hx.dim + rank - 1;
    let n = dim as i64;
    let times = BigUint::from(rank);
    let hh = (-n..=n).map(|l| &times * hx.get(l)).collect();
    HochschildDims::new(dim, hh)
}

/// Hochschild dimensions read off the grid's anti-diagonals, valid under the
/// strong HKR decomposition (`char(k) = 0` or `char(k) ≥ dim X`).
pub fn hh_from_grid(g: &HodgeGrid) -> Result<HochschildDims> {
    if g.is_twisted() {
        return Err(Error::Unsupported(
            "Hochschild dimensions of a twisted grid".to_string(),
        ));
    }
    if !g.characteristic().at_least(g.dim()) {
        return Err(Error::Hypothesis(format!(
            "strong HKR needs char(k) = 0 or char(k) >= dim X; got char {} and dim {}",
            g.characteristic(),
            g.dim()
        )));
    }
    HochschildDims::new(g.dim(), g.anti_diagonal_vector())
}

/// HKR defect `d[l] = anti_diagonal(g, l) − hh[l]`.
pub fn e2_defect(g: &HodgeGrid, hh: &HochschildDims) -> Result<DefectVector> {
    if g.dim() != hh.dim {
        return Err(Error::Argument(format!(
            "grid of dimension {} with Hochschild data of dimension {}",
            g.dim(),
            hh.dim
        )));
    }
    let d = gaps(&g.anti_diagonal_vector(), &hh.hh, hh.degrees())?;
    DefectVector::new(g.dim(), DefectKind::E2, d)
}

/// HKR defect of a blow-up: `d[l] = dx[l] + (c-1)·dz[l]`.
pub fn e2_defect_blowup(
    dx: &DefectVector,
    dz: &DefectVector,
    codim: usize,
) -> Result<DefectVector> {
    expect_kind(dx, DefectKind::E2)?;
    expect_kind(dz, DefectKind::E2)?;
    check_codim(dx.dim, dz.dim, codim)?;
    let times = BigUint::from(codim - 1);
    let d = dx
        .degrees()
        .map(|l| dx.get(l) + &times * dz.get(l))
        .collect();
    DefectVector::new(dx.dim, DefectKind::E2, d)
}

/// HKR defect of a projective bundle of rank `c`: `c·d[l]`.
pub fn e2_defect_projbundle(dx: &DefectVector, rank: usize) -> Result<DefectVector> {
    expect_kind(dx, DefectKind::E2)?;
    if rank < 1 {
        return Err(Error::Argument(format!(
            "projective bundle rank must be at least 1, got {rank}"
        )));
    }
    let dim = dx.dim + rank - 1;
    let n = dim as i64;
    let times = BigUint::from(rank);
    let d = (-n..=n).map(|l| &times * dx.get(l)).collect();
    DefectVector::new(dim, DefectKind::E2, d)
}

/// Compares total Hodge dimensions with coefficients in `L^{⊗j}` against
/// those for `L` itself, for every supplied `j` coprime to `m`.
///
/// `grids[i]` is the grid for `L^{⊗exponents[i]}`. The result has one entry
/// per degree `l = 0..=2n`, `true` where every grid agrees with the grid for
/// exponent 1.
pub fn eo_check(grids: &[HodgeGrid], m: u64, exponents: &[i64]) -> Result<Vec<bool>> {
    if m < 1 {
        return Err(Error::Argument(
            "torsion order m must be positive".to_string(),
        ));
    }
    if grids.len() != exponents.len() {
        return Err(Error::Argument(format!(
            "{} grids for {} exponents",
            grids.len(),
            exponents.len()
        )));
    }
    for &j in exponents {
        if j.unsigned_abs().gcd(&m) != 1 {
            return Err(Error::Argument(format!(
                "exponent {j} is not coprime to {m}"
            )));
        }
    }
    let base = exponents
        .iter()
        .position(|&j| j == 1)
        .ok_or_else(|| Error::Argument("exponent 1 must be supplied".to_string()))?;
    let reference = &grids[base];
    if let Some(g) = grids.iter().find(|g| g.dim() != reference.dim()) {
        return Err(Error::Argument(format!(
            "grids of dimensions {} and {}",
            g.dim(),
            reference.dim()
        )));
    }
    let expected = reference.total_hodge_vector();
    let totals: Vec<Vec<BigUint>> = grids.iter().map(HodgeGrid::total_hodge_vector).collect();
    Ok((0..expected.len())
        .map(|l| totals.iter().all(|t| t[l] == expected[l]))
        .collect())
}
