#![allow(dead_code)]

use hodgecalc::dsl::VarietyExpr;
use hodgecalc::spectral::{DeRhamDims, HochschildDims};
use hodgecalc::{Characteristic, HodgeGrid};
use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// A random untwisted grid of dimension `n` obeying the Serre pairing.
pub fn serre_grid(rng: &mut impl Rng, n: usize, max_entry: u64) -> HodgeGrid {
    let mut rows = vec![vec![0u64; n + 1]; n + 1];
    for p in 0..=n {
        for q in 0..=n {
            let (dp, dq) = (n - p, n - q);
            if (p, q) <= (dp, dq) {
                let v = rng.gen_range(0..=max_entry);
                rows[p][q] = v;
                rows[dp][dq] = v;
            }
        }
    }
    rows[0][0] = 1;
    rows[n][n] = 1;
    HodgeGrid::from_rows(&rows).unwrap()
}

/// A random blow-up configuration: ambient, center and codimension.
pub fn blowup_instance(rng: &mut impl Rng, max_dim: usize) -> (HodgeGrid, HodgeGrid, usize) {
    let n = rng.gen_range(2..=max_dim);
    let c = rng.gen_range(2..=n);
    let x = serre_grid(rng, n, 9);
    let z = serre_grid(rng, n - c, 9);
    (x, z, c)
}

/// Same as [`blowup_instance`] with both grids tagged by `char`.
pub fn blowup_instance_in(
    rng: &mut impl Rng,
    max_dim: usize,
    char: Characteristic,
) -> (HodgeGrid, HodgeGrid, usize) {
    let (x, z, c) = blowup_instance(rng, max_dim);
    (x.with_characteristic(char), z.with_characteristic(char), c)
}

fn below(rng: &mut impl Rng, bound: &BigUint, exact: bool) -> BigUint {
    if exact || bound == &BigUint::from(0u32) {
        return bound.clone();
    }
    let cap: u64 = bound.try_into().unwrap_or(u64::MAX);
    big(rng.gen_range(0..=cap))
}

/// De Rham data that the grid bounds from above. With `exact` the bound is
/// attained everywhere, i.e. the E1 defect vanishes.
pub fn de_rham_under(rng: &mut impl Rng, g: &HodgeGrid, exact: bool) -> DeRhamDims {
    let mut b: Vec<BigUint> = g
        .total_hodge_vector()
        .iter()
        .map(|t| below(rng, t, exact))
        .collect();
    if b[0] == big(0) {
        b[0] = big(1);
    }
    DeRhamDims::new(g.dim(), b).unwrap()
}

/// Hochschild data bounded by the anti-diagonal sums of the grid.
pub fn hochschild_under(rng: &mut impl Rng, g: &HodgeGrid, exact: bool) -> HochschildDims {
    let hh = g
        .anti_diagonal_vector()
        .iter()
        .map(|t| below(rng, t, exact))
        .collect();
    HochschildDims::new(g.dim(), hh).unwrap()
}

fn leaf(rng: &mut impl Rng, dim: usize) -> VarietyExpr {
    match dim {
        0 => VarietyExpr::Point,
        1 if rng.gen_bool(0.6) => VarietyExpr::Curve(big(rng.gen_range(0..6))),
        n => VarietyExpr::Projective(n as u32),
    }
}

/// A random dimension-consistent expression of dimension `dim` and depth at
/// most `depth`.
pub fn expr_of_dim(rng: &mut impl Rng, dim: usize, depth: usize) -> VarietyExpr {
    if depth <= 1 || rng.gen_bool(0.2) {
        return leaf(rng, dim);
    }
    match rng.gen_range(0..3) {
        0 => {
            let a = rng.gen_range(0..=dim);
            VarietyExpr::Product(
                Box::new(expr_of_dim(rng, a, depth - 1)),
                Box::new(expr_of_dim(rng, dim - a, depth - 1)),
            )
        }
        1 => {
            let rank = rng.gen_range(1..=dim + 1);
            VarietyExpr::ProjBundle {
                base: Box::new(expr_of_dim(rng, dim + 1 - rank, depth - 1)),
                rank: rank as u32,
            }
        }
        _ if dim >= 2 => {
            let codim = rng.gen_range(2..=dim);
            VarietyExpr::BlowUp {
                ambient: Box::new(expr_of_dim(rng, dim, depth - 1)),
                center: Box::new(expr_of_dim(rng, dim - codim, depth - 1)),
                codim: codim as u32,
            }
        }
        _ => leaf(rng, dim),
    }
}

/// A random dimension-consistent expression of depth at most `depth`.
pub fn random_expr(rng: &mut impl Rng, depth: usize) -> VarietyExpr {
    let dim = rng.gen_range(0..=6);
    expr_of_dim(rng, dim, depth)
}

/// A random syntactically valid AST, not necessarily dimension-consistent.
pub fn random_ast(rng: &mut impl Rng, depth: usize) -> VarietyExpr {
    if depth <= 1 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..3) {
            0 => VarietyExpr::Point,
            1 => VarietyExpr::Projective(rng.gen_range(1..1000)),
            _ => {
                let digits = rng.gen_range(1..40);
                let g: String = (0..digits)
                    .map(|_| char::from(b'0' + rng.gen_range(0..10)))
                    .collect();
                VarietyExpr::Curve(g.parse().unwrap())
            }
        };
    }
    match rng.gen_range(0..3) {
        0 => VarietyExpr::Product(
            Box::new(random_ast(rng, depth - 1)),
            Box::new(random_ast(rng, depth - 1)),
        ),
        1 => VarietyExpr::ProjBundle {
            base: Box::new(random_ast(rng, depth - 1)),
            rank: rng.gen_range(1..=u32::MAX),
        },
        _ => VarietyExpr::BlowUp {
            ambient: Box::new(random_ast(rng, depth - 1)),
            center: Box::new(random_ast(rng, depth - 1)),
            codim: rng.gen_range(2..=u32::MAX),
        },
    }
}
