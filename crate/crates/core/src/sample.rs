//! Seeded random inputs: points, bihomogeneous forms, planted instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fields::{Field, Scalar};
use crate::hypersurface::ProjPoint;
use crate::poly::{bihom_vars, BiHomPoly, MultiPoly};

/// Generator for a named stream: the same `(seed, p, label)` always gives
/// the same sequence.
pub fn rng_for(seed: u64, p: u64, label: &str) -> ChaCha8Rng {
    // FNV-1a over the label
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h ^ p.rotate_left(32))
}

/// Exponent vectors of all monomials of degree `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for e in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Uniform element of a finite field.
pub fn random_scalar(field: &Field, rng: &mut impl Rng) -> Scalar {
    let q = field.order().expect("finite field");
    field.element(rng.gen_range(0..q as u64))
}

pub fn random_point(field: &Field, dim: usize, rng: &mut impl Rng) -> ProjPoint {
    loop {
        let coords: Vec<Scalar> = (0..=dim).map(|_| random_scalar(field, rng)).collect();
        if let Ok(p) = ProjPoint::new(field, coords) {
            return p;
        }
    }
}

/// Random form of bidegree `(dx, dy)` on `P^sx × P^sy`, every coefficient
/// uniform. Retries until nonzero.
pub fn random_bihom(field: &Field, sx: usize, sy: usize, dx: u32, dy: u32, rng: &mut impl Rng) -> BiHomPoly {
    let vars = bihom_vars(sx, sy);
    let xs = monomials(sx + 1, dx);
    let ys = monomials(sy + 1, dy);
    loop {
        let mut terms = Vec::with_capacity(xs.len() * ys.len());
        for a in &xs {
            for b in &ys {
                let mut e = a.clone();
                e.extend_from_slice(b);
                terms.push((e, random_scalar(field, rng)));
            }
        }
        let p = MultiPoly::from_terms(field, &vars, terms).expect("matching arity");
        if let Ok(h) = BiHomPoly::new(&p, sx, sy) {
            if h.bidegree() == (dx, dy) {
                return h;
            }
        }
    }
}

/// `(a·c, b·c)` with `c` of bidegree `(1, 1)`, so every section pair shares
/// the line cut out by `c(u, ·)`.
pub fn planted_pair(field: &Field, d1: u32, d2: u32, rng: &mut impl Rng) -> Result<(BiHomPoly, BiHomPoly)> {
    let c = random_bihom(field, 2, 2, 1, 1, rng);
    let a = random_bihom(field, 2, 2, 1, d1 - 1, rng);
    let b = random_bihom(field, 2, 2, 1, d2 - 1, rng);
    Ok((a.mul(&c)?, b.mul(&c)?))
}
