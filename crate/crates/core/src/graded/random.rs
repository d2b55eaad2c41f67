//! Seeded generators for randomized checks.

use num_bigint::BigInt;
use rand::Rng;

use super::{invert_matrix, Exponents, Field, GradedSignature, PolyMap, Polynomial, Scalar};

pub fn scalar<R: Rng>(field: Field, rng: &mut R, nonzero: bool) -> Scalar {
    loop {
        let s = match field {
            Field::Rational => {
                let num = rng.gen_range(-3i64..=3);
                let den = if rng.gen_bool(0.25) { 2 } else { 1 };
                field
                    .ratio(&BigInt::from(num), &BigInt::from(den))
                    .expect("nonzero denominator")
            }
            Field::Prime(p) => field.int(rng.gen_range(0..p as i64)),
        };
        if !nonzero || !s.is_zero() {
            return s;
        }
    }
}

pub fn invertible_matrix<R: Rng>(dim: usize, field: Field, rng: &mut R) -> Vec<Vec<Scalar>> {
    loop {
        let m: Vec<Vec<Scalar>> = (0..dim)
            .map(|_| (0..dim).map(|_| scalar(field, rng, false)).collect())
            .collect();
        if invert_matrix(&m, field).is_some() {
            return m;
        }
    }
}

fn leq(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A monomial of multi-degree `target` built from coordinates whose degree is
/// allowed by `admissible`. Returns `None` when the random walk gets stuck.
pub fn monomial_of_degree<R: Rng>(
    sig: &GradedSignature,
    target: &[u32],
    admissible: impl Fn(&[u32]) -> bool,
    rng: &mut R,
) -> Option<Exponents> {
    let degrees = sig.degrees();
    for _ in 0..20 {
        let mut e = vec![0u32; degrees.len()];
        let mut remaining = target.to_vec();
        while remaining.iter().any(|&r| r > 0) {
            let candidates: Vec<usize> = (0..degrees.len())
                .filter(|&c| {
                    degrees[c].iter().any(|&x| x > 0)
                        && leq(&degrees[c], &remaining)
                        && admissible(&degrees[c])
                })
                .collect();
            if candidates.is_empty() {
                break;
            }
            let c = candidates[rng.gen_range(0..candidates.len())];
            e[c] += 1;
            for (r, d) in remaining.iter_mut().zip(&degrees[c]) {
                *r -= d;
            }
        }
        if remaining.iter().all(|&r| r == 0) {
            let base = sig.base_dim();
            if base > 0 && rng.gen_bool(0.3) {
                e[rng.gen_range(0..base)] += 1;
            }
            return Some(e);
        }
    }
    None
}

/// A random automorphism that is weight-preserving and triangular: each
/// block is an invertible linear map of itself plus up to `extra` monomials in
/// strictly lower blocks.
pub fn graded_automorphism<R: Rng>(
    sig: &GradedSignature,
    field: Field,
    extra: usize,
    rng: &mut R,
) -> PolyMap {
    let n = sig.coords();
    let mut components = vec![Polynomial::zero(n, field); n];
    for block in sig.blocks() {
        if block.dim == 0 {
            continue;
        }
        let l = invertible_matrix(block.dim, field, rng);
        let is_base = block.degree.iter().all(|&d| d == 0);
        for (r, c) in block.coords().enumerate() {
            for (j, v) in block.coords().enumerate() {
                let mut e = vec![0; n];
                e[v] = 1;
                components[c].add_term(e, l[r][j].clone());
            }
            if is_base {
                components[c].add_term(vec![0; n], scalar(field, rng, false));
                continue;
            }
            for _ in 0..rng.gen_range(0..=extra) {
                let below = |d: &[u32]| d != block.degree.as_slice();
                if let Some(e) = monomial_of_degree(sig, &block.degree, below, rng) {
                    components[c].add_term(e, scalar(field, rng, true));
                }
            }
        }
    }
    PolyMap::new(sig, sig, field, components).expect("components match the signature")
}

/// A random weight-preserving map with up to `terms` monomials per component.
pub fn graded_map<R: Rng>(
    sig_in: &GradedSignature,
    sig_out: &GradedSignature,
    field: Field,
    terms: usize,
    rng: &mut R,
) -> PolyMap {
    assert_eq!(
        sig_in.families(),
        sig_out.families(),
        "signatures with different family counts"
    );
    let n = sig_in.coords();
    let components = sig_out
        .degrees()
        .iter()
        .map(|d| {
            let mut p = Polynomial::zero(n, field);
            for _ in 0..rng.gen_range(1..=terms.max(1)) {
                let e = if d.iter().all(|&x| x == 0) {
                    let mut e = vec![0; n];
                    if sig_in.base_dim() > 0 && rng.gen_bool(0.5) {
                        e[rng.gen_range(0..sig_in.base_dim())] = 1;
                    }
                    Some(e)
                } else {
                    monomial_of_degree(sig_in, d, |_| true, rng)
                };
                if let Some(e) = e {
                    p.add_term(e, scalar(field, rng, true));
                }
            }
            p
        })
        .collect();
    PolyMap::new(sig_in, sig_out, field, components).expect("components match the signature")
}

/// A random polynomial with up to `terms` monomials of total weight at most `max_weight`.
pub fn polynomial<R: Rng>(
    sig: &GradedSignature,
    field: Field,
    terms: usize,
    max_weight: u32,
    rng: &mut R,
) -> Polynomial {
    let n = sig.coords();
    let weights = sig.weights();
    let mut p = Polynomial::zero(n, field);
    for _ in 0..rng.gen_range(1..=terms.max(1)) {
        let mut e = vec![0; n];
        let mut w = 0;
        while rng.gen_bool(0.7) {
            let c = rng.gen_range(0..n);
            if w + weights[c] > max_weight || (weights[c] == 0 && e.iter().sum::<u32>() > 3) {
                break;
            }
            e[c] += 1;
            w += weights[c];
        }
        p.add_term(e, scalar(field, rng, true));
    }
    p
}

/// A random valid signature: simple with probability one half, otherwise multi
/// with up to `max_families` families; at most `max_coords` coordinates.
pub fn signature<R: Rng>(max_families: usize, max_coords: usize, rng: &mut R) -> GradedSignature {
    loop {
        let base = if rng.gen_bool(0.2) { 1 } else { 0 };
        let sig = if max_families < 2 || rng.gen_bool(0.5) {
            let k = rng.gen_range(1..=3);
            let dims: Vec<usize> = (0..k).map(|_| rng.gen_range(0..=2)).collect();
            GradedSignature::Simple { base, dims }
        } else {
            let n = rng.gen_range(2..=max_families);
            let mut blocks: Vec<(Vec<u32>, usize)> = Vec::new();
            for m in 1u32..1 << n {
                if rng.gen_bool(0.6) {
                    blocks.push(((0..n).map(|i| (m >> i) & 1).collect(), rng.gen_range(1..=2)));
                }
            }
            match GradedSignature::multi_unchecked(n, base, &blocks) {
                Ok(s) => s,
                Err(_) => continue,
            }
        };
        let graded = sig.coords() - sig.base_dim();
        if graded > 0 && sig.coords() <= max_coords && sig.validate(&Default::default()).is_ok() {
            return sig;
        }
    }
}
