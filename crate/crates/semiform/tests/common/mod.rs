//! Shared generators and independent oracles for the integration suites.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::Rational64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use semiform::forms::CompanionVerdict;
use semiform::{
    balanced_companion, is_companion, Form, FreeModule, GramMatrix, IsometryWitness,
    QuadraticScheme, SampleCfg, Scalar, Semiring, SuperScalar, Vector,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pick(grid: &[Scalar], rng: &mut ChaCha8Rng) -> Scalar {
    grid[rng.gen_range(0..grid.len())].clone()
}

pub fn pick_nonzero(ring: &Semiring, grid: &[Scalar], rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = pick(grid, rng);
        if !ring.is_zero(&s) {
            return s;
        }
    }
}

pub fn random_scheme(
    ring: &Semiring,
    rank: usize,
    density: f64,
    rng: &mut ChaCha8Rng,
) -> QuadraticScheme {
    let module = FreeModule::new(ring.clone(), rank);
    let grid = ring.default_sample();
    let diag = (0..rank).map(|_| pick(&grid, rng)).collect();
    let mut off = BTreeMap::new();
    for i in 0..rank {
        for j in (i + 1)..rank {
            if rng.gen_bool(density) {
                off.insert((i, j), pick(&grid, rng));
            }
        }
    }
    QuadraticScheme::new(&module, diag, off).expect("generated scheme is valid")
}

pub fn random_gram(ring: &Semiring, rank: usize, density: f64, rng: &mut ChaCha8Rng) -> GramMatrix {
    let module = FreeModule::new(ring.clone(), rank);
    let grid = ring.default_sample();
    let mut rows = vec![vec![ring.zero(); rank]; rank];
    for i in 0..rank {
        if rng.gen_bool(density) {
            rows[i][i] = pick(&grid, rng);
        }
        for j in (i + 1)..rank {
            if rng.gen_bool(density) {
                let v = pick(&grid, rng);
                rows[i][j] = v.clone();
                rows[j][i] = v;
            }
        }
    }
    GramMatrix::new(&module, rows).expect("generated gram is symmetric")
}

pub fn random_alternate_gram(
    ring: &Semiring,
    rank: usize,
    density: f64,
    rng: &mut ChaCha8Rng,
) -> GramMatrix {
    let module = FreeModule::new(ring.clone(), rank);
    let grid = ring.default_sample();
    let mut rows = vec![vec![ring.zero(); rank]; rank];
    for i in 0..rank {
        for j in (i + 1)..rank {
            if rng.gen_bool(density) {
                let v = pick_nonzero(ring, &grid, rng);
                rows[i][j] = v.clone();
                rows[j][i] = v;
            }
        }
    }
    GramMatrix::new(&module, rows).expect("generated gram is symmetric")
}

fn mp_val(s: &Scalar) -> Option<Rational64> {
    match s {
        Scalar::MaxPlus(v) => *v,
        Scalar::Super(v) => v.value(),
        _ => panic!("expected a max-plus or supertropical scalar"),
    }
}

fn as_ring_value(ring: &Semiring, v: Rational64) -> Scalar {
    match ring {
        Semiring::MaxPlus => Scalar::MaxPlus(Some(v)),
        Semiring::Supertropical => Scalar::Super(SuperScalar::Tangible(v)),
        _ => panic!("value scalars only exist for max-plus and supertropical"),
    }
}

/// A random balanced companion of q.
///
/// Over max-plus the admissible off-diagonal entries have a closed form: a
/// non-quasilinear pair pins β_kl = α_kl, a quasilinear pair allows any
/// β_kl with 2β_kl ≤ α_k + α_l. Over ℕ the companion is unique. Over finite
/// semirings random perturbations are filtered by the exhaustive companion
/// check. Every result is re-validated before being returned.
pub fn random_balanced_companion(q: &QuadraticScheme, rng: &mut ChaCha8Rng) -> GramMatrix {
    let ring = q.module().ring().clone();
    let base = balanced_companion(q);
    let candidate = match ring {
        Semiring::MaxPlus => {
            let mut rows = base.rows();
            let n = q.rank();
            for k in 0..n {
                for l in (k + 1)..n {
                    if !ring.pair_quasilinear(q.diag(k), q.diag(l), &q.cross(k, l)) {
                        continue;
                    }
                    // bound m = (α_k + α_l)/2; -inf when either vanishes
                    let bound = match (mp_val(q.diag(k)), mp_val(q.diag(l))) {
                        (Some(a), Some(b)) => Some((a + b) / Rational64::from_integer(2)),
                        _ => None,
                    };
                    let choice = match bound {
                        None => ring.zero(),
                        Some(m) => match rng.gen_range(0..4i64) {
                            0 => ring.zero(),
                            1 => as_ring_value(&ring, m),
                            drop => as_ring_value(&ring, m - Rational64::from_integer(drop - 1)),
                        },
                    };
                    rows[k][l] = choice.clone();
                    rows[l][k] = choice;
                }
            }
            GramMatrix::new(q.module(), rows).unwrap()
        }
        Semiring::Bool | Semiring::Trunc(_) => {
            let grid = ring.default_sample();
            let mut rows = base.rows();
            let n = q.rank();
            for k in 0..n {
                for l in (k + 1)..n {
                    if rng.gen_bool(0.4) {
                        let v = pick(&grid, rng);
                        rows[k][l] = v.clone();
                        rows[l][k] = v;
                    }
                }
            }
            let candidate = GramMatrix::new(q.module(), rows).unwrap();
            let cfg = SampleCfg::default_for(&ring);
            match is_companion(q, &candidate, &cfg).unwrap() {
                CompanionVerdict::Holds { .. } => candidate,
                CompanionVerdict::Refuted { .. } => base.clone(),
            }
        }
        _ => base.clone(),
    };
    let cfg = SampleCfg::default_for(&ring);
    assert!(
        is_companion(q, &candidate, &cfg).unwrap().holds(),
        "generated companion must validate"
    );
    candidate
}

pub fn random_unit(ring: &Semiring, rng: &mut ChaCha8Rng) -> Scalar {
    match ring {
        Semiring::MaxPlus => Scalar::mp(rng.gen_range(-3..=3)),
        Semiring::Supertropical => Scalar::tangible(rng.gen_range(-3..=3)),
        _ => {
            let units = ring.units().expect("finite unit set");
            units[rng.gen_range(0..units.len())].clone()
        }
    }
}

/// A uniformly random permutation with random unit rescalings.
pub fn random_gen_perm(ring: &Semiring, n: usize, rng: &mut ChaCha8Rng) -> IsometryWitness {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let units = (0..n).map(|_| random_unit(ring, rng)).collect();
    IsometryWitness { perm, units }
}

/// Direct-evaluation witness that q is not quasilinear on the pair
/// (Rε_i, Rε_j): scalars (s, t) with q(sε_i + tε_j) ≠ q(sε_i) + q(tε_j).
///
/// Independent of the semiring's quasilinearity oracle: candidates come
/// from the full carrier (finite case) or from the sampling grid plus the
/// balanced point of the value triple, and each candidate is confirmed by
/// evaluating both sides.
pub fn semantic_edge(q: &QuadraticScheme, i: usize, j: usize) -> Option<(Scalar, Scalar)> {
    let module = q.module();
    let ring = module.ring();
    let n = q.rank();

    let refutes = |s: &Scalar, t: &Scalar| -> bool {
        let mut xs = vec![ring.zero(); n];
        let mut ys = vec![ring.zero(); n];
        xs[i] = s.clone();
        ys[j] = t.clone();
        let x = Vector::new(module, xs).unwrap();
        let y = Vector::new(module, ys).unwrap();
        let sum = x.add(&y).unwrap();
        q.eval(&sum).unwrap() != ring.add(&q.eval(&x).unwrap(), &q.eval(&y).unwrap())
    };

    let mut candidates: Vec<(Scalar, Scalar)> = Vec::new();
    match ring.carrier() {
        Some(carrier) => {
            for s in &carrier {
                for t in &carrier {
                    candidates.push((s.clone(), t.clone()));
                }
            }
        }
        None => {
            let grid = ring.default_sample();
            for s in &grid {
                for t in &grid {
                    candidates.push((s.clone(), t.clone()));
                }
            }
            if matches!(ring, Semiring::MaxPlus | Semiring::Supertropical) {
                let cross = q.cross(i, j);
                if !ring.is_zero(&cross) {
                    let vc = mp_val(&cross).unwrap();
                    let unit_val = Rational64::from_integer(0);
                    match (mp_val(q.diag(i)), mp_val(q.diag(j))) {
                        (Some(a), Some(b)) => {
                            // balanced point: α_i + 2s = α_j + 2t
                            let s = (b - a) / Rational64::from_integer(2);
                            candidates
                                .push((as_ring_value(ring, s), as_ring_value(ring, unit_val)));
                        }
                        (None, Some(b)) => {
                            let s = b - vc + Rational64::from_integer(1);
                            candidates
                                .push((as_ring_value(ring, s), as_ring_value(ring, unit_val)));
                        }
                        (Some(a), None) => {
                            let t = a - vc + Rational64::from_integer(1);
                            candidates
                                .push((as_ring_value(ring, unit_val), as_ring_value(ring, t)));
                        }
                        (None, None) => {
                            candidates.push((
                                as_ring_value(ring, unit_val),
                                as_ring_value(ring, unit_val),
                            ));
                        }
                    }
                }
            }
        }
    }
    candidates.into_iter().find(|(s, t)| refutes(s, t))
}

/// Entrywise linear combination Σ λ_i·q_i of schemes on one module.
pub fn scheme_linear(terms: &[(Scalar, &QuadraticScheme)]) -> QuadraticScheme {
    let module = terms[0].1.module().clone();
    let ring = module.ring().clone();
    let n = module.rank();
    let diag: Vec<Scalar> = (0..n)
        .map(|k| {
            let parts: Vec<Scalar> = terms.iter().map(|(l, q)| ring.mul(l, q.diag(k))).collect();
            ring.sum(parts.iter())
        })
        .collect();
    let mut off = BTreeMap::new();
    for k in 0..n {
        for l in (k + 1)..n {
            let parts: Vec<Scalar> = terms
                .iter()
                .map(|(lam, q)| ring.mul(lam, &q.cross(k, l)))
                .collect();
            let v = ring.sum(parts.iter());
            if !ring.is_zero(&v) {
                off.insert((k, l), v);
            }
        }
    }
    QuadraticScheme::new(&module, diag, off).unwrap()
}

/// Entrywise linear combination Σ λ_i·g_i of Gram matrices on one module.
pub fn gram_linear(terms: &[(Scalar, &GramMatrix)]) -> GramMatrix {
    let module = terms[0].1.module().clone();
    let ring = module.ring().clone();
    let n = module.rank();
    let rows: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let parts: Vec<Scalar> = terms
                        .iter()
                        .map(|(l, g)| ring.mul(l, g.entry(i, j)))
                        .collect();
                    ring.sum(parts.iter())
                })
                .collect()
        })
        .collect();
    GramMatrix::new(&module, rows).unwrap()
}

/// Block-diagonal quadratic form assembled from small random blocks,
/// together with the list of generated block index ranges.
pub fn random_block_quadratic(
    ring: &Semiring,
    block_ranks: &[usize],
    rng: &mut ChaCha8Rng,
) -> QuadraticScheme {
    let total: usize = block_ranks.iter().sum();
    let module = FreeModule::new(ring.clone(), total);
    let grid = ring.default_sample();
    let mut diag = vec![ring.zero(); total];
    let mut off = BTreeMap::new();
    let mut offset = 0;
    for &r in block_ranks {
        for k in 0..r {
            diag[offset + k] = pick(&grid, rng);
        }
        for k in 0..r {
            for l in (k + 1)..r {
                if rng.gen_bool(0.7) {
                    off.insert((offset + k, offset + l), pick(&grid, rng));
                }
            }
        }
        offset += r;
    }
    QuadraticScheme::new(&module, diag, off).unwrap()
}

/// Block-diagonal bilinear form from small random blocks.
pub fn random_block_bilinear(
    ring: &Semiring,
    block_ranks: &[usize],
    rng: &mut ChaCha8Rng,
) -> GramMatrix {
    let total: usize = block_ranks.iter().sum();
    let module = FreeModule::new(ring.clone(), total);
    let grid = ring.default_sample();
    let mut rows = vec![vec![ring.zero(); total]; total];
    let mut offset = 0;
    for &r in block_ranks {
        for k in 0..r {
            if rng.gen_bool(0.7) {
                rows[offset + k][offset + k] = pick(&grid, rng);
            }
            for l in (k + 1)..r {
                if rng.gen_bool(0.7) {
                    let v = pick(&grid, rng);
                    rows[offset + k][offset + l] = v.clone();
                    rows[offset + l][offset + k] = v;
                }
            }
        }
        offset += r;
    }
    GramMatrix::new(&module, rows).unwrap()
}

/// Random small block structure for cancellation and invariance tests.
pub fn random_block_form(ring: &Semiring, rng: &mut ChaCha8Rng) -> Form {
    let blocks: Vec<usize> = (0..rng.gen_range(2..=3))
        .map(|_| rng.gen_range(1..=2))
        .collect();
    if rng.gen_bool(0.5) {
        Form::Quadratic(random_block_quadratic(ring, &blocks, rng))
    } else {
        Form::Bilinear(random_block_bilinear(ring, &blocks, rng))
    }
}
