//! Tensor products of free bilinear modules, and of a bilinear with a
//! quadratic module relative to a balanced companion.
//!
//! The product base is ordered left-major: for bases ε_1..ε_m and η_1..η_n
//! the pairs come as ε_1⊗η_1, …, ε_1⊗η_n, ε_2⊗η_1, …, so the flat index of
//! (i, k) is i·n + k.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::forms::{
    is_companion, make_expansion, Expansion, GramMatrix, QuadraticScheme, SampleCfg, SplitChoice,
};
use crate::module::{FreeModule, Vector};
use crate::semiring::Scalar;

/// Flat index of ε_i ⊗ η_k in the left-major product base.
pub fn flat_index(i: usize, k: usize, right_rank: usize) -> usize {
    i * right_rank + k
}

/// The product module with left-major base labels `l⊗r`.
pub fn product_module(left: &FreeModule, right: &FreeModule) -> Result<FreeModule> {
    if left.ring() != right.ring() {
        return Err(Error::SemiringMismatch {
            left: left.ring().kind_id(),
            right: right.ring().kind_id(),
        });
    }
    let mut labels = Vec::with_capacity(left.rank() * right.rank());
    for i in 0..left.rank() {
        for k in 0..right.rank() {
            labels.push(format!("{}⊗{}", left.label(i), right.label(k)));
        }
    }
    FreeModule::with_labels(left.ring().clone(), labels)
}

/// x ⊗ y: the coefficient at (i, k) is x_i · y_k.
pub fn tensor_vectors(x: &Vector, y: &Vector) -> Result<Vector> {
    let module = product_module(x.module(), y.module())?;
    let ring = module.ring().clone();
    let mut coeffs = Vec::with_capacity(module.rank());
    for a in x.coeffs() {
        for b in y.coeffs() {
            coeffs.push(ring.mul(a, b));
        }
    }
    Vector::new(&module, coeffs)
}

/// Tensor product of Gram matrices: the entry at ((i,k),(j,l)) is
/// b1(ε_i, ε_j) · b2(η_k, η_l). Symmetric when both inputs are.
pub fn tensor_bilinear(b1: &GramMatrix, b2: &GramMatrix) -> Result<GramMatrix> {
    let module = product_module(b1.module(), b2.module())?;
    let ring = module.ring().clone();
    let (m, n) = (b1.rank(), b2.rank());
    let rank = m * n;
    let mut rows = vec![vec![ring.zero(); rank]; rank];
    for i in 0..m {
        for k in 0..n {
            let p = flat_index(i, k, n);
            for j in 0..m {
                for l in 0..n {
                    let r = flat_index(j, l, n);
                    rows[p][r] = ring.mul(b1.entry(i, j), b2.entry(k, l));
                }
            }
        }
    }
    GramMatrix::new(&module, rows)
}

fn check_balanced(q: &QuadraticScheme, b: &GramMatrix) -> Result<()> {
    if q.module() != b.module() {
        return Err(Error::ModuleMismatch(
            "companion lives on a different module than q".into(),
        ));
    }
    let ring = q.module().ring();
    for k in 0..q.rank() {
        if *b.entry(k, k) != ring.double(q.diag(k)) {
            return Err(Error::Precondition(format!(
                "b is not a balanced companion of q: b({0},{0}) = {1}, 2q(e{0}) = {2}",
                k + 1,
                b.entry(k, k),
                ring.double(q.diag(k))
            )));
        }
    }
    match is_companion(q, b, &SampleCfg::default_for(ring))? {
        crate::forms::CompanionVerdict::Holds { .. } => Ok(()),
        crate::forms::CompanionVerdict::Refuted { x, y } => Err(Error::Precondition(format!(
            "b is not a companion of q: refuted at x = {x}, y = {y}"
        ))),
    }
}

/// Fold γ ⊗ B into a triangular scheme over the product base: the diagonal
/// at (i,k) is γ_ii·B_kk and the cross coefficient of p < r is
/// B̃(p,r) + B̃(r,p).
fn fold_scheme(gamma: &GramMatrix, expansion: &Expansion) -> Result<QuadraticScheme> {
    let module = product_module(gamma.module(), expansion.module())?;
    let ring = module.ring().clone();
    let (m, n) = (gamma.rank(), expansion.rank());
    let mut diag = Vec::with_capacity(m * n);
    for i in 0..m {
        for k in 0..n {
            diag.push(ring.mul(gamma.entry(i, i), expansion.entry(k, k)));
        }
    }
    let mut off = BTreeMap::new();
    for i in 0..m {
        for k in 0..n {
            let p = flat_index(i, k, n);
            for j in 0..m {
                for l in 0..n {
                    let r = flat_index(j, l, n);
                    if p >= r {
                        continue;
                    }
                    let forward = ring.mul(gamma.entry(i, j), expansion.entry(k, l));
                    let backward = ring.mul(gamma.entry(j, i), expansion.entry(l, k));
                    let v = ring.add(&forward, &backward);
                    if !ring.is_zero(&v) {
                        off.insert((p, r), v);
                    }
                }
            }
        }
    }
    QuadraticScheme::new(&module, diag, off)
}

/// γ ⊗_b q: the tensor product of a symmetric bilinear form with a
/// quadratic form with respect to the balanced companion b, computed by
/// folding γ ⊗ B for the triangular expansion B of (q, b). The result is
/// independent of the expansion choice but in general depends on b; its
/// balanced companion is γ ⊗ b.
pub fn tensor_quadratic(
    gamma: &GramMatrix,
    q: &QuadraticScheme,
    b: &GramMatrix,
) -> Result<QuadraticScheme> {
    if gamma.module().ring() != q.module().ring() {
        return Err(Error::SemiringMismatch {
            left: gamma.module().ring().kind_id(),
            right: q.module().ring().kind_id(),
        });
    }
    check_balanced(q, b)?;
    let expansion = make_expansion(q, b, &SplitChoice::Triangular)?;
    fold_scheme(gamma, &expansion)
}

/// Outcome of the expansion-independence verification.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport {
    pub consistent: bool,
    pub trials: usize,
}

/// Fold `trials` random expansions of (q, b) and verify each yields the
/// same scheme as the triangular one. A mismatch is an implementation bug,
/// reported as an inconsistent verdict rather than an error.
pub fn expansion_independence_check(
    gamma: &GramMatrix,
    q: &QuadraticScheme,
    b: &GramMatrix,
    trials: usize,
    seed: u64,
) -> Result<IndependenceReport> {
    check_balanced(q, b)?;
    let reference = tensor_quadratic(gamma, q, b)?;
    let ring = q.module().ring().clone();
    let n = q.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Candidate summands for each split: grid scalars plus the entry itself
    // and zero, filtered by exactness of the sum.
    let mut pool = ring.default_sample();
    pool.push(ring.zero());
    pool.push(ring.one());

    for _ in 0..trials {
        let mut splits = BTreeMap::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let beta = b.entry(i, j).clone();
                let mut options: Vec<(Scalar, Scalar)> =
                    vec![(beta.clone(), ring.zero()), (ring.zero(), beta.clone())];
                for c1 in pool.iter().chain(std::iter::once(&beta)) {
                    for c2 in pool.iter().chain(std::iter::once(&beta)) {
                        if ring.add(c1, c2) == beta {
                            options.push((c1.clone(), c2.clone()));
                        }
                    }
                }
                let pick = options[rng.gen_range(0..options.len())].clone();
                splits.insert((i, j), pick);
            }
        }
        let expansion = make_expansion(q, b, &SplitChoice::Explicit(splits))?;
        let folded = fold_scheme(gamma, &expansion)?;
        if folded != reference {
            return Ok(IndependenceReport {
                consistent: false,
                trials,
            });
        }
    }
    Ok(IndependenceReport {
        consistent: true,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::balanced_companion;
    use crate::semiring::Semiring;

    fn nats(vs: &[u64]) -> Vec<Scalar> {
        vs.iter().map(|&v| Scalar::Nat(v)).collect()
    }

    #[test]
    fn tensor_vector_examples() {
        let m = FreeModule::new(Semiring::Nat, 2);
        let e1 = m.base_vector(0);
        let h2 = m.base_vector(1);
        let t = tensor_vectors(&e1, &h2).unwrap();
        assert_eq!(t.coeffs(), &nats(&[0, 1, 0, 0])[..]);

        let x = Vector::new(&m, nats(&[1, 2])).unwrap();
        let y = Vector::new(&m, nats(&[3, 0])).unwrap();
        assert_eq!(
            tensor_vectors(&x, &y).unwrap().coeffs(),
            &nats(&[3, 0, 6, 0])[..]
        );

        let zero = m.zero_vector();
        assert!(tensor_vectors(&x, &zero).unwrap().support().is_empty());
    }

    #[test]
    fn tensor_bilinear_examples() {
        let m1 = FreeModule::new(Semiring::Nat, 1);
        let a = GramMatrix::diagonal(&m1, nats(&[3])).unwrap();
        let c = GramMatrix::diagonal(&m1, nats(&[5])).unwrap();
        assert_eq!(tensor_bilinear(&a, &c).unwrap().rows(), vec![nats(&[15])]);

        // swap ⊗ swap over B: ones exactly where i≠j and k≠l
        let mb = FreeModule::new(Semiring::Bool, 2);
        let one = Scalar::Bool(true);
        let zero = Scalar::Bool(false);
        let swap = GramMatrix::new(
            &mb,
            vec![
                vec![zero.clone(), one.clone()],
                vec![one.clone(), zero.clone()],
            ],
        )
        .unwrap();
        let t = tensor_bilinear(&swap, &swap).unwrap();
        for i in 0..2 {
            for k in 0..2 {
                for j in 0..2 {
                    for l in 0..2 {
                        let v = t.entry(flat_index(i, k, 2), flat_index(j, l, 2));
                        let expect = i != j && k != l;
                        assert_eq!(*v == one, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_left_factor_gives_block_diagonal() {
        let m2 = FreeModule::new(Semiring::Nat, 2);
        let d = GramMatrix::diagonal(&m2, nats(&[2, 3])).unwrap();
        let b = GramMatrix::new(&m2, vec![nats(&[1, 4]), nats(&[4, 0])]).unwrap();
        let t = tensor_bilinear(&d, &b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let v = t.entry(flat_index(i, k, 2), flat_index(j, l, 2));
                        if i == j {
                            let scaled = Semiring::Nat.mul(d.entry(i, i), b.entry(k, l));
                            assert_eq!(*v, scaled);
                        } else {
                            assert_eq!(*v, Scalar::Nat(0));
                        }
                    }
                }
            }
        }
    }

    /// Rank-1 fold: γ = (2), q = [[1,3],[,0]], b = [[2,3],[3,0]]
    /// folds to [[2,6],[,0]].
    #[test]
    fn quadratic_tensor_rank1_fold() {
        let m1 = FreeModule::new(Semiring::Nat, 1);
        let m2 = FreeModule::new(Semiring::Nat, 2);
        let gamma = GramMatrix::diagonal(&m1, nats(&[2])).unwrap();
        let q = QuadraticScheme::new(
            &m2,
            nats(&[1, 0]),
            BTreeMap::from([((0, 1), Scalar::Nat(3))]),
        )
        .unwrap();
        let b = balanced_companion(&q);
        let t = tensor_quadratic(&gamma, &q, &b).unwrap();
        assert_eq!(t.diag_coeffs(), &nats(&[2, 0])[..]);
        assert_eq!(t.cross(0, 1), Scalar::Nat(6));
    }

    /// Swap ⊗ diagonal q stores b in the cross block and nothing else.
    #[test]
    fn quadratic_tensor_swap_stores_companion() {
        let m2 = FreeModule::new(Semiring::Nat, 2);
        let one = Scalar::Nat(1);
        let swap = GramMatrix::new(&m2, vec![nats(&[0, 1]), nats(&[1, 0])]).unwrap();
        let q = QuadraticScheme::diagonal(&m2, nats(&[1, 2])).unwrap();
        let b = balanced_companion(&q); // ⟨2, 4⟩, the unique balanced one
        let t = tensor_quadratic(&swap, &q, &b).unwrap();
        assert!(t.diag_coeffs().iter().all(|d| *d == Scalar::Nat(0)));
        // cross-block entries are exactly b's entries
        assert_eq!(
            t.cross(flat_index(0, 0, 2), flat_index(1, 0, 2)),
            Scalar::Nat(2)
        );
        assert_eq!(
            t.cross(flat_index(0, 1, 2), flat_index(1, 1, 2)),
            Scalar::Nat(4)
        );
        assert_eq!(
            t.cross(flat_index(0, 0, 2), flat_index(1, 1, 2)),
            Scalar::Nat(0)
        );
        assert_eq!(
            t.cross(flat_index(0, 0, 2), flat_index(0, 1, 2)),
            Scalar::Nat(0)
        );
        let _ = one;
    }

    #[test]
    fn unbalanced_companion_rejected() {
        let m2 = FreeModule::new(Semiring::Nat, 2);
        let gamma = GramMatrix::diagonal(&m2, nats(&[1, 1])).unwrap();
        let q = QuadraticScheme::diagonal(&m2, nats(&[1, 2])).unwrap();
        let not_balanced = GramMatrix::diagonal(&m2, nats(&[1, 4])).unwrap();
        assert!(tensor_quadratic(&gamma, &q, &not_balanced).is_err());
    }

    #[test]
    fn expansion_independence_small() {
        let m2 = FreeModule::new(Semiring::Nat, 2);
        let gamma = GramMatrix::new(&m2, vec![nats(&[1, 1]), nats(&[1, 1])]).unwrap();
        let q = QuadraticScheme::new(
            &m2,
            nats(&[1, 2]),
            BTreeMap::from([((0, 1), Scalar::Nat(3))]),
        )
        .unwrap();
        let b = balanced_companion(&q);
        let rep = expansion_independence_check(&gamma, &q, &b, 50, 7).unwrap();
        assert!(rep.consistent);
    }

    /// Exhaustive over B: every split of β₁₂ = 1 folds identically.
    #[test]
    fn expansion_independence_exhaustive_bool() {
        let ring = Semiring::Bool;
        let m2 = FreeModule::new(ring.clone(), 2);
        let one = Scalar::Bool(true);
        let gamma = GramMatrix::new(
            &m2,
            vec![
                vec![Scalar::Bool(false), one.clone()],
                vec![one.clone(), Scalar::Bool(false)],
            ],
        )
        .unwrap();
        let q = QuadraticScheme::new(
            &m2,
            vec![one.clone(), one.clone()],
            BTreeMap::from([((0, 1), one.clone())]),
        )
        .unwrap();
        let b = balanced_companion(&q);
        let reference = tensor_quadratic(&gamma, &q, &b).unwrap();
        // the three ordered pairs summing to 1 in B
        for (c1, c2) in [(true, false), (false, true), (true, true)] {
            let split = SplitChoice::Explicit(BTreeMap::from([(
                (0, 1),
                (Scalar::Bool(c1), Scalar::Bool(c2)),
            )]));
            let e = make_expansion(&q, &b, &split).unwrap();
            let folded = super::fold_scheme(&gamma, &e).unwrap();
            assert_eq!(folded, reference);
        }
    }

    /// Pointwise law: q̃(u⊗v) = γ(u,u)·q(v) on random vectors.
    #[test]
    fn tensor_pointwise_value_law() {
        let ring = Semiring::MaxPlus;
        let mu = FreeModule::new(ring.clone(), 2);
        let mv = FreeModule::new(ring.clone(), 2);
        let gamma = GramMatrix::new(
            &mu,
            vec![
                vec![Scalar::mp(1), Scalar::mp(0)],
                vec![Scalar::mp(0), Scalar::MP_NEG_INF],
            ],
        )
        .unwrap();
        let q = QuadraticScheme::new(
            &mv,
            vec![Scalar::mp(0), Scalar::mp(1)],
            BTreeMap::from([((0, 1), Scalar::mp(2))]),
        )
        .unwrap();
        let b = balanced_companion(&q);
        let t = tensor_quadratic(&gamma, &q, &b).unwrap();
        let tb = tensor_bilinear(&gamma, &b).unwrap();

        let grid = ring.default_sample();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let pick = |rng: &mut ChaCha8Rng| grid[rng.gen_range(0..grid.len())].clone();
            let u = Vector::new(&mu, vec![pick(&mut rng), pick(&mut rng)]).unwrap();
            let v = Vector::new(&mv, vec![pick(&mut rng), pick(&mut rng)]).unwrap();
            let uv = tensor_vectors(&u, &v).unwrap();
            let lhs = t.eval(&uv).unwrap();
            let rhs = ring.mul(&gamma.eval(&u, &u).unwrap(), &q.eval(&v).unwrap());
            assert_eq!(lhs, rhs);

            // and the bilinear law (γ⊗b)(u₁⊗v₁, u₂⊗v₂) = γ(u₁,u₂)·b(v₁,v₂)
            let u2 = Vector::new(&mu, vec![pick(&mut rng), pick(&mut rng)]).unwrap();
            let v2 = Vector::new(&mv, vec![pick(&mut rng), pick(&mut rng)]).unwrap();
            let uv2 = tensor_vectors(&u2, &v2).unwrap();
            let lhs2 = tb.eval(&uv, &uv2).unwrap();
            let rhs2 = ring.mul(&gamma.eval(&u, &u2).unwrap(), &b.eval(&v, &v2).unwrap());
            assert_eq!(lhs2, rhs2);
        }
    }
}
