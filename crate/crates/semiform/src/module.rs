//! Finite-rank free modules with an ordered base, their vectors, and the
//! lattice of basic submodules.
//!
//! Everything here is finite rank. Infinite orthogonal families make sense
//! mathematically but are not represented; ranks are expected to stay small
//! and storage is dense.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::semiring::{Scalar, Semiring};

/// A free module of finite rank over one of the shipped semirings.
///
/// Base labels are display strings only; two modules over the same semiring
/// with the same rank are the same module (equality ignores labels).
#[derive(Debug, Clone)]
pub struct FreeModule {
    ring: Semiring,
    labels: Vec<String>,
}

impl PartialEq for FreeModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.labels.len() == other.labels.len()
    }
}

impl Eq for FreeModule {}

impl FreeModule {
    pub fn new(ring: Semiring, rank: usize) -> FreeModule {
        let labels = (1..=rank).map(|i| format!("e{i}")).collect();
        FreeModule { ring, labels }
    }

    pub fn with_labels(ring: Semiring, labels: Vec<String>) -> Result<FreeModule> {
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Precondition(
                "base labels must be pairwise distinct".into(),
            ));
        }
        Ok(FreeModule { ring, labels })
    }

    pub fn ring(&self) -> &Semiring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The i-th standard base vector (0-based).
    pub fn base_vector(&self, i: usize) -> Vector {
        let mut coeffs = vec![self.ring.zero(); self.rank()];
        coeffs[i] = self.ring.one();
        Vector {
            module: self.clone(),
            coeffs,
        }
    }

    pub fn zero_vector(&self) -> Vector {
        Vector {
            module: self.clone(),
            coeffs: vec![self.ring.zero(); self.rank()],
        }
    }

    /// The submodule spanned by the given base indices, as a module in its
    /// own right (labels carried over, order preserved ascending).
    pub fn restrict(&self, indices: &[usize]) -> FreeModule {
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        FreeModule {
            ring: self.ring.clone(),
            labels,
        }
    }
}

/// A vector presented by its unique coefficient list over the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector {
    module: FreeModule,
    coeffs: Vec<Scalar>,
}

impl Vector {
    pub fn new(module: &FreeModule, coeffs: Vec<Scalar>) -> Result<Vector> {
        if coeffs.len() != module.rank() {
            return Err(Error::RankMismatch {
                expected: module.rank(),
                got: coeffs.len(),
            });
        }
        for c in &coeffs {
            module.ring().check_member(c)?;
        }
        Ok(Vector {
            module: module.clone(),
            coeffs,
        })
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    /// Indices carrying a nonzero coefficient.
    pub fn support(&self) -> BTreeSet<usize> {
        let ring = self.module.ring();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        if self.module != other.module {
            return Err(Error::ModuleMismatch(
                "vector addition across different modules".into(),
            ));
        }
        let ring = self.module.ring();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| ring.add(a, b))
            .collect();
        Ok(Vector {
            module: self.module.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, a: &Scalar) -> Result<Vector> {
        let ring = self.module.ring();
        ring.check_member(a)?;
        let coeffs = self.coeffs.iter().map(|c| ring.mul(a, c)).collect();
        Ok(Vector {
            module: self.module.clone(),
            coeffs,
        })
    }
}

impl std::fmt::Display for Vector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// Basic submodules
// ---------------------------------------------------------------------------

/// A basic submodule, represented purely by its set of base indices; the
/// map W ↦ 𝔅 ∩ W is a bijection onto subsets of the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicSubmodule {
    module: FreeModule,
    indices: BTreeSet<usize>,
}

impl BasicSubmodule {
    pub fn new(module: &FreeModule, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&max) = indices.iter().next_back() {
            if max >= module.rank() {
                return Err(Error::Precondition(format!(
                    "index {} out of range for rank {}",
                    max + 1,
                    module.rank()
                )));
            }
        }
        Ok(BasicSubmodule {
            module: module.clone(),
            indices,
        })
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn indices(&self) -> &BTreeSet<usize> {
        &self.indices
    }

    pub fn contains(&self, other: &BasicSubmodule) -> bool {
        other.indices.is_subset(&self.indices)
    }

    fn same_module(&self, other: &BasicSubmodule) -> Result<()> {
        if self.module != other.module {
            return Err(Error::ModuleMismatch(
                "lattice operands belong to different modules".into(),
            ));
        }
        Ok(())
    }

    pub fn meet(&self, other: &BasicSubmodule) -> Result<BasicSubmodule> {
        self.same_module(other)?;
        Ok(BasicSubmodule {
            module: self.module.clone(),
            indices: self.indices.intersection(&other.indices).copied().collect(),
        })
    }

    pub fn join(&self, other: &BasicSubmodule) -> Result<BasicSubmodule> {
        self.same_module(other)?;
        Ok(BasicSubmodule {
            module: self.module.clone(),
            indices: self.indices.union(&other.indices).copied().collect(),
        })
    }

    pub fn complement(&self) -> BasicSubmodule {
        let indices = (0..self.module.rank())
            .filter(|i| !self.indices.contains(i))
            .collect();
        BasicSubmodule {
            module: self.module.clone(),
            indices,
        }
    }

    /// The complement of `self` inside `ambient`; requires self ⊆ ambient.
    pub fn relative_complement(&self, ambient: &BasicSubmodule) -> Result<BasicSubmodule> {
        self.same_module(ambient)?;
        if !ambient.contains(self) {
            return Err(Error::Precondition(
                "relative complement requires the first operand inside the second".into(),
            ));
        }
        Ok(BasicSubmodule {
            module: self.module.clone(),
            indices: ambient.indices.difference(&self.indices).copied().collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeOp {
    Meet,
    Join,
    Complement,
    RelativeComplement,
}

/// Dispatching form of the lattice operations of basic submodules.
pub fn basic_lattice(
    op: LatticeOp,
    w1: &BasicSubmodule,
    w2: Option<&BasicSubmodule>,
) -> Result<BasicSubmodule> {
    fn need(w: Option<&BasicSubmodule>) -> Result<&BasicSubmodule> {
        w.ok_or_else(|| Error::Usage("this lattice operation takes two operands".into()))
    }
    match op {
        LatticeOp::Meet => w1.meet(need(w2)?),
        LatticeOp::Join => w1.join(need(w2)?),
        LatticeOp::Complement => Ok(w1.complement()),
        LatticeOp::RelativeComplement => w1.relative_complement(need(w2)?),
    }
}

// ---------------------------------------------------------------------------
// Generalized permutations and base uniqueness
// ---------------------------------------------------------------------------

/// True when every row and every column has exactly one nonzero entry and
/// all those entries are units.
pub fn is_generalized_permutation(ring: &Semiring, m: &[Vec<Scalar>]) -> bool {
    generalized_permutation_inverse(ring, m).is_some()
}

/// For a generalized permutation matrix, its two-sided inverse: the
/// transposed pattern with each unit entry inverted. `None` when the input
/// is not a generalized permutation matrix.
pub fn generalized_permutation_inverse(
    ring: &Semiring,
    m: &[Vec<Scalar>],
) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return None;
    }
    let mut inv = vec![vec![ring.zero(); n]; n];
    let mut col_used = vec![false; n];
    for (i, row) in m.iter().enumerate() {
        let mut hit = None;
        for (j, entry) in row.iter().enumerate() {
            if !ring.is_zero(entry) {
                if hit.is_some() {
                    return None;
                }
                hit = Some(j);
            }
        }
        let j = hit?;
        if col_used[j] {
            return None;
        }
        col_used[j] = true;
        inv[j][i] = ring.try_invert(&row[j])?;
    }
    Some(inv)
}

/// Whether modules over this semiring are known to have a unique base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseGuarantee {
    Guaranteed,
    NotGuaranteed,
    Unknown,
}

/// Unique base holds for indecomposable antirings (and in particular entire
/// antirings); a product of nonzero semirings admits the swapped-idempotent
/// counterexample base.
pub fn unique_base_guarantee(ring: &Semiring) -> BaseGuarantee {
    if matches!(ring, Semiring::Product(_)) {
        return BaseGuarantee::NotGuaranteed;
    }
    if ring.is_antiring() && (ring.is_entire() || ring.is_indecomposable()) {
        BaseGuarantee::Guaranteed
    } else {
        BaseGuarantee::Unknown
    }
}

// ---------------------------------------------------------------------------
// Base verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum BaseVerdict {
    /// Every probed vector had exactly one representation.
    IsBase,
    /// Some probed vector had zero or several representations.
    Refuted {
        target: Vector,
        representations: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaseCheck {
    pub verdict: BaseVerdict,
    /// Whether the candidate family is a unit rescaling of the standard base.
    pub projectively_standard: bool,
    /// True when the whole carrier was enumerated.
    pub exhaustive: bool,
}

const VERIFY_BASE_BUDGET: usize = 1 << 20;

fn enumerate_vectors(pool: &[Scalar], rank: usize) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = vec![Vec::new()];
    for _ in 0..rank {
        let mut next = Vec::with_capacity(out.len() * pool.len());
        for prefix in &out {
            for s in pool {
                let mut v = prefix.clone();
                v.push(s.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Check whether `candidates` form a base, by counting representations.
///
/// For finite semirings the whole carrier is enumerated (targets and
/// coefficients alike). For infinite semirings targets draw coefficients
/// from `sample` and representations from the closure of `sample` under one
/// addition and one multiplication — a bounded box, so the confirmation is
/// weaker than the mathematical statement, while any refutation is exact.
pub fn verify_base(
    module: &FreeModule,
    candidates: &[Vector],
    sample: &[Scalar],
) -> Result<BaseCheck> {
    let n = module.rank();
    if candidates.len() != n {
        return Err(Error::RankMismatch {
            expected: n,
            got: candidates.len(),
        });
    }
    for c in candidates {
        if c.module() != module {
            return Err(Error::ModuleMismatch(
                "candidate vector from a different module".into(),
            ));
        }
    }
    let ring = module.ring();

    let (target_pool, coeff_pool, exhaustive) = match ring.carrier() {
        Some(carrier) if carrier.len().pow(n as u32) <= VERIFY_BASE_BUDGET => {
            (carrier.clone(), carrier, true)
        }
        _ => {
            let mut pool: Vec<Scalar> = Vec::new();
            for s in sample {
                ring.check_member(s)?;
                if !pool.contains(s) {
                    pool.push(s.clone());
                }
            }
            if pool.is_empty() {
                return Err(Error::Precondition(
                    "sample must be nonempty for infinite semirings".into(),
                ));
            }
            let mut closure = pool.clone();
            for a in &pool {
                for b in &pool {
                    for v in [ring.add(a, b), ring.mul(a, b)] {
                        if !closure.contains(&v) {
                            closure.push(v);
                        }
                    }
                }
            }
            if closure.len().pow(n as u32) > VERIFY_BASE_BUDGET {
                return Err(Error::Guard(format!(
                    "coefficient box {}^{n} too large for base verification",
                    closure.len()
                )));
            }
            (pool, closure, false)
        }
    };

    let combos = enumerate_vectors(&coeff_pool, n);
    let targets = enumerate_vectors(&target_pool, n);

    let mut verdict = BaseVerdict::IsBase;
    'targets: for t in &targets {
        let mut reps = 0usize;
        for combo in &combos {
            let mut acc = vec![ring.zero(); n];
            for (a, cand) in combo.iter().zip(candidates) {
                for (slot, c) in acc.iter_mut().zip(cand.coeffs()) {
                    *slot = ring.add(slot, &ring.mul(a, c));
                }
            }
            if acc == *t {
                reps += 1;
                if reps > 1 {
                    break;
                }
            }
        }
        if reps != 1 {
            verdict = BaseVerdict::Refuted {
                target: Vector::new(module, t.clone())?,
                representations: reps,
            };
            break 'targets;
        }
    }

    // Unit rescaling of the standard base: every candidate is a unit multiple
    // of a distinct standard base vector.
    let mut seen = BTreeSet::new();
    let projectively_standard = candidates.iter().all(|c| {
        let sup = c.support();
        sup.len() == 1 && {
            let i = *sup.iter().next().unwrap();
            seen.insert(i) && ring.is_unit(c.coeff(i))
        }
    }) && seen.len() == n;

    Ok(BaseCheck {
        verdict,
        projectively_standard,
        exhaustive,
    })
}
