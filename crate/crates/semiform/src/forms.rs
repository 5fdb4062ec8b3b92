//! Symmetric bilinear forms (Gram matrices), quadratic forms (triangular
//! schemes), and the constructions connecting them: companions, expansions,
//! alternate parts, and norm forms.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::module::{FreeModule, Vector};
use crate::semiring::{Scalar, Semiring};
use crate::DEFAULT_SEED;

/// A symmetric bilinear form as its Gram matrix over the ordered base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    module: FreeModule,
    entries: Vec<Scalar>, // row-major n×n, kept symmetric
}

impl GramMatrix {
    pub fn new(module: &FreeModule, rows: Vec<Vec<Scalar>>) -> Result<GramMatrix> {
        let n = module.rank();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::RankMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        let ring = module.ring();
        for row in &rows {
            for e in row {
                ring.check_member(e)?;
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Parse(format!("asymmetric at ({},{})", i + 1, j + 1)));
                }
            }
        }
        Ok(GramMatrix {
            module: module.clone(),
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Diagonal form ⟨d₁,…,d_n⟩.
    pub fn diagonal(module: &FreeModule, diag: Vec<Scalar>) -> Result<GramMatrix> {
        let n = module.rank();
        if diag.len() != n {
            return Err(Error::RankMismatch {
                expected: n,
                got: diag.len(),
            });
        }
        let ring = module.ring();
        let mut entries = vec![ring.zero(); n * n];
        for (i, d) in diag.into_iter().enumerate() {
            ring.check_member(&d)?;
            entries[i * n + i] = d;
        }
        Ok(GramMatrix {
            module: module.clone(),
            entries,
        })
    }

    pub fn zero(module: &FreeModule) -> GramMatrix {
        let n = module.rank();
        GramMatrix {
            module: module.clone(),
            entries: vec![module.ring().zero(); n * n],
        }
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.rank() + j]
    }

    pub(crate) fn set_entry(&mut self, i: usize, j: usize, v: Scalar) {
        let n = self.rank();
        self.entries[i * n + j] = v.clone();
        self.entries[j * n + i] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    pub(crate) fn eval_coeffs(&self, xs: &[Scalar], ys: &[Scalar]) -> Scalar {
        let ring = self.module.ring();
        let mut acc = ring.zero();
        for (i, x) in xs.iter().enumerate() {
            if ring.is_zero(x) {
                continue;
            }
            for (j, y) in ys.iter().enumerate() {
                if ring.is_zero(y) {
                    continue;
                }
                let term = ring.mul(&ring.mul(x, y), self.entry(i, j));
                acc = ring.add(&acc, &term);
            }
        }
        acc
    }

    /// b(x, y) = Σ x_i y_j β_ij.
    pub fn eval(&self, x: &Vector, y: &Vector) -> Result<Scalar> {
        if x.module() != &self.module || y.module() != &self.module {
            return Err(Error::ModuleMismatch(
                "bilinear evaluation on foreign vectors".into(),
            ));
        }
        Ok(self.eval_coeffs(x.coeffs(), y.coeffs()))
    }

    /// Restriction to a basic submodule given by ascending base indices.
    pub fn restrict(&self, indices: &[usize]) -> GramMatrix {
        let sub = self.module.restrict(indices);
        let entries = indices
            .iter()
            .flat_map(|&i| indices.iter().map(move |&j| self.entry(i, j).clone()))
            .collect();
        GramMatrix {
            module: sub,
            entries,
        }
    }

    /// b(ε, ε) = 0 for every base vector.
    pub fn is_alternate(&self) -> bool {
        let ring = self.module.ring();
        (0..self.rank()).all(|i| ring.is_zero(self.entry(i, i)))
    }

    /// b(ε, ε) ≠ 0 for every base vector.
    pub fn is_anisotropic(&self) -> bool {
        let ring = self.module.ring();
        (0..self.rank()).all(|i| !ring.is_zero(self.entry(i, i)))
    }
}

/// A quadratic form as a triangular scheme: diagonal coefficients plus
/// strictly-upper cross coefficients, evaluating as the polynomial
/// q(x) = Σ α_i x_i² + Σ_{i<j} α_ij x_i x_j.
///
/// Only structurally nonzero upper entries are stored; an absent key is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticScheme {
    module: FreeModule,
    diag: Vec<Scalar>,
    off: BTreeMap<(usize, usize), Scalar>,
}

impl QuadraticScheme {
    pub fn new(
        module: &FreeModule,
        diag: Vec<Scalar>,
        off: BTreeMap<(usize, usize), Scalar>,
    ) -> Result<QuadraticScheme> {
        let n = module.rank();
        if diag.len() != n {
            return Err(Error::RankMismatch {
                expected: n,
                got: diag.len(),
            });
        }
        let ring = module.ring();
        for d in &diag {
            ring.check_member(d)?;
        }
        let mut clean = BTreeMap::new();
        for ((i, j), v) in off {
            if i >= j || j >= n {
                return Err(Error::Parse(format!(
                    "bad scheme key ({},{}): need 1 <= i < j <= {n}",
                    i + 1,
                    j + 1
                )));
            }
            ring.check_member(&v)?;
            if !ring.is_zero(&v) {
                clean.insert((i, j), v);
            }
        }
        Ok(QuadraticScheme {
            module: module.clone(),
            diag,
            off: clean,
        })
    }

    /// Diagonal form [a₁,…,a_n].
    pub fn diagonal(module: &FreeModule, diag: Vec<Scalar>) -> Result<QuadraticScheme> {
        QuadraticScheme::new(module, diag, BTreeMap::new())
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn diag(&self, i: usize) -> &Scalar {
        &self.diag[i]
    }

    pub fn diag_coeffs(&self) -> &[Scalar] {
        &self.diag
    }

    pub fn off_entries(&self) -> &BTreeMap<(usize, usize), Scalar> {
        &self.off
    }

    /// Cross coefficient between two distinct indices, in either order.
    pub fn cross(&self, i: usize, j: usize) -> Scalar {
        debug_assert_ne!(i, j);
        let key = (i.min(j), i.max(j));
        self.off
            .get(&key)
            .cloned()
            .unwrap_or_else(|| self.module.ring().zero())
    }

    pub(crate) fn eval_coeffs(&self, xs: &[Scalar]) -> Scalar {
        let ring = self.module.ring();
        let mut acc = ring.zero();
        for (i, x) in xs.iter().enumerate() {
            if ring.is_zero(x) {
                continue;
            }
            acc = ring.add(&acc, &ring.mul(&self.diag[i], &ring.square(x)));
        }
        for ((i, j), a) in &self.off {
            let term = ring.mul(a, &ring.mul(&xs[*i], &xs[*j]));
            acc = ring.add(&acc, &term);
        }
        acc
    }

    /// q(x) by the scheme polynomial.
    pub fn eval(&self, x: &Vector) -> Result<Scalar> {
        if x.module() != &self.module {
            return Err(Error::ModuleMismatch(
                "quadratic evaluation on a foreign vector".into(),
            ));
        }
        Ok(self.eval_coeffs(x.coeffs()))
    }

    pub fn restrict(&self, indices: &[usize]) -> QuadraticScheme {
        let sub = self.module.restrict(indices);
        let diag = indices.iter().map(|&i| self.diag[i].clone()).collect();
        let mut off = BTreeMap::new();
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate().skip(a + 1) {
                let v = self.cross(i, j);
                if !self.module.ring().is_zero(&v) {
                    off.insert((a, b), v);
                }
            }
        }
        QuadraticScheme {
            module: sub,
            diag,
            off,
        }
    }

    /// Drop cross coefficients on quasilinear pairs. Such entries are
    /// absorbed by the diagonal terms at every point (if A + c = A then
    /// A + B + c = A + B), so the reduced scheme presents the same form;
    /// it is the canonical presentation used for isometry comparisons.
    pub fn quasilinear_reduced(&self) -> QuadraticScheme {
        let ring = self.module.ring();
        let off = self
            .off
            .iter()
            .filter(|((i, j), a)| !ring.pair_quasilinear(&self.diag[*i], &self.diag[*j], a))
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        QuadraticScheme {
            module: self.module.clone(),
            diag: self.diag.clone(),
            off,
        }
    }

    pub fn is_diagonally_zero(&self) -> bool {
        let ring = self.module.ring();
        self.diag.iter().all(|d| ring.is_zero(d))
    }

    pub fn is_anisotropic(&self) -> bool {
        let ring = self.module.ring();
        self.diag.iter().all(|d| !ring.is_zero(d))
    }
}

/// An expansion of a balanced pair (q, b): a full, not necessarily
/// symmetric matrix B with B + Bᵗ = b and B(ε, ε) = q(ε).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    module: FreeModule,
    entries: Vec<Scalar>,
}

impl Expansion {
    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.rank() + j]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }
}

/// Either presentation of a form; used by the operations that treat the
/// bilinear and quadratic theories uniformly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Form {
    Bilinear(GramMatrix),
    Quadratic(QuadraticScheme),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Bilinear,
    Quadratic,
}

impl std::fmt::Display for FormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormKind::Bilinear => write!(f, "bilinear"),
            FormKind::Quadratic => write!(f, "quadratic"),
        }
    }
}

impl Form {
    pub fn kind(&self) -> FormKind {
        match self {
            Form::Bilinear(_) => FormKind::Bilinear,
            Form::Quadratic(_) => FormKind::Quadratic,
        }
    }

    pub fn module(&self) -> &FreeModule {
        match self {
            Form::Bilinear(b) => b.module(),
            Form::Quadratic(q) => q.module(),
        }
    }

    pub fn rank(&self) -> usize {
        self.module().rank()
    }

    /// Uniform coefficient accessor: the diagonal coefficient for i = j,
    /// otherwise the (unordered) cross coefficient.
    pub fn coeff(&self, i: usize, j: usize) -> Scalar {
        match self {
            Form::Bilinear(b) => b.entry(i, j).clone(),
            Form::Quadratic(q) => {
                if i == j {
                    q.diag(i).clone()
                } else {
                    q.cross(i, j)
                }
            }
        }
    }

    pub fn restrict(&self, indices: &[usize]) -> Form {
        match self {
            Form::Bilinear(b) => Form::Bilinear(b.restrict(indices)),
            Form::Quadratic(q) => Form::Quadratic(q.restrict(indices)),
        }
    }

    /// Canonical presentation: Gram matrices are already canonical, schemes
    /// drop their absorbed cross coefficients.
    pub fn normalized(&self) -> Form {
        match self {
            Form::Bilinear(b) => Form::Bilinear(b.clone()),
            Form::Quadratic(q) => Form::Quadratic(q.quasilinear_reduced()),
        }
    }

    pub fn as_bilinear(&self) -> Option<&GramMatrix> {
        match self {
            Form::Bilinear(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_quadratic(&self) -> Option<&QuadraticScheme> {
        match self {
            Form::Quadratic(q) => Some(q),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Companions
// ---------------------------------------------------------------------------

/// The balanced companion read off the scheme: diagonal 2α_i (meaning
/// α_i + α_i in the semiring), off-diagonal the scheme's own cross
/// coefficients. Satisfies b(ε, ε) = 2q(ε) by construction.
pub fn balanced_companion(q: &QuadraticScheme) -> GramMatrix {
    let ring = q.module().ring();
    let mut b = GramMatrix::zero(q.module());
    for i in 0..q.rank() {
        b.set_entry(i, i, ring.double(q.diag(i)));
    }
    for ((i, j), a) in q.off_entries() {
        b.set_entry(*i, *j, a.clone());
    }
    b
}

/// The quasiminimal reduction b_f of a balanced companion: zero the entry
/// at every base pair on which q is quasilinear (decided by the semiring
/// oracle on q's own data α_i, α_j, α_ij), keep everything else.
///
/// On finite semirings the companion precondition is validated by
/// exhaustive evaluation; a violation is a caller bug and panics.
pub fn quasiminimal_reduce(q: &QuadraticScheme, b: &GramMatrix) -> GramMatrix {
    assert_eq!(
        q.module(),
        b.module(),
        "companion belongs to a different module"
    );
    if q.module().ring().carrier().is_some() {
        let cfg = SampleCfg::default_for(q.module().ring());
        if let Ok(CompanionVerdict::Refuted { .. }) = is_companion(q, b, &cfg) {
            panic!("quasiminimal_reduce: b is not a companion of q");
        }
    }
    let ring = q.module().ring();
    let mut out = b.clone();
    for i in 0..q.rank() {
        for j in (i + 1)..q.rank() {
            if ring.pair_quasilinear(q.diag(i), q.diag(j), &q.cross(i, j)) {
                out.set_entry(i, j, ring.zero());
            }
        }
    }
    out
}

/// Zero the diagonal, keep the off-diagonal entries.
pub fn alternate_part(b: &GramMatrix) -> GramMatrix {
    let ring = b.module().ring();
    let mut out = b.clone();
    for i in 0..b.rank() {
        out.set_entry(i, i, ring.zero());
    }
    out
}

/// How to split each off-diagonal companion entry between B(ε_i, ε_j) and
/// B(ε_j, ε_i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitChoice {
    /// χ_ij = β_ij, χ_ji = 0 for i < j.
    Triangular,
    /// Explicit (χ_ij, χ_ji) per pair i < j; pairs not listed fall back to
    /// the triangular split.
    Explicit(BTreeMap<(usize, usize), (Scalar, Scalar)>),
}

/// Build an expansion B of the balanced pair (q, b): B_ii = α_i and
/// B(ε_i, ε_j) = χ_ij with χ_ij + χ_ji = β_ij.
pub fn make_expansion(
    q: &QuadraticScheme,
    b: &GramMatrix,
    split: &SplitChoice,
) -> Result<Expansion> {
    if q.module() != b.module() {
        return Err(Error::ModuleMismatch(
            "expansion needs q and b on the same module".into(),
        ));
    }
    let ring = q.module().ring();
    let n = q.rank();
    for i in 0..n {
        if *b.entry(i, i) != ring.double(q.diag(i)) {
            return Err(Error::Precondition(format!(
                "b is not balanced for q: b({0},{0}) = {1} but 2q(e{0}) = {2}",
                i + 1,
                b.entry(i, i),
                ring.double(q.diag(i))
            )));
        }
    }
    let mut entries = vec![ring.zero(); n * n];
    for i in 0..n {
        entries[i * n + i] = q.diag(i).clone();
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let beta = b.entry(i, j);
            let (xij, xji) = match split {
                SplitChoice::Triangular => (beta.clone(), ring.zero()),
                SplitChoice::Explicit(map) => match map.get(&(i, j)) {
                    Some((a, c)) => (a.clone(), c.clone()),
                    None => (beta.clone(), ring.zero()),
                },
            };
            if ring.add(&xij, &xji) != *beta {
                return Err(Error::BadSplit {
                    i: i + 1,
                    j: j + 1,
                    got: xij.to_string(),
                    got2: xji.to_string(),
                    want: beta.to_string(),
                });
            }
            entries[i * n + j] = xij;
            entries[j * n + i] = xji;
        }
    }
    Ok(Expansion {
        module: q.module().clone(),
        entries,
    })
}

/// The norm form n(γ): x ↦ γ(x, x), as a scheme with diagonal γ_ii and
/// cross coefficients 2γ_ij.
pub fn norm_form(gamma: &GramMatrix) -> QuadraticScheme {
    let ring = gamma.module().ring();
    let n = gamma.rank();
    let diag = (0..n).map(|i| gamma.entry(i, i).clone()).collect();
    let mut off = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = ring.double(gamma.entry(i, j));
            if !ring.is_zero(&v) {
                off.insert((i, j), v);
            }
        }
    }
    QuadraticScheme {
        module: gamma.module().clone(),
        diag,
        off,
    }
}

/// Structural predicates of a form. Fields inapplicable to the form's kind
/// are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormPredicates {
    pub is_alternate: Option<bool>,
    pub is_diagonally_zero: Option<bool>,
    pub is_anisotropic: bool,
    /// Diagonally zero schemes are rigid (sufficient condition only: the
    /// converse needs extra hypotheses on the semiring).
    pub rigid_sufficient: Option<bool>,
    pub is_quasilinear_scheme: Option<bool>,
}

pub fn predicates(f: &Form) -> FormPredicates {
    match f {
        Form::Bilinear(b) => FormPredicates {
            is_alternate: Some(b.is_alternate()),
            is_diagonally_zero: None,
            is_anisotropic: b.is_anisotropic(),
            rigid_sufficient: None,
            is_quasilinear_scheme: None,
        },
        Form::Quadratic(q) => {
            let ring = q.module().ring();
            let quasilinear = (0..q.rank()).all(|i| {
                ((i + 1)..q.rank())
                    .all(|j| ring.pair_quasilinear(q.diag(i), q.diag(j), &q.cross(i, j)))
            });
            FormPredicates {
                is_alternate: None,
                is_diagonally_zero: Some(q.is_diagonally_zero()),
                is_anisotropic: q.is_anisotropic(),
                rigid_sufficient: Some(q.is_diagonally_zero()),
                is_quasilinear_scheme: Some(quasilinear),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Companion checking
// ---------------------------------------------------------------------------

/// Sampling configuration for the checks that cannot be exhaustive over an
/// infinite semiring.
#[derive(Debug, Clone)]
pub struct SampleCfg {
    pub grid: Vec<Scalar>,
    pub random_pairs: usize,
    pub seed: u64,
}

impl SampleCfg {
    pub fn default_for(ring: &Semiring) -> SampleCfg {
        SampleCfg {
            grid: ring.default_sample(),
            random_pairs: 500,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> SampleCfg {
        self.seed = seed;
        self
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub(crate) fn random_coeffs(&self, n: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
        (0..n)
            .map(|_| self.grid[rng.gen_range(0..self.grid.len())].clone())
            .collect()
    }
}

/// Outcome of the companion identity check q(x+y) = q(x) + q(y) + b(x, y).
#[derive(Debug, Clone, PartialEq)]
pub enum CompanionVerdict {
    Holds { exhaustive: bool, pairs: usize },
    Refuted { x: Vector, y: Vector },
}

impl CompanionVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, CompanionVerdict::Holds { .. })
    }
}

const COMPANION_VECTOR_BUDGET: usize = 512;

pub(crate) fn all_carrier_vectors(ring: &Semiring, n: usize) -> Option<Vec<Vec<Scalar>>> {
    let carrier = ring.carrier()?;
    let count = carrier.len().checked_pow(n as u32)?;
    if count > COMPANION_VECTOR_BUDGET {
        return None;
    }
    let mut out: Vec<Vec<Scalar>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * carrier.len());
        for prefix in &out {
            for s in &carrier {
                let mut v = prefix.clone();
                v.push(s.clone());
                next.push(v);
            }
        }
        out = next;
    }
    Some(out)
}

/// Check that b is a companion of q: exhaustive over all vector pairs for
/// small finite carriers, otherwise all base-scaled pairs from the grid plus
/// `random_pairs` random pairs. Any refutation carries the witness pair.
pub fn is_companion(
    q: &QuadraticScheme,
    b: &GramMatrix,
    cfg: &SampleCfg,
) -> Result<CompanionVerdict> {
    if q.module() != b.module() {
        return Err(Error::ModuleMismatch(
            "companion check needs q and b on the same module".into(),
        ));
    }
    let module = q.module();
    let ring = module.ring();
    let n = module.rank();

    let identity_holds = |xs: &[Scalar], ys: &[Scalar]| -> bool {
        let sum: Vec<Scalar> = xs.iter().zip(ys).map(|(a, c)| ring.add(a, c)).collect();
        let lhs = q.eval_coeffs(&sum);
        let rhs = ring.add(
            &ring.add(&q.eval_coeffs(xs), &q.eval_coeffs(ys)),
            &b.eval_coeffs(xs, ys),
        );
        lhs == rhs
    };

    if let Some(vectors) = all_carrier_vectors(ring, n) {
        let mut pairs = 0;
        for xs in &vectors {
            for ys in &vectors {
                pairs += 1;
                if !identity_holds(xs, ys) {
                    return Ok(CompanionVerdict::Refuted {
                        x: Vector::new(module, xs.clone())?,
                        y: Vector::new(module, ys.clone())?,
                    });
                }
            }
        }
        return Ok(CompanionVerdict::Holds {
            exhaustive: true,
            pairs,
        });
    }

    let mut pairs = 0;
    // Base-scaled pairs catch the per-pair constraints directly.
    for i in 0..n {
        for j in 0..n {
            for s in &cfg.grid {
                for t in &cfg.grid {
                    let mut xs = vec![ring.zero(); n];
                    let mut ys = vec![ring.zero(); n];
                    xs[i] = s.clone();
                    ys[j] = t.clone();
                    pairs += 1;
                    if !identity_holds(&xs, &ys) {
                        return Ok(CompanionVerdict::Refuted {
                            x: Vector::new(module, xs)?,
                            y: Vector::new(module, ys)?,
                        });
                    }
                }
            }
        }
    }
    let mut rng = cfg.rng();
    for _ in 0..cfg.random_pairs {
        let xs = cfg.random_coeffs(n, &mut rng);
        let ys = cfg.random_coeffs(n, &mut rng);
        pairs += 1;
        if !identity_holds(&xs, &ys) {
            return Ok(CompanionVerdict::Refuted {
                x: Vector::new(module, xs)?,
                y: Vector::new(module, ys)?,
            });
        }
    }
    Ok(CompanionVerdict::Holds {
        exhaustive: false,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat_module(n: usize) -> FreeModule {
        FreeModule::new(Semiring::Nat, n)
    }

    fn nats(vs: &[u64]) -> Vec<Scalar> {
        vs.iter().map(|&v| Scalar::Nat(v)).collect()
    }

    #[test]
    fn eval_bilinear_examples() {
        let m = nat_module(2);
        let b = GramMatrix::new(&m, vec![nats(&[0, 1]), nats(&[1, 0])]).unwrap();
        let x = Vector::new(&m, nats(&[1, 1])).unwrap();
        // expanding the double sum by hand: 1·1·1 + 1·1·1 = 2
        assert_eq!(b.eval(&x, &x).unwrap(), Scalar::Nat(2));

        let diag = GramMatrix::diagonal(&m, nats(&[1, 1])).unwrap();
        let e1 = m.base_vector(0);
        let e2 = m.base_vector(1);
        assert_eq!(diag.eval(&e1, &e2).unwrap(), Scalar::Nat(0));
        let zero = m.zero_vector();
        assert_eq!(b.eval(&zero, &x).unwrap(), Scalar::Nat(0));
    }

    #[test]
    fn eval_quadratic_examples() {
        let m1 = nat_module(1);
        let q1 = QuadraticScheme::diagonal(&m1, nats(&[3])).unwrap();
        let x = Vector::new(&m1, nats(&[2])).unwrap();
        assert_eq!(q1.eval(&x).unwrap(), Scalar::Nat(12));

        let m2 = nat_module(2);
        let q2 = QuadraticScheme::new(
            &m2,
            nats(&[1, 1]),
            BTreeMap::from([((0, 1), Scalar::Nat(1))]),
        )
        .unwrap();
        let y = Vector::new(&m2, nats(&[1, 1])).unwrap();
        assert_eq!(q2.eval(&y).unwrap(), Scalar::Nat(3));

        // over max-plus only the cross monomial is present for diag-zero q
        let t = FreeModule::new(Semiring::MaxPlus, 2);
        let q3 = QuadraticScheme::new(
            &t,
            vec![Scalar::MP_NEG_INF, Scalar::MP_NEG_INF],
            BTreeMap::from([((0, 1), Scalar::mp(4))]),
        )
        .unwrap();
        let v = Vector::new(&t, vec![Scalar::mp(1), Scalar::mp(2)]).unwrap();
        assert_eq!(q3.eval(&v).unwrap(), Scalar::mp(7));
    }

    #[test]
    fn module_mismatch_is_typed() {
        let m2 = nat_module(2);
        let m3 = nat_module(3);
        let b = GramMatrix::diagonal(&m2, nats(&[1, 1])).unwrap();
        let x = Vector::new(&m3, nats(&[1, 1, 1])).unwrap();
        assert!(matches!(b.eval(&x, &x), Err(Error::ModuleMismatch(_))));
    }

    #[test]
    fn companion_examples_over_nat() {
        let m = nat_module(1);
        let q = QuadraticScheme::diagonal(&m, nats(&[1])).unwrap();
        let cfg = SampleCfg::default_for(&Semiring::Nat);

        let good = GramMatrix::diagonal(&m, nats(&[2])).unwrap();
        assert!(is_companion(&q, &good, &cfg).unwrap().holds());

        let bad = GramMatrix::diagonal(&m, nats(&[1])).unwrap();
        match is_companion(&q, &bad, &cfg).unwrap() {
            CompanionVerdict::Refuted { .. } => {}
            v => panic!("expected refutation, got {v:?}"),
        }
    }

    /// Companions need not be unique: over B both ⟨0⟩ and ⟨1⟩ accompany
    /// q = [1], exhaustively.
    #[test]
    fn companions_not_unique_over_bool() {
        let m = FreeModule::new(Semiring::Bool, 1);
        let q = QuadraticScheme::diagonal(&m, vec![Scalar::Bool(true)]).unwrap();
        let cfg = SampleCfg::default_for(&Semiring::Bool);
        for d in [false, true] {
            let b = GramMatrix::diagonal(&m, vec![Scalar::Bool(d)]).unwrap();
            let verdict = is_companion(&q, &b, &cfg).unwrap();
            assert!(matches!(
                verdict,
                CompanionVerdict::Holds {
                    exhaustive: true,
                    ..
                }
            ));
        }
    }

    #[test]
    fn balanced_companion_shapes() {
        // q = [[a1, c], [, a2]] has balanced companion [[2a1, c], [c, 2a2]]
        let m = nat_module(2);
        let q = QuadraticScheme::new(
            &m,
            nats(&[1, 2]),
            BTreeMap::from([((0, 1), Scalar::Nat(3))]),
        )
        .unwrap();
        let b = balanced_companion(&q);
        assert_eq!(b.rows(), vec![nats(&[2, 3]), nats(&[3, 4])]);

        // over B the diagonal doubles to itself
        let mb = FreeModule::new(Semiring::Bool, 1);
        let qb = QuadraticScheme::diagonal(&mb, vec![Scalar::Bool(true)]).unwrap();
        assert_eq!(
            balanced_companion(&qb).rows(),
            vec![vec![Scalar::Bool(true)]]
        );
    }

    #[test]
    fn balanced_companion_is_companion_sampled() {
        let t = FreeModule::new(Semiring::MaxPlus, 3);
        let q = QuadraticScheme::new(
            &t,
            vec![Scalar::mp(0), Scalar::mp(2), Scalar::MP_NEG_INF],
            BTreeMap::from([((0, 1), Scalar::mp(3)), ((1, 2), Scalar::mp(-1))]),
        )
        .unwrap();
        let b = balanced_companion(&q);
        let cfg = SampleCfg::default_for(&Semiring::MaxPlus);
        assert!(is_companion(&q, &b, &cfg).unwrap().holds());
    }

    #[test]
    fn quasiminimal_examples() {
        // off-diagonal already zero: b_f = b
        let m = nat_module(2);
        let q = QuadraticScheme::diagonal(&m, nats(&[1, 1])).unwrap();
        let b = balanced_companion(&q);
        let bf = quasiminimal_reduce(&q, &b);
        assert_eq!(bf.rows(), vec![nats(&[2, 0]), nats(&[0, 2])]);

        // non-quasilinear pair survives
        let q2 = QuadraticScheme::new(
            &m,
            nats(&[1, 1]),
            BTreeMap::from([((0, 1), Scalar::Nat(1))]),
        )
        .unwrap();
        let b2 = balanced_companion(&q2);
        assert_eq!(quasiminimal_reduce(&q2, &b2), b2);

        // dominance zeroes the cross entry over max-plus
        let t = FreeModule::new(Semiring::MaxPlus, 2);
        let q3 = QuadraticScheme::new(
            &t,
            vec![Scalar::mp(0), Scalar::mp(0)],
            BTreeMap::from([((0, 1), Scalar::mp(-5))]),
        )
        .unwrap();
        let b3 = balanced_companion(&q3);
        let bf3 = quasiminimal_reduce(&q3, &b3);
        assert_eq!(*bf3.entry(0, 1), Scalar::MP_NEG_INF);
        assert_eq!(*bf3.entry(0, 0), Scalar::mp(0));
        // b_f keeps the companion property
        let cfg = SampleCfg::default_for(&Semiring::MaxPlus);
        assert!(is_companion(&q3, &bf3, &cfg).unwrap().holds());
    }

    #[test]
    fn alternate_part_examples() {
        let m = nat_module(2);
        let b = GramMatrix::new(&m, vec![nats(&[1, 1]), nats(&[1, 0])]).unwrap();
        let alt = alternate_part(&b);
        assert_eq!(alt.rows(), vec![nats(&[0, 1]), nats(&[1, 0])]);
        assert_eq!(alternate_part(&alt), alt);
        let d = GramMatrix::diagonal(&m, nats(&[3, 4])).unwrap();
        assert_eq!(alternate_part(&d), GramMatrix::zero(&m));
    }

    #[test]
    fn expansion_examples() {
        let m = nat_module(2);
        let q = QuadraticScheme::new(
            &m,
            nats(&[1, 2]),
            BTreeMap::from([((0, 1), Scalar::Nat(3))]),
        )
        .unwrap();
        let b = GramMatrix::new(&m, vec![nats(&[2, 3]), nats(&[3, 4])]).unwrap();

        let tri = make_expansion(&q, &b, &SplitChoice::Triangular).unwrap();
        assert_eq!(tri.rows(), vec![nats(&[1, 3]), nats(&[0, 2])]);

        let split =
            SplitChoice::Explicit(BTreeMap::from([((0, 1), (Scalar::Nat(1), Scalar::Nat(2)))]));
        let e = make_expansion(&q, &b, &split).unwrap();
        assert_eq!(e.rows(), vec![nats(&[1, 1]), nats(&[2, 2])]);

        let bad =
            SplitChoice::Explicit(BTreeMap::from([((0, 1), (Scalar::Nat(1), Scalar::Nat(1)))]));
        assert!(matches!(
            make_expansion(&q, &b, &bad),
            Err(Error::BadSplit { .. })
        ));

        // an unbalanced b already violates the expansion equations on the diagonal
        let unbalanced = GramMatrix::new(&m, vec![nats(&[1, 3]), nats(&[3, 4])]).unwrap();
        assert!(make_expansion(&q, &unbalanced, &SplitChoice::Triangular).is_err());
    }

    #[test]
    fn expansion_identities_hold() {
        // B + Bᵗ = b and B_ii = α_i, exactly
        let m = nat_module(3);
        let q = QuadraticScheme::new(
            &m,
            nats(&[1, 0, 2]),
            BTreeMap::from([((0, 1), Scalar::Nat(3)), ((0, 2), Scalar::Nat(5))]),
        )
        .unwrap();
        let b = balanced_companion(&q);
        let e = make_expansion(&q, &b, &SplitChoice::Triangular).unwrap();
        let ring = m.ring();
        for i in 0..3 {
            assert_eq!(e.entry(i, i), q.diag(i));
            for j in 0..3 {
                assert_eq!(ring.add(e.entry(i, j), e.entry(j, i)), *b.entry(i, j));
            }
        }
    }

    #[test]
    fn norm_form_examples() {
        let m = nat_module(2);
        let g = GramMatrix::new(&m, vec![nats(&[1, 1]), nats(&[1, 1])]).unwrap();
        let n = norm_form(&g);
        assert_eq!(n.diag_coeffs(), &nats(&[1, 1])[..]);
        assert_eq!(n.cross(0, 1), Scalar::Nat(2));

        let mb = FreeModule::new(Semiring::Bool, 2);
        let one = Scalar::Bool(true);
        let gb = GramMatrix::new(
            &mb,
            vec![
                vec![one.clone(), one.clone()],
                vec![one.clone(), one.clone()],
            ],
        )
        .unwrap();
        let nb = norm_form(&gb);
        // 2·1 = 1 in B
        assert_eq!(nb.cross(0, 1), one);
    }

    #[test]
    fn norm_form_evaluates_as_gamma_on_the_diagonal() {
        let t = FreeModule::new(Semiring::MaxPlus, 3);
        let g = GramMatrix::new(
            &t,
            vec![
                vec![Scalar::mp(0), Scalar::mp(2), Scalar::MP_NEG_INF],
                vec![Scalar::mp(2), Scalar::mp(-1), Scalar::mp(1)],
                vec![Scalar::MP_NEG_INF, Scalar::mp(1), Scalar::mp(3)],
            ],
        )
        .unwrap();
        let n = norm_form(&g);
        let grid = Semiring::MaxPlus.default_sample();
        for a in &grid {
            for b in &grid {
                for c in &grid {
                    let x = Vector::new(&t, vec![a.clone(), b.clone(), c.clone()]).unwrap();
                    assert_eq!(n.eval(&x).unwrap(), g.eval(&x, &x).unwrap());
                }
            }
        }
    }

    #[test]
    fn predicates_examples() {
        let m = nat_module(2);
        let g = GramMatrix::new(&m, vec![nats(&[0, 1]), nats(&[1, 0])]).unwrap();
        let p = predicates(&Form::Bilinear(g));
        assert_eq!(p.is_alternate, Some(true));
        assert!(!p.is_anisotropic);

        let q = QuadraticScheme::diagonal(&m, nats(&[1, 2])).unwrap();
        let p = predicates(&Form::Quadratic(q));
        assert!(p.is_anisotropic);
        assert_eq!(p.is_diagonally_zero, Some(false));
        assert_eq!(p.is_quasilinear_scheme, Some(true));

        let rigid = QuadraticScheme::new(
            &m,
            nats(&[0, 0]),
            BTreeMap::from([((0, 1), Scalar::Nat(7))]),
        )
        .unwrap();
        let p = predicates(&Form::Quadratic(rigid));
        assert_eq!(p.rigid_sufficient, Some(true));
        assert_eq!(p.is_quasilinear_scheme, Some(false));
    }

    #[test]
    fn asymmetric_gram_rejected_with_position() {
        let m = nat_module(2);
        let err = GramMatrix::new(&m, vec![nats(&[1, 2]), nats(&[3, 1])]).unwrap_err();
        assert_eq!(err.to_string(), "parse error: asymmetric at (1,2)");
    }

    #[test]
    fn scheme_drops_structural_zeros() {
        let m = nat_module(2);
        let q = QuadraticScheme::new(
            &m,
            nats(&[1, 1]),
            BTreeMap::from([((0, 1), Scalar::Nat(0))]),
        )
        .unwrap();
        assert!(q.off_entries().is_empty());
    }
}
