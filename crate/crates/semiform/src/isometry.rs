//! Isometry search for forms on modules with unique base, isotypical
//! multiplicities, Witt-style cancellation, and small orthogonal groups.
//!
//! Because both modules have unique base, any isometry maps base vectors to
//! unit multiples of base vectors, so the search space is the generalized
//! permutations. A witness (π, u) is valid when rescaling the source
//! coefficients reproduces the target exactly:
//! target(π(i), π(j)) = u_i · u_j · source(i, j) for all i ≤ j (with i = j
//! covering the diagonal, where the factor is u_i²).
//!
//! Cancellation needs isotypically finite summands, which finite rank
//! guarantees. With infinitely many copies of one component the law fails
//! (shift a copy off an infinite sum); such modules are out of
//! representational scope here.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;

use crate::decompose::decompose;
use crate::error::{Error, Result};
use crate::forms::{Form, GramMatrix, QuadraticScheme};
use crate::semiring::{Scalar, Semiring, SuperScalar};

/// Where unit scalars for the search come from.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitSource {
    /// A finite candidate set, tried in ascending order.
    Candidates(Vec<Scalar>),
    /// Solve diagonal and cross constraints directly on the value group
    /// (max-plus and supertropical; free parameters default to 1).
    Solve,
}

impl UnitSource {
    /// The natural source for a semiring: enumerated units when the unit
    /// group is finite, the value-group solver for max-plus and
    /// supertropical.
    pub fn default_for(ring: &Semiring) -> Result<UnitSource> {
        match ring {
            Semiring::MaxPlus | Semiring::Supertropical => Ok(UnitSource::Solve),
            _ => match ring.units() {
                Some(units) => Ok(UnitSource::Candidates(units)),
                None => Err(Error::NoUnits(ring.kind_id())),
            },
        }
    }
}

/// A base permutation plus per-index unit scalars realizing an isometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryWitness {
    pub perm: Vec<usize>,
    pub units: Vec<Scalar>,
}

impl IsometryWitness {
    pub fn identity(f: &Form) -> IsometryWitness {
        let n = f.rank();
        IsometryWitness {
            perm: (0..n).collect(),
            units: vec![f.module().ring().one(); n],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Rescale-and-permute the source coefficients.
    pub fn apply(&self, f: &Form) -> Form {
        let ring = f.module().ring();
        let n = f.rank();
        assert_eq!(self.perm.len(), n, "witness rank mismatch");
        match f {
            Form::Bilinear(b) => {
                let mut rows = vec![vec![ring.zero(); n]; n];
                for i in 0..n {
                    for j in 0..n {
                        rows[self.perm[i]][self.perm[j]] =
                            ring.mul(&ring.mul(&self.units[i], &self.units[j]), b.entry(i, j));
                    }
                }
                Form::Bilinear(GramMatrix::new(f.module(), rows).expect("image stays symmetric"))
            }
            Form::Quadratic(q) => {
                let mut diag = vec![ring.zero(); n];
                let mut off = BTreeMap::new();
                for i in 0..n {
                    diag[self.perm[i]] = ring.mul(&ring.square(&self.units[i]), q.diag(i));
                }
                for ((i, j), a) in q.off_entries() {
                    let (p, r) = (self.perm[*i], self.perm[*j]);
                    let key = (p.min(r), p.max(r));
                    off.insert(
                        key,
                        ring.mul(&ring.mul(&self.units[*i], &self.units[*j]), a),
                    );
                }
                Form::Quadratic(
                    QuadraticScheme::new(f.module(), diag, off).expect("image stays a scheme"),
                )
            }
        }
    }

    /// Compose with another witness: first `self`, then `next`.
    pub fn then(&self, next: &IsometryWitness, ring: &Semiring) -> IsometryWitness {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut units = vec![ring.one(); n];
        for i in 0..n {
            perm[i] = next.perm[self.perm[i]];
            units[i] = ring.mul(&self.units[i], &next.units[self.perm[i]]);
        }
        IsometryWitness { perm, units }
    }

    pub fn inverse(&self, ring: &Semiring) -> IsometryWitness {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut units = vec![ring.one(); n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            units[self.perm[i]] = ring
                .try_invert(&self.units[i])
                .expect("witness scalars are units");
        }
        IsometryWitness { perm, units }
    }

    /// Nontrivial cycles of the permutation, 0-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.perm[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.perm[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.perm[cur];
            }
            out.push(cycle);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

struct Search<'a> {
    src: &'a Form,
    tgt: &'a Form,
    ring: Semiring,
    n: usize,
    source: &'a UnitSource,
    collect_all: bool,
    found: Vec<IsometryWitness>,
}

impl<'a> Search<'a> {
    fn run(mut self) -> Vec<IsometryWitness> {
        let mut perm = Vec::with_capacity(self.n);
        let mut used = vec![false; self.n];
        self.extend_perm(&mut perm, &mut used);
        self.found
    }

    /// Zero patterns must match: units are never zero divisors, so
    /// u_i u_j c = 0 exactly when c = 0.
    fn image_compatible(&self, perm: &[usize], i: usize, j: usize) -> bool {
        let src = self.src.coeff(i, i);
        let tgt = self.tgt.coeff(j, j);
        if self.ring.is_zero(&src) != self.ring.is_zero(&tgt) {
            return false;
        }
        for (ip, &jp) in perm.iter().enumerate() {
            let s = self.src.coeff(ip, i);
            let t = self.tgt.coeff(jp, j);
            if self.ring.is_zero(&s) != self.ring.is_zero(&t) {
                return false;
            }
        }
        if let UnitSource::Candidates(cands) = self.source {
            if !self.ring.is_zero(&src)
                && !cands
                    .iter()
                    .any(|u| self.ring.mul(&self.ring.square(u), &src) == tgt)
            {
                return false;
            }
        }
        true
    }

    fn extend_perm(&mut self, perm: &mut Vec<usize>, used: &mut Vec<bool>) {
        if !self.collect_all && !self.found.is_empty() {
            return;
        }
        let i = perm.len();
        if i == self.n {
            self.solve_units(perm);
            return;
        }
        for j in 0..self.n {
            if used[j] || !self.image_compatible(perm, i, j) {
                continue;
            }
            perm.push(j);
            used[j] = true;
            self.extend_perm(perm, used);
            perm.pop();
            used[j] = false;
            if !self.collect_all && !self.found.is_empty() {
                return;
            }
        }
    }

    fn solve_units(&mut self, perm: &[usize]) {
        match self.source {
            UnitSource::Candidates(cands) => {
                let mut units: Vec<Scalar> = Vec::with_capacity(self.n);
                self.assign_units(perm, cands, &mut units);
            }
            UnitSource::Solve => {
                if let Some(units) = self.solve_value_system(perm) {
                    self.push_if_valid(perm, units);
                }
            }
        }
    }

    fn assign_units(&mut self, perm: &[usize], cands: &[Scalar], units: &mut Vec<Scalar>) {
        if !self.collect_all && !self.found.is_empty() {
            return;
        }
        let i = units.len();
        if i == self.n {
            self.push_if_valid(perm, units.clone());
            return;
        }
        'next: for u in cands {
            let d = self.src.coeff(i, i);
            if self.tgt.coeff(perm[i], perm[i]) != self.ring.mul(&self.ring.square(u), &d) {
                continue;
            }
            for ip in 0..i {
                let s = self.src.coeff(ip, i);
                let t = self.tgt.coeff(perm[ip], perm[i]);
                if t != self.ring.mul(&self.ring.mul(&units[ip], u), &s) {
                    continue 'next;
                }
            }
            units.push(u.clone());
            self.assign_units(perm, cands, units);
            units.pop();
            if !self.collect_all && !self.found.is_empty() {
                return;
            }
        }
    }

    /// Linear system on the value group of max-plus / supertropical:
    /// 2v_i = Δ_ii on anisotropic positions, v_i + v_j = Δ_ij on edges.
    /// Free components take v = 0, i.e. the unit 1.
    fn solve_value_system(&self, perm: &[usize]) -> Option<Vec<Scalar>> {
        let ghost = |s: &Scalar| matches!(s, Scalar::Super(SuperScalar::Ghost(_)));
        let value = |s: &Scalar| -> Option<Rational64> {
            match s {
                Scalar::MaxPlus(v) => *v,
                Scalar::Super(v) => v.value(),
                _ => unreachable!("solver only runs on max-plus or supertropical"),
            }
        };

        let mut diag_delta: Vec<Option<Rational64>> = vec![None; self.n];
        let mut edges: Vec<(usize, usize, Rational64)> = Vec::new();
        for i in 0..self.n {
            for j in i..self.n {
                let s = self.src.coeff(i, j);
                let t = self.tgt.coeff(perm[i], perm[j]);
                if self.ring.is_zero(&s) {
                    if !self.ring.is_zero(&t) {
                        return None;
                    }
                    continue;
                }
                if ghost(&s) != ghost(&t) {
                    return None;
                }
                let delta = value(&t)? - value(&s)?;
                if i == j {
                    diag_delta[i] = Some(delta);
                } else {
                    edges.push((i, j, delta));
                }
            }
        }

        let half = Rational64::new(1, 2);
        let mut v: Vec<Option<Rational64>> = vec![None; self.n];
        for i in 0..self.n {
            if let Some(d) = diag_delta[i] {
                v[i] = Some(d * half);
            }
        }

        let mut adj: Vec<Vec<(usize, Rational64)>> = vec![Vec::new(); self.n];
        for &(i, j, d) in &edges {
            adj[i].push((j, d));
            adj[j].push((i, d));
        }

        // Propagate from pinned vertices.
        let mut queue: Vec<usize> = (0..self.n).filter(|&i| v[i].is_some()).collect();
        while let Some(x) = queue.pop() {
            let vx = v[x].unwrap();
            for &(y, d) in &adj[x] {
                let want = d - vx;
                match v[y] {
                    Some(have) if have != want => return None,
                    Some(_) => {}
                    None => {
                        v[y] = Some(want);
                        queue.push(y);
                    }
                }
            }
        }

        // Parametric components: v = s·t + o along a BFS tree; a same-sign
        // edge pins t, otherwise t stays free and defaults to 0.
        for root in 0..self.n {
            if v[root].is_some() {
                continue;
            }
            let mut sign: Vec<Option<i8>> = vec![None; self.n];
            let mut offset: Vec<Rational64> = vec![Rational64::from_integer(0); self.n];
            let mut comp = vec![root];
            sign[root] = Some(1);
            let mut t_value: Option<Rational64> = None;
            let mut head = 0;
            while head < comp.len() {
                let x = comp[head];
                head += 1;
                let (sx, ox) = (sign[x].unwrap(), offset[x]);
                for &(y, d) in &adj[x] {
                    match sign[y] {
                        None => {
                            sign[y] = Some(-sx);
                            offset[y] = d - ox;
                            comp.push(y);
                        }
                        Some(sy) => {
                            let oy = offset[y];
                            if sy == -sx {
                                if ox + oy != d {
                                    return None;
                                }
                            } else {
                                // s_x t + o_x + s_x t + o_y = d
                                let t = (d - ox - oy) / (Rational64::from_integer(2 * sx as i64));
                                match t_value {
                                    Some(prev) if prev != t => return None,
                                    _ => t_value = Some(t),
                                }
                            }
                        }
                    }
                }
            }
            let t = t_value.unwrap_or_else(|| Rational64::from_integer(0));
            for &x in &comp {
                let s = Rational64::from_integer(sign[x].unwrap() as i64);
                v[x] = Some(s * t + offset[x]);
            }
        }

        let units = v
            .into_iter()
            .map(|val| {
                let val = val.unwrap_or_else(|| Rational64::from_integer(0));
                match self.ring {
                    Semiring::MaxPlus => Scalar::MaxPlus(Some(val)),
                    Semiring::Supertropical => Scalar::Super(SuperScalar::Tangible(val)),
                    _ => unreachable!(),
                }
            })
            .collect();
        Some(units)
    }

    fn push_if_valid(&mut self, perm: &[usize], units: Vec<Scalar>) {
        let witness = IsometryWitness {
            perm: perm.to_vec(),
            units,
        };
        // Soundness gate: the applied witness must reproduce the target.
        if witness.apply(self.src) == *self.tgt
            && witness.units.iter().all(|u| self.ring.is_unit(u))
        {
            self.found.push(witness);
        }
    }
}

fn check_comparable(f1: &Form, f2: &Form) -> Result<()> {
    if f1.kind() != f2.kind() {
        return Err(Error::Precondition(format!(
            "cannot compare a {} form with a {} form",
            f1.kind(),
            f2.kind()
        )));
    }
    if f1.module().ring() != f2.module().ring() {
        return Err(Error::SemiringMismatch {
            left: f1.module().ring().kind_id(),
            right: f2.module().ring().kind_id(),
        });
    }
    Ok(())
}

/// Backtracking search for an isometry from `f1` to `f2`. Returns the
/// lexicographically least witness (permutation first, then units in
/// candidate order), or `None`. Exactness is relative to the supplied unit
/// source; unequal ranks return `None` immediately.
///
/// Schemes are compared in canonical presentation: cross coefficients on
/// quasilinear pairs present the zero contribution, so they are dropped on
/// both sides before coefficients are matched.
pub fn isometry_search(
    f1: &Form,
    f2: &Form,
    units: &UnitSource,
) -> Result<Option<IsometryWitness>> {
    check_comparable(f1, f2)?;
    if f1.rank() != f2.rank() {
        return Ok(None);
    }
    if let UnitSource::Candidates(cands) = units {
        if cands.is_empty() {
            return Err(Error::NoUnits("empty candidate set".into()));
        }
    }
    let mut cands_sorted;
    let source = match units {
        UnitSource::Candidates(c) => {
            cands_sorted = c.clone();
            cands_sorted.sort();
            cands_sorted.dedup();
            UnitSource::Candidates(cands_sorted)
        }
        UnitSource::Solve => UnitSource::Solve,
    };
    let src = f1.normalized();
    let tgt = f2.normalized();
    let found = Search {
        src: &src,
        tgt: &tgt,
        ring: f1.module().ring().clone(),
        n: f1.rank(),
        source: &source,
        collect_all: false,
        found: Vec::new(),
    }
    .run();
    Ok(found.into_iter().next())
}

pub fn isometric(f1: &Form, f2: &Form, units: &UnitSource) -> Result<bool> {
    Ok(isometry_search(f1, f2, units)?.is_some())
}

// ---------------------------------------------------------------------------
// Multiplicities
// ---------------------------------------------------------------------------

/// Isometry classes of the indecomposable components of one form, with
/// multiplicities. Representatives are the first-encountered restriction in
/// block order, pairwise non-isometric.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityMap {
    pub reps: Vec<Form>,
    pub counts: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
    /// Class index of each block, parallel to `blocks`.
    pub block_class: Vec<usize>,
}

impl MultiplicityMap {
    pub fn total_rank(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    /// Count of the class isometric to `rep`, 0 when absent.
    pub fn count_of(&self, rep: &Form, units: &UnitSource) -> Result<usize> {
        for (i, r) in self.reps.iter().enumerate() {
            if isometric(r, rep, units)? {
                return Ok(self.counts[i]);
            }
        }
        Ok(0)
    }
}

/// Decompose `f` and group the component restrictions into isometry
/// classes.
pub fn multiplicities(f: &Form, units: &UnitSource) -> Result<MultiplicityMap> {
    let partition = decompose(f);
    let mut reps: Vec<Form> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    let mut block_class = Vec::new();
    for block in partition.blocks() {
        let restricted = f.restrict(block);
        let mut class = None;
        for (ci, rep) in reps.iter().enumerate() {
            if isometric(rep, &restricted, units)? {
                class = Some(ci);
                break;
            }
        }
        let ci = match class {
            Some(ci) => {
                counts[ci] += 1;
                ci
            }
            None => {
                reps.push(restricted);
                counts.push(1);
                reps.len() - 1
            }
        };
        block_class.push(ci);
    }
    Ok(MultiplicityMap {
        reps,
        counts,
        blocks: partition.blocks().to_vec(),
        block_class,
    })
}

/// Two forms are isometric exactly when their multiplicity maps match
/// classwise.
pub fn isometric_by_multiplicity(f1: &Form, f2: &Form, units: &UnitSource) -> Result<bool> {
    check_comparable(f1, f2)?;
    let m1 = multiplicities(f1, units)?;
    let m2 = multiplicities(f2, units)?;
    if m1.reps.len() != m2.reps.len() {
        return Ok(false);
    }
    let mut used = vec![false; m2.reps.len()];
    for (i, rep) in m1.reps.iter().enumerate() {
        let mut matched = false;
        for (j, other) in m2.reps.iter().enumerate() {
            if used[j] || m1.counts[i] != m2.counts[j] {
                continue;
            }
            if isometric(rep, other, units)? {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Witt cancellation
// ---------------------------------------------------------------------------

/// One class row of the multiplicity ledger m_λ(V) = m_λ(W1) + m_λ(W2).
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerRow {
    pub rep: Form,
    pub m_v: usize,
    pub m_w1: usize,
    pub m_w2: usize,
    pub m_v_prime: usize,
    pub m_w1_prime: usize,
    pub m_w2_prime: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CancelReport {
    /// Whether the complements are isometric. Under the validated
    /// preconditions the cancellation theorem makes this always true, so a
    /// false verdict signals a bug rather than a mathematical possibility.
    pub verdict: bool,
    pub complement: Vec<usize>,
    pub complement_prime: Vec<usize>,
    pub ledger: Vec<LedgerRow>,
}

/// Check that an index set is a union of indecomposable components of `f`
/// (equivalently, a basic orthogonal summand).
pub fn validate_block_union(f: &Form, indices: &BTreeSet<usize>, name: &str) -> Result<()> {
    for &i in indices {
        if i >= f.rank() {
            return Err(Error::Precondition(format!(
                "{name}: index {} out of range",
                i + 1
            )));
        }
    }
    let partition = decompose(f);
    for block in partition.blocks() {
        let inside = block.iter().filter(|i| indices.contains(i)).count();
        if inside != 0 && inside != block.len() {
            return Err(Error::Precondition(format!(
                "{name} is not a union of indecomposable components: it cuts block {{{}}}",
                block
                    .iter()
                    .map(|i| (i + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )));
        }
    }
    Ok(())
}

/// Witt cancellation: validate that `w1`/`w1p` are basic orthogonal
/// summands (unions of indecomposable components) of isometric ambient
/// forms and that `w1 ≅ w1p`; then compare the complements and return the
/// full multiplicity ledger.
pub fn witt_cancel(
    v: &Form,
    v_prime: &Form,
    w1: &BTreeSet<usize>,
    w1_prime: &BTreeSet<usize>,
    units: &UnitSource,
) -> Result<CancelReport> {
    check_comparable(v, v_prime)?;
    validate_block_union(v, w1, "W1")?;
    validate_block_union(v_prime, w1_prime, "W1'")?;

    if !isometric_by_multiplicity(v, v_prime, units)? {
        return Err(Error::Precondition("V and V' are not isometric".into()));
    }
    let w1_sorted: Vec<usize> = w1.iter().copied().collect();
    let w1p_sorted: Vec<usize> = w1_prime.iter().copied().collect();
    let f_w1 = v.restrict(&w1_sorted);
    let f_w1p = v_prime.restrict(&w1p_sorted);
    if !isometric_by_multiplicity(&f_w1, &f_w1p, units)? {
        return Err(Error::Precondition("W1 and W1' are not isometric".into()));
    }

    let complement: Vec<usize> = (0..v.rank()).filter(|i| !w1.contains(i)).collect();
    let complement_prime: Vec<usize> = (0..v_prime.rank())
        .filter(|i| !w1_prime.contains(i))
        .collect();
    let f_w2 = v.restrict(&complement);
    let f_w2p = v_prime.restrict(&complement_prime);

    let verdict = isometric_by_multiplicity(&f_w2, &f_w2p, units)?;

    let maps = [
        multiplicities(v, units)?,
        multiplicities(&f_w1, units)?,
        multiplicities(&f_w2, units)?,
        multiplicities(v_prime, units)?,
        multiplicities(&f_w1p, units)?,
        multiplicities(&f_w2p, units)?,
    ];
    let mut ledger = Vec::new();
    for rep in &maps[0].reps {
        ledger.push(LedgerRow {
            rep: rep.clone(),
            m_v: maps[0].count_of(rep, units)?,
            m_w1: maps[1].count_of(rep, units)?,
            m_w2: maps[2].count_of(rep, units)?,
            m_v_prime: maps[3].count_of(rep, units)?,
            m_w1_prime: maps[4].count_of(rep, units)?,
            m_w2_prime: maps[5].count_of(rep, units)?,
        });
    }
    Ok(CancelReport {
        verdict,
        complement,
        complement_prime,
        ledger,
    })
}

// ---------------------------------------------------------------------------
// Orthogonal group
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalGroup {
    pub witnesses: Vec<IsometryWitness>,
    /// Verification of the product structure: every witness maps each
    /// isotypical component onto itself.
    pub isotypical_preserved: bool,
}

const ORTHOGONAL_GROUP_MAX_RANK: usize = 8;

/// Enumerate all self-isometries. Guarded: rank at most 8 and a finite
/// candidate set (enumeration over an infinite unit group is refused).
pub fn orthogonal_group(f: &Form, units: &UnitSource) -> Result<OrthogonalGroup> {
    if f.rank() > ORTHOGONAL_GROUP_MAX_RANK {
        return Err(Error::Guard(format!(
            "orthogonal group enumeration limited to rank {ORTHOGONAL_GROUP_MAX_RANK}, got {}",
            f.rank()
        )));
    }
    let source = match units {
        UnitSource::Candidates(c) if c.is_empty() => {
            return Err(Error::NoUnits("empty candidate set".into()))
        }
        UnitSource::Candidates(c) => {
            let mut c = c.clone();
            c.sort();
            c.dedup();
            UnitSource::Candidates(c)
        }
        UnitSource::Solve => {
            return Err(Error::Guard(
                "orthogonal group enumeration requires a finite unit candidate set".into(),
            ))
        }
    };
    let canon = f.normalized();
    let witnesses = Search {
        src: &canon,
        tgt: &canon,
        ring: f.module().ring().clone(),
        n: f.rank(),
        source: &source,
        collect_all: true,
        found: Vec::new(),
    }
    .run();

    let map = multiplicities(f, &source)?;
    let mut isotypical: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (block, class) in map.blocks.iter().zip(&map.block_class) {
        isotypical
            .entry(*class)
            .or_default()
            .extend(block.iter().copied());
    }
    let isotypical_preserved = witnesses.iter().all(|w| {
        isotypical.values().all(|set| {
            let image: BTreeSet<usize> = set.iter().map(|&i| w.perm[i]).collect();
            image == *set
        })
    });

    Ok(OrthogonalGroup {
        witnesses,
        isotypical_preserved,
    })
}
