//! Orthogonal decomposition into indecomposable basic components via
//! connectivity of the base graph.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::forms::{Form, GramMatrix, QuadraticScheme, SampleCfg};
use crate::module::Vector;
use crate::semiring::Scalar;

/// Undirected graph on the base indices. Each edge keeps the coefficient
/// that witnesses it (the Gram entry, or the scheme's cross coefficient).
#[derive(Debug, Clone, PartialEq)]
pub struct BaseGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
    witness: BTreeMap<(usize, usize), Scalar>,
}

impl BaseGraph {
    pub fn new(n: usize, edges: BTreeMap<(usize, usize), Scalar>) -> BaseGraph {
        let mut adj = vec![Vec::new(); n];
        for &(i, j) in edges.keys() {
            assert!(i < j && j < n, "edge ({i},{j}) out of range or not i<j");
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        BaseGraph {
            n,
            adj,
            witness: edges,
        }
    }

    /// Unweighted graph, for tests and callers without coefficients.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> BaseGraph {
        let map = edges
            .iter()
            .map(|&(i, j)| ((i.min(j), i.max(j)), Scalar::Bool(true)))
            .collect();
        BaseGraph::new(n, map)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.witness.contains_key(&(i.min(j), i.max(j)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.witness.iter().map(|(&(i, j), w)| (i, j, w))
    }

    pub fn edge_count(&self) -> usize {
        self.witness.len()
    }

    /// A path between two vertices, if one exists (BFS, shortest).
    pub fn path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        if from == to {
            return Some(vec![from]);
        }
        let mut parent: Vec<Option<usize>> = vec![None; self.n];
        let mut queue = VecDeque::from([from]);
        parent[from] = Some(from);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if parent[w].is_none() {
                    parent[w] = Some(v);
                    if w == to {
                        let mut path = vec![to];
                        let mut cur = to;
                        while cur != from {
                            cur = parent[cur].unwrap();
                            path.push(cur);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// A partition of the base indices into the bases of the indecomposable
/// components. Blocks are sorted ascending and ordered by least element, so
/// reports are reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasePartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl BasePartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<BasePartition> {
        let mut seen = vec![false; n];
        let mut canon: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            if block.is_empty() {
                return Err(Error::Precondition("empty partition block".into()));
            }
            block.sort_unstable();
            for &i in &block {
                if i >= n || seen[i] {
                    return Err(Error::Precondition(format!(
                        "index {} repeated or out of range",
                        i + 1
                    )));
                }
                seen[i] = true;
            }
            canon.push(block);
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::Precondition(
                "partition does not cover the base".into(),
            ));
        }
        canon.sort_by_key(|b| b[0]);
        Ok(BasePartition { n, blocks: canon })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&i).is_ok())
            .expect("index inside the partition")
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    /// 1-based rendering, e.g. `{1,2} {3}`.
    pub fn display_one_based(&self) -> String {
        self.blocks
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(|i| (i + 1).to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Base graph of a bilinear form: the edges of its alternate part, i.e.
/// {i, j} with i ≠ j and β_ij ≠ 0.
pub fn base_graph_bilinear(b: &GramMatrix) -> BaseGraph {
    let ring = b.module().ring();
    let n = b.rank();
    let mut edges = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if !ring.is_zero(b.entry(i, j)) {
                edges.insert((i, j), b.entry(i, j).clone());
            }
        }
    }
    BaseGraph::new(n, edges)
}

/// Base graph of a quadratic form: {i, j} is an edge exactly when q is not
/// quasilinear on the pair, by the semiring oracle on (α_i, α_j, α_ij).
pub fn base_graph_quadratic(q: &QuadraticScheme) -> BaseGraph {
    let ring = q.module().ring();
    let n = q.rank();
    let mut edges = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let cross = q.cross(i, j);
            if !ring.pair_quasilinear(q.diag(i), q.diag(j), &cross) {
                edges.insert((i, j), cross);
            }
        }
    }
    BaseGraph::new(n, edges)
}

pub fn base_graph(f: &Form) -> BaseGraph {
    match f {
        Form::Bilinear(b) => base_graph_bilinear(b),
        Form::Quadratic(q) => base_graph_quadratic(q),
    }
}

/// Connected components by breadth-first traversal.
pub fn components(g: &BaseGraph) -> BasePartition {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut block = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            block.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    BasePartition::new(n, blocks).expect("components cover the base")
}

/// The unique orthogonal decomposition into indecomposable basic
/// components: connected components of the base graph.
pub fn decompose(f: &Form) -> BasePartition {
    components(&base_graph(f))
}

/// Outcome of the direct orthogonality check of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoCheck {
    pub holds: bool,
    /// A refuting pair supported on two different blocks, when found.
    pub witness: Option<(Vector, Vector)>,
    pub exhaustive: bool,
}

/// Verify that the blocks of `p` are pairwise disjointly orthogonal for the
/// form.
///
/// Bilinear forms are checked structurally (cross-block Gram entries must
/// vanish; bilinearity then gives b(x, y) = 0 for all cross-block vectors).
/// Quadratic forms are checked by direct evaluation of
/// q(x+y) = q(x) + q(y): exhaustively over small finite carriers, otherwise
/// on all cross-block pairs of grid-scaled sums of at most two base vectors
/// plus `random_pairs` random cross-block pairs.
pub fn verify_orthogonality(f: &Form, p: &BasePartition, cfg: &SampleCfg) -> Result<OrthoCheck> {
    if p.rank() != f.rank() {
        return Err(Error::RankMismatch {
            expected: f.rank(),
            got: p.rank(),
        });
    }
    let module = f.module();
    let ring = module.ring();
    let n = f.rank();

    match f {
        Form::Bilinear(b) => {
            for i in 0..n {
                for j in (i + 1)..n {
                    if p.block_of(i) != p.block_of(j) && !ring.is_zero(b.entry(i, j)) {
                        let x = module.base_vector(i);
                        let y = module.base_vector(j);
                        return Ok(OrthoCheck {
                            holds: false,
                            witness: Some((x, y)),
                            exhaustive: true,
                        });
                    }
                }
            }
            Ok(OrthoCheck {
                holds: true,
                witness: None,
                exhaustive: true,
            })
        }
        Form::Quadratic(q) => {
            let additive = |xs: &[Scalar], ys: &[Scalar]| -> bool {
                let sum: Vec<Scalar> = xs.iter().zip(ys).map(|(a, b)| ring.add(a, b)).collect();
                q.eval_coeffs(&sum) == ring.add(&q.eval_coeffs(xs), &q.eval_coeffs(ys))
            };
            let embed = |support: &[usize], coeffs: &[Scalar]| -> Vec<Scalar> {
                let mut v = vec![ring.zero(); n];
                for (&i, c) in support.iter().zip(coeffs) {
                    v[i] = c.clone();
                }
                v
            };

            // Exhaustive per block pair when the carrier allows it.
            if let Some(carrier) = ring.carrier() {
                let mut feasible = true;
                for a in 0..p.block_count() {
                    for b in (a + 1)..p.block_count() {
                        let (ba, bb) = (&p.blocks()[a], &p.blocks()[b]);
                        if carrier
                            .len()
                            .checked_pow((ba.len() + bb.len()) as u32)
                            .is_none_or(|c| c > 1 << 16)
                        {
                            feasible = false;
                        }
                    }
                }
                if feasible {
                    for a in 0..p.block_count() {
                        for bi in (a + 1)..p.block_count() {
                            let (ba, bb) = (&p.blocks()[a], &p.blocks()[bi]);
                            let xs_all = enumerate(&carrier, ba.len());
                            let ys_all = enumerate(&carrier, bb.len());
                            for xs in &xs_all {
                                for ys in &ys_all {
                                    let x = embed(ba, xs);
                                    let y = embed(bb, ys);
                                    if !additive(&x, &y) {
                                        return Ok(OrthoCheck {
                                            holds: false,
                                            witness: Some((
                                                Vector::new(module, x)?,
                                                Vector::new(module, y)?,
                                            )),
                                            exhaustive: true,
                                        });
                                    }
                                }
                            }
                        }
                    }
                    return Ok(OrthoCheck {
                        holds: true,
                        witness: None,
                        exhaustive: true,
                    });
                }
            }

            // Sampled: sums of ≤ 2 base vectors per block, scaled over the grid.
            let block_probes: Vec<Vec<Vec<Scalar>>> = p
                .blocks()
                .iter()
                .map(|block| {
                    let mut probes = Vec::new();
                    for (ai, &i) in block.iter().enumerate() {
                        for s in &cfg.grid {
                            if ring.is_zero(s) {
                                continue;
                            }
                            probes.push(embed(&[i], std::slice::from_ref(s)));
                            for &j in block.iter().skip(ai + 1) {
                                for t in &cfg.grid {
                                    if ring.is_zero(t) {
                                        continue;
                                    }
                                    probes.push(embed(&[i, j], &[s.clone(), t.clone()]));
                                }
                            }
                        }
                    }
                    probes
                })
                .collect();

            for a in 0..p.block_count() {
                for b in (a + 1)..p.block_count() {
                    for xs in &block_probes[a] {
                        for ys in &block_probes[b] {
                            if !additive(xs, ys) {
                                return Ok(OrthoCheck {
                                    holds: false,
                                    witness: Some((
                                        Vector::new(module, xs.clone())?,
                                        Vector::new(module, ys.clone())?,
                                    )),
                                    exhaustive: false,
                                });
                            }
                        }
                    }
                }
            }

            if p.block_count() >= 2 {
                let mut rng = cfg.rng();
                for _ in 0..cfg.random_pairs {
                    let a = rng.gen_range(0..p.block_count());
                    let mut b = rng.gen_range(0..p.block_count() - 1);
                    if b >= a {
                        b += 1;
                    }
                    let xs = embed(
                        &p.blocks()[a],
                        &cfg.random_coeffs(p.blocks()[a].len(), &mut rng),
                    );
                    let ys = embed(
                        &p.blocks()[b],
                        &cfg.random_coeffs(p.blocks()[b].len(), &mut rng),
                    );
                    if !additive(&xs, &ys) {
                        return Ok(OrthoCheck {
                            holds: false,
                            witness: Some((Vector::new(module, xs)?, Vector::new(module, ys)?)),
                            exhaustive: false,
                        });
                    }
                }
            }

            Ok(OrthoCheck {
                holds: true,
                witness: None,
                exhaustive: false,
            })
        }
    }
}

use rand::Rng;

fn enumerate(pool: &[Scalar], len: usize) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = vec![Vec::new()];
    for _ in 0..len {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::FreeModule;
    use crate::semiring::Semiring;
    use std::collections::BTreeMap as Map;

    fn nats(vs: &[u64]) -> Vec<Scalar> {
        vs.iter().map(|&v| Scalar::Nat(v)).collect()
    }

    #[test]
    fn bilinear_graph_examples() {
        let m = FreeModule::new(Semiring::Nat, 2);
        let diag = GramMatrix::diagonal(&m, nats(&[1, 2])).unwrap();
        assert_eq!(base_graph_bilinear(&diag).edge_count(), 0);

        let m3 = FreeModule::new(Semiring::Nat, 3);
        let path = GramMatrix::new(
            &m3,
            vec![nats(&[0, 1, 0]), nats(&[1, 0, 1]), nats(&[0, 1, 0])],
        )
        .unwrap();
        let g = base_graph_bilinear(&path);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));

        // the diagonal is ignored (alternate part)
        let loops = GramMatrix::new(&m, vec![nats(&[5, 7]), nats(&[7, 0])]).unwrap();
        assert!(base_graph_bilinear(&loops).has_edge(0, 1));
    }

    #[test]
    fn quadratic_graph_examples() {
        let m = FreeModule::new(Semiring::Nat, 3);
        let q = QuadraticScheme::new(&m, nats(&[1, 0, 2]), Map::from([((0, 1), Scalar::Nat(3))]))
            .unwrap();
        let g = base_graph_quadratic(&q);
        assert!(g.has_edge(0, 1));
        assert_eq!(g.edge_count(), 1);

        let t = FreeModule::new(Semiring::MaxPlus, 2);
        let q2 = QuadraticScheme::new(
            &t,
            vec![Scalar::mp(0), Scalar::mp(0)],
            Map::from([((0, 1), Scalar::mp(-5))]),
        )
        .unwrap();
        assert_eq!(base_graph_quadratic(&q2).edge_count(), 0);
    }

    #[test]
    fn decompose_examples() {
        let m = FreeModule::new(Semiring::Nat, 2);
        let b = GramMatrix::new(&m, vec![nats(&[0, 1]), nats(&[1, 0])]).unwrap();
        let p = decompose(&Form::Bilinear(b));
        assert_eq!(p.blocks(), &[vec![0, 1]]);

        let m3 = FreeModule::new(Semiring::Nat, 3);
        let q = QuadraticScheme::new(&m3, nats(&[1, 0, 2]), Map::from([((0, 1), Scalar::Nat(3))]))
            .unwrap();
        let p = decompose(&Form::Quadratic(q));
        assert_eq!(p.blocks(), &[vec![0, 1], vec![2]]);
        assert_eq!(p.display_one_based(), "{1,2} {3}");

        let zero = QuadraticScheme::diagonal(&m3, nats(&[0, 0, 0])).unwrap();
        let p = decompose(&Form::Quadratic(zero));
        assert_eq!(p.block_count(), 3);
    }

    #[test]
    fn orthogonality_examples() {
        let m = FreeModule::new(Semiring::Nat, 2);
        let cfg = SampleCfg::default_for(&Semiring::Nat);

        let b = GramMatrix::diagonal(&m, nats(&[1, 2])).unwrap();
        let p = BasePartition::new(2, vec![vec![0], vec![1]]).unwrap();
        assert!(
            verify_orthogonality(&Form::Bilinear(b), &p, &cfg)
                .unwrap()
                .holds
        );

        // forcing the blocks apart on a coupled q is refuted at (ε₁, ε₂)
        let q =
            QuadraticScheme::new(&m, nats(&[1, 1]), Map::from([((0, 1), Scalar::Nat(1))])).unwrap();
        let check = verify_orthogonality(&Form::Quadratic(q), &p, &cfg).unwrap();
        assert!(!check.holds);
        let (x, y) = check.witness.unwrap();
        assert!(!x.support().is_empty() && !y.support().is_empty());
    }

    #[test]
    fn decompose_output_is_orthogonal_exhaustively_over_bool() {
        // every quadratic scheme over B of rank ≤ 4
        let ring = Semiring::Bool;
        let cfg = SampleCfg::default_for(&ring);
        for rank in 1..=4usize {
            let m = FreeModule::new(ring.clone(), rank);
            let pairs: Vec<(usize, usize)> = (0..rank)
                .flat_map(|i| ((i + 1)..rank).map(move |j| (i, j)))
                .collect();
            for diag_bits in 0..(1u32 << rank) {
                for off_bits in 0..(1u32 << pairs.len()) {
                    let diag: Vec<Scalar> = (0..rank)
                        .map(|i| Scalar::Bool(diag_bits >> i & 1 == 1))
                        .collect();
                    let mut off = Map::new();
                    for (k, &(i, j)) in pairs.iter().enumerate() {
                        if off_bits >> k & 1 == 1 {
                            off.insert((i, j), Scalar::Bool(true));
                        }
                    }
                    let q = QuadraticScheme::new(&m, diag, off).unwrap();
                    let f = Form::Quadratic(q);
                    let p = decompose(&f);
                    let check = verify_orthogonality(&f, &p, &cfg).unwrap();
                    assert!(check.holds && check.exhaustive);
                }
            }
        }
    }

    #[test]
    fn path_witnesses() {
        let g = BaseGraph::from_edge_list(4, &[(0, 1), (1, 2)]);
        assert_eq!(g.path(0, 2), Some(vec![0, 1, 2]));
        assert_eq!(g.path(0, 3), None);
    }

    #[test]
    fn partition_validation() {
        assert!(BasePartition::new(3, vec![vec![0, 1]]).is_err());
        assert!(BasePartition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(BasePartition::new(3, vec![vec![2], vec![0, 1]]).is_ok());
    }
}
