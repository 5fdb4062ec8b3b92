//! Cycle-parity predictions for the indecomposable components of tensor
//! products, plus the brute-force oracle cross-check.
//!
//! For indecomposable alternate bilinear factors the tensor product is
//! indecomposable exactly when some factor's base graph has an odd cycle;
//! otherwise it splits into two components grouped by color parity. A
//! non-alternate factor always yields one component. The quadratic-side
//! predictor needs the NQL property and has a single exceptional branch
//! (alternate γ, diagonally zero q, all cycles even) with two components.

use std::collections::VecDeque;

use crate::decompose::{base_graph_bilinear, decompose, BaseGraph, BasePartition};
use crate::error::{Error, Result};
use crate::forms::{norm_form, quasiminimal_reduce, Form, GramMatrix, QuadraticScheme};
use crate::tensor::{flat_index, tensor_bilinear, tensor_quadratic};

/// Parity data of one connected component: a proper 2-coloring when
/// bipartite, otherwise an odd-cycle witness (a closed path of odd length).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityComponent {
    pub vertices: Vec<usize>,
    /// `None` when the component is bipartite.
    pub odd_cycle: Option<Vec<usize>>,
}

impl ParityComponent {
    pub fn bipartite(&self) -> bool {
        self.odd_cycle.is_none()
    }
}

/// Breadth-first 2-coloring of every component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityReport {
    /// BFS-layer color of each vertex; meaningful within bipartite
    /// components.
    pub color: Vec<u8>,
    pub components: Vec<ParityComponent>,
}

impl ParityReport {
    pub fn all_bipartite(&self) -> bool {
        self.components.iter().all(|c| c.bipartite())
    }

    /// The two color classes of a fully bipartite graph.
    pub fn color_classes(&self) -> (Vec<usize>, Vec<usize>) {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for (i, c) in self.color.iter().enumerate() {
            if *c == 0 {
                even.push(i);
            } else {
                odd.push(i);
            }
        }
        (even, odd)
    }
}

/// Standard 2-coloring by BFS layering; an odd cycle is reconstructed from
/// the first same-color edge through the tree paths to the common ancestor.
pub fn parity_report(g: &BaseGraph) -> ParityReport {
    let n = g.vertex_count();
    let mut color = vec![0u8; n];
    let mut seen = vec![false; n];
    let mut parent: Vec<usize> = (0..n).collect();
    let mut depth = vec![0usize; n];
    let mut comps = Vec::new();

    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut vertices = Vec::new();
        let mut odd_cycle: Option<Vec<usize>> = None;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            vertices.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    color[w] = 1 - color[v];
                    parent[w] = v;
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                } else if color[w] == color[v] && odd_cycle.is_none() {
                    odd_cycle = Some(close_cycle(v, w, &parent, &depth));
                }
            }
        }
        vertices.sort_unstable();
        comps.push(ParityComponent {
            vertices,
            odd_cycle,
        });
    }
    ParityReport {
        color,
        components: comps,
    }
}

/// Tree paths u→lca and lca→v plus the closing edge (v, u); same-colored
/// endpoints give odd total length.
fn close_cycle(u: usize, v: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let mut up = vec![u];
    let mut down = vec![v];
    let (mut a, mut b) = (u, v);
    while depth[a] > depth[b] {
        a = parent[a];
        up.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        down.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        up.push(a);
        down.push(b);
    }
    // up ends at the lca, down too; join them into a closed walk
    down.pop();
    down.reverse();
    let mut cycle = up;
    cycle.extend(down);
    cycle.push(u);
    cycle
}

/// Predicted component structure of a tensor product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorPrediction {
    pub component_count: usize,
    /// Predicted partition of the product base (one block when the product
    /// is predicted indecomposable).
    pub partition: BasePartition,
}

fn require_entire_antiring(f: &Form) -> Result<()> {
    let ring = f.module().ring();
    if !(ring.is_antiring() && ring.is_entire()) {
        return Err(Error::Precondition(format!(
            "predictions require an entire antiring, got {}",
            ring.kind_id()
        )));
    }
    Ok(())
}

fn require_indecomposable(f: &Form, name: &str) -> Result<()> {
    let p = decompose(f);
    if p.block_count() != 1 {
        return Err(Error::Precondition(format!(
            "{name} must be indecomposable; found components {}",
            p.display_one_based()
        )));
    }
    Ok(())
}

fn forbid_rank1_zero(g: &GramMatrix, name: &str) -> Result<()> {
    if g.rank() == 1 && g.module().ring().is_zero(g.entry(0, 0)) {
        return Err(Error::Precondition(format!(
            "{name} is the rank-1 zero form; the tensor degenerates"
        )));
    }
    Ok(())
}

/// Predict the indecomposable components of (V₁⊗V₂, b₁⊗b₂) for
/// indecomposable bilinear factors over an entire antiring.
pub fn predict_bilinear_tensor(b1: &GramMatrix, b2: &GramMatrix) -> Result<TensorPrediction> {
    let f1 = Form::Bilinear(b1.clone());
    let f2 = Form::Bilinear(b2.clone());
    require_entire_antiring(&f1)?;
    if b1.module().ring() != b2.module().ring() {
        return Err(Error::SemiringMismatch {
            left: b1.module().ring().kind_id(),
            right: b2.module().ring().kind_id(),
        });
    }
    forbid_rank1_zero(b1, "left factor")?;
    forbid_rank1_zero(b2, "right factor")?;
    require_indecomposable(&f1, "left factor")?;
    require_indecomposable(&f2, "right factor")?;

    let (m, n) = (b1.rank(), b2.rank());
    let total = m * n;
    let whole = || BasePartition::new(total, vec![(0..total).collect()]);

    if !b1.is_alternate() || !b2.is_alternate() {
        return Ok(TensorPrediction {
            component_count: 1,
            partition: whole()?,
        });
    }
    let p1 = parity_report(&base_graph_bilinear(b1));
    let p2 = parity_report(&base_graph_bilinear(b2));
    if !p1.all_bipartite() || !p2.all_bipartite() {
        return Ok(TensorPrediction {
            component_count: 1,
            partition: whole()?,
        });
    }

    // Two components grouped by color parity: (i,k) ~ (j,l) iff the path
    // parities agree, i.e. color(i) XOR color(k) matches.
    let mut same = Vec::new();
    let mut diff = Vec::new();
    for i in 0..m {
        for k in 0..n {
            if p1.color[i] == p2.color[k] {
                same.push(flat_index(i, k, n));
            } else {
                diff.push(flat_index(i, k, n));
            }
        }
    }
    Ok(TensorPrediction {
        component_count: 2,
        partition: BasePartition::new(total, vec![same, diff])?,
    })
}

/// Predict the indecomposable components of (U⊗V, γ⊗_b q) over an entire
/// antiring with NQL, for (U, n(γ)) and (V, q) indecomposable. One
/// component except in the even-cycles branch (alternate γ, diagonally zero
/// q), where the two components are those of the Gram matrix γ⊗b_f.
pub fn predict_quadratic_tensor(
    gamma: &GramMatrix,
    q: &QuadraticScheme,
    b: &GramMatrix,
) -> Result<TensorPrediction> {
    require_entire_antiring(&Form::Bilinear(gamma.clone()))?;
    let ring = gamma.module().ring();
    if ring != q.module().ring() {
        return Err(Error::SemiringMismatch {
            left: ring.kind_id(),
            right: q.module().ring().kind_id(),
        });
    }
    if !ring.has_nql() {
        return Err(Error::Precondition(format!(
            "the quadratic tensor prediction requires NQL, which {} lacks",
            ring.kind_id()
        )));
    }
    forbid_rank1_zero(gamma, "gamma")?;
    if q.rank() == 1 && ring.is_zero(q.diag(0)) {
        return Err(Error::Precondition(
            "q is the rank-1 zero form; the tensor degenerates".into(),
        ));
    }
    require_indecomposable(&Form::Quadratic(norm_form(gamma)), "(U, n(gamma))")?;
    require_indecomposable(&Form::Quadratic(q.clone()), "(V, q)")?;

    // Validates that b is a balanced companion as a side effect.
    let product = tensor_quadratic(gamma, q, b)?;
    let total = product.rank();

    let exceptional = gamma.is_alternate() && q.is_diagonally_zero() && {
        let pg = parity_report(&base_graph_bilinear(gamma));
        let pb = parity_report(&base_graph_bilinear(b));
        pg.all_bipartite() && pb.all_bipartite()
    };

    if exceptional {
        let b_f = quasiminimal_reduce(q, b);
        let gram = tensor_bilinear(gamma, &b_f)?;
        let partition = decompose(&Form::Bilinear(gram));
        debug_assert_eq!(partition.block_count(), 2);
        Ok(TensorPrediction {
            component_count: partition.block_count(),
            partition,
        })
    } else {
        Ok(TensorPrediction {
            component_count: 1,
            partition: BasePartition::new(total, vec![(0..total).collect()])?,
        })
    }
}

/// Decompose (U, n(γ)) and predict each block's tensor with (V, q);
/// the block index sets refer to γ's base.
pub fn full_tensor_analysis(
    gamma: &GramMatrix,
    q: &QuadraticScheme,
    b: &GramMatrix,
) -> Result<Vec<(Vec<usize>, TensorPrediction)>> {
    let norm_partition = decompose(&Form::Quadratic(norm_form(gamma)));
    let mut out = Vec::new();
    for block in norm_partition.blocks() {
        let restricted = gamma.restrict(block);
        let prediction = predict_quadratic_tensor(&restricted, q, b)?;
        out.push((block.clone(), prediction));
    }
    Ok(out)
}

/// Comparison of a prediction against the decomposition oracle run on the
/// actually computed tensor form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crosscheck {
    pub matched: bool,
    pub predicted: BasePartition,
    pub actual: BasePartition,
}

/// Run `decompose` on the computed tensor and compare block structure.
pub fn oracle_crosscheck(prediction: &TensorPrediction, actual_form: &Form) -> Crosscheck {
    let actual = decompose(actual_form);
    Crosscheck {
        matched: actual == prediction.partition,
        predicted: prediction.partition.clone(),
        actual,
    }
}
