//! Cells: the preorders generated by Kazhdan-Lusztig products, their
//! equivalence classes, and cell modules.
//!
//! The left preorder digraph has an edge w -> z whenever C_z appears in
//! C_s C_w for some generator s; strongly connected components of that
//! digraph are the left cells and the condensation is the partial order on
//! them. Right cells come from transporting through inversion, two-sided
//! cells from the union of both edge sets.

use rayon::prelude::*;

use crate::coxeter::{CoxeterGroup, Elt};
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, KLCache};
use crate::laurent::{Coeff, LaurentElement};
use crate::util::BitMatrix;

/// Practical bound on |W| for computations needing the full KL basis.
pub const DEFAULT_KL_LIMIT: usize = 1200;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::TwoSided => "twosided",
        }
    }
}

/// A partition of the element set in canonical form: classes ordered by
/// minimal member, members ascending.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    classes: Vec<Vec<Elt>>,
    class_of: Vec<u32>,
}

impl Partition {
    pub fn from_class_of(class_of_raw: &[u32]) -> Partition {
        let n = class_of_raw.len();
        let mut first_seen: Vec<(u32, u32)> = Vec::new(); // (raw id, min element)
        let mut renumber = vec![u32::MAX; n];
        for (i, &raw) in class_of_raw.iter().enumerate() {
            if renumber[raw as usize] == u32::MAX {
                renumber[raw as usize] = first_seen.len() as u32;
                first_seen.push((raw, i as u32));
            }
        }
        let mut classes = vec![Vec::new(); first_seen.len()];
        let mut class_of = vec![0u32; n];
        for (i, &raw) in class_of_raw.iter().enumerate() {
            let c = renumber[raw as usize];
            class_of[i] = c;
            classes[c as usize].push(Elt(i as u32));
        }
        Partition { classes, class_of }
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<Elt>] {
        &self.classes
    }

    pub fn class_of(&self, w: Elt) -> usize {
        self.class_of[w.idx()] as usize
    }

    pub fn class_members(&self, c: usize) -> &[Elt] {
        &self.classes[c]
    }

    /// True if every class of `self` is contained in a class of `other`.
    pub fn refines(&self, other: &Partition) -> Result<bool> {
        if self.len() != other.len() {
            return Err(Error::GroundSetMismatch);
        }
        Ok(self.classes.iter().all(|class| {
            let target = other.class_of(class[0]);
            class.iter().all(|&w| other.class_of(w) == target)
        }))
    }

    /// The image partition under a bijection of the ground set.
    pub fn map_through(&self, table: &[u32]) -> Partition {
        let mut class_of = vec![0u32; self.len()];
        for (i, &img) in table.iter().enumerate() {
            class_of[img as usize] = self.class_of[i];
        }
        Partition::from_class_of(&class_of)
    }
}

/// Cells of one side together with the induced order on classes.
pub struct CellPartition {
    pub side: Side,
    pub partition: Partition,
    /// reach.get(a, b) is true iff class b is reachable from class a along
    /// descending edges, i.e. b <= a in the preorder (reflexive).
    reach: BitMatrix,
}

impl CellPartition {
    pub fn num_classes(&self) -> usize {
        self.partition.num_classes()
    }

    /// lower <= upper for classes.
    pub fn class_leq(&self, lower: usize, upper: usize) -> bool {
        self.reach.get(upper, lower)
    }

    /// x <=_side w for elements.
    pub fn elt_leq(&self, x: Elt, w: Elt) -> bool {
        self.class_leq(self.partition.class_of(x), self.partition.class_of(w))
    }

    /// Direct (non-reflexive, transitively reduced not required) edges of
    /// the condensation, deduplicated and sorted: pairs (upper, lower).
    pub fn class_edges(&self) -> Vec<(usize, usize)> {
        let k = self.num_classes();
        let mut edges = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if a != b && self.class_leq(b, a) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }
}

/// Iterative Tarjan over a forward adjacency list; no recursion, safe at
/// degree 14400. Returns raw component ids.
fn tarjan_scc(adj: &[Vec<u32>]) -> Vec<u32> {
    let n = adj.len();
    let mut index = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut comp = vec![u32::MAX; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut n_comp = 0u32;
    // frames: (vertex, next edge position)
    let mut frames: Vec<(u32, usize)> = Vec::new();
    for root in 0..n as u32 {
        if index[root as usize] != u32::MAX {
            continue;
        }
        frames.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            let vi = v as usize;
            if *pos == 0 {
                index[vi] = next_index;
                low[vi] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[vi] = true;
            }
            let mut descended = false;
            while *pos < adj[vi].len() {
                let w = adj[vi][*pos] as usize;
                *pos += 1;
                if index[w] == u32::MAX {
                    frames.push((w as u32, 0));
                    descended = true;
                    break;
                } else if on_stack[w] {
                    low[vi] = low[vi].min(index[w]);
                }
            }
            if descended {
                continue;
            }
            // finished v
            if low[vi] == index[vi] {
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w as usize] = false;
                    comp[w as usize] = n_comp;
                    if w == v {
                        break;
                    }
                }
                n_comp += 1;
            }
            frames.pop();
            if let Some(&mut (p, _)) = frames.last_mut() {
                let pi = p as usize;
                low[pi] = low[pi].min(low[vi]);
            }
        }
    }
    comp
}

/// Edges w -> z whenever z appears in the C-expansion of C_s C_w for some
/// generator s. Requires the full KL basis.
pub fn left_preorder_digraph<C: Coeff>(
    alg: &HeckeAlgebra<'_, C>,
    cache: &KLCache<C>,
) -> Vec<Vec<u32>> {
    let group = alg.group();
    // materialize every C_w first so the parallel phase only reads
    alg.kl_all(cache);
    let n = group.size();
    (0..n as u32)
        .into_par_iter()
        .map(|w| {
            let mut targets: Vec<u32> = Vec::new();
            for s in 0..group.rank() as u8 {
                for (z, _) in alg.structure_constants(group.generator(s), Elt(w), cache) {
                    targets.push(z.0);
                }
            }
            targets.sort_unstable();
            targets.dedup();
            targets
        })
        .collect()
}

fn closure_from_adj(partition: &Partition, adj: &[Vec<u32>]) -> BitMatrix {
    let k = partition.num_classes();
    // condensation edges
    let mut cedges: Vec<Vec<u32>> = vec![Vec::new(); k];
    for (w, targets) in adj.iter().enumerate() {
        let cw = partition.class_of(Elt(w as u32));
        for &z in targets {
            let cz = partition.class_of(Elt(z));
            if cz != cw {
                cedges[cw].push(cz as u32);
            }
        }
    }
    for row in &mut cedges {
        row.sort_unstable();
        row.dedup();
    }
    // reach via reverse topological order (Kahn on the DAG)
    let mut indeg = vec![0usize; k];
    for row in &cedges {
        for &z in row {
            indeg[z as usize] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..k).filter(|&c| indeg[c] == 0).collect();
    let mut topo = Vec::with_capacity(k);
    let mut head = 0;
    while head < queue.len() {
        let c = queue[head];
        head += 1;
        topo.push(c);
        for &z in &cedges[c] {
            indeg[z as usize] -= 1;
            if indeg[z as usize] == 0 {
                queue.push(z as usize);
            }
        }
    }
    debug_assert_eq!(topo.len(), k, "condensation must be acyclic");
    let mut reach = BitMatrix::new(k, k);
    for &c in topo.iter().rev() {
        reach.set(c, c);
        let succ = cedges[c].clone();
        for z in succ {
            reach.or_row_into(c, z as usize);
        }
    }
    reach
}

fn partition_from_digraph(side: Side, adj: &[Vec<u32>]) -> CellPartition {
    let comp = tarjan_scc(adj);
    let partition = Partition::from_class_of(&comp);
    let reach = closure_from_adj(&partition, adj);
    CellPartition { side, partition, reach }
}

/// Cells of the requested side. Guarded by `limit` because the full KL basis
/// is required.
pub fn cells<C: Coeff>(
    alg: &HeckeAlgebra<'_, C>,
    cache: &KLCache<C>,
    side: Side,
    limit: usize,
) -> Result<CellPartition> {
    let group = alg.group();
    if group.size() > limit {
        return Err(Error::ResourceLimit { order: group.size(), limit });
    }
    let left_adj = left_preorder_digraph(alg, cache);
    let adj = match side {
        Side::Left => left_adj,
        Side::Right => invert_adj(group, &left_adj),
        Side::TwoSided => {
            let right = invert_adj(group, &left_adj);
            left_adj
                .into_iter()
                .zip(right)
                .map(|(mut a, b)| {
                    a.extend(b);
                    a.sort_unstable();
                    a.dedup();
                    a
                })
                .collect()
        }
    };
    Ok(partition_from_digraph(side, &adj))
}

/// Transport of the left digraph through w -> w^-1.
fn invert_adj(group: &CoxeterGroup, left_adj: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new(); left_adj.len()];
    for w in group.elements() {
        let wi = group.inverse(w);
        let mut row: Vec<u32> =
            left_adj[wi.idx()].iter().map(|&z| group.inverse(Elt(z)).0).collect();
        row.sort_unstable();
        row.dedup();
        out[w.idx()] = row;
    }
    out
}

/// A left cell module: the action of each C_s on the basis (c_w), w in the
/// cell, with coefficients strictly below the cell discarded.
pub struct CellModule<C: Coeff> {
    pub members: Vec<Elt>,
    /// action[s][i][j] = coefficient of c_members[i] in C_s c_members[j].
    pub action: Vec<Vec<Vec<LaurentElement<C>>>>,
}

pub fn cell_module<C: Coeff>(
    alg: &HeckeAlgebra<'_, C>,
    cache: &KLCache<C>,
    cells: &CellPartition,
    class: usize,
) -> CellModule<C> {
    assert_eq!(cells.side, Side::Left, "cell modules are built from left cells");
    let group = alg.group();
    let rank = alg.gamma_rank();
    let members = cells.partition.class_members(class).to_vec();
    let pos = |w: Elt| members.binary_search(&w).ok();
    let mut action = Vec::new();
    for s in 0..group.rank() as u8 {
        let mut mat = vec![vec![LaurentElement::zero(rank); members.len()]; members.len()];
        for (j, &w) in members.iter().enumerate() {
            for (z, c) in alg.structure_constants(group.generator(s), w, cache) {
                if let Some(i) = pos(z) {
                    mat[i][j] = c;
                } else {
                    debug_assert!(
                        cells.elt_leq(z, w) && cells.partition.class_of(z) != class,
                        "expansion must stay weakly below the cell"
                    );
                }
            }
        }
        action.push(mat);
    }
    CellModule { members, action }
}

impl<C: Coeff> CellModule<C> {
    /// Matrix product action[s] * action[s] for relation checks.
    pub fn act_twice(&self, s: usize) -> Vec<Vec<LaurentElement<C>>> {
        let n = self.members.len();
        let rank = if n > 0 { self.action[s][0][0].rank() } else { 1 };
        let mut out = vec![vec![LaurentElement::zero(rank); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentElement::zero(rank);
                for k in 0..n {
                    if !self.action[s][i][k].is_zero() && !self.action[s][k][j].is_zero() {
                        acc = acc.add(&self.action[s][i][k].mul(&self.action[s][k][j]));
                    }
                }
                out[i][j] = acc;
            }
        }
        out
    }
}
