//! Generalized star operations and parabolic induction.
//!
//! For a pair (s,t) with m(s,t) odd >= 3, or even >= 4 with phi(s) < phi(t),
//! the dihedral parabolic W_{s,t} carries two distinguished left cells
//! Gamma_s and Gamma_t (computable from descent scans alone, no KL data) and
//! a bijection between them. Through the coset decomposition W = X_I W_I the
//! bijection extends to an involution sigma of all of W, the generalized
//! star operation. The induction machinery (bases G_w = T_x C_w' over sets
//! X_I E, transition matrices against the C-basis, quotient modules with a
//! transported bar involution) is what the verification of the transport
//! property sigma_*(cbar_w) = cbar_{sigma(w)} runs on.

use std::collections::HashMap;

use crate::canonical::{BarModuleDatum, ModuleElement};
use crate::cells::{self, CellPartition, Side};
use crate::coxeter::{CoxeterGroup, CoxeterMatrix, Elt, ParabolicData};
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElement, KLCache, WeightFunction};
use crate::laurent::{Coeff, LaurentElement};
use crate::util::BitMatrix;
use crate::verify::{Check, Report};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StarCase {
    Odd,
    Even,
}

/// One pair (s,t) with its dihedral data, all computed by word enumeration.
#[derive(Clone, Debug)]
pub struct StarPair {
    pub s: u8,
    pub t: u8,
    pub case: StarCase,
    pub m: u32,
    /// Longest element of W_{s,t}.
    pub w_st: Elt,
    /// Elements of W_{s,t} with right descent exactly {s} (resp. {t}).
    pub r_s: Vec<Elt>,
    pub r_t: Vec<Elt>,
    /// The distinguished left cells of W_{s,t}.
    pub gamma_s: Vec<Elt>,
    pub gamma_t: Vec<Elt>,
}

/// The alternating word of given length ending with generator `last`.
fn alternating_word_ending(s: u8, t: u8, last: u8, len: usize) -> Vec<u8> {
    let other = if last == s { t } else { s };
    let mut word = vec![0u8; len];
    for (i, slot) in word.iter_mut().rev().enumerate() {
        *slot = if i % 2 == 0 { last } else { other };
    }
    word
}

/// Builds the star pair data for (s,t) if the pair qualifies: m odd >= 3, or
/// m even >= 4 with phi(s) < phi(t).
pub fn star_pair_data(
    group: &CoxeterGroup,
    weights: &WeightFunction,
    s: u8,
    t: u8,
) -> Option<StarPair> {
    let m = group.matrix().m(s, t);
    let case = if m >= 3 && m % 2 == 1 {
        StarCase::Odd
    } else if m >= 4 && m % 2 == 0 && weights.less(s, t) {
        StarCase::Even
    } else {
        return None;
    };
    let m_us = m as usize;
    let w_st = group.from_word(&alternating_word_ending(s, t, if m_us % 2 == 0 { t } else { s }, m_us));
    let r_s: Vec<Elt> = (1..m_us)
        .map(|len| group.from_word(&alternating_word_ending(s, t, s, len)))
        .collect();
    let r_t: Vec<Elt> = (1..m_us)
        .map(|len| group.from_word(&alternating_word_ending(s, t, t, len)))
        .collect();
    let (mut gamma_s, mut gamma_t) = match case {
        StarCase::Odd => (r_s.clone(), r_t.clone()),
        StarCase::Even => {
            let s_elt = group.generator(s);
            let excluded = group.mult_gen_right(w_st, s);
            (
                r_s.iter().copied().filter(|&w| w != s_elt).collect(),
                r_t.iter().copied().filter(|&w| w != excluded).collect(),
            )
        }
    };
    gamma_s.sort_unstable();
    gamma_t.sort_unstable();
    debug_assert_eq!(gamma_s.len(), gamma_t.len());
    let mut r_s = r_s;
    let mut r_t = r_t;
    r_s.sort_unstable();
    r_t.sort_unstable();
    Some(StarPair { s, t, case, m, w_st, r_s, r_t, gamma_s, gamma_t })
}

/// All ordered pairs in E_phi.
pub fn enumerate_star_pairs(group: &CoxeterGroup, weights: &WeightFunction) -> Vec<StarPair> {
    let n = group.rank() as u8;
    let mut out = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if s != t {
                if let Some(p) = star_pair_data(group, weights, s, t) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// The bijection Gamma_s -> Gamma_t: w -> w_st w in the odd case, w -> ws in
/// the even case.
pub fn star_map(group: &CoxeterGroup, pair: &StarPair, w: Elt) -> Result<Elt> {
    if pair.gamma_s.binary_search(&w).is_err() {
        return Err(Error::StarDomain(w.0));
    }
    let image = match pair.case {
        StarCase::Odd => group.mult(pair.w_st, w),
        StarCase::Even => group.mult_gen_right(w, pair.s),
    };
    debug_assert!(pair.gamma_t.binary_search(&image).is_ok());
    Ok(image)
}

/// Inverse bijection Gamma_t -> Gamma_s.
pub fn star_map_inv(group: &CoxeterGroup, pair: &StarPair, w: Elt) -> Result<Elt> {
    if pair.gamma_t.binary_search(&w).is_err() {
        return Err(Error::StarDomain(w.0));
    }
    let image = match pair.case {
        // w_st is an involution, so the inverse is again left translation
        StarCase::Odd => group.mult(pair.w_st, w),
        StarCase::Even => group.mult_gen_right(w, pair.s),
    };
    debug_assert!(pair.gamma_s.binary_search(&image).is_ok());
    Ok(image)
}

/// The star operation extended to an involution of W through the coset
/// decomposition, materialized as a permutation table.
#[derive(Clone, PartialEq, Eq)]
pub struct StarPermutation {
    pub s: u8,
    pub t: u8,
    pub case: StarCase,
    pub table: Vec<u32>,
}

impl StarPermutation {
    #[inline]
    pub fn apply(&self, w: Elt) -> Elt {
        Elt(self.table[w.idx()])
    }

    pub fn label(&self) -> String {
        format!("star({},{})", self.s + 1, self.t + 1)
    }
}

impl std::fmt::Debug for StarPermutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Builds sigma for the pair: x w' maps to x star(w') on X_I Gamma_s, to
/// x star^{-1}(w') on X_I Gamma_t, and fixes everything else.
pub fn sigma_l(group: &CoxeterGroup, pair: &StarPair) -> StarPermutation {
    let pd = group.parabolic(&[pair.s, pair.t]);
    let mut table: Vec<u32> = (0..group.size() as u32).collect();
    for w in group.elements() {
        let (x, wp) = pd.decomp[w.idx()];
        if pair.gamma_s.binary_search(&wp).is_ok() {
            table[w.idx()] = group.mult(x, star_map(group, pair, wp).unwrap()).0;
        } else if pair.gamma_t.binary_search(&wp).is_ok() {
            table[w.idx()] = group.mult(x, star_map_inv(group, pair, wp).unwrap()).0;
        }
    }
    debug_assert!(table.iter().enumerate().all(|(i, &j)| table[j as usize] == i as u32));
    StarPermutation { s: pair.s, t: pair.t, case: pair.case, table }
}

/// A standard parabolic subgroup rebuilt as a Coxeter group in its own
/// right, with the embedding into the parent.
pub struct ParabolicEmbedding {
    pub sub_group: CoxeterGroup,
    pub sub_weights: WeightFunction,
    pub gens: Vec<u8>,
    /// sub element index -> parent element.
    pub to_parent: Vec<Elt>,
    /// parent element index -> sub element, for members of W_I.
    pub from_parent: HashMap<u32, Elt>,
}

pub fn parabolic_embedding(
    group: &CoxeterGroup,
    weights: &WeightFunction,
    gens: &[u8],
) -> Result<ParabolicEmbedding> {
    let mut gens: Vec<u8> = gens.to_vec();
    gens.sort_unstable();
    gens.dedup();
    let rows: Vec<Vec<u32>> = gens
        .iter()
        .map(|&a| gens.iter().map(|&b| group.matrix().m(a, b)).collect())
        .collect();
    let sub_group = CoxeterGroup::build(CoxeterMatrix::new(rows)?)?;
    let sub_weights = WeightFunction::new(
        &sub_group,
        weights.gamma_rank(),
        gens.iter().map(|&s| weights.of(s).clone()).collect(),
    )?;
    let mut to_parent = Vec::with_capacity(sub_group.size());
    let mut from_parent = HashMap::new();
    for u in sub_group.elements() {
        let word: Vec<u8> = sub_group.word(u).iter().map(|&i| gens[i as usize]).collect();
        let w = group.from_word(&word);
        from_parent.insert(w.0, u);
        to_parent.push(w);
    }
    Ok(ParabolicEmbedding { sub_group, sub_weights, gens, to_parent, from_parent })
}

/// The basis G_w = T_x C_w' over a member set, T-expansions included.
pub struct InducedBasis<C: Coeff> {
    pub gens: Vec<u8>,
    /// X_I * E, ascending by element index.
    pub members: Vec<Elt>,
    /// G_w in the T-basis, parallel to `members`.
    pub g_elems: Vec<HeckeElement<C>>,
    /// Column j: the expansion of C_members[j] over the G-basis, indices
    /// being positions in `members`.
    pub transition: Vec<ModuleElement<C>>,
}

fn g_element<C: Coeff>(
    alg: &HeckeAlgebra<'_, C>,
    cache: &KLCache<C>,
    pd: &ParabolicData,
    w: Elt,
) -> HeckeElement<C> {
    let group = alg.group();
    let (x, wp) = pd.decomp[w.idx()];
    let mut acc: HeckeElement<C> = (*alg.kl_basis(wp, cache)).clone();
    for &s in group.word(x).iter().rev() {
        acc = alg.t_gen_left(s, &acc);
    }
    debug_assert_eq!(acc.top().map(|e| e.0), Some(w));
    acc
}

/// Expands h over the G-elements of `members` by peeling top T-indices.
/// Errors with the escaping element if h leaves the span.
fn express_over_g<C: Coeff>(
    members: &[Elt],
    g_elems: &[HeckeElement<C>],
    h: &HeckeElement<C>,
) -> Result<ModuleElement<C>> {
    let mut rest = h.clone();
    let mut out = ModuleElement::zero();
    while let Some((w, d)) = rest.top().cloned() {
        let pos = members.binary_search(&w).map_err(|_| Error::SpanEscape(w.0))?;
        out.add_entry(pos, d.clone());
        rest = rest.sub(&g_elems[pos].scale(&d));
    }
    Ok(out)
}

/// Builds both bases over X_I E for a subset E of W_I that is down-closed
/// under the left preorder of W_I (checked), plus the transition matrix.
pub fn induced_basis<C: Coeff>(
    alg: &HeckeAlgebra<'_, C>,
    cache: &KLCache<C>,
    gens: &[u8],
    e_set: &[Elt],
    kl_limit: usize,
) -> Result<InducedBasis<C>> {
    let group = alg.group();
    let pd = group.parabolic(gens);
    for &u in e_set {
        if !pd.contains(u) {
            return Err(Error::NotDownClosed);
        }
    }
    // Down-closure is relative to the cells of W_I, computed standalone.
    let emb = parabolic_embedding(group, alg.weights(), &pd.gens)?;
    let sub_alg = HeckeAlgebra::<C>::new(&emb.sub_group, emb.sub_weights.clone());
    let sub_cache = KLCache::new(&emb.sub_group, &emb.sub_weights);
    let sub_cells = cells::cells(&sub_alg, &sub_cache, Side::Left, kl_limit)?;
    let mut in_e = vec![false; emb.sub_group.size()];
    for &u in e_set {
        in_e[emb.from_parent[&u.0].idx()] = true;
    }
    for u in emb.sub_group.elements() {
        if !in_e[u.idx()] {
            continue;
        }
        let cu = sub_cells.partition.class_of(u);
        for v in emb.sub_group.elements() {
            if !in_e[v.idx()] && sub_cells.class_leq(sub_cells.partition.class_of(v), cu) {
                return Err(Error::NotDownClosed);
            }
        }
    }

    let mut members: Vec<Elt> = Vec::with_capacity(pd.x_set.len() * e_set.len());
    for &x in &pd.x_set {
        for &u in e_set {
            members.push(group.mult(x, u));
        }
    }
    members.sort_unstable();
    members.dedup();
    let g_elems: Vec<HeckeElement<C>> =
        members.iter().map(|&w| g_element(alg, cache, &pd, w)).collect();
    let transition = members
        .iter()
        .map(|&w| express_over_g(&members, &g_elems, &alg.kl_basis(w, cache)))
        .collect::<Result<Vec<_>>>()?;
    Ok(InducedBasis { gens: pd.gens.clone(), members, g_elems, transition })
}

impl<C: Coeff> InducedBasis<C> {
    /// Violations of Bruhat unitriangularity with strictly positive lower
    /// entries, as (row member, column member) witnesses.
    pub fn unitriangularity_violations(&self, group: &CoxeterGroup) -> Vec<(Elt, Elt)> {
        let rank_one = |c: &LaurentElement<C>| c == &LaurentElement::one(c.rank());
        let mut bad = Vec::new();
        for (j, col) in self.transition.iter().enumerate() {
            let w = self.members[j];
            for (pos, c) in col.entries() {
                let u = self.members[*pos];
                let ok = if u == w {
                    rank_one(c)
                } else {
                    group.bruhat_leq(u, w) && u != w && c.is_strictly_positive()
                };
                if !ok {
                    bad.push((u, w));
                }
            }
        }
        bad
    }
}

/// Quotient module data for the transport check: coordinates of the images
/// cbar_w over the g-basis positions of X_I Gamma_i.
struct QuotientSide<C: Coeff> {
    /// X_I Gamma_i, ascending.
    q_members: Vec<Elt>,
    /// cbar coordinates per q_members position.
    cbar: Vec<ModuleElement<C>>,
}

fn build_quotient_side<C: Coeff>(
    alg: &HeckeAlgebra<'_, C>,
    cache: &KLCache<C>,
    pd: &ParabolicData,
    members: &[Elt],
    g_elems: &[HeckeElement<C>],
    q_members: &[Elt],
    report: &mut Report,
    label: &str,
) -> Result<QuotientSide<C>> {
    let group = alg.group();
    let rank = alg.gamma_rank();
    let q_pos = |w: Elt| q_members.binary_search(&w).ok();
    let quotient = |full: &ModuleElement<C>| -> ModuleElement<C> {
        ModuleElement::from_entries(full.entries().iter().filter_map(|(pos, c)| {
            q_pos(members[*pos]).map(|qp| (qp, c.clone()))
        }))
    };

    // cbar_w: expand C_w over the G-basis and pass to the quotient.
    let mut geck = Check::new(format!("geck-expansion-{label}"));
    let mut cbar = Vec::with_capacity(q_members.len());
    for &w in q_members {
        geck.instances += 1;
        let full = express_over_g(members, g_elems, &alg.kl_basis(w, cache))?;
        cbar.push(quotient(&full));
    }
    report.push(geck);

    // The quotient datum (basis g_w, transported bar) satisfies the
    // canonical-basis hypotheses; its canonical basis must be exactly cbar.
    let mut below = BitMatrix::new(q_members.len(), q_members.len());
    for (i, &wi) in q_members.iter().enumerate() {
        for (j, &wj) in q_members.iter().enumerate() {
            if i != j && group.bruhat_leq(wj, wi) {
                below.set(i, j);
            }
        }
    }
    let mut bar_basis = Vec::with_capacity(q_members.len());
    for &w in q_members {
        let (x, wp) = pd.decomp[w.idx()];
        let bar_g = alg.t_multiply(&alg.bar_t(x), &alg.kl_basis(wp, cache));
        bar_basis.push(quotient(&express_over_g(members, g_elems, &bar_g)?));
    }
    let datum = BarModuleDatum::new(rank, below, bar_basis)?;
    let canonical = datum.canonical_basis()?;
    let mut canon = Check::new(format!("quotient-canonical-{label}"));
    for (i, &w) in q_members.iter().enumerate() {
        canon.instances += 1;
        if canonical[i] != cbar[i] {
            canon.fail(format!("canonical basis differs from cbar at {}", group.word_string(w)));
        }
    }
    report.push(canon);

    Ok(QuotientSide { q_members: q_members.to_vec(), cbar })
}

/// Checks the dihedral hypotheses for a pair inside its own dihedral group:
/// Gamma_s and Gamma_t are left cells, the star bijection intertwines the
/// cell module actions, and neither cell sits strictly below the other.
pub fn dihedral_cell_checks<C: Coeff>(
    group: &CoxeterGroup,
    weights: &WeightFunction,
    pair: &StarPair,
    kl_limit: usize,
) -> Result<Report> {
    let mut report = Report::new(format!("dihedral({},{})", pair.s + 1, pair.t + 1));
    let emb = parabolic_embedding(group, weights, &[pair.s, pair.t])?;
    let sub = &emb.sub_group;
    let alg = HeckeAlgebra::<C>::new(sub, emb.sub_weights.clone());
    let cache = KLCache::new(sub, &emb.sub_weights);
    let cp = cells::cells(&alg, &cache, Side::Left, kl_limit)?;

    // the pair viewed inside the dihedral group
    let sub_s = emb.gens.iter().position(|&g| g == pair.s).unwrap() as u8;
    let sub_t = emb.gens.iter().position(|&g| g == pair.t).unwrap() as u8;
    let sub_pair = star_pair_data(sub, &emb.sub_weights, sub_s, sub_t)
        .expect("pair qualifies in the dihedral group");

    let as_class = |set: &[Elt], name: &str, check: &mut Check| -> Option<usize> {
        check.instances += 1;
        let class = cp.partition.class_of(set[0]);
        if cp.partition.class_members(class) == set {
            Some(class)
        } else {
            check.fail(format!("{name} is not a left cell of the dihedral group"));
            None
        }
    };
    let mut lemma = Check::new("gamma-sets-are-cells");
    let cs = as_class(&sub_pair.gamma_s, "Gamma_s", &mut lemma);
    let ct = as_class(&sub_pair.gamma_t, "Gamma_t", &mut lemma);
    report.push(lemma);
    let (cs, ct) = match (cs, ct) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(report),
    };

    // (V2): no strict relation between the two cells
    let mut v2 = Check::new("no-strict-order-between-cells");
    v2.instances = 2;
    if cs != ct {
        if cp.class_leq(cs, ct) {
            v2.fail("Gamma_s lies strictly below Gamma_t".into());
        }
        if cp.class_leq(ct, cs) {
            v2.fail("Gamma_t lies strictly below Gamma_s".into());
        }
    } else {
        v2.fail("Gamma_s equals Gamma_t".into());
    }
    report.push(v2);

    // (V1): c_w -> c_{star(w)} intertwines the actions of C_s and C_t
    let ms = cells::cell_module(&alg, &cache, &cp, cs);
    let mt = cells::cell_module(&alg, &cache, &cp, ct);
    let mut v1 = Check::new("star-intertwines-cell-modules");
    for u in 0..sub.rank() {
        for (j, &b) in ms.members.iter().enumerate() {
            for (i, &a) in ms.members.iter().enumerate() {
                v1.instances += 1;
                let ia = mt
                    .members
                    .binary_search(&star_map(sub, &sub_pair, a)?)
                    .expect("star image lies in Gamma_t");
                let jb = mt
                    .members
                    .binary_search(&star_map(sub, &sub_pair, b)?)
                    .expect("star image lies in Gamma_t");
                if ms.action[u][i][j] != mt.action[u][ia][jb] {
                    v1.fail(format!(
                        "action of generator {} differs at ({}, {})",
                        u + 1,
                        sub.word_string(a),
                        sub.word_string(b)
                    ));
                }
            }
        }
    }
    report.push(v1);
    Ok(report)
}

/// Verifies the transport property sigma_*(cbar_w) = cbar_{sigma(w)} for one
/// pair, constructing the two quotient modules concretely.
pub fn verify_sigma_star<C: Coeff>(
    alg: &HeckeAlgebra<'_, C>,
    cache: &KLCache<C>,
    pair: &StarPair,
    kl_limit: usize,
) -> Result<Report> {
    let group = alg.group();
    if group.size() > kl_limit {
        return Err(Error::ResourceLimit { order: group.size(), limit: kl_limit });
    }
    let mut report =
        Report::new(format!("sigma-star({},{})", pair.s + 1, pair.t + 1));

    report.merge(dihedral_cell_checks::<C>(group, alg.weights(), pair, kl_limit)?);

    // E_0: everything strictly below Gamma_s or Gamma_t inside W_I.
    let emb = parabolic_embedding(group, alg.weights(), &[pair.s, pair.t])?;
    let sub_alg = HeckeAlgebra::<C>::new(&emb.sub_group, emb.sub_weights.clone());
    let sub_cache = KLCache::new(&emb.sub_group, &emb.sub_weights);
    let sub_cells = cells::cells(&sub_alg, &sub_cache, Side::Left, kl_limit)?;
    let class_of_parent = |w: Elt| sub_cells.partition.class_of(emb.from_parent[&w.0]);
    let (cs, ct) = (class_of_parent(pair.gamma_s[0]), class_of_parent(pair.gamma_t[0]));
    let e0: Vec<Elt> = emb
        .to_parent
        .iter()
        .copied()
        .filter(|&w| {
            let c = class_of_parent(w);
            (c != cs && sub_cells.class_leq(c, cs)) || (c != ct && sub_cells.class_leq(c, ct))
        })
        .collect();

    let pd = group.parabolic(&[pair.s, pair.t]);
    let build_members = |gamma: &[Elt]| -> (Vec<Elt>, Vec<Elt>) {
        let mut full = Vec::new();
        let mut quot = Vec::new();
        for &x in &pd.x_set {
            for &u in e0.iter().chain(gamma) {
                full.push(group.mult(x, u));
            }
            for &u in gamma {
                quot.push(group.mult(x, u));
            }
        }
        full.sort_unstable();
        quot.sort_unstable();
        (full, quot)
    };
    let (members1, q1) = build_members(&pair.gamma_s);
    let (members2, q2) = build_members(&pair.gamma_t);

    let g1: Vec<HeckeElement<C>> =
        members1.iter().map(|&w| g_element(alg, cache, &pd, w)).collect();
    let g2: Vec<HeckeElement<C>> =
        members2.iter().map(|&w| g_element(alg, cache, &pd, w)).collect();

    let side1 =
        build_quotient_side(alg, cache, &pd, &members1, &g1, &q1, &mut report, "s")?;
    let side2 =
        build_quotient_side(alg, cache, &pd, &members2, &g2, &q2, &mut report, "t")?;

    // sigma_* sends g_w to g_{sigma(w)}; compare coordinates.
    let sigma = sigma_l(group, pair);
    let mut transport = Check::new("sigma-star-transport");
    for (j, &w) in side1.q_members.iter().enumerate() {
        transport.instances += 1;
        let image = sigma.apply(w);
        let j2 = match side2.q_members.binary_search(&image) {
            Ok(p) => p,
            Err(_) => {
                transport.fail(format!(
                    "sigma({}) leaves X_I Gamma_t",
                    group.word_string(w)
                ));
                continue;
            }
        };
        let mapped = ModuleElement::from_entries(side1.cbar[j].entries().iter().map(
            |(pos, c)| {
                let target = sigma.apply(side1.q_members[*pos]);
                (side2.q_members.binary_search(&target).unwrap(), c.clone())
            },
        ));
        if mapped != side2.cbar[j2] {
            transport.fail(format!(
                "transport fails at {} -> {}",
                group.word_string(w),
                group.word_string(image)
            ));
        }
    }
    report.push(transport);
    Ok(report)
}
