//! Iwahori-Hecke algebra with unequal parameters.
//!
//! The algebra over Z[Gamma] has basis (T_w) with T_w T_w' = T_ww' when
//! lengths add and the quadratic relation
//! (T_s - v^phi(s))(T_s + v^-phi(s)) = 0 per generator. The bar involution
//! sends T_w to the inverse of T_{w^-1}; the Kazhdan-Lusztig element C_w is
//! the unique bar-invariant element congruent to T_w modulo strictly
//! positive coefficients, computed through the generic canonical-basis
//! engine over the Bruhat order.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::{Arc, OnceLock, RwLock};

use crate::canonical::{BarModuleDatum, ModuleElement};
use crate::coxeter::{CoxeterGroup, Elt};
use crate::error::{Error, Result};
use crate::laurent::{parse_laurent, Coeff, GammaVector, LaurentElement};
use crate::util::{sha_hex, BitMatrix};

/// Weight function phi: S -> Gamma_{>0}, constant on conjugacy classes of
/// generators.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightFunction {
    rank: usize,
    phi: Vec<GammaVector>,
    hash: String,
}

impl WeightFunction {
    pub fn new(group: &CoxeterGroup, rank: usize, phi: Vec<GammaVector>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidWeights("gamma rank must be at least 1".into()));
        }
        if phi.len() != group.rank() {
            return Err(Error::InvalidWeights(format!(
                "{} weight vectors for {} generators",
                phi.len(),
                group.rank()
            )));
        }
        for (s, w) in phi.iter().enumerate() {
            if w.rank() != rank {
                return Err(Error::InvalidWeights(format!(
                    "weight of generator {} has rank {}, expected {rank}",
                    s + 1,
                    w.rank()
                )));
            }
            if !w.is_positive() {
                return Err(Error::InvalidWeights(format!(
                    "weight of generator {} is not strictly positive",
                    s + 1
                )));
            }
        }
        for class in group.generator_conjugacy_classes() {
            for pair in class.windows(2) {
                if phi[pair[0] as usize] != phi[pair[1] as usize] {
                    return Err(Error::InvalidWeights(format!(
                        "generators {} and {} are conjugate but carry different weights",
                        pair[0] + 1,
                        pair[1] + 1
                    )));
                }
            }
        }
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&(rank as u32).to_le_bytes());
        for w in &phi {
            for &c in &w.0 {
                bytes.extend_from_slice(&c.to_le_bytes());
            }
        }
        let hash = sha_hex(&bytes);
        Ok(WeightFunction { rank, phi, hash })
    }

    /// The constant weight function phi = 1 at gamma rank 1.
    pub fn constant(group: &CoxeterGroup) -> Self {
        Self::new(group, 1, vec![GammaVector(vec![1]); group.rank()]).unwrap()
    }

    /// Rank-1 weights from plain integers.
    pub fn rank1(group: &CoxeterGroup, vals: &[i32]) -> Result<Self> {
        Self::new(group, 1, vals.iter().map(|&v| GammaVector(vec![v])).collect())
    }

    pub fn gamma_rank(&self) -> usize {
        self.rank
    }

    pub fn of(&self, s: u8) -> &GammaVector {
        &self.phi[s as usize]
    }

    /// Lexicographic comparison phi(s) < phi(t).
    pub fn less(&self, s: u8, t: u8) -> bool {
        self.phi[s as usize] < self.phi[t as usize]
    }

    pub fn leq(&self, s: u8, t: u8) -> bool {
        self.phi[s as usize] <= self.phi[t as usize]
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "phi{:?}", self.phi)
    }
}

/// Sparse A-linear combination of T_w, ascending by element index.
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElement<C: Coeff> {
    entries: Vec<(Elt, LaurentElement<C>)>,
}

impl<C: Coeff> HeckeElement<C> {
    pub fn zero() -> Self {
        HeckeElement { entries: Vec::new() }
    }

    pub fn t_basis(w: Elt, rank: usize) -> Self {
        HeckeElement { entries: vec![(w, LaurentElement::one(rank))] }
    }

    pub fn from_entries(pairs: impl IntoIterator<Item = (Elt, LaurentElement<C>)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in pairs {
            out.add_entry(w, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Elt, LaurentElement<C>)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = Elt> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn coeff(&self, w: Elt, rank: usize) -> LaurentElement<C> {
        match self.entries.binary_search_by_key(&w, |e| e.0) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => LaurentElement::zero(rank),
        }
    }

    pub fn top(&self) -> Option<&(Elt, LaurentElement<C>)> {
        self.entries.last()
    }

    pub fn add_entry(&mut self, w: Elt, c: LaurentElement<C>) {
        if c.is_zero() {
            return;
        }
        match self.entries.binary_search_by_key(&w, |e| e.0) {
            Ok(i) => {
                let sum = self.entries[i].1.add(&c);
                if sum.is_zero() {
                    self.entries.remove(i);
                } else {
                    self.entries[i].1 = sum;
                }
            }
            Err(i) => self.entries.insert(i, (w, c)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.entries {
            out.add_entry(*w, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.entries {
            out.add_entry(*w, c.neg());
        }
        out
    }

    pub fn scale(&self, a: &LaurentElement<C>) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        HeckeElement { entries: self.entries.iter().map(|(w, c)| (*w, c.mul(a))).collect() }
    }
}

impl<C: Coeff> fmt::Debug for HeckeElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*T{}", w.0)?;
        }
        Ok(())
    }
}

/// Memoized store of Kazhdan-Lusztig expansions C_w = sum p_{y,w} T_y,
/// fingerprinted by group and weight hashes. Reads are concurrent; writes
/// are first-writer-wins (all writers would store the same canonical value).
pub struct KLCache<C: Coeff> {
    group_hash: String,
    weight_hash: String,
    rank: usize,
    map: RwLock<HashMap<u32, Arc<HeckeElement<C>>>>,
}

impl<C: Coeff> KLCache<C> {
    pub fn new(group: &CoxeterGroup, weights: &WeightFunction) -> Self {
        KLCache {
            group_hash: group.hash().to_string(),
            weight_hash: weights.hash().to_string(),
            rank: weights.gamma_rank(),
            map: RwLock::new(HashMap::new()),
        }
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, w: Elt) -> Option<Arc<HeckeElement<C>>> {
        self.map.read().unwrap().get(&w.0).cloned()
    }

    pub fn insert(&self, w: Elt, elt: HeckeElement<C>) -> Arc<HeckeElement<C>> {
        let mut map = self.map.write().unwrap();
        map.entry(w.0).or_insert_with(|| Arc::new(elt)).clone()
    }

    /// Serializes all cached coefficients, sorted by (w, y), in the
    /// line-oriented `KLCACHE v1` format.
    pub fn serialize(&self) -> String {
        let map = self.map.read().unwrap();
        let mut out = format!(
            "KLCACHE v1 {} {} {}\n",
            self.group_hash, self.weight_hash, self.rank
        );
        let mut ws: Vec<u32> = map.keys().copied().collect();
        ws.sort_unstable();
        for w in ws {
            for (y, c) in map[&w].entries() {
                out.push_str(&format!("{} {} {}\n", w, y.0, c));
            }
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        fs::write(path, self.serialize())?;
        Ok(())
    }

    /// Parses a cache file, validating the fingerprints against the given
    /// group and weights. Any mismatch or malformed line is an error, never
    /// a silent recompute.
    pub fn deserialize(
        text: &str,
        group: &CoxeterGroup,
        weights: &WeightFunction,
    ) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::CacheInvalid("empty file".into()))?;
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != 5 || fields[0] != "KLCACHE" || fields[1] != "v1" {
            return Err(Error::CacheInvalid(format!("bad header `{header}`")));
        }
        if fields[2] != group.hash() {
            return Err(Error::CacheInvalid(format!(
                "group hash {} does not match {}",
                fields[2],
                group.hash()
            )));
        }
        if fields[3] != weights.hash() {
            return Err(Error::CacheInvalid(format!(
                "weight hash {} does not match {}",
                fields[3],
                weights.hash()
            )));
        }
        let rank: usize = fields[4]
            .parse()
            .map_err(|_| Error::CacheInvalid("bad gamma rank".into()))?;
        if rank != weights.gamma_rank() {
            return Err(Error::CacheInvalid(format!(
                "gamma rank {rank} does not match {}",
                weights.gamma_rank()
            )));
        }
        let cache = Self::new(group, weights);
        let mut map = HashMap::new();
        let mut prev: Option<(u32, u32)> = None;
        let mut current: Option<(u32, HeckeElement<C>)> = None;
        for (ln, line) in lines.enumerate() {
            let mut it = line.splitn(3, ' ');
            let parse_u32 = |s: Option<&str>| -> Result<u32> {
                s.and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::CacheInvalid(format!("bad index on line {}", ln + 2)))
            };
            let w = parse_u32(it.next())?;
            let y = parse_u32(it.next())?;
            if w as usize >= group.size() || y as usize >= group.size() {
                return Err(Error::CacheInvalid(format!("index out of range on line {}", ln + 2)));
            }
            let c: LaurentElement<C> = parse_laurent(
                it.next().ok_or_else(|| Error::CacheInvalid(format!("missing coefficient on line {}", ln + 2)))?,
                rank,
            )
            .map_err(|e| Error::CacheInvalid(format!("line {}: {e}", ln + 2)))?;
            if let Some(p) = prev {
                if (w, y) <= p {
                    return Err(Error::CacheInvalid(format!("lines not sorted at line {}", ln + 2)));
                }
            }
            prev = Some((w, y));
            match &mut current {
                Some((cw, elt)) if *cw == w => elt.add_entry(Elt(y), c),
                _ => {
                    if let Some((cw, elt)) = current.take() {
                        map.insert(cw, Arc::new(elt));
                    }
                    let mut elt = HeckeElement::zero();
                    elt.add_entry(Elt(y), c);
                    current = Some((w, elt));
                }
            }
        }
        if let Some((cw, elt)) = current.take() {
            map.insert(cw, Arc::new(elt));
        }
        *cache.map.write().unwrap() = map;
        Ok(cache)
    }

    pub fn read_from(
        path: &Path,
        group: &CoxeterGroup,
        weights: &WeightFunction,
    ) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::deserialize(&text, group, weights)
    }
}

/// The algebra context: group, weights, memoized bar images of the T-basis
/// and the lazily built canonical-basis datum over the full group.
pub struct HeckeAlgebra<'a, C: Coeff> {
    group: &'a CoxeterGroup,
    weights: WeightFunction,
    /// v^phi(s) - v^-phi(s) per generator.
    quad: Vec<LaurentElement<C>>,
    bar_memo: RwLock<Vec<Option<Arc<HeckeElement<C>>>>>,
    datum: OnceLock<BarModuleDatum<C>>,
}

impl<'a, C: Coeff> HeckeAlgebra<'a, C> {
    pub fn new(group: &'a CoxeterGroup, weights: WeightFunction) -> Self {
        let quad = (0..group.rank() as u8)
            .map(|s| {
                let phi = weights.of(s);
                LaurentElement::monomial(phi.clone(), C::one())
                    .sub(&LaurentElement::monomial(phi.neg(), C::one()))
            })
            .collect();
        HeckeAlgebra {
            group,
            weights,
            quad,
            bar_memo: RwLock::new(vec![None; group.size()]),
            datum: OnceLock::new(),
        }
    }

    pub fn group(&self) -> &'a CoxeterGroup {
        self.group
    }

    pub fn weights(&self) -> &WeightFunction {
        &self.weights
    }

    pub fn gamma_rank(&self) -> usize {
        self.weights.gamma_rank()
    }

    pub fn t_one(&self) -> HeckeElement<C> {
        HeckeElement::t_basis(self.group.identity(), self.gamma_rank())
    }

    /// T_s * h.
    pub fn t_gen_left(&self, s: u8, h: &HeckeElement<C>) -> HeckeElement<C> {
        let mut out = HeckeElement::zero();
        for (y, a) in h.entries() {
            let sy = self.group.mult_gen_left(*y, s);
            if self.group.length(sy) > self.group.length(*y) {
                out.add_entry(sy, a.clone());
            } else {
                out.add_entry(sy, a.clone());
                out.add_entry(*y, a.mul(&self.quad[s as usize]));
            }
        }
        out
    }

    /// h * T_s.
    pub fn t_gen_right(&self, h: &HeckeElement<C>, s: u8) -> HeckeElement<C> {
        let mut out = HeckeElement::zero();
        for (y, a) in h.entries() {
            let ys = self.group.mult_gen_right(*y, s);
            if self.group.length(ys) > self.group.length(*y) {
                out.add_entry(ys, a.clone());
            } else {
                out.add_entry(ys, a.clone());
                out.add_entry(*y, a.mul(&self.quad[s as usize]));
            }
        }
        out
    }

    /// h * T_w along a reduced word of w.
    pub fn t_mul_t_basis(&self, h: &HeckeElement<C>, w: Elt) -> HeckeElement<C> {
        let mut acc = h.clone();
        for &s in self.group.word(w) {
            acc = self.t_gen_right(&acc, s);
        }
        acc
    }

    /// Full product in the T-basis.
    pub fn t_multiply(&self, h1: &HeckeElement<C>, h2: &HeckeElement<C>) -> HeckeElement<C> {
        let mut out = HeckeElement::zero();
        for (w, a) in h2.entries() {
            out = out.add(&self.t_mul_t_basis(h1, *w).scale(a));
        }
        out
    }

    /// bar(T_w), memoized; computed by bar(T_w's) = bar(T_w')bar(T_s) along
    /// the ShortLex word, seeded with bar(T_s) = T_s + (v^-phi - v^phi) T_e.
    pub fn bar_t(&self, w: Elt) -> Arc<HeckeElement<C>> {
        if let Some(hit) = self.bar_memo.read().unwrap()[w.idx()].clone() {
            return hit;
        }
        let value = if w.idx() == 0 {
            self.t_one()
        } else {
            let word = self.group.word(w);
            let s = *word.last().unwrap();
            let wp = self.group.mult_gen_right(w, s);
            let prev = self.bar_t(wp);
            // bar(T_s) = T_s - (v^phi - v^-phi) T_e
            let mut out = self.t_gen_right(&prev, s);
            out = out.add(&prev.scale(&self.quad[s as usize].neg()));
            out
        };
        let mut memo = self.bar_memo.write().unwrap();
        memo[w.idx()].get_or_insert_with(|| Arc::new(value)).clone()
    }

    /// Semilinear bar involution on an arbitrary element.
    pub fn bar(&self, h: &HeckeElement<C>) -> HeckeElement<C> {
        let mut out = HeckeElement::zero();
        for (w, a) in h.entries() {
            out = out.add(&self.bar_t(*w).scale(&a.bar()));
        }
        out
    }

    fn module_to_hecke(&self, m: &ModuleElement<C>) -> HeckeElement<C> {
        HeckeElement::from_entries(
            m.entries().iter().map(|(i, c)| (Elt(*i as u32), c.clone())),
        )
    }

    /// Canonical-basis datum of the full group over the Bruhat order.
    /// Building it validates triangularity and involutivity of the bar data.
    pub fn full_datum(&self) -> &BarModuleDatum<C> {
        self.datum.get_or_init(|| {
            let n = self.group.size();
            let mut below = BitMatrix::new(n, n);
            for w in self.group.elements() {
                for y in self.group.elements() {
                    if y != w && self.group.bruhat_leq(y, w) {
                        below.set(w.idx(), y.idx());
                    }
                }
            }
            let bar_basis = self
                .group
                .elements()
                .map(|w| {
                    ModuleElement::from_entries(
                        self.bar_t(w).entries().iter().map(|(y, c)| (y.idx(), c.clone())),
                    )
                })
                .collect();
            BarModuleDatum::new(self.gamma_rank(), below, bar_basis)
                .expect("Hecke bar data satisfies the canonical-basis hypotheses")
        })
    }

    /// The Kazhdan-Lusztig element C_w, memoized in `cache`.
    pub fn kl_basis(&self, w: Elt, cache: &KLCache<C>) -> Arc<HeckeElement<C>> {
        if let Some(hit) = cache.get(w) {
            return hit;
        }
        let datum = self.full_datum();
        let m = datum
            .bar_invariant_completion(&ModuleElement::basis(w.idx(), self.gamma_rank()))
            .expect("completion cannot fail on validated bar data");
        cache.insert(w, self.module_to_hecke(&m))
    }

    /// Computes (and caches) the whole canonical basis.
    pub fn kl_all(&self, cache: &KLCache<C>) -> Vec<Arc<HeckeElement<C>>> {
        self.group.elements().map(|w| self.kl_basis(w, cache)).collect()
    }

    /// Expands h in the C-basis by triangular back-substitution from the
    /// highest ShortLex index.
    pub fn express_in_kl(
        &self,
        h: &HeckeElement<C>,
        cache: &KLCache<C>,
    ) -> Vec<(Elt, LaurentElement<C>)> {
        let mut rest = h.clone();
        let mut out = Vec::new();
        while let Some((w, d)) = rest.top().cloned() {
            out.push((w, d.clone()));
            rest = rest.sub(&self.kl_basis(w, cache).scale(&d));
        }
        out.reverse();
        out
    }

    /// Structure constants h_{x,y,z} of C_x C_y = sum_z h_{x,y,z} C_z.
    pub fn structure_constants(
        &self,
        x: Elt,
        y: Elt,
        cache: &KLCache<C>,
    ) -> Vec<(Elt, LaurentElement<C>)> {
        let cx = self.kl_basis(x, cache);
        let cy = self.kl_basis(y, cache);
        let prod = self.t_multiply(&cx, &cy);
        self.express_in_kl(&prod, cache)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;
    use crate::laurent::LaurentElement as L;

    type Lau = L<i64>;

    fn setup(name: &str, weights: &[i32]) -> (CoxeterGroup, WeightFunction) {
        let g = CoxeterGroup::build(CoxeterMatrix::from_name(name).unwrap()).unwrap();
        let w = WeightFunction::rank1(&g, weights).unwrap();
        (g, w)
    }

    fn v(e: i32) -> Lau {
        L::v_pow(e)
    }

    #[test]
    fn weight_validation() {
        let g = CoxeterGroup::build(CoxeterMatrix::from_name("A2").unwrap()).unwrap();
        assert!(WeightFunction::rank1(&g, &[1, 1]).is_ok());
        // s and t are conjugate in A2
        assert!(WeightFunction::rank1(&g, &[1, 2]).is_err());
        assert!(WeightFunction::rank1(&g, &[0, 0]).is_err());
        assert!(WeightFunction::rank1(&g, &[1]).is_err());
        let b = CoxeterGroup::build(CoxeterMatrix::from_name("B2").unwrap()).unwrap();
        assert!(WeightFunction::rank1(&b, &[1, 2]).is_ok());
        // rank-2 gamma: (0,1) is strictly positive, (0,-1) is not
        assert!(WeightFunction::new(&b, 2, vec![
            GammaVector(vec![0, 1]),
            GammaVector(vec![1, 0])
        ])
        .is_ok());
        assert!(WeightFunction::new(&b, 2, vec![
            GammaVector(vec![0, -1]),
            GammaVector(vec![1, 0])
        ])
        .is_err());
    }

    #[test]
    fn quadratic_relation() {
        let (g, w) = setup("A2", &[1, 1]);
        let alg = HeckeAlgebra::<i64>::new(&g, w);
        let s = g.generator(0);
        let ts = HeckeElement::t_basis(s, 1);
        let prod = alg.t_multiply(&ts, &ts);
        let expect = HeckeElement::from_entries([
            (g.identity(), Lau::one(1)),
            (s, v(1).sub(&v(-1))),
        ]);
        assert_eq!(prod, expect);
    }

    #[test]
    fn length_additive_product() {
        let (g, w) = setup("A2", &[1, 1]);
        let alg = HeckeAlgebra::<i64>::new(&g, w);
        let s = g.generator(0);
        let t = g.generator(1);
        let prod = alg.t_multiply(&HeckeElement::t_basis(s, 1), &HeckeElement::t_basis(t, 1));
        assert_eq!(prod, HeckeElement::t_basis(g.mult(s, t), 1));
        // identity acts trivially
        let haphazard = prod.add(&HeckeElement::t_basis(s, 1).scale(&v(-2)));
        assert_eq!(alg.t_multiply(&alg.t_one(), &haphazard), haphazard);
    }

    #[test]
    fn bar_of_generator_inverts_t() {
        let (g, w) = setup("B2", &[1, 2]);
        let alg = HeckeAlgebra::<i64>::new(&g, w);
        for s in 0..2u8 {
            let bar_ts = alg.bar_t(g.generator(s));
            let phi = 1 + s as i32;
            let expect = HeckeElement::from_entries([
                (g.generator(s), Lau::one(1)),
                (g.identity(), v(-phi).sub(&v(phi))),
            ]);
            assert_eq!(*bar_ts, expect);
            // multiplying back by T_s recovers T_e
            let back = alg.t_gen_right(&bar_ts, s);
            assert_eq!(back, alg.t_one());
        }
    }

    #[test]
    fn bar_is_an_involution_on_a2() {
        let (g, w) = setup("A2", &[1, 1]);
        let alg = HeckeAlgebra::<i64>::new(&g, w);
        for x in g.elements() {
            let b = alg.bar_t(x);
            assert_eq!(alg.bar(&b), HeckeElement::t_basis(x, 1), "at {}", g.word_string(x));
        }
    }

    #[test]
    fn kl_basis_small_cases() {
        let (g, w) = setup("A2", &[1, 1]);
        let alg = HeckeAlgebra::<i64>::new(&g, w.clone());
        let cache = KLCache::new(&g, &w);
        assert_eq!(*alg.kl_basis(g.identity(), &cache), alg.t_one());
        let s = g.generator(0);
        let cs = alg.kl_basis(s, &cache);
        let expect =
            HeckeElement::from_entries([(s, Lau::one(1)), (g.identity(), v(1).neg())]);
        assert_eq!(*cs, expect);
        // bar invariance of every C_w
        for x in g.elements() {
            let c = alg.kl_basis(x, &cache);
            assert_eq!(alg.bar(&c), *c);
        }
    }

    #[test]
    fn kl_unitriangular_with_positive_entries() {
        let (g, w) = setup("B2", &[1, 2]);
        let alg = HeckeAlgebra::<i64>::new(&g, w.clone());
        let cache = KLCache::new(&g, &w);
        for x in g.elements() {
            let c = alg.kl_basis(x, &cache);
            for (y, p) in c.entries() {
                if *y == x {
                    assert_eq!(*p, Lau::one(1));
                } else {
                    assert!(g.bruhat_leq(*y, x) && *y != x);
                    assert!(p.is_strictly_positive());
                }
            }
        }
    }

    #[test]
    fn express_in_kl_examples() {
        let (g, w) = setup("A2", &[1, 1]);
        let alg = HeckeAlgebra::<i64>::new(&g, w.clone());
        let cache = KLCache::new(&g, &w);
        let s = g.generator(0);
        // T_s = C_s + v C_e
        let ts = HeckeElement::t_basis(s, 1);
        assert_eq!(
            alg.express_in_kl(&ts, &cache),
            vec![(g.identity(), v(1)), (s, Lau::one(1))]
        );
        // C_w expands as itself
        let cw = alg.kl_basis(g.longest_element(), &cache);
        assert_eq!(alg.express_in_kl(&cw, &cache), vec![(g.longest_element(), Lau::one(1))]);
        // C_s C_s = -(v + v^-1) C_s
        assert_eq!(
            alg.structure_constants(s, s, &cache),
            vec![(s, v(1).add(&v(-1)).neg())]
        );
        // h_{e,y,z} = delta_{y,z}
        for y in g.elements() {
            assert_eq!(
                alg.structure_constants(g.identity(), y, &cache),
                vec![(y, Lau::one(1))]
            );
        }
    }

    #[test]
    fn structure_constants_reconstruct_products() {
        let (g, w) = setup("A2", &[1, 1]);
        let alg = HeckeAlgebra::<i64>::new(&g, w.clone());
        let cache = KLCache::new(&g, &w);
        for x in g.elements() {
            for y in g.elements() {
                let h = alg.structure_constants(x, y, &cache);
                let mut sum = HeckeElement::zero();
                for (z, c) in &h {
                    sum = sum.add(&alg.kl_basis(*z, &cache).scale(c));
                }
                let prod =
                    alg.t_multiply(&alg.kl_basis(x, &cache), &alg.kl_basis(y, &cache));
                assert_eq!(sum, prod);
            }
        }
    }

    #[test]
    fn cache_file_round_trip() {
        let (g, w) = setup("B2", &[1, 2]);
        let alg = HeckeAlgebra::<i64>::new(&g, w.clone());
        let cache = KLCache::new(&g, &w);
        alg.kl_all(&cache);
        let text = cache.serialize();
        let reloaded: KLCache<i64> = KLCache::deserialize(&text, &g, &w).unwrap();
        assert_eq!(reloaded.len(), g.size());
        for x in g.elements() {
            assert_eq!(reloaded.get(x).unwrap(), cache.get(x).unwrap());
        }
        // serialization is canonical
        assert_eq!(reloaded.serialize(), text);
    }

    #[test]
    fn cache_rejects_mismatch_and_corruption() {
        let (g, w) = setup("B2", &[1, 2]);
        let alg = HeckeAlgebra::<i64>::new(&g, w.clone());
        let cache = KLCache::new(&g, &w);
        alg.kl_all(&cache);
        let text = cache.serialize();
        // different weights: hash mismatch
        let w2 = WeightFunction::rank1(&g, &[1, 3]).unwrap();
        assert!(matches!(
            KLCache::<i64>::deserialize(&text, &g, &w2),
            Err(Error::CacheInvalid(_))
        ));
        // corrupt coefficient
        let bad = text.replace("1*v^(1)", "1*v^(oops)");
        assert!(matches!(
            KLCache::<i64>::deserialize(&bad, &g, &w),
            Err(Error::CacheInvalid(_))
        ));
        // unsorted lines
        let mut lines: Vec<&str> = text.lines().collect();
        if lines.len() > 3 {
            lines.swap(1, 2);
            let swapped = lines.join("\n");
            assert!(matches!(
                KLCache::<i64>::deserialize(&swapped, &g, &w),
                Err(Error::CacheInvalid(_))
            ));
        }
    }
}
