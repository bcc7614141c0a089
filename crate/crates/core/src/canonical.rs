//! Generic canonical-basis engine for modules with a bar involution.
//!
//! Input: a free module over Z[Gamma] with basis indexed by a finite poset,
//! together with the expansion of the bar image of every basis element. The
//! bar images must be unitriangular (bar(m_x) = m_x plus terms strictly
//! below x), and bar must be a semilinear involution. Under those hypotheses
//! the skew part peels off one maximal index at a time, which yields for each
//! x the unique bar-invariant element congruent to m_x modulo strictly
//! positive coefficients. Instantiated by the Hecke algebra (T-basis) and by
//! the parabolic quotient modules of the star machinery.

use crate::error::{Error, Result};
use crate::laurent::{Coeff, LaurentElement};
use crate::util::BitMatrix;

/// Sparse module element: (index, coefficient) pairs, ascending by index,
/// no zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleElement<C: Coeff> {
    entries: Vec<(usize, LaurentElement<C>)>,
}

impl<C: Coeff> ModuleElement<C> {
    pub fn zero() -> Self {
        ModuleElement { entries: Vec::new() }
    }

    pub fn basis(i: usize, rank: usize) -> Self {
        ModuleElement { entries: vec![(i, LaurentElement::one(rank))] }
    }

    pub fn from_entries(pairs: impl IntoIterator<Item = (usize, LaurentElement<C>)>) -> Self {
        let mut out = Self::zero();
        for (i, c) in pairs {
            out.add_entry(i, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, LaurentElement<C>)] {
        &self.entries
    }

    pub fn coeff(&self, i: usize, rank: usize) -> LaurentElement<C> {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => LaurentElement::zero(rank),
        }
    }

    /// Highest occurring index with its coefficient.
    pub fn top(&self) -> Option<&(usize, LaurentElement<C>)> {
        self.entries.last()
    }

    pub fn add_entry(&mut self, i: usize, c: LaurentElement<C>) {
        if c.is_zero() {
            return;
        }
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => {
                let sum = self.entries[k].1.add(&c);
                if sum.is_zero() {
                    self.entries.remove(k);
                } else {
                    self.entries[k].1 = sum;
                }
            }
            Err(k) => self.entries.insert(k, (i, c)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in &other.entries {
            out.add_entry(*i, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in &other.entries {
            out.add_entry(*i, c.neg());
        }
        out
    }

    pub fn scale(&self, a: &LaurentElement<C>) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        ModuleElement {
            entries: self.entries.iter().map(|(i, c)| (*i, c.mul(a))).collect(),
        }
    }

    /// Applies the coefficient bar involution entrywise (not the module bar).
    pub fn bar_coeffs(&self) -> Self {
        ModuleElement {
            entries: self.entries.iter().map(|(i, c)| (*i, c.bar())).collect(),
        }
    }
}

impl<C: Coeff> std::fmt::Debug for ModuleElement<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (k, (i, c)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*m{i}")?;
        }
        Ok(())
    }
}

/// A finite poset (as strict down-set bitsets over internal indices 0..n,
/// where the index order is a linear extension) plus the bar expansion of
/// every basis element.
pub struct BarModuleDatum<C: Coeff> {
    rank: usize,
    below: BitMatrix,
    bar_basis: Vec<ModuleElement<C>>,
}

impl<C: Coeff> BarModuleDatum<C> {
    /// Validates unitriangularity of the bar data against the poset and that
    /// bar squares to the identity on the basis.
    pub fn new(rank: usize, below: BitMatrix, bar_basis: Vec<ModuleElement<C>>) -> Result<Self> {
        let n = bar_basis.len();
        assert_eq!(below.rows(), n);
        for (i, b) in bar_basis.iter().enumerate() {
            // bar(m_i) - m_i supported strictly below i
            let mut diff = b.clone();
            diff.add_entry(i, LaurentElement::one(rank).neg());
            for (j, _) in diff.entries() {
                if *j >= i || !below.get(i, *j) {
                    return Err(Error::BarDataCorrupt(i));
                }
            }
        }
        let datum = BarModuleDatum { rank, below, bar_basis };
        for i in 0..n {
            if datum.bar(&datum.bar(&ModuleElement::basis(i, rank)))
                != ModuleElement::basis(i, rank)
            {
                return Err(Error::BarDataCorrupt(i));
            }
        }
        Ok(datum)
    }

    pub fn len(&self) -> usize {
        self.bar_basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bar_basis.is_empty()
    }

    pub fn gamma_rank(&self) -> usize {
        self.rank
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.below.get(j, i)
    }

    pub fn bar_of_basis(&self, i: usize) -> &ModuleElement<C> {
        &self.bar_basis[i]
    }

    /// Semilinear extension of bar: coefficients are barred and basis
    /// elements replaced by their stored bar expansions.
    pub fn bar(&self, m: &ModuleElement<C>) -> ModuleElement<C> {
        let mut out = ModuleElement::zero();
        for (i, c) in m.entries() {
            out = out.add(&self.bar_basis[*i].scale(&c.bar()));
        }
        out
    }

    /// For skew m (m + bar(m) = 0), the unique preimage in M_{>0} under
    /// mu -> mu - bar(mu), found by peeling maximal support indices.
    pub fn skew_preimage(&self, m: &ModuleElement<C>) -> Result<ModuleElement<C>> {
        if !m.add(&self.bar(m)).is_zero() {
            return Err(Error::NotSkew);
        }
        let mut rest = m.clone();
        let mut mu = ModuleElement::zero();
        while let Some((i, a)) = rest.top().cloned() {
            // the top coefficient of a skew element is itself skew
            let a_plus = a.skew_positive_preimage()?;
            mu.add_entry(i, a_plus.clone());
            // rest -= a_plus * m_i - bar(a_plus) * bar(m_i)
            rest.add_entry(i, a_plus.neg());
            rest = rest.add(&self.bar_basis[i].scale(&a_plus.bar()));
            if let Some((j, _)) = rest.top() {
                debug_assert!(*j < i, "peeling must strictly descend");
            }
        }
        Ok(mu)
    }

    /// The unique bar-invariant element congruent to m modulo M_{>0}.
    pub fn bar_invariant_completion(&self, m: &ModuleElement<C>) -> Result<ModuleElement<C>> {
        let skew = self.bar(m).sub(m);
        let mu = self.skew_preimage(&skew)?;
        Ok(m.add(&mu))
    }

    /// Canonical basis: the completion of every basis element, in index
    /// order. Each output is unitriangular with strictly positive lower
    /// coefficients.
    pub fn canonical_basis(&self) -> Result<Vec<ModuleElement<C>>> {
        (0..self.len())
            .map(|i| {
                let m = self.bar_invariant_completion(&ModuleElement::basis(i, self.rank))?;
                debug_assert!(self.is_unitriangular_positive(i, &m));
                Ok(m)
            })
            .collect()
    }

    fn is_unitriangular_positive(&self, i: usize, m: &ModuleElement<C>) -> bool {
        m.entries().iter().all(|(j, c)| {
            if *j == i {
                *c == LaurentElement::one(self.rank)
            } else {
                self.below.get(i, *j) && c.is_strictly_positive()
            }
        })
    }

    /// Restriction to a down-closed subset of indices (ascending). Errors if
    /// the subset is not down-closed.
    pub fn restrict(&self, keep: &[usize]) -> Result<BarModuleDatum<C>> {
        let mut pos = vec![usize::MAX; self.len()];
        for (new, &old) in keep.iter().enumerate() {
            pos[old] = new;
        }
        for &old in keep {
            for j in 0..old {
                if self.below.get(old, j) && pos[j] == usize::MAX {
                    return Err(Error::NotDownClosed);
                }
            }
        }
        let mut below = BitMatrix::new(keep.len(), keep.len());
        for (ni, &oi) in keep.iter().enumerate() {
            for (nj, &oj) in keep.iter().enumerate() {
                if self.below.get(oi, oj) {
                    below.set(ni, nj);
                }
            }
        }
        let bar_basis = keep
            .iter()
            .map(|&oi| {
                ModuleElement::from_entries(
                    self.bar_basis[oi]
                        .entries()
                        .iter()
                        .map(|(j, c)| (pos[*j], c.clone())),
                )
            })
            .collect();
        BarModuleDatum::new(self.rank, below, bar_basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type L = LaurentElement<i64>;
    type M = ModuleElement<i64>;

    fn v(e: i32) -> L {
        L::v_pow(e)
    }

    /// Chain poset 0 < 1 < ... < n-1 with trivial bar (bar(m_i) = m_i).
    fn trivial_datum(n: usize) -> BarModuleDatum<i64> {
        let mut below = BitMatrix::new(n, n);
        for i in 0..n {
            for j in 0..i {
                below.set(i, j);
            }
        }
        let basis = (0..n).map(|i| M::basis(i, 1)).collect();
        BarModuleDatum::new(1, below, basis).unwrap()
    }

    /// Conjugates the trivial bar by a unitriangular matrix U with entries
    /// below the diagonal; returns the datum plus U's columns (which are the
    /// canonical basis when all entries of U lie in A_{>0}).
    fn conjugated_datum(u_cols: Vec<M>) -> BarModuleDatum<i64> {
        let n = u_cols.len();
        let mut below = BitMatrix::new(n, n);
        for i in 0..n {
            for j in 0..i {
                below.set(i, j);
            }
        }
        // U m_i = u_cols[i]; bar0 barres coefficients; U^{-1} by forward
        // substitution. bar(m_i) = U bar0 U^{-1} m_i.
        let apply_u = |m: &M| -> M {
            let mut out = M::zero();
            for (i, c) in m.entries() {
                out = out.add(&u_cols[*i].scale(c));
            }
            out
        };
        let apply_u_inv = |m: &M| -> M {
            let mut rest = m.clone();
            let mut out = M::zero();
            while let Some((i, c)) = rest.top().cloned() {
                out.add_entry(i, c.clone());
                rest = rest.sub(&u_cols[i].scale(&c));
            }
            out
        };
        let bar_basis = (0..n)
            .map(|i| apply_u(&apply_u_inv(&M::basis(i, 1)).bar_coeffs()))
            .collect();
        BarModuleDatum::new(1, below, bar_basis).unwrap()
    }

    /// Independent route: solve the bar-fixedness system coefficient by
    /// coefficient, descending, using only the bar matrix.
    fn dense_completion(d: &BarModuleDatum<i64>, m: &M) -> M {
        let n = d.len();
        let rank = d.gamma_rank();
        let mut coeffs: Vec<L> = (0..n).map(|i| m.coeff(i, rank)).collect();
        for z in (0..n).rev() {
            // c_z - bar(c_z) = sum_{y > z} bar(c_y) * B[y][z]
            let mut known = L::zero(rank);
            for y in z + 1..n {
                let b = d.bar_of_basis(y).coeff(z, rank);
                if !b.is_zero() {
                    known = known.add(&coeffs[y].bar().mul(&b));
                }
            }
            // adjust c_z by the strictly positive solution of
            // (c - bar c) = known - (c0 - bar c0)
            let delta = known.sub(&coeffs[z].sub(&coeffs[z].bar()));
            let add = delta.skew_positive_preimage().unwrap();
            coeffs[z] = coeffs[z].add(&add);
        }
        M::from_entries(coeffs.into_iter().enumerate())
    }

    #[test]
    fn trivial_bar_fixes_everything() {
        let d = trivial_datum(3);
        let m = M::from_entries([(0, v(1)), (2, v(-2))]);
        assert_eq!(d.bar(&M::basis(0, 1)), M::basis(0, 1));
        assert_eq!(d.bar(&M::zero()), M::zero());
        assert_eq!(d.bar(&d.bar(&m)), m);
        // with trivial bar, completion is the scalar completion entrywise
        let c = d.bar_invariant_completion(&m).unwrap();
        assert_eq!(c.coeff(0, 1), v(1).bar_stable_completion());
        assert_eq!(c.coeff(2, 1), v(-2).bar_stable_completion());
    }

    #[test]
    fn skew_preimage_minimal_case() {
        let d = trivial_datum(2);
        let m = M::from_entries([(0, v(1).sub(&v(-1)))]);
        assert_eq!(d.skew_preimage(&m).unwrap(), M::from_entries([(0, v(1))]));
        assert_eq!(d.skew_preimage(&M::zero()).unwrap(), M::zero());
    }

    #[test]
    fn skew_preimage_rejects_non_skew() {
        let d = trivial_datum(2);
        let m = M::from_entries([(1, v(3))]);
        assert!(matches!(d.skew_preimage(&m), Err(Error::NotSkew)));
    }

    #[test]
    fn p3_violation_is_a_hard_error() {
        let mut below = BitMatrix::new(2, 2);
        below.set(1, 0);
        // bar(m_0) = m_0 + m_1 points upward: invalid
        let bad = vec![M::from_entries([(0, L::one(1)), (1, v(1))]), M::basis(1, 1)];
        assert!(matches!(
            BarModuleDatum::new(1, below, bad),
            Err(Error::BarDataCorrupt(0))
        ));
    }

    #[test]
    fn involution_violation_is_a_hard_error() {
        let mut below = BitMatrix::new(2, 2);
        below.set(1, 0);
        // bar(m_1) = m_1 + m_0 is triangular but not involutive over bar
        // coefficients (bar(bar m_1) = m_1 + 2 m_0).
        let bad = vec![M::basis(0, 1), M::from_entries([(0, L::one(1)), (1, L::one(1))])];
        assert!(matches!(
            BarModuleDatum::new(1, below, bad),
            Err(Error::BarDataCorrupt(1))
        ));
    }

    #[test]
    fn singleton_poset_canonical_basis() {
        let d = trivial_datum(1);
        assert_eq!(d.canonical_basis().unwrap(), vec![M::basis(0, 1)]);
    }

    #[test]
    fn conjugation_oracle_known_canonical_basis() {
        // U unitriangular with strictly positive entries: canonical basis of
        // the conjugated datum is exactly U's columns.
        let u = vec![
            M::basis(0, 1),
            M::from_entries([(1, L::one(1)), (0, v(1))]),
            M::from_entries([(2, L::one(1)), (1, v(2)), (0, v(1).add(&v(3)))]),
            M::from_entries([(3, L::one(1)), (0, v(2).scale(&4))]),
        ];
        let d = conjugated_datum(u.clone());
        let cb = d.canonical_basis().unwrap();
        assert_eq!(cb, u);
        // dense solve agrees
        for i in 0..d.len() {
            assert_eq!(dense_completion(&d, &M::basis(i, 1)), cb[i]);
        }
        // uniqueness: completing an already bar-invariant element returns it
        for c in &cb {
            assert_eq!(&d.bar_invariant_completion(c).unwrap(), c);
        }
    }

    #[test]
    fn round_trips_between_skew_and_positive() {
        let u = vec![
            M::basis(0, 1),
            M::from_entries([(1, L::one(1)), (0, v(1).scale(&2))]),
            M::from_entries([(2, L::one(1)), (1, v(1))]),
        ];
        let d = conjugated_datum(u);
        let mu = M::from_entries([(0, v(2)), (2, v(1).scale(&3).add(&v(4)))]);
        let skew = mu.sub(&d.bar(&mu));
        assert_eq!(d.skew_preimage(&skew).unwrap(), mu);
        // other direction: preimage of a skew element maps back to it
        let m = M::from_entries([(1, v(1)), (2, v(-1))]);
        let s = m.sub(&d.bar(&m));
        let p = d.skew_preimage(&s).unwrap();
        assert_eq!(p.sub(&d.bar(&p)), s);
    }

    #[test]
    fn restriction_to_down_closed_subset_commutes() {
        let u = vec![
            M::basis(0, 1),
            M::from_entries([(1, L::one(1)), (0, v(1))]),
            M::from_entries([(2, L::one(1)), (0, v(2))]),
        ];
        let d = conjugated_datum(u);
        let r = d.restrict(&[0, 1]).unwrap();
        let full = d.canonical_basis().unwrap();
        let sub = r.canonical_basis().unwrap();
        for i in 0..2 {
            assert_eq!(sub[i].entries().len(), full[i].entries().len());
            for ((ja, ca), (jb, cb)) in sub[i].entries().iter().zip(full[i].entries()) {
                assert_eq!(ja, jb);
                assert_eq!(ca, cb);
            }
        }
        // chain poset: {0, 2} is not down-closed
        assert!(matches!(d.restrict(&[0, 2]), Err(Error::NotDownClosed)));
    }
}
