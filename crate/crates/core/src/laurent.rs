//! Exact arithmetic in the group algebra Z[Gamma], Gamma = Z^r ordered
//! lexicographically.
//!
//! Elements are finite sums of terms `c * v^gamma` with integer coefficients
//! and exponent vectors gamma of a fixed rank r. The total order on exponents
//! is lexicographic, which makes Z^r a totally ordered abelian group; r = 1
//! recovers ordinary Laurent polynomials in one variable v.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient scalar for all exact arithmetic in the library.
///
/// Implemented by `i64`, `i128` and `num_bigint::BigInt`; the crate-root
/// aliases fix `BigInt` so coefficient growth can never overflow.
pub trait Coeff:
    Signed + Clone + Eq + fmt::Debug + fmt::Display + From<i32> + Send + Sync + 'static
{
}
impl<T> Coeff for T where
    T: Signed + Clone + Eq + fmt::Debug + fmt::Display + From<i32> + Send + Sync + 'static
{
}

/// Exponent vector of a monomial v^gamma, compared lexicographically
/// (leftmost component dominates).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaVector(pub Vec<i32>);

impl GammaVector {
    pub fn zero(rank: usize) -> Self {
        GammaVector(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Strictly positive in the lexicographic order.
    pub fn is_positive(&self) -> bool {
        match self.0.iter().find(|&&c| c != 0) {
            Some(&c) => c > 0,
            None => false,
        }
    }

    pub fn neg(&self) -> Self {
        GammaVector(self.0.iter().map(|&c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank(), other.rank());
        GammaVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Debug for GammaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v^{}", self)
    }
}

impl fmt::Display for GammaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

/// Element of Z[Z^r]: a finite map from exponent vectors to nonzero
/// coefficients, stored in strictly decreasing lexicographic exponent order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentElement<C: Coeff> {
    rank: usize,
    /// Terms in strictly decreasing exponent order; no zero coefficients.
    terms: Vec<(GammaVector, C)>,
}

impl<C: Coeff> LaurentElement<C> {
    pub fn zero(rank: usize) -> Self {
        LaurentElement { rank, terms: Vec::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(GammaVector::zero(rank), C::one())
    }

    /// c * v^gamma.
    pub fn monomial(gamma: GammaVector, c: C) -> Self {
        let rank = gamma.rank();
        if c.is_zero() {
            return Self::zero(rank);
        }
        LaurentElement { rank, terms: vec![(gamma, c)] }
    }

    /// v^gamma for a rank-1 exponent; convenience for tests and weights.
    pub fn v_pow(e: i32) -> Self {
        Self::monomial(GammaVector(vec![e]), C::one())
    }

    /// Builds an element from arbitrary (exponent, coefficient) pairs,
    /// combining duplicates and dropping zeros.
    pub fn from_terms(rank: usize, pairs: impl IntoIterator<Item = (GammaVector, C)>) -> Self {
        let mut out = Self::zero(rank);
        for (g, c) in pairs {
            assert_eq!(g.rank(), rank, "exponent rank mismatch");
            out.add_term(g, c);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in strictly decreasing exponent order.
    pub fn terms(&self) -> &[(GammaVector, C)] {
        &self.terms
    }

    pub fn coeff(&self, gamma: &GammaVector) -> C {
        match self.terms.binary_search_by(|(g, _)| gamma.cmp(g)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => C::zero(),
        }
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&GammaVector::zero(self.rank))
    }

    /// True if every exponent is lexicographically > 0 (membership in A_{>0};
    /// zero belongs vacuously).
    pub fn is_strictly_positive(&self) -> bool {
        self.terms.iter().all(|(g, _)| g.is_positive())
    }

    fn check_rank(&self, other: &Self) {
        assert_eq!(
            self.rank, other.rank,
            "gamma rank mismatch: {} vs {}",
            self.rank, other.rank
        );
    }

    /// Adds a single term in place, keeping canonical form.
    pub fn add_term(&mut self, gamma: GammaVector, c: C) {
        if c.is_zero() {
            return;
        }
        assert_eq!(gamma.rank(), self.rank, "exponent rank mismatch");
        match self.terms.binary_search_by(|(g, _)| gamma.cmp(g)) {
            Ok(i) => {
                let sum = self.terms[i].1.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = sum;
                }
            }
            Err(i) => self.terms.insert(i, (gamma, c)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_rank(other);
        // Merge two descending term lists.
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.clone() + other.terms[j].1.clone();
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        LaurentElement { rank: self.rank, terms: out }
    }

    pub fn neg(&self) -> Self {
        LaurentElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_rank(other);
        let mut out = Self::zero(self.rank);
        for (g, c) in &self.terms {
            for (h, d) in &other.terms {
                out.add_term(g.add(h), c.clone() * d.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.rank);
        }
        LaurentElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(g, d)| (g.clone(), d.clone() * c.clone())).collect(),
        }
    }

    /// Multiplies by the monomial v^gamma.
    pub fn mul_monomial(&self, gamma: &GammaVector, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.rank);
        }
        LaurentElement {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(g, d)| (g.add(gamma), d.clone() * c.clone()))
                .collect(),
        }
    }

    /// The bar involution: v^gamma -> v^(-gamma), extended Z-linearly.
    pub fn bar(&self) -> Self {
        let mut terms: Vec<(GammaVector, C)> =
            self.terms.iter().map(|(g, c)| (g.neg(), c.clone())).collect();
        terms.reverse(); // negation reverses the lexicographic order
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        LaurentElement { rank: self.rank, terms }
    }

    /// True if a + bar(a) = 0.
    pub fn is_skew(&self) -> bool {
        self.add(&self.bar()).is_zero()
    }

    /// Splits into (strictly negative part, constant part, strictly positive
    /// part); the three pieces sum to the element.
    pub fn positive_part_split(&self) -> (Self, Self, Self) {
        let mut neg = Self::zero(self.rank);
        let mut cst = Self::zero(self.rank);
        let mut pos = Self::zero(self.rank);
        for (g, c) in self.terms.iter().rev() {
            let target = if g.is_positive() {
                &mut pos
            } else if g.is_zero() {
                &mut cst
            } else {
                &mut neg
            };
            target.terms.insert(0, (g.clone(), c.clone()));
        }
        (neg, cst, pos)
    }

    /// For skew a, returns the unique a_+ in A_{>0} with a_+ - bar(a_+) = a:
    /// the strictly positive part of a.
    pub fn skew_positive_preimage(&self) -> Result<Self> {
        if !self.is_skew() {
            return Err(Error::NotSkew);
        }
        let (_, _, pos) = self.positive_part_split();
        Ok(pos)
    }

    /// The unique bar-stable element congruent to `self` modulo A_{>0}:
    /// keep exponents <= 0 and mirror them onto the positive side.
    pub fn bar_stable_completion(&self) -> Self {
        let (neg, cst, _) = self.positive_part_split();
        let nonpos = neg.add(&cst);
        nonpos.add(&neg.bar())
    }
}

impl<C: Coeff> fmt::Debug for LaurentElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Bit-exact textual form shared by cache files and CLI output:
/// `1*v^(2) - 3*v^(0,-1)`, terms in strictly decreasing exponent order,
/// zero printed as `0`.
impl<C: Coeff> fmt::Display for LaurentElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{}*v^{}", c.abs(), g)?;
        }
        Ok(())
    }
}

/// Parses the textual grammar produced by `Display`, validating the expected
/// gamma rank and canonical term order.
pub fn parse_laurent<C: Coeff>(input: &str, rank: usize) -> Result<LaurentElement<C>> {
    let s = input.trim();
    if s == "0" {
        return Ok(LaurentElement::zero(rank));
    }
    let err = |msg: &str| Error::Parse(format!("{msg} in laurent `{input}`"));
    let mut terms: Vec<(GammaVector, C)> = Vec::new();
    let mut rest = s;
    let mut negative = if let Some(r) = rest.strip_prefix('-') {
        rest = r;
        true
    } else {
        false
    };
    loop {
        let star = rest.find("*v^(").ok_or_else(|| err("missing `*v^(`"))?;
        let digits = &rest[..star];
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("coefficient is not an unsigned integer"));
        }
        let mut c = C::zero();
        for b in digits.bytes() {
            c = c * C::from(10) + C::from((b - b'0') as i32);
        }
        if c.is_zero() {
            return Err(err("zero coefficient"));
        }
        if negative {
            c = -c;
        }
        rest = &rest[star + 4..];
        let close = rest.find(')').ok_or_else(|| err("missing `)`"))?;
        let mut exps = Vec::new();
        for part in rest[..close].split(',') {
            let e: i32 = part.parse().map_err(|_| err("bad exponent"))?;
            exps.push(e);
        }
        if exps.len() != rank {
            return Err(Error::RankMismatch(exps.len(), rank));
        }
        let gamma = GammaVector(exps);
        if let Some((prev, _)) = terms.last() {
            if *prev <= gamma {
                return Err(err("terms not in strictly decreasing exponent order"));
            }
        }
        terms.push((gamma, c));
        rest = &rest[close + 1..];
        if rest.is_empty() {
            break;
        }
        if let Some(r) = rest.strip_prefix(" + ") {
            negative = false;
            rest = r;
        } else if let Some(r) = rest.strip_prefix(" - ") {
            negative = true;
            rest = r;
        } else {
            return Err(err("bad term separator"));
        }
    }
    Ok(LaurentElement { rank, terms })
}
