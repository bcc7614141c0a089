//! Exact arithmetic in Z[theta], theta = 2cos(pi/L).
//!
//! The reflection representation of a finite Coxeter group has Cartan-like
//! entries 2cos(pi/m(s,t)). With L the lcm of all bond orders, every such
//! entry is an integer polynomial in theta = 2cos(pi/L), so root coordinates
//! live in the order Z[theta] of the real cyclotomic field. Elements are
//! residues modulo the (monic, integral) minimal polynomial of theta, which
//! makes equality of the underlying real numbers decidable by coordinate
//! comparison.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Cyclotomic polynomial Phi_n with integer coefficients, low degree first.
fn cyclotomic(n: usize) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1 divided exactly by the product of Phi_d over proper divisors d.
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = -BigInt::one();
    num[n] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic(d));
        }
    }
    num
}

/// Exact division of integer polynomials (panics on nonzero remainder).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quo = vec![BigInt::zero(); num.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quo[i - dd] = c.clone();
        for (j, d) in den.iter().enumerate() {
            let idx = i - dd + j;
            rem[idx] -= &c * d;
        }
    }
    assert!(rem.iter().all(Zero::is_zero), "division not exact");
    quo
}

/// Minimal polynomial of 2cos(pi/l) over Z, monic, low degree first.
///
/// Uses the palindromic factorization Phi_{2l}(x) = x^d psi(x + 1/x) with
/// d = phi(2l)/2; psi is recovered by peeling powers of x^(d-k) (x^2+1)^k.
fn real_minpoly(l: usize) -> Vec<BigInt> {
    assert!(l >= 2);
    let phi = cyclotomic(2 * l);
    let deg = phi.len() - 1;
    debug_assert_eq!(deg % 2, 0);
    let d = deg / 2;
    let mut rem = phi;
    let mut psi = vec![BigInt::zero(); d + 1];
    for k in (0..=d).rev() {
        let c = rem[d + k].clone();
        psi[k] = c.clone();
        if c.is_zero() {
            continue;
        }
        // subtract c * x^(d-k) * (x^2+1)^k
        let mut binom = BigInt::one();
        for j in 0..=k {
            // coefficient of x^(2j) in (x^2+1)^k is C(k, j)
            rem[d - k + 2 * j] -= &c * &binom;
            binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
        }
    }
    assert!(rem.iter().all(Zero::is_zero), "palindrome extraction failed");
    psi
}

/// The quotient ring Z[x]/(psi), psi the minimal polynomial of 2cos(pi/L).
#[derive(Debug)]
pub struct CycloRing {
    l: usize,
    dim: usize,
    minpoly: Vec<BigInt>,
}

/// Residue in the power basis 1, theta, ..., theta^(dim-1).
pub type CycloElem = Vec<BigInt>;

impl CycloRing {
    pub fn new(l: usize) -> Self {
        let minpoly = real_minpoly(l.max(2));
        let dim = minpoly.len() - 1;
        CycloRing { l: l.max(2), dim, minpoly }
    }

    pub fn level(&self) -> usize {
        self.l
    }

    pub fn zero(&self) -> CycloElem {
        vec![BigInt::zero(); self.dim]
    }

    pub fn from_int(&self, n: i64) -> CycloElem {
        let mut e = self.zero();
        if self.dim > 0 {
            e[0] = BigInt::from(n);
        } else {
            assert_eq!(n, 0, "nontrivial constant in a zero-dimensional ring");
        }
        e
    }

    pub fn is_zero(&self, a: &CycloElem) -> bool {
        a.iter().all(Zero::is_zero)
    }

    pub fn add(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &CycloElem) -> CycloElem {
        a.iter().map(|x| -x).collect()
    }

    pub fn mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        if self.dim == 0 {
            return vec![];
        }
        let mut prod = vec![BigInt::zero(); 2 * self.dim - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        // reduce modulo the monic minimal polynomial
        for i in (self.dim..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[i], BigInt::zero());
            if c.is_zero() {
                continue;
            }
            for (j, m) in self.minpoly.iter().enumerate().take(self.dim) {
                prod[i - self.dim + j] -= &c * m;
            }
        }
        prod.truncate(self.dim);
        prod
    }

    /// theta^k scaled Chebyshev-style: D_k with D_k(2cos t) = 2cos(kt),
    /// evaluated at theta. `two_cos(m)` returns the exact value 2cos(pi/m)
    /// for any m dividing L.
    pub fn two_cos(&self, m: usize) -> CycloElem {
        assert!(m >= 1 && self.l % m == 0, "bond order {m} does not divide level {}", self.l);
        let k = self.l / m;
        let theta = {
            let mut t = self.zero();
            if self.dim >= 2 {
                t[1] = BigInt::one();
            } else {
                // dim 1: theta is a rational integer, theta = -minpoly[0]
                t[0] = -self.minpoly[0].clone();
            }
            t
        };
        let mut prev = self.from_int(2); // D_0
        let mut cur = theta.clone(); // D_1
        if k == 0 {
            return prev;
        }
        for _ in 1..k {
            let next = self.sub(&self.mul(&theta, &cur), &prev);
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Floating image of a residue, for sanity checks only.
    pub fn approx(&self, a: &CycloElem) -> f64 {
        let theta = 2.0 * (std::f64::consts::PI / self.l as f64).cos();
        let mut acc = 0.0;
        for c in a.iter().rev() {
            // BigInt -> f64 via string is fine at test scale
            let cf: f64 = c.to_string().parse().unwrap();
            acc = acc * theta + cf;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic(2), ints(&[1, 1]));
        assert_eq!(cyclotomic(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn minimal_polynomials_of_two_cos() {
        // 2cos(pi/2) = 0, 2cos(pi/3) = 1, 2cos(pi/4) = sqrt2,
        // 2cos(pi/5) = golden, 2cos(pi/6) = sqrt3
        assert_eq!(real_minpoly(2), ints(&[0, 1]));
        assert_eq!(real_minpoly(3), ints(&[-1, 1]));
        assert_eq!(real_minpoly(4), ints(&[-2, 0, 1]));
        assert_eq!(real_minpoly(5), ints(&[-1, -1, 1]));
        assert_eq!(real_minpoly(6), ints(&[-3, 0, 1]));
        // degree phi(60)/2 = 8 for the H3/H4 level
        assert_eq!(real_minpoly(30).len() - 1, 8);
    }

    #[test]
    fn two_cos_values_match_floats() {
        let ring = CycloRing::new(30);
        for m in [2usize, 3, 5, 6, 10, 15, 30] {
            let e = ring.two_cos(m);
            let want = 2.0 * (std::f64::consts::PI / m as f64).cos();
            assert!((ring.approx(&e) - want).abs() < 1e-9, "m = {m}");
        }
    }

    #[test]
    fn ring_axioms_spot_check() {
        let ring = CycloRing::new(5);
        let a = ring.two_cos(5);
        let one = ring.from_int(1);
        // golden ratio: a^2 = a + 1
        assert_eq!(ring.mul(&a, &a), ring.add(&a, &one));
        let b = ring.sub(&a, &one);
        assert_eq!(ring.mul(&a, &b), ring.mul(&b, &a));
        assert!(ring.is_zero(&ring.sub(&a, &a)));
    }
}
