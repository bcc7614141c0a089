//! Small shared utilities: a flat bit matrix and content hashing.

use sha2::{Digest, Sha256};

/// First 16 hex digits of the SHA-256 of `bytes`.
pub fn sha_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Dense row-major bit matrix.
#[derive(Clone)]
pub struct BitMatrix {
    cols_words: usize,
    bits: Vec<u64>,
    rows: usize,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let cols_words = cols.div_ceil(64);
        BitMatrix { cols_words, bits: vec![0; rows * cols_words], rows }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.cols_words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.cols_words + c / 64] |= 1 << (c % 64);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.cols_words..(r + 1) * self.cols_words]
    }

    pub fn replace_row(&mut self, r: usize, row: Vec<u64>) {
        assert_eq!(row.len(), self.cols_words);
        self.bits[r * self.cols_words..(r + 1) * self.cols_words].copy_from_slice(&row);
    }

    #[inline]
    pub fn set_in_row(row: &mut [u64], c: usize) {
        row[c / 64] |= 1 << (c % 64);
    }

    /// r |= other row, returns true if r changed.
    pub fn or_row_into(&mut self, dst: usize, src: usize) -> bool {
        let (a, b) = (dst * self.cols_words, src * self.cols_words);
        let mut changed = false;
        for k in 0..self.cols_words {
            let old = self.bits[a + k];
            let new = old | self.bits[b + k];
            if new != old {
                self.bits[a + k] = new;
                changed = true;
            }
        }
        changed
    }
}

/// Disjoint-set forest with minimum-index representatives.
pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    pub fn find(&mut self, i: u32) -> u32 {
        let mut root = i;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        // path compression
        let mut cur = i;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    /// Keeps the smaller index as the class representative, so the resulting
    /// partition does not depend on the union order.
    pub fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi as usize] = lo;
        }
    }

    /// Classes sorted by minimal element, members ascending.
    pub fn classes(&mut self) -> Vec<Vec<u32>> {
        let n = self.parent.len();
        let mut by_root: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
        for i in 0..n as u32 {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        by_root.into_values().collect()
    }
}
