//! Dense linear algebra over GF(2).

use alloc::vec::Vec;

/// A bit vector packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: alloc::vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the inner product.
    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

/// Basis of `{x : row · x = 0 for every row}`, one vector per free column.
///
/// Rows are reduced to row echelon form; each free column `f` contributes the
/// solution with `x_f = 1`, every other free variable 0.
pub fn nullspace(rows: &[BitVec], columns: usize) -> Vec<BitVec> {
    let mut m: Vec<BitVec> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..columns {
        let Some(p) = (r..m.len()).find(|&i| m[i].get(col)) else {
            continue;
        };
        m.swap(r, p);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut is_pivot = alloc::vec![false; columns];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..columns).filter(|&c| !is_pivot[c]) {
        let mut x = BitVec::zeros(columns);
        x.set(free, true);
        for (i, &p) in pivots.iter().enumerate() {
            if m[i].get(free) {
                x.set(p, true);
            }
        }
        basis.push(x);
    }
    basis
}

/// Rank of a set of vectors.
pub fn rank(rows: &[BitVec]) -> usize {
    let mut m: Vec<BitVec> = rows.to_vec();
    let mut r = 0;
    let columns = m.first().map_or(0, BitVec::len);
    let mut col = 0;
    while r < m.len() && col < columns {
        if let Some(p) = (r..m.len()).find(|&i| m[i].get(col)) {
            m.swap(r, p);
            let pivot_row = m[r].clone();
            for row in m.iter_mut().skip(r + 1) {
                if row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            r += 1;
        }
        col += 1;
    }
    r
}

/// Is `v` in the span of `rows`?
pub fn in_span(rows: &[BitVec], v: &BitVec) -> bool {
    let mut with = rows.to_vec();
    with.push(v.clone());
    rank(rows) == rank(&with)
}

/// Lazily walks all `2^n` combinations of a basis in binary-counter order.
#[derive(Clone, Debug)]
pub struct Span<'a> {
    basis: &'a [BitVec],
    width: usize,
    counter: Vec<bool>,
    done: bool,
}

impl<'a> Span<'a> {
    pub fn new(basis: &'a [BitVec], width: usize) -> Self {
        Span {
            basis,
            width,
            counter: alloc::vec![false; basis.len()],
            done: false,
        }
    }
}

impl Iterator for Span<'_> {
    type Item = BitVec;

    fn next(&mut self) -> Option<BitVec> {
        if self.done {
            return None;
        }
        let mut v = BitVec::zeros(self.width);
        for (b, &on) in self.basis.iter().zip(&self.counter) {
            if on {
                v.xor_assign(b);
            }
        }
        // increment; the first coordinate is least significant
        let mut carry = true;
        for bit in self.counter.iter_mut() {
            if !carry {
                break;
            }
            carry = *bit;
            *bit = !*bit;
        }
        if carry {
            self.done = true;
        }
        Some(v)
    }
}
