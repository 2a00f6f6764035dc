//! Bit-packed vectors and matrices over F2.

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const W: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(W)
}

/// Vector in F2^len. Bits past `len` in the last limb are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: usize,
    limbs: Vec<u64>,
}

impl std::fmt::Debug for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Word[{}]{:?}", self.len, self.support())
    }
}

impl Word {
    pub fn zeros(len: usize) -> Word {
        Word { len, limbs: vec![0; words_for(len)] }
    }

    /// Unit vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Word {
        let mut w = Word::zeros(len);
        w.set(i, true);
        w
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Result<Word> {
        let mut w = Word::zeros(len);
        for &i in indices {
            if i >= len {
                return Err(Error::LengthMismatch { expected: len, got: i + 1 });
            }
            w.set(i, true);
        }
        Ok(w)
    }

    pub fn from_bits(bits: &[bool]) -> Word {
        let mut w = Word::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            w.set(i, b);
        }
        w
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Word {
        let mut w = Word { len, limbs: (0..words_for(len)).map(|_| rng.gen()).collect() };
        w.mask_tail();
        w
    }

    /// Uniform word of the given weight.
    pub fn random_weight<R: Rng + ?Sized>(len: usize, weight: usize, rng: &mut R) -> Word {
        let idx = rand::seq::index::sample(rng, len, weight.min(len));
        let mut w = Word::zeros(len);
        for i in idx {
            w.set(i, true);
        }
        w
    }

    fn mask_tail(&mut self) {
        let rem = self.len % W;
        if rem != 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.limbs[i / W] >> (i % W)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % W);
        if v {
            self.limbs[i / W] |= mask;
        } else {
            self.limbs[i / W] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.limbs[i / W] ^= 1u64 << (i % W);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// The index set `I_w` of set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (k, &limb) in self.limbs.iter().enumerate() {
            let mut l = limb;
            while l != 0 {
                out.push(k * W + l.trailing_zeros() as usize);
                l &= l - 1;
            }
        }
        out
    }

    /// Lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.limbs
            .iter()
            .enumerate()
            .find(|(_, &l)| l != 0)
            .map(|(k, &l)| k * W + l.trailing_zeros() as usize)
    }

    pub fn xor_assign(&mut self, other: &Word) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &Word) -> Word {
        debug_assert_eq!(self.len, other.len);
        Word {
            len: self.len,
            limbs: self.limbs.iter().zip(&other.limbs).map(|(a, b)| a & b).collect(),
        }
    }

    /// Inner product over F2.
    pub fn dot(&self, other: &Word) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self.limbs.iter().zip(&other.limbs).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }

    /// `out[j] = self[pi[j]]`.
    pub fn permute(&self, pi: &[usize]) -> Word {
        assert_eq!(pi.len(), self.len);
        let mut out = Word::zeros(self.len);
        for (j, &src) in pi.iter().enumerate() {
            if self.get(src) {
                out.set(j, true);
            }
        }
        out
    }

    /// Concatenation of `self` and `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = Word::zeros(self.len + other.len);
        for i in self.support() {
            out.set(i, true);
        }
        for i in other.support() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Bits packed into bytes, bit `i` at bit `i % 8` of byte `i / 8`, hex encoded.
    pub fn to_hex(&self) -> String {
        let nbytes = self.len.div_ceil(8);
        let bytes: Vec<u8> = (0..nbytes).map(|b| (self.limbs[b / 8] >> (8 * (b % 8))) as u8).collect();
        hex::encode(bytes)
    }

    pub fn from_hex(len: usize, s: &str) -> Result<Word> {
        let bytes = hex::decode(s).map_err(|e| Error::Format(format!("bad hex: {e}")))?;
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::LengthMismatch { expected: len.div_ceil(8), got: bytes.len() });
        }
        let mut w = Word::zeros(len);
        for (b, &byte) in bytes.iter().enumerate() {
            w.limbs[b / 8] |= (byte as u64) << (8 * (b % 8));
        }
        let before = w.clone();
        w.mask_tail();
        if w != before {
            return Err(Error::Format("set bits beyond word length".into()));
        }
        Ok(w)
    }
}

#[derive(Serialize, Deserialize)]
struct WordRepr {
    len: usize,
    hex: String,
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WordRepr { len: self.len, hex: self.to_hex() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = WordRepr::deserialize(d)?;
        Word::from_hex(r.len, &r.hex).map_err(serde::de::Error::custom)
    }
}

/// Dense matrix over F2, stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<Word>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            let line: String = (0..self.cols).map(|j| if r.get(j) { '1' } else { '.' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> BitMatrix {
        BitMatrix { cols, rows: vec![Word::zeros(cols); rows] }
    }

    pub fn identity(k: usize) -> BitMatrix {
        BitMatrix { cols: k, rows: (0..k).map(|i| Word::unit(k, i)).collect() }
    }

    pub fn from_rows(cols: usize, rows: Vec<Word>) -> Result<BitMatrix> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch { expected: cols, got: r.len() });
        }
        Ok(BitMatrix { cols, rows })
    }

    /// Permutation matrix with `P[pi[j]][j] = 1`, so `H * P` has column `j`
    /// equal to column `pi[j]` of `H`.
    pub fn permutation(pi: &[usize]) -> BitMatrix {
        let n = pi.len();
        let mut m = BitMatrix::zeros(n, n);
        for (j, &src) in pi.iter().enumerate() {
            m.set(src, j, true);
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> BitMatrix {
        BitMatrix { cols, rows: (0..rows).map(|_| Word::random(cols, rng)).collect() }
    }

    /// Uniform element of GL_k(F2) by rejection sampling.
    pub fn random_invertible<R: Rng + ?Sized>(k: usize, rng: &mut R) -> BitMatrix {
        assert!(k >= 1, "invertible matrix needs size >= 1");
        loop {
            let m = BitMatrix::random(k, k, rng);
            if m.rank() == k {
                return m;
            }
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &Word {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Word] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Word> {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.rows[i].set(j, v)
    }

    pub fn column(&self, j: usize) -> Word {
        let mut w = Word::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                w.set(i, true);
            }
        }
        w
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.support() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.nrows() {
            return Err(Error::LengthMismatch { expected: self.cols, got: other.nrows() });
        }
        let rows = self.rows.iter().map(|r| other.vec_mul_unchecked(r)).collect();
        Ok(BitMatrix { cols: other.cols, rows })
    }

    fn vec_mul_unchecked(&self, v: &Word) -> Word {
        let mut acc = Word::zeros(self.cols);
        for i in v.support() {
            acc.xor_assign(&self.rows[i]);
        }
        acc
    }

    /// Row vector times matrix: `v * self`.
    pub fn vec_mul(&self, v: &Word) -> Result<Word> {
        if v.len() != self.nrows() {
            return Err(Error::LengthMismatch { expected: self.nrows(), got: v.len() });
        }
        Ok(self.vec_mul_unchecked(v))
    }

    /// Matrix times column vector: `self * v^T`, i.e. `v * self^T`.
    pub fn mul_vec(&self, v: &Word) -> Result<Word> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: v.len() });
        }
        let mut out = Word::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// `self * P` for the permutation matrix of `pi`: column `j` of the
    /// result is column `pi[j]` of `self`.
    pub fn permute_columns(&self, pi: &[usize]) -> BitMatrix {
        BitMatrix { cols: self.cols, rows: self.rows.iter().map(|r| r.permute(pi)).collect() }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: other.cols });
        }
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        Ok(BitMatrix { cols: self.cols, rows })
    }

    /// Reduced row echelon form. Zero rows stay at the bottom, pivot columns
    /// are returned in increasing order, one per nonzero row.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        self.rref_limited(self.cols)
    }

    /// Row reduction pivoting only in the first `limit` columns.
    fn rref_limited(&self, limit: usize) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit.min(self.cols) {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else { continue };
            rows.swap(r, p);
            let piv = rows[r].clone();
            for (i, other) in rows.iter_mut().enumerate() {
                if i != r && other.get(c) {
                    other.xor_assign(&piv);
                }
            }
            r += 1;
            pivots.push(c);
        }
        (BitMatrix { cols: self.cols, rows }, pivots)
    }

    /// `(R, pivots, T)` with `R = T * self` in reduced row echelon form.
    fn rref_tracked(&self) -> (BitMatrix, Vec<usize>, BitMatrix) {
        let k = self.nrows();
        let aug: Vec<Word> =
            self.rows.iter().enumerate().map(|(i, row)| row.concat(&Word::unit(k, i))).collect();
        let (red, pivots) = BitMatrix { cols: self.cols + k, rows: aug }.rref_limited(self.cols);
        let mut left = Vec::with_capacity(k);
        let mut right = Vec::with_capacity(k);
        for row in red.rows {
            let mut a = Word::zeros(self.cols);
            let mut b = Word::zeros(k);
            for j in row.support() {
                if j < self.cols {
                    a.set(j, true);
                } else {
                    b.set(j - self.cols, true);
                }
            }
            left.push(a);
            right.push(b);
        }
        (BitMatrix { cols: self.cols, rows: left }, pivots, BitMatrix { cols: k, rows: right })
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self * v^T = 0}`, one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<Word> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = Word::zeros(self.cols);
            v.set(f, true);
            for (k, &pc) in pivots.iter().enumerate() {
                if r.rows[k].get(f) {
                    v.set(pc, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Result<BitMatrix> {
        if self.nrows() != self.cols {
            return Err(Error::LengthMismatch { expected: self.nrows(), got: self.cols });
        }
        let (r, pivots, t) = self.rref_tracked();
        if pivots.len() != self.cols {
            return Err(Error::NotInvertible);
        }
        debug_assert_eq!(r, BitMatrix::identity(self.cols));
        Ok(t)
    }

    /// `X` with `X * self = b`.
    pub fn solve_left(&self, b: &BitMatrix) -> Result<BitMatrix> {
        if b.cols != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: b.cols });
        }
        let (r, pivots, t) = self.rref_tracked();
        let mut out = Vec::with_capacity(b.nrows());
        for target in &b.rows {
            let mut rem = target.clone();
            let mut x = Word::zeros(self.nrows());
            for (k, &pc) in pivots.iter().enumerate() {
                if rem.get(pc) {
                    rem.xor_assign(&r.rows[k]);
                    x.xor_assign(&t.rows[k]);
                }
            }
            if !rem.is_zero() {
                return Err(Error::Inconsistent);
            }
            out.push(x);
        }
        let x = BitMatrix { cols: self.nrows(), rows: out };
        debug_assert_eq!(&x.mul(self)?, b);
        Ok(x)
    }

    pub fn is_permutation(&self) -> bool {
        if self.nrows() != self.cols {
            return false;
        }
        let mut seen = vec![false; self.cols];
        for r in &self.rows {
            let s = r.support();
            if s.len() != 1 || seen[s[0]] {
                return false;
            }
            seen[s[0]] = true;
        }
        true
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<String>,
}

impl Serialize for BitMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr { rows: self.nrows(), cols: self.cols, data: self.rows.iter().map(Word::to_hex).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        if r.data.len() != r.rows {
            return Err(serde::de::Error::custom(format!(
                "expected {} rows, found {}",
                r.rows,
                r.data.len()
            )));
        }
        let rows = r
            .data
            .iter()
            .map(|h| Word::from_hex(r.cols, h))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(BitMatrix { cols: r.cols, rows })
    }
}

/// Uniform permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut pi: Vec<usize> = (0..n).collect();
    pi.shuffle(rng);
    pi
}
