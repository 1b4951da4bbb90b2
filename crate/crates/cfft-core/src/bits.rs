//! Dense GF(2) matrices stored as packed 64-bit words, row-major.
//!
//! Everything downstream (plan matrices, reductions, CSE) works on these.
//! Rows are the "output" dimension: `mat * x` sums the input bits selected
//! by each row.

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = cols.div_ceil(64).max(1);
        BitMatrix {
            rows,
            cols,
            wpr,
            data: vec![0; rows * wpr],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.wpr + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.wpr + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    pub fn xor_row(&mut self, dst: usize, src_words: &[u64]) {
        debug_assert_eq!(src_words.len(), self.wpr);
        let off = dst * self.wpr;
        for (i, w) in src_words.iter().enumerate() {
            self.data[off + i] ^= w;
        }
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    /// Indices of set bits in row `r`, ascending.
    pub fn row_bits(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        let words = self.row_words(r);
        words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn popcount(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transposed(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_bits(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// New matrix keeping the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        let mut s = BitMatrix::zeros(rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    s.set(ri, ci, true);
                }
            }
        }
        s
    }

    /// OR of the given rows, as a column mask over words.
    pub fn or_rows(&self, rows: &[usize]) -> Vec<u64> {
        let mut acc = vec![0u64; self.wpr];
        for &r in rows {
            for (i, w) in self.row_words(r).iter().enumerate() {
                acc[i] |= w;
            }
        }
        acc
    }

    /// Rows as hex strings (low column first within each byte-reversed word run),
    /// stable across widths; used by the JSON plan container.
    pub fn rows_hex(&self) -> Vec<String> {
        (0..self.rows)
            .map(|r| {
                self.row_words(r)
                    .iter()
                    .map(|w| format!("{w:016x}"))
                    .collect::<Vec<_>>()
                    .join("")
            })
            .collect()
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            let line: String = (0..self.cols.min(80))
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_roundtrip() {
        let mut m = BitMatrix::zeros(3, 130);
        m.set(0, 0, true);
        m.set(1, 64, true);
        m.set(2, 129, true);
        assert!(m.get(0, 0) && m.get(1, 64) && m.get(2, 129));
        assert!(!m.get(0, 1));
        assert_eq!(m.popcount(), 3);
    }

    #[test]
    fn row_bits_cross_word() {
        let mut m = BitMatrix::zeros(1, 200);
        for c in [0, 63, 64, 127, 199] {
            m.set(0, c, true);
        }
        let bits: Vec<_> = m.row_bits(0).collect();
        assert_eq!(bits, vec![0, 63, 64, 127, 199]);
    }

    #[test]
    fn transpose_involution() {
        let mut m = BitMatrix::zeros(5, 9);
        for (r, c) in [(0, 8), (3, 2), (4, 4), (1, 0)] {
            m.set(r, c, true);
        }
        assert_eq!(m.transposed().transposed(), m);
    }
}
