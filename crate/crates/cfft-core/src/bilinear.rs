//! Bilinear cyclic-convolution kernels and full transform plans.
//!
//! A kernel realizes length-L cyclic convolution as
//! `post * ((data_pre * u) .* (const_pre * v))` with R general
//! multiplications. Plans chain per-coset kernels into a factored linear map
//! `post * (c .* (pre * f'))` equal to the n-point DFT over GF(2^m).

use crate::bits::BitMatrix;
use crate::cyclotomic::{
    coset_permutation, find_normal_basis, CosetStructure, IndexPermutation, NormalBasis,
};
use crate::galois::{FieldSpec, Gf};
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BilinearError {
    UnsupportedLength(usize),
    KernelMissing(usize),
    LengthMismatch { expected: usize, got: usize },
    ShapeMismatch,
    /// Internal assertion: every alpha^(j k) lies in the subfield, so its
    /// expansion over the conjugate basis always exists.
    BasisExpansionFailed,
}

impl fmt::Display for BilinearError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BilinearError::UnsupportedLength(l) => write!(f, "no built-in kernel for length {l}"),
            BilinearError::KernelMissing(l) => write!(f, "plan needs a length-{l} kernel"),
            BilinearError::LengthMismatch { expected, got } => {
                write!(f, "vector length {got}, expected {expected}")
            }
            BilinearError::ShapeMismatch => write!(f, "input shape incompatible with plan"),
            BilinearError::BasisExpansionFailed => write!(f, "conjugate-basis expansion failed"),
        }
    }
}

impl std::error::Error for BilinearError {}

/// Bilinear cyclic-convolution algorithm for one length.
#[derive(Debug, Clone)]
pub struct ConvolutionKernel {
    pub length: usize,
    /// Multiplication count R.
    pub mults: usize,
    /// R x L, applied to the variable operand.
    pub data_pre: BitMatrix,
    /// R x L, applied to the fixed operand.
    pub const_pre: BitMatrix,
    /// L x R reconstruction.
    pub post: BitMatrix,
}

fn mat_from_rows(rows: &[u32], cols: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows.len(), cols);
    for (r, &mask) in rows.iter().enumerate() {
        for c in 0..cols {
            if (mask >> c) & 1 == 1 {
                m.set(r, c, true);
            }
        }
    }
    m
}

fn kernel_1() -> ConvolutionKernel {
    ConvolutionKernel {
        length: 1,
        mults: 1,
        data_pre: mat_from_rows(&[1], 1),
        const_pre: mat_from_rows(&[1], 1),
        post: mat_from_rows(&[1], 1),
    }
}

fn kernel_2() -> ConvolutionKernel {
    // one product per operand plus the cross term
    let pre = [0b01, 0b10, 0b11];
    ConvolutionKernel {
        length: 2,
        mults: 3,
        data_pre: mat_from_rows(&pre, 2),
        const_pre: mat_from_rows(&pre, 2),
        post: mat_from_rows(&[0b011, 0b111], 3),
    }
}

fn kernel_3() -> ConvolutionKernel {
    // split x^3 + 1 = (x + 1)(x^2 + x + 1) and recombine
    let pre = [0b111, 0b101, 0b110, 0b011];
    ConvolutionKernel {
        length: 3,
        mults: 4,
        data_pre: mat_from_rows(&pre, 3),
        const_pre: mat_from_rows(&pre, 3),
        post: mat_from_rows(&[0b1011, 0b0111, 0b1101], 4),
    }
}

fn kernel_5() -> ConvolutionKernel {
    // classic ten-multiplication length-5 cyclic convolution
    ConvolutionKernel {
        length: 5,
        mults: 10,
        data_pre: mat_from_rows(&[31, 15, 30, 29, 27, 10, 9, 12, 24, 23], 5),
        const_pre: mat_from_rows(&[31, 17, 9, 5, 3, 24, 6, 20, 10, 30], 5),
        post: mat_from_rows(&[805, 713, 849, 31, 675], 10),
    }
}

/// Length 2M from length M: split even/odd over y = x^2 and Karatsuba the
/// outer product, so R doubles lengthwise as 3 R(M).
fn compose_double(k: &ConvolutionKernel) -> ConvolutionKernel {
    let m = k.length;
    let r = k.mults;
    let l2 = 2 * m;
    let expand = |mat: &BitMatrix, row: usize, offset: usize, out: &mut BitMatrix, orow: usize| {
        for t in mat.row_bits(row) {
            out.set(orow, offset + 2 * t, true);
        }
    };
    let mut data = BitMatrix::zeros(3 * r, l2);
    let mut cons = BitMatrix::zeros(3 * r, l2);
    for (src, dst) in [(&k.data_pre, &mut data), (&k.const_pre, &mut cons)] {
        for row in 0..r {
            expand(src, row, 0, dst, row); // even block
            expand(src, row, 1, dst, r + row); // odd block
            expand(src, row, 0, dst, 2 * r + row); // sum block
            expand(src, row, 1, dst, 2 * r + row);
        }
    }
    // even outputs: A[j] + y*B[j] -> A[j] + B[(j-1) mod M]
    // odd outputs:  A[j] + B[j] + C[j]
    let mut post = BitMatrix::zeros(l2, 3 * r);
    for j in 0..m {
        let even = 2 * j;
        let odd = 2 * j + 1;
        for q in k.post.row_bits(j) {
            post.set(even, q, true);
            post.set(odd, q, true);
            post.set(odd, r + q, true);
            post.set(odd, 2 * r + q, true);
        }
        for q in k.post.row_bits((j + m - 1) % m) {
            post.set(even, r + q, true);
        }
    }
    ConvolutionKernel { length: l2, mults: 3 * r, data_pre: data, const_pre: cons, post }
}

/// Length 3M from length M: three-way split over y = x^3 with six inner
/// products (pairwise Karatsuba), R(3M) = 6 R(M).
#[cfg(feature = "long-kernels")]
fn compose_triple(k: &ConvolutionKernel) -> ConvolutionKernel {
    let m = k.length;
    let r = k.mults;
    let l3 = 3 * m;
    let blocks: [&[usize]; 6] = [&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2]];
    let mut data = BitMatrix::zeros(6 * r, l3);
    let mut cons = BitMatrix::zeros(6 * r, l3);
    for (src, dst) in [(&k.data_pre, &mut data), (&k.const_pre, &mut cons)] {
        for (bi, parts) in blocks.iter().enumerate() {
            for row in 0..r {
                for t in src.row_bits(row) {
                    for &off in *parts {
                        dst.set(bi * r + row, off + 3 * t, true);
                    }
                }
            }
        }
    }
    // product sub-blocks in order D0 D1 D2 D01 D02 D12; degree-4 outer
    // coefficients e0..e4 with x^3 = y folding:
    //   e0 = D0, e1 = D01+D0+D1, e2 = D02+D0+D1+D2, e3 = D12+D1+D2, e4 = D2
    //   c0[j] = e0[j] + e3[j-1]; c1[j] = e1[j] + e4[j-1]; c2[j] = e2[j]
    const D0: usize = 0;
    const D1: usize = 1;
    const D2: usize = 2;
    const D01: usize = 3;
    const D02: usize = 4;
    const D12: usize = 5;
    let mut post = BitMatrix::zeros(l3, 6 * r);
    let put = |orow: usize, blk: usize, qrow: usize, post: &mut BitMatrix| {
        for q in k.post.row_bits(qrow) {
            let c = blk * r + q;
            let cur = post.get(orow, c);
            post.set(orow, c, !cur);
        }
    };
    for j in 0..m {
        let jm1 = (j + m - 1) % m;
        let c0 = 3 * j;
        put(c0, D0, j, &mut post);
        for blk in [D12, D1, D2] {
            put(c0, blk, jm1, &mut post);
        }
        let c1 = 3 * j + 1;
        for blk in [D01, D0, D1] {
            put(c1, blk, j, &mut post);
        }
        put(c1, D2, jm1, &mut post);
        let c2 = 3 * j + 2;
        for blk in [D02, D0, D1, D2] {
            put(c2, blk, j, &mut post);
        }
    }
    ConvolutionKernel { length: l3, mults: 6 * r, data_pre: data, const_pre: cons, post }
}

/// Coprime composition: CRT interleaving of two cyclic kernels.
#[cfg(feature = "long-kernels")]
fn compose_coprime(ka: &ConvolutionKernel, kb: &ConvolutionKernel) -> ConvolutionKernel {
    let (la, lb) = (ka.length, kb.length);
    let l = la * lb;
    let (ra, rb) = (ka.mults, kb.mults);
    let pos = |ta: usize, tb: usize| -> usize {
        (0..l).find(|&t| t % la == ta && t % lb == tb).unwrap()
    };
    let mut data = BitMatrix::zeros(ra * rb, l);
    let mut cons = BitMatrix::zeros(ra * rb, l);
    for (pa, pb, dst) in [
        (&ka.data_pre, &kb.data_pre, &mut data),
        (&ka.const_pre, &kb.const_pre, &mut cons),
    ] {
        for rra in 0..ra {
            for rrb in 0..rb {
                let row = rra * rb + rrb;
                for ta in pa.row_bits(rra) {
                    for tb in pb.row_bits(rrb) {
                        dst.set(row, pos(ta, tb), true);
                    }
                }
            }
        }
    }
    let mut post = BitMatrix::zeros(l, ra * rb);
    for t in 0..l {
        for qa in ka.post.row_bits(t % la) {
            for qb in kb.post.row_bits(t % lb) {
                post.set(t, qa * rb + qb, true);
            }
        }
    }
    ConvolutionKernel { length: l, mults: ra * rb, data_pre: data, const_pre: cons, post }
}

/// Returns the built-in kernel for cyclic convolution of the given length.
pub fn builtin_kernel(length: usize) -> Result<ConvolutionKernel, BilinearError> {
    match length {
        1 => Ok(kernel_1()),
        2 => Ok(kernel_2()),
        3 => Ok(kernel_3()),
        4 => Ok(compose_double(&kernel_2())),
        5 => Ok(kernel_5()),
        8 => Ok(compose_double(&compose_double(&kernel_2()))),
        #[cfg(feature = "long-kernels")]
        9 => Ok(compose_triple(&kernel_3())),
        #[cfg(feature = "long-kernels")]
        10 => Ok(compose_coprime(&kernel_2(), &kernel_5())),
        other => Err(BilinearError::UnsupportedLength(other)),
    }
}

/// Naive O(L^2) cyclic convolution, the oracle for kernels.
pub fn cyclic_convolution(u: &[Gf], v: &[Gf], spec: &FieldSpec) -> Vec<Gf> {
    let l = u.len();
    let mut out = vec![Gf::ZERO; l];
    for (i, &ui) in u.iter().enumerate() {
        for (j, &vj) in v.iter().enumerate() {
            out[(i + j) % l] += spec.mul(ui, vj);
        }
    }
    out
}

fn kernel_apply(k: &ConvolutionKernel, u: &[Gf], v: &[Gf], spec: &FieldSpec) -> Vec<Gf> {
    let mut prods = Vec::with_capacity(k.mults);
    for r in 0..k.mults {
        let a = k.data_pre.row_bits(r).fold(Gf::ZERO, |acc, t| acc + u[t]);
        let b = k.const_pre.row_bits(r).fold(Gf::ZERO, |acc, t| acc + v[t]);
        prods.push(spec.mul(a, b));
    }
    (0..k.length)
        .map(|i| k.post.row_bits(i).fold(Gf::ZERO, |acc, r| acc + prods[r]))
        .collect()
}

/// True iff the bilinear identity holds exhaustively over GF(2) (lengths up
/// to 8; sampled beyond) and for `trials` random pairs over `spec`.
pub fn verify_kernel(k: &ConvolutionKernel, spec: &FieldSpec, trials: usize) -> bool {
    let l = k.length;
    if l <= 8 {
        for um in 0u32..1 << l {
            for vm in 0u32..1 << l {
                let u: Vec<Gf> = (0..l).map(|i| Gf(((um >> i) & 1) as u16)).collect();
                let v: Vec<Gf> = (0..l).map(|i| Gf(((vm >> i) & 1) as u16)).collect();
                if kernel_apply(k, &u, &v, spec) != cyclic_convolution(&u, &v, spec) {
                    return false;
                }
            }
        }
    }
    let mut state = 0x9E3779B97F4A7C15u64 ^ (l as u64);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let card = spec.n() as u64 + 1;
    for _ in 0..trials {
        let u: Vec<Gf> = (0..l).map(|_| Gf((next() % card) as u16)).collect();
        let v: Vec<Gf> = (0..l).map(|_| Gf((next() % card) as u16)).collect();
        if kernel_apply(k, &u, &v, spec) != cyclic_convolution(&u, &v, spec) {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PlanVariant {
    Dcfft,
    Scfft,
}

impl fmt::Display for PlanVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanVariant::Dcfft => write!(f, "DCFFT"),
            PlanVariant::Scfft => write!(f, "SCFFT"),
        }
    }
}

/// Per-coset extents inside a plan's matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetBlock {
    pub leader: usize,
    pub size: usize,
    pub rotation: usize,
    /// Multiplication-slot range in `pre` rows / `c` / `post` columns.
    pub slots: Range<usize>,
}

/// A factored DFT: gather inputs, binary pre-additions, pointwise multiply
/// by `c`, binary post-additions, scatter outputs.
///
/// `input_index[col]` is the natural index feeding that pre column;
/// `output_index[row]` is the natural index produced by that post row. Full
/// plans carry permutations here; reduced plans carry subsets.
pub struct CfftPlan {
    pub variant: PlanVariant,
    pub field: Arc<FieldSpec>,
    pub pre: BitMatrix,
    pub c: Vec<Gf>,
    pub post: BitMatrix,
    pub input_index: Vec<usize>,
    pub output_index: Vec<usize>,
    pub blocks: Vec<CosetBlock>,
    pub cosets: CosetStructure,
}

impl fmt::Debug for CfftPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CfftPlan({} n={} slots={} in={} out={})",
            self.variant,
            self.field.n(),
            self.c.len(),
            self.input_index.len(),
            self.output_index.len()
        )
    }
}

impl CfftPlan {
    pub fn slot_count(&self) -> usize {
        self.c.len()
    }

    /// Non-one entries of c: the plan's multiplicative cost.
    pub fn mult_count(&self) -> usize {
        self.c.iter().filter(|&&g| g != Gf::ONE).count()
    }

    /// Popcount-based additive work: matrix weight minus one per nonzero row.
    pub fn naive_add_count(&self) -> usize {
        let rows = |m: &BitMatrix| -> usize {
            (0..m.rows())
                .map(|r| m.row_weight(r).saturating_sub(1))
                .sum()
        };
        rows(&self.pre) + rows(&self.post)
    }

    pub fn input_perm(&self) -> IndexPermutation {
        IndexPermutation::from_forward(self.input_index.clone())
    }

    pub fn output_perm(&self) -> IndexPermutation {
        IndexPermutation::from_forward(self.output_index.clone())
    }
}

/// Solve coords over the conjugate basis: returns mask b with
/// sum_{t in b} basis[t] = target.
fn expand_over_basis(basis: &[u16], target: u16) -> Option<u32> {
    // gaussian elimination, marking which basis vectors combine
    let mut red: Vec<(u16, u32)> = Vec::with_capacity(basis.len());
    for (i, &b) in basis.iter().enumerate() {
        let mut v = b;
        let mut mask = 1u32 << i;
        for &(rv, rm) in &red {
            if v ^ rv < v {
                v ^= rv;
                mask ^= rm;
            }
        }
        if v != 0 {
            red.push((v, mask));
            red.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        }
    }
    let mut t = target;
    let mut mask = 0u32;
    for &(rv, rm) in &red {
        if t ^ rv < t {
            t ^= rv;
            mask ^= rm;
        }
    }
    if t == 0 {
        Some(mask)
    } else {
        None
    }
}

/// Builds the full n-point plan over the given (possibly rotated) cosets.
///
/// The per-coset constants are `const_pre * (beta^(2^r), beta^(2^(r+1)), ...)`
/// for rotation r, and the binary post factor assembles the GF(2) expansions
/// of alpha^(j k_i) over the unrotated conjugate basis. The SCFFT variant is
/// the transposed factorization with input and output under the same coset
/// permutation.
pub fn build_full_cfft(
    field: &Arc<FieldSpec>,
    cs: &CosetStructure,
    variant: PlanVariant,
) -> Result<CfftPlan, BilinearError> {
    let n = field.n();
    assert_eq!(cs.n, n, "coset structure does not match the field");
    let mut kernels: Vec<ConvolutionKernel> = Vec::new();
    let mut kernel_of = std::collections::HashMap::new();
    let mut bases: std::collections::HashMap<usize, NormalBasis> = std::collections::HashMap::new();
    for c in &cs.cosets {
        let s = c.size();
        if !kernel_of.contains_key(&s) {
            let k = builtin_kernel(s).map_err(|_| BilinearError::KernelMissing(s))?;
            kernel_of.insert(s, kernels.len());
            kernels.push(k);
            bases.insert(s, find_normal_basis(field, s as u32));
        }
    }

    let total_slots: usize = cs
        .cosets
        .iter()
        .map(|c| kernels[kernel_of[&c.size()]].mults)
        .sum();

    let perm = coset_permutation(cs);
    let mut blocks = Vec::with_capacity(cs.cosets.len());
    let mut cvec: Vec<Gf> = Vec::with_capacity(total_slots);

    // block-diagonal data-side matrix with the cyclic index reversal folded in
    let mut pre = BitMatrix::zeros(total_slots, n);
    // binary post factor: natural output rows x slots
    let mut post = BitMatrix::zeros(n, total_slots);

    let mut slot_base = 0usize;
    let mut col_base = 0usize;
    for c in cs.cosets.iter() {
        let s = c.size();
        let k = &kernels[kernel_of[&s]];
        let nb = &bases[&s];
        // rotated conjugate vector feeds the constants
        for r in 0..k.mults {
            let mut acc = Gf::ZERO;
            for v in k.const_pre.row_bits(r) {
                let e = (nb.beta_exponent as u64) << ((v + c.rotation) % s);
                acc += field.alpha_pow(e as i64);
            }
            debug_assert!(!acc.is_zero(), "zero constant would mean a dead slot");
            cvec.push(acc);
        }
        for r in 0..k.mults {
            for t in k.data_pre.row_bits(r) {
                pre.set(slot_base + r, col_base + (s - t) % s, true);
            }
        }
        // conjugates (unrotated) for the expansion of alpha^(j * leader)
        let conj: Vec<u16> = nb.conjugates(field).iter().map(|g| g.0).collect();
        for j in 0..n {
            let target = field.alpha_pow((j * c.leader) as i64).0;
            let a = expand_over_basis(&conj, target).ok_or(BilinearError::BasisExpansionFailed)?;
            for u in (0..s).filter(|&u| (a >> u) & 1 == 1) {
                for q in k.post.row_bits(u) {
                    let cur = post.get(j, slot_base + q);
                    post.set(j, slot_base + q, !cur);
                }
            }
        }
        blocks.push(CosetBlock {
            leader: c.leader,
            size: s,
            rotation: c.rotation,
            slots: slot_base..slot_base + k.mults,
        });
        slot_base += k.mults;
        col_base += s;
    }

    let plan = match variant {
        PlanVariant::Dcfft => CfftPlan {
            variant,
            field: Arc::clone(field),
            pre,
            c: cvec,
            post,
            input_index: perm.forward.clone(),
            output_index: (0..n).collect(),
            blocks,
            cosets: cs.clone(),
        },
        PlanVariant::Scfft => {
            // transpose both binary factors; relabel pre columns so input and
            // output share the coset permutation
            let mut pre_t = BitMatrix::zeros(total_slots, n);
            for j in 0..n {
                for r in post.row_bits(j) {
                    pre_t.set(r, perm.inverse[j], true);
                }
            }
            let mut post_t = BitMatrix::zeros(n, total_slots);
            for r in 0..total_slots {
                for t in pre.row_bits(r) {
                    post_t.set(t, r, true);
                }
            }
            CfftPlan {
                variant,
                field: Arc::clone(field),
                pre: pre_t,
                c: cvec,
                post: post_t,
                input_index: perm.forward.clone(),
                output_index: perm.forward.clone(),
                blocks,
                cosets: cs.clone(),
            }
        }
    };
    Ok(plan)
}

/// F_j = sum_i f_i alpha^(ij), or alpha^(-ij) when `inverse`.
pub fn naive_dft(f: &[Gf], spec: &FieldSpec, inverse: bool) -> Result<Vec<Gf>, BilinearError> {
    let n = spec.n();
    if f.len() != n {
        return Err(BilinearError::LengthMismatch { expected: n, got: f.len() });
    }
    let mut out = vec![Gf::ZERO; n];
    for (j, slot) in out.iter_mut().enumerate() {
        let mut acc = Gf::ZERO;
        for (i, &fi) in f.iter().enumerate() {
            if !fi.is_zero() {
                let e = (i * j) % n;
                let e = if inverse { (n - e) % n } else { e };
                acc += spec.mul(fi, spec.alpha_pow(e as i64));
            }
        }
        *slot = acc;
    }
    Ok(out)
}

/// Exact tally from one evaluation: static additive work plus the non-one
/// multiplications actually exercised (zero slot values skip the multiply).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvalTally {
    pub adds: usize,
    pub mults: usize,
}

/// Runs the factored map on a natural-order input vector of length n.
///
/// Returns outputs in natural order (rows the plan does not produce stay
/// zero) plus the tally. For dual-reduced plans the input must vanish
/// outside the plan's temporal support.
pub fn evaluate_plan(plan: &CfftPlan, f: &[Gf]) -> Result<(Vec<Gf>, EvalTally), BilinearError> {
    let n = plan.field.n();
    if f.len() != n {
        return Err(BilinearError::LengthMismatch { expected: n, got: f.len() });
    }
    let spec = plan.field.as_ref();
    let x: Vec<Gf> = plan.input_index.iter().map(|&i| f[i]).collect();
    let mut tally = EvalTally { adds: plan.naive_add_count(), mults: 0 };
    let mut mid = Vec::with_capacity(plan.slot_count());
    for r in 0..plan.pre.rows() {
        let v = plan.pre.row_bits(r).fold(Gf::ZERO, |acc, t| acc + x[t]);
        let c = plan.c[r];
        if c != Gf::ONE && !v.is_zero() {
            tally.mults += 1;
            mid.push(spec.mul(v, c));
        } else {
            mid.push(v);
        }
    }
    let mut out = vec![Gf::ZERO; n];
    for row in 0..plan.post.rows() {
        let v = plan.post.row_bits(row).fold(Gf::ZERO, |acc, r| acc + mid[r]);
        out[plan.output_index[row]] = v;
    }
    Ok((out, tally))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{compute_cosets, rotate_coset};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn gf(m: u32, poly: u32) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::new(m, poly).unwrap())
    }

    #[test]
    fn builtin_kernels_verify() {
        let f8 = gf(8, 0x11D);
        for (l, r) in [(1usize, 1usize), (2, 3), (3, 4), (4, 9), (5, 10), (8, 27)] {
            let k = builtin_kernel(l).unwrap();
            assert_eq!(k.mults, r, "length {l}");
            assert!(verify_kernel(&k, &f8, 200), "length {l} kernel failed");
        }
        assert!(matches!(
            builtin_kernel(6),
            Err(BilinearError::UnsupportedLength(6))
        ));
    }

    #[cfg(feature = "long-kernels")]
    #[test]
    fn long_kernels_verify() {
        let f8 = gf(8, 0x11D);
        for (l, r) in [(9usize, 24usize), (10, 30)] {
            let k = builtin_kernel(l).unwrap();
            assert_eq!(k.mults, r, "length {l}");
            assert!(verify_kernel(&k, &f8, 200), "length {l} kernel failed");
        }
    }

    #[test]
    fn corrupted_kernel_detected() {
        let f8 = gf(8, 0x11D);
        let mut k = builtin_kernel(5).unwrap();
        let was = k.post.get(2, 4);
        k.post.set(2, 4, !was);
        assert!(!verify_kernel(&k, &f8, 50));
    }

    #[test]
    fn length5_data_side_shape() {
        // data-side rows, composed with the intra-coset index reversal, must
        // transpose to the plan's published 5x10 post block
        let k = builtin_kernel(5).unwrap();
        let expected: [[u8; 10]; 5] = [
            [1, 1, 0, 1, 1, 0, 1, 0, 0, 1],
            [1, 0, 1, 1, 1, 0, 0, 0, 1, 1],
            [1, 1, 1, 1, 1, 1, 1, 1, 1, 0],
            [1, 1, 1, 1, 0, 0, 0, 1, 0, 1],
            [1, 1, 1, 0, 1, 1, 0, 0, 0, 1],
        ];
        for t in 0..5 {
            for r in 0..10 {
                let eff = k.data_pre.get(r, (5 - t) % 5);
                assert_eq!(eff as u8, expected[t][r], "row {t} col {r}");
            }
        }
    }

    #[test]
    fn full_plans_match_naive_dft() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for (m, poly) in [(3u32, 0xBu32), (5, 0x25)] {
            let f = gf(m, poly);
            let cs = compute_cosets(f.n());
            for variant in [PlanVariant::Dcfft, PlanVariant::Scfft] {
                let plan = build_full_cfft(&f, &cs, variant).unwrap();
                for _ in 0..300 {
                    let v: Vec<Gf> =
                        (0..f.n()).map(|_| Gf(rng.gen_range(0..=f.n() as u16))).collect();
                    let (got, _) = evaluate_plan(&plan, &v).unwrap();
                    assert_eq!(got, naive_dft(&v, &f, false).unwrap());
                }
            }
        }
    }

    #[test]
    fn unit_vector_gives_all_ones() {
        let f = gf(5, 0x25);
        let cs = compute_cosets(31);
        for variant in [PlanVariant::Dcfft, PlanVariant::Scfft] {
            let plan = build_full_cfft(&f, &cs, variant).unwrap();
            let mut v = vec![Gf::ZERO; 31];
            v[0] = Gf::ONE;
            let (got, _) = evaluate_plan(&plan, &v).unwrap();
            assert!(got.iter().all(|&g| g == Gf::ONE));
        }
    }

    #[test]
    fn zero_vector_consumes_no_multiplications() {
        let f = gf(5, 0x25);
        let cs = compute_cosets(31);
        let plan = build_full_cfft(&f, &cs, PlanVariant::Scfft).unwrap();
        let (out, tally) = evaluate_plan(&plan, &vec![Gf::ZERO; 31]).unwrap();
        assert!(out.iter().all(|g| g.is_zero()));
        assert_eq!(tally.mults, 0);
    }

    #[test]
    fn paper_c_block_and_post_rows() {
        let f = gf(5, 0x25);
        let mut cs = compute_cosets(31);
        for i in 1..=3 {
            cs = rotate_coset(&cs, i, 1).unwrap();
        }
        let plan = build_full_cfft(&f, &cs, PlanVariant::Scfft).unwrap();
        let b1 = &plan.blocks[1];
        let exps: Vec<u32> = plan.c[b1.slots.clone()]
            .iter()
            .map(|&g| f.log(g).unwrap())
            .collect();
        assert_eq!(exps, vec![0, 1, 25, 7, 2, 16, 4, 28, 14, 27]);
        // blocks sharing size and rotation share constants
        let b2 = &plan.blocks[2];
        let b3 = &plan.blocks[3];
        assert_eq!(plan.c[b1.slots.clone()], plan.c[b2.slots.clone()]);
        assert_eq!(plan.c[b2.slots.clone()], plan.c[b3.slots.clone()]);
    }

    #[test]
    fn scfft_dcfft_realize_transposed_factors() {
        // materialize both variants at n = 7 and check they realize the same
        // (symmetric) DFT map
        let f = gf(3, 0xB);
        let cs = compute_cosets(7);
        let d = build_full_cfft(&f, &cs, PlanVariant::Dcfft).unwrap();
        let s = build_full_cfft(&f, &cs, PlanVariant::Scfft).unwrap();
        for i in 0..7 {
            let mut v = vec![Gf::ZERO; 7];
            v[i] = Gf::ONE;
            let (dv, _) = evaluate_plan(&d, &v).unwrap();
            let (sv, _) = evaluate_plan(&s, &v).unwrap();
            assert_eq!(dv, sv);
        }
    }

    #[test]
    fn naive_dft_inverse_roundtrip() {
        let f = gf(5, 0x25);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..100 {
            let v: Vec<Gf> = (0..31).map(|_| Gf(rng.gen_range(0..32))).collect();
            let fwd = naive_dft(&v, &f, false).unwrap();
            let back = naive_dft(&fwd, &f, true).unwrap();
            assert_eq!(back, v);
        }
        assert!(naive_dft(&[Gf::ZERO; 30], &f, false).is_err());
    }

    #[test]
    fn plan_linearity_sampled() {
        let f = gf(5, 0x25);
        let cs = compute_cosets(31);
        let plan = build_full_cfft(&f, &cs, PlanVariant::Scfft).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = Gf(rng.gen_range(0..32));
            let u: Vec<Gf> = (0..31).map(|_| Gf(rng.gen_range(0..32))).collect();
            let w: Vec<Gf> = (0..31).map(|_| Gf(rng.gen_range(0..32))).collect();
            let mixed: Vec<Gf> = u
                .iter()
                .zip(&w)
                .map(|(&ui, &wi)| f.mul(a, ui) + wi)
                .collect();
            let (fu, _) = evaluate_plan(&plan, &u).unwrap();
            let (fw, _) = evaluate_plan(&plan, &w).unwrap();
            let (fm, _) = evaluate_plan(&plan, &mixed).unwrap();
            for j in 0..31 {
                assert_eq!(fm[j], f.mul(a, fu[j]) + fw[j]);
            }
        }
    }
}
