//! Cyclotomic cosets mod 2^m - 1, per-coset rotations, normal bases of the
//! subfields, and the coset-ordered index permutations used by every plan.

use crate::galois::FieldSpec;
use serde::Serialize;
use std::fmt;

/// One doubling orbit. `elements` is stored unrotated, led by the smallest
/// member; `rotation` is a cyclic offset applied on read so rotation search
/// can enumerate without reallocating.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coset {
    pub leader: usize,
    pub elements: Vec<usize>,
    pub rotation: usize,
}

impl Coset {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Element at rotated position `t`.
    pub fn element_at(&self, t: usize) -> usize {
        let s = self.elements.len();
        self.elements[(t + self.rotation) % s]
    }

    /// Elements in rotated order.
    pub fn ordered(&self) -> Vec<usize> {
        (0..self.size()).map(|t| self.element_at(t)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetStructure {
    pub n: usize,
    pub cosets: Vec<Coset>,
}

impl CosetStructure {
    pub fn coset_of(&self, e: usize) -> usize {
        self.cosets
            .iter()
            .position(|c| c.elements.contains(&e))
            .expect("element in range")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CosetError {
    IndexOutOfRange,
}

impl fmt::Display for CosetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetError::IndexOutOfRange => write!(f, "coset or rotation index out of range"),
        }
    }
}

impl std::error::Error for CosetError {}

/// All doubling orbits mod `n`, each led by its smallest element, listed by
/// ascending leader, rotations zero. `n` must be odd (n = 2^m - 1 in use).
pub fn compute_cosets(n: usize) -> CosetStructure {
    debug_assert!(n % 2 == 1, "doubling orbits need odd modulus");
    let mut seen = vec![false; n];
    let mut cosets = Vec::new();
    for k in 0..n {
        if seen[k] {
            continue;
        }
        let mut elements = Vec::new();
        let mut x = k;
        while !seen[x] {
            seen[x] = true;
            elements.push(x);
            x = (2 * x) % n;
        }
        cosets.push(Coset { leader: k, elements, rotation: 0 });
    }
    CosetStructure { n, cosets }
}

/// Returns a copy with coset `coset_index` rotated by `offset`.
pub fn rotate_coset(
    cs: &CosetStructure,
    coset_index: usize,
    offset: usize,
) -> Result<CosetStructure, CosetError> {
    let mut out = cs.clone();
    let c = out.cosets.get_mut(coset_index).ok_or(CosetError::IndexOutOfRange)?;
    if offset >= c.size() {
        return Err(CosetError::IndexOutOfRange);
    }
    c.rotation = offset;
    Ok(out)
}

/// beta = alpha^u whose conjugates beta^(2^t), t = 0..s-1, form a GF(2)-basis
/// of the order-(2^s - 1) subfield.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NormalBasis {
    pub coset_size: u32,
    pub beta_exponent: usize,
}

impl NormalBasis {
    /// The conjugate elements in order beta^(2^0) .. beta^(2^(s-1)).
    pub fn conjugates(&self, spec: &FieldSpec) -> Vec<crate::galois::Gf> {
        let s = self.coset_size as usize;
        (0..s)
            .map(|t| spec.alpha_pow(((self.beta_exponent as u64) << t) as i64))
            .collect()
    }
}

fn gf2_rank(vecs: &[u16]) -> usize {
    let mut basis: Vec<u16> = Vec::new();
    for &v in vecs {
        let mut v = v;
        for &b in &basis {
            if v ^ b < v {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Deterministic normal-basis search: smallest exponent u wins.
///
/// s must divide m. A normal basis always exists, so failure is an internal
/// assertion rather than a caller-facing condition.
pub fn find_normal_basis(spec: &FieldSpec, coset_size: u32) -> NormalBasis {
    let s = coset_size as usize;
    assert!(
        s >= 1 && spec.m() as usize % s == 0,
        "coset size {s} must divide m = {}",
        spec.m()
    );
    if s == 1 {
        return NormalBasis { coset_size, beta_exponent: 0 };
    }
    let n = spec.n();
    let step = n / ((1usize << s) - 1); // beta must lie in the subfield
    let mut u = step;
    while u < n {
        let conj: Vec<u16> = (0..s)
            .map(|t| spec.alpha_pow(((u as u64) << t) as i64).0)
            .collect();
        if gf2_rank(&conj) == s {
            return NormalBasis { coset_size, beta_exponent: u };
        }
        u += step;
    }
    unreachable!("a normal basis exists for every subfield");
}

/// Bijection between coset-ordered positions and natural indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexPermutation {
    /// forward[position] = natural index
    pub forward: Vec<usize>,
    /// inverse[natural index] = position
    pub inverse: Vec<usize>,
}

impl IndexPermutation {
    pub fn from_forward(forward: Vec<usize>) -> IndexPermutation {
        let mut inverse = vec![usize::MAX; forward.len()];
        for (pos, &idx) in forward.iter().enumerate() {
            inverse[idx] = pos;
        }
        IndexPermutation { forward, inverse }
    }

    pub fn identity(n: usize) -> IndexPermutation {
        IndexPermutation::from_forward((0..n).collect())
    }
}

/// Concatenation of the cosets in listed order with rotations applied.
pub fn coset_permutation(cs: &CosetStructure) -> IndexPermutation {
    let mut forward = Vec::with_capacity(cs.n);
    for c in &cs.cosets {
        forward.extend(c.ordered());
    }
    IndexPermutation::from_forward(forward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldSpec;

    #[test]
    fn cosets_mod_7() {
        let cs = compute_cosets(7);
        let sets: Vec<Vec<usize>> = cs.cosets.iter().map(|c| c.elements.clone()).collect();
        assert_eq!(sets, vec![vec![0], vec![1, 2, 4], vec![3, 6, 5]]);
    }

    #[test]
    fn cosets_mod_31() {
        let cs = compute_cosets(31);
        assert_eq!(cs.cosets.len(), 7);
        assert_eq!(cs.cosets[1].elements, vec![1, 2, 4, 8, 16]);
        assert_eq!(cs.cosets[2].elements, vec![3, 6, 12, 24, 17]);
        assert_eq!(cs.cosets[3].elements, vec![5, 10, 20, 9, 18]);
    }

    #[test]
    fn cosets_mod_255_structure() {
        let cs = compute_cosets(255);
        let c17 = &cs.cosets[cs.coset_of(17)];
        assert_eq!(c17.elements, vec![17, 34, 68, 136]);
        assert_eq!(cs.cosets[cs.coset_of(0)].size(), 1);
        for lead in (1..32).filter(|k| k % 2 == 1 && *k != 17) {
            assert_eq!(cs.cosets[cs.coset_of(lead)].size(), 8, "coset of {lead}");
        }
    }

    #[test]
    fn partition_property() {
        for n in [7usize, 31, 255] {
            let cs = compute_cosets(n);
            let mut seen = vec![false; n];
            for c in &cs.cosets {
                for &e in &c.elements {
                    assert!(!seen[e], "element {e} appears twice");
                    seen[e] = true;
                    assert!(c.elements.contains(&((2 * e) % n)), "doubling closure");
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn rotation_semantics() {
        let cs = compute_cosets(31);
        let r = rotate_coset(&cs, 1, 1).unwrap();
        assert_eq!(r.cosets[1].ordered(), vec![2, 4, 8, 16, 1]);
        let r0 = rotate_coset(&cs, 1, 0).unwrap();
        assert_eq!(r0.cosets[1].ordered(), cs.cosets[1].elements);
        let r2 = rotate_coset(&cs, 2, 1).unwrap();
        assert_eq!(r2.cosets[2].ordered(), vec![6, 12, 24, 17, 3]);
        assert!(rotate_coset(&cs, 1, 5).is_err());
        assert!(rotate_coset(&cs, 99, 0).is_err());
    }

    #[test]
    fn normal_basis_gf32() {
        let f = FieldSpec::new(5, 0x25).unwrap();
        let nb = find_normal_basis(&f, 5);
        assert_eq!(nb.beta_exponent, 3);
        let conj: Vec<u32> = nb.conjugates(&f).iter().map(|g| f.log(*g).unwrap()).collect();
        assert_eq!(conj, vec![3, 6, 12, 24, 17]);
    }

    #[test]
    fn normal_basis_trivial_and_subfield() {
        let f = FieldSpec::new(8, 0x11D).unwrap();
        assert_eq!(find_normal_basis(&f, 1).beta_exponent, 0);
        let nb2 = find_normal_basis(&f, 2);
        assert_eq!(nb2.beta_exponent % 85, 0);
        let conj = nb2.conjugates(&f);
        assert_ne!(conj[0], conj[1]);
        assert_eq!(gf2_rank(&[conj[0].0, conj[1].0]), 2);
        for s in [4u32, 8] {
            let nb = find_normal_basis(&f, s);
            let conj: Vec<u16> = nb.conjugates(&f).iter().map(|g| g.0).collect();
            assert_eq!(gf2_rank(&conj), s as usize);
        }
    }

    #[test]
    fn permutation_examples() {
        let cs = compute_cosets(7);
        let p = coset_permutation(&cs);
        assert_eq!(p.forward, vec![0, 1, 2, 4, 3, 6, 5]);
        for (pos, &idx) in p.forward.iter().enumerate() {
            assert_eq!(p.inverse[idx], pos);
        }

        let mut cs31 = compute_cosets(31);
        for i in 1..4 {
            cs31 = rotate_coset(&cs31, i, 1).unwrap();
        }
        let p31 = coset_permutation(&cs31);
        assert_eq!(
            &p31.forward[..16],
            &[0, 2, 4, 8, 16, 1, 6, 12, 24, 17, 3, 10, 20, 9, 18, 5]
        );

        let p255 = coset_permutation(&compute_cosets(255));
        assert_eq!(&p255.forward[..9], &[0, 1, 2, 4, 8, 16, 32, 64, 128]);
    }
}
