//! GF(2^m) arithmetic in polynomial basis with exp/log tables.
//!
//! A [`FieldSpec`] is immutable after construction and freely shareable;
//! every operation is a pure function of (spec, operands).

use std::fmt;

/// A field element in polynomial-basis coordinates, `bits < 2^m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Gf(pub u16);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Add for Gf {
    type Output = Gf;
    fn add(self, rhs: Gf) -> Gf {
        Gf(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for Gf {
    fn add_assign(&mut self, rhs: Gf) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf({:#x})", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// The generator does not have order 2^m - 1 under the given modulus.
    NotPrimitive,
    /// Polynomial degree does not match the requested extension degree.
    DegreeMismatch,
    DivideByZero,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrimitive => write!(f, "polynomial is not primitive"),
            FieldError::DegreeMismatch => write!(f, "polynomial degree does not match m"),
            FieldError::DivideByZero => write!(f, "division by zero"),
        }
    }
}

impl std::error::Error for FieldError {}

/// Default primitive polynomials per extension degree, as coefficient bitmasks.
pub const DEFAULT_PRIM_POLYS: &[(u32, u32)] = &[
    (3, 0xB),    // x^3 + x + 1
    (5, 0x25),   // x^5 + x^2 + 1
    (8, 0x11D),  // x^8 + x^4 + x^3 + x^2 + 1
    (9, 0x211),  // x^9 + x^4 + 1
    (10, 0x409), // x^10 + x^3 + 1
];

/// Returns the default primitive polynomial for degree `m`, if shipped.
pub fn default_prim_poly(m: u32) -> Option<u32> {
    DEFAULT_PRIM_POLYS.iter().find(|&&(d, _)| d == m).map(|&(_, p)| p)
}

/// GF(2^m) context: primitive polynomial plus exp/log tables.
pub struct FieldSpec {
    m: u32,
    prim_poly: u32,
    n: usize,
    exp: Vec<u16>, // length 2n, doubled to avoid the mod in mul
    log: Vec<u16>, // log[0] unused
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec(GF(2^{}), poly {:#x})", self.m, self.prim_poly)
    }
}

/// Multiply in GF(2)[x] and reduce by `poly` of degree `m`; table-free.
fn mul_shift_reduce(mut a: u32, b: u32, m: u32, poly: u32) -> u16 {
    let mut acc = 0u32;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m != 0 {
            a ^= poly;
        }
    }
    acc as u16
}

impl FieldSpec {
    /// Builds the field context. Fails with `NotPrimitive` when x does not
    /// generate the full multiplicative group under `prim_poly`.
    pub fn new(m: u32, prim_poly: u32) -> Result<FieldSpec, FieldError> {
        if !(2..=16).contains(&m) || prim_poly >> m != 1 {
            return Err(FieldError::DegreeMismatch);
        }
        let n = (1usize << m) - 1;
        let mut exp = vec![0u16; 2 * n];
        let mut log = vec![0u16; 1 << m];
        let mut x: u32 = 1;
        for i in 0..n {
            if x == 0 || (x == 1 && i > 0) {
                return Err(FieldError::NotPrimitive);
            }
            exp[i] = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x >> m != 0 {
                x ^= prim_poly;
            }
        }
        if x != 1 {
            // order of x exceeds n only in a non-field quotient ring
            return Err(FieldError::NotPrimitive);
        }
        for i in 0..n {
            exp[n + i] = exp[i];
        }
        Ok(FieldSpec { m, prim_poly, n, exp, log })
    }

    pub fn with_default_poly(m: u32) -> Result<FieldSpec, FieldError> {
        let poly = default_prim_poly(m).ok_or(FieldError::DegreeMismatch)?;
        FieldSpec::new(m, poly)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn prim_poly(&self) -> u32 {
        self.prim_poly
    }

    /// Multiplicative group order, 2^m - 1.
    pub fn n(&self) -> usize {
        self.n
    }

    /// alpha^e for any integer exponent (reduced mod n).
    pub fn alpha_pow(&self, e: i64) -> Gf {
        let e = e.rem_euclid(self.n as i64) as usize;
        Gf(self.exp[e])
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, a: Gf) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(self.log[a.0 as usize] as u32)
        }
    }

    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.is_zero() || b.is_zero() {
            return Gf::ZERO;
        }
        let la = self.log[a.0 as usize] as usize;
        let lb = self.log[b.0 as usize] as usize;
        Gf(self.exp[la + lb])
    }

    /// Multiplication by shift-and-reduce; independent of the tables. Used as
    /// an oracle against `mul`.
    pub fn mul_notable(&self, a: Gf, b: Gf) -> Gf {
        Gf(mul_shift_reduce(a.0 as u32, b.0 as u32, self.m, self.prim_poly))
    }

    pub fn inv(&self, a: Gf) -> Result<Gf, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivideByZero);
        }
        let la = self.log[a.0 as usize] as usize;
        Ok(Gf(self.exp[self.n - la]))
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^k by exponent arithmetic.
    pub fn pow(&self, a: Gf, k: u64) -> Gf {
        if a.is_zero() {
            return if k == 0 { Gf::ONE } else { Gf::ZERO };
        }
        let la = self.log[a.0 as usize] as u64;
        self.alpha_pow((la * (k % self.n as u64)) as i64)
    }
}

/// Operation tally for a Horner evaluation: `deg` multiplications (waived at
/// x = 1) and `deg` additions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HornerTally {
    pub mults: usize,
    pub adds: usize,
}

/// Evaluates sum coeffs[i] x^i by Horner recursion, returning the value and
/// the operation tally used for baseline complexity rows.
pub fn horner_eval(coeffs: &[Gf], x: Gf, spec: &FieldSpec) -> (Gf, HornerTally) {
    if coeffs.is_empty() {
        return (Gf::ZERO, HornerTally::default());
    }
    let deg = coeffs.len() - 1;
    let mut acc = coeffs[deg];
    for &c in coeffs[..deg].iter().rev() {
        acc = self_mul(spec, acc, x) + c;
    }
    let tally = HornerTally {
        mults: if x == Gf::ONE { 0 } else { deg },
        adds: deg,
    };
    (acc, tally)
}

fn self_mul(spec: &FieldSpec, a: Gf, x: Gf) -> Gf {
    spec.mul(a, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf32_paper_field() {
        let f = FieldSpec::new(5, 0x25).unwrap();
        assert_eq!(f.n(), 31);
        // alpha * alpha^30 = 1
        assert_eq!(f.mul(f.alpha_pow(1), f.alpha_pow(30)), Gf::ONE);
        // alpha^4 * alpha^4 = alpha^8
        assert_eq!(f.mul(f.alpha_pow(4), f.alpha_pow(4)), f.alpha_pow(8));
        // alpha^7 inverse is alpha^24
        assert_eq!(f.inv(f.alpha_pow(7)).unwrap(), f.alpha_pow(24));
        assert_eq!(f.inv(Gf::ONE).unwrap(), Gf::ONE);
        assert_eq!(f.inv(f.alpha_pow(1)).unwrap(), f.alpha_pow(30));
    }

    #[test]
    fn gf8_table_entry() {
        let f = FieldSpec::new(3, 0xB).unwrap();
        assert_eq!(f.n(), 7);
        // alpha^3 = alpha + 1 under x^3 + x + 1
        assert_eq!(f.alpha_pow(3), Gf(0b011));
    }

    #[test]
    fn zero_absorbs() {
        let f = FieldSpec::new(5, 0x25).unwrap();
        for e in 0..31 {
            assert_eq!(f.mul(Gf::ZERO, f.alpha_pow(e)), Gf::ZERO);
        }
        assert!(f.inv(Gf::ZERO).is_err());
    }

    #[test]
    fn degree_mismatch_rejected() {
        assert!(matches!(FieldSpec::new(5, 0x11D), Err(FieldError::DegreeMismatch)));
        assert!(matches!(FieldSpec::new(1, 0x3), Err(FieldError::DegreeMismatch)));
    }

    #[test]
    fn non_primitive_rejected() {
        // x^4 + x^3 + x^2 + x + 1 divides x^5 - 1: x has order 5 < 15
        assert!(matches!(FieldSpec::new(4, 0x1F), Err(FieldError::NotPrimitive)));
        // x^8 + x^4 + x^3 + x + 1 (0x11B, the AES polynomial) is irreducible
        // but not primitive: x has order 51
        assert!(matches!(FieldSpec::new(8, 0x11B), Err(FieldError::NotPrimitive)));
    }

    #[test]
    fn field_axioms_exhaustive_m3() {
        let f = FieldSpec::new(3, 0xB).unwrap();
        let all: Vec<Gf> = (0..8).map(Gf).collect();
        for &a in &all {
            for &b in &all {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &all {
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
                }
            }
        }
        for &a in &all[1..] {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Gf::ONE);
        }
    }

    #[test]
    fn table_mul_matches_shift_reduce() {
        for &(m, poly) in DEFAULT_PRIM_POLYS {
            if !(8..=10).contains(&m) {
                continue;
            }
            let f = FieldSpec::new(m, poly).unwrap();
            let mut state = 0x2545F4914F6CDD1Du64;
            for _ in 0..10_000 {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                let a = Gf((state as usize % (f.n() + 1)) as u16);
                let b = Gf(((state >> 20) as usize % (f.n() + 1)) as u16);
                assert_eq!(f.mul(a, b), f.mul_notable(a, b));
            }
        }
    }

    #[test]
    fn horner_examples() {
        let f = FieldSpec::new(5, 0x25).unwrap();
        let (v, t) = horner_eval(&[Gf(7)], f.alpha_pow(3), &f);
        assert_eq!((v, t.mults, t.adds), (Gf(7), 0, 0));

        let (v, t) = horner_eval(&[Gf::ONE, Gf::ONE], f.alpha_pow(1), &f);
        assert_eq!(v, Gf::ONE + f.alpha_pow(1));
        assert_eq!((t.mults, t.adds), (1, 1));

        // all-zero coefficients evaluate to zero everywhere
        let zeros = vec![Gf::ZERO; 12];
        for e in 0..31 {
            let (v, _) = horner_eval(&zeros, f.alpha_pow(e), &f);
            assert_eq!(v, Gf::ZERO);
        }
    }

    #[test]
    fn horner_syndrome_baseline_tally() {
        // (255,223): 255 coefficients evaluated at 32 points
        let f = FieldSpec::new(8, 0x11D).unwrap();
        let coeffs = vec![Gf::ONE; 255];
        let mut mults = 0;
        let mut adds = 0;
        for i in 0..32 {
            let (_, t) = horner_eval(&coeffs, f.alpha_pow(i), &f);
            mults += t.mults;
            adds += t.adds;
        }
        assert_eq!(adds, 8128);
        assert_eq!(mults, 7874);
    }
}
