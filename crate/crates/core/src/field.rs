//! Arithmetic in GF(2^n) for 1 <= n <= 32.
//!
//! A field is described by [`FieldSpec`]: an extension degree `n` and a monic
//! irreducible modulus over GF(2), encoded as a bit vector whose bit `i` is
//! the coefficient of `x^i`. Elements are n-bit coordinate vectors in the
//! polynomial basis. Both types are small immutable values, cheap to copy and
//! safe to share between threads; every operation is a pure function.
//!
//! The CLI notation for a field is `2^n` with an optional `/0xMOD` modulus
//! suffix, e.g. the default GF(8) is `2^3/0xB`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use crate::{Error, Result};

pub const MAX_DEGREE: u32 = 32;

// ---------------------------------------------------------------------------
// GF(2)[x] on bit vectors
// ---------------------------------------------------------------------------

/// Degree of a bit polynomial; -1 for the zero polynomial.
fn gf2_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Carry-less product. Caller guarantees deg a + deg b <= 63.
fn gf2_mul(mut a: u64, mut b: u64) -> u64 {
    let mut acc = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

fn gf2_rem(mut a: u64, m: u64) -> u64 {
    let dm = gf2_degree(m);
    debug_assert!(dm >= 0);
    while gf2_degree(a) >= dm {
        a ^= m << (gf2_degree(a) - dm);
    }
    a
}

fn gf2_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = gf2_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility of a degree-n bit polynomial over GF(2), by the standard
/// criterion: x^(2^n) == x mod m, and gcd(x^(2^(n/p)) - x, m) = 1 at every
/// prime p dividing n.
fn gf2_is_irreducible(m: u64, n: u32) -> bool {
    if n == 0 || gf2_degree(m) != n as i32 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if m & 1 == 0 {
        return false; // divisible by x
    }
    let x = 0b10u64;
    let mut r = x;
    for _ in 0..n {
        r = gf2_rem(gf2_mul(r, r), m);
    }
    if r != x {
        return false;
    }
    // gcd conditions at proper divisors n/p
    let mut primes = Vec::new();
    let mut t = n;
    let mut p = 2;
    while p * p <= t {
        if t % p == 0 {
            primes.push(p);
            while t % p == 0 {
                t /= p;
            }
        }
        p += 1;
    }
    if t > 1 {
        primes.push(t);
    }
    for p in primes {
        let d = n / p;
        let mut r = x;
        for _ in 0..d {
            r = gf2_rem(gf2_mul(r, r), m);
        }
        if gf2_gcd(r ^ x, m) != 1 {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// FieldSpec
// ---------------------------------------------------------------------------

/// A validated description of GF(2^n): extension degree plus monic
/// irreducible modulus (bit i = coefficient of x^i).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    n: u32,
    modulus: u64,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec(2^{}/0x{:X})", self.n, self.modulus)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}/0x{:X}", self.n, self.modulus)
    }
}

impl FieldSpec {
    /// Validates and builds a field description.
    pub fn new(n: u32, modulus: u64) -> Result<FieldSpec> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(n));
        }
        let deg = gf2_degree(modulus);
        if deg != n as i32 {
            return Err(Error::DegreeMismatch {
                modulus,
                expected: n,
                actual: deg.max(0) as u32,
            });
        }
        // constant term must be 1 (rules out the reducible x | m case and the
        // degenerate modulus x itself)
        if modulus & 1 == 0 || !gf2_is_irreducible(modulus, n) {
            return Err(Error::ReducibleModulus(modulus));
        }
        Ok(FieldSpec { n, modulus })
    }

    /// The deterministic default modulus for degree n: the lexicographically
    /// smallest irreducible monic polynomial, reading lower-degree
    /// coefficients as lower-order bits.
    pub fn default_modulus(n: u32) -> Result<u64> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(n));
        }
        let base = 1u64 << n;
        let mut c = base | 1;
        while c < base << 1 {
            if gf2_is_irreducible(c, n) {
                return Ok(c);
            }
            c += 2;
        }
        unreachable!("an irreducible polynomial of degree {n} exists");
    }

    pub fn with_default_modulus(n: u32) -> Result<FieldSpec> {
        Ok(FieldSpec {
            n,
            modulus: Self::default_modulus(n)?,
        })
    }

    /// Parses the `2^n` / `2^n/0xMOD` notation.
    pub fn parse(text: &str) -> Result<FieldSpec> {
        let bad = || Error::InvariantViolation(format!("malformed field notation `{text}`"));
        let rest = text.trim().strip_prefix("2^").ok_or_else(bad)?;
        let (npart, modpart) = match rest.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (rest, None),
        };
        let n: u32 = npart.parse().map_err(|_| bad())?;
        match modpart {
            None => Self::with_default_modulus(n),
            Some(m) => {
                let digits = m
                    .strip_prefix("0x")
                    .or_else(|| m.strip_prefix("0X"))
                    .ok_or_else(bad)?;
                let modulus = u64::from_str_radix(digits, 16).map_err(|_| bad())?;
                Self::new(n, modulus)
            }
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Field cardinality 2^n.
    pub fn order(&self) -> u64 {
        1u64 << self.n
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            spec: *self,
            bits: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            spec: *self,
            bits: 1,
        }
    }

    /// The polynomial-basis element x (reduced: equal to 1 when n = 1).
    pub fn generator(&self) -> FieldElement {
        FieldElement {
            spec: *self,
            bits: if self.n == 1 { 1 } else { 2 },
        }
    }

    /// Element from its coordinate bits.
    pub fn element(&self, bits: u64) -> Result<FieldElement> {
        if bits >> self.n != 0 {
            return Err(Error::ElementOutOfRange { bits, n: self.n });
        }
        Ok(FieldElement { spec: *self, bits })
    }

    pub(crate) fn element_unchecked(&self, bits: u64) -> FieldElement {
        debug_assert!(bits >> self.n == 0);
        FieldElement { spec: *self, bits }
    }

    /// All 2^n elements in increasing bit order, starting at 0.
    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(move |bits| FieldElement { spec: self, bits })
    }

    // ---- bit-level kernels -------------------------------------------------

    pub(crate) fn mul_bits(&self, a: u64, b: u64) -> u64 {
        let mut acc = gf2_mul(a, b);
        let n = self.n as i32;
        let mut d = gf2_degree(acc);
        while d >= n {
            acc ^= self.modulus << (d - n);
            d = gf2_degree(acc);
        }
        acc
    }

    pub(crate) fn sq_bits(&self, a: u64) -> u64 {
        self.mul_bits(a, a)
    }

    pub(crate) fn pow_bits(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul_bits(acc, a);
            }
            a = self.sq_bits(a);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv_bits(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_bits(a, self.order() - 2))
    }

    pub(crate) fn frob_bits(&self, mut a: u64, i: u32) -> u64 {
        for _ in 0..(i % self.n) {
            a = self.sq_bits(a);
        }
        a
    }

    pub(crate) fn sqrt_bits(&self, a: u64) -> u64 {
        self.frob_bits(a, self.n - 1)
    }
}

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

/// An element of GF(2^n), tied to its [`FieldSpec`].
///
/// The arithmetic operators panic when the operands live in different fields;
/// mixing fields is a caller bug, and explicit embedding via
/// [`FieldElement::embed_into`] is the supported conversion.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    spec: FieldSpec,
    bits: u64,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:X}@{}", self.bits, self.spec)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:X}", self.bits)
    }
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_one(&self) -> bool {
        self.bits == 1
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement {
            spec: self.spec,
            bits: self.spec.inv_bits(self.bits)?,
        })
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement {
            spec: self.spec,
            bits: self.spec.pow_bits(self.bits, e),
        }
    }

    /// Frobenius iterate: a^(2^i).
    pub fn frobenius(&self, i: u32) -> FieldElement {
        FieldElement {
            spec: self.spec,
            bits: self.spec.frob_bits(self.bits, i),
        }
    }

    /// The unique square root (the Frobenius inverse).
    pub fn sqrt(&self) -> FieldElement {
        FieldElement {
            spec: self.spec,
            bits: self.spec.sqrt_bits(self.bits),
        }
    }

    /// Membership in the subfield GF(2^m): requires m | n, and holds iff
    /// a^(2^m) = a.
    pub fn in_subfield(&self, m: u32) -> Result<bool> {
        let n = self.spec.n;
        if m == 0 || n % m != 0 {
            return Err(Error::NotASubfield { m, n });
        }
        // frob_bits reduces the iterate count mod n, so m = n tests the identity
        Ok(self.spec.frob_bits(self.bits, m) == self.bits)
    }

    /// Ring-preserving injection of this element into a larger field; the
    /// source degree must divide the target degree.
    pub fn embed_into(&self, target: FieldSpec) -> Result<FieldElement> {
        if self.spec == target {
            return Ok(*self);
        }
        let emb = embedding(self.spec, target)?;
        Ok(FieldElement {
            spec: target,
            bits: emb.apply(self.bits),
        })
    }

    /// Inverse of [`FieldElement::embed_into`]: the preimage in `target`, or
    /// `None` if this element is not in the embedded image.
    pub fn project_into(&self, target: FieldSpec) -> Result<Option<FieldElement>> {
        if self.spec == target {
            return Ok(Some(*self));
        }
        let emb = embedding(target, self.spec)?;
        Ok(emb
            .unapply(self.bits)
            .map(|bits| FieldElement { spec: target, bits }))
    }
}

fn check_specs(a: &FieldElement, b: &FieldElement) {
    assert_eq!(
        a.spec, b.spec,
        "FieldElement arithmetic across different fields"
    );
}

impl Add for FieldElement {
    type Output = FieldElement;
    // addition is coordinate-wise xor in the polynomial basis
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FieldElement) -> FieldElement {
        check_specs(&self, &rhs);
        FieldElement {
            spec: self.spec,
            bits: self.bits ^ rhs.bits,
        }
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        *self = *self + rhs;
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    // subtraction coincides with addition in characteristic 2
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self + rhs
    }
}

impl SubAssign for FieldElement {
    fn sub_assign(&mut self, rhs: FieldElement) {
        *self = *self - rhs;
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        check_specs(&self, &rhs);
        FieldElement {
            spec: self.spec,
            bits: self.spec.mul_bits(self.bits, rhs.bits),
        }
    }
}

impl MulAssign for FieldElement {
    fn mul_assign(&mut self, rhs: FieldElement) {
        *self = *self * rhs;
    }
}

// ---------------------------------------------------------------------------
// Subfield embeddings
// ---------------------------------------------------------------------------

/// A precomputed generator-image homomorphism GF(2^m) -> GF(2^n), plus the
/// GF(2)-linear data needed to invert it on its image.
struct Embedding {
    /// powers[i] = root^i in target bits, i < m, where root is the canonical
    /// (smallest-bits) image of the source polynomial-basis element.
    powers: Vec<u64>,
    /// reduced GF(2)-basis of the image: (pivot-reduced vector, source combo)
    basis: Vec<(u64, u64)>,
}

impl Embedding {
    fn apply(&self, src_bits: u64) -> u64 {
        let mut acc = 0;
        let mut b = src_bits;
        let mut i = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= self.powers[i];
            }
            b >>= 1;
            i += 1;
        }
        acc
    }

    fn unapply(&self, dst_bits: u64) -> Option<u64> {
        let mut v = dst_bits;
        let mut combo = 0u64;
        for &(row, c) in &self.basis {
            let pivot = 63 - row.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= row;
                combo ^= c;
            }
        }
        if v == 0 {
            Some(combo)
        } else {
            None
        }
    }
}

fn embedding_cache() -> &'static Mutex<HashMap<(FieldSpec, FieldSpec), Arc<Embedding>>> {
    static CACHE: OnceLock<Mutex<HashMap<(FieldSpec, FieldSpec), Arc<Embedding>>>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn embedding(src: FieldSpec, dst: FieldSpec) -> Result<Arc<Embedding>> {
    if dst.n % src.n != 0 {
        return Err(Error::NotASubfield { m: src.n, n: dst.n });
    }
    if let Some(e) = embedding_cache().lock().unwrap().get(&(src, dst)) {
        return Ok(e.clone());
    }
    let emb = Arc::new(compute_embedding(src, dst));
    embedding_cache()
        .lock()
        .unwrap()
        .insert((src, dst), emb.clone());
    Ok(emb)
}

/// Finds the canonical root of the source modulus inside the target field and
/// tabulates the induced GF(2)-linear map.
fn compute_embedding(src: FieldSpec, dst: FieldSpec) -> Embedding {
    let m = src.n as usize;
    // the source modulus, coefficients lifted to 0/1 elements of dst
    let f: Vec<u64> = (0..=m).map(|i| (src.modulus >> i) & 1).collect();
    let mut root = find_root(&f, dst);
    // canonicalize: smallest conjugate root^(2^j)
    let mut best = root;
    for _ in 1..m {
        root = dst.sq_bits(root);
        if root < best {
            best = root;
        }
    }
    let root = best;

    let mut powers = Vec::with_capacity(m);
    let mut p = 1u64;
    for _ in 0..m {
        powers.push(p);
        p = dst.mul_bits(p, root);
    }

    // pivot-reduced basis with combination tracking, for projection back
    let mut basis: Vec<(u64, u64)> = Vec::new();
    for (i, &pw) in powers.iter().enumerate() {
        let mut v = pw;
        let mut combo = 1u64 << i;
        for &(row, c) in &basis {
            let pivot = 63 - row.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= row;
                combo ^= c;
            }
        }
        debug_assert!(v != 0, "embedding powers must be GF(2)-independent");
        basis.push((v, combo));
        basis.sort_by_key(|&(row, _)| std::cmp::Reverse(row));
    }

    Embedding { powers, basis }
}

// Dense polynomial helpers over an arbitrary FieldSpec, local to root
// finding. Coefficient index = degree.

fn pv_trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn pv_rem(mut a: Vec<u64>, b: &[u64], spec: FieldSpec) -> Vec<u64> {
    let db = b.len() - 1;
    let lc_inv = spec.inv_bits(b[db]).expect("nonzero divisor");
    while a.len() > db {
        let da = a.len() - 1;
        let factor = spec.mul_bits(a[da], lc_inv);
        if factor != 0 {
            for (i, &bc) in b.iter().enumerate() {
                a[da - db + i] ^= spec.mul_bits(factor, bc);
            }
        }
        a.pop();
        pv_trim(&mut a);
        if a.is_empty() {
            break;
        }
    }
    a
}

fn pv_mulmod(a: &[u64], b: &[u64], f: &[u64], spec: FieldSpec) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ac) in a.iter().enumerate() {
        if ac == 0 {
            continue;
        }
        for (j, &bc) in b.iter().enumerate() {
            prod[i + j] ^= spec.mul_bits(ac, bc);
        }
    }
    pv_trim(&mut prod);
    if prod.is_empty() {
        return prod;
    }
    pv_rem(prod, f, spec)
}

fn pv_gcd(mut a: Vec<u64>, mut b: Vec<u64>, spec: FieldSpec) -> Vec<u64> {
    pv_trim(&mut a);
    pv_trim(&mut b);
    while !b.is_empty() {
        let r = pv_rem(a, &b, spec);
        a = b;
        b = r;
    }
    // monic-normalize
    if let Some(&lc) = a.last() {
        if lc != 1 {
            let inv = spec.inv_bits(lc).unwrap();
            for c in &mut a {
                *c = spec.mul_bits(*c, inv);
            }
        }
    }
    a
}

fn pv_div_exact(mut a: Vec<u64>, b: &[u64], spec: FieldSpec) -> Vec<u64> {
    let db = b.len() - 1;
    let lc_inv = spec.inv_bits(b[db]).expect("nonzero divisor");
    let mut q = vec![0u64; a.len() - db];
    while a.len() > db {
        let da = a.len() - 1;
        let factor = spec.mul_bits(a[da], lc_inv);
        q[da - db] = factor;
        if factor != 0 {
            for (i, &bc) in b.iter().enumerate() {
                a[da - db + i] ^= spec.mul_bits(factor, bc);
            }
        }
        a.pop();
        pv_trim(&mut a);
        if a.is_empty() {
            break;
        }
    }
    debug_assert!(a.is_empty(), "division must be exact here");
    q
}

/// One root in `spec` of a squarefree polynomial (given dense over `spec`)
/// that splits completely there, via deterministic trace splitting.
fn find_root(f: &[u64], spec: FieldSpec) -> u64 {
    let mut f = f.to_vec();
    pv_trim(&mut f);
    assert!(f.len() >= 2);
    let mut counter = 1u64;
    while f.len() > 2 {
        let delta = counter % spec.order();
        counter += 1;
        if delta == 0 {
            continue;
        }
        // T(y) = sum_{i<n} (delta*y)^(2^i) mod f
        let dy = vec![0, delta];
        let mut cur = pv_rem(dy.clone(), &f, spec);
        let mut acc = cur.clone();
        for _ in 1..spec.n {
            cur = pv_mulmod(&cur, &cur, &f, spec);
            let len = acc.len().max(cur.len());
            acc.resize(len, 0);
            for (i, &c) in cur.iter().enumerate() {
                acc[i] ^= c;
            }
            pv_trim(&mut acc);
        }
        if acc.is_empty() {
            continue;
        }
        let g = pv_gcd(f.clone(), acc, spec);
        if g.len() > 1 && g.len() < f.len() {
            let q = pv_div_exact(f.clone(), &g, spec);
            f = if g.len() <= q.len() { g } else { q };
        }
    }
    // monic linear y + c has root c in characteristic 2
    let lc_inv = spec.inv_bits(f[1]).unwrap();
    spec.mul_bits(f[0], lc_inv)
}
