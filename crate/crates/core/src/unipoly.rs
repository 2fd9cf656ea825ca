//! Dense univariate polynomials over GF(2^n): ring arithmetic, gcd,
//! irreducibility testing and full factorization.
//!
//! Factorization runs squarefree decomposition, distinct-degree splitting and
//! a trace-based equal-degree split (the characteristic-2 Cantor–Zassenhaus
//! variant). The random choices inside equal-degree splitting come from a
//! counter generator seeded by a hash of the input polynomial, so repeated
//! runs produce identical output.
//!
//! Text form used by the CLI and reports: terms `C*x^E` joined by `+`, with
//! coefficients in the hex notation of the field module. `x` alone means
//! exponent 1, an omitted coefficient means 1.

use std::fmt;

use crate::field::{FieldElement, FieldSpec};
use crate::rng::{fnv1a, DetRng};
use crate::{Error, Result};

/// Dense univariate polynomial; index = exponent. The zero polynomial has an
/// empty coefficient vector, and the leading coefficient is always nonzero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniPoly {
    spec: FieldSpec,
    coeffs: Vec<u64>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl UniPoly {
    pub fn zero(spec: FieldSpec) -> Self {
        UniPoly {
            spec,
            coeffs: Vec::new(),
        }
    }

    pub fn one(spec: FieldSpec) -> Self {
        UniPoly {
            spec,
            coeffs: vec![1],
        }
    }

    pub fn x(spec: FieldSpec) -> Self {
        UniPoly {
            spec,
            coeffs: vec![0, 1],
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        UniPoly::from_bits(c.spec(), &[c.bits()])
    }

    /// `c * x^e`.
    pub fn monomial(c: FieldElement, e: usize) -> Self {
        let mut coeffs = vec![0u64; e + 1];
        coeffs[e] = c.bits();
        let mut p = UniPoly {
            spec: c.spec(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn from_elements(spec: FieldSpec, coeffs: &[FieldElement]) -> Self {
        for c in coeffs {
            assert_eq!(c.spec(), spec, "coefficient from a different field");
        }
        UniPoly::from_bits(spec, &coeffs.iter().map(|c| c.bits()).collect::<Vec<_>>())
    }

    pub(crate) fn from_bits(spec: FieldSpec, coeffs: &[u64]) -> Self {
        let mut p = UniPoly {
            spec,
            coeffs: coeffs.to_vec(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.spec
            .element_unchecked(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub(crate) fn coeff_bits(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> FieldElement {
        self.spec
            .element_unchecked(self.coeffs.last().copied().unwrap_or(0))
    }

    /// Exponents carrying a nonzero coefficient, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
    }

    fn check_same_field(&self, other: &Self) {
        assert_eq!(self.spec, other.spec, "polynomials over different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let mut coeffs = vec![0u64; self.coeffs.len().max(other.coeffs.len())];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeffs.get(i).copied().unwrap_or(0)
                ^ other.coeffs.get(i).copied().unwrap_or(0);
        }
        let mut p = UniPoly {
            spec: self.spec,
            coeffs,
        };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_field(other);
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.spec);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    coeffs[i + j] ^= self.spec.mul_bits(a, b);
                }
            }
        }
        UniPoly {
            spec: self.spec,
            coeffs,
        }
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        assert_eq!(c.spec(), self.spec);
        if c.is_zero() {
            return UniPoly::zero(self.spec);
        }
        UniPoly {
            spec: self.spec,
            coeffs: self
                .coeffs
                .iter()
                .map(|&a| self.spec.mul_bits(a, c.bits()))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = UniPoly::one(self.spec);
        while e != 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e != 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient and remainder with `deg rem < deg divisor`.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_same_field(divisor);
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let db = divisor.coeffs.len() - 1;
        let lc_inv = self.spec.inv_bits(divisor.coeffs[db])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((UniPoly::zero(self.spec), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - db];
        while rem.len() > db {
            let da = rem.len() - 1;
            let factor = self.spec.mul_bits(rem[da], lc_inv);
            quot[da - db] = factor;
            if factor != 0 {
                for (i, &bc) in divisor.coeffs.iter().enumerate() {
                    rem[da - db + i] ^= self.spec.mul_bits(factor, bc);
                }
            }
            rem.pop();
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        Ok((
            UniPoly::from_bits(self.spec, &quot),
            UniPoly::from_bits(self.spec, &rem),
        ))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(divisor)?.1)
    }

    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.divrem(divisor).expect("nonzero divisor");
        assert!(r.is_zero(), "division was not exact");
        q
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.into_monic().0
    }

    /// Extended gcd: returns monic `g` and `(u, v)` with `u*self + v*other = g`.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        self.check_same_field(other);
        let spec = self.spec;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (UniPoly::one(spec), UniPoly::zero(spec));
        let (mut v0, mut v1) = (UniPoly::zero(spec), UniPoly::one(spec));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).unwrap();
            let nu = u0.add(&q.mul(&u1));
            let nv = v0.add(&q.mul(&v1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = nu;
            v0 = v1;
            v1 = nv;
        }
        if r0.is_zero() {
            return (r0, u0, v0);
        }
        let lc = r0.leading_coeff().inv().unwrap();
        (r0.scale(lc), u0.scale(lc), v0.scale(lc))
    }

    /// Splits into `(monic, unit)` with `self = unit * monic`.
    pub fn into_monic(self) -> (Self, FieldElement) {
        if self.is_zero() {
            let one = self.spec.one();
            return (self, one);
        }
        let lc = self.leading_coeff();
        if lc.is_one() {
            return (self, lc);
        }
        let inv = lc.inv().unwrap();
        (self.scale(inv), lc)
    }

    /// Horner evaluation.
    pub fn eval(&self, at: FieldElement) -> FieldElement {
        assert_eq!(at.spec(), self.spec, "evaluation point from another field");
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = self.spec.mul_bits(acc, at.bits()) ^ c;
        }
        self.spec.element_unchecked(acc)
    }

    /// Formal derivative (in characteristic 2 only odd-degree terms survive).
    pub fn derivative(&self) -> Self {
        let mut coeffs = vec![0u64; self.coeffs.len().saturating_sub(1)];
        for (i, c) in coeffs.iter_mut().enumerate() {
            if i % 2 == 0 {
                *c = self.coeffs[i + 1];
            }
        }
        UniPoly::from_bits(self.spec, &coeffs)
    }

    /// Square root, when every exponent is even (coefficient-wise roots always
    /// exist over a finite field of characteristic 2).
    pub fn sqrt(&self) -> Option<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|&c| c != 0) {
            return None;
        }
        let coeffs: Vec<u64> = self
            .coeffs
            .iter()
            .step_by(2)
            .map(|&c| self.spec.sqrt_bits(c))
            .collect();
        Some(UniPoly::from_bits(self.spec, &coeffs))
    }

    /// `p(x + c)` by Horner over the shifted variable.
    pub fn compose_shift(&self, c: FieldElement) -> Self {
        assert_eq!(c.spec(), self.spec);
        let shift = UniPoly::from_bits(self.spec, &[c.bits(), 1]);
        let mut acc = UniPoly::zero(self.spec);
        for &a in self.coeffs.iter().rev() {
            acc = acc.mul(&shift);
            acc = acc.add(&UniPoly::from_bits(self.spec, &[a]));
        }
        acc
    }

    pub fn embed_into(&self, target: FieldSpec) -> Result<Self> {
        if target == self.spec {
            return Ok(self.clone());
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            coeffs.push(
                self.spec
                    .element_unchecked(c)
                    .embed_into(target)?
                    .bits(),
            );
        }
        Ok(UniPoly::from_bits(target, &coeffs))
    }

    /// Rewrites the polynomial over the smallest subfield containing all of
    /// its coefficients (e.g. a 0/1-coefficient polynomial parsed over GF(32)
    /// comes back over GF(2)).
    pub fn reduce_to_minimal_subfield(&self) -> Self {
        let n = self.spec.n();
        for m in 1..n {
            if n % m != 0 {
                continue;
            }
            let all_in = self
                .coeffs
                .iter()
                .all(|&c| self.spec.element_unchecked(c).in_subfield(m).unwrap());
            if !all_in {
                continue;
            }
            let sub = FieldSpec::with_default_modulus(m).expect("m < n <= 32");
            let mut bits = Vec::with_capacity(self.coeffs.len());
            let mut ok = true;
            for &c in &self.coeffs {
                match self
                    .spec
                    .element_unchecked(c)
                    .project_into(sub)
                    .expect("m divides n")
                {
                    Some(e) => bits.push(e.bits()),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return UniPoly::from_bits(sub, &bits);
            }
        }
        self.clone()
    }

    /// Newton interpolation through distinct points.
    pub fn interpolate(spec: FieldSpec, points: &[(FieldElement, FieldElement)]) -> Self {
        // divided differences, then incremental basis build
        let k = points.len();
        let mut dd: Vec<FieldElement> = points.iter().map(|&(_, y)| y).collect();
        for level in 1..k {
            for i in (level..k).rev() {
                let num = dd[i] + dd[i - 1];
                let den = points[i].0 + points[i - level].0;
                dd[i] = num * den.inv().expect("interpolation points must be distinct");
            }
        }
        let mut acc = UniPoly::zero(spec);
        let mut basis = UniPoly::one(spec);
        for i in 0..k {
            acc = acc.add(&basis.scale(dd[i]));
            basis = basis.mul(&UniPoly::from_bits(spec, &[points[i].0.bits(), 1]));
        }
        acc
    }

    fn mulmod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus).unwrap()
    }

    /// x^(q^e) mod self, computed by n*e modular squarings (q = 2^n).
    fn x_q_power_mod(&self, e: usize) -> Self {
        let mut h = UniPoly::x(self.spec).rem(self).unwrap();
        for _ in 0..(self.spec.n() as usize * e) {
            h = h.mulmod(&h, self);
        }
        h
    }

    /// Irreducibility over the coefficient field, by the x^(q^d) = x
    /// criterion with gcd conditions at the proper divisors of d.
    pub fn uni_is_irreducible(&self) -> bool {
        let d = match self.degree() {
            None | Some(0) => return false,
            Some(d) => d,
        };
        if d == 1 {
            return true;
        }
        let (f, _) = self.clone().into_monic();
        let x = UniPoly::x(self.spec);
        let mut primes = Vec::new();
        let mut t = d;
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
            let h = f.x_q_power_mod(d / p);
            if f.gcd(&h.add(&x)).degree() != Some(0) {
                return false;
            }
        }
        f.x_q_power_mod(d) == x.rem(&f).unwrap()
    }

    /// Complete factorization into monic irreducibles with multiplicities.
    pub fn factor(&self) -> UniFactorization {
        assert!(!self.is_zero(), "cannot factor the zero polynomial");
        let (monic, unit) = self.clone().into_monic();
        let mut factors: Vec<(UniPoly, u32)> = Vec::new();
        if monic.degree() > Some(0) {
            for (part, mult) in squarefree_decomposition(&monic) {
                for (prod, d) in distinct_degree(&part) {
                    for irr in equal_degree(&prod, d) {
                        factors.push((irr, mult));
                    }
                }
            }
        }
        factors.sort_by(|(a, ma), (b, mb)| {
            a.coeffs
                .len()
                .cmp(&b.coeffs.len())
                .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
                .then(ma.cmp(mb))
        });
        UniFactorization { unit, factors }
    }
}

/// Result of [`UniPoly::factor`]: `unit * prod factors[i]^mult[i]` equals the
/// input exactly, each factor monic irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniFactorization {
    pub unit: FieldElement,
    pub factors: Vec<(UniPoly, u32)>,
}

impl UniFactorization {
    pub fn product(&self) -> UniPoly {
        let mut acc = UniPoly::constant(self.unit);
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m as u64));
        }
        acc
    }
}

/// Characteristic-p squarefree decomposition (p = 2); perfect squares are
/// peeled via coefficient-wise roots.
fn squarefree_decomposition(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    debug_assert!(f.leading_coeff().is_one());
    let mut out = Vec::new();
    if f.is_one() {
        return out;
    }
    let fp = f.derivative();
    if fp.is_zero() {
        let r = f.sqrt().expect("vanishing derivative implies even support");
        return squarefree_decomposition(&r)
            .into_iter()
            .map(|(g, e)| (g, 2 * e))
            .collect();
    }
    let mut c = f.gcd(&fp);
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        let r = c.sqrt().expect("residual part must be a perfect square");
        out.extend(
            squarefree_decomposition(&r)
                .into_iter()
                .map(|(g, e)| (g, 2 * e)),
        );
    }
    out
}

/// Splits a monic squarefree polynomial into products of irreducibles of the
/// same degree.
fn distinct_degree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = UniPoly::x(f.spec);
    let mut h = x.rem(&f).unwrap();
    let mut d = 0usize;
    while f.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        for _ in 0..f.spec.n() {
            h = h.mulmod(&h, &f);
        }
        let g = f.gcd(&h.add(&x));
        if g.degree() > Some(0) {
            f = f.div_exact(&g);
            h = h.rem(&f).unwrap();
            out.push((g, d));
        }
    }
    if f.degree() > Some(0) {
        let d = f.degree().unwrap();
        out.push((f, d));
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting, characteristic-2 trace variant.
/// `f` is monic squarefree with all irreducible factors of degree `d`.
fn equal_degree(f: &UniPoly, d: usize) -> Vec<UniPoly> {
    let deg = f.degree().unwrap();
    if deg == d {
        return vec![f.clone()];
    }
    let spec = f.spec;
    let seed = fnv1a(
        std::iter::once(spec.modulus())
            .chain(std::iter::once(spec.n() as u64))
            .chain(f.coeffs.iter().copied()),
    );
    let mut rng = DetRng::new(seed);
    loop {
        let coeffs: Vec<u64> = (0..deg).map(|_| rng.below(spec.order())).collect();
        let u = UniPoly::from_bits(spec, &coeffs);
        if u.is_constant() {
            continue;
        }
        // GF(2)-trace of u in the product of degree-d residue fields
        let mut acc = u.clone();
        let mut cur = u;
        for _ in 1..(spec.n() as usize * d) {
            cur = cur.mulmod(&cur, f);
            acc = acc.add(&cur);
        }
        let g = f.gcd(&acc);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < deg {
            let mut left = equal_degree(&g, d);
            let right = equal_degree(&f.div_exact(&g), d);
            left.extend(right);
            return left;
        }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0x0");
        }
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[i];
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (c, i) {
                (_, 0) => write!(f, "0x{c:X}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "x^{i}")?,
                (_, 1) => write!(f, "0x{c:X}*x")?,
                (_, _) => write!(f, "0x{c:X}*x^{i}")?,
            }
        }
        Ok(())
    }
}
