//! Sparse trivariate polynomials over GF(2^n).
//!
//! Terms are kept in a map from exponent triples to nonzero coefficients,
//! ordered graded-lexicographically with x > y > z. Bivariate polynomials are
//! represented with all z-exponents zero; a single type avoids duplicate
//! arithmetic.
//!
//! Text form: terms `C*x^I*y^J*z^K` joined by `+`, same coefficient notation
//! as the univariate module.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::field::{FieldElement, FieldSpec};
use crate::unipoly::UniPoly;
use crate::Result;

/// Exponent triple. The ordering is graded lex with x > y > z, which is the
/// term order used for exact division.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub x: u16,
    pub y: u16,
    pub z: u16,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0, z: 0 };

    pub fn new(x: u16, y: u16, z: u16) -> Self {
        Monomial { x, y, z }
    }

    pub fn degree(&self) -> u32 {
        self.x as u32 + self.y as u32 + self.z as u32
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.x <= other.x && self.y <= other.y && self.z <= other.z
    }

    fn sub(&self, other: &Monomial) -> Monomial {
        Monomial {
            x: self.x - other.x,
            y: self.y - other.y,
            z: self.z - other.z,
        }
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            x: self.x + other.x,
            y: self.y + other.y,
            z: self.z + other.z,
        }
    }

    pub fn get(&self, v: Var) -> u16 {
        match v {
            Var::X => self.x,
            Var::Y => self.y,
            Var::Z => self.z,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.x.cmp(&other.x))
            .then(self.y.cmp(&other.y))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X,
    Y,
    Z,
}

/// A per-variable substitution directive for [`TriPoly::substitute`].
#[derive(Clone, Copy, Debug)]
pub enum Subst {
    Keep,
    Value(FieldElement),
}

/// Sparse trivariate polynomial; no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TriPoly {
    spec: FieldSpec,
    terms: BTreeMap<Monomial, u64>,
}

impl fmt::Debug for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TriPoly({self})")
    }
}

impl TriPoly {
    pub fn zero(spec: FieldSpec) -> Self {
        TriPoly {
            spec,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        let mut p = TriPoly::zero(c.spec());
        p.add_term_bits(Monomial::ONE, c.bits());
        p
    }

    pub fn one(spec: FieldSpec) -> Self {
        TriPoly::constant(spec.one())
    }

    /// The variable `v` as a polynomial.
    pub fn var(spec: FieldSpec, v: Var) -> Self {
        let m = match v {
            Var::X => Monomial::new(1, 0, 0),
            Var::Y => Monomial::new(0, 1, 0),
            Var::Z => Monomial::new(0, 0, 1),
        };
        let mut p = TriPoly::zero(spec);
        p.add_term_bits(m, 1);
        p
    }

    /// `(x+y)(y+z)(z+x)`, expanded; in characteristic 2 the `xyz` term
    /// cancels, leaving six terms.
    pub fn e3(spec: FieldSpec) -> Self {
        let mut p = TriPoly::zero(spec);
        for (x, y, z) in [(2, 1, 0), (2, 0, 1), (1, 2, 0), (0, 2, 1), (1, 0, 2), (0, 1, 2)] {
            p.add_term_bits(Monomial::new(x, y, z), 1);
        }
        p
    }

    /// Lifts a univariate polynomial into the variable `v`.
    pub fn from_unipoly(p: &UniPoly, v: Var) -> Self {
        let mut out = TriPoly::zero(p.spec());
        for (e, &c) in p.coeff_bits().iter().enumerate() {
            if c != 0 {
                let e = e as u16;
                let m = match v {
                    Var::X => Monomial::new(e, 0, 0),
                    Var::Y => Monomial::new(0, e, 0),
                    Var::Z => Monomial::new(0, 0, e),
                };
                out.add_term_bits(m, c);
            }
        }
        out
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, FieldElement)> + '_ {
        self.terms
            .iter()
            .map(|(&m, &c)| (m, self.spec.element_unchecked(c)))
    }

    pub(crate) fn term_bits(&self) -> impl Iterator<Item = (Monomial, u64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coeff(&self, m: Monomial) -> FieldElement {
        self.spec
            .element_unchecked(self.terms.get(&m).copied().unwrap_or(0))
    }

    /// xor-adds `c * x^i y^j z^k` into the polynomial.
    pub fn add_term(&mut self, m: Monomial, c: FieldElement) {
        assert_eq!(c.spec(), self.spec, "coefficient from a different field");
        self.add_term_bits(m, c.bits());
    }

    /// xor-adds a coefficient, pruning zeros.
    pub(crate) fn add_term_bits(&mut self, m: Monomial, bits: u64) {
        if bits == 0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(bits);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = *e.get() ^ bits;
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.get(v) as u32).max().unwrap_or(0)
    }

    /// `Some(d)` when the polynomial is nonzero and homogeneous of degree d.
    pub fn is_homogeneous(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.degree());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Leading term under graded lex, unless zero.
    pub fn leading(&self) -> Option<(Monomial, FieldElement)> {
        self.terms
            .last_key_value()
            .map(|(&m, &c)| (m, self.spec.element_unchecked(c)))
    }

    /// Scales so the graded-lex leading coefficient is 1; returns the unit.
    pub fn make_monic(&self) -> (TriPoly, FieldElement) {
        match self.leading() {
            None => (self.clone(), self.spec.one()),
            Some((_, lc)) => {
                if lc.is_one() {
                    (self.clone(), lc)
                } else {
                    (self.scale(lc.inv().unwrap()), lc)
                }
            }
        }
    }

    fn check_same_field(&self, other: &Self) {
        assert_eq!(self.spec, other.spec, "polynomials over different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let mut out = self.clone();
        for (m, c) in other.term_bits() {
            out.add_term_bits(m, c);
        }
        out
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        assert_eq!(c.spec(), self.spec);
        if c.is_zero() {
            return TriPoly::zero(self.spec);
        }
        let mut out = TriPoly::zero(self.spec);
        for (m, a) in self.term_bits() {
            out.terms.insert(m, self.spec.mul_bits(a, c.bits()));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let mut out = TriPoly::zero(self.spec);
        // iterate the smaller operand on the outside
        let (small, big) = if self.num_terms() <= other.num_terms() {
            (self, other)
        } else {
            (other, self)
        };
        for (ma, ca) in small.term_bits() {
            for (mb, cb) in big.term_bits() {
                out.add_term_bits(ma.mul(&mb), self.spec.mul_bits(ca, cb));
            }
        }
        out
    }

    /// Term-wise squaring (valid because squaring is additive in
    /// characteristic 2).
    pub fn square(&self) -> Self {
        let mut out = TriPoly::zero(self.spec);
        for (m, c) in self.term_bits() {
            out.terms.insert(
                Monomial::new(m.x * 2, m.y * 2, m.z * 2),
                self.spec.sq_bits(c),
            );
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = TriPoly::one(self.spec);
        while e != 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e != 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Exact quotient `self / divisor` under graded lex, or `None` when the
    /// division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        self.check_same_field(divisor);
        let (lt_m, lt_c) = divisor.leading().expect("division by zero polynomial");
        let lt_inv = lt_c.inv().unwrap().bits();
        let mut rem = self.clone();
        let mut quot = TriPoly::zero(self.spec);
        while let Some((m, c)) = rem.leading() {
            if !lt_m.divides(&m) {
                return None;
            }
            let qm = m.sub(&lt_m);
            let qc = self.spec.mul_bits(c.bits(), lt_inv);
            quot.add_term_bits(qm, qc);
            for (dm, dc) in divisor.term_bits() {
                rem.add_term_bits(qm.mul(&dm), self.spec.mul_bits(qc, dc));
            }
        }
        Some(quot)
    }

    /// Splits into homogeneous parts keyed by total degree.
    pub fn homogeneous_parts(&self) -> HomogeneousDecomposition {
        let mut parts: BTreeMap<u32, TriPoly> = BTreeMap::new();
        for (m, c) in self.term_bits() {
            parts
                .entry(m.degree())
                .or_insert_with(|| TriPoly::zero(self.spec))
                .add_term_bits(m, c);
        }
        HomogeneousDecomposition { parts }
    }

    /// The homogeneous part of highest degree.
    pub fn top_part(&self) -> TriPoly {
        match self.total_degree() {
            None => TriPoly::zero(self.spec),
            Some(d) => {
                let mut out = TriPoly::zero(self.spec);
                for (m, c) in self.term_bits() {
                    if m.degree() == d {
                        out.add_term_bits(m, c);
                    }
                }
                out
            }
        }
    }

    /// Substitution homomorphism; assigned variables are evaluated, kept
    /// variables survive.
    pub fn substitute(&self, subst: [Subst; 3]) -> TriPoly {
        for s in &subst {
            if let Subst::Value(v) = s {
                assert_eq!(v.spec(), self.spec, "substituted value from another field");
            }
        }
        let mut out = TriPoly::zero(self.spec);
        for (m, c) in self.term_bits() {
            let mut coeff = c;
            let mut kept = Monomial::ONE;
            for (i, &e) in [m.x, m.y, m.z].iter().enumerate() {
                match subst[i] {
                    Subst::Keep => match i {
                        0 => kept.x = e,
                        1 => kept.y = e,
                        _ => kept.z = e,
                    },
                    Subst::Value(v) => {
                        coeff = self
                            .spec
                            .mul_bits(coeff, self.spec.pow_bits(v.bits(), e as u64));
                        if coeff == 0 {
                            break;
                        }
                    }
                }
            }
            out.add_term_bits(kept, coeff);
        }
        out
    }

    /// Reads the polynomial as univariate in `v`; `None` when another
    /// variable occurs.
    pub fn as_unipoly(&self, v: Var) -> Option<UniPoly> {
        let mut coeffs = vec![0u64; self.degree_in(v) as usize + 1];
        for (m, c) in self.term_bits() {
            if m.degree() != m.get(v) as u32 {
                return None;
            }
            coeffs[m.get(v) as usize] = c;
        }
        Some(UniPoly::from_bits(self.spec, &coeffs))
    }

    /// Specializes at `(x, 0, 1)`, the load-bearing specialization for the
    /// Kasami factor structure.
    pub fn specialize_x01(&self) -> UniPoly {
        self.substitute([
            Subst::Keep,
            Subst::Value(self.spec.zero()),
            Subst::Value(self.spec.one()),
        ])
        .as_unipoly(Var::X)
        .expect("only x survives the substitution")
    }

    pub fn eval(&self, at: [FieldElement; 3]) -> FieldElement {
        let p = self.substitute([Subst::Value(at[0]), Subst::Value(at[1]), Subst::Value(at[2])]);
        p.coeff(Monomial::ONE)
    }

    /// `z := 1`.
    pub fn dehomogenize_z(&self) -> TriPoly {
        self.substitute([Subst::Keep, Subst::Keep, Subst::Value(self.spec.one())])
    }

    /// Multiplies each term by the power of z that lifts it to total degree
    /// `d`. Panics when some term already exceeds d.
    pub fn homogenize_z_to(&self, d: u32) -> TriPoly {
        let mut out = TriPoly::zero(self.spec);
        for (m, c) in self.term_bits() {
            let deg = m.degree();
            assert!(deg <= d, "term degree {deg} exceeds target {d}");
            out.add_term_bits(Monomial::new(m.x, m.y, m.z + (d - deg) as u16), c);
        }
        out
    }

    pub fn swap_xy(&self) -> TriPoly {
        let mut out = TriPoly::zero(self.spec);
        for (m, c) in self.term_bits() {
            out.terms.insert(Monomial::new(m.y, m.x, m.z), c);
        }
        out
    }

    /// Applies the coefficient Frobenius a -> a^(2^i) term-wise.
    pub fn frobenius_coeffs(&self, i: u32) -> TriPoly {
        let mut out = TriPoly::zero(self.spec);
        for (m, c) in self.term_bits() {
            out.terms.insert(m, self.spec.frob_bits(c, i));
        }
        out
    }

    pub fn embed_into(&self, target: FieldSpec) -> Result<TriPoly> {
        if target == self.spec {
            return Ok(self.clone());
        }
        let mut out = TriPoly::zero(target);
        for (m, c) in self.term_bits() {
            let e = self.spec.element_unchecked(c).embed_into(target)?;
            out.terms.insert(m, e.bits());
        }
        Ok(out)
    }

    /// Maps coefficients back into a subfield; `None` when some coefficient
    /// lies outside the embedded image.
    pub fn project_into(&self, target: FieldSpec) -> Result<Option<TriPoly>> {
        if target == self.spec {
            return Ok(Some(self.clone()));
        }
        let mut out = TriPoly::zero(target);
        for (m, c) in self.term_bits() {
            match self.spec.element_unchecked(c).project_into(target)? {
                None => return Ok(None),
                Some(e) => {
                    out.terms.insert(m, e.bits());
                }
            }
        }
        Ok(Some(out))
    }
}

/// A polynomial split into homogeneous slices; reassembling the parts yields
/// the original polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousDecomposition {
    pub parts: BTreeMap<u32, TriPoly>,
}

impl HomogeneousDecomposition {
    pub fn reassemble(&self, spec: FieldSpec) -> TriPoly {
        let mut acc = TriPoly::zero(spec);
        for p in self.parts.values() {
            acc = acc.add(p);
        }
        acc
    }
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0x0");
        }
        let mut first = true;
        for (&m, &c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut wrote = false;
            if c != 1 || m == Monomial::ONE {
                write!(f, "0x{c:X}")?;
                wrote = true;
            }
            for (sym, e) in [("x", m.x), ("y", m.y), ("z", m.z)] {
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                wrote = true;
                if e == 1 {
                    write!(f, "{sym}")?;
                } else {
                    write!(f, "{sym}^{e}")?;
                }
            }
        }
        Ok(())
    }
}
