//! Construction of the surface polynomial
//!
//! ```text
//! phi(x,y,z) = (f(x) + f(y) + f(z) + f(x+y+z)) / ((x+y)(x+z)(y+z))
//! ```
//!
//! The numerator vanishes on each hyperplane x=y, x=z, y=z in characteristic
//! 2, so the division is always exact. `phi_j` denotes the polynomial
//! attached to the monomial `x^j`; it vanishes for j in {0, 1, 2} and for all
//! powers of two, and is otherwise homogeneous of total degree j-3.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::field::{FieldElement, FieldSpec};
use crate::tripoly::{Monomial, TriPoly};
use crate::unipoly::UniPoly;

/// `(x + y + z)^j` over the given field.
///
/// All multinomial coefficients are 0 or 1 in characteristic 2 (the surviving
/// monomials are exactly the partitions of the bits of j among the three
/// variables), so the expansion has 3^popcount(j) terms and is generated
/// directly rather than by repeated multiplication.
pub fn xyz_sum_pow(spec: FieldSpec, j: u32) -> TriPoly {
    let mut monos = vec![Monomial::ONE];
    for bit in 0..u32::BITS {
        if j >> bit & 1 == 0 {
            continue;
        }
        let p = 1u16 << bit;
        let mut next = Vec::with_capacity(monos.len() * 3);
        for m in &monos {
            next.push(Monomial::new(m.x + p, m.y, m.z));
            next.push(Monomial::new(m.x, m.y + p, m.z));
            next.push(Monomial::new(m.x, m.y, m.z + p));
        }
        monos = next;
    }
    let mut out = TriPoly::zero(spec);
    for m in monos {
        out.add_term_bits(m, 1);
    }
    out
}

/// The numerator `f(x) + f(y) + f(z) + f(x+y+z)`.
pub fn phi_numerator(f: &UniPoly) -> TriPoly {
    let spec = f.spec();
    let mut acc = TriPoly::zero(spec);
    for (e, c) in f
        .coeff_bits()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(e, &c)| (e as u32, c))
    {
        let c = spec.element_unchecked(c);
        let mut part = xyz_sum_pow(spec, e);
        part.add_term_bits(Monomial::new(e as u16, 0, 0), 1);
        part.add_term_bits(Monomial::new(0, e as u16, 0), 1);
        part.add_term_bits(Monomial::new(0, 0, e as u16), 1);
        acc = acc.add(&part.scale(c));
    }
    acc
}

/// A function together with its surface polynomial. The defining identity
/// `e3 * phi = f(x)+f(y)+f(z)+f(x+y+z)` holds exactly by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiSurface {
    f: UniPoly,
    phi: TriPoly,
}

impl PhiSurface {
    pub fn f(&self) -> &UniPoly {
        &self.f
    }

    pub fn phi(&self) -> &TriPoly {
        &self.phi
    }

    /// Total degree of the surface polynomial; `None` when it vanishes
    /// (degree < 3, or only 2-power exponents with nonzero coefficients).
    pub fn degree(&self) -> Option<u32> {
        self.phi.total_degree()
    }
}

/// Builds the surface polynomial of `f`.
pub fn phi_of(f: &UniPoly) -> PhiSurface {
    let spec = f.spec();
    let num = phi_numerator(f);
    let phi = if num.is_zero() {
        TriPoly::zero(spec)
    } else {
        num.exact_div(&TriPoly::e3(spec))
            .expect("e3 divides the numerator of every f in characteristic 2")
    };
    PhiSurface { f: f.clone(), phi }
}

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<TriPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<TriPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn gf2() -> FieldSpec {
    FieldSpec::with_default_modulus(1).unwrap()
}

/// `phi_j` over GF(2), cached process-wide.
pub fn phi_mono(j: u32) -> TriPoly {
    if let Some(p) = phi_cache().lock().unwrap().get(&j) {
        return (**p).clone();
    }
    let spec = gf2();
    let f = UniPoly::monomial(spec.one(), j as usize);
    let p = phi_of(&f).phi;
    phi_cache()
        .lock()
        .unwrap()
        .entry(j)
        .or_insert_with(|| Arc::new(p.clone()));
    p
}

/// `phi_j` with coefficients carried into the given field.
pub fn phi_mono_in(j: u32, spec: FieldSpec) -> TriPoly {
    let p = phi_mono(j);
    let mut out = TriPoly::zero(spec);
    for (m, _) in p.term_bits() {
        out.add_term_bits(m, 1);
    }
    out
}

/// Checks the squaring law `phi_{2j} = phi_j^2 * e3` (an identity in
/// characteristic 2; exposed as a checkable computation, not assumed).
pub fn double_identity_check(j: u32) -> bool {
    let lhs = phi_mono(2 * j);
    let rhs = phi_mono(j).square().mul(&TriPoly::e3(gf2()));
    lhs == rhs
}

/// Evaluates `phi_f` at a point off the degenerate hyperplanes by the
/// quotient of the numerator and e3; used as an evaluation oracle in tests
/// and scans.
pub fn eval_phi_via_numerator(
    f: &UniPoly,
    at: [FieldElement; 3],
) -> Option<FieldElement> {
    let spec = f.spec();
    let e3 = TriPoly::e3(spec).eval(at);
    if e3.is_zero() {
        return None;
    }
    let s = at[0] + at[1] + at[2];
    let num = f.eval(at[0]) + f.eval(at[1]) + f.eval(at[2]) + f.eval(s);
    Some(num * e3.inv().unwrap())
}
