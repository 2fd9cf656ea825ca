//! Bivariate factorization over GF(2^m), absolute-irreducibility decisions,
//! and the Kasami-degree factor structure of the surface polynomial.
//!
//! The factorization pipeline: content/primitive split in x, characteristic-2
//! squarefree reduction (gcd peeling plus coefficient-wise square roots),
//! choice of a specialization y = y0 preserving deg_x with a squarefree
//! image, univariate factorization of the image, quadratic Hensel lifting in
//! (y - y0), and subset recombination validated by exact division. When the
//! base field has no usable specialization point the computation moves to the
//! smallest extension with one and maps the results back along Frobenius
//! orbits.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::field::{FieldElement, FieldSpec};
use crate::phi::phi_mono_in;
use crate::tripoly::{Monomial, TriPoly, Var};
use crate::unipoly::UniPoly;
use crate::{Error, Result};

/// Work gating for the expensive k = 4 paths.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Budget {
    Default,
    High,
}

/// A complete factorization: `unit * prod factors[i]^mult[i]` equals the
/// input exactly; each factor is monic under graded lex and irreducible over
/// the field it is expressed in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(TriPoly, u32)>,
}

impl Factorization {
    pub fn product(&self) -> TriPoly {
        let mut acc = TriPoly::constant(self.unit);
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m as u64));
        }
        acc
    }

    pub fn factor_count(&self) -> u32 {
        self.factors.iter().map(|(_, m)| m).sum()
    }
}

/// Outcome of the absolute-irreducibility decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbsIrredVerdict {
    AbsolutelyIrreducible,
    ReducibleOverBase(Factorization),
    /// Irreducible over the base field but splitting over GF(q^r); `r` is the
    /// minimal extension degree at which a split occurs.
    SplitsOverExtension { r: u32, factorization: Factorization },
}

impl AbsIrredVerdict {
    pub fn is_absolutely_irreducible(&self) -> bool {
        matches!(self, AbsIrredVerdict::AbsolutelyIrreducible)
    }
}

// ---------------------------------------------------------------------------
// Dense bivariate representation
// ---------------------------------------------------------------------------

/// Dense poly in x whose coefficients are univariate polynomials in y.
#[derive(Clone, PartialEq, Eq, Debug)]
struct BiPoly {
    spec: FieldSpec,
    cols: Vec<UniPoly>,
}

impl BiPoly {
    fn zero(spec: FieldSpec) -> Self {
        BiPoly {
            spec,
            cols: Vec::new(),
        }
    }

    fn trim(&mut self) {
        while self.cols.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.cols.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.cols.is_empty()
    }

    fn deg_x(&self) -> usize {
        self.cols.len().saturating_sub(1)
    }

    fn deg_y(&self) -> usize {
        self.cols
            .iter()
            .filter_map(|c| c.degree())
            .max()
            .unwrap_or(0)
    }

    fn lc_x(&self) -> &UniPoly {
        self.cols.last().expect("nonzero polynomial")
    }

    fn from_tri(p: &TriPoly) -> Self {
        assert_eq!(p.degree_in(Var::Z), 0, "expected a bivariate polynomial");
        let dx = p.degree_in(Var::X) as usize;
        let dy = p.degree_in(Var::Y) as usize;
        let mut grid = vec![vec![0u64; dy + 1]; dx + 1];
        for (m, c) in p.term_bits() {
            grid[m.x as usize][m.y as usize] = c;
        }
        let mut out = BiPoly {
            spec: p.spec(),
            cols: grid
                .into_iter()
                .map(|v| UniPoly::from_bits(p.spec(), &v))
                .collect(),
        };
        out.trim();
        out
    }

    fn to_tri(&self) -> TriPoly {
        let mut out = TriPoly::zero(self.spec);
        for (i, col) in self.cols.iter().enumerate() {
            for (j, &c) in col.coeff_bits().iter().enumerate() {
                if c != 0 {
                    out.add_term_bits(Monomial::new(i as u16, j as u16, 0), c);
                }
            }
        }
        out
    }

    fn eval_y(&self, at: FieldElement) -> UniPoly {
        UniPoly::from_bits(
            self.spec,
            &self
                .cols
                .iter()
                .map(|c| c.eval(at).bits())
                .collect::<Vec<_>>(),
        )
    }

    fn content_y(&self) -> UniPoly {
        let mut g = UniPoly::zero(self.spec);
        for c in &self.cols {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
        }
        g
    }

    fn div_content(&self, content: &UniPoly) -> BiPoly {
        if content.is_one() {
            return self.clone();
        }
        BiPoly {
            spec: self.spec,
            cols: self
                .cols
                .iter()
                .map(|c| {
                    if c.is_zero() {
                        c.clone()
                    } else {
                        c.div_exact(content)
                    }
                })
                .collect(),
        }
    }

    fn deriv_x(&self) -> BiPoly {
        let mut cols = Vec::with_capacity(self.cols.len().saturating_sub(1));
        for i in 1..self.cols.len() {
            cols.push(if i % 2 == 1 {
                self.cols[i].clone()
            } else {
                UniPoly::zero(self.spec)
            });
        }
        let mut out = BiPoly {
            spec: self.spec,
            cols,
        };
        out.trim();
        out
    }

    fn deriv_y(&self) -> BiPoly {
        let mut out = BiPoly {
            spec: self.spec,
            cols: self.cols.iter().map(|c| c.derivative()).collect(),
        };
        out.trim();
        out
    }

    fn transpose(&self) -> BiPoly {
        let dx = self.deg_x();
        let dy = self.deg_y();
        let mut grid = vec![vec![0u64; dx + 1]; dy + 1];
        for (i, col) in self.cols.iter().enumerate() {
            for (j, &c) in col.coeff_bits().iter().enumerate() {
                grid[j][i] = c;
            }
        }
        let mut out = BiPoly {
            spec: self.spec,
            cols: grid
                .into_iter()
                .map(|v| UniPoly::from_bits(self.spec, &v))
                .collect(),
        };
        out.trim();
        out
    }

    /// Square root when all exponents in both variables are even.
    fn sqrt(&self) -> Option<BiPoly> {
        let mut cols = Vec::new();
        for (i, col) in self.cols.iter().enumerate() {
            if i % 2 == 1 {
                if !col.is_zero() {
                    return None;
                }
                continue;
            }
            cols.push(col.sqrt()?);
        }
        let mut out = BiPoly {
            spec: self.spec,
            cols,
        };
        out.trim();
        Some(out)
    }

    /// `p(x, y + c)`.
    fn shift_y(&self, c: FieldElement) -> BiPoly {
        BiPoly {
            spec: self.spec,
            cols: self.cols.iter().map(|col| col.compose_shift(c)).collect(),
        }
    }

    fn embed_into(&self, target: FieldSpec) -> Result<BiPoly> {
        let mut cols = Vec::with_capacity(self.cols.len());
        for c in &self.cols {
            cols.push(c.embed_into(target)?);
        }
        Ok(BiPoly {
            spec: target,
            cols,
        })
    }

    /// Coefficient Frobenius a -> a^(2^i), applied to every coefficient.
    fn frobenius_coeffs(&self, i: u32) -> BiPoly {
        BiPoly {
            spec: self.spec,
            cols: self
                .cols
                .iter()
                .map(|c| {
                    UniPoly::from_bits(
                        self.spec,
                        &c.coeff_bits()
                            .iter()
                            .map(|&b| self.spec.frob_bits(b, i))
                            .collect::<Vec<_>>(),
                    )
                })
                .collect(),
        }
    }

    fn mul(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero(self.spec);
        }
        let mut cols = vec![UniPoly::zero(self.spec); self.cols.len() + other.cols.len() - 1];
        for (i, a) in self.cols.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.cols.iter().enumerate() {
                if !b.is_zero() {
                    cols[i + j] = cols[i + j].add(&a.mul(b));
                }
            }
        }
        BiPoly {
            spec: self.spec,
            cols,
        }
    }

    fn div_exact(&self, divisor: &BiPoly) -> BiPoly {
        let q = self
            .to_tri()
            .exact_div(&divisor.to_tri())
            .expect("exact bivariate division");
        BiPoly::from_tri(&q)
    }
}

// ---------------------------------------------------------------------------
// Modular (evaluation/interpolation) bivariate gcd
// ---------------------------------------------------------------------------

/// Gcd of two nonzero bivariate polynomials, primitive-in-x up to the shared
/// y-content, monic-normalized leading x-coefficient where possible.
///
/// Evaluation points are drawn from the base field and, when it is too small,
/// from the smallest sufficient extension; a trivial specialized gcd at any
/// valid point certifies coprimality immediately, which is the common case in
/// the squarefree pipeline.
fn bi_gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
    assert!(!a.is_zero() && !b.is_zero());
    let spec = a.spec;
    let ca = a.content_y();
    let cb = b.content_y();
    let cg = ca.gcd(&cb);
    let ap = a.div_content(&ca);
    let bp = b.div_content(&cb);
    if ap.deg_x() == 0 || bp.deg_x() == 0 {
        return BiPoly {
            spec,
            cols: vec![cg],
        };
    }
    let gamma = ap.lc_x().gcd(bp.lc_x());
    let needed = gamma.degree().unwrap_or(0) + ap.deg_y().min(bp.deg_y()) + 1;
    let skip_bound =
        ap.lc_x().degree().unwrap_or(0) + bp.lc_x().degree().unwrap_or(0) + needed + 2;

    let mut r = 1u32;
    'extend: loop {
        let ext = match FieldSpec::with_default_modulus(spec.n() * r) {
            Ok(e) if (ext_order_at_least(e, skip_bound as u64)) => e,
            Ok(_) | Err(_) => {
                r += 1;
                if spec.n() * r > crate::field::MAX_DEGREE {
                    panic!("gcd interpolation exhausted the representable fields");
                }
                continue;
            }
        };
        let ae = ap.embed_into(ext).expect("tower embedding");
        let be = bp.embed_into(ext).expect("tower embedding");
        let mut min_deg = usize::MAX;
        let mut points: Vec<(FieldElement, UniPoly)> = Vec::new();
        for y0 in ext.elements() {
            if ae.lc_x().eval(y0).is_zero() || be.lc_x().eval(y0).is_zero() {
                continue;
            }
            let g0 = ae.eval_y(y0).gcd(&be.eval_y(y0));
            let d0 = g0.degree().unwrap_or(0);
            if d0 == 0 {
                // coprime specialization: the gcd carries no x-part
                return BiPoly {
                    spec,
                    cols: vec![cg],
                };
            }
            if d0 < min_deg {
                min_deg = d0;
                points.clear();
            }
            if d0 > min_deg {
                continue; // unlucky point
            }
            let gamma_e = gamma.embed_into(ext).expect("tower embedding");
            points.push((y0, g0.scale(gamma_e.eval(y0))));
            if points.len() < needed {
                continue;
            }
            // interpolate column-wise and verify
            let mut cols = Vec::with_capacity(min_deg + 1);
            for i in 0..=min_deg {
                let pts: Vec<(FieldElement, FieldElement)> = points
                    .iter()
                    .map(|(y0, g)| (*y0, g.coeff(i)))
                    .collect();
                cols.push(UniPoly::interpolate(ext, &pts));
            }
            let mut cand = BiPoly { spec: ext, cols };
            cand.trim();
            if cand.is_zero() {
                r += 1;
                continue 'extend;
            }
            let cont = cand.content_y();
            cand = cand.div_content(&cont);
            // map back to the base field
            let cand_base = match project_bi(&cand, spec) {
                Some(c) => c,
                None => {
                    r += 1;
                    continue 'extend;
                }
            };
            let ct = cand_base.to_tri();
            if ap.to_tri().exact_div(&ct).is_some() && bp.to_tri().exact_div(&ct).is_some() {
                let mut g = cand_base;
                if !cg.is_one() {
                    g = g.mul(&BiPoly {
                        spec,
                        cols: vec![cg.clone()],
                    });
                }
                return g;
            }
            // verification failed: gather more points at the same degree
            points.pop();
            min_deg -= 1;
            points.clear();
        }
        r += 1;
        if spec.n() * r > crate::field::MAX_DEGREE {
            panic!("gcd interpolation exhausted the representable fields");
        }
    }
}

fn ext_order_at_least(spec: FieldSpec, want: u64) -> bool {
    spec.n() >= 63 || spec.order() >= want
}

fn project_bi(p: &BiPoly, target: FieldSpec) -> Option<BiPoly> {
    let mut cols = Vec::with_capacity(p.cols.len());
    for c in &p.cols {
        let mut bits = Vec::with_capacity(c.coeff_bits().len());
        for &b in c.coeff_bits() {
            match p
                .spec
                .element_unchecked(b)
                .project_into(target)
                .expect("tower embedding")
            {
                Some(e) => bits.push(e.bits()),
                None => return None,
            }
        }
        cols.push(UniPoly::from_bits(target, &bits));
    }
    Some(BiPoly {
        spec: target,
        cols,
    })
}

// ---------------------------------------------------------------------------
// Truncated power-series arithmetic for Hensel lifting
// ---------------------------------------------------------------------------

/// Series in t, dense coefficient bits, truncated below `cap`.
type Ser = Vec<u64>;

fn ser_trim(a: &mut Ser) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn ser_add(a: &Ser, b: &Ser) -> Ser {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        *o = a.get(i).copied().unwrap_or(0) ^ b.get(i).copied().unwrap_or(0);
    }
    ser_trim(&mut out);
    out
}

fn ser_mul(spec: FieldSpec, a: &Ser, b: &Ser, cap: usize) -> Ser {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; (a.len() + b.len() - 1).min(cap)];
    for (i, &ac) in a.iter().enumerate() {
        if ac == 0 || i >= cap {
            continue;
        }
        for (j, &bc) in b.iter().enumerate() {
            if i + j >= cap {
                break;
            }
            if bc != 0 {
                out[i + j] ^= spec.mul_bits(ac, bc);
            }
        }
    }
    ser_trim(&mut out);
    out
}

/// Multiplicative inverse of a series with a unit constant term.
fn ser_inv(spec: FieldSpec, a: &Ser, cap: usize) -> Ser {
    let a0_inv = spec.inv_bits(a[0]).expect("unit constant term");
    let mut out = vec![0u64; cap];
    out[0] = a0_inv;
    for k in 1..cap {
        let mut acc = 0u64;
        for i in 1..=k {
            let ai = a.get(i).copied().unwrap_or(0);
            if ai != 0 && out[k - i] != 0 {
                acc ^= spec.mul_bits(ai, out[k - i]);
            }
        }
        out[k] = spec.mul_bits(a0_inv, acc);
    }
    ser_trim(&mut out);
    out
}

/// Poly in x with truncated-series coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SerPoly {
    spec: FieldSpec,
    cols: Vec<Ser>,
}

impl SerPoly {
    fn zero(spec: FieldSpec) -> Self {
        SerPoly {
            spec,
            cols: Vec::new(),
        }
    }

    fn trim(&mut self) {
        while self.cols.last().map(|c| c.is_empty()).unwrap_or(false) {
            self.cols.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.cols.is_empty()
    }

    fn deg_x(&self) -> usize {
        self.cols.len().saturating_sub(1)
    }

    fn from_uni(p: &UniPoly) -> Self {
        SerPoly {
            spec: p.spec(),
            cols: p.coeff_bits().iter().map(|&c| {
                let mut s = vec![c];
                ser_trim(&mut s);
                s
            }).collect(),
        }
    }

    fn from_bi(p: &BiPoly, cap: usize) -> Self {
        let mut out = SerPoly {
            spec: p.spec,
            cols: p
                .cols
                .iter()
                .map(|c| {
                    let mut s = c.coeff_bits().to_vec();
                    s.truncate(cap);
                    ser_trim(&mut s);
                    s
                })
                .collect(),
        };
        out.trim();
        out
    }

    fn to_bi(&self) -> BiPoly {
        let mut out = BiPoly {
            spec: self.spec,
            cols: self
                .cols
                .iter()
                .map(|s| UniPoly::from_bits(self.spec, s))
                .collect(),
        };
        out.trim();
        out
    }

    fn truncate(&self, cap: usize) -> SerPoly {
        let mut out = SerPoly {
            spec: self.spec,
            cols: self
                .cols
                .iter()
                .map(|s| {
                    let mut s = s.clone();
                    s.truncate(cap);
                    ser_trim(&mut s);
                    s
                })
                .collect(),
        };
        out.trim();
        out
    }

    fn add(&self, other: &SerPoly) -> SerPoly {
        let mut cols = vec![Vec::new(); self.cols.len().max(other.cols.len())];
        for (i, c) in cols.iter_mut().enumerate() {
            let empty = Vec::new();
            let a = self.cols.get(i).unwrap_or(&empty);
            let b = other.cols.get(i).unwrap_or(&empty);
            *c = ser_add(a, b);
        }
        let mut out = SerPoly {
            spec: self.spec,
            cols,
        };
        out.trim();
        out
    }

    fn mul(&self, other: &SerPoly, cap: usize) -> SerPoly {
        if self.is_zero() || other.is_zero() {
            return SerPoly::zero(self.spec);
        }
        let mut cols = vec![Vec::new(); self.cols.len() + other.cols.len() - 1];
        for (i, a) in self.cols.iter().enumerate() {
            if a.is_empty() {
                continue;
            }
            for (j, b) in other.cols.iter().enumerate() {
                if !b.is_empty() {
                    cols[i + j] = ser_add(&cols[i + j], &ser_mul(self.spec, a, b, cap));
                }
            }
        }
        let mut out = SerPoly {
            spec: self.spec,
            cols,
        };
        out.trim();
        out
    }

    fn scale_series(&self, s: &Ser, cap: usize) -> SerPoly {
        let mut out = SerPoly {
            spec: self.spec,
            cols: self
                .cols
                .iter()
                .map(|c| ser_mul(self.spec, c, s, cap))
                .collect(),
        };
        out.trim();
        out
    }

    /// Division with remainder by a divisor monic in x.
    fn divrem_monic(&self, divisor: &SerPoly, cap: usize) -> (SerPoly, SerPoly) {
        let db = divisor.deg_x();
        debug_assert_eq!(divisor.cols[db], vec![1], "divisor must be monic in x");
        if self.cols.len() <= db {
            return (SerPoly::zero(self.spec), self.clone());
        }
        let mut rem = self.cols.clone();
        let mut quot = vec![Vec::new(); rem.len() - db];
        for i in (db..rem.len()).rev() {
            let q = std::mem::take(&mut rem[i]);
            if q.is_empty() {
                continue;
            }
            for (j, b) in divisor.cols.iter().enumerate().take(db) {
                if !b.is_empty() {
                    rem[i - db + j] =
                        ser_add(&rem[i - db + j], &ser_mul(self.spec, &q, b, cap));
                }
            }
            quot[i - db] = q;
        }
        rem.truncate(db);
        let mut qp = SerPoly {
            spec: self.spec,
            cols: quot,
        };
        qp.trim();
        let mut rp = SerPoly {
            spec: self.spec,
            cols: rem,
        };
        rp.trim();
        (qp, rp)
    }
}

/// One quadratic Hensel step: given `f = g*h (mod t^j)` with Bezout data
/// `sb*g + tb*h = 1 (mod t^j)`, all monic in x, returns the lift mod t^(2j)
/// (capped at `cap`).
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &SerPoly,
    g: &SerPoly,
    h: &SerPoly,
    sb: &SerPoly,
    tb: &SerPoly,
    cap: usize,
) -> (SerPoly, SerPoly, SerPoly, SerPoly) {
    let e = f.add(&g.mul(h, cap)); // f - g*h
    let (q, r) = sb.mul(&e, cap).divrem_monic(h, cap);
    let g_new = g.add(&tb.mul(&e, cap)).add(&q.mul(g, cap));
    let h_new = h.add(&r);
    // refresh the Bezout pair
    let one = {
        let mut s = SerPoly::zero(f.spec);
        s.cols = vec![vec![1]];
        s
    };
    let b = sb
        .mul(&g_new, cap)
        .add(&tb.mul(&h_new, cap))
        .add(&one);
    let (c, d) = sb.mul(&b, cap).divrem_monic(&h_new, cap);
    let sb_new = sb.add(&d);
    let tb_new = tb.add(&tb.mul(&b, cap)).add(&c.mul(&g_new, cap));
    (g_new, h_new, sb_new, tb_new)
}

/// Lifts `f = prod(parts) (mod t)` to mod t^cap, parts pairwise coprime mod t
/// and monic in x, f monic in x. Returns the lifted factors in input order.
fn hensel_tree(f: &SerPoly, parts: &[UniPoly], cap: usize) -> Vec<SerPoly> {
    if parts.len() == 1 {
        return vec![f.clone()];
    }
    let mid = parts.len() / 2;
    let g0 = parts[..mid]
        .iter()
        .fold(UniPoly::one(f.spec), |acc, p| acc.mul(p));
    let h0 = parts[mid..]
        .iter()
        .fold(UniPoly::one(f.spec), |acc, p| acc.mul(p));
    let (one, sb0, tb0) = g0.xgcd(&h0);
    debug_assert!(one.is_one(), "modular factors must be coprime");
    let mut g = SerPoly::from_uni(&g0);
    let mut h = SerPoly::from_uni(&h0);
    let mut sb = SerPoly::from_uni(&sb0);
    let mut tb = SerPoly::from_uni(&tb0);
    let mut prec = 1usize;
    while prec < cap {
        let next = (prec * 2).min(cap);
        let ft = f.truncate(next);
        let (g2, h2, sb2, tb2) = hensel_step(&ft, &g, &h, &sb, &tb, next);
        g = g2;
        h = h2;
        sb = sb2;
        tb = tb2;
        prec = next;
    }
    let mut left = hensel_tree(&g, &parts[..mid], cap);
    let right = hensel_tree(&h, &parts[mid..], cap);
    left.extend(right);
    left
}

// ---------------------------------------------------------------------------
// Squarefree bivariate factorization via lifting + recombination
// ---------------------------------------------------------------------------

/// Lexicographic combinations of `k` indices out of `n`.
struct Combinations {
    idx: Vec<usize>,
    n: usize,
    started: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            idx: (0..k).collect(),
            n,
            started: false,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let k = self.idx.len();
        if k > self.n {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.idx.clone());
        }
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if self.idx[i] != i + self.n - k {
                break;
            }
        }
        self.idx[i] += 1;
        for j in i + 1..k {
            self.idx[j] = self.idx[j - 1] + 1;
        }
        Some(self.idx.clone())
    }
}

/// Specialization-point quality: `None` when unusable, otherwise the number
/// of univariate factors (fewer is better for recombination).
fn probe_point(p: &BiPoly, y0: FieldElement) -> Option<(usize, Vec<(UniPoly, u32)>)> {
    if p.lc_x().eval(y0).is_zero() {
        return None;
    }
    let u = p.eval_y(y0);
    let du = u.derivative();
    if du.is_zero() {
        return None;
    }
    if u.gcd(&du).degree() != Some(0) {
        return None;
    }
    let fac = u.factor();
    Some((fac.factors.len(), fac.factors))
}

/// Factors a primitive, squarefree, x-separable bivariate polynomial into
/// irreducibles over its own field.
fn factor_squarefree(p: &BiPoly) -> Vec<BiPoly> {
    let spec = p.spec;
    if p.deg_x() == 1 {
        return vec![p.clone()];
    }

    // pick the base-field specialization with the fewest modular factors
    let mut best: Option<(usize, FieldElement, Vec<(UniPoly, u32)>)> = None;
    for y0 in spec_point_order(spec) {
        if let Some((s, fac)) = probe_point(p, y0) {
            if s == 1 {
                return vec![p.clone()]; // irreducible image of full degree
            }
            if best.as_ref().map(|(bs, _, _)| s < *bs).unwrap_or(true) {
                best = Some((s, y0, fac));
            }
        }
    }

    if let Some((_, y0, fac)) = best {
        return hensel_and_recombine(p, y0, fac);
    }

    // no usable point over the base field: move to the smallest extension
    // that has one, factor there, and merge Frobenius orbits back
    let mut r = 2u32;
    loop {
        assert!(
            spec.n() * r <= crate::field::MAX_DEGREE,
            "specialization search exceeded the representable fields"
        );
        let ext = FieldSpec::with_default_modulus(spec.n() * r).unwrap();
        let pe = p.embed_into(ext).expect("tower embedding");
        let mut beste: Option<(usize, FieldElement, Vec<(UniPoly, u32)>)> = None;
        for y0 in spec_point_order(ext) {
            if let Some((s, fac)) = probe_point(&pe, y0) {
                if best_is_worse(&beste, s) {
                    beste = Some((s, y0, fac));
                }
            }
        }
        if let Some((s, y0, fac)) = beste {
            let ext_factors = if s == 1 {
                vec![pe.clone()]
            } else {
                hensel_and_recombine(&pe, y0, fac)
            };
            return merge_frobenius_orbits(p, ext_factors, spec);
        }
        r += 1;
    }
}

fn best_is_worse(
    best: &Option<(usize, FieldElement, Vec<(UniPoly, u32)>)>,
    s: usize,
) -> bool {
    best.as_ref().map(|(bs, _, _)| s < *bs).unwrap_or(true)
}

/// Specialization search order: 0, 1, then field enumeration order.
fn spec_point_order(spec: FieldSpec) -> impl Iterator<Item = FieldElement> {
    let zero = spec.zero();
    let one = spec.one();
    [zero, one]
        .into_iter()
        .chain(spec.elements().filter(move |e| !e.is_zero() && !e.is_one()))
}

/// Groups factors over an extension into Frobenius orbits and multiplies each
/// orbit down to a base-field irreducible.
fn merge_frobenius_orbits(
    p_base: &BiPoly,
    ext_factors: Vec<BiPoly>,
    base: FieldSpec,
) -> Vec<BiPoly> {
    let mut pool: Vec<BiPoly> = ext_factors
        .into_iter()
        .map(|f| monicize_bi(&f))
        .collect();
    let mut out = Vec::new();
    while let Some(seed) = pool.pop() {
        let mut orbit = vec![seed.clone()];
        let mut cur = monicize_bi(&seed.frobenius_coeffs(base.n()));
        while cur != seed {
            let pos = pool
                .iter()
                .position(|f| *f == cur)
                .expect("conjugate factor must be present");
            orbit.push(pool.swap_remove(pos));
            cur = monicize_bi(&cur.frobenius_coeffs(base.n()));
        }
        let prod = orbit
            .iter()
            .fold(BiPoly { spec: orbit[0].spec, cols: vec![UniPoly::one(orbit[0].spec)] }, |acc, f| acc.mul(f));
        let projected =
            project_bi(&monicize_bi(&prod), base).expect("orbit product is defined over the base");
        out.push(projected);
    }
    debug_assert_eq!(
        out.iter().fold(
            BiPoly { spec: base, cols: vec![UniPoly::one(base)] },
            |acc, f| acc.mul(f)
        ).to_tri().make_monic().0,
        p_base.to_tri().make_monic().0,
        "orbit merge must reconstruct the input"
    );
    out
}

/// Graded-lex monic normalization on the dense form.
fn monicize_bi(p: &BiPoly) -> BiPoly {
    let t = p.to_tri();
    BiPoly::from_tri(&t.make_monic().0)
}

fn hensel_and_recombine(
    p: &BiPoly,
    y0: FieldElement,
    modular: Vec<(UniPoly, u32)>,
) -> Vec<BiPoly> {
    let spec = p.spec;
    debug_assert!(modular.iter().all(|(_, m)| *m == 1));
    let parts: Vec<UniPoly> = modular.into_iter().map(|(f, _)| f).collect();

    let shifted = p.shift_y(y0); // G(x, t) = p(x, t + y0)
    let cap = shifted.deg_y() + shifted.lc_x().degree().unwrap_or(0) + 1;

    // monicize G over the series ring
    let mut lc_ser: Ser = shifted.lc_x().coeff_bits().to_vec();
    lc_ser.truncate(cap);
    let lc_inv = ser_inv(spec, &lc_ser, cap);
    let mut ghat = SerPoly::from_bi(&shifted, cap).scale_series(&lc_inv, cap);
    *ghat.cols.last_mut().unwrap() = vec![1];

    let lifted = hensel_tree(&ghat, &parts, cap);

    // subset recombination against the (non-monicized) shifted polynomial
    let mut remaining: Vec<SerPoly> = lifted;
    let mut g_cur = shifted;
    let mut out = Vec::new();
    'outer: loop {
        let s = remaining.len();
        if s == 0 {
            break;
        }
        if s == 1 {
            out.push(g_cur.clone());
            break;
        }
        let mut lc_cur: Ser = g_cur.lc_x().coeff_bits().to_vec();
        lc_cur.truncate(cap);
        ser_trim(&mut lc_cur);
        for size in 1..=s / 2 {
            for subset in Combinations::new(s, size) {
                // degree prune
                let dx: usize = subset.iter().map(|&i| remaining[i].deg_x()).sum();
                if dx == 0 || dx >= g_cur.deg_x() {
                    continue;
                }
                let mut cand = SerPoly {
                    spec,
                    cols: vec![lc_cur.clone()],
                };
                for &i in &subset {
                    cand = cand.mul(&remaining[i], cap);
                }
                let mut cand_bi = cand.to_bi();
                let cont = cand_bi.content_y();
                if !cont.is_one() {
                    cand_bi = cand_bi.div_content(&cont);
                }
                if let Some(q) = g_cur.to_tri().exact_div(&cand_bi.to_tri()) {
                    out.push(cand_bi);
                    g_cur = BiPoly::from_tri(&q);
                    let mut keep = Vec::with_capacity(s - size);
                    for (i, f) in remaining.into_iter().enumerate() {
                        if !subset.contains(&i) {
                            keep.push(f);
                        }
                    }
                    remaining = keep;
                    continue 'outer;
                }
            }
        }
        // no proper subset works: the remainder is irreducible
        out.push(g_cur.clone());
        break;
    }

    // shift factors back (the shift is an involution in characteristic 2)
    out.into_iter()
        .map(|f| {
            let fb = f.shift_y(y0);
            let cont = fb.content_y();
            fb.div_content(&cont)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Top-level bivariate factorization
// ---------------------------------------------------------------------------

/// Complete factorization of a nonzero bivariate polynomial (z-degree 0) into
/// irreducibles over its coefficient field.
pub fn bivar_factor(f: &TriPoly) -> Factorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    assert_eq!(f.degree_in(Var::Z), 0, "expected z-degree 0");
    let spec = f.spec();
    let bi = BiPoly::from_tri(f);
    let mut raw: Vec<(BiPoly, u32)> = Vec::new();
    factor_rec(bi, 1, &mut raw);

    // normalize, merge equal factors, sort canonically
    let mut merged: Vec<(TriPoly, u32)> = Vec::new();
    for (g, m) in raw {
        let (t, _) = g.to_tri().make_monic();
        if let Some(slot) = merged.iter_mut().find(|(h, _)| *h == t) {
            slot.1 += m;
        } else {
            merged.push((t, m));
        }
    }
    merged.sort_by(|(a, ma), (b, mb)| {
        a.total_degree()
            .cmp(&b.total_degree())
            .then_with(|| a.cmp(b))
            .then(ma.cmp(mb))
    });
    let unit = f.leading().map(|(_, c)| c).unwrap();
    let fac = Factorization {
        unit,
        factors: merged,
    };
    debug_assert_eq!(fac.product(), *f, "multiply-back failed over {spec}");
    fac
}

fn factor_rec(p: BiPoly, mult: u32, out: &mut Vec<(BiPoly, u32)>) {
    if p.is_zero() || (p.deg_x() == 0 && p.deg_y() == 0) {
        return;
    }
    // y-only content first
    let cont = p.content_y();
    let p = p.div_content(&cont);
    if cont.degree().unwrap_or(0) >= 1 {
        for (g, m) in cont.factor().factors {
            out.push((
                BiPoly {
                    spec: p.spec,
                    cols: vec![g],
                },
                m * mult,
            ));
        }
    }
    if p.deg_x() == 0 {
        return; // primitive constant-in-x: a unit
    }
    let px = p.deriv_x();
    if px.is_zero() {
        let py = p.deriv_y();
        if py.is_zero() {
            let r = p.sqrt().expect("both derivatives vanish only for squares");
            factor_rec(r, mult * 2, out);
            return;
        }
        // inseparable in x only: factor the transpose
        let mut sub = Vec::new();
        factor_rec(p.transpose(), mult, &mut sub);
        out.extend(sub.into_iter().map(|(g, m)| (g.transpose(), m)));
        return;
    }
    let d = bi_gcd(&p, &px);
    if d.deg_x() + d.deg_y() >= 1 {
        let q = p.div_exact(&d);
        factor_rec(d, mult, out);
        factor_rec(q, mult, out);
        return;
    }
    for g in factor_squarefree(&p) {
        out.push((g, mult));
    }
}

// ---------------------------------------------------------------------------
// Absolute irreducibility
// ---------------------------------------------------------------------------

/// Decides absolute irreducibility of a bivariate or homogeneous trivariate
/// polynomial.
///
/// After the base-field factorization, only extensions GF(q^p) at prime
/// divisors p of the total degree need probing: an irreducible polynomial
/// that splits over the closure does so into r conjugate factors defined over
/// GF(q^r) with r | D, and the factor count over GF(q^s) is gcd(s, r), so any
/// split is already visible at the smallest prime divisor of r — which is
/// also the minimal splitting extension degree. Extensions beyond the n <= 32
/// representation cap are unreachable for desk-scale inputs and are skipped.
pub fn absolute_irreducibility(f: &TriPoly) -> AbsIrredVerdict {
    assert!(!f.is_zero(), "zero polynomial has no irreducibility verdict");
    let spec = f.spec();
    let trivariate = f.degree_in(Var::Z) > 0;
    if trivariate {
        assert!(
            f.is_homogeneous().is_some(),
            "trivariate input must be homogeneous"
        );
    }

    // peel powers of z from homogeneous input
    let z_mult = f
        .terms()
        .map(|(m, _)| m.z)
        .min()
        .unwrap_or(0) as u32;
    let worked = if z_mult > 0 {
        let mut g = TriPoly::zero(spec);
        for (m, c) in f.terms() {
            g.add_term_bits(Monomial::new(m.x, m.y, m.z - z_mult as u16), c.bits());
        }
        g
    } else {
        f.clone()
    };
    let bivar = if trivariate {
        worked.dehomogenize_z()
    } else {
        worked.clone()
    };

    let rehom = |fac: Factorization, extra_z: u32| -> Factorization {
        if !trivariate {
            debug_assert_eq!(extra_z, 0);
            return fac;
        }
        let mut factors: Vec<(TriPoly, u32)> = fac
            .factors
            .into_iter()
            .map(|(g, m)| (g.homogenize_z_to(g.total_degree().unwrap()), m))
            .collect();
        if extra_z > 0 {
            factors.insert(0, (TriPoly::var(fac.unit.spec(), Var::Z), extra_z));
        }
        Factorization {
            unit: fac.unit,
            factors,
        }
    };

    let base_fac = bivar_factor(&bivar);
    let proper = base_fac.factor_count() + z_mult > 1;
    if proper {
        return AbsIrredVerdict::ReducibleOverBase(rehom(base_fac, z_mult));
    }
    if z_mult == 1 && base_fac.factors.is_empty() {
        // f = unit * z
        return AbsIrredVerdict::AbsolutelyIrreducible;
    }

    let deg = f.total_degree().unwrap();
    if deg <= 1 {
        return AbsIrredVerdict::AbsolutelyIrreducible;
    }
    let mut primes = Vec::new();
    let mut t = deg;
    let mut q = 2;
    while q * q <= t {
        if t % q == 0 {
            primes.push(q);
            while t % q == 0 {
                t /= q;
            }
        }
        q += 1;
    }
    if t > 1 {
        primes.push(t);
    }
    for p in primes {
        if spec.n() * p > crate::field::MAX_DEGREE {
            continue; // beyond the representable tower; see module docs
        }
        let ext = FieldSpec::with_default_modulus(spec.n() * p).unwrap();
        let be = bivar.embed_into(ext).expect("tower embedding");
        let fac = bivar_factor(&be);
        if fac.factor_count() > 1 {
            return AbsIrredVerdict::SplitsOverExtension {
                r: p,
                factorization: rehom(fac, 0),
            };
        }
    }
    AbsIrredVerdict::AbsolutelyIrreducible
}

/// `true` iff `p` divides `f` exactly (same coefficient field; embed first
/// when comparing across fields).
pub fn tri_divides(p: &TriPoly, f: &TriPoly) -> bool {
    assert!(!p.is_zero(), "division by the zero polynomial");
    f.exact_div(p).is_some()
}

// ---------------------------------------------------------------------------
// Kasami factor structure
// ---------------------------------------------------------------------------

/// The verified factor structure of phi_d over GF(2^k) for the Kasami degree
/// d = 2^(2k) - 2^k + 1: one factor p_alpha per alpha in GF(2^k) outside
/// GF(2), homogeneous of degree 2^k + 1, with p_alpha(x, 0, 1) =
/// (x - alpha)^(2^k + 1), and the product reconstructing phi_d exactly.
#[derive(Debug, Clone)]
pub struct KasamiFactorSet {
    pub k: u32,
    pub d: u64,
    pub field: FieldSpec,
    pub factors: BTreeMap<FieldElement, TriPoly>,
}

pub fn kasami_phi_factors(k: u32, budget: Budget) -> Result<KasamiFactorSet> {
    if !(2..=4).contains(&k) {
        return Err(Error::InvariantViolation(format!(
            "kasami parameter k = {k} outside the supported range 2..=4"
        )));
    }
    if k == 4 && budget != Budget::High {
        return Err(Error::BudgetExceeded(
            "k = 4 factors a degree-238 polynomial over GF(16); rerun with the high budget".into(),
        ));
    }
    let d: u64 = (1u64 << (2 * k)) - (1u64 << k) + 1;
    let field = FieldSpec::with_default_modulus(k)?;
    let phi = phi_mono_in(d as u32, field);
    let target_deg = (1u32 << k) + 1;

    let fac = bivar_factor(&phi.dehomogenize_z());
    let mut grouped: BTreeMap<FieldElement, TriPoly> = BTreeMap::new();
    for (g, m) in &fac.factors {
        if *m != 1 {
            return Err(Error::InvariantViolation(format!(
                "phi_{d} must be squarefree, found multiplicity {m}"
            )));
        }
        let h = g.homogenize_z_to(g.total_degree().unwrap());
        let spec_u = h.specialize_x01();
        let hd = h.total_degree().unwrap();
        // identify alpha by matching the specialization against (x + a)^deg
        let alpha = field.elements().find(|&a| {
            UniPoly::from_elements(field, &[a, field.one()]).pow(hd as u64) == spec_u
        });
        let alpha = alpha.ok_or_else(|| {
            Error::InvariantViolation(format!(
                "factor of phi_{d} does not specialize to a pure power: {spec_u}"
            ))
        })?;
        grouped
            .entry(alpha)
            .and_modify(|p| *p = p.mul(&h))
            .or_insert(h);
    }

    // the three structural invariants
    let expected: Vec<FieldElement> = field
        .elements()
        .filter(|a| !a.is_zero() && !a.is_one())
        .collect();
    if grouped.keys().copied().collect::<Vec<_>>() != expected {
        return Err(Error::InvariantViolation(format!(
            "phi_{d} roots do not exhaust GF(2^{k}) - GF(2)"
        )));
    }
    let mut product = TriPoly::one(field);
    for (&alpha, p) in &grouped {
        if p.is_homogeneous() != Some(target_deg) {
            return Err(Error::InvariantViolation(format!(
                "p_alpha for alpha = {alpha} is not homogeneous of degree {target_deg}"
            )));
        }
        let lin = UniPoly::from_elements(field, &[alpha, field.one()]);
        if p.specialize_x01() != lin.pow(target_deg as u64) {
            return Err(Error::InvariantViolation(format!(
                "p_alpha(x,0,1) != (x - alpha)^{target_deg} for alpha = {alpha}"
            )));
        }
        product = product.mul(p);
    }
    if product != phi {
        return Err(Error::InvariantViolation(format!(
            "product of the p_alpha does not reconstruct phi_{d}"
        )));
    }

    Ok(KasamiFactorSet {
        k,
        d,
        field,
        factors: grouped,
    })
}

// ---------------------------------------------------------------------------
// Verdict cache (JSON lines)
// ---------------------------------------------------------------------------

/// Cached absolute-irreducibility verdict for one phi_j over GF(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CachedVerdict {
    pub j: u32,
    pub kind: CachedKind,
    pub r: Option<u32>,
    pub factor_count: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CachedKind {
    AbsolutelyIrreducible,
    ReducibleOverBase,
    SplitsOverExtension,
}

impl CachedKind {
    fn as_str(&self) -> &'static str {
        match self {
            CachedKind::AbsolutelyIrreducible => "absolutely-irreducible",
            CachedKind::ReducibleOverBase => "reducible-over-base",
            CachedKind::SplitsOverExtension => "splits-over-extension",
        }
    }

    fn parse(s: &str) -> Option<CachedKind> {
        match s {
            "absolutely-irreducible" => Some(CachedKind::AbsolutelyIrreducible),
            "reducible-over-base" => Some(CachedKind::ReducibleOverBase),
            "splits-over-extension" => Some(CachedKind::SplitsOverExtension),
            _ => None,
        }
    }
}

/// Read-through cache of phi_j verdicts, persisted as JSON lines
/// `{"j": …, "verdict": …, "r": …, "factor-count": …}`. The cache is
/// advisory: absence never changes results, only speed.
#[derive(Debug, Default, Clone)]
pub struct VerdictCache {
    entries: BTreeMap<u32, CachedVerdict>,
    dirty: bool,
}

impl VerdictCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        let file = std::fs::File::open(path)?;
        let mut entries = BTreeMap::new();
        for line in std::io::BufReader::new(file).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let v: serde_json::Value = serde_json::from_str(&line)
                .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
            let j = v["j"].as_u64();
            let kind = v["verdict"].as_str().and_then(CachedKind::parse);
            let factor_count = v["factor-count"].as_u64().unwrap_or(1) as u32;
            let r = v["r"].as_u64().map(|x| x as u32);
            if let (Some(j), Some(kind)) = (j, kind) {
                entries.insert(
                    j as u32,
                    CachedVerdict {
                        j: j as u32,
                        kind,
                        r,
                        factor_count,
                    },
                );
            }
        }
        Ok(VerdictCache {
            entries,
            dirty: false,
        })
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let mut out = std::fs::File::create(path)?;
        for e in self.entries.values() {
            let v = serde_json::json!({
                "j": e.j,
                "verdict": e.kind.as_str(),
                "r": e.r,
                "factor-count": e.factor_count,
            });
            writeln!(out, "{v}")?;
        }
        Ok(())
    }

    pub fn get(&self, j: u32) -> Option<&CachedVerdict> {
        self.entries.get(&j)
    }

    pub fn is_dirty(&self) -> bool {
        self.dirty
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn record(&mut self, j: u32, verdict: &AbsIrredVerdict) -> CachedVerdict {
        let entry = match verdict {
            AbsIrredVerdict::AbsolutelyIrreducible => CachedVerdict {
                j,
                kind: CachedKind::AbsolutelyIrreducible,
                r: None,
                factor_count: 1,
            },
            AbsIrredVerdict::ReducibleOverBase(f) => CachedVerdict {
                j,
                kind: CachedKind::ReducibleOverBase,
                r: None,
                factor_count: f.factor_count(),
            },
            AbsIrredVerdict::SplitsOverExtension { r, factorization } => CachedVerdict {
                j,
                kind: CachedKind::SplitsOverExtension,
                r: Some(*r),
                factor_count: factorization.factor_count(),
            },
        };
        self.entries.insert(j, entry);
        self.dirty = true;
        entry
    }
}

impl fmt::Display for CachedVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CachedKind::AbsolutelyIrreducible => write!(f, "absolutely irreducible"),
            CachedKind::ReducibleOverBase => {
                write!(f, "reducible over the base field ({} factors)", self.factor_count)
            }
            CachedKind::SplitsOverExtension => write!(
                f,
                "splits over the degree-{} extension ({} factors)",
                self.r.unwrap_or(0),
                self.factor_count
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::phi_mono;
    use crate::rng::DetRng;
    use crate::tripoly::Subst;

    fn gf(n: u32) -> FieldSpec {
        FieldSpec::with_default_modulus(n).unwrap()
    }

    fn tri(spec: FieldSpec, terms: &[(u16, u16, u64)]) -> TriPoly {
        let mut p = TriPoly::zero(spec);
        for &(x, y, c) in terms {
            p.add_term_bits(Monomial::new(x, y, 0), c);
        }
        p
    }

    #[test]
    fn factor_constructed_product() {
        let f = gf(1);
        // (x + y)(x + y^2)
        let a = tri(f, &[(1, 0, 1), (0, 1, 1)]);
        let b = tri(f, &[(1, 0, 1), (0, 2, 1)]);
        let fac = bivar_factor(&a.mul(&b));
        assert_eq!(fac.factors.len(), 2);
        assert!(fac.factors.iter().all(|(_, m)| *m == 1));
        assert_eq!(fac.product(), a.mul(&b));
        let set: Vec<&TriPoly> = fac.factors.iter().map(|(g, _)| g).collect();
        assert!(set.contains(&&a) && set.contains(&&b));
    }

    #[test]
    fn factor_with_multiplicities() {
        let f = gf(2);
        let a = tri(f, &[(1, 0, 1), (0, 1, 2)]); // x + 2y
        let b = tri(f, &[(1, 1, 1), (0, 0, 3)]); // xy + 3
        let p = a.pow(3).mul(&b);
        let fac = bivar_factor(&p);
        assert_eq!(fac.product(), p);
        let mults: Vec<u32> = fac.factors.iter().map(|(_, m)| *m).collect();
        assert!(mults.contains(&3) && mults.contains(&1));
    }

    #[test]
    fn irreducible_by_linear_factor_oracle() {
        let f = gf(1);
        // x^2 + xy + y^2 + x: no factor a*x + b*y + c exists (exhaustive over
        // the 7 nonzero linear candidates), so it must be irreducible
        let p = tri(f, &[(2, 0, 1), (1, 1, 1), (0, 2, 1), (1, 0, 1)]);
        for bits in 1u64..8 {
            let cand = tri(
                f,
                &[(1, 0, bits & 1), (0, 1, bits >> 1 & 1), (0, 0, bits >> 2 & 1)],
            );
            if cand.total_degree() == Some(1) {
                assert!(!tri_divides(&cand, &p), "unexpected linear factor {cand}");
            }
        }
        let fac = bivar_factor(&p);
        assert_eq!(fac.factors.len(), 1);
        assert_eq!(fac.factors[0], (p, 1));
    }

    #[test]
    fn phi13_factors_over_gf4() {
        let spec = gf(2);
        let p13 = phi_mono_in(13, spec).dehomogenize_z();
        let fac = bivar_factor(&p13);
        assert_eq!(fac.factors.len(), 2, "phi_13 has two factors over GF(4)");
        for (g, m) in &fac.factors {
            assert_eq!(*m, 1);
            assert_eq!(g.total_degree(), Some(5));
        }
        assert_eq!(fac.product(), p13);
        // conjugacy: the coefficient Frobenius swaps the two factors
        let a = &fac.factors[0].0;
        let b = &fac.factors[1].0;
        assert_eq!(&a.frobenius_coeffs(1), b);
        assert_eq!(&b.frobenius_coeffs(1), a);
    }

    #[test]
    fn abs_irred_linear() {
        let f = gf(1);
        let p = tri(f, &[(1, 0, 1), (0, 1, 1)]); // x + y
        assert!(absolute_irreducibility(&p).is_absolutely_irreducible());
    }

    #[test]
    fn abs_irred_phi5_splits_over_gf4() {
        let p5 = phi_mono(5);
        match absolute_irreducibility(&p5) {
            AbsIrredVerdict::SplitsOverExtension { r, factorization } => {
                assert_eq!(r, 2);
                assert_eq!(factorization.factors.len(), 2);
                for (g, m) in &factorization.factors {
                    assert_eq!(*m, 1);
                    assert_eq!(g.total_degree(), Some(1));
                    // rehomogenized conjugate factors are linear in each variable
                    assert_eq!(g.degree_in(Var::X).max(g.degree_in(Var::Y)), 1);
                }
                // minimality cross-check: there is no divisor r' < 2 to test,
                // and the two factors are Frobenius conjugates
                let a = &factorization.factors[0].0;
                let b = &factorization.factors[1].0;
                assert_eq!(a.frobenius_coeffs(1).make_monic().0, *b);
            }
            v => panic!("phi_5 must split over GF(4), got {v:?}"),
        }
    }

    #[test]
    fn abs_irred_phi7() {
        let p7 = phi_mono(7);
        assert!(absolute_irreducibility(&p7).is_absolutely_irreducible());
        // cross-check: no factor of degree <= 2 exists over GF(4)
        let ext = gf(2);
        let p7e = phi_mono_in(7, ext).dehomogenize_z();
        let fac = bivar_factor(&p7e);
        assert_eq!(fac.factor_count(), 1, "phi_7 stays irreducible over GF(4)");
    }

    #[test]
    fn tri_divides_examples() {
        let spec = gf(2);
        // e3 divides the numerator of every f
        let f = UniPoly::from_bits(spec, &[0, 0, 3, 1, 0, 2, 0, 1]);
        let num = crate::phi::phi_numerator(&f);
        assert!(tri_divides(&TriPoly::e3(spec), &num));

        // p_omega divides phi_13 over GF(4) but not phi_7
        let set = kasami_phi_factors(2, Budget::Default).unwrap();
        let p13 = phi_mono_in(13, spec);
        let p7 = phi_mono_in(7, spec);
        for p in set.factors.values() {
            assert!(tri_divides(p, &p13));
            assert!(!tri_divides(p, &p7));
        }
    }

    #[test]
    fn kasami_k2_structure() {
        let set = kasami_phi_factors(2, Budget::Default).unwrap();
        assert_eq!(set.d, 13);
        assert_eq!(set.factors.len(), 2);
        let field = set.field;
        let omega = field.generator();
        let omega2 = omega * omega;
        let keys: Vec<FieldElement> = set.factors.keys().copied().collect();
        assert_eq!(keys, vec![omega, omega2]);
        for (alpha, p) in &set.factors {
            assert_eq!(p.is_homogeneous(), Some(5));
            let lin = UniPoly::from_elements(field, &[*alpha, field.one()]);
            assert_eq!(p.specialize_x01(), lin.pow(5));
            assert!(absolute_irreducibility(p).is_absolutely_irreducible());
        }
        assert_eq!(kasami_phi_factors(5, Budget::Default).unwrap_err(),
            Error::InvariantViolation(
                "kasami parameter k = 5 outside the supported range 2..=4".into()));
        assert!(matches!(
            kasami_phi_factors(4, Budget::Default),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn factor_roundtrip_random_small() {
        for n in [1u32, 2] {
            let spec = gf(n);
            let mut rng = DetRng::new(0xB1FA + n as u64);
            let mut done = 0;
            while done < 15 {
                // product of random low-degree polynomials
                let mut p = TriPoly::one(spec);
                for _ in 0..=rng.below(2) {
                    let mut g = TriPoly::zero(spec);
                    for _ in 0..3 {
                        g.add_term_bits(
                            Monomial::new(rng.below(3) as u16, rng.below(3) as u16, 0),
                            rng.below(spec.order()),
                        );
                    }
                    if g.is_zero() {
                        continue;
                    }
                    p = p.mul(&g);
                }
                if p.is_zero() || p.total_degree() == Some(0) {
                    continue;
                }
                done += 1;
                let fac = bivar_factor(&p);
                assert_eq!(fac.product(), p, "multiply-back over GF(2^{n})");
                for (g, _) in &fac.factors {
                    assert_eq!(bivar_factor(g).factor_count(), 1, "{g} irreducible");
                }
                // determinism
                let fac2 = bivar_factor(&p);
                assert_eq!(fac, fac2);
            }
        }
    }

    #[test]
    fn homogeneous_factors_rehomogenize_consistently() {
        // factors of the homogeneous phi_13 over GF(4), rehomogenized, are
        // homogeneous with degrees summing to deg phi_13
        let set = kasami_phi_factors(2, Budget::Default).unwrap();
        let total: u32 = set
            .factors
            .values()
            .map(|p| p.is_homogeneous().unwrap())
            .sum();
        assert_eq!(total, 10);
    }

    #[test]
    fn verdict_cache_roundtrip() {
        let dir = std::env::temp_dir().join("apn_surface_cache_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("verdicts.jsonl");
        let mut cache = VerdictCache::new();
        cache.record(7, &AbsIrredVerdict::AbsolutelyIrreducible);
        cache.record(
            5,
            &AbsIrredVerdict::SplitsOverExtension {
                r: 2,
                factorization: Factorization {
                    unit: gf(1).one(),
                    factors: vec![(TriPoly::one(gf(1)), 1), (TriPoly::one(gf(1)), 1)],
                },
            },
        );
        cache.save(&path).unwrap();
        let loaded = VerdictCache::load(&path).unwrap();
        assert_eq!(loaded.get(7), cache.get(7));
        assert_eq!(loaded.get(5), cache.get(5));
        assert_eq!(loaded.get(5).unwrap().r, Some(2));
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    #[ignore = "several seconds; covered by the acceptance suite"]
    fn kasami_k3_structure() {
        let t0 = std::time::Instant::now();
        let set = kasami_phi_factors(3, Budget::Default).unwrap();
        assert_eq!(set.d, 57);
        assert_eq!(set.factors.len(), 6);
        for p in set.factors.values() {
            assert_eq!(p.is_homogeneous(), Some(9));
        }
        eprintln!("kasami k=3 in {:?}", t0.elapsed());
    }

    #[test]
    fn substitution_consistency_of_factors() {
        // sanity: dehomogenized kasami factors evaluated at random points
        // multiply to phi_13's value
        let set = kasami_phi_factors(2, Budget::Default).unwrap();
        let spec = set.field;
        let p13 = phi_mono_in(13, spec);
        let mut rng = DetRng::new(77);
        for _ in 0..20 {
            let at = [
                spec.element(rng.below(spec.order())).unwrap(),
                spec.element(rng.below(spec.order())).unwrap(),
                spec.element(rng.below(spec.order())).unwrap(),
            ];
            let prod = set
                .factors
                .values()
                .fold(spec.one(), |acc, p| acc * p.eval(at));
            assert_eq!(prod, p13.eval(at));
        }
        // and the substitution homomorphism respects the product form
        let subst = [Subst::Keep, Subst::Value(spec.zero()), Subst::Value(spec.one())];
        let lhs = p13.substitute(subst);
        let rhs = set
            .factors
            .values()
            .fold(TriPoly::one(spec), |acc, p| acc.mul(&p.substitute(subst)));
        assert_eq!(lhs, rhs);
    }
}
