//! Exhaustive differential-uniformity testing and surface point scans.
//!
//! A function f on GF(2^n) is almost perfect nonlinear (APN) when
//! `f(x+a) + f(x) = b` has at most 2 solutions for every a != 0, b. The
//! number of solutions is always even: x and x + a pair up.
//!
//! `surface_scan` links APN failure to rational points: a zero of the surface
//! polynomial with pairwise-distinct coordinates yields a pair (a, b) with at
//! least four solutions, and conversely.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::field::{FieldElement, FieldSpec};
use crate::phi::phi_of;
use crate::tripoly::{Monomial, Subst, TriPoly, Var};
use crate::unipoly::UniPoly;
use crate::{Error, Result};

/// Exhaustion limit for the per-a tabulation.
pub const MAX_DIFF_DEGREE: u32 = 20;
/// Point-enumeration limit for surface scans (3n <= 36).
pub const MAX_SURFACE_DEGREE: u32 = 12;

/// Differential spectrum of f over GF(2^n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffSpectrum {
    pub n: u32,
    /// max over a != 0, b of the solution count of f(x+a)+f(x) = b
    pub delta: u32,
    /// solution-count -> number of (a, b) pairs attaining it
    pub histogram: BTreeMap<u32, u64>,
    pub witness: Option<DiffWitness>,
}

/// A pair (a, b) attaining the maximal solution count, with its solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffWitness {
    pub a: FieldElement,
    pub b: FieldElement,
    pub solutions: Vec<FieldElement>,
}

/// Rational-point counts of the surface phi = 0 over GF(2^n)^3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceCount {
    pub n: u32,
    pub total: u64,
    /// zeros with (x+y)(x+z)(y+z) != 0, i.e. pairwise-distinct coordinates
    pub nondegenerate: u64,
    pub witness: Option<[FieldElement; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApnScanRow {
    pub n: u32,
    pub delta: u32,
    pub apn: bool,
}

fn scan_field(f: &UniPoly, n: u32) -> Result<FieldSpec> {
    if f.spec().n() == n {
        Ok(f.spec())
    } else {
        FieldSpec::with_default_modulus(n)
    }
}

fn value_table(f: &UniPoly, spec: FieldSpec) -> Result<Vec<u64>> {
    let fe = f.reduce_to_minimal_subfield().embed_into(spec)?;
    Ok(spec
        .elements()
        .map(|x| fe.eval(x).bits())
        .collect())
}

/// Tabulates b = f(x+a) + f(x) over all x for every a != 0.
pub fn diff_uniformity(f: &UniPoly, spec: FieldSpec) -> Result<DiffSpectrum> {
    let n = spec.n();
    if n > MAX_DIFF_DEGREE {
        return Err(Error::BudgetExceeded(format!(
            "differential tabulation needs 2^{} evaluations; the cap is n <= {MAX_DIFF_DEGREE}",
            2 * n
        )));
    }
    let table = value_table(f, spec)?;
    let size = table.len();
    let mut histogram: BTreeMap<u32, u64> = BTreeMap::new();
    let mut counts = vec![0u32; size];
    let mut best: Option<(u32, u64, u64)> = None;
    for a in 1..size as u64 {
        counts.fill(0);
        for x in 0..size as u64 {
            counts[(table[x as usize] ^ table[(x ^ a) as usize]) as usize] += 1;
        }
        for (b, &c) in counts.iter().enumerate() {
            *histogram.entry(c).or_insert(0) += 1;
            debug_assert!(c % 2 == 0, "solution counts pair up in characteristic 2");
            if best.map(|(d, _, _)| c > d).unwrap_or(true) {
                best = Some((c, a, b as u64));
            }
        }
    }
    let witness = best.map(|(_, a, b)| {
        let solutions = (0..size as u64)
            .filter(|&x| table[x as usize] ^ table[(x ^ a) as usize] == b)
            .map(|x| spec.element_unchecked(x))
            .collect();
        DiffWitness {
            a: spec.element_unchecked(a),
            b: spec.element_unchecked(b),
            solutions,
        }
    });
    Ok(DiffSpectrum {
        n,
        delta: best.map(|(d, _, _)| d).unwrap_or(0),
        histogram,
        witness,
    })
}

/// `delta <= 2` over GF(2^n).
pub fn is_apn(f: &UniPoly, n: u32) -> Result<bool> {
    let spec = scan_field(f, n)?;
    Ok(diff_uniformity(f, spec)?.delta <= 2)
}

/// One differential tabulation per extension degree in the range. The
/// coefficient field degree must divide every scanned n; a non-divisible n is
/// an error, not a silent skip.
pub fn apn_scan(f: &UniPoly, range: RangeInclusive<u32>) -> Result<Vec<ApnScanRow>> {
    let f = f.reduce_to_minimal_subfield();
    let m = f.spec().n();
    if *range.end() > MAX_DIFF_DEGREE {
        return Err(Error::BudgetExceeded(format!(
            "scan range ends at {} but the cap is n <= {MAX_DIFF_DEGREE}",
            range.end()
        )));
    }
    for n in range.clone() {
        if n % m != 0 {
            return Err(Error::NotASubfield { m, n });
        }
    }
    let mut rows = Vec::new();
    for n in range {
        let spec = scan_field(&f, n)?;
        let s = diff_uniformity(&f, spec)?;
        rows.push(ApnScanRow {
            n,
            delta: s.delta,
            apn: s.delta <= 2,
        });
    }
    Ok(rows)
}

/// Counts zeros of the surface polynomial over GF(2^n)^3, split into the
/// degenerate locus and the nondegenerate points that certify APN failure.
///
/// The nondegenerate count enumerates (x, y) pairs and resolves z through a
/// per-a table of the derivative map z -> f(z) + f(z+a), rather than
/// enumerating all of GF(2^n)^3.
pub fn surface_scan(f: &UniPoly, n: u32) -> Result<SurfaceCount> {
    if n > MAX_SURFACE_DEGREE {
        return Err(Error::BudgetExceeded(format!(
            "surface enumeration needs 3n <= 36, got n = {n}"
        )));
    }
    let spec = scan_field(f, n)?;
    let fe = f.reduce_to_minimal_subfield().embed_into(spec)?;
    let table = value_table(&fe, spec)?;
    let size = table.len();

    let mut nondeg: u64 = 0;
    let mut counts = vec![0u32; size];
    for a in 1..size as u64 {
        counts.fill(0);
        for z in 0..size as u64 {
            counts[(table[z as usize] ^ table[(z ^ a) as usize]) as usize] += 1;
        }
        for x in 0..size as u64 {
            let c = counts[(table[x as usize] ^ table[(x ^ a) as usize]) as usize];
            debug_assert!(c >= 2, "x and x+a always solve their own pair");
            nondeg += (c - 2) as u64;
        }
    }

    // witness: lexicographically first nondegenerate zero
    let mut witness = None;
    if nondeg > 0 {
        'search: for x in 0..size as u64 {
            for y in 0..size as u64 {
                if y == x {
                    continue;
                }
                let a = x ^ y;
                let c = table[x as usize] ^ table[y as usize];
                for z in 0..size as u64 {
                    if z == x || z == y {
                        continue;
                    }
                    if table[z as usize] ^ table[(z ^ a) as usize] == c {
                        witness = Some([
                            spec.element_unchecked(x),
                            spec.element_unchecked(y),
                            spec.element_unchecked(z),
                        ]);
                        break 'search;
                    }
                }
            }
        }
    }

    // degenerate locus by direct evaluation of phi on the planes x=y and the
    // diagonal; the three planes contribute equally because phi is symmetric
    let phi = phi_of(&fe).phi().clone();
    let plane = merge_y_into_x(&phi);
    let mut z_plane: u64 = 0;
    for x in spec.elements() {
        let slice = plane
            .substitute([Subst::Value(x), Subst::Keep, Subst::Keep])
            .as_unipoly(Var::Z)
            .expect("only z is left");
        for z in spec.elements() {
            if slice.eval(z).is_zero() {
                z_plane += 1;
            }
        }
    }
    let diag = merge_all_into_x(&phi);
    let z_line = spec.elements().filter(|&x| diag.eval(x).is_zero()).count() as u64;
    let total = nondeg + 3 * z_plane - 2 * z_line;

    Ok(SurfaceCount {
        n,
        total,
        nondegenerate: nondeg,
        witness,
    })
}

/// Expands a nondegenerate surface zero into the APN-violating pair: a = x+y,
/// b = f(x)+f(y), whose solution set contains the four distinct values
/// x, y, z, z+a.
pub fn witness_pair(f: &UniPoly, point: [FieldElement; 3]) -> Result<DiffWitness> {
    let spec = point[0].spec();
    let fe = f.reduce_to_minimal_subfield().embed_into(spec)?;
    let [x, y, z] = point;
    let a = x + y;
    let b = fe.eval(x) + fe.eval(y);
    let solutions = spec
        .elements()
        .filter(|&w| fe.eval(w + a) + fe.eval(w) == b)
        .collect();
    let _ = z;
    Ok(DiffWitness { a, b, solutions })
}

/// phi(x, x, z) as a polynomial in (x, z).
fn merge_y_into_x(p: &TriPoly) -> TriPoly {
    let mut out = TriPoly::zero(p.spec());
    for (m, c) in p.terms() {
        out.add_term_bits(Monomial::new(m.x + m.y, 0, m.z), c.bits());
    }
    out
}

/// phi(x, x, x) as a univariate polynomial.
fn merge_all_into_x(p: &TriPoly) -> UniPoly {
    let mut out = TriPoly::zero(p.spec());
    for (m, c) in p.terms() {
        out.add_term_bits(Monomial::new(m.x + m.y + m.z, 0, 0), c.bits());
    }
    out.as_unipoly(Var::X).expect("only x is left")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(n: u32) -> FieldSpec {
        FieldSpec::with_default_modulus(n).unwrap()
    }

    fn mono(d: usize) -> UniPoly {
        UniPoly::monomial(gf(1).one(), d)
    }

    #[test]
    fn gold_cube_is_apn() {
        let s = diff_uniformity(&mono(3), gf(4)).unwrap();
        assert_eq!(s.delta, 2);
        assert!(is_apn(&mono(3), 8).unwrap());
    }

    #[test]
    fn x5_fails_on_gf16() {
        let s = diff_uniformity(&mono(5), gf(4)).unwrap();
        assert_eq!(s.delta, 4);
        assert!(!is_apn(&mono(5), 4).unwrap());
        assert!(is_apn(&mono(5), 3).unwrap());
        // witness carries delta-many solutions
        let w = s.witness.unwrap();
        assert_eq!(w.solutions.len(), 4);
    }

    #[test]
    fn kasami_13_on_gf32() {
        let s = diff_uniformity(&mono(13), gf(5)).unwrap();
        assert_eq!(s.delta, 2);
    }

    #[test]
    fn histogram_row_sums() {
        let spec = gf(4);
        let f = mono(5);
        let s = diff_uniformity(&f, spec).unwrap();
        // sum over the histogram of count * frequency = (2^n - 1) * 2^n
        let weighted: u64 = s.histogram.iter().map(|(&c, &f)| c as u64 * f).sum();
        assert_eq!(weighted, 15 * 16);
        let pairs: u64 = s.histogram.values().sum();
        assert_eq!(pairs, 15 * 16);
        assert!(s.histogram.keys().all(|&c| c % 2 == 0));
    }

    #[test]
    fn scan_kasami_13() {
        let rows = apn_scan(&mono(13), 3..=9).unwrap();
        let apn_at: Vec<u32> = rows.iter().filter(|r| r.apn).map(|r| r.n).collect();
        assert_eq!(apn_at, vec![3, 5, 7, 9]);
    }

    #[test]
    fn scan_cube_everywhere_apn() {
        let rows = apn_scan(&mono(3), 2..=10).unwrap();
        assert!(rows.iter().all(|r| r.apn));
    }

    #[test]
    fn linearized_x4_has_full_kernel() {
        // f(x+a)+f(x) = a^4 is constant in x: every x solves b = a^4
        let rows = apn_scan(&mono(4), 2..=6).unwrap();
        for r in rows {
            assert_eq!(r.delta, 1 << r.n);
            assert!(!r.apn);
        }
    }

    #[test]
    fn scan_rejects_incompatible_coefficients() {
        let f4 = gf(2);
        let f = UniPoly::monomial(f4.generator(), 3);
        assert!(matches!(
            apn_scan(&f, 3..=4),
            Err(Error::NotASubfield { m: 2, n: 3 })
        ));
        assert!(apn_scan(&f, 2..=2).is_ok());
    }

    #[test]
    fn budget_limits() {
        assert!(matches!(
            diff_uniformity(&mono(3), gf(21)),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(matches!(
            surface_scan(&mono(3), 13),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn cube_surface_has_no_zeros() {
        // phi of x^3 is the constant 1
        let c = surface_scan(&mono(3), 4).unwrap();
        assert_eq!(c.total, 0);
        assert_eq!(c.nondegenerate, 0);
        assert!(c.witness.is_none());
    }

    #[test]
    fn x5_surface_matches_differential_failure() {
        let c = surface_scan(&mono(5), 4).unwrap();
        assert!(c.nondegenerate > 0);
        let point = c.witness.unwrap();
        let w = witness_pair(&mono(5), point).unwrap();
        assert!(w.solutions.len() >= 4);
        // the four derived solutions are distinct and present
        let [x, y, z] = point;
        let a = x + y;
        for v in [x, y, z, z + a] {
            assert!(w.solutions.contains(&v));
        }
        // and the spectrum agrees
        let s = diff_uniformity(&mono(5), gf(4)).unwrap();
        assert!(s.delta >= 4);

        let c3 = surface_scan(&mono(5), 3).unwrap();
        assert_eq!(c3.nondegenerate, 0);
    }

    #[test]
    fn equivalence_small_sample() {
        // is_apn(f, n) iff the surface has no nondegenerate zero
        let polys: Vec<UniPoly> = vec![
            mono(3),
            mono(5),
            mono(6),
            UniPoly::from_bits(gf(1), &[0, 0, 0, 1, 0, 0, 1]), // x^6 + x^3
            UniPoly::from_bits(gf(1), &[0, 1, 0, 1, 0, 1, 0, 1]), // x^7+x^5+x^3+x
            UniPoly::from_bits(gf(1), &[1, 0, 1, 0, 0, 1, 0, 0, 0, 1]), // x^9+x^5+x^2+1
        ];
        for f in &polys {
            for n in 3..=6 {
                let apn = is_apn(f, n).unwrap();
                let c = surface_scan(f, n).unwrap();
                assert_eq!(
                    apn,
                    c.nondegenerate == 0,
                    "equivalence fails for {f} at n = {n}"
                );
                if c.nondegenerate > 0 {
                    let s = diff_uniformity(f, scan_field(f, n).unwrap()).unwrap();
                    assert!(s.delta >= 4);
                }
            }
        }
    }
}
