//! Cross-module consistency: polynomials the classifier rules out must
//! actually fail the exhaustive APN test at the top of the scan range. This
//! is evidence for the asymptotic statements, checked over a fixed curated
//! list, not a proof.

use apn_surface::apn::diff_uniformity;
use apn_surface::classify::{classify, Outcome};
use apn_surface::factor::VerdictCache;
use apn_surface::{FieldSpec, UniPoly};

fn gf2_poly(exponents: &[usize]) -> UniPoly {
    let spec = FieldSpec::with_default_modulus(1).unwrap();
    let elems: Vec<_> = {
        let mut bits = vec![0u64; exponents.iter().max().unwrap() + 1];
        for &e in exponents {
            bits[e] ^= 1;
        }
        bits.iter().map(|&b| spec.element(b).unwrap()).collect()
    };
    UniPoly::from_elements(spec, &elems)
}

#[test]
fn classified_not_apn_fails_exhaustively_at_10_and_11() {
    // curated polynomials of degree <= 13 over GF(2) hitting each criterion
    let curated: Vec<(UniPoly, &str)> = vec![
        (gf2_poly(&[7, 1]), "odd degree 7"),
        (gf2_poly(&[7, 6, 0]), "odd degree 7 with tail"),
        (gf2_poly(&[11, 3]), "odd degree 11"),
        (gf2_poly(&[13, 7]), "kasami main witness j = 7"),
        (gf2_poly(&[13, 7, 5]), "kasami main with extra terms"),
        (gf2_poly(&[6, 3]), "degree 2e, e = 3 odd"),
        (gf2_poly(&[10, 5]), "degree 2e, e = 5 odd"),
        (gf2_poly(&[10, 7, 2]), "degree 2e with odd term 7"),
    ];
    let mut cache = VerdictCache::new();
    for (f, label) in &curated {
        let v = classify(f, 10, &mut cache);
        assert!(
            matches!(
                v.outcome,
                Outcome::NotApnForAllLargeN | Outcome::BoundaryNotApnForAllLargeN
            ),
            "{label}: expected a not-APN classification, got {:?}",
            v.outcome
        );
        for n in [10u32, 11] {
            let spec = FieldSpec::with_default_modulus(n).unwrap();
            let s = diff_uniformity(f, spec).unwrap();
            assert!(
                s.delta >= 4,
                "{label}: classified not-APN but delta = {} at n = {n}",
                s.delta
            );
        }
    }
}

#[test]
fn surface_witness_bounds_delta_from_below() {
    use apn_surface::apn::{surface_scan, witness_pair};
    for (exs, n) in [(vec![5usize], 4u32), (vec![6, 3], 5), (vec![7, 1], 6)] {
        let f = gf2_poly(&exs);
        let scan = surface_scan(&f, n).unwrap();
        if scan.nondegenerate == 0 {
            continue;
        }
        let spec = FieldSpec::with_default_modulus(n).unwrap();
        let delta = diff_uniformity(&f, spec).unwrap().delta;
        let pair = witness_pair(&f, scan.witness.unwrap()).unwrap();
        assert!(delta as usize >= pair.solutions.len());
        assert!(delta >= 4);
    }
}
