//! Acceptance suite: one test per criterion, each printing a pass line with
//! its measured runtime. The two budget-gated checks live in the `#[ignore]`d
//! test at the bottom and are excluded from the default run.

use std::time::{Duration, Instant};

use apn_surface::apn::{diff_uniformity, is_apn, surface_scan, witness_pair};
use apn_surface::classify::{classify, Criterion, Outcome};
use apn_surface::factor::{
    absolute_irreducibility, bivar_factor, kasami_phi_factors, tri_divides, AbsIrredVerdict,
    Budget, VerdictCache,
};
use apn_surface::phi::{double_identity_check, gf2, phi_mono, phi_mono_in};
use apn_surface::rng::DetRng;
use apn_surface::verify::run_checks;
use apn_surface::{FieldSpec, Monomial, TriPoly, UniPoly};

fn gf(n: u32) -> FieldSpec {
    FieldSpec::with_default_modulus(n).unwrap()
}

fn poly_from_bits(spec: FieldSpec, bits: &[u64]) -> UniPoly {
    let elems: Vec<_> = bits
        .iter()
        .map(|&b| spec.element(b).expect("coefficient fits"))
        .collect();
    UniPoly::from_elements(spec, &elems)
}

fn gf2_poly(exponents: &[usize]) -> UniPoly {
    let mut bits = vec![0u64; exponents.iter().max().unwrap() + 1];
    for &e in exponents {
        bits[e] ^= 1;
    }
    poly_from_bits(gf(1), &bits)
}

fn report(criterion: &str, detail: &str, elapsed: Duration, budget: Duration) {
    println!(
        "PASS {criterion}: {detail} ({elapsed:.2?}, budget {budget:?})"
    );
    assert!(
        elapsed <= budget,
        "{criterion} exceeded its runtime budget: {elapsed:?} > {budget:?}"
    );
}

/// Criterion 1: the Kasami factor structure at k = 2 and k = 3.
#[test]
fn criterion_1_kasami_factor_structure() {
    let t2 = Instant::now();
    let set2 = kasami_phi_factors(2, Budget::Default).unwrap();
    let e2 = t2.elapsed();

    assert_eq!(set2.d, 13);
    assert_eq!(set2.factors.len(), 2);
    let f4 = set2.field;
    let product2 = set2
        .factors
        .values()
        .fold(TriPoly::one(f4), |acc, p| acc.mul(p));
    assert_eq!(product2, phi_mono_in(13, f4), "product reconstructs phi_13");
    for (alpha, p) in &set2.factors {
        assert_eq!(p.is_homogeneous(), Some(5));
        let lin = UniPoly::from_elements(f4, &[*alpha, f4.one()]);
        assert_eq!(p.specialize_x01(), lin.pow(5), "(x - alpha)^5 at alpha = {alpha}");
        assert!(absolute_irreducibility(p).is_absolutely_irreducible());
    }
    report(
        "criterion 1a",
        "phi_13 = p_omega * p_omega^2 over GF(4), both absolutely irreducible, specializations (x-alpha)^5",
        e2,
        Duration::from_secs(1),
    );

    let t3 = Instant::now();
    let set3 = kasami_phi_factors(3, Budget::Default).unwrap();
    let f8 = set3.field;
    assert_eq!(set3.d, 57);
    assert_eq!(set3.factors.len(), 6);
    let product3 = set3
        .factors
        .values()
        .fold(TriPoly::one(f8), |acc, p| acc.mul(p));
    assert_eq!(product3, phi_mono_in(57, f8), "product reconstructs phi_57");
    for (alpha, p) in &set3.factors {
        assert_eq!(p.is_homogeneous(), Some(9));
        let lin = UniPoly::from_elements(f8, &[*alpha, f8.one()]);
        assert_eq!(p.specialize_x01(), lin.pow(9), "(x - alpha)^9 at alpha = {alpha}");
        assert!(absolute_irreducibility(p).is_absolutely_irreducible());
    }
    let e3 = t3.elapsed();
    report(
        "criterion 1b",
        "phi_57 = product of 6 absolutely irreducible degree-9 factors over GF(8), specializations (x-alpha)^9",
        e3,
        Duration::from_secs(300),
    );
}

/// Criterion 2: the squaring law phi_{2j} = phi_j^2 * e3 for 0 <= j <= 32.
#[test]
fn criterion_2_square_law() {
    let t = Instant::now();
    for j in 0..=32u32 {
        assert!(double_identity_check(j), "square law fails at j = {j}");
    }
    // the k = 3 instance spelled out: the published identity equates phi at
    // index 2^(2k-1)-2^(k-1)+2 = 30 with the square of phi at index
    // 2^(2k-2)-2^(k-2)+1 = 15 times e3
    let lhs = phi_mono(30);
    let rhs = phi_mono(15).square().mul(&TriPoly::e3(gf2()));
    assert_eq!(lhs, rhs);
    report(
        "criterion 2",
        "phi_{2j} = phi_j^2 * (x+y)(y+z)(z+x) for all 0 <= j <= 32, including phi_30 = phi_15^2 * e3",
        t.elapsed(),
        Duration::from_secs(10),
    );
}

/// Criterion 3: the boundary-case inequality.
#[test]
fn criterion_3_boundary_inequality() {
    let t = Instant::now();
    let spec = gf2();
    let c1 = gf2_poly(&[0, 1, 3]); // 1 + x + x^3
    let c2 = gf2_poly(&[0, 2, 3]); // 1 + x^2 + x^3
    let lhs = c1.pow(9).add(&c2.pow(9));
    let rhs = phi_mono(30).specialize_x01();
    assert_eq!(lhs.spec(), spec);
    assert_ne!(lhs, rhs, "the degree-27 specializations must differ");
    report(
        "criterion 3",
        "(1+x+x^3)^9 + (1+x^2+x^3)^9 != phi_30(x,0,1), exact coefficient comparison",
        t.elapsed(),
        Duration::from_secs(1),
    );
}

/// Criterion 4: APN ground truth for the Gold and Kasami-Welch monomials.
#[test]
fn criterion_4_apn_ground_truth() {
    let t = Instant::now();
    let cube = gf2_poly(&[3]);
    for n in 2..=12 {
        assert!(is_apn(&cube, n).unwrap(), "x^3 must be APN at n = {n}");
    }
    let x5 = gf2_poly(&[5]);
    for n in 2..=12u32 {
        assert_eq!(
            is_apn(&x5, n).unwrap(),
            n % 2 == 1,
            "x^5 is APN exactly at odd n (n = {n})"
        );
    }
    assert_eq!(diff_uniformity(&x5, gf(4)).unwrap().delta, 4);
    let x13 = gf2_poly(&[13]);
    for n in 3..=11u32 {
        assert_eq!(
            is_apn(&x13, n).unwrap(),
            n % 2 == 1,
            "x^13 is APN exactly at odd n (n = {n})"
        );
    }
    report(
        "criterion 4",
        "x^3 APN on 2..=12; x^5 APN exactly at odd n with delta 4 at n = 4; x^13 APN exactly at odd n in 3..=11",
        t.elapsed(),
        Duration::from_secs(120),
    );
}

/// The fixed 50-polynomial corpus: a curated head plus seeded random fill,
/// all monic over GF(2) with 3 <= degree <= 13.
fn corpus() -> Vec<UniPoly> {
    let mut polys = vec![
        gf2_poly(&[3]),
        gf2_poly(&[4]),
        gf2_poly(&[5]),
        gf2_poly(&[6, 3]),
        gf2_poly(&[6, 4]),
        gf2_poly(&[7, 1]),
        gf2_poly(&[9, 3]),
        gf2_poly(&[12, 3]),
        gf2_poly(&[13]),
        gf2_poly(&[13, 7]),
    ];
    let mut rng = DetRng::new(0xC0FFEE);
    while polys.len() < 50 {
        let deg = 3 + rng.below(11) as usize;
        let mut bits: Vec<u64> = (0..deg).map(|_| rng.below(2)).collect();
        bits.push(1);
        let f = poly_from_bits(gf(1), &bits);
        if !polys.contains(&f) {
            polys.push(f);
        }
    }
    polys
}

/// Criterion 5: surface zeros and APN failure are equivalent at desk scale.
#[test]
fn criterion_5_surface_apn_equivalence() {
    let t = Instant::now();
    let polys = corpus();
    assert_eq!(polys.len(), 50);
    let mut witnesses = 0usize;
    for f in &polys {
        for n in 3..=7u32 {
            let apn = is_apn(f, n).unwrap();
            let scan = surface_scan(f, n).unwrap();
            assert_eq!(
                apn,
                scan.nondegenerate == 0,
                "equivalence fails for f = {f} at n = {n}"
            );
            if let Some(point) = scan.witness {
                let pair = witness_pair(f, point).unwrap();
                assert!(
                    pair.solutions.len() >= 4,
                    "witness expansion must give >= 4 solutions for f = {f} at n = {n}"
                );
                let [x, y, z] = point;
                let a = x + y;
                for v in [x, y, z, z + a] {
                    assert!(pair.solutions.contains(&v));
                }
                // the four values are pairwise distinct
                let vals = [x, y, z, z + a];
                for i in 0..4 {
                    for j in i + 1..4 {
                        assert_ne!(vals[i], vals[j]);
                    }
                }
                witnesses += 1;
            }
        }
    }
    assert!(witnesses > 0, "the corpus must contain non-APN cases");
    report(
        "criterion 5",
        &format!(
            "is_apn(f, n) <=> no nondegenerate surface zero for 50 polynomials x n in 3..=7 \
             ({witnesses} witnesses expanded to >= 4 verified solutions)"
        ),
        t.elapsed(),
        Duration::from_secs(300),
    );
}

/// Criterion 6: the classifier fixtures.
#[test]
fn criterion_6_classifier_fixtures() {
    let t = Instant::now();
    let mut cache = VerdictCache::new();

    let v = classify(&gf2_poly(&[13, 7]), 9, &mut cache);
    assert_eq!(v.outcome, Outcome::NotApnForAllLargeN);
    assert_eq!(v.criterion, Some(Criterion::KasamiMain));
    assert_eq!(v.witness_j, Some(7));

    let v = classify(&gf2_poly(&[241, 13]), 9, &mut cache);
    assert_eq!(v.outcome, Outcome::Inconclusive, "the counterexample shape stays inconclusive");
    assert!(v.reasons.iter().any(|r| r.contains("phi_13")));

    // x^57 + a x^30 + a^2 x^3 over GF(4), n with gcd(3, n) = 1
    let f4 = gf(2);
    let a = f4.generator();
    let special = UniPoly::monomial(f4.one(), 57)
        .add(&UniPoly::monomial(a, 30))
        .add(&UniPoly::monomial(a * a, 3));
    let v = classify(&special, 2, &mut cache);
    assert_eq!(v.outcome, Outcome::BoundaryNotApnForAllLargeN);
    assert_eq!(v.criterion, Some(Criterion::KasamiBoundary));

    // same shape with b != a^2
    let off_form = UniPoly::monomial(f4.one(), 57)
        .add(&UniPoly::monomial(a, 30))
        .add(&UniPoly::monomial(f4.one(), 3));
    let v = classify(&off_form, 2, &mut cache);
    assert_eq!(v.outcome, Outcome::NotApnForAllLargeN);
    assert_eq!(v.criterion, Some(Criterion::KasamiBoundary));

    for d in [3usize, 5, 13] {
        let v = classify(&gf2_poly(&[d]), 9, &mut cache);
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert_eq!(v.criterion, Some(Criterion::ExceptionalMonomial));
    }
    report(
        "criterion 6",
        "x^13+x^7 not-APN via j = 7; x^241+x^13 inconclusive; boundary special form boundary-not-APN; \
         off-form not-APN; x^3, x^5, x^13 exceptional",
        t.elapsed(),
        Duration::from_secs(120),
    );
}

/// Exhaustively verified irreducible building block of degree <= 3: any
/// proper factorization over a field includes a linear factor.
fn verified_irreducible_blocks(spec: FieldSpec, rng: &mut DetRng, count: usize) -> Vec<TriPoly> {
    let mut linears = Vec::new();
    for a in spec.elements() {
        for b in spec.elements() {
            for c in spec.elements() {
                if a.is_zero() && b.is_zero() {
                    continue;
                }
                let mut p = TriPoly::zero(spec);
                p.add_term(Monomial::new(1, 0, 0), a);
                p.add_term(Monomial::new(0, 1, 0), b);
                p.add_term(Monomial::new(0, 0, 0), c);
                linears.push(p);
            }
        }
    }
    let mut out: Vec<TriPoly> = Vec::new();
    while out.len() < count {
        let deg = 1 + rng.below(3) as u16;
        let mut p = TriPoly::zero(spec);
        for _ in 0..(2 + rng.below(4)) {
            let i = rng.below(deg as u64 + 1) as u16;
            let j = rng.below((deg - i.min(deg)) as u64 + 1) as u16;
            let c = spec.element(rng.below(spec.order())).unwrap();
            p.add_term(Monomial::new(i, j, 0), c);
        }
        if p.total_degree().map(|d| d == 0).unwrap_or(true) {
            continue;
        }
        if p.total_degree().unwrap() > 1 {
            // degree-2/3 candidates must survive the exhaustive linear-divisor oracle
            if linears.iter().any(|l| tri_divides(l, &p)) {
                continue;
            }
        }
        let (monic, _) = p.make_monic();
        if !out.contains(&monic) {
            out.push(monic);
        }
    }
    out
}

/// Criterion 7: multiply-then-factor round trips and the two named
/// absolute-irreducibility verdicts.
#[test]
fn criterion_7_factorization_properties() {
    let t = Instant::now();
    let mut done = 0u32;
    for n in [1u32, 2] {
        let spec = gf(n);
        let mut rng = DetRng::new(0xFAC2 + n as u64);
        let blocks = verified_irreducible_blocks(spec, &mut rng, 12);
        while done < 50 * n {
            // random multiset of blocks with total degree <= 10
            let mut expected: Vec<(TriPoly, u32)> = Vec::new();
            let mut product = TriPoly::one(spec);
            let mut deg = 0u32;
            for _ in 0..(1 + rng.below(4)) {
                let b = &blocks[rng.below(blocks.len() as u64) as usize];
                let d = b.total_degree().unwrap();
                if deg + d > 10 {
                    break;
                }
                deg += d;
                product = product.mul(b);
                match expected.iter_mut().find(|(g, _)| g == b) {
                    Some(slot) => slot.1 += 1,
                    None => expected.push((b.clone(), 1)),
                }
            }
            if expected.is_empty() {
                continue;
            }
            done += 1;
            expected.sort_by(|(a, ma), (b, mb)| {
                a.total_degree()
                    .cmp(&b.total_degree())
                    .then_with(|| a.cmp(b))
                    .then(ma.cmp(mb))
            });
            let fac = bivar_factor(&product);
            assert_eq!(
                fac.factors, expected,
                "factor multiset differs over GF(2^{n})"
            );
            assert_eq!(fac.product(), product);
        }
    }
    assert_eq!(done, 100);

    match absolute_irreducibility(&phi_mono(5)) {
        AbsIrredVerdict::SplitsOverExtension { r: 2, .. } => {}
        v => panic!("phi_5 must split at r = 2, got {v:?}"),
    }
    assert!(absolute_irreducibility(&phi_mono(7)).is_absolutely_irreducible());
    report(
        "criterion 7",
        "100 multiply-then-factor round trips over GF(2)/GF(4) recover factor multisets exactly; \
         phi_5 splits over GF(4); phi_7 absolutely irreducible",
        t.elapsed(),
        Duration::from_secs(120),
    );
}

/// Criterion 8 (high budget, non-CI): the gated verification items. Note:
/// the divisibility half asserts the stated claim verbatim; the computation
/// finds that the embedded GF(4)-factors of phi_13 do not divide phi_241, so
/// this test fails honestly when run. See the verify module for the passing
/// irreducibility half.
#[test]
#[ignore = "high budget: run explicitly with --ignored"]
fn criterion_8_high_budget() {
    let t = Instant::now();
    let reports = run_checks(Budget::High);
    let div = reports
        .iter()
        .find(|r| r.name == "counterexample-divisibility")
        .expect("gated check present");
    let irred = reports
        .iter()
        .find(|r| r.name == "boundary-irreducible-gf8")
        .expect("gated check present");
    assert!(
        t.elapsed() <= Duration::from_secs(3600),
        "high-budget battery exceeded one hour"
    );
    println!(
        "{} criterion 8a: {}",
        if div.passed { "PASS" } else { "FAIL" },
        div.detail
    );
    println!(
        "{} criterion 8b: {}",
        if irred.passed { "PASS" } else { "FAIL" },
        irred.detail
    );
    assert!(
        irred.passed,
        "phi of x^57 + a x^30 + a^2 x^3 must be irreducible over GF(8): {}",
        irred.detail
    );
    assert!(
        div.passed,
        "embedded p_omega, p_omega^2 divide phi_241 over GF(16): {}",
        div.detail
    );
}
