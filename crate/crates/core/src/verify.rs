//! Reproduction battery for the published computations this library is built
//! around: the Kasami-degree factor structure, the squaring law for the
//! per-monomial surface polynomials, the boundary-case inequality, and the
//! high-budget divisibility and irreducibility claims.
//!
//! Each check recomputes its claim from scratch and reports pass/fail with a
//! short detail string; nothing is assumed.

use crate::factor::{
    absolute_irreducibility, kasami_phi_factors, tri_divides, Budget,
};
use crate::field::FieldSpec;
use crate::phi::{double_identity_check, gf2, phi_mono, phi_mono_in, phi_of};
use crate::tripoly::TriPoly;
use crate::unipoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckReport {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CheckReport {
            name,
            passed,
            detail,
        }
    }
}

/// Runs the default-budget battery, plus the gated items at the high budget.
pub fn run_checks(budget: Budget) -> Vec<CheckReport> {
    let mut out = vec![
        check_kasami_set(2),
        check_kasami_set(3),
        check_square_law(),
        check_boundary_inequality(),
    ];
    if budget == Budget::High {
        out.push(check_counterexample_divisibility());
        out.push(check_boundary_irreducible_gf8());
    }
    out
}

/// (a) the Kasami factor structure for k = 2, 3: factor count, homogeneity,
/// specializations, product reconstruction (all verified inside
/// `kasami_phi_factors`), plus absolute irreducibility of every factor.
fn check_kasami_set(k: u32) -> CheckReport {
    let name = match k {
        2 => "kasami-factors-k2",
        _ => "kasami-factors-k3",
    };
    let set = match kasami_phi_factors(k, Budget::Default) {
        Ok(s) => s,
        Err(e) => return CheckReport::new(name, false, format!("structure check failed: {e}")),
    };
    let expected = (1usize << k) - 2;
    if set.factors.len() != expected {
        return CheckReport::new(
            name,
            false,
            format!("expected {expected} factors, found {}", set.factors.len()),
        );
    }
    for (alpha, p) in &set.factors {
        if !absolute_irreducibility(p).is_absolutely_irreducible() {
            return CheckReport::new(
                name,
                false,
                format!("factor at alpha = {alpha} is not absolutely irreducible"),
            );
        }
    }
    CheckReport::new(
        name,
        true,
        format!(
            "phi_{} = product of {} absolutely irreducible factors of degree {} over {}",
            set.d,
            expected,
            (1u32 << k) + 1,
            set.field
        ),
    )
}

/// (b) the squaring law phi_{2j} = phi_j^2 * e3 for 0 <= j <= 32; the
/// published k = 3 instance is j = 15, i.e. phi_30 = phi_15^2 * e3.
fn check_square_law() -> CheckReport {
    for j in 0..=32 {
        if !double_identity_check(j) {
            return CheckReport::new("square-law", false, format!("fails at j = {j}"));
        }
    }
    CheckReport::new(
        "square-law",
        true,
        "phi_{2j} = phi_j^2 * (x+y)(y+z)(z+x) for all j <= 32, including phi_30 = phi_15^2 * e3"
            .into(),
    )
}

/// (c) the boundary inequality: (1+x+x^3)^9 + (1+x^2+x^3)^9 differs from
/// phi_30(x, 0, 1), which is what rules out the would-be factor split.
fn check_boundary_inequality() -> CheckReport {
    let spec = gf2();
    let c1 = UniPoly::from_bits(spec, &[1, 1, 0, 1]); // 1 + x + x^3
    let c2 = UniPoly::from_bits(spec, &[1, 0, 1, 1]); // 1 + x^2 + x^3
    let lhs = c1.pow(9).add(&c2.pow(9));
    let rhs = phi_mono(30).specialize_x01();
    let differs = lhs != rhs;
    CheckReport::new(
        "boundary-inequality",
        differs,
        if differs {
            let sym_diff = lhs.add(&rhs);
            format!(
                "(1+x+x^3)^9 + (1+x^2+x^3)^9 differs from phi_30(x,0,1) in {} coefficients",
                sym_diff.support().count()
            )
        } else {
            "the two degree-27 polynomials coincide, contradicting the published inequality"
                .into()
        },
    )
}

/// (d) high budget: whether the two GF(4)-factors of phi_13, embedded into
/// GF(16), divide phi_241.
fn check_counterexample_divisibility() -> CheckReport {
    let name = "counterexample-divisibility";
    let set = match kasami_phi_factors(2, Budget::Default) {
        Ok(s) => s,
        Err(e) => return CheckReport::new(name, false, format!("k = 2 structure failed: {e}")),
    };
    let gf16 = FieldSpec::with_default_modulus(4).unwrap();
    let phi241 = phi_mono_in(241, gf16);
    let mut divides = Vec::new();
    for (alpha, p) in &set.factors {
        let pe = p.embed_into(gf16).expect("GF(4) embeds into GF(16)");
        divides.push((*alpha, tri_divides(&pe, &phi241)));
    }
    let all = divides.iter().all(|(_, d)| *d);
    let detail = divides
        .iter()
        .map(|(a, d)| {
            format!(
                "p_alpha for alpha = {a} {} phi_241 over GF(16)",
                if *d { "divides" } else { "does not divide" }
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    CheckReport::new(name, all, detail)
}

/// (e) high budget: irreducibility over GF(8) of the surface polynomial of
/// f = x^57 + a*x^30 + a^2*x^3, decided through its homogeneous-part
/// structure rather than general trivariate factorization.
///
/// Any proper factorization P*Q over GF(8) forces, degree slice by degree
/// slice, either a homogeneous factor (hence some p_alpha dividing phi) or
/// the shape (P_27 + c)(Q_27 + c') with P_27*Q_27 = phi_57 a complementary
/// split of the six p_alpha and the cross term matching a*phi_30. Both are
/// finite checks.
fn check_boundary_irreducible_gf8() -> CheckReport {
    let name = "boundary-irreducible-gf8";
    let gf8 = FieldSpec::with_default_modulus(3).unwrap();
    let a = gf8.generator();
    let mut f = UniPoly::monomial(gf8.one(), 57);
    f = f.add(&UniPoly::monomial(a, 30));
    f = f.add(&UniPoly::monomial(a * a, 3));
    let phi = phi_of(&f).phi().clone();

    // structural sanity on the homogeneous slices
    let parts = phi.homogeneous_parts();
    let keys: Vec<u32> = parts.parts.keys().copied().collect();
    if keys != vec![0, 27, 54] {
        return CheckReport::new(name, false, format!("unexpected degree slices {keys:?}"));
    }
    let phi30 = phi_mono_in(30, gf8);
    if parts.parts[&27] != phi30.scale(a)
        || parts.parts[&54] != phi_mono_in(57, gf8)
        || parts.parts[&0] != TriPoly::constant(a * a)
    {
        return CheckReport::new(name, false, "degree slices do not match the construction".into());
    }

    let set = match kasami_phi_factors(3, Budget::Default) {
        Ok(s) => s,
        Err(e) => return CheckReport::new(name, false, format!("k = 3 structure failed: {e}")),
    };

    // a homogeneous factor of phi would be divisible by some p_alpha
    for (alpha, p) in &set.factors {
        if tri_divides(p, &phi) {
            return CheckReport::new(
                name,
                false,
                format!("p_alpha for alpha = {alpha} divides phi: phi is reducible"),
            );
        }
    }

    // the split shape (P_27 + u')(Q_27 + v'): for each complementary 3-subset
    // of the six alphas, no scalars u, v with u*v = a^2 satisfy
    // u*Q_27 + v*P_27 = a*phi_30
    let alphas: Vec<_> = set.factors.keys().copied().collect();
    let target = phi30.scale(a);
    let mut splits_checked = 0;
    for i in 1..alphas.len() {
        for j in i + 1..alphas.len() {
            let s = [alphas[0], alphas[i], alphas[j]];
            let (mut p27, mut q27) = (TriPoly::one(gf8), TriPoly::one(gf8));
            for &al in &alphas {
                if s.contains(&al) {
                    p27 = p27.mul(&set.factors[&al]);
                } else {
                    q27 = q27.mul(&set.factors[&al]);
                }
            }
            splits_checked += 1;
            for u_bits in 1..gf8.order() {
                let u = gf8.element_unchecked(u_bits);
                let v = (a * a) * u.inv().unwrap();
                if q27.scale(u).add(&p27.scale(v)) == target {
                    return CheckReport::new(
                        name,
                        false,
                        format!("split found: S = {s:?}, u = {u}, v = {v}"),
                    );
                }
            }
        }
    }
    CheckReport::new(
        name,
        true,
        format!(
            "no p_alpha divides phi and none of the {splits_checked} complementary splits \
             admits matching constants: phi is irreducible over GF(8)"
        ),
    )
}
