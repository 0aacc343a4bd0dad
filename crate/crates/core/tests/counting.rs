use std::collections::BTreeSet;

use algnum::counting::{enumerate_count, merge, partitioned_enumerate, Shard};
use algnum::regions::ComplexRegion;
use num_complex::Complex64;
use num_integer::Integer;
use proptest::prelude::*;

/// Non-real roots of primitive quadratics with height ≤ q, by the quadratic
/// formula; each algebraic number once.
fn quadratic_roots(q: i64) -> Vec<Complex64> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in 1..=q {
        for b in -q..=q {
            for c in -q..=q {
                let disc = b * b - 4 * a * c;
                if disc >= 0 || a.gcd(&b).gcd(&c) != 1 {
                    continue;
                }
                // (a,b,c) primitive with a > 0 is the unique representative
                assert!(seen.insert((a, b, c)));
                let re = -(b as f64) / (2 * a) as f64;
                let im = ((-disc) as f64).sqrt() / (2 * a) as f64;
                out.push(Complex64::new(re, im));
                out.push(Complex64::new(re, -im));
            }
        }
    }
    out
}

fn region(s: &str) -> ComplexRegion {
    s.parse().unwrap()
}

#[test]
fn quadratic_counts_match_formula_oracle() {
    for q in 1..=6 {
        let roots = quadratic_roots(q);
        for dsl in ["disk:0.13,0.71,0.37", "rect:-0.83,0.41,0.27,1.33", "disk:-0.4,-0.6,0.55;rect:0.3,0.9,0.2,0.45"] {
            let r = region(dsl);
            let oracle = roots.iter().filter(|z| r.contains(**z)).count() as u64;
            let got = enumerate_count(2, q as u64, &r).unwrap();
            assert_eq!(got.psi, oracle, "Q={q} {dsl}");
            assert_eq!(got.ambiguous, 0);
            assert_eq!(got.gamma[&1], oracle, "a quadratic has at most one root in a half-plane region");
        }
    }
}

#[test]
fn shards_merge_in_any_order() {
    let r = region("disk:0.2,0.9,0.45");
    let whole = enumerate_count(3, 5, &r).unwrap();
    let mut parts: Vec<_> = (0..4).map(|i| partitioned_enumerate(3, 5, &r, Shard::new(i, 4).unwrap()).unwrap()).collect();
    parts.reverse();
    let merged = merge(&parts).unwrap();
    assert_eq!(merged.psi, whole.psi);
    assert_eq!(merged.gamma, whole.gamma);
    assert_eq!(merged.reducible, whole.reducible);
    assert!(merged.is_complete());
    assert!(merge(&parts[..2]).map(|m| !m.is_complete()).unwrap());
    let dup = vec![parts[0].clone(), parts[0].clone()];
    assert!(merge(&dup).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn counts_respect_region_symmetries(
        cx in -0.9f64..0.9, cy in 0.15f64..1.4, r in 0.05f64..0.6, n in 2usize..=3,
    ) {
        let cy = cy.max(r + 0.05);
        let disk = ComplexRegion::disk(Complex64::new(cx, cy), r).unwrap();
        let q = if n == 2 { 6 } else { 3 };
        let base = enumerate_count(n, q, &disk).unwrap();
        prop_assume!(base.ambiguous == 0);
        for other in [disk.conjugate(), disk.negate(), disk.invert()] {
            let c = enumerate_count(n, q, &other).unwrap();
            if c.ambiguous == 0 {
                prop_assert_eq!(c.psi, base.psi, "{} vs {}", disk, other);
            }
        }
    }

    #[test]
    fn count_is_monotone_in_region_and_height(cx in -0.5f64..0.5, cy in 0.5f64..1.2, r in 0.1f64..0.4) {
        let small = ComplexRegion::disk(Complex64::new(cx, cy), r).unwrap();
        let large = ComplexRegion::disk(Complex64::new(cx, cy), r + 0.1).unwrap();
        let a = enumerate_count(2, 5, &small).unwrap();
        let b = enumerate_count(2, 5, &large).unwrap();
        let c = enumerate_count(2, 7, &small).unwrap();
        prop_assert!(a.psi <= b.psi + b.ambiguous);
        prop_assert!(a.psi <= c.psi + c.ambiguous);
    }
}
