use std::collections::BTreeSet;

use h2xr_core::frobenius::{brute_force_congruences, dedupe_equivariant, enumerate_multiply, enumerate_simply};
use h2xr_core::hyperbolic_plane::is_hyperbolic;
use h2xr_core::reference::worked_classes;
use h2xr_core::{KernelSite, TranslationClass};
use num_integer::Integer;
use num_rational::Rational64;

fn signatures() -> impl Iterator<Item = (u32, u32)> {
    (2..=40u32).flat_map(|p1| (2..=40u32).map(move |p2| (p1, p2))).filter(|&(p1, p2)| is_hyperbolic(p1, p2))
}

#[test]
fn closed_form_equals_brute_force_up_to_40() {
    let mut checked = 0;
    for (p1, p2) in signatures() {
        let closed = enumerate_simply(p1, p2).unwrap();
        let brute = brute_force_congruences(p1, p2).unwrap();
        assert_eq!(closed, brute, "(2,{p1},{p2})");
        checked += 1;
    }
    assert!(checked > 1400);
}

#[test]
fn worked_signature_list() {
    let (p1, p2, list) = worked_classes();
    let expect: BTreeSet<TranslationClass> = list.into_iter().collect();
    assert_eq!(enumerate_simply(p1, p2).unwrap(), expect);
    assert_eq!(dedupe_equivariant(&expect).len(), 4);
}

#[test]
fn structural_laws() {
    let half = Rational64::new(1, 2);
    let zero = Rational64::from(0);
    for (p1, p2) in signatures() {
        let classes = enumerate_simply(p1, p2).unwrap();
        assert!(classes.contains(&TranslationClass::zero()));
        for c in &classes {
            let [r0, r1, r2] = c.parts();
            // The half-turn's translation is a half period at most.
            assert!(r0 == zero || r0 == half, "(2,{p1},{p2}) {c}");
            assert!(classes.contains(&c.negated()));
            // The relation g0 g1 = g2 pins r2.
            let s = r0 + r1 - r2;
            assert!(s.is_integer(), "(2,{p1},{p2}) {c}");
            // g1^p1 and g2^p2 must be lattice translations.
            assert!((r1 * Rational64::from(p1 as i64)).is_integer());
            assert!((r2 * Rational64::from(p2 as i64)).is_integer());
        }
        let odd_coprime = p1 % 2 == 1 && p2 % 2 == 1 && p1.gcd(&p2) == 1;
        if odd_coprime {
            assert_eq!(classes.len(), 1, "(2,{p1},{p2})");
        }
    }
}

#[test]
fn vertex_classes_fix_the_vertex() {
    for (p1, p2) in signatures().filter(|&(p1, p2)| p1 <= 24 && p2 <= 12) {
        let simply = enumerate_simply(p1, p2).unwrap();
        for site in KernelSite::VERTICES {
            let i = site.generator_index().unwrap();
            let at = enumerate_multiply(p1, p2, site).unwrap();
            assert!(at.is_subset(&simply));
            let expect: BTreeSet<_> = simply.iter().filter(|c| c.part(i) == 0.into()).copied().collect();
            assert_eq!(at, expect, "(2,{p1},{p2}) at {site}");
        }
    }
}
