//! Randomized invariants. Random objects come from the seeded samplers, so
//! proptest drives the seeds and shrinking reports a reproducible seed.

use std::collections::BTreeMap;

use proptest::prelude::*;

use graded_hecke::bigraded::{Bidegree, Bigraded};
use graded_hecke::complexes::{homotopy_equal, rouquier, BimoduleComplex};
use graded_hecke::coxeter::CoxeterSystem;
use graded_hecke::hecke::{braid_element, jones_ocneanu_trace, HeckeElement};
use graded_hecke::homology::{euler_characteristic, triply_graded};
use graded_hecke::laurent::LaurentPoly;
use graded_hecke::poly::Ring;
use graded_hecke::sampling::{self, Shape};

fn bigraded(seed: u64) -> Bigraded {
    sampling::random_bigraded(&mut sampling::rng(seed), Shape::default())
}

fn hecke_element(sys: &std::sync::Arc<CoxeterSystem>, seed: u64) -> HeckeElement {
    let mut rng = sampling::rng(seed);
    let word = sampling::random_braid_word(&mut rng, sys.rank(), 4);
    let a = braid_element(sys, &word);
    let b = braid_element(sys, &sampling::random_braid_word(&mut rng, sys.rank(), 3));
    a.add(&b.scale(&LaurentPoly::monomial(2, 1))).unwrap()
}

fn trimmed(mut t: Vec<LaurentPoly>) -> Vec<LaurentPoly> {
    while t.last().is_some_and(LaurentPoly::is_zero) {
        t.pop();
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grading_shifts_compose(seed in any::<u64>(), a in -3i32..=3, b in -3i32..=3) {
        let v = bigraded(seed);
        prop_assert_eq!(v.shift_gr(a).shift_gr(b), v.shift_gr(a + b));
        prop_assert_eq!(v.shift_coh(a).shift_coh(b), v.shift_coh(a + b));
        prop_assert_eq!(v.shear_fwd().shear_bwd(), v.clone());
    }

    #[test]
    fn tensor_dimensions_are_day_convolution(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (v, w) = (bigraded(s1), bigraded(s2));
        let t = v.tensor(&w);
        let mut want: BTreeMap<Bidegree, usize> = BTreeMap::new();
        for p in v.support() {
            for q in w.support() {
                *want.entry(p.plus(q)).or_insert(0) += v.dim(p) * w.dim(q);
            }
        }
        prop_assert_eq!(t.dims(), want);
        prop_assert_eq!(Bigraded::unit().tensor(&v), v.clone());
    }

    #[test]
    fn kunneth_for_cohomology(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (v, w) = (bigraded(s1), bigraded(s2));
        let mut want: BTreeMap<Bidegree, usize> = BTreeMap::new();
        for (p, a) in v.cohomology() {
            for (q, b) in w.cohomology() {
                *want.entry(p.plus(q)).or_insert(0) += a * b;
            }
        }
        prop_assert_eq!(v.tensor(&w).cohomology(), want);
    }

    #[test]
    fn truncations_partition_the_object(seed in any::<u64>(), n in -4i32..=4) {
        let v = bigraded(seed);
        let (low, high) = v.weight_truncate(n);
        prop_assert_eq!(low.total_dim() + high.total_dim(), v.total_dim());
        prop_assert!(low.in_weight_le(n) && high.in_weight_ge(n + 1));
        let (below, above) = v.t_truncate(n);
        prop_assert!(below.cohomology().keys().all(|bd| bd.c <= n));
        prop_assert!(above.cohomology().keys().all(|bd| bd.c > n));
    }

    #[test]
    fn euler_characteristic_ignores_differentials(seed in any::<u64>()) {
        let v = bigraded(seed);
        prop_assert_eq!(v.euler_by_grade(), v.minimal_model().euler_by_grade());
    }

    #[test]
    fn trace_is_a_trace(s1 in any::<u64>(), s2 in any::<u64>()) {
        let sys = CoxeterSystem::named("A2").unwrap();
        let (x, y) = (hecke_element(&sys, s1), hecke_element(&sys, s2));
        let xy = jones_ocneanu_trace(&x.mul(&y).unwrap(), 3).unwrap();
        let yx = jones_ocneanu_trace(&y.mul(&x).unwrap(), 3).unwrap();
        prop_assert_eq!(trimmed(xy), trimmed(yx));
    }

    #[test]
    fn hecke_multiplication_is_associative(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let sys = CoxeterSystem::named("B2").unwrap();
        let (x, y, z) = (hecke_element(&sys, s1), hecke_element(&sys, s2), hecke_element(&sys, s3));
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().bar(), x.bar().mul(&y.bar()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn rouquier_complexes_are_invertible(seed in any::<u64>()) {
        let sys = CoxeterSystem::named("A2").unwrap();
        let word = sampling::random_braid_word(&mut sampling::rng(seed), 2, 4);
        let inverse: Vec<(usize, bool)> = word.iter().rev().map(|&(s, inv)| (s, !inv)).collect();
        let both: Vec<(usize, bool)> = word.iter().chain(&inverse).copied().collect();
        let c = rouquier(&sys, &both).unwrap();
        prop_assert!(homotopy_equal(&c, &BimoduleComplex::unit(&Ring::of(&sys)), seed).unwrap());
    }

    #[test]
    fn euler_characteristic_is_multiplicative_on_split_braids(seed in any::<u64>()) {
        let word = sampling::random_braid_word(&mut sampling::rng(seed), 1, 3);
        let moved: Vec<(usize, bool)> = word.iter().map(|&(_, inv)| (1, inv)).collect();
        let e = |n, b: &[(usize, bool)]| euler_characteristic(&triply_graded(n, b).unwrap());
        let (unknot, beta) = (e(1, &[]), e(2, &word));
        for split in [e(3, &word), e(3, &moved)] {
            prop_assert_eq!(split.denominator_power, 3);
            prop_assert_eq!(&split.numerator, &(&beta.numerator * &unknot.numerator));
        }
    }
}

#[test]
fn kl_basis_is_bar_invariant() {
    for name in ["A1", "A2", "B2", "I2(4)", "A3"] {
        let sys = CoxeterSystem::named(name).unwrap();
        for w in sys.enumerate().into_iter().take(24) {
            let b = HeckeElement::kl(&sys, w);
            assert_eq!(b.bar(), b, "{name} {}", sys.word_compact(w));
        }
    }
}
