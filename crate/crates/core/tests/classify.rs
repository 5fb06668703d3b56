mod common;

use common::*;
use crystal_euler::classify::Classification;
use crystal_euler::crystal::GammaElement;
use crystal_euler::linalg::int_vector;

fn classified_corpus() -> Vec<(String, Classification)> {
    let mut out: Vec<(String, Classification)> = corpus_groups()
        .into_iter()
        .map(|(name, g)| (name, classify(g)))
        .collect();
    for (name, n, gens) in random_corpus(3) {
        out.push((name, classify(group(n, &gens))));
    }
    out
}

#[test]
fn s3_classes_match_the_worked_census() {
    let g = s3_plane();
    let x = g.id_of(&m(&[&[0, 1], &[1, 0]])).unwrap();
    let y = g.id_of(&m(&[&[0, -1], &[1, -1]])).unwrap();
    let cl = classify(g.clone());
    assert_eq!(cl.classes().len(), 5);
    let locate = |gens: &[(usize, [i64; 2])]| {
        let elems: Vec<GammaElement> = gens
            .iter()
            .map(|(p, t)| GammaElement::new(*p, int_vector(t)))
            .collect();
        cl.locate_generated(&elems).unwrap()
    };
    let trivial = cl.locate_generated(&[]).unwrap();
    let cx = locate(&[(x, [0, 0])]);
    let cy = locate(&[(y, [0, 0])]);
    let cf = locate(&[(x, [0, 0]), (y, [0, 0])]);
    let cya = locate(&[(y, [1, 0])]);
    let ids = [trivial, cx, cy, cf, cya];
    let distinct: std::collections::BTreeSet<_> = ids.iter().collect();
    assert_eq!(distinct.len(), 5, "{{1, <x>, <y>, F, <ya>}} are pairwise non-conjugate");

    // <ya^2> is conjugate to <ya>
    assert_eq!(locate(&[(y, [2, 0])]), cya);
    assert_eq!(locate(&[(y, [-1, 0])]), cya);

    let c = |id: usize| cl.class(id);
    assert!(!cl.class_contained_in(c(cya), c(cf)));
    assert!(cl.class_contained_in(c(cy), c(cf)));
    assert!(cl.class_contained_in(c(cx), c(cf)));
    assert!(cl.class_contained_in(c(trivial), c(cya)));
    assert!(c(cf).in_omega && c(cya).in_omega);
    assert!(!c(cx).is_maximal && !c(cy).is_maximal);
    // <y> sits below F with the same (zero) fixed rank
    assert!(c(cy).flag_contractible);
    assert!(!c(cx).flag_contractible);
    assert!(!c(trivial).flag_contractible);
    assert_eq!(c(cx).fixed_rank, 1);
}

#[test]
fn kummer_classes() {
    let cl = classify(corpus_groups()[0].1.clone());
    assert_eq!(cl.classes().len(), 17);
    assert_eq!(cl.omega_classes().count(), 16);
    let trivial = cl.class(0);
    assert_eq!(trivial.order, 1);
    assert!(!trivial.flag_contractible);
    assert_eq!(trivial.covers.len(), 16);
    assert_eq!(cl.vcd(), 4);
}

#[test]
fn trivial_point_group() {
    let cl = classify(group(3, &[]));
    assert_eq!(cl.classes().len(), 1);
    assert_eq!(cl.omega_classes().count(), 0);
}

#[test]
fn containment_is_a_partial_order() {
    for (name, cl) in classified_corpus() {
        let classes = cl.classes();
        for a in classes {
            assert!(cl.class_contained_in(a, a));
            assert!(cl.class_contained_in(&classes[0], a), "{name}: trivial class is below all");
            for &b in &a.covers {
                let b = cl.class(b);
                assert!(b.order > a.order && b.order % a.order == 0);
                assert!(!cl.class_contained_in(b, a), "{name}: antisymmetry");
                // transitivity along the computed relation
                for &c in &b.covers {
                    assert!(a.covers.contains(&c), "{name}: transitivity");
                }
            }
            assert_eq!(a.is_maximal, a.covers.is_empty());
            assert_eq!(a.in_omega, a.is_maximal && a.fixed_rank == 0);
            assert_eq!(
                a.flag_contractible,
                a.covers.iter().any(|&j| cl.class(j).fixed_rank == a.fixed_rank)
            );
        }
    }
}

#[test]
fn unique_omega_class_above_rank_zero_classes() {
    for (name, cl) in classified_corpus() {
        for c in cl.classes() {
            if c.fixed_rank != 0 || c.in_omega {
                continue;
            }
            let above: Vec<_> = c.covers.iter().filter(|&&j| cl.class(j).in_omega).collect();
            assert_eq!(above.len(), 1, "{name}: class {} lies below {:?}", c.label, above);
        }
    }
}

#[test]
fn omega_classes_are_self_normalizing() {
    for (name, cl) in classified_corpus() {
        for c in cl.classes() {
            if c.in_omega {
                assert!(!cl.has_larger_normalizer(c), "{name}: {}", c.label);
            }
            if c.fixed_rank > 0 {
                assert!(cl.has_larger_normalizer(c));
            }
        }
    }
}

#[test]
fn classes_over_trivial_cohomology_are_unique() {
    for (name, cl) in classified_corpus() {
        for pc in 0..cl.lattice().classes().len() {
            let data = cl.point_data(pc);
            let over = cl.classes().iter().filter(|c| c.point_class == pc).count();
            assert_eq!(over, data.orbits.len(), "{name}");
            if data.h1.order() == 1 {
                assert_eq!(over, 1, "{name}");
            }
        }
    }
}

#[test]
fn located_representatives_come_back_to_their_class() {
    for (name, cl) in classified_corpus() {
        for c in cl.classes() {
            let elems = cl.representative_elements(c);
            assert_eq!(cl.locate_generated(&elems).unwrap(), c.class_id, "{name}");
            // conjugating by a translation does not change the class
            let t = GammaElement::translation_only(
                cl.group(),
                int_vector(&(1..=cl.group().rank() as i64).collect::<Vec<_>>()),
            );
            let t_inv = t.inverse(cl.group());
            let moved: Vec<GammaElement> = elems
                .iter()
                .map(|e| t.mul(e, cl.group()).mul(&t_inv, cl.group()))
                .collect();
            assert_eq!(cl.locate_generated(&moved).unwrap(), c.class_id, "{name}");
        }
    }
}

#[test]
fn parallel_classification_is_identical() {
    use crystal_euler::classify::{classify_finite_subgroups, ClassifyOptions};
    let g = a5_lattice();
    let a = classify(g.clone());
    let b = classify_finite_subgroups(
        g,
        &ClassifyOptions {
            parallel: true,
            ..ClassifyOptions::default()
        },
    )
    .unwrap();
    let key = |cl: &Classification| {
        cl.classes()
            .iter()
            .map(|c| (c.label.clone(), c.representative.clone(), c.covers.clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(key(&a), key(&b));
}
