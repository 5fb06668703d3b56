#![allow(dead_code)]

use std::collections::BTreeSet;

use crystal_euler::classify::{classify_finite_subgroups, Classification, ClassifyOptions};
use crystal_euler::cli::{parse_group_spec, CORPUS};
use crystal_euler::linalg::IntegerMatrix;
use crystal_euler::matgroup::{close_group, ElementSet, FiniteMatrixGroup, DEFAULT_ORDER_CAP};
use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn m(rows: &[&[i64]]) -> IntegerMatrix {
    IntegerMatrix::from_rows(rows)
}

pub fn diag(values: &[i64]) -> IntegerMatrix {
    let n = values.len();
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { values[i] } else { 0 }).collect())
        .collect();
    IntegerMatrix::from_rows(&rows)
}

pub fn group(rank: usize, gens: &[IntegerMatrix]) -> FiniteMatrixGroup {
    close_group(rank, gens, DEFAULT_ORDER_CAP).expect("finite group")
}

pub fn classify(g: FiniteMatrixGroup) -> Classification {
    classify_finite_subgroups(g, &ClassifyOptions::default()).expect("classification")
}

/// The five bundled examples as `(name, group)`.
pub fn corpus_groups() -> Vec<(String, FiniteMatrixGroup)> {
    CORPUS
        .iter()
        .map(|(name, text, _)| {
            let spec = parse_group_spec(text).unwrap();
            (name.to_string(), group(spec.rank, &spec.generators))
        })
        .collect()
}

pub fn s3_plane() -> FiniteMatrixGroup {
    group(2, &[m(&[&[0, 1], &[1, 0]]), m(&[&[0, -1], &[1, -1]])])
}

pub fn a5_lattice() -> FiniteMatrixGroup {
    let spec = parse_group_spec(CORPUS[4].1).unwrap();
    group(4, &spec.generators)
}

/// Standard finite subgroups of GL2(Z) and GL3(Z), by name and generators.
pub fn standard_point_groups() -> Vec<(&'static str, usize, Vec<IntegerMatrix>)> {
    let r4 = m(&[&[0, -1], &[1, 0]]);
    let r3 = m(&[&[0, -1], &[1, -1]]);
    let r6 = m(&[&[1, -1], &[1, 0]]);
    let swap2 = m(&[&[0, 1], &[1, 0]]);
    let cyc3 = m(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
    let swap3 = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
    let hex6 = m(&[&[1, -1, 0], &[1, 0, 0], &[0, 0, 1]]);
    let hex_swap = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
    vec![
        ("p2", 2, vec![diag(&[-1, -1])]),
        ("pm", 2, vec![diag(&[1, -1])]),
        ("cm", 2, vec![swap2.clone()]),
        ("pmm", 2, vec![diag(&[1, -1]), diag(&[-1, 1])]),
        ("cmm", 2, vec![swap2.clone(), diag(&[-1, -1])]),
        ("p4", 2, vec![r4.clone()]),
        ("p4m", 2, vec![r4, diag(&[1, -1])]),
        ("p3", 2, vec![r3.clone()]),
        ("p3m1", 2, vec![r3.clone(), swap2.clone()]),
        ("p31m", 2, vec![r3, m(&[&[0, -1], &[-1, 0]])]),
        ("p6", 2, vec![r6.clone()]),
        ("p6m", 2, vec![r6, swap2]),
        ("inversion3", 3, vec![diag(&[-1, -1, -1])]),
        ("mmm", 3, vec![diag(&[-1, 1, 1]), diag(&[1, -1, 1]), diag(&[1, 1, -1])]),
        ("222", 3, vec![diag(&[-1, -1, 1]), diag(&[1, -1, -1])]),
        ("3-perm", 3, vec![cyc3.clone()]),
        ("S3-perm", 3, vec![cyc3.clone(), swap3.clone()]),
        ("23", 3, vec![cyc3.clone(), diag(&[-1, -1, 1])]),
        ("m-3m", 3, vec![cyc3, swap3, diag(&[-1, 1, 1])]),
        ("6/mmm", 3, vec![hex6.clone(), hex_swap, diag(&[1, 1, -1])]),
        ("6-bar", 3, vec![hex6.clone(), diag(&[1, 1, -1])]),
        ("-3", 3, vec![hex6.mul(&hex6), diag(&[-1, -1, -1])]),
    ]
}

/// Random unimodular matrix with its inverse, as a product of elementary
/// operations.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> (IntegerMatrix, IntegerMatrix) {
    let mut p = IntegerMatrix::identity(n);
    let mut p_inv = IntegerMatrix::identity(n);
    if n < 2 {
        return (p, p_inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = *[-2, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
        let mut e = IntegerMatrix::identity(n);
        e.set(i, j, BigInt::from(c));
        let mut e_inv = IntegerMatrix::identity(n);
        e_inv.set(i, j, BigInt::from(-c));
        p = p.mul(&e);
        p_inv = e_inv.mul(&p_inv);
    }
    (p, p_inv)
}

pub fn conjugate_all(gens: &[IntegerMatrix], p: &IntegerMatrix, p_inv: &IntegerMatrix) -> Vec<IntegerMatrix> {
    gens.iter().map(|g| p.mul(g).mul(p_inv)).collect()
}

/// At least 20 groups in GL2(Z) and GL3(Z): random unimodular conjugates of
/// the standard point groups and of random subgroups of them.
pub fn random_corpus(seed: u64) -> Vec<(String, usize, Vec<IntegerMatrix>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (name, n, gens) in standard_point_groups() {
        let (p, p_inv) = random_unimodular(&mut rng, n, 6);
        out.push((format!("{name}^P"), n, conjugate_all(&gens, &p, &p_inv)));
        // a random subgroup generated by up to two random elements
        let g = group(n, &gens);
        let picks: Vec<IntegerMatrix> = (0..rng.gen_range(1..=2))
            .map(|_| g.element(rng.gen_range(0..g.order())).clone())
            .collect();
        let (p, p_inv) = random_unimodular(&mut rng, n, 6);
        out.push((format!("sub({name})^P"), n, conjugate_all(&picks, &p, &p_inv)));
    }
    out
}

/// Every subgroup, found by closing all sets of at most three elements under
/// multiplication. Complete for groups whose subgroups need at most three
/// generators.
pub fn brute_force_subgroups(g: &FiniteMatrixGroup) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    let close = |seed: &[usize]| -> Vec<usize> {
        let mut set: BTreeSet<usize> = seed.iter().copied().collect();
        set.insert(g.identity());
        loop {
            let current: Vec<usize> = set.iter().copied().collect();
            let before = set.len();
            for &a in &current {
                for &b in &current {
                    set.insert(g.mul(a, b));
                }
            }
            if set.len() == before {
                return set.into_iter().collect();
            }
        }
    };
    let mut found = BTreeSet::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                found.insert(close(&[a, b, c]));
            }
        }
    }
    found
}

pub fn ids(s: &ElementSet) -> Vec<usize> {
    s.ids()
}
