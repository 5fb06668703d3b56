use crystal_euler::linalg::{
    hermite_normal_form, hermite_with_transform, int_vector, kernel_lattice, smith_normal_form,
    solve_linear, AbelianInvariants, IntVector, IntegerMatrix, LatticeBasis,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Random matrices, half of them products of thinner factors so that rank
/// deficiency is common.
fn matrix_strategy() -> impl Strategy<Value = IntegerMatrix> {
    (1usize..=5, 1usize..=5, 1usize..=5, any::<bool>()).prop_flat_map(|(r, c, inner, factor)| {
        if factor {
            (
                proptest::collection::vec(-4i64..=4, r * inner),
                proptest::collection::vec(-4i64..=4, inner * c),
            )
                .prop_map(move |(a, b)| {
                    let a = from_flat(r, inner, &a);
                    let b = from_flat(inner, c, &b);
                    a.mul(&b)
                })
                .boxed()
        } else {
            proptest::collection::vec(-9i64..=9, r * c)
                .prop_map(move |e| from_flat(r, c, &e))
                .boxed()
        }
    })
}

fn from_flat(r: usize, c: usize, e: &[i64]) -> IntegerMatrix {
    IntegerMatrix::from_entries(r, c, e.iter().map(|&x| BigInt::from(x)).collect())
}

fn vector_strategy(len: usize) -> impl Strategy<Value = IntVector> {
    proptest::collection::vec(-12i64..=12, len).prop_map(|v| int_vector(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_form_identities(m in matrix_strategy()) {
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
        prop_assert!(snf.d.is_diagonal());
        prop_assert!(snf.u.is_unimodular());
        prop_assert!(snf.v.is_unimodular());
        prop_assert_eq!(snf.u.mul(&snf.u_inv), IntegerMatrix::identity(m.rows()));
        let diag = snf.diagonal();
        let rank = snf.rank();
        for (i, d) in diag.iter().enumerate() {
            prop_assert!(!d.is_negative());
            prop_assert_eq!(d.is_zero(), i >= rank, "zeros must trail");
            if i + 1 < rank {
                prop_assert!(diag[i + 1].is_multiple_of(d), "divisibility chain {:?}", diag);
            }
        }
    }

    #[test]
    fn hermite_form_identities(m in matrix_strategy()) {
        let (h, u, rank) = hermite_with_transform(&m);
        prop_assert_eq!(u.mul(&m), h.clone());
        prop_assert!(u.is_unimodular());
        prop_assert_eq!(rank, smith_normal_form(&m).rank());
        let mut last_pivot: Option<usize> = None;
        for r in 0..h.rows() {
            let row = h.row(r);
            match row.iter().position(|x| !x.is_zero()) {
                None => prop_assert!(r >= rank),
                Some(p) => {
                    prop_assert!(r < rank);
                    prop_assert!(last_pivot.map_or(true, |lp| p > lp), "pivots move right");
                    prop_assert!(row[p].is_positive());
                    for above in 0..r {
                        let x = h.get(above, p);
                        prop_assert!(!x.is_negative() && x < &row[p], "reduced above pivot");
                    }
                    last_pivot = Some(p);
                }
            }
        }
        // the form is canonical: it only depends on the row lattice
        let shuffled = IntegerMatrix::vstack(m.cols(), &[m.clone(), m.clone()]);
        prop_assert_eq!(hermite_normal_form(&shuffled), hermite_normal_form(&m));
    }

    #[test]
    fn solver_matches_smith_criterion(m in matrix_strategy(), seed in vector_strategy(5)) {
        let b: IntVector = seed.into_iter().take(m.rows()).chain(std::iter::repeat(BigInt::zero())).take(m.rows()).collect();
        let snf = smith_normal_form(&m);
        // m x = b is solvable iff y = u b has y_i divisible by d_i
        let y = snf.u.mul_vec(&b);
        let diag = snf.diagonal();
        let solvable = y.iter().enumerate().all(|(i, yi)| match diag.get(i) {
            Some(d) if !d.is_zero() => yi.is_multiple_of(d),
            _ => yi.is_zero(),
        });
        match solve_linear(&m, &b) {
            Some(x) => {
                prop_assert!(solvable);
                prop_assert_eq!(m.mul_vec(&x), b);
            }
            None => prop_assert!(!solvable),
        }
    }

    #[test]
    fn solver_finds_planted_solutions(m in matrix_strategy(), x in vector_strategy(5)) {
        let x: IntVector = x.into_iter().take(m.cols()).collect();
        let b = m.mul_vec(&x);
        let found = solve_linear(&m, &b).expect("planted solution exists");
        prop_assert_eq!(m.mul_vec(&found), b);
    }

    #[test]
    fn kernel_is_the_saturated_solution_space(m in matrix_strategy(), v in vector_strategy(5)) {
        let k = kernel_lattice(&m);
        prop_assert_eq!(k.rank() + smith_normal_form(&m).rank(), m.cols());
        for row in k.basis().row_vectors() {
            prop_assert!(m.mul_vec(&row).iter().all(Zero::is_zero));
        }
        // saturated: the basis extends to a basis of Z^n
        if k.rank() > 0 {
            let d = smith_normal_form(k.basis()).diagonal();
            prop_assert!(d.iter().all(One::is_one));
        }
        // repeating the equations leaves the kernel unchanged
        let again = kernel_lattice(&IntegerMatrix::vstack(m.cols(), &[m.clone(), m.clone()]));
        prop_assert_eq!(&again, &k);
        // any integer null vector lies in it
        let v: IntVector = v.into_iter().take(m.cols()).collect();
        let mut null = vec![BigInt::zero(); m.cols()];
        for (i, row) in k.basis().row_vectors().iter().enumerate() {
            let c = &v[i % v.len()];
            for (n, x) in null.iter_mut().zip(row) {
                *n += x * c;
            }
        }
        prop_assert!(k.contains(&null));
    }

    #[test]
    fn lattice_reduction_is_canonical(m in matrix_strategy(), v in vector_strategy(5), w in vector_strategy(5)) {
        let lat = LatticeBasis::from_generators(&m);
        let v: IntVector = v.into_iter().take(m.cols()).collect();
        let r = lat.reduce(&v);
        let diff: IntVector = v.iter().zip(&r).map(|(a, b)| a - b).collect();
        prop_assert!(lat.contains(&diff));
        // adding a lattice vector does not change the reduction
        let coeffs: IntVector = w.into_iter().take(m.rows()).chain(std::iter::repeat(BigInt::one())).take(m.rows()).collect();
        let shift = m.transpose().mul_vec(&coeffs);
        let shifted: IntVector = v.iter().zip(&shift).map(|(a, b)| a + b).collect();
        prop_assert_eq!(lat.reduce(&shifted), r);
    }

    #[test]
    fn determinant_matches_smith_product(m in matrix_strategy()) {
        if m.is_square() {
            let det = m.determinant();
            let prod: BigInt = smith_normal_form(&m).diagonal().iter().product();
            prop_assert_eq!(det.abs(), prod);
        }
    }
}

#[test]
fn cokernel_invariants() {
    let m = IntegerMatrix::from_rows(&[[2, 0, 0], [0, 4, 0], [0, 0, 0]]);
    let inv = AbelianInvariants::of_cokernel(&m);
    assert_eq!(inv.torsion_factors, vec![BigInt::from(2), BigInt::from(4)]);
    assert_eq!(inv.free_rank, 1);
    assert_eq!(inv.to_string(), "Z/2 + Z/4 + Z^1");
    assert!(!inv.is_finite());
    // Z/6 presented by [2, 3] collapses to one factor
    let inv = AbelianInvariants::of_cokernel(&IntegerMatrix::from_rows(&[[2, 0], [0, 3]]));
    assert_eq!(inv.torsion_factors, vec![BigInt::from(6)]);
    assert_eq!(inv.torsion_order(), BigInt::from(6));
    assert_eq!(AbelianInvariants::trivial().to_string(), "0");
}

#[test]
fn solver_rejects_non_integral_systems() {
    let m = IntegerMatrix::from_rows(&[[2, 4]]);
    assert!(solve_linear(&m, &int_vector(&[3])).is_none());
    assert_eq!(m.mul_vec(&solve_linear(&m, &int_vector(&[6])).unwrap()), int_vector(&[6]));
    let zero = IntegerMatrix::zeros(2, 3);
    assert_eq!(solve_linear(&zero, &int_vector(&[0, 0])), Some(int_vector(&[0, 0, 0])));
    assert!(solve_linear(&zero, &int_vector(&[0, 1])).is_none());
}

#[test]
fn large_entries_stay_exact() {
    // entries well beyond i64 after a few multiplications
    let a = IntegerMatrix::from_rows(&[[1_000_000_007, 3], [2, 1]]);
    let mut p = IntegerMatrix::identity(2);
    for _ in 0..6 {
        p = p.mul(&a);
    }
    let snf = smith_normal_form(&p);
    assert_eq!(snf.u.mul(&p).mul(&snf.v), snf.d);
    assert_eq!(p.determinant(), a.determinant().pow(6));
}
