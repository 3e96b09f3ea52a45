//! Property tests for the exact-arithmetic substrate: associativity,
//! involution laws, RREF determinism and transform correctness, rank
//! symmetry, Gram invertibility and the full-rank factorization.

use coreinv::{Field, Invertibility, Mat, Scalar};
use proptest::prelude::*;

fn scalar_strategy(field: Field) -> BoxedStrategy<Scalar> {
    match field {
        Field::Q => (-4i64..=4, 1i64..=3)
            .prop_map(|(n, d)| Scalar::from_ratio_i64(n, d, Field::Q))
            .boxed(),
        Field::Qi => ((-3i64..=3, 1i64..=2), (-3i64..=3, 1i64..=2))
            .prop_map(|(re, im)| Scalar::gaussian_i64(re, im))
            .boxed(),
    }
}

fn mat_strategy(field: Field, rows: usize, cols: usize) -> BoxedStrategy<Mat> {
    proptest::collection::vec(scalar_strategy(field), rows * cols)
        .prop_map(move |entries| Mat::new(rows, cols, field, entries).unwrap())
        .boxed()
}

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Q), Just(Field::Qi)]
}

/// Dims 0..=3 so empty matrices participate in every law.
fn dims() -> impl Strategy<Value = usize> {
    0usize..=3
}

fn chain3() -> impl Strategy<Value = (Mat, Mat, Mat)> {
    (field_strategy(), dims(), dims(), dims(), dims()).prop_flat_map(|(f, m, k, l, n)| {
        (mat_strategy(f, m, k), mat_strategy(f, k, l), mat_strategy(f, l, n))
    })
}

fn chain2() -> impl Strategy<Value = (Mat, Mat)> {
    (field_strategy(), dims(), dims(), dims())
        .prop_flat_map(|(f, m, k, n)| (mat_strategy(f, m, k), mat_strategy(f, k, n)))
}

fn single() -> impl Strategy<Value = Mat> {
    (field_strategy(), dims(), dims()).prop_flat_map(|(f, m, n)| mat_strategy(f, m, n))
}

fn square() -> impl Strategy<Value = Mat> {
    (field_strategy(), dims()).prop_flat_map(|(f, n)| mat_strategy(f, n, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn product_is_associative((a, b, c) in chain3()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn adjoint_is_an_antihomomorphism((a, b) in chain2()) {
        prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn rref_is_deterministic_and_transform_exact(a in single()) {
        let r1 = a.rref();
        let r2 = a.rref();
        prop_assert_eq!(&r1, &r2);
        prop_assert_eq!(&(&r1.t * &a), &r1.r);
        prop_assert_eq!(r1.rank, r1.pivots.len());
        prop_assert!(r1.pivots.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(matches!(r1.t.inverse().unwrap(), Invertibility::Invertible(_)));
    }

    #[test]
    fn rank_is_adjoint_invariant(a in single()) {
        prop_assert_eq!(a.rank(), a.adjoint().rank());
    }

    #[test]
    fn full_rank_factorization_roundtrip(a in single()) {
        let (f, g) = a.full_rank_factorization();
        prop_assert_eq!(&(&f * &g), &a);
        let r = a.rank();
        prop_assert_eq!(f.rank(), r);
        prop_assert_eq!(g.rank(), r);
        prop_assert_eq!((f.cols(), g.rows()), (r, r));
    }

    #[test]
    fn inversion_yields_identity_or_reverifiable_witness(a in square()) {
        match a.inverse().unwrap() {
            Invertibility::Invertible(inv) => {
                prop_assert!((&a * &inv).is_identity());
                prop_assert!((&inv * &a).is_identity());
            }
            Invertibility::Singular(w) => prop_assert!(w.verify()),
        }
    }
}

/// Gram matrices of full-row-rank matrices are invertible over both
/// fields; 200 random samples per the contract.
#[test]
fn gram_of_full_row_rank_is_invertible() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2024);
    let mut done = 0;
    while done < 200 {
        let field = if done % 2 == 0 { Field::Q } else { Field::Qi };
        let m = 1 + done % 3;
        let n = m + done % 3;
        let a = coreinv::random_dense(m, n, field, &mut rng);
        if a.rank() != m {
            continue;
        }
        done += 1;
        let gram = &a * &a.adjoint();
        assert!(
            matches!(gram.inverse().unwrap(), Invertibility::Invertible(_)),
            "gram of a full-row-rank {m}x{n} sample must be invertible"
        );
    }
}
