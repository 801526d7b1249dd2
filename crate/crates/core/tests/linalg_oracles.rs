use lowrank_core::linalg::{
    block_inverse_bound_check, determinant, svd_values, svd_values_complex, top_right_singular_vector,
};
use lowrank_core::rng::sample_orthogonal;
use lowrank_core::testing::{complex_singular_values_oracle, singular_values_oracle};
use lowrank_core::{DenseMatrix, Error, Seed};
use proptest::prelude::*;

fn matrix_strategy(max: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(-10.0f64..10.0, r * c)
            .prop_map(move |data| DenseMatrix::from_row_major(r, c, data).unwrap())
    })
}

fn assert_close(got: &[f64], want: &[f64], rel: f64) {
    assert_eq!(got.len(), want.len());
    let scale = want.first().copied().unwrap_or(0.0).max(1e-300);
    for (g, w) in got.iter().zip(want) {
        // The Gram oracle is only accurate to eps·s_1 in absolute terms.
        assert!((g - w).abs() <= rel * w.max(1e-7 * scale), "{got:?} vs {want:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_matches_gram_eigen_oracle(m in matrix_strategy(12)) {
        let s = svd_values(&m).unwrap();
        assert_close(s.values(), &singular_values_oracle(&m), 1e-8);
    }

    #[test]
    fn svd_orthogonally_invariant(m in matrix_strategy(10), seed in any::<u64>()) {
        let q = sample_orthogonal(Seed::new(seed, 0), m.rows()).unwrap();
        let p = sample_orthogonal(Seed::new(seed, 1), m.cols()).unwrap();
        let qmp = q.matmul(&m).unwrap().matmul(&p).unwrap();
        let a = svd_values(&m).unwrap();
        let b = svd_values(&qmp).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).abs() <= 1e-9 * a.largest().max(1.0));
        }
    }
}

#[test]
fn svd_oracle_larger_sizes() {
    for (t, n) in [16usize, 33, 64].into_iter().enumerate() {
        let m = Seed::new(101, t as u64).rng().gaussian_matrix(n + 5, n);
        assert_close(svd_values(&m).unwrap().values(), &singular_values_oracle(&m), 1e-8);
    }
}

#[test]
fn complex_svd_matches_hermitian_oracle() {
    for t in 0..10 {
        let m = Seed::new(202, t).rng().complex_gaussian_matrix(5, 5);
        let s = svd_values_complex(&m).unwrap();
        assert_close(s.values(), &complex_singular_values_oracle(&m), 1e-8);
    }
}

#[test]
fn top_singular_vector_lower_bound() {
    let mut rng = Seed::new(303, 0).rng();
    let m = rng.gaussian_matrix(8, 6);
    let (s1, u) = top_right_singular_vector(&m).unwrap();
    for _ in 0..1000 {
        let v = rng.sphere_vec(6);
        let mv = m.matvec(&v).unwrap();
        let lhs = mv.iter().map(|x| x * x).sum::<f64>().sqrt();
        let utv: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        assert!(lhs >= utv.abs() * s1 - 1e-9, "{lhs} < {}", utv.abs() * s1);
    }
}

#[test]
fn block_bound_random_shapes() {
    for (n, p) in [(2, 1), (5, 2), (8, 4), (12, 9)] {
        let mut violations = 0;
        for t in 0..1000 {
            let m = Seed::new(404 + n as u64, t).rng().gaussian_matrix(n, n);
            let q = n - p;
            let a = m.submatrix(0, 0, p, p);
            let b = m.submatrix(0, p, p, q);
            let c = m.submatrix(p, 0, q, p);
            let d = m.submatrix(p, p, q, q);
            match block_inverse_bound_check(&a, &b, &c, &d) {
                Ok(bound) => violations += usize::from(!bound.holds()),
                Err(Error::SingularMatrix) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert_eq!(violations, 0, "n={n}, p={p}");
    }
}

#[test]
fn determinant_consistent_with_spectrum() {
    let m = Seed::new(505, 0).rng().gaussian_matrix(7, 7);
    let prod: f64 = svd_values(&m).unwrap().values().iter().product();
    assert!((determinant(&m).unwrap().abs() / prod - 1.0).abs() < 1e-10);
}
