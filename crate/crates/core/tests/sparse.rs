use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regge_shell::error::Error;
use regge_shell::sparse::{factor_solve, SparseSymMatrix, TARGET_RESIDUAL};

fn triplets(a: &DMatrix<f64>) -> Vec<(usize, usize, f64)> {
    let mut t = Vec::new();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if a[(i, j)] != 0.0 {
                t.push((i, j, a[(i, j)]));
            }
        }
    }
    t
}

#[test]
fn matches_dense_cholesky() {
    let mut r = ChaCha8Rng::seed_from_u64(11);
    let n = 50;
    // sparse-ish SPD: banded random part plus a diagonal shift
    let b = DMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) <= 3 { r.gen_range(-1.0..1.0) } else { 0.0 });
    let a = &b * b.transpose() + DMatrix::identity(n, n) * 0.1;
    let rhs: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();

    let sparse = SparseSymMatrix::from_triplets(n, triplets(&a)).unwrap();
    let info = factor_solve(&sparse, &rhs).unwrap();
    let dense = a.clone().cholesky().unwrap().solve(&nalgebra::DVector::from_vec(rhs.clone()));

    let diff = info.solution.iter().zip(dense.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(diff < 1e-9 * dense.amax(), "{diff:e}");
    assert!(info.relative_residual <= TARGET_RESIDUAL);
}

#[test]
fn indefinite_with_positive_diagonal() {
    let a = SparseSymMatrix::from_triplets(2, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 1.0)]).unwrap();
    assert!(matches!(factor_solve(&a, &[1.0, 0.0]), Err(Error::Indefinite(_))));
}

#[test]
fn badly_scaled_diagonal() {
    // entries spanning 20 orders of magnitude; equilibration keeps the solve accurate
    let n = 6;
    let s: Vec<f64> = (0..n).map(|i| 10f64.powi(4 * i as i32 - 10)).collect();
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, 2.0 * s[i] * s[i]));
        if i + 1 < n {
            t.push((i, i + 1, -0.5 * s[i] * s[i + 1]));
            t.push((i + 1, i, -0.5 * s[i] * s[i + 1]));
        }
    }
    let a = SparseSymMatrix::from_triplets(n, t).unwrap();
    let x: Vec<f64> = s.iter().map(|v| 1.0 / v).collect();
    let b = a.mul_vec(&x);
    let info = factor_solve(&a, &b).unwrap();
    for (got, want) in info.solution.iter().zip(&x) {
        assert!((got / want - 1.0).abs() < 1e-12);
    }
}
