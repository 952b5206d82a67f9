//! Fixtures shared by the benchmarks in `benches/`.

use serde_json::json;
use setvi_core::{Cone, SetMap};

/// `x ↦ {(x², (x−1)²)}` on 13 samples of `[-1, 2]`.
pub fn quadratic_map() -> SetMap {
    let domain: Vec<Vec<f64>> = (0..=12).map(|k| vec![-1.0 + 0.25 * k as f64]).collect();
    SetMap::from_generator("quadratic_vector", json!({ "targets": [0.0, 1.0] }), domain).expect("valid generator")
}

/// `n` points spread deterministically over `[-1, 1]^m`.
pub fn cloud(n: usize, m: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..m).map(|j| ((i * 7 + j * 13) % 41) as f64 / 20.0 - 1.0).collect())
        .collect()
}

pub fn skewed_cone() -> Cone {
    Cone::new(
        vec![vec![1.0, 0.25, 0.0], vec![0.0, 1.0, 0.125], vec![0.25, 0.0, 1.0]],
        vec![1.0, 1.0, 1.0],
    )
    .expect("valid cone")
}
