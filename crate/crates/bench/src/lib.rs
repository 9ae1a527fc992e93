//! Fixed instances shared by the benchmarks in `benches/`.

use ktree_core::families::{make_k_caterpillar, make_k_path, make_k_star};
use ktree_core::KTreeInstance;

/// Named instances small enough for brute-force enumeration.
pub fn enumerable() -> Vec<(String, KTreeInstance)> {
    vec![
        ("star_k2_n16".into(), make_k_star(2, 16).unwrap()),
        ("path_k2_n16".into(), make_k_path(2, 16).unwrap()),
        (
            "caterpillar_k2_s7".into(),
            make_k_caterpillar(2, 7).unwrap(),
        ),
        ("path_k3_n17".into(), make_k_path(3, 17).unwrap()),
    ]
}

/// Larger instances for the recursion only.
pub fn large() -> Vec<(String, KTreeInstance)> {
    vec![
        ("path_k3_n400".into(), make_k_path(3, 400).unwrap()),
        (
            "caterpillar_k2_s200".into(),
            make_k_caterpillar(2, 200).unwrap(),
        ),
        ("star_k4_n400".into(), make_k_star(4, 400).unwrap()),
    ]
}
