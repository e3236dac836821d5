use csets_bench::{random_gens, random_set, regular_matrix, rng};
use csets_core::columns_condition;

#[test]
fn regular_matrices_are_regular() {
    let mut r = rng(11);
    for q in 2..8 {
        assert!(columns_condition(&regular_matrix(&mut r, 2, q)).unwrap().is_some());
    }
}

#[test]
fn inputs_are_reproducible() {
    assert_eq!(random_set(&mut rng(4), 300, 0.5), random_set(&mut rng(4), 300, 0.5));
    assert_eq!(random_gens(&mut rng(4), 5, 2, 9), random_gens(&mut rng(4), 5, 2, 9));
}
