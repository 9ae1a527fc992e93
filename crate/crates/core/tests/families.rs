use ktree_core::exact::frac;
use ktree_core::families::{
    caterpillar_global_counts, generate_all_ktrees, make_k_broom, make_k_caterpillar, make_k_path,
    make_k_star, star_global_counts,
};
use ktree_core::oracle::{self, DEFAULT_BUDGET};
use ktree_core::recurse::{local_counts_recursive, path_type_local_mean_closed_form};
use ktree_core::{BigUint, KClique, Scope};

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

#[test]
fn star_local_at_base() {
    let t = make_k_star(2, 5).unwrap();
    let s = oracle::stats(&t, &Scope::AtClique(t.base_clique()), DEFAULT_BUDGET).unwrap();
    assert_eq!(s.count_containing, big(8));
    assert_eq!(s.mean, frac(7, 2));
    for n in 3..12 {
        let t = make_k_star(2, n).unwrap();
        let (count, _) = local_counts_recursive(&t, &t.base_clique()).unwrap();
        assert_eq!(count, BigUint::from(1u32) << (n - 2));
    }
}

#[test]
fn star_global_closed_form_against_oracle() {
    let t = make_k_star(2, 8).unwrap();
    let g = oracle::stats(&t, &Scope::Global, DEFAULT_BUDGET).unwrap();
    assert_eq!(
        (g.count_containing.clone(), g.order_sum_containing.clone()),
        (big(76), big(344))
    );
    assert_eq!(g.mean, frac(86, 19));
    for k in 1..=2 {
        for n in k..=10 {
            let t = make_k_star(k, n).unwrap();
            let g = oracle::stats(&t, &Scope::Global, DEFAULT_BUDGET).unwrap();
            let (cn, cr) = star_global_counts(k, n).unwrap();
            assert_eq!(
                (g.count_containing, g.order_sum_containing),
                (cn, cr),
                "k={k} n={n}"
            );
        }
    }
    // The printed numerator without the k^2 (n - k) term would give 4/3 here.
    let t = make_k_star(1, 3).unwrap();
    let g = oracle::stats(&t, &Scope::Global, DEFAULT_BUDGET).unwrap();
    assert_eq!(g.mean, frac(5, 3));
}

#[test]
fn caterpillar_sums_against_oracle() {
    let expected = [(4, 70, 333), (5, 143, 856), (6, 288, 2111)];
    for (s, n_count, r_sum) in expected {
        let t = make_k_caterpillar(2, s).unwrap();
        let g = oracle::stats(&t, &Scope::Global, DEFAULT_BUDGET).unwrap();
        assert_eq!(g.count_containing, big(n_count));
        assert_eq!(g.order_sum_containing, big(r_sum));
        assert_eq!(
            caterpillar_global_counts(2, s).unwrap(),
            (big(n_count), big(r_sum))
        );
    }
    for (k, s) in [(1, 3), (1, 6), (3, 5), (3, 7)] {
        let t = make_k_caterpillar(k, s).unwrap();
        let g = oracle::stats(&t, &Scope::Global, DEFAULT_BUDGET).unwrap();
        let (cn, cr) = caterpillar_global_counts(k, s).unwrap();
        assert_eq!(
            (g.count_containing, g.order_sum_containing),
            (cn, cr),
            "k={k} s={s}"
        );
    }
}

#[test]
fn every_family_member_is_a_generated_class() {
    let classes = generate_all_ktrees(2, 9).unwrap();
    let codes: Vec<_> = classes.iter().map(|t| t.canonical_code()).collect();
    for t in [
        make_k_star(2, 9).unwrap(),
        make_k_path(2, 9).unwrap(),
        make_k_broom(2, 6, 3).unwrap(),
        make_k_caterpillar(2, 4).unwrap(),
    ] {
        assert!(codes.contains(&t.canonical_code()));
    }
}

#[test]
fn path_closed_form_on_a_1_path() {
    // An end vertex of P_4 with the far side of two vertices.
    let t = make_k_path(1, 4).unwrap();
    let s = oracle::stats(&t, &Scope::AtClique(KClique::new(vec![0])), DEFAULT_BUDGET).unwrap();
    assert_eq!(
        s.mean,
        path_type_local_mean_closed_form(1, 4, 0, 2).unwrap()
    );
    assert_eq!(s.mean, frac(5, 2));
}
