use cp1graft::moebius::MoebiusMap;
use cp1graft::surface::{
    fuchsian_from_fn, jorgensen_witness, limit_set_sample, FNCoordinates, FuchsianHolonomy,
    GroupWord, Letter,
};
use proptest::prelude::*;

fn fn_strategy() -> impl Strategy<Value = (FNCoordinates, FuchsianHolonomy)> {
    (
        [0.5f64..3.0, 0.5..3.0, 0.5..3.0],
        [-1.5f64..1.5, -1.5..1.5, -1.5..1.5],
    )
        .prop_map(|(l, t)| {
            let fnc = FNCoordinates::new(l, t).unwrap();
            let rho = fuchsian_from_fn(&fnc).unwrap();
            (fnc, rho)
        })
}

fn word_strategy() -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((0usize..4, any::<bool>()), 1..=6)
        .prop_map(|ls| GroupWord::from_letters(ls.into_iter().map(|(g, inv)| Letter::new(g, inv))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn cuff_lengths_are_recovered((fnc, rho) in fn_strategy()) {
        for (w, l) in FNCoordinates::cuff_words().iter().zip(fnc.lengths) {
            let tr = rho.eval(w).trace().norm();
            let recovered = 2.0 * (tr / 2.0).acosh();
            prop_assert!((recovered - l).abs() < 1e-6, "{w}: {recovered} vs {l}");
        }
        prop_assert!(rho.holonomy.relation_residual() < 1e-8);
    }

    #[test]
    fn jorgensen_holds_for_generator_pairs((_, rho) in fn_strategy()) {
        let g = &rho.holonomy.generators;
        // distinct generators of a surface group span a free non-abelian subgroup
        for i in 0..4 {
            for j in (0..4).filter(|&j| j != i) {
                let w = jorgensen_witness(&g[i], &g[j]);
                prop_assert!(w >= 1.0 - 1e-8, "({i}, {j}): {w}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn words_evaluate_as_products(w in word_strategy()) {
        let rho = fuchsian_from_fn(&FNCoordinates::new([1.3, 1.5, 1.7], [0.2, -0.1, 0.3]).unwrap()).unwrap();
        let h = &rho.holonomy;
        let product = w.letters().iter().fold(MoebiusMap::IDENTITY, |acc, l| {
            let g = h.generators[l.generator()];
            acc * if l.is_inverse() { g.inverse() } else { g }
        });
        prop_assert!(h.eval(&w).projective_distance(&product) < 1e-8 * (1.0 + product.a.norm()));
    }
}

#[test]
fn deeper_limit_samples_contain_shallower_ones() {
    let rho =
        fuchsian_from_fn(&FNCoordinates::new([1.1, 1.9, 1.4], [0.5, 0.0, -0.4]).unwrap()).unwrap();
    let (a, b) = (
        limit_set_sample(&rho.holonomy, 3),
        limit_set_sample(&rho.holonomy, 4),
    );
    assert!(a.len() < b.len());
    for p in &a {
        assert!(b.iter().any(|q| q.chordal_distance(*p) < 1e-7));
        assert!(p.to_complex().is_none_or(|z| z.im.abs() < 1e-8));
    }
}
