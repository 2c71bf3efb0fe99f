use bethe_core::detlib::{ik_det, mepno_det, TwistParameter};
use bethe_core::kernels::Coupling;
use bethe_core::oracles::{
    gaudin_sum, lemma2_sides, mepno, mepno_route_a, mepno_route_a_regrouped, null_scale,
};
use bethe_core::{rel_diff, Error, Route, C64};
use proptest::prelude::*;

fn gapped(m: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(-2.0f64..2.0, m)
        .prop_filter("gap", |xs| {
            xs.iter()
                .enumerate()
                .all(|(i, a)| xs[i + 1..].iter().all(|b| (a - b).abs() >= 0.05))
        })
        .prop_map(|xs| xs.into_iter().map(|x| C64::new(x, 0.0)).collect())
}

fn twist() -> impl Strategy<Value = TwistParameter> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| TwistParameter::new(C64::new(a, b)).unwrap())
}

/// Skips samples that land near a pole of some term.
macro_rules! or_skip {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(Error::SingularArgument { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        }
    };
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gaudin_equals_izergin_korepin(uv in gapped(8), m in 1usize..=4, cv in 0.5f64..2.0) {
        let c = Coupling::new(cv).unwrap();
        let (u, v) = (&uv[..m], &uv[4..4 + m]);
        let s = or_skip!(gaudin_sum(u, v, c));
        prop_assert!(rel_diff(s, ik_det(u, v, c).unwrap()) < 1e-8);
    }

    #[test]
    fn partition_lemma_sides_agree(gamma in gapped(6), ab in gapped(6), m1 in 0usize..=3, m2 in 0usize..=3, cv in 0.5f64..2.0) {
        let c = Coupling::new(cv).unwrap();
        let gamma = &gamma[..m1 + m2];
        let (alpha, beta) = (&ab[..m1], &ab[3..3 + m2]);
        let (lhs, rhs) = or_skip!(lemma2_sides(gamma, alpha, beta, c));
        prop_assert!(rel_diff(lhs, rhs) < 1e-8);
    }

    #[test]
    fn pre_determinant_routes_match_slavnov(uv in gapped(8), m in 1usize..=4, cv in 0.5f64..2.0, k in twist()) {
        let c = Coupling::new(cv).unwrap();
        let (u, v) = (&uv[..m], &uv[4..4 + m]);
        let d = mepno_det(u, v, c, k).unwrap().value;
        for route in [Route::A, Route::B, Route::C] {
            let x = or_skip!(mepno(route, u, v, c, k)).value;
            prop_assert!(rel_diff(x, d) < 1e-8, "route {} at M={}", route, m);
        }
    }

    #[test]
    fn regrouping_route_a_is_exact(uv in gapped(8), m in 1usize..=4, cv in 0.5f64..2.0, k in twist()) {
        let c = Coupling::new(cv).unwrap();
        let (u, v) = (&uv[..m], &uv[4..4 + m]);
        let a = or_skip!(mepno_route_a(u, v, c, k)).value;
        let r = or_skip!(mepno_route_a_regrouped(u, v, c, k)).value;
        prop_assert!(rel_diff(a, r) < 1e-9);
    }

    #[test]
    fn unit_twist_is_orthogonal(uv in gapped(8), m in 1usize..=4, cv in 0.5f64..2.0) {
        let c = Coupling::new(cv).unwrap();
        let (u, v) = (&uv[..m], &uv[4..4 + m]);
        let one = TwistParameter::new(C64::new(1.0, 0.0)).unwrap();
        let scale = null_scale(u, v, c).unwrap();
        for route in [Route::A, Route::B, Route::C, Route::D] {
            let x = or_skip!(mepno(route, u, v, c, one)).value;
            prop_assert!(x.norm() <= 1e-8 * scale, "route {}: {}", route, x);
        }
    }
}

#[test]
fn six_particle_routes_b_c_d() {
    let c = Coupling::new(0.9).unwrap();
    let k = TwistParameter::new(C64::new(0.35, 1.2)).unwrap();
    let u: Vec<C64> = [-1.8, -1.1, -0.3, 0.4, 1.2, 1.9]
        .iter()
        .map(|&x| C64::new(x, 0.0))
        .collect();
    let v: Vec<C64> = [-1.6, -0.7, 0.05, 0.8, 1.45, 1.75]
        .iter()
        .map(|&x| C64::new(x, 0.0))
        .collect();
    let d = mepno_det(&u, &v, c, k).unwrap().value;
    for route in [Route::B, Route::C] {
        let x = mepno(route, &u, &v, c, k).unwrap().value;
        assert!(rel_diff(x, d) < 1e-8, "{route}");
    }
}
