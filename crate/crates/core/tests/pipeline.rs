//! Cross-module flows exercised the way a consumer would: invariants,
//! stability, reduction, the moduli map and its inverse, orbit witnesses,
//! and the bigraded model, over both fields.

use kronmod::json;
use kronmod::kronecker::{
    act, class_equal, epsilon, is_injective_on_quadric, rho, KModule,
};
use kronmod::modulimap::{eta, eta_inverse, nu1, nu2, on_hypersurface};
use kronmod::normalform::{normal_form, orbit_witness};
use kronmod::sample::Sampler;
use kronmod::stability::{is_semistable, is_stable, king_oracle};
use kronmod::{blowdown, FieldSpec};

#[test]
fn stable_module_story_over_fp() {
    let spec = FieldSpec::fp(1009).unwrap();
    let mut sampler = Sampler::new(spec, 2024);
    for _ in 0..25 {
        let phi = sampler.stable_kmodule();

        // invariants are consistent
        assert_eq!(epsilon(&phi).square(), rho(&phi));
        let verdict = king_oracle(&phi);
        assert!(verdict.semistable && verdict.stable);

        // reduction certificate replays and lands in the right class
        let nf = normal_form(&phi).expect("total over F_p");
        assert_eq!(nf.replay(&phi), nf.module());
        let transported = phi.apply_coord_change(&nf.upsilon);
        assert!(class_equal(&transported, &nf.module()).unwrap());

        // the moduli map and its constructive inverse
        let point = eta(&phi).unwrap();
        assert!(on_hypersurface(&point));
        let back = eta_inverse(&point).expect("total over F_p");
        assert_eq!(eta(&back).unwrap(), point);
        assert!(class_equal(&phi, &back).unwrap());

        // a scrambled copy is recognized, with an exact group witness
        let gh = sampler.group_elem();
        let moved = act(&gh, &phi);
        assert!(class_equal(&phi, &moved).unwrap());
        let witness = orbit_witness(&phi, &moved).unwrap().expect("same class");
        assert_eq!(act(&witness, &phi), moved);
    }
}

#[test]
fn distinguished_examples_over_the_rationals() {
    let spec = FieldSpec::Rational;
    // [[x + w, y], [z, x + 3w]]: epsilon = 2, rho = 4
    let phi = KModule::from_i64(
        spec,
        [
            [[1, 0, 0, 1], [0, 1, 0, 0]],
            [[0, 0, 1, 0], [1, 0, 0, 3]],
        ],
    );
    assert_eq!(epsilon(&phi), spec.from_i64(2));
    assert_eq!(rho(&phi), spec.from_i64(4));
    let nf = normal_form(&phi).unwrap();
    assert_eq!(nf.replay(&phi), nf.module());

    // the two distinguished points over the Segre quadric
    let m1 = KModule::nu1_matrix(spec);
    let m2 = KModule::nu2_matrix(spec);
    assert!(!class_equal(&m1, &m2).unwrap());
    assert_eq!(eta(&m1).unwrap(), nu1(spec));
    assert_eq!(eta(&m2).unwrap(), nu2(spec));
    assert!(!is_injective_on_quadric(&m1));

    let back = eta_inverse(&nu1(spec)).unwrap();
    assert!(class_equal(&back, &m1).unwrap());

    // strictly semistable reducible class through the inverse
    let diag = KModule::from_i64(
        spec,
        [
            [[1, 0, 0, 0], [0; 4]],
            [[0; 4], [0, 1, 1, 0]],
        ],
    );
    assert!(is_semistable(&diag) && !is_stable(&diag));
    let point = eta(&diag).unwrap();
    assert!(point.p().is_zero());
    let back = eta_inverse(&point).unwrap();
    assert_eq!(eta(&back).unwrap(), point);
}

#[test]
fn blowdown_story_over_fp() {
    let spec = FieldSpec::fp(10007).unwrap();
    let mut sampler = Sampler::new(spec, 77);
    for _ in 0..10 {
        let psi = sampler.big_psi_w0();
        let al = blowdown::alpha(&psi).unwrap();
        assert!(is_semistable(&al));
        assert!(is_injective_on_quadric(&al));
        assert_eq!(blowdown::beta(&psi).unwrap(), eta(&al).unwrap());

        let (cert, reduced) = blowdown::reduce_psi(&psi).unwrap();
        assert_eq!(blowdown::act_big(&cert, &psi).unwrap(), reduced);

        // the boundary regions collapse to the distinguished points
        assert_eq!(blowdown::beta(&sampler.big_psi_w1()).unwrap(), nu1(spec));
        assert_eq!(blowdown::beta(&sampler.big_psi_w2()).unwrap(), nu2(spec));
        let report = blowdown::verify_snake(&sampler.big_psi_w1()).unwrap();
        assert!(report.ok);
    }
}

#[test]
fn json_round_trips_through_the_pipeline() {
    let spec = FieldSpec::fp(1009).unwrap();
    let mut sampler = Sampler::new(spec, 5);
    let phi = sampler.stable_kmodule();

    let v = json::kmodule_to_value(&phi);
    assert_eq!(json::parse_kmodule(&v, spec).unwrap(), phi);

    let point = eta(&phi).unwrap();
    let v = json::wpoint_to_value(&point);
    assert_eq!(json::parse_wpoint(&v, spec).unwrap(), point);

    let psi = sampler.big_psi_w1();
    let v = json::bigpsi_to_value(&psi);
    assert_eq!(json::parse_bigpsi(&v, spec).unwrap(), psi);

    let nf = normal_form(&phi).unwrap();
    let v = json::normal_form_to_value(&nf);
    for key in ["lambda", "a", "b", "c", "d", "upsilon", "g", "h"] {
        assert!(v.get(key).is_some(), "normal form JSON misses {key}");
    }
}
