//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Everything asserts exact equality in the active field; rational
//! coefficients are drawn from [-9, 9], the prime fields are F_10007 and
//! F_1009.

use std::process::Command;
use std::time::Instant;

use kronmod::blowdown;
use kronmod::kronecker::{
    act, det_semiinvariant, e_semiinvariant, epsilon, rho, KModule,
};
use kronmod::modulimap::{det_fiber, eta, eta_inverse, nu1, nu2, on_hypersurface, resultant};
use kronmod::multilinear::{QuadForm, Var};
use kronmod::normalform::normal_form;
use kronmod::sample::Sampler;
use kronmod::stability::{is_semistable, is_stable, king_oracle};
use kronmod::FieldSpec;

const P_BIG: u64 = 10007;
const P_SMALL: u64 = 1009;

fn fp(p: u64) -> FieldSpec {
    FieldSpec::fp(p).expect("odd prime")
}

#[test]
fn c1_epsilon_rho_identity() {
    let start = Instant::now();
    let mut sampler = Sampler::new(fp(P_BIG), 0xA1);
    for i in 0..10_000u32 {
        let phi = sampler.kmodule();
        assert_eq!(epsilon(&phi).square(), rho(&phi), "F_p instance {i}");
    }
    let mut sampler = Sampler::new(FieldSpec::Rational, 0xA2);
    for i in 0..1_000u32 {
        let phi = sampler.kmodule();
        assert_eq!(epsilon(&phi).square(), rho(&phi), "rational instance {i}");
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "epsilon^2 = rho campaign took {elapsed:?}, budget is 5 s"
    );
    println!("acceptance 1 (epsilon^2 = rho, 10000 F_p + 1000 rational, {elapsed:?}): PASS");
}

#[test]
fn c2_transformation_laws() {
    for (spec, trials, seed) in [
        (fp(P_BIG), 1_000u32, 0xB1u64),
        (FieldSpec::Rational, 100, 0xB2),
    ] {
        let mut sampler = Sampler::new(spec, seed);
        for i in 0..trials {
            let phi = sampler.kmodule();
            let gh = sampler.group_elem();
            let factor = &gh.g.det().inv() * &gh.h.det();
            let moved = act(&gh, &phi);
            assert_eq!(
                det_semiinvariant(&moved),
                det_semiinvariant(&phi).scale(&factor),
                "det law, instance {i}"
            );
            assert_eq!(
                e_semiinvariant(&moved),
                &factor.square() * &e_semiinvariant(&phi),
                "e law, instance {i}"
            );
        }
        for i in 0..trials {
            let phi = sampler.kmodule();
            let u = sampler.coord_change();
            let du = u.det();
            let changed = phi.apply_coord_change(&u);
            assert_eq!(epsilon(&changed), &du * &epsilon(&phi), "epsilon law, {i}");
            assert_eq!(rho(&changed), &du.square() * &rho(&phi), "rho law, {i}");
        }
    }
    println!("acceptance 2 (det, e, epsilon, rho transformation laws, exact): PASS");
}

#[test]
fn c3_criterion_vs_oracle() {
    let mut checked = 0u32;
    for (spec, trials, seed) in [
        (fp(P_BIG), 500u32, 0xC1u64),
        (FieldSpec::Rational, 500, 0xC2),
    ] {
        let mut sampler = Sampler::new(spec, seed);
        for _ in 0..trials {
            let phi = sampler.kmodule();
            let v = king_oracle(&phi);
            assert_eq!(v.semistable, is_semistable(&phi), "semistable: {phi:?}");
            assert_eq!(v.stable, is_stable(&phi), "stable: {phi:?}");
            checked += 1;
        }
        for phi in sampler.crafted_degenerates(50) {
            let v = king_oracle(&phi);
            assert_eq!(v.semistable, is_semistable(&phi), "crafted semistable: {phi:?}");
            assert_eq!(v.stable, is_stable(&phi), "crafted stable: {phi:?}");
            checked += 1;
        }
    }
    assert!(checked >= 1_050);
    println!("acceptance 3 (king oracle vs determinant criterion on {checked} instances): PASS");
}

#[test]
fn c4_normal_form_round_trip() {
    let spec = fp(P_SMALL);
    let mut sampler = Sampler::new(spec, 0xD1);
    let half = spec.from_i64(2).inv();
    let mut done = 0u32;
    while done < 500 {
        let (lambda, a, b, c, d) = sampler.normal_form_params();
        let built = KModule::normal_form_module(&lambda, &a, &b, &c, &d);

        // the lambda-aware determinant display and epsilon identity on the
        // constructed module
        let mut expected_det = QuadForm::zero(spec);
        expected_det.0[0] = spec.one(); // x2
        expected_det.0[5] = -&lambda; // yz
        expected_det.0[3] = &a + &d; // xw
        expected_det.0[6] = -&c; // yw
        expected_det.0[8] = -&(&lambda * &b); // zw
        expected_det.0[9] = &(&a * &d) - &(&b * &c); // w2
        assert_eq!(det_semiinvariant(&built), expected_det, "det display");
        assert_eq!(epsilon(&built), &lambda * &(&d - &a), "epsilon display");

        let gh = sampler.group_elem();
        let cc = sampler.coord_change();
        let scrambled = act(&gh, &built.apply_coord_change(&cc));
        if !is_stable(&scrambled) {
            continue; // the drawn parameters gave a reducible determinant
        }
        let nf = normal_form(&scrambled).expect("total over F_p for stable input");
        assert_eq!(nf.replay(&scrambled), nf.module(), "certificate replay");

        let module = nf.module();
        assert_eq!(
            epsilon(&module),
            &nf.lambda * &(&nf.d - &nf.a),
            "epsilon = lambda (d - a)"
        );
        let det = det_semiinvariant(&module);
        assert_eq!(det.0[0], spec.one());
        assert_eq!(det.0[5], -&nf.lambda);
        assert_eq!(det.0[3], &nf.a + &nf.d);
        assert_eq!(det.0[6], -&nf.c);
        assert_eq!(det.0[8], -&(&nf.lambda * &nf.b));
        assert_eq!(det.0[9], &(&nf.a * &nf.d) - &(&nf.b * &nf.c));

        // lambda = 1: equal (det, epsilon) forces equal parameters
        if nf.lambda.is_one() {
            let eps = epsilon(&module);
            let sum = det.coeff(Var::X, Var::W).clone();
            let a_back = &(&sum - &eps) * &half;
            let d_back = &(&sum + &eps) * &half;
            let b_back = -det.coeff(Var::Z, Var::W);
            let c_back = -det.coeff(Var::Y, Var::W);
            assert_eq!(
                (a_back, b_back, c_back, d_back),
                (nf.a.clone(), nf.b.clone(), nf.c.clone(), nf.d.clone()),
                "display injectivity"
            );
        }
        done += 1;
    }
    println!("acceptance 4 (500 normal-form round trips over F_{P_SMALL}): PASS");
}

#[test]
fn c5_hypersurface_and_fibers() {
    let spec = fp(P_SMALL);

    // eta lands on the hypersurface
    let mut sampler = Sampler::new(fp(P_BIG), 0xE1);
    for i in 0..1_000u32 {
        let phi = sampler.semistable_kmodule();
        let point = eta(&phi).expect("semi-stable");
        assert!(on_hypersurface(&point), "res(q) = p^2 fails at instance {i}");
    }

    // the fiber over the Segre quadric is {nu1, nu2} with epsilon +1, -1
    let segre = {
        let mut q = QuadForm::zero(spec);
        q.0[3] = spec.one(); // xw
        q.0[5] = spec.from_i64(-1); // yz
        q
    };
    let fiber = det_fiber(&segre).expect("resultant 1 is a square");
    assert_eq!(fiber.len(), 2);
    assert!(fiber.contains(&nu1(spec)));
    assert!(fiber.contains(&nu2(spec)));
    assert_eq!(nu1(spec).p(), &spec.one());
    assert_eq!(nu2(spec).p(), &spec.from_i64(-1));

    // eta_inverse is a section of eta on 500 stable modules
    let mut sampler = Sampler::new(spec, 0xE2);
    for i in 0..500u32 {
        let phi = sampler.stable_kmodule();
        let point = eta(&phi).expect("stable");
        let back = eta_inverse(&point).expect("total over F_p");
        assert_eq!(eta(&back).expect("image is semi-stable"), point, "instance {i}");
    }

    // branch locus: res = 0 gives exactly one fiber point
    let mut branch_checked = 0u32;
    let mut sampler = Sampler::new(spec, 0xE3);
    while branch_checked < 50 {
        let (_, a, b, c, _) = sampler.normal_form_params();
        // d = a makes epsilon vanish, hence res(det) = 0
        let phi = KModule::normal_form_module(&spec.one(), &a, &b, &c, &a);
        let q = det_semiinvariant(&phi);
        if q.is_zero() {
            continue;
        }
        assert!(resultant(&q).is_zero());
        let fiber = det_fiber(&q).expect("zero is a square");
        assert_eq!(fiber.len(), 1, "branch point has a single preimage");
        assert!(fiber[0].p().is_zero());
        branch_checked += 1;
    }
    println!("acceptance 5 (hypersurface containment, Segre fiber, eta_inverse, branch locus): PASS");
}

#[test]
fn c6_blowdown_consistency() {
    let spec = fp(P_SMALL);
    let mut sampler = Sampler::new(spec, 0xF1);
    for i in 0..200u32 {
        let psi = sampler.big_psi_w0();
        let al = blowdown::alpha(&psi).expect("W0");
        assert_eq!(
            blowdown::beta(&psi).expect("semi-stable alpha"),
            eta(&al).expect("semi-stable alpha"),
            "beta = eta o alpha, instance {i}"
        );
        let (_cert, reduced) = blowdown::reduce_psi(&psi).expect("replay is internal");
        assert_eq!(reduced.f, al.e, "reduced block carries alpha");
    }
    for i in 0..200u32 {
        let psi = sampler.big_psi_w1();
        assert_eq!(blowdown::beta(&psi).unwrap(), nu1(spec), "W1 instance {i}");
    }
    for i in 0..200u32 {
        let psi = sampler.big_psi_w2();
        assert_eq!(blowdown::beta(&psi).unwrap(), nu2(spec), "W2 instance {i}");
    }
    for i in 0..200u32 {
        let psi = sampler.big_psi_w0();
        let gh = sampler.big_group_elem();
        let moved = blowdown::act_big(&gh, &psi).expect("degrees preserved");
        let lhs = blowdown::alpha(&moved).expect("action preserves W0");
        let small = kronmod::GroupElem::new(gh.g11.clone(), gh.h22.clone()).unwrap();
        let rhs = act(&small, &blowdown::alpha(&psi).unwrap());
        assert_eq!(lhs, rhs, "alpha equivariance, instance {i}");
        assert_eq!(
            blowdown::beta(&psi).unwrap(),
            blowdown::beta(&moved).unwrap(),
            "beta orbit invariance, instance {i}"
        );
    }
    println!("acceptance 6 (blow-down: beta = eta o alpha, reductions, nu collapse, equivariance): PASS");
}

#[test]
fn c7_snake_identities() {
    let spec = fp(P_SMALL);
    let mut sampler = Sampler::new(spec, 0x51);
    for i in 0..200u32 {
        let psi = sampler.big_psi_w1();
        let report = blowdown::verify_snake(&psi).expect("W1 input");
        assert!(report.ok, "instance {i}: {:?}", report.failures);
    }
    println!("acceptance 7 (snake identities on 200 random W1 instances): PASS");
}

#[test]
fn c8_determinism_and_wall_clock() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_kronmod");
    let run = || {
        Command::new(bin)
            .args([
                "check",
                "--suite",
                "all",
                "--field",
                "fp:10007",
                "--seed",
                "42",
                "--trials",
                "200",
            ])
            .output()
            .expect("spawning the CLI")
    };
    let first = run();
    let second = run();
    assert!(first.status.success(), "campaign reported violations:\n{}",
        String::from_utf8_lossy(&first.stdout));
    assert_eq!(first.stdout, second.stdout, "reports must be byte-identical");
    assert_eq!(first.stderr, second.stderr);

    // a rational run as well, also byte-stable
    let run_q = || {
        Command::new(bin)
            .args([
                "check", "--suite", "all", "--field", "rational", "--seed", "7", "--trials", "50",
            ])
            .output()
            .expect("spawning the CLI")
    };
    let a = run_q();
    let b = run_q();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "full campaign suite took {elapsed:?}, budget is 60 s"
    );
    println!("acceptance 8 (byte-identical seeded reports, full suite in {elapsed:?}): PASS");
}
