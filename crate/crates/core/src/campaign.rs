//! Seeded property-test campaigns over the whole crate, with deterministic
//! JSON-line reports: identical `(field, seed, trials, suite)` inputs produce
//! byte-identical output.

use serde_json::{json, Value};

use crate::blowdown;
use crate::error::Error;
use crate::field::FieldSpec;
use crate::kronecker::{
    act, class_equal, det_semiinvariant, e_semiinvariant, epsilon, rho, KModule,
};
use crate::modulimap::{det_fiber, eta, eta_inverse, on_hypersurface, resultant};
use crate::multilinear::{gram_rank, internal_product, wedge4, LinForm, QuadForm, Var, VARS};
use crate::normalform::normal_form;
use crate::sample::{derive_seed, Sampler};
use crate::stability::{is_semistable, is_stable, king_oracle};

/// Campaign suites; `All` runs every one of them in order.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Suite {
    Field,
    Multilinear,
    EpsilonRho,
    TransformationLaws,
    GroupAction,
    KingVsDet,
    NormalForm,
    Hypersurface,
    Blowdown,
    Snake,
    All,
}

impl Suite {
    pub const NAMES: [(&'static str, Suite); 11] = [
        ("field", Suite::Field),
        ("multilinear", Suite::Multilinear),
        ("epsilon-rho", Suite::EpsilonRho),
        ("transformation-laws", Suite::TransformationLaws),
        ("group-action", Suite::GroupAction),
        ("king-vs-det", Suite::KingVsDet),
        ("normal-form", Suite::NormalForm),
        ("hypersurface", Suite::Hypersurface),
        ("blowdown", Suite::Blowdown),
        ("snake", Suite::Snake),
        ("all", Suite::All),
    ];

    pub fn parse(s: &str) -> crate::Result<Suite> {
        Suite::NAMES
            .iter()
            .find(|(name, _)| *name == s)
            .map(|(_, suite)| *suite)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }

    pub fn name(self) -> &'static str {
        Suite::NAMES
            .iter()
            .find(|(_, suite)| *suite == self)
            .map(|(name, _)| *name)
            .expect("every suite is named")
    }

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::NAMES[..10].iter().map(|(_, s)| *s).collect(),
            s => vec![s],
        }
    }
}

/// Configuration of one campaign run.
#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub field: FieldSpec,
    pub seed: u64,
    pub trials: u64,
    pub suite: Suite,
}

impl CampaignConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// Outcome of a single suite.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub suite: &'static str,
    pub trials: u64,
    pub violations: Vec<Value>,
    pub samples_rejected: u64,
}

/// Full report; render with [`CampaignReport::render`] for the CLI.
#[derive(Clone, Debug)]
pub struct CampaignReport {
    pub field: FieldSpec,
    pub seed: u64,
    pub trials: u64,
    pub suite: &'static str,
    pub outcomes: Vec<SuiteOutcome>,
}

impl CampaignReport {
    pub fn ok(&self) -> bool {
        self.outcomes.iter().all(|o| o.violations.is_empty())
    }

    /// Deterministic JSON-lines rendering: a header, one line per violation,
    /// one summary line per suite, and a final total.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(
            &json!({"campaign": {
                "field": self.field.to_string(),
                "seed": self.seed,
                "trials": self.trials,
                "suite": self.suite,
            }})
            .to_string(),
        );
        out.push('\n');
        let mut total = 0usize;
        for o in &self.outcomes {
            for v in &o.violations {
                out.push_str(&json!({"violation": {"suite": o.suite, "detail": v}}).to_string());
                out.push('\n');
            }
            total += o.violations.len();
            out.push_str(
                &json!({"suite": {
                    "name": o.suite,
                    "trials": o.trials,
                    "violations": o.violations.len(),
                    "samples_rejected": o.samples_rejected,
                }})
                .to_string(),
            );
            out.push('\n');
        }
        out.push_str(
            &json!({"summary": {"suites": self.outcomes.len(), "violations": total, "ok": self.ok()}})
                .to_string(),
        );
        out.push('\n');
        out
    }
}

/// Runs the configured campaign. Each suite draws from its own sub-seeded
/// generator, so suites are independent and reordering-safe.
pub fn run(cfg: &CampaignConfig) -> crate::Result<CampaignReport> {
    cfg.validate()?;
    let mut outcomes = Vec::new();
    for suite in cfg.suite.expand() {
        let sub_seed = derive_seed(cfg.seed, suite as u64);
        let mut sampler = Sampler::new(cfg.field, sub_seed);
        let mut violations = Vec::new();
        let runner: fn(&mut Sampler, u64, &mut Vec<Value>) = match suite {
            Suite::Field => field_suite,
            Suite::Multilinear => multilinear_suite,
            Suite::EpsilonRho => epsilon_rho_suite,
            Suite::TransformationLaws => transformation_suite,
            Suite::GroupAction => group_action_suite,
            Suite::KingVsDet => king_suite,
            Suite::NormalForm => normal_form_suite,
            Suite::Hypersurface => hypersurface_suite,
            Suite::Blowdown => blowdown_suite,
            Suite::Snake => snake_suite,
            Suite::All => unreachable!("expanded above"),
        };
        runner(&mut sampler, cfg.trials, &mut violations);
        outcomes.push(SuiteOutcome {
            suite: suite.name(),
            trials: cfg.trials,
            violations,
            samples_rejected: sampler.rejected,
        });
    }
    Ok(CampaignReport {
        field: cfg.field,
        seed: cfg.seed,
        trials: cfg.trials,
        suite: cfg.suite.name(),
        outcomes,
    })
}

fn fail(violations: &mut Vec<Value>, trial: u64, check: &str, detail: String) {
    violations.push(json!({"trial": trial, "check": check, "detail": detail}));
}

fn field_suite(s: &mut Sampler, trials: u64, violations: &mut Vec<Value>) {
    for i in 0..trials {
        let (a, b, c) = (s.scalar(), s.scalar(), s.scalar());
        if &(&a + &b) + &c != &a + &(&b + &c) {
            fail(violations, i, "add-associative", format!("{a}, {b}, {c}"));
        }
        if &(&a * &b) * &c != &a * &(&b * &c) {
            fail(violations, i, "mul-associative", format!("{a}, {b}, {c}"));
        }
        if &a * &(&b + &c) != &(&a * &b) + &(&a * &c) {
            fail(violations, i, "distributive", format!("{a}, {b}, {c}"));
        }
        if !a.is_zero() && (&a * &a.inv()) != a.one_like() {
            fail(violations, i, "inverse", format!("{a}"));
        }
        let sq = a.square();
        match sq.sqrt_if_square() {
            Some(r) if r.square() == sq => {}
            _ => fail(violations, i, "sqrt-of-square", format!("{a}")),
        }
    }
}

fn multilinear_suite(s: &mut Sampler, trials: u64, violations: &mut Vec<Value>) {
    let spec = s.spec();
    let two = spec.from_i64(2);
    for i in 0..trials {
        let q = s.quad_form();
        let mut euler = QuadForm::zero(spec);
        for v in VARS {
            euler = euler.add(&LinForm::var(spec, v).mul(&internal_product(v, &q)));
        }
        if euler != q.scale(&two) {
            fail(violations, i, "euler-identity", format!("{q}"));
        }

        let (a, b, c, d) = (s.lin_form(), s.lin_form(), s.lin_form(), s.lin_form());
        if !wedge4(&a, &a, &c, &d).is_zero() {
            fail(violations, i, "wedge-alternating", format!("{a}"));
        }
        if wedge4(&a, &b, &c, &d) != -&wedge4(&b, &a, &c, &d) {
            fail(violations, i, "wedge-antisymmetric", format!("{a}; {b}"));
        }

        let u = s.coord_change();
        if gram_rank(&u.apply_quad(&q)) != gram_rank(&q) {
            fail(violations, i, "gram-rank-invariance", format!("{q}"));
        }

        let prod = a.mul(&b);
        if !prod.is_zero() && gram_rank(&prod) <= 2 {
            match crate::multilinear::factor_quadric(&prod) {
                Ok((x, y)) => {
                    if x.mul(&y) != prod {
                        fail(violations, i, "factor-product", format!("{prod}"));
                    }
                }
                Err(Error::NeedsExtension(_)) => {
                    fail(violations, i, "factor-split-form", format!("{prod}"));
                }
                Err(e) => fail(violations, i, "factor-error", format!("{e}")),
            }
        }
    }
}

fn epsilon_rho_suite(s: &mut Sampler, trials: u64, violations: &mut Vec<Value>) {
    for i in 0..trials {
        let phi = s.kmodule();
        let eps = epsilon(&phi);
        let r = rho(&phi);
        if eps.square() != r {
            fail(
                violations,
                i,
                "epsilon-squared-equals-rho",
                format!("epsilon = {eps}, rho = {r}"),
            );
        }
    }
}

fn transformation_suite(s: &mut Sampler, trials: u64, violations: &mut Vec<Value>) {
    for i in 0..trials {
        let phi = s.kmodule();
        let gh = s.group_elem();
        let factor = &gh.g.det().inv() * &gh.h.det();
        let moved = act(&gh, &phi);
        if det_semiinvariant(&moved) != det_semiinvariant(&phi).scale(&factor) {
            fail(violations, i, "det-law", format!("factor = {factor}"));
        }
        if e_semiinvariant(&moved) != &factor.square() * &e_semiinvariant(&phi) {
            fail(violations, i, "e-law", format!("factor = {factor}"));
        }

        let u = s.coord_change();
        let du = u.det();
        let changed = phi.apply_coord_change(&u);
        if epsilon(&changed) != &du * &epsilon(&phi) {
            fail(violations, i, "epsilon-coord-law", format!("det = {du}"));
        }
        if rho(&changed) != &du.square() * &rho(&phi) {
            fail(violations, i, "rho-coord-law", format!("det = {du}"));
        }
        if resultant(&u.apply_quad(&det_semiinvariant(&phi)))
            != &du.square() * &resultant(&det_semiinvariant(&phi))
        {
            fail(violations, i, "resultant-coord-law", format!("det = {du}"));
        }
    }
}

fn group_action_suite(s: &mut Sampler, trials: u64, violations: &mut Vec<Value>) {
    for i in 0..trials {
        let phi = s.kmodule();
        let a = s.group_elem();
        let b = s.group_elem();
        if act(&a, &act(&b, &phi)) != act(&a.compose(&b), &phi) {
            fail(violations, i, "action-composition", String::new());
        }
        if act(&a.inverse(), &act(&a, &phi)) != phi {
            fail(violations, i, "action-inverse", String::new());
        }
        if is_semistable(&phi) {
            match class_equal(&phi, &act(&a, &phi)) {
                Ok(true) => {}
                _ => fail(violations, i, "class-constant-on-orbit", String::new()),
            }
        }
    }
}

fn king_suite(s: &mut Sampler, trials: u64, violations: &mut Vec<Value>) {
    let check = |phi: &KModule, i: u64, violations: &mut Vec<Value>| {
        let verdict = king_oracle(phi);
        if verdict.semistable != is_semistable(phi) {
            fail(
                violations,
                i,
                "king-semistable-agreement",
                format!("oracle = {}, det criterion = {}", verdict.semistable, is_semistable(phi)),
            );
        }
        if verdict.stable != is_stable(phi) {
            fail(
                violations,
                i,
                "king-stable-agreement",
                format!("oracle = {}, rank criterion = {}", verdict.stable, is_stable(phi)),
            );
        }
    };
    for i in 0..trials {
        let phi = s.kmodule();
        check(&phi, i, violations);
    }
    for (k, phi) in s.crafted_degenerates(50).iter().enumerate() {
        check(phi, trials + k as u64, violations);
    }
}

fn normal_form_suite(s: &mut Sampler, trials: u64, violations: &mut Vec<Value>) {
    let spec = s.spec();
    let half = spec.from_i64(2).inv();
    for i in 0..trials {
        let (lambda, a, b, c, d) = s.normal_form_params();
        let built = KModule::normal_form_module(&lambda, &a, &b, &c, &d);
        // lambda-aware identities on the constructed module
        if epsilon(&built) != &lambda * &(&d - &a) {
            fail(violations, i, "epsilon-lambda-display", format!("lambda = {lambda}"));
        }
        let gh = s.group_elem();
        let cc = s.coord_change();
        let scrambled = act(&gh, &built.apply_coord_change(&cc));
        if !is_stable(&scrambled) {
            continue; // reducible determinant drawn; not a normal-form input
        }
        let nf = match normal_form(&scrambled) {
            Ok(nf) => nf,
            Err(Error::NeedsExtension(_)) => continue,
            Err(e) => {
                fail(violations, i, "normal-form-error", format!("{e}"));
                continue;
            }
        };
        if nf.replay(&scrambled) != nf.module() {
            fail(violations, i, "certificate-replay", String::new());
            continue;
        }
        let module = nf.module();
        if epsilon(&module) != &nf.lambda * &(&nf.d - &nf.a) {
            fail(violations, i, "epsilon-equals-lambda-d-minus-a", String::new());
        }
        // the determinant display determines the parameters (lambda = 1)
        if nf.lambda.is_one() {
            let det = det_semiinvariant(&module);
            let eps = epsilon(&module);
            let sum = det.coeff(Var::X, Var::W).clone();
            let a_back = &(&sum - &eps) * &half;
            let d_back = &(&sum + &eps) * &half;
            let b_back = -det.coeff(Var::Z, Var::W);
            let c_back = -det.coeff(Var::Y, Var::W);
            if (a_back, b_back, c_back, d_back) != (nf.a.clone(), nf.b.clone(), nf.c.clone(), nf.d.clone()) {
                fail(violations, i, "display-injectivity", String::new());
            }
        }
    }
}

fn hypersurface_suite(s: &mut Sampler, trials: u64, violations: &mut Vec<Value>) {
    for i in 0..trials {
        let phi = s.semistable_kmodule();
        let point = match eta(&phi) {
            Ok(p) => p,
            Err(e) => {
                fail(violations, i, "eta-error", format!("{e}"));
                continue;
            }
        };
        if !on_hypersurface(&point) {
            fail(violations, i, "image-on-hypersurface", String::new());
        }
        if resultant(&det_semiinvariant(&phi)) != rho(&phi) {
            fail(violations, i, "resultant-equals-rho", String::new());
        }

        // fiber over the determinant: epsilon is a square root of res
        let q = det_semiinvariant(&phi);
        match det_fiber(&q) {
            Ok(points) => {
                if !points.contains(&point) {
                    fail(violations, i, "eta-in-det-fiber", String::new());
                }
                let r = resultant(&q);
                let expected = if r.is_zero() { 1 } else { 2 };
                if points.len() != expected {
                    fail(violations, i, "fiber-cardinality", format!("{}", points.len()));
                }
            }
            Err(Error::NeedsExtension(_)) => {
                fail(violations, i, "fiber-missing-epsilon", String::new());
            }
            Err(e) => fail(violations, i, "fiber-error", format!("{e}")),
        }

        if is_stable(&phi) {
            match eta_inverse(&point) {
                Ok(back) => match eta(&back) {
                    Ok(p2) if p2 == point => {}
                    _ => fail(violations, i, "eta-inverse-round-trip", String::new()),
                },
                Err(Error::NeedsExtension(_)) => {}
                Err(e) => fail(violations, i, "eta-inverse-error", format!("{e}")),
            }
        }
    }
}

fn blowdown_suite(s: &mut Sampler, trials: u64, violations: &mut Vec<Value>) {
    let spec = s.spec();
    for i in 0..trials {
        let psi = s.big_psi_w0();
        let al = blowdown::alpha(&psi).expect("sampler stays in W0");
        match (blowdown::beta(&psi), eta(&al)) {
            (Ok(b), Ok(e)) if b == e => {}
            _ => fail(violations, i, "beta-equals-eta-alpha", String::new()),
        }
        if blowdown::reduce_psi(&psi).is_err() {
            fail(violations, i, "reduce-psi", String::new());
        }
        if !crate::kronecker::is_injective_on_quadric(&al) {
            fail(violations, i, "w0-injective-on-quadric", String::new());
        }

        let w1 = s.big_psi_w1();
        match blowdown::beta(&w1) {
            Ok(b) if b == crate::modulimap::nu1(spec) => {}
            _ => fail(violations, i, "beta-w1-is-nu1", String::new()),
        }
        let w2 = s.big_psi_w2();
        match blowdown::beta(&w2) {
            Ok(b) if b == crate::modulimap::nu2(spec) => {}
            _ => fail(violations, i, "beta-w2-is-nu2", String::new()),
        }

        // equivariance and orbit invariance
        let gh = s.big_group_elem();
        match blowdown::act_big(&gh, &psi) {
            Ok(moved) => {
                let lhs = blowdown::alpha(&moved).expect("action preserves W0");
                let small =
                    crate::kronecker::GroupElem::new(gh.g11.clone(), gh.h22.clone()).unwrap();
                let rhs = act(&small, &al);
                if lhs != rhs {
                    fail(violations, i, "alpha-equivariance", String::new());
                }
                match (blowdown::beta(&psi), blowdown::beta(&moved)) {
                    (Ok(a), Ok(b)) if a == b => {}
                    _ => fail(violations, i, "beta-orbit-invariance", String::new()),
                }
            }
            Err(e) => fail(violations, i, "big-action-error", format!("{e}")),
        }
    }
}

fn snake_suite(s: &mut Sampler, trials: u64, violations: &mut Vec<Value>) {
    for i in 0..trials {
        let psi = s.big_psi_w1();
        match blowdown::verify_snake(&psi) {
            Ok(report) if report.ok => {}
            Ok(report) => fail(violations, i, "snake-identities", report.failures.join("; ")),
            Err(e) => fail(violations, i, "snake-error", format!("{e}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_parsing() {
        assert_eq!(Suite::parse("epsilon-rho").unwrap(), Suite::EpsilonRho);
        assert_eq!(Suite::parse("all").unwrap(), Suite::All);
        assert!(Suite::parse("nope").is_err());
    }

    #[test]
    fn zero_trials_rejected() {
        let cfg = CampaignConfig {
            field: FieldSpec::Rational,
            seed: 1,
            trials: 0,
            suite: Suite::Field,
        };
        assert!(matches!(run(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn small_campaign_passes_and_is_deterministic() {
        let cfg = CampaignConfig {
            field: FieldSpec::fp(1009).unwrap(),
            seed: 42,
            trials: 25,
            suite: Suite::All,
        };
        let a = run(&cfg).unwrap();
        assert!(a.ok(), "violations: {}", a.render());
        let b = run(&cfg).unwrap();
        assert_eq!(a.render(), b.render());
    }

    #[test]
    fn rational_campaign_passes() {
        let cfg = CampaignConfig {
            field: FieldSpec::Rational,
            seed: 7,
            trials: 10,
            suite: Suite::All,
        };
        let report = run(&cfg).unwrap();
        assert!(report.ok(), "violations: {}", report.render());
    }
}
