//! Constructive reduction of a stable module to the normal form
//! `[[x + aw, y + bw], [lambda z + cw, x + dw]]`, with a replayable
//! certificate: a coordinate change on `V` and a group element whose
//! application to the input reproduces the normal form exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::Error;
use crate::field::{FieldSpec, Scalar};
use crate::kronecker::{act, det_semiinvariant, project_module, GroupElem, KModule, KModule3};
use crate::mat::{self, Mat2};
use crate::multilinear::{
    gram_rank3, CoordChange, CoordChange3, LinForm3, QuadForm, TernaryQuadForm, Var,
};
use crate::stability::is_stable;

/// Hard trial budget for the seeded searches (splitting directions and
/// isotropic vectors).
pub const SEARCH_BUDGET: usize = 10_000;

/// Fixed seed of the internal searches, so that the reduction is a
/// deterministic function of its input.
const SPLITTING_SEED: u64 = 0x6b72_6f6e_6d6f_6431;

/// The normal-form certificate: replaying `(upsilon, gh)` on the input
/// produces `[[x + aw, y + bw], [lambda z + cw, x + dw]]` exactly.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub lambda: Scalar,
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
    pub upsilon: CoordChange,
    pub gh: GroupElem,
}

impl NormalForm {
    /// The normal-form module itself.
    pub fn module(&self) -> KModule {
        KModule::normal_form_module(&self.lambda, &self.a, &self.b, &self.c, &self.d)
    }

    /// Applies the certificate to a module.
    pub fn replay(&self, input: &KModule) -> KModule {
        act(&self.gh, &input.apply_coord_change(&self.upsilon))
    }
}

/// All reduced fractions `(num, den)` ordered by height `max(|num|, den)`:
/// `0, ±1, ±2, ±1/2, ±3, ±3/2, ±1/3, ±2/3, ...`, so that isotropic points
/// of small height are found early.
fn rational_height_pairs(budget: usize) -> impl Iterator<Item = (i64, u64)> {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut h: u64 = 0;
    let mut buffer: Vec<(i64, u64)> = Vec::new();
    let fill = move || {
        if let Some(s) = buffer.pop() {
            return Some(s);
        }
        if h == 0 {
            h = 1;
            return Some((0, 1));
        }
        // all reduced fractions of height exactly h, then advance
        for q in 1..=h {
            if gcd(h, q) == 1 {
                buffer.push((h as i64, q));
                buffer.push((-(h as i64), q));
            }
        }
        for p in 1..h {
            if gcd(p, h) == 1 {
                buffer.push((p as i64, h));
                buffer.push((-(p as i64), h));
            }
        }
        buffer.reverse();
        h += 1;
        buffer.pop()
    };
    std::iter::from_fn(fill).take(budget)
}

/// Deterministic enumeration of field scalars for line-slope searches:
/// residues `0, 1, 2, ...` over `F_p`, height-ordered fractions over the
/// rationals.
fn scalar_candidates(spec: FieldSpec, budget: usize) -> Box<dyn Iterator<Item = Scalar>> {
    match spec {
        FieldSpec::Fp(p) => Box::new(
            (0..p.min(budget as u64)).map(move |v| Scalar::Fp { value: v, modulus: p }),
        ),
        FieldSpec::Rational => Box::new(rational_height_pairs(budget).map(|(num, den)| {
            use num_bigint::BigInt;
            Scalar::Rational(num_rational::BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))
        })),
    }
}

/// A coordinate change after which dropping the last variable leaves the
/// given form with an irreducible (rank-3) ternary part. Tries the four
/// coordinate directions first, then seeded random small-coefficient
/// changes.
pub fn find_splitting_for_quad(q: &QuadForm) -> crate::Result<CoordChange> {
    let spec = q.spec();
    let coordinate_candidates = [
        CoordChange::identity(spec),
        CoordChange::swap(spec, Var::W, Var::X),
        CoordChange::swap(spec, Var::W, Var::Y),
        CoordChange::swap(spec, Var::W, Var::Z),
    ];
    for cc in coordinate_candidates {
        if gram_rank3(&cc.apply_quad(q).drop_w()) == 3 {
            return Ok(cc);
        }
    }
    let mut rng = ChaCha12Rng::seed_from_u64(SPLITTING_SEED);
    for _ in 0..SEARCH_BUDGET {
        let m: [[i64; 4]; 4] =
            std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-3..=3)));
        let Ok(cc) = CoordChange::from_i64(spec, m) else {
            continue;
        };
        if gram_rank3(&cc.apply_quad(q).drop_w()) == 3 {
            return Ok(cc);
        }
    }
    Err(Error::BudgetExhausted(
        "no splitting direction with a rank-3 projection found".into(),
    ))
}

/// Splitting search for a stable module: the returned coordinate change
/// places the module so that the projection along the last variable has
/// irreducible determinant.
pub fn choose_splitting(phi: &KModule) -> crate::Result<CoordChange> {
    if !is_stable(phi) {
        return Err(Error::precondition("choose_splitting requires a stable module"));
    }
    find_splitting_for_quad(&det_semiinvariant(phi))
}

/// A nonzero vector `v` with `t(v) = 0`.
///
/// Any isotropic conic with a point of moderate height is found by solving
/// the restriction to the pencil of lines `(1, s, u)` for successive slopes
/// `s` (plus the line at `x = 0`); over `F_p` this always succeeds, over the
/// rationals the budget runs out on anisotropic forms and on conics whose
/// points all have large height.
fn find_isotropic(t: &TernaryQuadForm) -> crate::Result<[Scalar; 3]> {
    let spec = t.spec();
    let basis: [[Scalar; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| spec.from_i64((i == j) as i64))
    });
    for v in &basis {
        if t.eval(v).is_zero() {
            return Ok(v.clone());
        }
    }
    // from here on t(e3) != 0, so the fiber equations below are honest
    // quadratics in u
    let quad_a = t.eval(&basis[2]);
    let two = spec.from_i64(2);
    let four = spec.from_i64(4);

    // the line x = 0: t(0, 1, u) = 0
    let b = &two * &t.polar(&basis[1], &basis[2]);
    let c = t.eval(&basis[1]);
    if let Some(u) = solve_quadratic(&quad_a, &b, &c) {
        return Ok([spec.zero(), spec.one(), u]);
    }

    // lines (1, s, u): t = A u^2 + B(s) u + C(s) with B linear and C
    // quadratic in the slope, so the discriminant is the quadratic
    // d0 + d1 s + d2 s^2; precomputing its coefficients makes each slope a
    // couple of multiplications
    let b0 = &two * &t.polar(&basis[0], &basis[2]);
    let b1 = &two * &t.polar(&basis[1], &basis[2]);
    let c0 = t.eval(&basis[0]);
    let c1 = &two * &t.polar(&basis[0], &basis[1]);
    let c2 = t.eval(&basis[1]);
    let four_a = &four * &quad_a;
    let d0 = &b0.square() - &(&four_a * &c0);
    let d1 = &(&two * &(&b0 * &b1)) - &(&four_a * &c1);
    let d2 = &b1.square() - &(&four_a * &c2);
    let two_a_inv = (&two * &quad_a).inv();
    let finish = |s: Scalar, r: Scalar| {
        let b_s = &b0 + &(&b1 * &s);
        let u = &(&r - &b_s) * &two_a_inv;
        let v = [spec.one(), s, u];
        debug_assert!(t.eval(&v).is_zero());
        v
    };
    if spec == FieldSpec::Rational {
        // cleared of denominators, the discriminant along slope p/q is
        // disc = (e0 q^2 + e1 pq + e2 p^2) / (D q^2), a square in Q exactly
        // when D times the integer numerator is a perfect square; the whole
        // scan then runs on integers
        use num_bigint::BigInt;
        use num_integer::Integer as _;
        use num_rational::BigRational;
        let as_rat = |s: &Scalar| match s {
            Scalar::Rational(r) => r.clone(),
            _ => unreachable!("rational branch"),
        };
        let (r0, r1, r2) = (as_rat(&d0), as_rat(&d1), as_rat(&d2));
        let den = r0.denom().lcm(r1.denom()).lcm(r2.denom());
        let e0 = r0.numer() * (&den / r0.denom());
        let e1 = r1.numer() * (&den / r1.denom());
        let e2 = r2.numer() * (&den / r2.denom());
        for (p, q) in rational_height_pairs(SEARCH_BUDGET) {
            let (bp, bq) = (BigInt::from(p), BigInt::from(q));
            let k = &e0 * (&bq * &bq) + &e1 * (&bp * &bq) + &e2 * (&bp * &bp);
            let scaled = &k * &den;
            if scaled.sign() == num_bigint::Sign::Minus {
                continue;
            }
            let root = scaled.sqrt();
            if &root * &root != scaled {
                continue;
            }
            let s = Scalar::Rational(BigRational::new(bp, bq.clone()));
            let r = Scalar::Rational(BigRational::new(root, &den * &bq));
            return Ok(finish(s, r));
        }
    } else {
        for s in scalar_candidates(spec, SEARCH_BUDGET) {
            let disc = &d0 + &(&s * &(&d1 + &(&s * &d2)));
            if let Some(r) = disc.sqrt_if_square() {
                return Ok(finish(s, r));
            }
        }
    }
    Err(Error::needs_extension(
        "no isotropic vector of the conic found within the search budget",
    ))
}

/// A root of `a u^2 + b u + c` with `a != 0`, if the discriminant is a
/// square.
fn solve_quadratic(a: &Scalar, b: &Scalar, c: &Scalar) -> Option<Scalar> {
    let spec = a.spec();
    let four_ac = &spec.from_i64(4) * &(a * c);
    let disc = &b.square() - &four_ac;
    let s = disc.sqrt_if_square()?;
    let two_a = &spec.from_i64(2) * a;
    Some(&(&s - b) * &two_a.inv())
}

/// Normalizes a rank-3 ternary form to `lambda * (x^2 - yz)` by an exact
/// change of coordinates, with `lambda` the canonical square-class
/// representative of the form's discriminant data: `1` whenever the required
/// square roots exist, otherwise the fixed non-residue over `F_p` or the
/// signed squarefree representative over the rationals.
///
/// Built from an isotropic vector, a hyperbolic pair through it, and the
/// rank-one orthogonal complement.
pub fn conic_normalize(t: &TernaryQuadForm) -> crate::Result<(CoordChange3, Scalar)> {
    let spec = t.spec();
    if gram_rank3(t) != 3 {
        return Err(Error::precondition("conic_normalize requires Gram rank 3"));
    }
    let v = find_isotropic(t)?;
    let basis: [[Scalar; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| spec.from_i64((i == j) as i64))
    });
    let u0 = basis
        .iter()
        .find(|u| !t.polar(&v, u).is_zero())
        .expect("isotropic vector is not in the radical of a rank-3 form");
    let c0 = t.polar(&v, u0);
    // second isotropic vector pairing nontrivially with v
    let two = spec.from_i64(2);
    let factor = &t.eval(u0) * &(&two * &c0).inv();
    let u1: [Scalar; 3] = std::array::from_fn(|i| &u0[i] - &(&factor * &v[i]));
    debug_assert!(t.eval(&u1).is_zero());
    let c = t.polar(&v, &u1);

    // rank-one complement of the hyperbolic plane
    let g = t.gram();
    let row_of = |w: &[Scalar; 3]| -> Vec<Scalar> {
        (0..3)
            .map(|j| {
                let mut acc = spec.zero();
                for i in 0..3 {
                    acc += &(&w[i] * &g[i][j]);
                }
                acc
            })
            .collect()
    };
    let ns = mat::nullspace(vec![row_of(&v), row_of(&u1)], 3, spec);
    assert_eq!(ns.len(), 1, "hyperbolic complement must be a line");
    let r: [Scalar; 3] = std::array::from_fn(|i| ns[0][i].clone());
    let mu = t.eval(&r);
    assert!(!mu.is_zero(), "complement value vanishes on a rank-3 form");

    let lambda = mu.square_class_rep();
    let scale = (&mu * &lambda.inv())
        .sqrt_if_square()
        .expect("mu over its square-class representative is a square");
    let r_scaled: [Scalar; 3] = std::array::from_fn(|i| &r[i] * &scale.inv());
    let u_factor = &(-&lambda) * &(&two * &c).inv();
    let u_scaled: [Scalar; 3] = std::array::from_fn(|i| &u1[i] * &u_factor);

    let cc = CoordChange3::new(vec![
        r_scaled.to_vec(),
        v.to_vec(),
        u_scaled.to_vec(),
    ])?;
    debug_assert_eq!(
        cc.apply_quad(t),
        TernaryQuadForm::from_monomials(spec, &[("x2", 1), ("yz", -1)]).scale(&lambda)
    );
    Ok((cc, lambda))
}

const E1: [i64; 2] = [1, 0];
const E2: [i64; 2] = [0, 1];

/// Conjugates a 3-variable module with determinant `alpha x^2 - beta yz`
/// to `[[x, y], [lambda z, x]]`, `lambda = beta / alpha`, by a pure group
/// element: the x-slice is inverted away, the y-slice conjugated to the
/// elementary nilpotent, and the z-slice cleaned inside its stabilizer.
pub fn conify(psi: &KModule3) -> crate::Result<(GroupElem, Scalar)> {
    let spec = psi.spec();
    let det = psi.det();
    let alpha = det.0[0].clone(); // x^2
    let beta = -&det.0[4]; // -yz
    let off_shape = !det.0[1].is_zero()
        || !det.0[2].is_zero()
        || !det.0[3].is_zero()
        || !det.0[5].is_zero();
    if alpha.is_zero() || beta.is_zero() || off_shape {
        return Err(Error::precondition(
            "conify requires det of the exact shape alpha x^2 - beta yz",
        ));
    }
    let lambda = &beta * &alpha.inv();

    let psi1 = psi.slice(0);
    let h1 = psi1.inv();
    let a_slice = h1.mul(&psi.slice(1));
    let b_slice = h1.mul(&psi.slice(2));

    // a_slice is a nonzero traceless nilpotent; send (Av, v) to the
    // standard basis
    let e1 = [spec.from_i64(E1[0]), spec.from_i64(E1[1])];
    let e2 = [spec.from_i64(E2[0]), spec.from_i64(E2[1])];
    let av1 = a_slice.apply(&e1);
    let v = if !av1[0].is_zero() || !av1[1].is_zero() {
        e1
    } else {
        e2
    };
    let av = a_slice.apply(&v);
    assert!(
        !av[0].is_zero() || !av[1].is_zero(),
        "y-slice vanished although the determinant has a yz term"
    );
    let p = Mat2([
        [av[0].clone(), v[0].clone()],
        [av[1].clone(), v[1].clone()],
    ]);
    let p_inv = p.inv();
    let b2 = p_inv.mul(&b_slice).mul(&p);
    debug_assert_eq!(
        p_inv.mul(&a_slice).mul(&p),
        Mat2::from_i64(spec, [[0, 1], [0, 0]])
    );
    let b_corner = b2.0[1][0].clone();
    assert_eq!(b_corner, lambda, "z-slice corner must equal beta/alpha");
    let t = &b2.0[0][0] * &lambda.inv();
    let s = Mat2([
        [spec.one(), t],
        [spec.zero(), spec.one()],
    ]);
    let s_inv = s.inv();

    let total = s_inv.mul(&p_inv);
    let gh = GroupElem::new(total.clone(), total.mul(&h1))?;

    debug_assert_eq!(psi.act(&gh), conify_target(spec, &lambda));
    Ok((gh, lambda))
}

fn conify_target(spec: FieldSpec, lambda: &Scalar) -> KModule3 {
    let lin = |c: [i64; 3]| LinForm3(std::array::from_fn(|i| spec.from_i64(c[i])));
    let mut z = lin([0, 0, 0]);
    z.0[2] = lambda.clone();
    KModule3 {
        e: [[lin([1, 0, 0]), lin([0, 1, 0])], [z, lin([1, 0, 0])]],
    }
}

/// Full reduction of a stable module: splitting, conic normalization of the
/// ternary determinant, and conjugation of the projected module. The
/// x-slice inversion inside [`conify`] absorbs the discriminant class, so a
/// successful run always certifies `lambda = 1`; over the rationals a conic
/// whose rational points all exceed the search height propagates
/// `NeedsExtension` instead.
pub fn normal_form(phi: &KModule) -> crate::Result<NormalForm> {
    if !is_stable(phi) {
        return Err(Error::precondition("normal_form requires a stable module"));
    }
    let q = det_semiinvariant(phi);
    let upsilon4 = find_splitting_for_quad(&q)?;
    let ternary = upsilon4.apply_quad(&q).drop_w();
    let (upsilon_u, _conic_lambda) = conic_normalize(&ternary)?;
    let upsilon = CoordChange::embed3(&upsilon_u).compose(&upsilon4);

    let moved = phi.apply_coord_change(&upsilon);
    let projected = project_module(&moved, [Var::X, Var::Y, Var::Z]);
    let (gh, lambda) = conify(&projected)?;

    let nf_module = act(&gh, &moved);
    let a = nf_module.e[0][0].coeff(Var::W).clone();
    let b = nf_module.e[0][1].coeff(Var::W).clone();
    let c = nf_module.e[1][0].coeff(Var::W).clone();
    let d = nf_module.e[1][1].coeff(Var::W).clone();
    let nf = NormalForm {
        lambda,
        a,
        b,
        c,
        d,
        upsilon,
        gh,
    };
    assert_eq!(
        nf.module(),
        nf_module,
        "reduced module is not of normal-form shape"
    );
    Ok(nf)
}

/// A group element carrying `phi1` to `phi2` exactly, for stable modules in
/// the same orbit class; `None` when the classes differ.
///
/// After matching determinants by a scaling element, both modules run
/// through the same deterministic reduction, and equality of `(det, e)`
/// forces equal normal forms; composing the certificates yields the witness.
pub fn orbit_witness(phi1: &KModule, phi2: &KModule) -> crate::Result<Option<GroupElem>> {
    if !is_stable(phi1) || !is_stable(phi2) {
        return Err(Error::precondition("orbit_witness requires stable modules"));
    }
    if crate::modulimap::eta(phi1)? != crate::modulimap::eta(phi2)? {
        return Ok(None);
    }
    let spec = phi1.spec();
    let q1 = det_semiinvariant(phi1);
    let q2 = det_semiinvariant(phi2);
    let k = q1
        .0
        .iter()
        .position(|c| !c.is_zero())
        .expect("stable determinant is nonzero");
    let tau = &q2.0[k] * &q1.0[k].inv();
    assert_eq!(q2, q1.scale(&tau), "equal classes have proportional determinants");

    // det((g, h) phi) = det(g)^{-1} det(h) det(phi): diag(1/tau, 1) scales by tau
    let scaling = GroupElem::new(
        Mat2([
            [tau.inv(), spec.zero()],
            [spec.zero(), spec.one()],
        ]),
        Mat2::identity(spec),
    )?;
    let phi1_scaled = act(&scaling, phi1);
    debug_assert_eq!(det_semiinvariant(&phi1_scaled), q2);

    let nf1 = normal_form(&phi1_scaled)?;
    let nf2 = normal_form(phi2)?;
    let witness = nf2
        .gh
        .inverse()
        .compose(&nf1.gh)
        .compose(&scaling);
    assert_eq!(
        act(&witness, phi1),
        *phi2,
        "witness replay failed although the classes coincide"
    );
    Ok(Some(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kronecker::epsilon;
    use crate::sample::Sampler;

    const Q: FieldSpec = FieldSpec::Rational;

    #[test]
    fn conic_normalize_examples() {
        let cone = TernaryQuadForm::from_monomials(Q, &[("x2", 1), ("yz", -1)]);
        let (cc, lambda) = conic_normalize(&cone).unwrap();
        assert!(lambda.is_one());
        assert_eq!(cc.matrix(), CoordChange3::identity(Q).matrix());

        let plus = TernaryQuadForm::from_monomials(Q, &[("x2", 1), ("yz", 1)]);
        let (cc, lambda) = conic_normalize(&plus).unwrap();
        assert!(lambda.is_one());
        assert_eq!(cc.apply_quad(&plus), cone);

        let aniso = TernaryQuadForm::from_monomials(Q, &[("x2", 1), ("y2", 1), ("z2", 1)]);
        assert!(matches!(
            conic_normalize(&aniso),
            Err(crate::Error::NeedsExtension(_))
        ));

        let low_rank = TernaryQuadForm::from_monomials(Q, &[("x2", 1), ("y2", 1)]);
        assert!(matches!(
            conic_normalize(&low_rank),
            Err(crate::Error::Precondition(_))
        ));
    }

    #[test]
    fn conic_normalize_records_discriminant_class() {
        // 2(x^2 - yz) is congruent to itself but not to x^2 - yz over Q
        let twisted = TernaryQuadForm::from_monomials(Q, &[("x2", 2), ("yz", -2)]);
        let (cc, lambda) = conic_normalize(&twisted).unwrap();
        assert_eq!(lambda, Q.from_i64(2));
        let target = TernaryQuadForm::from_monomials(Q, &[("x2", 1), ("yz", -1)]).scale(&lambda);
        assert_eq!(cc.apply_quad(&twisted), target);

        // isotropic with non-square data: x^2 + 3xy + z^2
        let t = TernaryQuadForm::from_monomials(Q, &[("x2", 1), ("xy", 3), ("z2", 1)]);
        assert_eq!(gram_rank3(&t), 3);
        let (cc, lambda) = conic_normalize(&t).unwrap();
        let target = TernaryQuadForm::from_monomials(Q, &[("x2", 1), ("yz", -1)]).scale(&lambda);
        assert_eq!(cc.apply_quad(&t), target);
    }

    #[test]
    fn conic_normalize_over_fp_is_total() {
        let spec = FieldSpec::fp(1009).unwrap();
        let mut sampler = Sampler::new(spec, 7);
        for _ in 0..200 {
            let t = sampler.rank3_ternary();
            let (cc, lambda) = conic_normalize(&t).unwrap();
            let target =
                TernaryQuadForm::from_monomials(spec, &[("x2", 1), ("yz", -1)]).scale(&lambda);
            assert_eq!(cc.apply_quad(&t), target);
            assert!(lambda.is_one() || lambda == spec.smallest_nonresidue().unwrap());
        }
    }

    #[test]
    fn conify_examples() {
        // [[x, y], [z, x]] is already in target shape
        let phi = KModule::from_i64(
            Q,
            [
                [[1, 0, 0, 0], [0, 1, 0, 0]],
                [[0, 0, 1, 0], [1, 0, 0, 0]],
            ],
        );
        let psi = project_module(&phi, [Var::X, Var::Y, Var::Z]);
        let (gh, lambda) = conify(&psi).unwrap();
        assert!(lambda.is_one());
        assert_eq!(gh.g, Mat2::identity(Q));
        assert_eq!(gh.h, Mat2::identity(Q));

        // scrambled instance recovers the display by replay
        let scramble = GroupElem::new(
            Mat2::from_i64(Q, [[2, 1], [1, 1]]),
            Mat2::from_i64(Q, [[1, 3], [1, 4]]),
        )
        .unwrap();
        let moved = psi.act(&scramble);
        let (gh, lambda) = conify(&moved).unwrap();
        let target = conify_target(Q, &lambda);
        assert_eq!(moved.act(&gh), target);

        // x-slice swapped off the identity: [[z, x], [x, y]] has
        // det = -(x^2 - yz)
        let twisted = KModule::from_i64(
            Q,
            [
                [[0, 0, 1, 0], [1, 0, 0, 0]],
                [[1, 0, 0, 0], [0, 1, 0, 0]],
            ],
        );
        let psi = project_module(&twisted, [Var::X, Var::Y, Var::Z]);
        let (gh, lambda) = conify(&psi).unwrap();
        assert!(lambda.is_one());
        assert_eq!(psi.act(&gh), conify_target(Q, &lambda));
    }

    #[test]
    fn normal_form_distinguished_example() {
        // [[x + w, y], [z, x + 3w]] -> lambda = 1, (a, b, c, d) = (1, 0, 0, 3)
        let phi = KModule::from_i64(
            Q,
            [
                [[1, 0, 0, 1], [0, 1, 0, 0]],
                [[0, 0, 1, 0], [1, 0, 0, 3]],
            ],
        );
        let nf = normal_form(&phi).unwrap();
        assert!(nf.lambda.is_one());
        assert_eq!(
            (nf.a.clone(), nf.b.clone(), nf.c.clone(), nf.d.clone()),
            (Q.from_i64(1), Q.zero(), Q.zero(), Q.from_i64(3))
        );
        assert_eq!(epsilon(&nf.module()), Q.from_i64(2));
        assert_eq!(nf.replay(&phi), nf.module());
    }

    #[test]
    fn normal_form_requires_stability() {
        assert!(normal_form(&KModule::zero(Q)).is_err());
        let strictly_ss = KModule::from_i64(
            Q,
            [
                [[1, 0, 0, 0], [0, 1, 0, 0]],
                [[0; 4], [1, 0, 0, 0]],
            ],
        );
        assert!(matches!(
            normal_form(&strictly_ss),
            Err(crate::Error::Precondition(_))
        ));
    }

    #[test]
    fn normal_form_round_trip_over_fp() {
        let spec = FieldSpec::fp(1009).unwrap();
        let mut sampler = Sampler::new(spec, 42);
        for _ in 0..50 {
            let (lambda, a, b, c, d) = sampler.normal_form_params();
            let built = KModule::normal_form_module(&lambda, &a, &b, &c, &d);
            let gh = sampler.group_elem();
            let cc = sampler.coord_change();
            let scrambled = act(&gh, &built.apply_coord_change(&cc));
            if !is_stable(&scrambled) {
                continue;
            }
            let nf = normal_form(&scrambled).unwrap();
            assert_eq!(nf.replay(&scrambled), nf.module());
            assert_eq!(
                epsilon(&nf.module()),
                &nf.lambda * &(&nf.d - &nf.a),
                "epsilon = lambda (d - a)"
            );
        }
    }

    #[test]
    fn normal_form_nu1_over_fp() {
        let spec = FieldSpec::fp(1009).unwrap();
        let phi = KModule::nu1_matrix(spec);
        let nf = normal_form(&phi).unwrap();
        assert_eq!(nf.replay(&phi), nf.module());
        // the group part of the certificate preserves the class of the
        // coordinate-changed input
        let transported = phi.apply_coord_change(&nf.upsilon);
        assert!(crate::kronecker::class_equal(&transported, &nf.module()).unwrap());
    }

    #[test]
    fn orbit_witness_round_trip() {
        let spec = FieldSpec::fp(1009).unwrap();
        let mut sampler = Sampler::new(spec, 99);
        let phi = sampler.stable_kmodule();
        let gh = sampler.group_elem();
        let moved = act(&gh, &phi);
        let w = orbit_witness(&phi, &moved).unwrap().unwrap();
        assert_eq!(act(&w, &phi), moved);

        // distinct classes yield no witness
        let other = sampler.stable_kmodule();
        if crate::modulimap::eta(&phi).unwrap() != crate::modulimap::eta(&other).unwrap() {
            assert!(orbit_witness(&phi, &other).unwrap().is_none());
        }
    }

    #[test]
    fn injectivity_of_the_display() {
        // two lambda = 1 normal forms with equal (det, epsilon) have equal
        // parameters: reconstruct them from the displayed coefficients
        let spec = FieldSpec::fp(1009).unwrap();
        let mut sampler = Sampler::new(spec, 5);
        for _ in 0..100 {
            let (_, a, b, c, d) = sampler.normal_form_params();
            let one = spec.one();
            let nf = KModule::normal_form_module(&one, &a, &b, &c, &d);
            let det = det_semiinvariant(&nf);
            let eps = epsilon(&nf);
            let sum = det.coeff(Var::X, Var::W).clone();
            let b_back = -det.coeff(Var::Z, Var::W);
            let c_back = -det.coeff(Var::Y, Var::W);
            let half = spec.from_i64(2).inv();
            let a_back = &(&sum - &eps) * &half;
            let d_back = &(&sum + &eps) * &half;
            assert_eq!((a_back, b_back, c_back, d_back), (a, b, c, d));
        }
    }
}
