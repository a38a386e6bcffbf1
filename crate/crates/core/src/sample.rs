//! Seeded random generators for every object in the crate, used by the
//! property-test campaigns. All randomness flows from a single 64-bit seed
//! through ChaCha12; sub-streams are derived with a SplitMix64 step so that
//! independent suites and workers get decorrelated, reproducible streams.
//! Region-constrained samplers use rejection and count their rejections.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::blowdown::{BigGroupElem, BigPsi, BiForm, Region, V1Form, V2Form};
use crate::field::{FieldSpec, Scalar};
use crate::kronecker::{is_injective_on_quadric, KModule};
use crate::mat::Mat2;
use crate::multilinear::{gram_rank3, CoordChange, LinForm, QuadForm, TernaryQuadForm};
use crate::stability::{is_semistable, is_stable};

/// SplitMix64 finalizer, used to derive independent sub-seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic generator of field elements and structured instances.
pub struct Sampler {
    spec: FieldSpec,
    rng: ChaCha12Rng,
    /// Rational coefficients are drawn from `[-coeff_range, coeff_range]`.
    pub coeff_range: i64,
    /// Rejection-sampling audit count.
    pub rejected: u64,
}

impl Sampler {
    pub fn new(spec: FieldSpec, seed: u64) -> Self {
        Sampler {
            spec,
            rng: ChaCha12Rng::seed_from_u64(seed),
            coeff_range: 9,
            rejected: 0,
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn scalar(&mut self) -> Scalar {
        match self.spec {
            FieldSpec::Fp(p) => Scalar::Fp {
                value: self.rng.random_range(0..p),
                modulus: p,
            },
            FieldSpec::Rational => {
                let n = self.rng.random_range(-self.coeff_range..=self.coeff_range);
                self.spec.from_i64(n)
            }
        }
    }

    pub fn nonzero_scalar(&mut self) -> Scalar {
        loop {
            let s = self.scalar();
            if !s.is_zero() {
                return s;
            }
            self.rejected += 1;
        }
    }

    pub fn lin_form(&mut self) -> LinForm {
        LinForm(std::array::from_fn(|_| self.scalar()))
    }

    pub fn quad_form(&mut self) -> QuadForm {
        QuadForm(std::array::from_fn(|_| self.scalar()))
    }

    pub fn kmodule(&mut self) -> KModule {
        KModule {
            e: std::array::from_fn(|_| std::array::from_fn(|_| self.lin_form())),
        }
    }

    pub fn semistable_kmodule(&mut self) -> KModule {
        loop {
            let phi = self.kmodule();
            if is_semistable(&phi) {
                return phi;
            }
            self.rejected += 1;
        }
    }

    pub fn stable_kmodule(&mut self) -> KModule {
        loop {
            let phi = self.kmodule();
            if is_stable(&phi) {
                return phi;
            }
            self.rejected += 1;
        }
    }

    pub fn mat2(&mut self) -> Mat2 {
        Mat2(std::array::from_fn(|_| std::array::from_fn(|_| self.scalar())))
    }

    pub fn invertible_mat2(&mut self) -> Mat2 {
        loop {
            let m = self.mat2();
            if m.is_invertible() {
                return m;
            }
            self.rejected += 1;
        }
    }

    pub fn group_elem(&mut self) -> crate::kronecker::GroupElem {
        crate::kronecker::GroupElem {
            g: self.invertible_mat2(),
            h: self.invertible_mat2(),
        }
    }

    pub fn coord_change(&mut self) -> CoordChange {
        loop {
            let m: Vec<Vec<Scalar>> = (0..4).map(|_| (0..4).map(|_| self.scalar()).collect()).collect();
            match CoordChange::new(m) {
                Ok(cc) => return cc,
                Err(_) => self.rejected += 1,
            }
        }
    }

    /// A nondegenerate ternary form.
    pub fn rank3_ternary(&mut self) -> TernaryQuadForm {
        loop {
            let t = TernaryQuadForm(std::array::from_fn(|_| self.scalar()));
            if gram_rank3(&t) == 3 {
                return t;
            }
            self.rejected += 1;
        }
    }

    /// Parameters `(lambda, a, b, c, d)` of a normal-form module, `lambda`
    /// nonzero.
    pub fn normal_form_params(&mut self) -> (Scalar, Scalar, Scalar, Scalar, Scalar) {
        (
            self.nonzero_scalar(),
            self.scalar(),
            self.scalar(),
            self.scalar(),
            self.scalar(),
        )
    }

    pub fn v1_form(&mut self) -> V1Form {
        V1Form([self.scalar(), self.scalar()])
    }

    pub fn v2_form(&mut self) -> V2Form {
        V2Form([self.scalar(), self.scalar()])
    }

    fn independent_v1_pair(&mut self) -> (V1Form, V1Form) {
        loop {
            let a = self.v1_form();
            let b = self.v1_form();
            if !(&(&a.0[0] * &b.0[1]) - &(&a.0[1] * &b.0[0])).is_zero() {
                return (a, b);
            }
            self.rejected += 1;
        }
    }

    fn independent_v2_pair(&mut self) -> (V2Form, V2Form) {
        loop {
            let a = self.v2_form();
            let b = self.v2_form();
            if !(&(&a.0[0] * &b.0[1]) - &(&a.0[1] * &b.0[0])).is_zero() {
                return (a, b);
            }
            self.rejected += 1;
        }
    }

    fn raw_big_psi(&mut self, a1: Scalar, a2: Scalar) -> BigPsi {
        BigPsi {
            a1,
            a2,
            u12: self.v2_form(),
            v12: self.v2_form(),
            u11: self.v1_form(),
            v11: self.v1_form(),
            u21: self.v1_form(),
            v21: self.v1_form(),
            u22: self.v2_form(),
            v22: self.v2_form(),
            f: std::array::from_fn(|_| std::array::from_fn(|_| self.lin_form())),
        }
    }

    /// A member of the open region: diagonal scalars nonzero, and the
    /// eliminated module semi-stable with determinant not a multiple of the
    /// Segre quadric.
    pub fn big_psi_w0(&mut self) -> BigPsi {
        loop {
            let a1 = self.nonzero_scalar();
            let a2 = self.nonzero_scalar();
            let psi = self.raw_big_psi(a1, a2);
            let al = crate::blowdown::alpha(&psi).expect("a1 a2 != 0 is W0");
            if is_semistable(&al) && is_injective_on_quadric(&al) {
                debug_assert_eq!(psi.classify(), Region::W0);
                return psi;
            }
            self.rejected += 1;
        }
    }

    /// A member of the first boundary region, with its independence side
    /// conditions enforced.
    pub fn big_psi_w1(&mut self) -> BigPsi {
        let a1 = self.nonzero_scalar();
        let mut psi = self.raw_big_psi(a1, self.spec.zero());
        let (u11, v11) = self.independent_v1_pair();
        let (u22, v22) = self.independent_v2_pair();
        psi.u11 = u11;
        psi.v11 = v11;
        psi.u22 = u22;
        psi.v22 = v22;
        debug_assert_eq!(psi.classify(), Region::W1);
        psi
    }

    /// A member of the second boundary region.
    pub fn big_psi_w2(&mut self) -> BigPsi {
        let a2 = self.nonzero_scalar();
        let mut psi = self.raw_big_psi(self.spec.zero(), a2);
        let (u12, v12) = self.independent_v2_pair();
        let (u21, v21) = self.independent_v1_pair();
        psi.u12 = u12;
        psi.v12 = v12;
        psi.u21 = u21;
        psi.v21 = v21;
        debug_assert_eq!(psi.classify(), Region::W2);
        psi
    }

    /// A random block automorphism pair.
    pub fn big_group_elem(&mut self) -> BigGroupElem {
        let spec = self.spec;
        let deg01 = |s: &mut Self| {
            let mut b = BiForm::zero(spec, 0, 1);
            *b.coeff_mut(0, 0) = s.scalar();
            *b.coeff_mut(0, 1) = s.scalar();
            b
        };
        let deg10 = |s: &mut Self| {
            let mut b = BiForm::zero(spec, 1, 0);
            *b.coeff_mut(0, 0) = s.scalar();
            *b.coeff_mut(1, 0) = s.scalar();
            b
        };
        BigGroupElem::new(
            self.invertible_mat2(),
            [
                [deg01(self), deg01(self)],
                [deg10(self), deg10(self)],
            ],
            [self.nonzero_scalar(), self.nonzero_scalar()],
            [self.nonzero_scalar(), self.nonzero_scalar()],
            [
                [deg10(self), deg01(self)],
                [deg10(self), deg01(self)],
            ],
            self.invertible_mat2(),
        )
        .expect("construction satisfies the block constraints")
    }

    /// Crafted degenerate modules: zero columns and rows, squares and
    /// products of linear forms as determinants, nilpotent slices, common
    /// kernels. `count` instances, cycling through the templates.
    pub fn crafted_degenerates(&mut self, count: usize) -> Vec<KModule> {
        let spec = self.spec;
        let zero = LinForm::zero(spec);
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let phi = match k % 10 {
                0 => KModule::zero(spec),
                1 => {
                    // zero column
                    KModule::new(zero.clone(), self.lin_form(), zero.clone(), self.lin_form())
                }
                2 => {
                    // zero row
                    KModule::new(zero.clone(), zero.clone(), self.lin_form(), self.lin_form())
                }
                3 => {
                    // det = l^2, nilpotent y-slice pattern
                    let l = self.lin_form();
                    KModule::new(l.clone(), self.lin_form(), zero.clone(), l)
                }
                4 => {
                    // det = u u' of rank <= 2
                    let u = self.lin_form();
                    let v = self.lin_form();
                    KModule::new(u, zero.clone(), zero.clone(), v)
                }
                5 => {
                    // proportional columns: common kernel vector
                    let t = self.scalar();
                    let (a, b) = (self.lin_form(), self.lin_form());
                    KModule::new(a.clone(), a.scale(&t), b.clone(), b.scale(&t))
                }
                6 => {
                    // proportional rows: image inside a line
                    let t = self.scalar();
                    let (a, b) = (self.lin_form(), self.lin_form());
                    KModule::new(a.clone(), b.clone(), a.scale(&t), b.scale(&t))
                }
                7 => {
                    // single nonzero entry
                    KModule::new(self.lin_form(), zero.clone(), zero.clone(), zero.clone())
                }
                8 => {
                    // upper triangular with equal diagonal
                    let l = self.lin_form();
                    let m = self.lin_form();
                    KModule::new(l.clone(), m, zero.clone(), l.scale(&self.scalar()))
                }
                _ => {
                    // all four entries multiples of one form: det = 0
                    let l = self.lin_form();
                    KModule::new(
                        l.scale(&self.scalar()),
                        l.scale(&self.scalar()),
                        l.scale(&self.scalar()),
                        l.scale(&self.scalar()),
                    )
                }
            };
            out.push(phi);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(42, 0);
        let b = derive_seed(42, 1);
        let c = derive_seed(43, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_is_reproducible() {
        let spec = FieldSpec::fp(10007).unwrap();
        let mut s1 = Sampler::new(spec, 7);
        let mut s2 = Sampler::new(spec, 7);
        for _ in 0..20 {
            assert_eq!(s1.kmodule(), s2.kmodule());
        }
    }

    #[test]
    fn region_samplers_hit_their_regions() {
        let spec = FieldSpec::fp(1009).unwrap();
        let mut s = Sampler::new(spec, 11);
        for _ in 0..10 {
            assert_eq!(s.big_psi_w0().classify(), Region::W0);
            assert_eq!(s.big_psi_w1().classify(), Region::W1);
            assert_eq!(s.big_psi_w2().classify(), Region::W2);
        }
        assert!(is_stable(&s.stable_kmodule()));
    }
}
