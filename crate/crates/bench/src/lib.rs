//! Shared setup for the benchmark targets: fixed-seed samplers over the
//! fields the benchmarks run in.

use kronmod::sample::Sampler;
use kronmod::FieldSpec;

pub const BENCH_PRIME: u64 = 10007;

pub fn fp_sampler(seed: u64) -> Sampler {
    Sampler::new(FieldSpec::fp(BENCH_PRIME).expect("odd prime"), seed)
}

pub fn rational_sampler(seed: u64) -> Sampler {
    Sampler::new(FieldSpec::Rational, seed)
}
