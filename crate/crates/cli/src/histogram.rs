//! Private histogram: every client deals DPF keys for its bin with `β = 1`
//! under the exponent encoding; each server multiplies its shares pointwise
//! across clients, and one BSGS decode per bin recovers the counts.

use mpfss::ddhfss::{dpf_gen_with, ddh_decode, FssParams};
use mpfss::encoding::ExponentCodec;
use mpfss::group::Group;
use mpfss::{Error, Result};
use rand_core::RngCore;

/// Runs the full protocol locally and returns the decoded counts per bin.
pub fn private_histogram<G: Group, R: RngCore + ?Sized>(
    values: &[u64],
    bins: u64,
    params: &FssParams,
    codec: &ExponentCodec<G>,
    rng: &mut R,
) -> Result<Vec<u64>> {
    if params.domain != bins {
        return Err(Error::InvalidParameters(format!(
            "domain {} does not match {bins} bins",
            params.domain
        )));
    }
    let parties = params.threshold.parties;
    let one = codec.encode(1)?;
    let mut aggregates = vec![vec![G::identity(); bins as usize]; parties];
    for &v in values {
        let keys = dpf_gen_with::<G, _>(params, v, &one, rng)?;
        for (server, key) in aggregates.iter_mut().zip(&keys) {
            for (acc, share) in server.iter_mut().zip(key.eval_range(0..bins)?) {
                *acc = G::op(acc, &share);
            }
        }
    }
    (0..bins as usize)
        .map(|bin| {
            let shares: Vec<_> = aggregates.iter().map(|s| s[bin]).collect();
            codec.decode(&ddh_decode::<G>(&shares))
        })
        .collect()
}

/// Reference plaintext histogram.
pub fn plaintext_histogram(values: &[u64], bins: u64) -> Vec<u64> {
    let mut out = vec![0; bins as usize];
    for &v in values {
        out[v as usize] += 1;
    }
    out
}
