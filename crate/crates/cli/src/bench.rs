//! Key-size sweeps emitted as CSV.

use std::collections::BTreeSet;

use mpfss::keysize::{
    primorial, BenchmarkRow, EstimateParams, SchemeTag,
};
use mpfss::sharing::Threshold;
use mpfss::Result;
use num_bigint::BigUint;
use rand_core::RngCore;

/// Group-element and security width of the measured P-256 schemes.
pub const GROUP_BITS: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Sweep {
    /// Domain sizes 10^2 … 10^10 at p = 5.
    Domain,
    /// Party counts 3 … 10 at N = 10^6.
    Parties,
    /// Prime and primorial output moduli at p = 5, N = 10^6.
    Moduli,
    All,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sweep: Sweep,
    /// Largest N for which keys are actually generated.
    pub max_measured_n: u64,
    pub domain_exponents: std::ops::RangeInclusive<u32>,
    pub parties: std::ops::RangeInclusive<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sweep: Sweep::All,
            max_measured_n: 1_000_000_000,
            domain_exponents: 2..=10,
            parties: 3..=10,
        }
    }
}

const MEASURED: [SchemeTag; 3] = [SchemeTag::OursDpf, SchemeTag::OursDcf, SchemeTag::BunnIt];

fn analytic_at(n: u64, t: Threshold, q_bits: u32, schemes: &[SchemeTag]) -> Result<Vec<BenchmarkRow>> {
    schemes
        .iter()
        .map(|&s| {
            let params = EstimateParams::with_bits(n, t.parties, t.corrupt, q_bits, GROUP_BITS, true);
            BenchmarkRow::analytic(s, &params)
        })
        .collect()
}

pub fn domain_sweep<R: RngCore + ?Sized>(cfg: &BenchConfig, rng: &mut R) -> Result<Vec<BenchmarkRow>> {
    let t = Threshold::new(5, 2)?;
    let mut rows = Vec::new();
    for e in cfg.domain_exponents.clone() {
        let n = 10u64.pow(e);
        rows.extend(analytic_at(
            n,
            t,
            GROUP_BITS,
            &[
                SchemeTag::Trivial,
                SchemeTag::RiposteDdh,
                SchemeTag::Boyle2015Dpf,
                SchemeTag::BunnPrg,
                SchemeTag::Goel2025,
            ],
        )?);
        if n <= cfg.max_measured_n {
            for s in MEASURED {
                rows.push(BenchmarkRow::measured(s, n, t, true, rng)?);
            }
        }
    }
    Ok(rows)
}

pub fn parties_sweep<R: RngCore + ?Sized>(cfg: &BenchConfig, rng: &mut R) -> Result<Vec<BenchmarkRow>> {
    let n = 1_000_000;
    let mut rows = Vec::new();
    for p in cfg.parties.clone() {
        let t = Threshold::honest_majority(p)?;
        rows.extend(analytic_at(n, t, GROUP_BITS, &[SchemeTag::Trivial, SchemeTag::RiposteDdh])?);
        if n <= cfg.max_measured_n {
            for s in [SchemeTag::OursDpf, SchemeTag::BunnIt] {
                rows.push(BenchmarkRow::measured(s, n, t, true, rng)?);
            }
        }
    }
    Ok(rows)
}

pub fn moduli_sweep() -> Result<Vec<BenchmarkRow>> {
    let n = 1_000_000;
    let t = Threshold::new(5, 2)?;
    let mut rows = Vec::new();
    for q_bits in 2..=32 {
        rows.extend(analytic_at(
            n,
            t,
            q_bits,
            &[SchemeTag::Trivial, SchemeTag::Boyle2015Dpf, SchemeTag::BunnPrg, SchemeTag::Goel2025],
        )?);
    }
    for k in 1..=9 {
        let params = EstimateParams {
            n,
            parties: t.parties,
            corrupt: t.corrupt,
            modulus: BigUint::from(primorial(k)),
            lambda: GROUP_BITS,
            prss: true,
        };
        for s in [SchemeTag::Boyle2015Dpf, SchemeTag::BunnPrg] {
            rows.push(BenchmarkRow::analytic_crt(s, &params)?);
        }
    }
    Ok(rows)
}

/// Rows of the configured sweep(s), deduplicated.
pub fn bench_rows<R: RngCore + ?Sized>(cfg: &BenchConfig, rng: &mut R) -> Result<Vec<BenchmarkRow>> {
    let mut rows = Vec::new();
    if matches!(cfg.sweep, Sweep::Domain | Sweep::All) {
        rows.extend(domain_sweep(cfg, rng)?);
    }
    if matches!(cfg.sweep, Sweep::Parties | Sweep::All) {
        rows.extend(parties_sweep(cfg, rng)?);
    }
    if matches!(cfg.sweep, Sweep::Moduli | Sweep::All) {
        rows.extend(moduli_sweep()?);
    }
    let mut seen = BTreeSet::new();
    rows.retain(|r| seen.insert(r.csv_line()));
    Ok(rows)
}
