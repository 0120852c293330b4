//! Key-size accounting: exact measurements of serialized keys and
//! unit-constant closed-form estimates for baseline schemes.
//!
//! Measured sizes count the key body only (sub-key sections, correction
//! points, `u`), not the fixed file header. Every party's copy of the
//! correction points is counted. Estimates use unit constants; they are
//! trend indicators, not reproductions of published magnitudes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand_core::RngCore;

use crate::ddhfss::{dcf_gen_with, dpf_gen_with, AnyKey, FssParams};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::group::{Group, P256};
use crate::sharing::{binomial, prg_expand, Seed, Threshold, SEED_BYTES};
use crate::subfss::{subdpf_gen_with, Dealing, SubDpfKey};
use crate::wire::Writer;

pub const CSV_HEADER: &str = "scheme,kind,N,p,m,q_bits,lambda,prss,per_party_bits,total_bits";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeTag {
    Boyle2015Dpf,
    BunnIt,
    BunnPrg,
    Goel2025,
    OursDcf,
    OursDpf,
    RiposteDdh,
    Trivial,
}

impl SchemeTag {
    pub const ALL: [SchemeTag; 8] = [
        SchemeTag::Boyle2015Dpf,
        SchemeTag::BunnIt,
        SchemeTag::BunnPrg,
        SchemeTag::Goel2025,
        SchemeTag::OursDcf,
        SchemeTag::OursDpf,
        SchemeTag::RiposteDdh,
        SchemeTag::Trivial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeTag::Boyle2015Dpf => "boyle2015-dpf",
            SchemeTag::BunnIt => "bunn-it",
            SchemeTag::BunnPrg => "bunn-prg",
            SchemeTag::Goel2025 => "goel2025",
            SchemeTag::OursDcf => "ours-dcf",
            SchemeTag::OursDpf => "ours-dpf",
            SchemeTag::RiposteDdh => "riposte-ddh",
            SchemeTag::Trivial => "trivial",
        }
    }

    /// Schemes whose keys this crate can generate and measure.
    pub fn is_measurable(self) -> bool {
        matches!(self, SchemeTag::BunnIt | SchemeTag::OursDpf | SchemeTag::OursDcf | SchemeTag::Trivial)
    }

    /// Schemes with a closed-form estimate.
    pub fn is_analytic(self) -> bool {
        matches!(
            self,
            SchemeTag::Trivial
                | SchemeTag::Boyle2015Dpf
                | SchemeTag::RiposteDdh
                | SchemeTag::BunnPrg
                | SchemeTag::Goel2025
        )
    }

    /// PRG-based schemes whose `q^…` factor the CRT split applies to.
    pub fn is_prg_based(self) -> bool {
        matches!(self, SchemeTag::Boyle2015Dpf | SchemeTag::BunnPrg)
    }
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown scheme {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EstimateKind {
    /// Byte length of generated keys.
    Measured,
    /// Closed form with unit constants.
    Analytic,
    /// Closed form summed over the CRT factors of the modulus.
    AnalyticCrt,
}

impl EstimateKind {
    pub fn name(self) -> &'static str {
        match self {
            EstimateKind::Measured => "measured",
            EstimateKind::Analytic => "analytic",
            EstimateKind::AnalyticCrt => "analytic-crt",
        }
    }
}

/// Parameters of one estimate. `modulus` is the output modulus `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimateParams {
    pub n: u64,
    pub parties: usize,
    pub corrupt: usize,
    pub modulus: BigUint,
    pub lambda: u32,
    pub prss: bool,
}

impl EstimateParams {
    /// Parameters with `q` the largest prime below `2^q_bits` (or `2^q_bits`
    /// itself above 64 bits, where the difference is immaterial).
    pub fn with_bits(n: u64, parties: usize, corrupt: usize, q_bits: u32, lambda: u32, prss: bool) -> Self {
        EstimateParams { n, parties, corrupt, modulus: modulus_for_bits(q_bits), lambda, prss }
    }

    pub fn q_bits(&self) -> u32 {
        bits(&self.modulus)
    }
}

/// `⌈log₂ q⌉`, the width of an element of `Z_q`.
pub fn bits(q: &BigUint) -> u32 {
    if q <= &BigUint::one() {
        return 1;
    }
    (q - 1u32).bits() as u32
}

/// Integer `⌈x^{1/k}⌉` for `x ≥ 0`.
pub fn ceil_root(x: &BigUint, k: u32) -> BigUint {
    let r = x.nth_root(k);
    if r.pow(k) == *x {
        r
    } else {
        r + 1u32
    }
}

/// `⌈√(q^e)⌉`, computed without materialising `q^e` when `e` is even.
fn sqrt_pow(q: &BigUint, e: u64) -> BigUint {
    let half = q.pow((e / 2) as u32);
    if e.is_multiple_of(2) {
        half
    } else {
        half * ceil_root(q, 2)
    }
}

/// Closed-form key size in bits (total over all parties).
pub fn estimate_bits(scheme: SchemeTag, params: &EstimateParams) -> Result<BigUint> {
    let EstimateParams { n, parties: p, corrupt: m, ref modulus, lambda, prss } = *params;
    if matches!(scheme, SchemeTag::BunnPrg | SchemeTag::BunnIt) {
        Threshold::new(p, m)?;
    }
    let q_bits = BigUint::from(bits(modulus));
    let lambda = BigUint::from(lambda);
    let n_big = BigUint::from(n);
    let p_big = BigUint::from(p);
    let sqrt_n = ceil_root(&n_big, 2);
    Ok(match scheme {
        SchemeTag::Trivial => {
            if prss {
                &n_big * &q_bits + BigUint::from(p - 1) * &lambda
            } else {
                &p_big * &n_big * &q_bits
            }
        }
        SchemeTag::Boyle2015Dpf => {
            &p_big * &sqrt_n * sqrt_pow(modulus, (p - 1) as u64) * (&q_bits + &lambda)
        }
        SchemeTag::RiposteDdh => &p_big * &sqrt_n * (&lambda + 256u32),
        SchemeTag::BunnPrg => {
            let e = (p as u64).checked_pow(m as u32).ok_or_else(|| {
                Error::InvalidParameters(format!("p^m overflows for p={p}, m={m}"))
            })?;
            &p_big
                * ceil_root(&n_big, 4)
                * sqrt_pow(modulus, e)
                * BigUint::from(binomial(p - 1, m))
                * (&lambda + &q_bits)
        }
        SchemeTag::Goel2025 => &p_big * &sqrt_n * p_big.pow(3) * lambda.pow(3) * (&q_bits + &lambda),
        SchemeTag::BunnIt | SchemeTag::OursDpf | SchemeTag::OursDcf => {
            return Err(Error::InvalidParameters(format!("{scheme} has no closed form here; measure it")))
        }
    })
}

/// Prime-power factorisation by trial division, ascending.
pub fn crt_decompose(modulus: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut n = modulus;
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Estimate summed over the prime-power factors of the modulus.
pub fn crt_estimate_bits(scheme: SchemeTag, params: &EstimateParams) -> Result<BigUint> {
    let modulus = params
        .modulus
        .to_u64()
        .ok_or_else(|| Error::InvalidParameters("CRT split needs a modulus below 2^64".into()))?;
    if modulus < 2 {
        return Err(Error::InvalidParameters("modulus must be at least 2".into()));
    }
    let mut total = BigUint::zero();
    for (prime, e) in crt_decompose(modulus) {
        let factor = EstimateParams { modulus: BigUint::from(prime.pow(e)), ..params.clone() };
        total += estimate_bits(scheme, &factor)?;
    }
    Ok(total)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    // deterministic for all 64-bit n
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest prime `< 2^bits` for `2 ≤ bits ≤ 64`; `2^bits` beyond that.
pub fn modulus_for_bits(bits: u32) -> BigUint {
    if bits > 64 {
        return BigUint::one() << bits;
    }
    let top = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
    let mut c = top;
    while !is_prime_u64(c) {
        c -= 1;
    }
    BigUint::from(c)
}

/// The first `k` primes multiplied together.
pub fn primorial(k: usize) -> u64 {
    let mut out = 1u64;
    let mut found = 0;
    let mut c = 2u64;
    while found < k {
        if is_prime_u64(c) {
            out *= c;
            found += 1;
        }
        c += 1;
    }
    out
}

/// Per-party and total serialized sizes in bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyBits {
    pub per_party: Vec<u64>,
    pub total: u64,
}

impl KeyBits {
    fn from_bytes(lens: impl IntoIterator<Item = usize>) -> Self {
        let per_party: Vec<u64> = lens.into_iter().map(|l| 8 * l as u64).collect();
        let total = per_party.iter().sum();
        KeyBits { per_party, total }
    }
}

/// Measures the key bodies of one Gen invocation.
pub fn measure_key_bits<G: Group>(keys: &[AnyKey<G>], prss: bool) -> Result<KeyBits> {
    let first = keys.first().ok_or_else(|| Error::mismatch("empty key set"))?;
    let fp = first.corrections().fingerprint();
    let mut seen = vec![false; first.threshold().parties];
    for k in keys {
        if k.corrections().fingerprint() != fp || k.threshold() != first.threshold() {
            return Err(Error::mismatch("keys come from different Gen invocations"));
        }
        if k.is_prss() != prss {
            return Err(Error::mismatch(format!("key PRSS state {} but flag {prss}", k.is_prss())));
        }
        if std::mem::replace(&mut seen[k.party()], true) {
            return Err(Error::mismatch(format!("duplicate key for party {}", k.party())));
        }
    }
    Ok(KeyBits::from_bytes(keys.iter().map(|k| k.body_bytes().len())))
}

/// Measures sub-DPF keys used directly over the whole domain.
pub fn measure_subdpf_bits<F: PrimeField>(keys: &[SubDpfKey<F>]) -> KeyBits {
    KeyBits::from_bytes(keys.iter().map(|k| {
        let mut w = Writer::new();
        k.write(&mut w);
        w.len()
    }))
}

/// A share of the full truth table: explicit scalars or a PRSS seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrivialKey<F> {
    Table(Vec<F>),
    Seed(Seed),
}

impl<F: PrimeField> TrivialKey<F> {
    /// Raw body: `N` scalars or one seed, no framing.
    pub fn body_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        match self {
            TrivialKey::Table(t) => t.iter().for_each(|v| {
                w.scalar(v);
            }),
            TrivialKey::Seed(s) => {
                w.bytes(s);
            }
        }
        w.into_bytes()
    }

    pub fn table(&self, n: usize) -> Vec<F> {
        match self {
            TrivialKey::Table(t) => t.clone(),
            TrivialKey::Seed(s) => prg_expand(s, n),
        }
    }
}

/// Additively shares the truth table of `β·[x = α]`; with PRSS all but the
/// last party receive a seed.
pub fn trivial_gen<F: PrimeField, R: RngCore + ?Sized>(
    n: u64,
    alpha: u64,
    beta: F,
    parties: usize,
    prss: bool,
    rng: &mut R,
) -> Result<Vec<TrivialKey<F>>> {
    if alpha >= n {
        return Err(Error::domain(alpha as i64, 0, n as i64));
    }
    if parties == 0 {
        return Err(Error::InvalidParameters("need at least one party".into()));
    }
    let n = n as usize;
    let mut last = vec![F::zero(); n];
    last[alpha as usize] = beta;
    let mut keys = Vec::with_capacity(parties);
    for _ in 1..parties {
        let key = if prss {
            let mut s = [0u8; SEED_BYTES];
            rng.fill_bytes(&mut s);
            TrivialKey::Seed(s)
        } else {
            TrivialKey::Table((0..n).map(|_| F::random(rng)).collect())
        };
        for (acc, v) in last.iter_mut().zip(key.table(n)) {
            *acc -= v;
        }
        keys.push(key);
    }
    keys.push(TrivialKey::Table(last));
    Ok(keys)
}

/// Generates P-256 keys of a measurable scheme and measures them.
pub fn measure_scheme<R: RngCore + ?Sized>(
    scheme: SchemeTag,
    n: u64,
    threshold: Threshold,
    prss: bool,
    rng: &mut R,
) -> Result<KeyBits> {
    let one = <P256 as Group>::Scalar::one();
    match scheme {
        SchemeTag::OursDpf | SchemeTag::OursDcf => {
            let params = FssParams::new(n, threshold.parties, threshold.corrupt)?.with_prss(prss);
            let g = P256::generator();
            let keys: Vec<AnyKey<P256>> = if scheme == SchemeTag::OursDpf {
                dpf_gen_with(&params, 0, &g, rng)?.into_iter().map(AnyKey::Dpf).collect()
            } else {
                dcf_gen_with(&params, 0, &g, rng)?.into_iter().map(AnyKey::Dcf).collect()
            };
            measure_key_bits(&keys, prss)
        }
        SchemeTag::BunnIt => {
            let dealing = if prss { Dealing::Prss } else { Dealing::Plain };
            let keys = subdpf_gen_with(n, 0, one, threshold, dealing, rng)?;
            Ok(measure_subdpf_bits(&keys))
        }
        SchemeTag::Trivial => {
            let keys = trivial_gen(n, 0, one, threshold.parties, prss, rng)?;
            Ok(KeyBits::from_bytes(keys.iter().map(|k| k.body_bytes().len())))
        }
        _ => Err(Error::InvalidParameters(format!("{scheme} cannot be measured"))),
    }
}

/// One CSV row of the benchmark.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchmarkRow {
    pub scheme: SchemeTag,
    pub kind: EstimateKind,
    pub n: u64,
    pub parties: usize,
    pub corrupt: usize,
    pub q_bits: u32,
    pub lambda: u32,
    pub prss: bool,
    /// `⌈total / p⌉` for estimates; the largest party's key when measured.
    pub per_party_bits: BigUint,
    pub total_bits: BigUint,
}

impl BenchmarkRow {
    pub fn analytic(scheme: SchemeTag, params: &EstimateParams) -> Result<Self> {
        Self::from_total(scheme, EstimateKind::Analytic, params, estimate_bits(scheme, params)?)
    }

    pub fn analytic_crt(scheme: SchemeTag, params: &EstimateParams) -> Result<Self> {
        Self::from_total(scheme, EstimateKind::AnalyticCrt, params, crt_estimate_bits(scheme, params)?)
    }

    fn from_total(scheme: SchemeTag, kind: EstimateKind, params: &EstimateParams, total: BigUint) -> Result<Self> {
        let p = BigUint::from(params.parties);
        Ok(BenchmarkRow {
            scheme,
            kind,
            n: params.n,
            parties: params.parties,
            corrupt: params.corrupt,
            q_bits: params.q_bits(),
            lambda: params.lambda,
            prss: params.prss,
            per_party_bits: (&total + &p - 1u32) / &p,
            total_bits: total,
        })
    }

    /// Measures P-256 keys (`q_bits = λ = 256`).
    pub fn measured<R: RngCore + ?Sized>(
        scheme: SchemeTag,
        n: u64,
        threshold: Threshold,
        prss: bool,
        rng: &mut R,
    ) -> Result<Self> {
        let bits = measure_scheme(scheme, n, threshold, prss, rng)?;
        let lambda = P256::context().security_lambda;
        Ok(BenchmarkRow {
            scheme,
            kind: EstimateKind::Measured,
            n,
            parties: threshold.parties,
            corrupt: threshold.corrupt,
            q_bits: <P256 as Group>::Scalar::modulus_bits(),
            lambda,
            prss,
            per_party_bits: BigUint::from(bits.per_party.iter().copied().max().unwrap_or(0)),
            total_bits: BigUint::from(bits.total),
        })
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.scheme,
            self.kind.name(),
            self.n,
            self.parties,
            self.corrupt,
            self.q_bits,
            self.lambda,
            self.prss,
            self.per_party_bits,
            self.total_bits
        )
    }

    fn sort_key(&self) -> (&'static str, u64, usize, u32, EstimateKind, bool) {
        (self.scheme.name(), self.n, self.parties, self.q_bits, self.kind, self.prss)
    }
}

pub fn sort_rows(rows: &mut [BenchmarkRow]) {
    rows.sort_by_key(|r| r.sort_key());
}

/// Header plus rows sorted by `(scheme, N, p, q_bits)`.
pub fn to_csv(rows: &[BenchmarkRow]) -> String {
    let mut rows = rows.to_vec();
    sort_rows(&mut rows);
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}
