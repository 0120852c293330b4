//! DDH-based multi-party DPF and DCF with `O(∛N)` keys.
//!
//! The domain `[0, N)` is laid out as a `ν² × ν` grid, `ν = ⌈∛N⌉`, with
//! `x = γ·ν + δ`. Two sub-DPF keys over the `ν²` rows share `r` and `1` at the
//! target row γ*; per-column correction points `(g_δ, h_δ)` with
//! `h_δ = g_δ^{−1/r}` (times `g_β^{1/r}` on the target column) turn the
//! additive row shares into multiplicative shares of `g_β`:
//!
//! ```text
//! ∏ᵢ h_δ^{⟦s_a⟧ᵢ} · g_δ^{⟦s_b⟧ᵢ} = h_δ^{s_a} · g_δ^{s_b}
//! ```
//!
//! The DCF adds a sub-DCF on rows `< γ*` carrying `s` and one extra element
//! `u = g_β^{1/s}`.

use std::fmt;
use std::ops::Range;
use std::sync::{Arc, OnceLock};

use rand_core::RngCore;
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::encoding::EncodingKind;
use crate::error::{Error, Result};
use crate::field::{random_nonzero, PrimeField};
use crate::group::{FixedBaseTable, Group, GroupId};
use crate::sharing::Threshold;
use crate::subfss::{
    subdcf_eval, subdcf_gen_with, subdpf_eval, subdpf_gen_with, Dealing, SubDcfKey, SubDpfKey,
};
use crate::wire::{Reader, Writer};

pub const KEY_MAGIC: &[u8; 5] = b"MPFSS";
pub const SHARE_MAGIC: &[u8; 5] = b"MPSHR";
pub const FORMAT_VERSION: u8 = 1;
/// Size of the fixed key-file header in bytes.
pub const KEY_HEADER_BYTES: usize = 37;
pub const FINGERPRINT_BYTES: usize = 16;

/// `⌈∛n⌉`.
pub fn cube_width(n: u64) -> u64 {
    let mut r = (n as f64).cbrt().round() as u64;
    while r > 0 && (r as u128).pow(3) >= n as u128 {
        r -= 1;
    }
    while ((r as u128).pow(3)) < n as u128 {
        r += 1;
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridPos {
    pub gamma: u64,
    pub delta: u64,
}

pub fn grid_pos(x: u64, nu: u64) -> Result<GridPos> {
    let cube = (nu as u128).pow(3);
    if (x as u128) >= cube {
        return Err(Error::domain(x as i64, 0, cube.min(i64::MAX as u128) as i64));
    }
    Ok(GridPos { gamma: x / nu, delta: x % nu })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Dpf,
    Dcf,
}

impl Scheme {
    pub fn tag(self) -> u8 {
        match self {
            Scheme::Dpf => 1,
            Scheme::Dcf => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            1 => Ok(Scheme::Dpf),
            2 => Ok(Scheme::Dcf),
            t => Err(Error::decode(format!("unknown scheme tag {t}"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Dpf => "dpf",
            Scheme::Dcf => "dcf",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dpf" => Ok(Scheme::Dpf),
            "dcf" => Ok(Scheme::Dcf),
            _ => Err(Error::InvalidParameters(format!("unknown scheme {s:?}"))),
        }
    }
}

/// Domain size, threshold and dealing mode of a Gen invocation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FssParams {
    pub domain: u64,
    pub threshold: Threshold,
    pub dealing: Dealing,
}

impl FssParams {
    pub fn new(domain: u64, parties: usize, corrupt: usize) -> Result<Self> {
        if domain == 0 {
            return Err(Error::InvalidParameters("domain size must be positive".into()));
        }
        if domain > 1 << 62 {
            return Err(Error::InvalidParameters(format!("domain size {domain} too large")));
        }
        Ok(FssParams {
            domain,
            threshold: Threshold::new(parties, corrupt)?,
            dealing: Dealing::Plain,
        })
    }

    pub fn with_prss(mut self, prss: bool) -> Self {
        self.dealing = if prss { Dealing::Prss } else { Dealing::Plain };
        self
    }

    pub fn nu(&self) -> u64 {
        cube_width(self.domain)
    }
}

/// Correction points shared (byte-identically) by all keys of one Gen call.
pub struct Corrections<G: Group> {
    pairs: Vec<(G::Element, G::Element)>,
    u: Option<G::Element>,
    // lazily built comb tables for full-domain evaluation
    tables: Vec<OnceLock<(FixedBaseTable<G>, FixedBaseTable<G>)>>,
    u_table: OnceLock<FixedBaseTable<G>>,
}

impl<G: Group> fmt::Debug for Corrections<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Corrections")
            .field("pairs", &self.pairs)
            .field("u", &self.u)
            .finish()
    }
}

impl<G: Group> PartialEq for Corrections<G> {
    fn eq(&self, o: &Self) -> bool {
        self.pairs == o.pairs && self.u == o.u
    }
}

impl<G: Group> Corrections<G> {
    fn new(pairs: Vec<(G::Element, G::Element)>, u: Option<G::Element>) -> Self {
        let tables = (0..pairs.len()).map(|_| OnceLock::new()).collect();
        Corrections { pairs, u, tables, u_table: OnceLock::new() }
    }

    /// `(g_δ, h_δ)` for δ = 0..ν.
    pub fn pairs(&self) -> &[(G::Element, G::Element)] {
        &self.pairs
    }

    pub fn u(&self) -> Option<&G::Element> {
        self.u.as_ref()
    }

    fn column_tables(&self, delta: usize) -> &(FixedBaseTable<G>, FixedBaseTable<G>) {
        self.tables[delta].get_or_init(|| {
            let (g, h) = &self.pairs[delta];
            (FixedBaseTable::new(g), FixedBaseTable::new(h))
        })
    }

    fn u_table(&self) -> &FixedBaseTable<G> {
        self.u_table
            .get_or_init(|| FixedBaseTable::new(self.u.as_ref().expect("DCF keys carry u")))
    }

    fn write(&self, w: &mut Writer) {
        for (g, h) in &self.pairs {
            G::write_element(g, w.buf_mut());
            G::write_element(h, w.buf_mut());
        }
        if let Some(u) = &self.u {
            G::write_element(u, w.buf_mut());
        }
    }

    fn read(r: &mut Reader<'_>, nu: u64, with_u: bool) -> Result<Self> {
        let mut elem = || G::read_element(r.take(G::ELEMENT_BYTES)?);
        let pairs = (0..nu)
            .map(|_| Ok((elem()?, elem()?)))
            .collect::<Result<Vec<_>>>()?;
        let u = if with_u { Some(elem()?) } else { None };
        Ok(Self::new(pairs, u))
    }

    /// Digest identifying the Gen invocation these points came from.
    pub fn fingerprint(&self) -> [u8; FINGERPRINT_BYTES] {
        let mut w = Writer::new();
        self.write(&mut w);
        let mut h = Shake256::default();
        h.update(b"mpfss-corrections");
        h.update(&w.into_bytes());
        let mut out = [0u8; FINGERPRINT_BYTES];
        h.finalize_xof().read(&mut out);
        out
    }
}

/// One party's DPF key.
#[derive(Clone)]
pub struct DpfKey<G: Group> {
    domain: u64,
    nu: u64,
    k_a: SubDpfKey<G::Scalar>,
    k_b: SubDpfKey<G::Scalar>,
    corrections: Arc<Corrections<G>>,
}

impl<G: Group> fmt::Debug for DpfKey<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DpfKey")
            .field("party", &self.party())
            .field("domain", &self.domain)
            .field("nu", &self.nu)
            .finish_non_exhaustive()
    }
}

impl<G: Group> PartialEq for DpfKey<G> {
    fn eq(&self, o: &Self) -> bool {
        self.domain == o.domain
            && self.nu == o.nu
            && self.k_a == o.k_a
            && self.k_b == o.k_b
            && *self.corrections == *o.corrections
    }
}

impl<G: Group> DpfKey<G> {
    pub fn party(&self) -> usize {
        self.k_a.party()
    }

    pub fn threshold(&self) -> Threshold {
        self.k_a.threshold()
    }

    pub fn domain(&self) -> u64 {
        self.domain
    }

    pub fn nu(&self) -> u64 {
        self.nu
    }

    pub fn k_a(&self) -> &SubDpfKey<G::Scalar> {
        &self.k_a
    }

    pub fn k_b(&self) -> &SubDpfKey<G::Scalar> {
        &self.k_b
    }

    pub fn corrections(&self) -> &Corrections<G> {
        &self.corrections
    }

    pub fn is_prss(&self) -> bool {
        self.k_a.view_a().is_prss()
    }

    fn check(&self, x: u64) -> Result<GridPos> {
        if x >= self.domain {
            return Err(Error::domain(x as i64, 0, self.domain as i64));
        }
        grid_pos(x, self.nu)
    }

    fn row_shares(&self, gamma: u64) -> Result<(G::Scalar, G::Scalar)> {
        Ok((subdpf_eval(&self.k_a, gamma)?, subdpf_eval(&self.k_b, gamma)?))
    }

    fn write_body(&self, w: &mut Writer) {
        w.section(|w| self.k_a.write(w));
        w.section(|w| self.k_b.write(w));
    }

    fn read_body(r: &mut Reader<'_>, domain: u64, nu: u64) -> Result<SubKeyPair<G>> {
        let read = |r: &mut Reader<'_>| -> Result<SubDpfKey<G::Scalar>> {
            let mut s = r.section()?;
            let k = SubDpfKey::read(&mut s)?;
            s.finish()?;
            if k.grid().domain() != nu * nu {
                return Err(Error::decode(format!("sub-key domain {} for N={domain}", k.grid().domain())));
            }
            Ok(k)
        };
        let k_a = read(r)?;
        let k_b = read(r)?;
        if k_a.party() != k_b.party() || k_a.threshold() != k_b.threshold() {
            return Err(Error::decode("sub-keys disagree on party or threshold"));
        }
        Ok((k_a, k_b))
    }
}

type SubKeyPair<G> = (SubDpfKey<<G as Group>::Scalar>, SubDpfKey<<G as Group>::Scalar>);

/// One party's DCF key.
#[derive(Clone)]
pub struct DcfKey<G: Group> {
    dpf: DpfKey<G>,
    k_c: SubDcfKey<G::Scalar>,
}

impl<G: Group> fmt::Debug for DcfKey<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DcfKey")
            .field("party", &self.party())
            .field("domain", &self.dpf.domain)
            .field("nu", &self.dpf.nu)
            .finish_non_exhaustive()
    }
}

impl<G: Group> PartialEq for DcfKey<G> {
    fn eq(&self, o: &Self) -> bool {
        self.dpf == o.dpf && self.k_c == o.k_c
    }
}

impl<G: Group> DcfKey<G> {
    pub fn party(&self) -> usize {
        self.dpf.party()
    }

    pub fn threshold(&self) -> Threshold {
        self.dpf.threshold()
    }

    pub fn domain(&self) -> u64 {
        self.dpf.domain
    }

    pub fn nu(&self) -> u64 {
        self.dpf.nu
    }

    pub fn k_c(&self) -> &SubDcfKey<G::Scalar> {
        &self.k_c
    }

    /// The DPF part: sub-keys `k_a`, `k_b` and the correction points.
    pub fn dpf_part(&self) -> &DpfKey<G> {
        &self.dpf
    }

    pub fn corrections(&self) -> &Corrections<G> {
        &self.dpf.corrections
    }

    pub fn u(&self) -> &G::Element {
        self.dpf.corrections.u().expect("DCF keys carry u")
    }

    pub fn is_prss(&self) -> bool {
        self.dpf.is_prss()
    }
}

fn sample_pairs<G: Group, R: RngCore + ?Sized>(
    nu: u64,
    r_inv: &G::Scalar,
    r: &G::Scalar,
    lift: &G::Element,
    lifted: impl Fn(u64) -> bool,
    rng: &mut R,
) -> Result<Vec<(G::Element, G::Element)>> {
    let neg_r_inv = -*r_inv;
    (0..nu)
        .map(|delta| {
            let k: G::Scalar = random_nonzero(rng);
            let g = G::exp_generator(&k);
            // g^{k·(−1/r)} = g_δ^{−1/r}
            let base = G::exp_generator(&(k * neg_r_inv));
            if lifted(delta) {
                return Ok((g, G::op(&base, lift)));
            }
            if !G::is_identity(&G::op(&G::exp(&base, r), &g)) {
                return Err(Error::SelfCheck(format!("h_{delta}^r · g_{delta} is not the identity")));
            }
            Ok((g, base))
        })
        .collect()
}

/// Deals DPF keys for `f(x) = g_β` at `x = α`, identity elsewhere.
pub fn dpf_gen<G: Group, R: RngCore + ?Sized>(
    domain: u64,
    alpha: u64,
    g_beta: &G::Element,
    parties: usize,
    corrupt: usize,
    rng: &mut R,
) -> Result<Vec<DpfKey<G>>> {
    dpf_gen_with(&FssParams::new(domain, parties, corrupt)?, alpha, g_beta, rng)
}

pub fn dpf_gen_with<G: Group, R: RngCore + ?Sized>(
    params: &FssParams,
    alpha: u64,
    g_beta: &G::Element,
    rng: &mut R,
) -> Result<Vec<DpfKey<G>>> {
    let (domain, nu) = (params.domain, params.nu());
    if alpha >= domain {
        return Err(Error::domain(alpha as i64, 0, domain as i64));
    }
    let pos = grid_pos(alpha, nu)?;
    let r: G::Scalar = random_nonzero(rng);
    let r_inv = r.invert().ok_or(Error::InvalidScalar)?;

    let sub = nu * nu;
    let k_a = subdpf_gen_with(sub, pos.gamma, r, params.threshold, params.dealing, rng)?;
    let k_b = subdpf_gen_with(sub, pos.gamma, G::Scalar::one(), params.threshold, params.dealing, rng)?;

    let lift = G::exp(g_beta, &r_inv);
    let pairs = sample_pairs::<G, R>(nu, &r_inv, &r, &lift, |d| d == pos.delta, rng)?;
    let corrections = Arc::new(Corrections::new(pairs, None));
    Ok(k_a
        .into_iter()
        .zip(k_b)
        .map(|(k_a, k_b)| DpfKey { domain, nu, k_a, k_b, corrections: corrections.clone() })
        .collect())
}

/// Deals DCF keys for `f(x) = g_β` when `x ≤ α`, identity otherwise.
pub fn dcf_gen<G: Group, R: RngCore + ?Sized>(
    domain: u64,
    alpha: u64,
    g_beta: &G::Element,
    parties: usize,
    corrupt: usize,
    rng: &mut R,
) -> Result<Vec<DcfKey<G>>> {
    dcf_gen_with(&FssParams::new(domain, parties, corrupt)?, alpha, g_beta, rng)
}

pub fn dcf_gen_with<G: Group, R: RngCore + ?Sized>(
    params: &FssParams,
    alpha: u64,
    g_beta: &G::Element,
    rng: &mut R,
) -> Result<Vec<DcfKey<G>>> {
    let (domain, nu) = (params.domain, params.nu());
    if alpha >= domain {
        return Err(Error::domain(alpha as i64, 0, domain as i64));
    }
    let pos = grid_pos(alpha, nu)?;
    let r: G::Scalar = random_nonzero(rng);
    let r_inv = r.invert().ok_or(Error::InvalidScalar)?;
    let s: G::Scalar = random_nonzero(rng);
    let s_inv = s.invert().ok_or(Error::InvalidScalar)?;

    let (t, dealing) = (params.threshold, params.dealing);
    let sub = nu * nu;
    let k_a = subdpf_gen_with(sub, pos.gamma, r, t, dealing, rng)?;
    let k_b = subdpf_gen_with(sub, pos.gamma, G::Scalar::one(), t, dealing, rng)?;
    let k_c = subdcf_gen_with(sub, pos.gamma as i64 - 1, s, t, dealing, rng)?;

    let lift = G::exp(g_beta, &r_inv);
    let pairs = sample_pairs::<G, R>(nu, &r_inv, &r, &lift, |d| d <= pos.delta, rng)?;
    let u = G::exp(g_beta, &s_inv);
    let corrections = Arc::new(Corrections::new(pairs, Some(u)));
    Ok(k_a
        .into_iter()
        .zip(k_b)
        .zip(k_c)
        .map(|((k_a, k_b), k_c)| DcfKey {
            dpf: DpfKey { domain, nu, k_a, k_b, corrections: corrections.clone() },
            k_c,
        })
        .collect())
}

/// `h_{δ′}^{⟦s_a⟧} · g_{δ′}^{⟦s_b⟧}` at `x = (γ′, δ′)`.
pub fn dpf_eval<G: Group>(key: &DpfKey<G>, x: u64) -> Result<G::Element> {
    let pos = key.check(x)?;
    let (sa, sb) = key.row_shares(pos.gamma)?;
    let (g, h) = key.corrections.pairs[pos.delta as usize];
    Ok(G::multi_exp(&[(h, sa), (g, sb)]))
}

/// As [`dpf_eval`] times `u^{⟦s_c⟧}`.
pub fn dcf_eval<G: Group>(key: &DcfKey<G>, x: u64) -> Result<G::Element> {
    let pos = key.dpf.check(x)?;
    let (sa, sb) = key.dpf.row_shares(pos.gamma)?;
    let sc = subdcf_eval(&key.k_c, pos.gamma)?;
    let (g, h) = key.dpf.corrections.pairs[pos.delta as usize];
    Ok(G::multi_exp(&[(h, sa), (g, sb), (*key.u(), sc)]))
}

fn eval_range_impl<G: Group>(
    dpf: &DpfKey<G>,
    k_c: Option<&SubDcfKey<G::Scalar>>,
    xs: Range<u64>,
) -> Result<Vec<G::Element>> {
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    dpf.check(xs.end - 1)?;
    let corr = &*dpf.corrections;
    let mut out = Vec::with_capacity((xs.end - xs.start) as usize);
    let mut row = None;
    let mut row_acc = G::identity();
    let mut shares = (G::Scalar::zero(), G::Scalar::zero());
    for x in xs {
        let pos = grid_pos(x, dpf.nu)?;
        if row != Some(pos.gamma) {
            row = Some(pos.gamma);
            shares = dpf.row_shares(pos.gamma)?;
            row_acc = match k_c {
                Some(k_c) => corr.u_table().exp(&subdcf_eval(k_c, pos.gamma)?),
                None => G::identity(),
            };
        }
        let (gt, ht) = corr.column_tables(pos.delta as usize);
        let mut acc = row_acc;
        ht.accumulate(&mut acc, &shares.0);
        gt.accumulate(&mut acc, &shares.1);
        out.push(acc);
    }
    Ok(out)
}

impl<G: Group> DpfKey<G> {
    pub fn eval(&self, x: u64) -> Result<G::Element> {
        dpf_eval(self, x)
    }

    /// Evaluates a contiguous range, caching per-row sub-scheme shares and
    /// per-column comb tables (shared by every key of the same Gen call).
    pub fn eval_range(&self, xs: Range<u64>) -> Result<Vec<G::Element>> {
        eval_range_impl(self, None, xs)
    }
}

impl<G: Group> DcfKey<G> {
    pub fn eval(&self, x: u64) -> Result<G::Element> {
        dcf_eval(self, x)
    }

    pub fn eval_range(&self, xs: Range<u64>) -> Result<Vec<G::Element>> {
        eval_range_impl(&self.dpf, Some(&self.k_c), xs)
    }
}

/// Product of the parties' multiplicative shares.
pub fn ddh_decode<G: Group>(shares: &[G::Element]) -> G::Element {
    shares.iter().fold(G::identity(), |acc, s| G::op(&acc, s))
}

/// Either kind of key, as stored in a key file.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyKey<G: Group> {
    Dpf(DpfKey<G>),
    Dcf(DcfKey<G>),
}

impl<G: Group> AnyKey<G> {
    pub fn scheme(&self) -> Scheme {
        match self {
            AnyKey::Dpf(_) => Scheme::Dpf,
            AnyKey::Dcf(_) => Scheme::Dcf,
        }
    }

    fn dpf(&self) -> &DpfKey<G> {
        match self {
            AnyKey::Dpf(k) => k,
            AnyKey::Dcf(k) => &k.dpf,
        }
    }

    pub fn party(&self) -> usize {
        self.dpf().party()
    }

    pub fn threshold(&self) -> Threshold {
        self.dpf().threshold()
    }

    pub fn domain(&self) -> u64 {
        self.dpf().domain
    }

    pub fn nu(&self) -> u64 {
        self.dpf().nu
    }

    pub fn is_prss(&self) -> bool {
        self.dpf().is_prss()
    }

    pub fn corrections(&self) -> &Corrections<G> {
        &self.dpf().corrections
    }

    pub fn eval(&self, x: u64) -> Result<G::Element> {
        match self {
            AnyKey::Dpf(k) => k.eval(x),
            AnyKey::Dcf(k) => k.eval(x),
        }
    }

    pub fn eval_range(&self, xs: Range<u64>) -> Result<Vec<G::Element>> {
        match self {
            AnyKey::Dpf(k) => k.eval_range(xs),
            AnyKey::Dcf(k) => k.eval_range(xs),
        }
    }

    /// Key body: sub-key sections, correction points, then `u` for DCF.
    pub fn write_body(&self, w: &mut Writer) {
        self.dpf().write_body(w);
        if let AnyKey::Dcf(k) = self {
            w.section(|w| k.k_c.write(w));
        }
        self.corrections().write(w);
    }

    pub fn body_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write_body(&mut w);
        w.into_bytes()
    }
}

/// Self-describing fixed-size header of a key file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyHeader {
    pub group: GroupId,
    pub scheme: Scheme,
    pub domain: u64,
    pub parties: usize,
    pub corrupt: usize,
    pub nu: u64,
    pub party: usize,
    pub prss: bool,
    pub encoding: EncodingKind,
    /// BSGS bound for the exponent codec, padding counter space for the point codec.
    pub codec_param: u64,
}

impl KeyHeader {
    pub fn write(&self, w: &mut Writer) {
        w.bytes(KEY_MAGIC)
            .u8(FORMAT_VERSION)
            .u8(self.group as u8)
            .u8(self.scheme.tag())
            .u64(self.domain)
            .u8(self.parties as u8)
            .u8(self.corrupt as u8)
            .u64(self.nu)
            .u8(self.party as u8)
            .u8(self.prss as u8)
            .u8(self.encoding.tag())
            .u64(self.codec_param);
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        if r.take(5)? != KEY_MAGIC {
            return Err(Error::decode("not a key file (bad magic)"));
        }
        let version = r.u8()?;
        if version != FORMAT_VERSION {
            return Err(Error::decode(format!("unsupported key format version {version}")));
        }
        let group = GroupId::from_u8(r.u8()?)?;
        let scheme = Scheme::from_tag(r.u8()?)?;
        let domain = r.u64()?;
        let parties = r.u8()? as usize;
        let corrupt = r.u8()? as usize;
        let nu = r.u64()?;
        let party = r.u8()? as usize;
        let prss = match r.u8()? {
            0 => false,
            1 => true,
            f => return Err(Error::decode(format!("bad PRSS flag {f}"))),
        };
        let encoding = EncodingKind::from_tag(r.u8()?)?;
        let codec_param = r.u64()?;
        if domain == 0 || nu != cube_width(domain) {
            return Err(Error::decode(format!("inconsistent N={domain}, nu={nu}")));
        }
        Threshold::new(parties, corrupt).map_err(|e| Error::decode(e.to_string()))?;
        if party >= parties {
            return Err(Error::decode(format!("party index {party} out of range")));
        }
        Ok(KeyHeader { group, scheme, domain, parties, corrupt, nu, party, prss, encoding, codec_param })
    }

    /// Reads only the header, e.g. to pick the group before a full parse.
    pub fn peek(bytes: &[u8]) -> Result<Self> {
        Self::read(&mut Reader::new(bytes))
    }
}

pub fn key_header<G: Group>(key: &AnyKey<G>, encoding: EncodingKind, codec_param: u64) -> KeyHeader {
    let t = key.threshold();
    KeyHeader {
        group: G::ID,
        scheme: key.scheme(),
        domain: key.domain(),
        parties: t.parties,
        corrupt: t.corrupt,
        nu: key.nu(),
        party: key.party(),
        prss: key.is_prss(),
        encoding,
        codec_param,
    }
}

pub fn write_key_file<G: Group>(key: &AnyKey<G>, encoding: EncodingKind, codec_param: u64) -> Vec<u8> {
    let mut w = Writer::new();
    key_header(key, encoding, codec_param).write(&mut w);
    key.write_body(&mut w);
    w.into_bytes()
}

pub fn read_key_file<G: Group>(bytes: &[u8]) -> Result<(KeyHeader, AnyKey<G>)> {
    let mut r = Reader::new(bytes);
    let header = KeyHeader::read(&mut r)?;
    if header.group != G::ID {
        return Err(Error::decode(format!("key is for group {}, expected {}", header.group, G::ID)));
    }
    let (k_a, k_b) = DpfKey::<G>::read_body(&mut r, header.domain, header.nu)?;
    let k_c = match header.scheme {
        Scheme::Dpf => None,
        Scheme::Dcf => {
            let mut s = r.section()?;
            let k = SubDcfKey::read(&mut s)?;
            s.finish()?;
            if k.party() != k_a.party() || k.grid().domain() != header.nu * header.nu {
                return Err(Error::decode("sub-DCF key does not match"));
            }
            Some(k)
        }
    };
    let corrections = Corrections::read(&mut r, header.nu, k_c.is_some())?;
    r.finish()?;
    let t = k_a.threshold();
    if k_a.party() != header.party
        || t.parties != header.parties
        || t.corrupt != header.corrupt
        || k_a.view_a().is_prss() != header.prss
    {
        return Err(Error::decode("key body disagrees with header"));
    }
    let dpf = DpfKey { domain: header.domain, nu: header.nu, k_a, k_b, corrections: Arc::new(corrections) };
    let key = match k_c {
        None => AnyKey::Dpf(dpf),
        Some(k_c) => AnyKey::Dcf(DcfKey { dpf, k_c }),
    };
    Ok((header, key))
}

/// Evaluation shares of one party at a list of points.
#[derive(Clone, Debug, PartialEq)]
pub struct ShareFile<G: Group> {
    pub scheme: Scheme,
    pub domain: u64,
    pub parties: usize,
    pub corrupt: usize,
    pub party: usize,
    pub encoding: EncodingKind,
    pub codec_param: u64,
    /// Identifies the Gen invocation; equal for all parties' shares.
    pub fingerprint: [u8; FINGERPRINT_BYTES],
    pub points: Vec<(u64, G::Element)>,
}

impl<G: Group> ShareFile<G> {
    pub fn from_key(header: &KeyHeader, key: &AnyKey<G>, points: Vec<(u64, G::Element)>) -> Self {
        ShareFile {
            scheme: header.scheme,
            domain: header.domain,
            parties: header.parties,
            corrupt: header.corrupt,
            party: header.party,
            encoding: header.encoding,
            codec_param: header.codec_param,
            fingerprint: key.corrections().fingerprint(),
            points,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.bytes(SHARE_MAGIC)
            .u8(FORMAT_VERSION)
            .u8(G::ID as u8)
            .u8(self.scheme.tag())
            .u64(self.domain)
            .u8(self.parties as u8)
            .u8(self.corrupt as u8)
            .u8(self.party as u8)
            .u8(self.encoding.tag())
            .u64(self.codec_param)
            .bytes(&self.fingerprint)
            .u64(self.points.len() as u64);
        for (x, e) in &self.points {
            w.u64(*x);
            G::write_element(e, w.buf_mut());
        }
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        if r.take(5)? != SHARE_MAGIC {
            return Err(Error::decode("not a share file (bad magic)"));
        }
        let version = r.u8()?;
        if version != FORMAT_VERSION {
            return Err(Error::decode(format!("unsupported share format version {version}")));
        }
        let group = GroupId::from_u8(r.u8()?)?;
        if group != G::ID {
            return Err(Error::decode(format!("shares are for group {group}, expected {}", G::ID)));
        }
        let scheme = Scheme::from_tag(r.u8()?)?;
        let domain = r.u64()?;
        let parties = r.u8()? as usize;
        let corrupt = r.u8()? as usize;
        let party = r.u8()? as usize;
        let encoding = EncodingKind::from_tag(r.u8()?)?;
        let codec_param = r.u64()?;
        let fingerprint = r.take(FINGERPRINT_BYTES)?.try_into().unwrap();
        let count = r.u64()?;
        let entry = 8 + G::ELEMENT_BYTES as u64;
        if count.checked_mul(entry) != Some(r.remaining() as u64) {
            return Err(Error::decode("share count does not match file length"));
        }
        let points = (0..count)
            .map(|_| Ok((r.u64()?, G::read_element(r.take(G::ELEMENT_BYTES)?)?)))
            .collect::<Result<_>>()?;
        Ok(ShareFile { scheme, domain, parties, corrupt, party, encoding, codec_param, fingerprint, points })
    }

    pub fn peek_group(bytes: &[u8]) -> Result<GroupId> {
        if bytes.len() < 7 || &bytes[..5] != SHARE_MAGIC {
            return Err(Error::decode("not a share file (bad magic)"));
        }
        GroupId::from_u8(bytes[6])
    }
}

/// Checks that `files` are the shares of all `p` parties of one Gen call at
/// the same points, and multiplies them pointwise.
pub fn combine_shares<G: Group>(files: &[ShareFile<G>]) -> Result<Vec<(u64, G::Element)>> {
    let first = files.first().ok_or_else(|| Error::mismatch("no share files"))?;
    if files.len() != first.parties {
        return Err(Error::mismatch(format!("need {} share files, got {}", first.parties, files.len())));
    }
    let mut seen = vec![false; first.parties];
    for f in files {
        if f.fingerprint != first.fingerprint
            || f.scheme != first.scheme
            || f.domain != first.domain
            || f.parties != first.parties
            || f.corrupt != first.corrupt
            || f.encoding != first.encoding
            || f.codec_param != first.codec_param
        {
            return Err(Error::mismatch("share files come from different key generations"));
        }
        if f.points.len() != first.points.len()
            || f.points.iter().zip(&first.points).any(|(a, b)| a.0 != b.0)
        {
            return Err(Error::mismatch("share files cover different points"));
        }
        if std::mem::replace(&mut seen[f.party], true) {
            return Err(Error::mismatch(format!("duplicate shares for party {}", f.party)));
        }
    }
    Ok((0..first.points.len())
        .map(|j| {
            let x = first.points[j].0;
            let shares: Vec<_> = files.iter().map(|f| f.points[j].1).collect();
            (x, ddh_decode::<G>(&shares))
        })
        .collect())
}
