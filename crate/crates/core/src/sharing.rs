//! Replicated (CNF) secret sharing with local multiplication and PRSS seed
//! compression.
//!
//! A secret vector is split into one additive component `v_T` per `m`-subset
//! `T` of the `p` parties; party `i` holds every `v_T` with `i ∉ T`. Parties
//! are 0-based throughout. Subsets are enumerated in lexicographic order of
//! their sorted member tuples, and that order is part of the wire format.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand_core::RngCore;
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::wire::{Reader, Writer};

/// Upper bound on the number of parties (subsets are `u32` bitmasks).
pub const MAX_PARTIES: usize = 32;

/// Version tag of the seed-expansion PRG.
pub const PRG_VERSION: u8 = 1;

/// Seed length of the PRSS PRG in bytes.
pub const SEED_BYTES: usize = 32;

pub type Seed = [u8; SEED_BYTES];

/// A subset of parties stored as a bitmask (bit `i` set iff party `i ∈ T`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetIndex(u32);

impl SubsetIndex {
    pub fn from_members(members: &[usize]) -> Self {
        SubsetIndex(members.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn contains(self, party: usize) -> bool {
        self.0 >> party & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn members(self) -> Vec<usize> {
        (0..MAX_PARTIES).filter(|&i| self.contains(i)).collect()
    }
}

impl fmt::Debug for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members()).finish()
    }
}

/// All `m`-subsets of `{0, …, p−1}` in lexicographic order.
pub fn enumerate_subsets(p: usize, m: usize) -> Vec<SubsetIndex> {
    fn rec(start: usize, p: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<SubsetIndex>) {
        if left == 0 {
            out.push(SubsetIndex::from_members(cur));
            return;
        }
        for i in start..=p - left {
            cur.push(i);
            rec(i + 1, p, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m <= p {
        rec(0, p, m, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Party count `p` and corruption bound `m` with `2m < p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Threshold {
    pub parties: usize,
    pub corrupt: usize,
}

impl Threshold {
    pub fn new(parties: usize, corrupt: usize) -> Result<Self> {
        if 2 * corrupt >= parties {
            return Err(Error::MajorityViolation { parties, corrupt });
        }
        if parties > MAX_PARTIES {
            return Err(Error::InvalidParameters(format!(
                "at most {MAX_PARTIES} parties supported, got {parties}"
            )));
        }
        Ok(Threshold { parties, corrupt })
    }

    /// Default honest-majority bound `⌊(p−1)/2⌋`.
    pub fn honest_majority(parties: usize) -> Result<Self> {
        Self::new(parties, parties.saturating_sub(1) / 2)
    }

    pub fn num_subsets(self) -> usize {
        binomial(self.parties, self.corrupt)
    }

    /// Number of components each party holds, `C(p−1, m)`.
    pub fn components_per_party(self) -> usize {
        binomial(self.parties - 1, self.corrupt)
    }

    pub fn layout(self) -> Arc<CnfLayout> {
        CnfLayout::get(self)
    }
}

/// Smallest party outside `mask`.
fn smallest_excluded(mask: u32) -> usize {
    (!mask).trailing_zeros() as usize
}

/// Precomputed subset ordering and per-party work assignment for one `(p, m)`.
#[derive(Debug)]
pub struct CnfLayout {
    threshold: Threshold,
    subsets: Vec<SubsetIndex>,
    // subset ranks held by each party, ascending
    held: Vec<Vec<usize>>,
    // per party: (local index, local index) pairs it multiplies
    mul_pairs: Vec<Vec<(usize, usize)>>,
    // per party: local indices it sums when collapsing
    collapse: Vec<Vec<usize>>,
}

impl CnfLayout {
    fn get(threshold: Threshold) -> Arc<CnfLayout> {
        static CACHE: OnceLock<Mutex<HashMap<Threshold, Arc<CnfLayout>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut cache = cache.lock().unwrap_or_else(|e| e.into_inner());
        cache
            .entry(threshold)
            .or_insert_with(|| Arc::new(CnfLayout::build(threshold)))
            .clone()
    }

    fn build(threshold: Threshold) -> CnfLayout {
        let p = threshold.parties;
        let subsets = enumerate_subsets(p, threshold.corrupt);
        let held: Vec<Vec<usize>> = (0..p)
            .map(|i| (0..subsets.len()).filter(|&r| !subsets[r].contains(i)).collect())
            .collect();
        let local_of = |party: usize, rank: usize| held[party].binary_search(&rank).unwrap();

        let mut mul_pairs = vec![Vec::new(); p];
        for (r1, t1) in subsets.iter().enumerate() {
            for (r2, t2) in subsets.iter().enumerate() {
                let owner = smallest_excluded(t1.0 | t2.0);
                mul_pairs[owner].push((local_of(owner, r1), local_of(owner, r2)));
            }
        }
        let mut collapse = vec![Vec::new(); p];
        for (r, t) in subsets.iter().enumerate() {
            let owner = smallest_excluded(t.0);
            collapse[owner].push(local_of(owner, r));
        }
        CnfLayout { threshold, subsets, held, mul_pairs, collapse }
    }

    pub fn threshold(&self) -> Threshold {
        self.threshold
    }

    pub fn subsets(&self) -> &[SubsetIndex] {
        &self.subsets
    }

    /// Rank of the designated subset `T₀` (lexicographically last).
    pub fn designated(&self) -> usize {
        self.subsets.len() - 1
    }

    /// Subset ranks held by `party`, in canonical order.
    pub fn held(&self, party: usize) -> &[usize] {
        &self.held[party]
    }

    /// Pairs `(T₁, T₂)` assigned to `party`, as subset ranks.
    pub fn assigned_pairs(&self, party: usize) -> Vec<(usize, usize)> {
        let held = &self.held[party];
        self.mul_pairs[party].iter().map(|&(a, b)| (held[a], held[b])).collect()
    }

    /// Subsets assigned to `party` for collapsing, as subset ranks.
    pub fn assigned_subsets(&self, party: usize) -> Vec<usize> {
        self.collapse[party].iter().map(|&l| self.held[party][l]).collect()
    }
}

/// The full dealer-side CNF sharing: one component per subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfSharing<F> {
    threshold: Threshold,
    len: usize,
    components: Vec<Vec<F>>,
}

impl<F: PrimeField> CnfSharing<F> {
    /// Shares `secret` using `masks` for every subset except `T₀`, in canonical
    /// order; the `T₀` component is fixed so the components sum to `secret`.
    pub fn from_masks(secret: &[F], threshold: Threshold, masks: Vec<Vec<F>>) -> Result<Self> {
        let n = threshold.num_subsets();
        if masks.len() != n - 1 {
            return Err(Error::mismatch(format!("expected {} masks, got {}", n - 1, masks.len())));
        }
        if let Some(bad) = masks.iter().find(|v| v.len() != secret.len()) {
            return Err(Error::mismatch(format!(
                "mask length {} differs from secret length {}",
                bad.len(),
                secret.len()
            )));
        }
        let mut last = secret.to_vec();
        for mask in &masks {
            for (acc, v) in last.iter_mut().zip(mask) {
                *acc -= *v;
            }
        }
        let mut components = masks;
        components.push(last);
        Ok(CnfSharing { threshold, len: secret.len(), components })
    }

    pub fn random<R: RngCore + ?Sized>(secret: &[F], threshold: Threshold, rng: &mut R) -> Self {
        let masks = (1..threshold.num_subsets())
            .map(|_| (0..secret.len()).map(|_| F::random(rng)).collect())
            .collect();
        Self::from_masks(secret, threshold, masks).expect("mask shapes are consistent")
    }

    pub fn threshold(&self) -> Threshold {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Component `v_T` for the subset of the given rank.
    pub fn component(&self, rank: usize) -> &[F] {
        &self.components[rank]
    }

    pub fn secret(&self) -> Vec<F> {
        let mut out = vec![F::zero(); self.len];
        for c in &self.components {
            for (acc, v) in out.iter_mut().zip(c) {
                *acc += *v;
            }
        }
        out
    }

    pub fn view(&self, party: usize) -> CnfPartyView<F> {
        let layout = self.threshold.layout();
        let components = layout.held(party).iter().map(|&r| self.components[r].clone()).collect();
        CnfPartyView { party, layout, len: self.len, components, seeds: None }
    }

    pub fn views(&self) -> Vec<CnfPartyView<F>> {
        (0..self.threshold.parties).map(|i| self.view(i)).collect()
    }
}

/// One party's share: the components `{v_T : party ∉ T}` in canonical order.
#[derive(Clone)]
pub struct CnfPartyView<F> {
    party: usize,
    layout: Arc<CnfLayout>,
    len: usize,
    components: Vec<Vec<F>>,
    // per held component, the PRSS seed it was expanded from (None = explicit)
    seeds: Option<Vec<Option<Seed>>>,
}

impl<F: fmt::Debug> fmt::Debug for CnfPartyView<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CnfPartyView")
            .field("party", &self.party)
            .field("threshold", &self.layout.threshold)
            .field("len", &self.len)
            .field("components", &self.components)
            .field("prss", &self.seeds.is_some())
            .finish()
    }
}

impl<F: PartialEq> PartialEq for CnfPartyView<F> {
    fn eq(&self, o: &Self) -> bool {
        self.party == o.party
            && self.layout.threshold == o.layout.threshold
            && self.len == o.len
            && self.components == o.components
    }
}

impl<F: PrimeField> CnfPartyView<F> {
    pub fn party(&self) -> usize {
        self.party
    }

    pub fn threshold(&self) -> Threshold {
        self.layout.threshold
    }

    pub fn layout(&self) -> &CnfLayout {
        &self.layout
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Held components in canonical subset order.
    pub fn components(&self) -> &[Vec<F>] {
        &self.components
    }

    /// The component for subset rank `rank`, if this party holds it.
    pub fn component(&self, rank: usize) -> Option<&[F]> {
        let local = self.layout.held(self.party).binary_search(&rank).ok()?;
        Some(&self.components[local])
    }

    pub fn is_prss(&self) -> bool {
        self.seeds.is_some()
    }

    /// Replaces component data in place (used by tamper tests and decoders).
    pub fn components_mut(&mut self) -> &mut [Vec<F>] {
        self.seeds = None;
        &mut self.components
    }

    /// The compressed form, if this view was produced by PRSS.
    pub fn compressed(&self) -> Option<PrssCompressedView<F>> {
        let seeds = self.seeds.as_ref()?;
        let payloads = seeds
            .iter()
            .zip(&self.components)
            .map(|(s, c)| match s {
                Some(seed) => PrssPayload::Seed(*seed),
                None => PrssPayload::Explicit(c.clone()),
            })
            .collect();
        Some(PrssCompressedView {
            party: self.party,
            threshold: self.threshold(),
            len: self.len,
            prg_version: PRG_VERSION,
            payloads,
        })
    }

    /// Canonical serialization: PRSS views are written compressed.
    pub fn write(&self, w: &mut Writer) {
        match self.compressed() {
            Some(c) => c.write(w),
            None => {
                write_view_header(w, 0, self.party, self.threshold(), self.len);
                for c in &self.components {
                    for v in c {
                        w.scalar(v);
                    }
                }
            }
        }
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let (prss, party, threshold, len) = read_view_header(r)?;
        if prss {
            return prss_expand(&PrssCompressedView::read_body(r, party, threshold, len)?);
        }
        let layout = threshold.layout();
        let components = (0..layout.held(party).len())
            .map(|_| (0..len).map(|_| r.scalar()).collect::<Result<Vec<F>>>())
            .collect::<Result<_>>()?;
        Ok(CnfPartyView { party, layout, len, components, seeds: None })
    }

    fn same_shape(&self, o: &Self) -> bool {
        self.party == o.party && self.layout.threshold == o.layout.threshold
    }
}

fn write_view_header(w: &mut Writer, prss: u8, party: usize, t: Threshold, len: usize) {
    w.u8(prss).u8(party as u8).u8(t.parties as u8).u8(t.corrupt as u8).u32(len as u32);
}

fn read_view_header(r: &mut Reader<'_>) -> Result<(bool, usize, Threshold, usize)> {
    let prss = match r.u8()? {
        0 => false,
        1 => true,
        t => return Err(Error::decode(format!("unknown share encoding tag {t}"))),
    };
    let party = r.u8()? as usize;
    let parties = r.u8()? as usize;
    let corrupt = r.u8()? as usize;
    let threshold =
        Threshold::new(parties, corrupt).map_err(|e| Error::decode(format!("bad threshold: {e}")))?;
    if party >= parties {
        return Err(Error::decode(format!("party index {party} out of range")));
    }
    let len = r.u32()? as usize;
    Ok((prss, party, threshold, len))
}

/// Dealer side: splits `secret` and hands every party its view.
pub fn cnf_share<F: PrimeField, R: RngCore + ?Sized>(
    secret: &[F],
    parties: usize,
    corrupt: usize,
    rng: &mut R,
) -> Result<Vec<CnfPartyView<F>>> {
    let threshold = Threshold::new(parties, corrupt)?;
    Ok(CnfSharing::random(secret, threshold, rng).views())
}

/// Reconstructs the secret from views that jointly cover every subset.
pub fn cnf_open<F: PrimeField>(views: &[CnfPartyView<F>]) -> Result<Vec<F>> {
    let first = views.first().ok_or(Error::IncompleteShares(0))?;
    let threshold = first.threshold();
    let len = first.len;
    if let Some(v) = views.iter().find(|v| v.threshold() != threshold || v.len != len) {
        return Err(Error::mismatch(format!(
            "view of party {} has shape {:?}/{} but expected {:?}/{}",
            v.party, v.layout.threshold, v.len, threshold, len
        )));
    }
    let layout = &first.layout;
    let mut components: Vec<Option<&Vec<F>>> = vec![None; layout.subsets.len()];
    for view in views {
        for (&rank, comp) in layout.held(view.party).iter().zip(&view.components) {
            match components[rank] {
                None => components[rank] = Some(comp),
                Some(prev) if prev != comp => return Err(Error::InconsistentShares(rank)),
                Some(_) => {}
            }
        }
    }
    let mut out = vec![F::zero(); len];
    for (rank, comp) in components.iter().enumerate() {
        let comp = comp.ok_or(Error::IncompleteShares(rank))?;
        for (acc, v) in out.iter_mut().zip(comp) {
            *acc += *v;
        }
    }
    Ok(out)
}

/// This party's additive share of `a[idx_a] · b[idx_b]`.
pub fn cnf_mul_local<F: PrimeField>(
    view_a: &CnfPartyView<F>,
    idx_a: usize,
    view_b: &CnfPartyView<F>,
    idx_b: usize,
) -> Result<F> {
    if !view_a.same_shape(view_b) {
        return Err(Error::mismatch(format!(
            "views of party {} ({:?}) and party {} ({:?})",
            view_a.party,
            view_a.threshold(),
            view_b.party,
            view_b.threshold()
        )));
    }
    if idx_a >= view_a.len || idx_b >= view_b.len {
        return Err(Error::mismatch(format!(
            "index ({idx_a}, {idx_b}) outside vectors of length ({}, {})",
            view_a.len, view_b.len
        )));
    }
    let (a, b) = (&view_a.components, &view_b.components);
    let mut acc = F::zero();
    for &(i, j) in &view_a.layout.mul_pairs[view_a.party] {
        acc += a[i][idx_a] * b[j][idx_b];
    }
    Ok(acc)
}

/// This party's additive share of `secret[idx]`.
pub fn cnf_collapse_local<F: PrimeField>(view: &CnfPartyView<F>, idx: usize) -> F {
    let mut acc = F::zero();
    for &l in &view.layout.collapse[view.party] {
        acc += view.components[l][idx];
    }
    acc
}

/// Per-subset content of a compressed view.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrssPayload<F> {
    Seed(Seed),
    Explicit(Vec<F>),
}

/// A party's view with every non-designated component replaced by its seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrssCompressedView<F> {
    pub party: usize,
    pub threshold: Threshold,
    pub len: usize,
    pub prg_version: u8,
    /// One entry per held subset, canonical order.
    pub payloads: Vec<PrssPayload<F>>,
}

impl<F: PrimeField> PrssCompressedView<F> {
    pub fn write(&self, w: &mut Writer) {
        write_view_header(w, 1, self.party, self.threshold, self.len);
        w.u8(self.prg_version);
        for p in &self.payloads {
            match p {
                PrssPayload::Seed(s) => {
                    w.u8(0).bytes(s);
                }
                PrssPayload::Explicit(v) => {
                    w.u8(1);
                    for x in v {
                        w.scalar(x);
                    }
                }
            }
        }
    }

    fn read_body(r: &mut Reader<'_>, party: usize, threshold: Threshold, len: usize) -> Result<Self> {
        let prg_version = r.u8()?;
        let count = threshold.components_per_party();
        let payloads = (0..count)
            .map(|_| match r.u8()? {
                0 => Ok(PrssPayload::Seed(r.take(SEED_BYTES)?.try_into().unwrap())),
                1 => Ok(PrssPayload::Explicit((0..len).map(|_| r.scalar()).collect::<Result<_>>()?)),
                t => Err(Error::decode(format!("unknown payload tag {t}"))),
            })
            .collect::<Result<_>>()?;
        Ok(PrssCompressedView { party, threshold, len, prg_version, payloads })
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let (prss, party, threshold, len) = read_view_header(r)?;
        if !prss {
            return Err(Error::decode("view is not PRSS-compressed"));
        }
        Self::read_body(r, party, threshold, len)
    }
}

/// Expands a seed into `len` field elements: element `j` is the wide
/// reduction of 64 bytes of SHAKE256(seed ‖ j), with `j` as a `u64` LE.
pub fn prg_expand<F: PrimeField>(seed: &Seed, len: usize) -> Vec<F> {
    (0..len as u64)
        .map(|j| {
            let mut h = Shake256::default();
            h.update(seed);
            h.update(&j.to_le_bytes());
            let mut wide = [0u8; 64];
            h.finalize_xof().read(&mut wide);
            F::from_uniform_bytes(&wide)
        })
        .collect()
}

/// Deals a fresh PRSS sharing of `secret`: every component except `T₀` is
/// the expansion of a random seed. Returns the expanded sharing and the
/// compressed per-party views.
pub fn prss_share<F: PrimeField, R: RngCore + ?Sized>(
    secret: &[F],
    threshold: Threshold,
    rng: &mut R,
) -> (CnfSharing<F>, Vec<PrssCompressedView<F>>) {
    let seeds: Vec<Seed> = (1..threshold.num_subsets())
        .map(|_| {
            let mut s = [0u8; SEED_BYTES];
            rng.fill_bytes(&mut s);
            s
        })
        .collect();
    let masks = seeds.iter().map(|s| prg_expand(s, secret.len())).collect();
    let sharing = CnfSharing::from_masks(secret, threshold, masks).expect("mask shapes are consistent");
    let layout = threshold.layout();
    let t0 = layout.designated();
    let views = (0..threshold.parties)
        .map(|party| PrssCompressedView {
            party,
            threshold,
            len: secret.len(),
            prg_version: PRG_VERSION,
            payloads: layout
                .held(party)
                .iter()
                .map(|&r| {
                    if r == t0 {
                        PrssPayload::Explicit(sharing.component(r).to_vec())
                    } else {
                        PrssPayload::Seed(seeds[r])
                    }
                })
                .collect(),
        })
        .collect();
    (sharing, views)
}

/// Re-shares the secret of `sharing` under PRSS. The components change; the
/// secret does not.
pub fn prss_compress<F: PrimeField, R: RngCore + ?Sized>(
    sharing: &CnfSharing<F>,
    rng: &mut R,
) -> Vec<PrssCompressedView<F>> {
    prss_share(&sharing.secret(), sharing.threshold, rng).1
}

/// Deterministically expands a compressed view back to a full party view.
pub fn prss_expand<F: PrimeField>(view: &PrssCompressedView<F>) -> Result<CnfPartyView<F>> {
    if view.prg_version != PRG_VERSION {
        return Err(Error::decode(format!("unknown PRG version {}", view.prg_version)));
    }
    let layout = view.threshold.layout();
    if view.party >= view.threshold.parties {
        return Err(Error::decode(format!("party index {} out of range", view.party)));
    }
    let held = layout.held(view.party);
    if view.payloads.len() != held.len() {
        return Err(Error::decode(format!(
            "expected {} payloads, got {}",
            held.len(),
            view.payloads.len()
        )));
    }
    let t0 = layout.designated();
    let mut components = Vec::with_capacity(held.len());
    let mut seeds = Vec::with_capacity(held.len());
    for (&rank, payload) in held.iter().zip(&view.payloads) {
        match payload {
            PrssPayload::Seed(s) if rank != t0 => {
                components.push(prg_expand(s, view.len));
                seeds.push(Some(*s));
            }
            PrssPayload::Explicit(v) if rank == t0 && v.len() == view.len => {
                components.push(v.clone());
                seeds.push(None);
            }
            _ => return Err(Error::decode(format!("malformed payload for subset rank {rank}"))),
        }
    }
    Ok(CnfPartyView {
        party: view.party,
        layout,
        len: view.len,
        components,
        seeds: Some(seeds),
    })
}

/// Additive reconstruction `Σᵢ shares[i]`.
pub fn additive_decode<F: PrimeField>(shares: &[F]) -> F {
    shares.iter().fold(F::zero(), |acc, s| acc + *s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::F5;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn f5(v: &[u64]) -> Vec<F5> {
        v.iter().map(|&x| F5::from_u64(x)).collect()
    }

    #[test]
    fn subset_enumeration_is_lexicographic() {
        let s: Vec<_> = enumerate_subsets(4, 2).iter().map(|t| t.members()).collect();
        assert_eq!(
            s,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(enumerate_subsets(5, 0), vec![SubsetIndex(0)]);
        for p in 1..=10 {
            for m in 0..=p {
                assert_eq!(enumerate_subsets(p, m).len(), binomial(p, m));
            }
        }
    }

    #[test]
    fn majority_is_enforced() {
        assert!(Threshold::new(3, 1).is_ok());
        assert_eq!(
            Threshold::new(4, 2),
            Err(Error::MajorityViolation { parties: 4, corrupt: 2 })
        );
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        assert!(matches!(
            cnf_share(&f5(&[1]), 2, 1, &mut rng),
            Err(Error::MajorityViolation { .. })
        ));
    }

    #[test]
    fn three_party_example() {
        // parties are 0-based here: {1},{2},{3} become {0},{1},{2}
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let views = cnf_share(&f5(&[2]), 3, 1, &mut rng).unwrap();
        let layout = views[0].layout();
        assert_eq!(layout.held(0), &[1, 2]);
        assert_eq!(cnf_open(&views).unwrap(), f5(&[2]));

        let pairs = |party| layout.assigned_pairs(party);
        assert!(pairs(2).contains(&(0, 1)));
        assert!(pairs(0).contains(&(1, 2)));
        assert_eq!(layout.assigned_subsets(1), vec![0]);
    }

    #[test]
    fn degenerate_replication() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let secret = f5(&[3, 4]);
        let views = cnf_share(&secret, 3, 0, &mut rng).unwrap();
        for v in &views {
            assert_eq!(v.components(), std::slice::from_ref(&secret));
        }
        let collapsed: Vec<_> = views.iter().map(|v| cnf_collapse_local(v, 1)).collect();
        assert_eq!(collapsed, f5(&[4, 0, 0]));
    }

    #[test]
    fn components_per_party() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let views = cnf_share(&f5(&[1, 2, 3]), 5, 2, &mut rng).unwrap();
        assert!(views.iter().all(|v| v.components().len() == 6));
    }

    #[test]
    fn any_honest_quorum_reconstructs() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let secret = f5(&[1, 4, 0, 2]);
        let views = cnf_share(&secret, 5, 2, &mut rng).unwrap();
        for quorum in enumerate_subsets(5, 3) {
            let picked: Vec<_> = quorum.members().iter().map(|&i| views[i].clone()).collect();
            assert_eq!(cnf_open(&picked).unwrap(), secret);
        }
        assert!(matches!(cnf_open(&views[..2]), Err(Error::IncompleteShares(_))));
    }

    #[test]
    fn tampering_is_detected() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let mut views = cnf_share(&f5(&[1, 2]), 3, 1, &mut rng).unwrap();
        views[0].components_mut()[0][1] += F5::one();
        assert!(matches!(cnf_open(&views), Err(Error::InconsistentShares(_))));
    }

    #[test]
    fn mul_local_brute_force() {
        let t = Threshold::new(3, 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        for _ in 0..50 {
            let a = CnfSharing::random(&f5(&[2]), t, &mut rng);
            let b = CnfSharing::random(&f5(&[3]), t, &mut rng);
            let (va, vb) = (a.views(), b.views());
            let sum: F5 = (0..3).map(|i| cnf_mul_local(&va[i], 0, &vb[i], 0).unwrap()).fold(F5::zero(), |x, y| x + y);
            // full cross-term expansion
            let mut direct = F5::zero();
            for i in 0..3 {
                for j in 0..3 {
                    direct += a.component(i)[0] * b.component(j)[0];
                }
            }
            assert_eq!(sum, direct);
            assert_eq!(sum, F5::from_u64(1));
        }
    }

    #[test]
    fn mul_by_constant_one() {
        let t = Threshold::new(3, 0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let a = CnfSharing::random(&f5(&[4, 2]), t, &mut rng).views();
        let one = CnfSharing::random(&f5(&[1]), t, &mut rng).views();
        let sum: F5 = (0..3).map(|i| cnf_mul_local(&a[i], 1, &one[i], 0).unwrap()).fold(F5::zero(), |x, y| x + y);
        assert_eq!(sum, F5::from_u64(2));
    }

    #[test]
    fn mul_rejects_mismatched_views() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let a = cnf_share(&f5(&[1]), 3, 1, &mut rng).unwrap();
        let b = cnf_share(&f5(&[1]), 5, 2, &mut rng).unwrap();
        assert!(matches!(cnf_mul_local(&a[0], 0, &b[0], 0), Err(Error::ParameterMismatch(_))));
        assert!(matches!(cnf_mul_local(&a[0], 0, &a[1], 0), Err(Error::ParameterMismatch(_))));
    }

    #[test]
    fn every_pair_has_an_assignee() {
        for p in 1..=6 {
            for m in 0..=(p - 1) / 2 {
                let layout = Threshold::new(p, m).unwrap().layout();
                let n = layout.subsets().len();
                let mut seen = vec![0u32; n * n];
                for party in 0..p {
                    for (r1, r2) in layout.assigned_pairs(party) {
                        let union = layout.subsets()[r1].mask() | layout.subsets()[r2].mask();
                        assert_eq!(party, smallest_excluded(union));
                        seen[r1 * n + r2] += 1;
                    }
                }
                assert!(seen.iter().all(|&c| c == 1), "p={p} m={m}");
            }
        }
    }

    #[test]
    fn prss_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let t = Threshold::new(5, 2).unwrap();
        let secret: Vec<p256::Scalar> = (0..7).map(|_| PrimeField::random(&mut rng)).collect();
        let (sharing, compressed) = prss_share(&secret, t, &mut rng);
        let expanded: Vec<_> = compressed.iter().map(|c| prss_expand(c).unwrap()).collect();
        assert_eq!(cnf_open(&expanded).unwrap(), secret);
        assert_eq!(expanded, sharing.views());

        // 9 seeds + one explicit vector across the designated subset's holders
        let seeds: std::collections::HashSet<Seed> = compressed
            .iter()
            .flat_map(|c| c.payloads.iter())
            .filter_map(|p| match p {
                PrssPayload::Seed(s) => Some(*s),
                PrssPayload::Explicit(_) => None,
            })
            .collect();
        assert_eq!(seeds.len(), 9);

        let plain = CnfSharing::random(&secret, t, &mut rng);
        let recompressed = prss_compress(&plain, &mut rng);
        let expanded: Vec<_> = recompressed.iter().map(|c| prss_expand(c).unwrap()).collect();
        assert_eq!(cnf_open(&expanded).unwrap(), secret);
    }

    #[test]
    fn prss_rejects_unknown_version() {
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let (_, mut views) = prss_share(&f5(&[1]), Threshold::new(3, 1).unwrap(), &mut rng);
        views[0].prg_version = 2;
        assert!(matches!(prss_expand(&views[0]), Err(Error::Decode(_))));
    }

    #[test]
    fn view_serialization_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let t = Threshold::new(5, 2).unwrap();
        let secret = f5(&[1, 2, 3]);
        let plain = CnfSharing::random(&secret, t, &mut rng).views();
        let (_, compressed) = prss_share(&secret, t, &mut rng);
        let prss: Vec<_> = compressed.iter().map(|c| prss_expand(c).unwrap()).collect();
        for v in plain.iter().chain(&prss) {
            let mut w = Writer::new();
            v.write(&mut w);
            let bytes = w.into_bytes();
            let mut r = Reader::new(&bytes);
            let back = CnfPartyView::<F5>::read(&mut r).unwrap();
            r.finish().unwrap();
            assert_eq!(&back, v);
            assert_eq!(back.is_prss(), v.is_prss());
        }
    }

    #[test]
    fn additive_decode_sums() {
        assert_eq!(additive_decode(&f5(&[1, 2, 3])), F5::from_u64(1));
        assert_eq!(additive_decode(&f5(&[0, 0, 0])), F5::zero());
    }
}
