//! Information-theoretic honest-majority sub-schemes over a `w × w` grid.
//!
//! The sub-DPF for `f(x) = β·[x = α]` CNF-shares two truth tables,
//! `f_a` (β at row γ*) and `f_b` (1 at column δ*); each party evaluates
//! `f_a(row(x)) · f_b(col(x))` with one local multiplication. The sub-DCF for
//! `f(x) = β·[x ≤ α]` adds a third table `f_c` (β on every row below γ*)
//! whose share is collapsed additively, and sets `f_b(δ) = 1` for `δ ≤ δ*`.
//! Outputs are additive shares over the field.

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::sharing::{
    cnf_collapse_local, cnf_mul_local, prss_expand, prss_share, CnfPartyView, CnfSharing, Threshold,
};
use crate::wire::{Reader, Writer};

pub use crate::sharing::additive_decode;

pub(crate) fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

/// Row-major `w × w` layout of the domain `[0, M)` with `w = ⌈√M⌉`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubGrid {
    domain: u64,
    width: u64,
}

impl SubGrid {
    pub fn new(domain: u64) -> Result<Self> {
        if domain == 0 {
            return Err(Error::InvalidParameters("empty sub-domain".into()));
        }
        Ok(SubGrid { domain, width: ceil_sqrt(domain) })
    }

    pub fn domain(&self) -> u64 {
        self.domain
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn row(&self, x: u64) -> u64 {
        x / self.width
    }

    pub fn col(&self, x: u64) -> u64 {
        x % self.width
    }

    pub fn check(&self, x: u64) -> Result<()> {
        if x < self.domain {
            Ok(())
        } else {
            Err(Error::domain(x as i64, 0, self.domain as i64))
        }
    }
}

/// How truth tables are dealt to the parties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Dealing {
    /// Uniform random CNF components, all sent explicitly.
    #[default]
    Plain,
    /// Seed-compressed components.
    Prss,
}

pub(crate) fn deal<F: PrimeField, R: RngCore + ?Sized>(
    table: &[F],
    threshold: Threshold,
    dealing: Dealing,
    rng: &mut R,
) -> Vec<CnfPartyView<F>> {
    match dealing {
        Dealing::Plain => CnfSharing::random(table, threshold, rng).views(),
        Dealing::Prss => prss_share(table, threshold, rng)
            .1
            .iter()
            .map(|c| prss_expand(c).expect("freshly dealt views are well formed"))
            .collect(),
    }
}

/// Truth tables `(f_a, f_b)` of the sub-DPF.
pub fn subdpf_tables<F: PrimeField>(grid: SubGrid, alpha: u64, beta: F) -> Result<(Vec<F>, Vec<F>)> {
    grid.check(alpha)?;
    let w = grid.width as usize;
    let mut fa = vec![F::zero(); w];
    let mut fb = vec![F::zero(); w];
    fa[grid.row(alpha) as usize] = beta;
    fb[grid.col(alpha) as usize] = F::one();
    Ok((fa, fb))
}

/// Truth tables `(f_a, f_b, f_c)` of the sub-DCF; `alpha = −1` gives all zeros.
pub fn subdcf_tables<F: PrimeField>(
    grid: SubGrid,
    alpha: i64,
    beta: F,
) -> Result<(Vec<F>, Vec<F>, Vec<F>)> {
    if alpha < -1 || alpha >= grid.domain as i64 {
        return Err(Error::domain(alpha, -1, grid.domain as i64));
    }
    let w = grid.width as usize;
    let mut fa = vec![F::zero(); w];
    let mut fb = vec![F::zero(); w];
    let mut fc = vec![F::zero(); w];
    if alpha >= 0 {
        let (gamma, delta) = (grid.row(alpha as u64) as usize, grid.col(alpha as u64) as usize);
        fa[gamma] = beta;
        fb[..=delta].fill(F::one());
        fc[..gamma].fill(beta);
    }
    Ok((fa, fb, fc))
}

fn check_views<F: PrimeField>(views: &[&CnfPartyView<F>], width: u64) -> Result<()> {
    let first = views[0];
    for v in views {
        if v.party() != first.party() || v.threshold() != first.threshold() {
            return Err(Error::mismatch("sub-key views belong to different parties or thresholds"));
        }
        if v.len() as u64 != width {
            return Err(Error::mismatch(format!("table length {} != grid width {width}", v.len())));
        }
    }
    Ok(())
}

fn read_view<F: PrimeField>(r: &mut Reader<'_>) -> Result<CnfPartyView<F>> {
    let mut s = r.section()?;
    let v = CnfPartyView::read(&mut s)?;
    s.finish()?;
    Ok(v)
}

/// One party's sub-DPF key.
#[derive(Clone, Debug, PartialEq)]
pub struct SubDpfKey<F> {
    grid: SubGrid,
    view_a: CnfPartyView<F>,
    view_b: CnfPartyView<F>,
}

impl<F: PrimeField> SubDpfKey<F> {
    pub fn new(grid: SubGrid, view_a: CnfPartyView<F>, view_b: CnfPartyView<F>) -> Result<Self> {
        check_views(&[&view_a, &view_b], grid.width)?;
        Ok(SubDpfKey { grid, view_a, view_b })
    }

    /// Builds all parties' keys from explicit sharings of `(f_a, f_b)`.
    pub fn from_sharings(grid: SubGrid, a: &CnfSharing<F>, b: &CnfSharing<F>) -> Result<Vec<Self>> {
        a.views().into_iter().zip(b.views()).map(|(va, vb)| Self::new(grid, va, vb)).collect()
    }

    pub fn party(&self) -> usize {
        self.view_a.party()
    }

    pub fn threshold(&self) -> Threshold {
        self.view_a.threshold()
    }

    pub fn grid(&self) -> SubGrid {
        self.grid
    }

    pub fn view_a(&self) -> &CnfPartyView<F> {
        &self.view_a
    }

    pub fn view_b(&self) -> &CnfPartyView<F> {
        &self.view_b
    }

    pub fn write(&self, w: &mut Writer) {
        w.u64(self.grid.domain);
        w.section(|w| self.view_a.write(w));
        w.section(|w| self.view_b.write(w));
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let grid = SubGrid::new(r.u64()?).map_err(|e| Error::decode(e.to_string()))?;
        let (a, b) = (read_view(r)?, read_view(r)?);
        Self::new(grid, a, b).map_err(|e| Error::decode(e.to_string()))
    }
}

/// One party's sub-DCF key.
#[derive(Clone, Debug, PartialEq)]
pub struct SubDcfKey<F> {
    grid: SubGrid,
    view_a: CnfPartyView<F>,
    view_b: CnfPartyView<F>,
    view_c: CnfPartyView<F>,
}

impl<F: PrimeField> SubDcfKey<F> {
    pub fn new(
        grid: SubGrid,
        view_a: CnfPartyView<F>,
        view_b: CnfPartyView<F>,
        view_c: CnfPartyView<F>,
    ) -> Result<Self> {
        check_views(&[&view_a, &view_b, &view_c], grid.width)?;
        Ok(SubDcfKey { grid, view_a, view_b, view_c })
    }

    pub fn party(&self) -> usize {
        self.view_a.party()
    }

    pub fn threshold(&self) -> Threshold {
        self.view_a.threshold()
    }

    pub fn grid(&self) -> SubGrid {
        self.grid
    }

    pub fn write(&self, w: &mut Writer) {
        w.u64(self.grid.domain);
        w.section(|w| self.view_a.write(w));
        w.section(|w| self.view_b.write(w));
        w.section(|w| self.view_c.write(w));
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let grid = SubGrid::new(r.u64()?).map_err(|e| Error::decode(e.to_string()))?;
        let (a, b, c) = (read_view(r)?, read_view(r)?, read_view(r)?);
        Self::new(grid, a, b, c).map_err(|e| Error::decode(e.to_string()))
    }
}

pub fn subdpf_gen<F: PrimeField, R: RngCore + ?Sized>(
    domain: u64,
    alpha: u64,
    beta: F,
    parties: usize,
    corrupt: usize,
    rng: &mut R,
) -> Result<Vec<SubDpfKey<F>>> {
    subdpf_gen_with(domain, alpha, beta, Threshold::new(parties, corrupt)?, Dealing::Plain, rng)
}

pub fn subdpf_gen_with<F: PrimeField, R: RngCore + ?Sized>(
    domain: u64,
    alpha: u64,
    beta: F,
    threshold: Threshold,
    dealing: Dealing,
    rng: &mut R,
) -> Result<Vec<SubDpfKey<F>>> {
    let grid = SubGrid::new(domain)?;
    let (fa, fb) = subdpf_tables(grid, alpha, beta)?;
    let va = deal(&fa, threshold, dealing, rng);
    let vb = deal(&fb, threshold, dealing, rng);
    va.into_iter().zip(vb).map(|(a, b)| SubDpfKey::new(grid, a, b)).collect()
}

pub fn subdpf_eval<F: PrimeField>(key: &SubDpfKey<F>, x: u64) -> Result<F> {
    key.grid.check(x)?;
    let g = key.grid;
    cnf_mul_local(&key.view_a, g.row(x) as usize, &key.view_b, g.col(x) as usize)
}

pub fn subdcf_gen<F: PrimeField, R: RngCore + ?Sized>(
    domain: u64,
    alpha: i64,
    beta: F,
    parties: usize,
    corrupt: usize,
    rng: &mut R,
) -> Result<Vec<SubDcfKey<F>>> {
    subdcf_gen_with(domain, alpha, beta, Threshold::new(parties, corrupt)?, Dealing::Plain, rng)
}

pub fn subdcf_gen_with<F: PrimeField, R: RngCore + ?Sized>(
    domain: u64,
    alpha: i64,
    beta: F,
    threshold: Threshold,
    dealing: Dealing,
    rng: &mut R,
) -> Result<Vec<SubDcfKey<F>>> {
    let grid = SubGrid::new(domain)?;
    let (fa, fb, fc) = subdcf_tables(grid, alpha, beta)?;
    let va = deal(&fa, threshold, dealing, rng);
    let vb = deal(&fb, threshold, dealing, rng);
    let vc = deal(&fc, threshold, dealing, rng);
    va.into_iter()
        .zip(vb)
        .zip(vc)
        .map(|((a, b), c)| SubDcfKey::new(grid, a, b, c))
        .collect()
}

pub fn subdcf_eval<F: PrimeField>(key: &SubDcfKey<F>, x: u64) -> Result<F> {
    key.grid.check(x)?;
    let g = key.grid;
    let (row, col) = (g.row(x) as usize, g.col(x) as usize);
    Ok(cnf_mul_local(&key.view_a, row, &key.view_b, col)? + cnf_collapse_local(&key.view_c, row))
}
