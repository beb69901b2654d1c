use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use serrelab_core::census::{
    assemble_census, census_separators, census_weights, weight_orbits, CensusConfig, CensusError, CensusReport,
    HeckeOrbit,
};

use super::{CliError, Ctx, Status};
use crate::args::Format;
use crate::cache::CachedBasis;
use crate::output::{FlatRecord, Sink};

#[derive(Debug, Serialize)]
pub struct OrbitRecord {
    pub weights: Vec<u32>,
    pub field_degree: usize,
    pub systems: u64,
    pub twist_orbits: u64,
    pub reducible_as: Option<(u64, u64)>,
}

#[derive(Debug, Serialize)]
pub struct NearCollisionRecord {
    pub weights: (u32, u32),
    pub field_degree: usize,
    pub twist: u64,
    pub differs_at: u64,
}

#[derive(Debug, Serialize)]
pub struct CensusRecord {
    pub p: u64,
    pub separator_primes: Vec<u64>,
    #[serde(rename = "N_irred")]
    pub n_irred: u64,
    #[serde(rename = "N_red")]
    pub n_red: u64,
    #[serde(rename = "N_total")]
    pub n_total: u64,
    pub max_e: usize,
    /// `max(1, ceil((p + 1) / 12))`.
    pub max_e_bound: u64,
    pub ratio_num: String,
    pub ratio_den: String,
    pub orbit_count: u64,
    pub orbits: Vec<OrbitRecord>,
    pub near_collisions: Vec<NearCollisionRecord>,
}

/// The scalar part of [`CensusRecord`], for csv.
#[derive(Debug, Default, Serialize)]
pub struct CensusRow {
    pub p: u64,
    #[serde(rename = "N_irred")]
    pub n_irred: u64,
    #[serde(rename = "N_red")]
    pub n_red: u64,
    #[serde(rename = "N_total")]
    pub n_total: u64,
    pub max_e: usize,
    pub max_e_bound: u64,
    pub ratio_num: String,
    pub ratio_den: String,
    pub orbit_count: u64,
    pub near_collisions: usize,
}
impl FlatRecord for CensusRow {}

fn degree_bound(p: u64) -> u64 {
    1.max((p + 1).div_ceil(12))
}

/// Census with the weights spread over the pool; the merge sees the orbits
/// in weight order whatever the thread count.
pub fn parallel_census(ctx: &Ctx, p: u64, config: &CensusConfig) -> Result<CensusReport, CensusError> {
    let ells = census_separators(p, config)?;
    let weights = if p > 3 { census_weights(p) } else { Vec::new() };
    let source = CachedBasis { cache: &ctx.cache };
    let per_weight: Result<Vec<Vec<HeckeOrbit>>, CensusError> =
        ctx.pool.install(|| weights.par_iter().map(|&k| weight_orbits(k, p, &ells, &source)).collect());
    Ok(assemble_census(p, &ells, per_weight?.into_iter().flatten().collect()))
}

pub fn run<W: Write>(ctx: &Ctx, p: u64, bound: Option<u64>, sink: &mut Sink<W>) -> Result<Status, CliError> {
    let config = CensusConfig { separator_bound: bound, ..CensusConfig::default() };
    census_separators(p, &config).map_err(CliError::usage)?;
    if ctx.format == Format::Csv {
        sink.begin::<CensusRow>()?;
    }
    let r = parallel_census(ctx, p, &config).map_err(|e| CliError::Failed(e.to_string()))?;
    let max_e_bound = degree_bound(p);
    match ctx.format {
        Format::Csv => sink.emit(&CensusRow {
            p,
            n_irred: r.n_irred,
            n_red: r.n_red,
            n_total: r.n_total,
            max_e: r.max_e,
            max_e_bound,
            ratio_num: r.ratio.numer().to_string(),
            ratio_den: r.ratio.denom().to_string(),
            orbit_count: r.orbit_count,
            near_collisions: r.near_collisions.len(),
        })?,
        Format::JsonLines => sink.emit(&CensusRecord {
            p,
            separator_primes: r.separator_primes.clone(),
            n_irred: r.n_irred,
            n_red: r.n_red,
            n_total: r.n_total,
            max_e: r.max_e,
            max_e_bound,
            ratio_num: r.ratio.numer().to_string(),
            ratio_den: r.ratio.denom().to_string(),
            orbit_count: r.orbit_count,
            orbits: r
                .classes
                .iter()
                .map(|c| OrbitRecord {
                    weights: c.weights.clone(),
                    field_degree: c.field_degree,
                    systems: c.systems,
                    twist_orbits: c.twist_orbits,
                    reducible_as: c.reducible_as,
                })
                .collect(),
            near_collisions: r
                .near_collisions
                .iter()
                .map(|n| NearCollisionRecord {
                    weights: n.weights,
                    field_degree: n.field_degree,
                    twist: n.twist,
                    differs_at: n.differs_at,
                })
                .collect(),
        })?,
    }
    let within = r.max_e as u64 <= max_e_bound && r.n_total <= p.pow(3);
    Ok(if within { Status::Clean } else { Status::Failures })
}
