use std::io::Write;

use serde::Serialize;
use serrelab_core::weights::{dihedral_irreducible_weight, dihedral_semistable, twist, LocalShape};

use super::{CliError, Status};
use crate::args::{Shape, WeightsCommand};
use crate::output::{FlatRecord, Sink};

#[derive(Debug, Default, Serialize)]
pub struct TwistRow {
    pub k: u64,
    pub p: u64,
    pub shape: &'static str,
    pub twist_exponent: u64,
    pub new_weight: u64,
}
impl FlatRecord for TwistRow {}

#[derive(Debug, Default, Serialize)]
pub struct DihedralRow {
    pub p: u64,
    pub exists: bool,
    pub weight: Option<u64>,
    pub class_number: Option<u64>,
    pub irreducible_weight: u64,
}
impl FlatRecord for DihedralRow {}

pub fn run<W: Write>(cmd: &WeightsCommand, sink: &mut Sink<W>) -> Result<Status, CliError> {
    match *cmd {
        WeightsCommand::Twist { k, p, shape } => {
            let (local, name) = match shape {
                Shape::OrdinaryNonsplit => (LocalShape::OrdinaryNonsplit, "ordinary-nonsplit"),
                Shape::Split => (LocalShape::Split, "split"),
                Shape::Irreducible => (LocalShape::Irreducible, "irreducible"),
            };
            let t = twist(k, p, local).map_err(CliError::usage)?;
            sink.begin::<TwistRow>()?;
            sink.emit(&TwistRow { k, p, shape: name, twist_exponent: t.twist_exponent, new_weight: t.new_weight })?;
        }
        WeightsCommand::Dihedral { p } => {
            let d = dihedral_semistable(p).map_err(CliError::usage)?;
            sink.begin::<DihedralRow>()?;
            sink.emit(&DihedralRow {
                p,
                exists: d.exists,
                weight: d.weight,
                class_number: d.class_number,
                irreducible_weight: dihedral_irreducible_weight(p).map_err(CliError::usage)?,
            })?;
        }
    }
    Ok(Status::Clean)
}
