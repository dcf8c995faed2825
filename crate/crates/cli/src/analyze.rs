use pcds::capacity::{q_capacity, q_capacity_pcds_with, CapacityJson, OptimizerConfig};
use pcds::channel::{parse_channel_document, KrausChannel};
use pcds::degradability::{find_antidegrading_map, find_degrading_map, pcds_degradability, Status, VerdictJson};
use pcds::pcds::{is_pcds, BlockPartition, PcdsChannel};
use pcds::Error;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct CptJson {
    pub is_cp: bool,
    pub is_tp: bool,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct PcdsJson {
    pub partition: Vec<usize>,
    pub is_pcds: bool,
    pub max_off_block: f64,
}

#[derive(Debug, Serialize)]
pub struct BoundsJson {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub dim_in: usize,
    pub dim_out: usize,
    pub num_kraus: usize,
    pub cpt: CptJson,
    pub pcds: Option<PcdsJson>,
    pub degradability: VerdictJson,
    pub antidegradable: bool,
    pub capacity: Option<CapacityJson>,
    pub bounds: Option<BoundsJson>,
}

fn input(e: Error) -> CliError {
    CliError::Input(e.to_string())
}

fn numerical(e: Error) -> CliError {
    CliError::Consistency(e.to_string())
}

/// Full report for a channel document. `partition` overrides the one stored
/// in the document.
pub fn analyze(text: &str, partition: Option<Vec<usize>>, config: &OptimizerConfig) -> Result<Report, CliError> {
    let doc = parse_channel_document(text).map_err(input)?;
    let ch = doc.to_channel().map_err(input)?;
    let cpt = ch.validate_cpt();
    if !cpt.is_tp {
        return Err(CliError::Input(format!(
            "kraus: Σ K†K deviates from the identity by {:e}; the map is not trace preserving",
            cpt.residual
        )));
    }
    let partition = partition.or(doc.partition);
    let part = match partition {
        Some(dims) => {
            let p = BlockPartition::new(dims).map_err(|e| CliError::Input(format!("partition: {e}")))?;
            if p.total() != ch.dim_in() {
                return Err(CliError::Input(format!(
                    "partition: dimensions sum to {}, channel input dimension is {}",
                    p.total(),
                    ch.dim_in()
                )));
            }
            Some(p)
        }
        None => None,
    };

    let check = part.as_ref().map(|p| is_pcds(&ch, p)).transpose().map_err(input)?;
    let pcds_json = part.as_ref().zip(check.as_ref()).map(|(p, c)| PcdsJson {
        partition: p.dims().to_vec(),
        is_pcds: c.is_pcds,
        max_off_block: c.max_off_block,
    });
    let pc = match (&part, &check) {
        (Some(p), Some(c)) if c.is_pcds => Some(PcdsChannel::from_channel(ch.clone(), p.clone()).map_err(input)?),
        _ => None,
    };

    let verdict = match &pc {
        Some(pc) => pcds_degradability(pc, find_degrading_map).map_err(numerical)?,
        None => find_degrading_map(&ch).map_err(numerical)?,
    };
    let antidegradable = find_antidegrading_map(&ch).map_err(numerical)?.status == Status::Degradable;

    let (capacity, bounds) = capacity_report(&ch, pc.as_ref(), config)?;
    Ok(Report {
        dim_in: ch.dim_in(),
        dim_out: ch.dim_out(),
        num_kraus: ch.num_kraus(),
        cpt: CptJson {
            is_cp: cpt.is_cp,
            is_tp: cpt.is_tp,
            residual: cpt.residual,
        },
        pcds: pcds_json,
        degradability: verdict.to_json_value(),
        antidegradable,
        capacity,
        bounds,
    })
}

fn capacity_report(
    ch: &KrausChannel<f64>,
    pc: Option<&PcdsChannel<f64>>,
    config: &OptimizerConfig,
) -> Result<(Option<CapacityJson>, Option<BoundsJson>), CliError> {
    let result = match pc {
        Some(pc) => q_capacity_pcds_with(pc, config),
        None => q_capacity(ch),
    };
    match result {
        Ok(r) => {
            let b = BoundsJson {
                lower: r.lower_bound,
                upper: r.upper_bound,
            };
            Ok((Some(r.to_json_value()), Some(b)))
        }
        Err(Error::UndeterminedDegradability { lower, upper }) => Ok((None, Some(BoundsJson { lower, upper }))),
        Err(e) => Err(numerical(e)),
    }
}
