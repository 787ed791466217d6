use rayon::prelude::*;
use serde::Serialize;

use super::config::{Algorithm, ExperimentConfig};
use super::scenario::{build_scenario, run_algorithm, AlgorithmRow, Artifact, RowStatus};
use crate::error::{Error, Result};
use crate::format::sig9;
use crate::multihop::{flood, identify_candidates, RoutingPacket};
use crate::topology::{DestinationArea, NodeId, TopologyDocument};

pub const CSV_HEADER: [&str; 11] = [
    "sweep_param",
    "sweep_value",
    "replicate",
    "algorithm",
    "tree_cost",
    "e2e_delay_ms",
    "avg_reliability",
    "coverage",
    "candidate_count",
    "full_coverage_count",
    "status",
];

/// Rows for one `(sweep point, replicate)` cell, sorted by algorithm name.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub sweep_index: usize,
    pub sweep_value: f64,
    pub replicate: usize,
    /// Scenario-level counts; absent when the scenario itself failed.
    pub candidate_count: Option<usize>,
    pub full_coverage_count: Option<usize>,
    pub rows: Vec<AlgorithmRow>,
}

fn sorted_algorithms(config: &ExperimentConfig) -> Vec<Algorithm> {
    let mut algs = config.algorithms.clone();
    algs.sort();
    algs.dedup();
    algs
}

fn run_cell(config: &ExperimentConfig, sweep_index: usize, replicate: usize) -> CellResult {
    let algorithms = sorted_algorithms(config);
    let sweep_value = config.sweep.value(sweep_index);
    match build_scenario(config, sweep_index, replicate) {
        Ok(s) => CellResult {
            sweep_index,
            sweep_value,
            replicate,
            candidate_count: Some(s.candidate_count),
            full_coverage_count: Some(s.full_coverage_count),
            rows: algorithms
                .iter()
                .map(|&a| super::evaluate(config, &s, a))
                .collect(),
        },
        Err(e) => CellResult {
            sweep_index,
            sweep_value,
            replicate,
            candidate_count: None,
            full_coverage_count: None,
            rows: algorithms
                .iter()
                .map(|&algorithm| AlgorithmRow {
                    algorithm,
                    status: RowStatus::Skipped,
                    metrics: None,
                    reason: Some(e.to_string()),
                })
                .collect(),
        },
    }
}

/// Evaluates every cell of the sweep in `(sweep index, replicate)` order.
/// `workers` bounds the thread pool; results do not depend on it.
pub fn run_cells(config: &ExperimentConfig, workers: Option<usize>) -> Result<Vec<CellResult>> {
    config.validate()?;
    let cells: Vec<(usize, usize)> = (0..config.sweep.len())
        .flat_map(|i| (0..config.replicates).map(move |r| (i, r)))
        .collect();
    let work = || {
        cells
            .par_iter()
            .map(|&(i, r)| run_cell(config, i, r))
            .collect()
    };
    match workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidConfig(e.to_string()))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(sig9).unwrap_or_default()
}

fn sweep_value_text(config: &ExperimentConfig, value: f64) -> String {
    match config.sweep {
        super::config::Sweep::Radius(_) => sig9(value),
        _ => format!("{}", value as u64),
    }
}

/// CSV with the resolved configuration echoed as leading `#` lines.
pub fn render_csv(config: &ExperimentConfig, cells: &[CellResult]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# config: {}\n", config.to_json()));
    out.push_str(&format!("# master_seed: {}\n", config.master_seed));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for cell in cells {
        for row in &cell.rows {
            let m = row.metrics.as_ref();
            let count = |x: Option<usize>| x.map(|c| c.to_string()).unwrap_or_default();
            w.write_record([
                config.sweep.param_name().to_string(),
                sweep_value_text(config, cell.sweep_value),
                cell.replicate.to_string(),
                row.algorithm.name().to_string(),
                opt(m.map(|m| m.tree_cost)),
                opt(m.map(|m| m.end_to_end_delay)),
                opt(m.map(|m| m.avg_reliability)),
                opt(m.map(|m| m.coverage_fraction)),
                count(cell.candidate_count),
                count(cell.full_coverage_count),
                row.status.name().to_string(),
            ])
            .expect("in-memory write");
        }
    }
    let body = w.into_inner().expect("in-memory flush");
    out.push_str(std::str::from_utf8(&body).expect("ascii csv"));
    out
}

pub fn run_sweep(config: &ExperimentConfig, workers: Option<usize>) -> Result<String> {
    Ok(render_csv(config, &run_cells(config, workers)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct DumpEntry {
    pub row: AlgorithmRow,
    pub artifact: Option<Artifact>,
}

/// Everything computed for one sweep cell.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioDump {
    pub config: ExperimentConfig,
    pub sweep_index: usize,
    pub sweep_value: f64,
    pub replicate: usize,
    pub seed: u64,
    pub topology: TopologyDocument,
    pub area: DestinationArea,
    pub source: NodeId,
    pub link_up: Vec<bool>,
    pub destinations: Vec<NodeId>,
    pub routing_packets: Vec<RoutingPacket>,
    pub results: Vec<DumpEntry>,
    /// The cell's rows exactly as `run_sweep` prints them.
    pub csv: String,
}

pub fn run_single(
    config: &ExperimentConfig,
    sweep_index: usize,
    replicate: usize,
) -> Result<ScenarioDump> {
    config.validate()?;
    if sweep_index >= config.sweep.len() || replicate >= config.replicates {
        return Err(Error::InvalidConfig(format!(
            "no cell ({sweep_index}, {replicate}) in this sweep"
        )));
    }
    let s = build_scenario(config, sweep_index, replicate)?;
    let routing_packets = identify_candidates(&s.topology, &s.area)
        .into_iter()
        .map(|c| {
            flood(&s.topology, &s.area_nodes, c, &s.status)
                .map(|i| RoutingPacket::new(&s.area, &i.parent_array))
        })
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<DumpEntry> = sorted_algorithms(config)
        .into_iter()
        .map(|algorithm| match run_algorithm(config, &s, algorithm) {
            Ok((status, metrics, artifact)) => DumpEntry {
                row: AlgorithmRow {
                    algorithm,
                    status,
                    metrics: Some(metrics),
                    reason: None,
                },
                artifact: Some(artifact),
            },
            Err(e) => DumpEntry {
                row: AlgorithmRow {
                    algorithm,
                    status: RowStatus::Skipped,
                    metrics: None,
                    reason: Some(e.to_string()),
                },
                artifact: None,
            },
        })
        .collect();
    let cell = CellResult {
        sweep_index,
        sweep_value: config.sweep.value(sweep_index),
        replicate,
        candidate_count: Some(s.candidate_count),
        full_coverage_count: Some(s.full_coverage_count),
        rows: results.iter().map(|e| e.row.clone()).collect(),
    };
    let csv = render_csv(config, &[cell]);
    Ok(ScenarioDump {
        config: config.clone(),
        sweep_index,
        sweep_value: config.sweep.value(sweep_index),
        replicate,
        seed: s.seed,
        topology: s.topology.to_document(),
        area: s.area,
        source: s.source,
        link_up: (0..s.status.len())
            .map(|i| s.status.is_up(crate::topology::LinkId(i)))
            .collect(),
        destinations: s.destinations,
        routing_packets,
        results,
        csv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::Sweep;

    fn tiny() -> ExperimentConfig {
        ExperimentConfig {
            replicates: 1,
            sweep: Sweep::Radius(vec![20.0]),
            algorithms: vec![Algorithm::Multiple, Algorithm::Kmb],
            ..Default::default()
        }
    }

    #[test]
    fn one_point_two_algorithms_two_rows() {
        let csv = run_sweep(&tiny(), Some(1)).unwrap();
        let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data[0], CSV_HEADER.join(","));
        assert_eq!(data.len(), 3);
        assert!(data[1].contains(",kmb,"));
        assert!(data[2].contains(",multiple,"));
    }

    #[test]
    fn dump_matches_sweep_rows() {
        let c = tiny();
        let csv = run_sweep(&c, None).unwrap();
        let dump = run_single(&c, 0, 0).unwrap();
        assert_eq!(dump.csv, csv);
        assert!(run_single(&c, 1, 0).is_err());
    }
}
