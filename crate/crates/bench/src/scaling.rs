//! Per-insertion cost as `n` grows.

use dwalk_core::AlgoConfig;
use serde::{Deserialize, Serialize};

use crate::orient_run::{run_orient, RunError, RunRecord};
use crate::output::{three_decimals, three_decimals_opt, Row};
use crate::workload::{WorkloadKind, WorkloadSpec};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub trials: usize,
    pub insertions: u64,
    pub failures: u64,
    #[serde(serialize_with = "three_decimals")]
    pub mean_walk_steps: f64,
    #[serde(serialize_with = "three_decimals")]
    pub mean_flips: f64,
    /// `mean_walk_steps` over the previous row's.
    #[serde(serialize_with = "three_decimals_opt")]
    pub ratio: Option<f64>,
    pub max_flips: u32,
    pub max_out_degree: usize,
}

impl Row for ScalingRow {
    const COLUMNS: &'static [&'static str] = &[
        "n",
        "trials",
        "insertions",
        "failures",
        "mean_walk_steps",
        "mean_flips",
        "ratio",
        "max_flips",
        "max_out_degree",
    ];

    fn without_timing(&self) -> Self {
        self.clone()
    }
}

/// Pools every trial at one `n`: totals over totals, not a mean of means.
pub fn summarize(n: usize, runs: &[RunRecord]) -> ScalingRow {
    let insertions: u64 = runs.iter().map(|r| r.insertions).sum();
    let per = |total: u64| {
        if insertions == 0 {
            0.0
        } else {
            total as f64 / insertions as f64
        }
    };
    ScalingRow {
        n,
        trials: runs.len(),
        insertions,
        failures: runs.iter().map(|r| r.failures).sum(),
        mean_walk_steps: per(runs.iter().map(|r| r.total_walk_steps).sum()),
        mean_flips: per(runs.iter().map(|r| r.total_flips).sum()),
        ratio: None,
        max_flips: runs.iter().map(|r| r.max_flips).max().unwrap_or(0),
        max_out_degree: runs.iter().map(|r| r.max_out_degree).max().unwrap_or(0),
    }
}

pub fn scaling_report(
    ns: &[usize],
    config: AlgoConfig,
    kind: WorkloadKind,
    seed: u64,
    reps: usize,
) -> Result<Vec<ScalingRow>, RunError> {
    let mut rows: Vec<ScalingRow> = Vec::with_capacity(ns.len());
    for &n in ns {
        let runs = run_orient(&WorkloadSpec::new(kind, n, seed), AlgoConfig { n, ..config }, reps)?;
        let mut row = summarize(n, &runs);
        row.ratio = rows
            .last()
            .filter(|prev| prev.mean_walk_steps > 0.0)
            .map(|prev| row.mean_walk_steps / prev.mean_walk_steps);
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dwalk_core::Variant;

    #[test]
    fn one_row_per_n_with_ratios() {
        let cfg = AlgoConfig::new(Variant::DancingWalkRank, 0);
        let rows = scaling_report(&[256, 512, 1024], cfg, WorkloadKind::RandomRecursiveTree, 0, 3).unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![256, 512, 1024]);
        assert_eq!(rows[0].ratio, None);
        for w in rows.windows(2) {
            let r = w[1].ratio.unwrap();
            assert!((r - w[1].mean_walk_steps / w[0].mean_walk_steps).abs() < 1e-12);
        }
        assert!(rows.iter().all(|r| r.mean_flips.is_finite() && r.trials == 3));
    }

    #[test]
    fn csv_uses_three_decimals() {
        let row = ScalingRow {
            n: 4,
            mean_walk_steps: 1.0 / 3.0,
            ratio: Some(2.0 / 3.0),
            ..Default::default()
        };
        let mut buf = Vec::new();
        crate::output::write_rows(&[row], crate::output::Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains(",0.333,0.0,0.667,"), "{text}");
    }
}
