//! `check`, `variances` and `gen-bundle`.

use std::fs;
use std::path::Path;

use serde::Serialize;
use takvar::models::synthetic::{nested_aggregation_model, nested_partition, Car1dStudy, FrkCar1d};
use takvar::variance::{
    check_theorem, compute_variances, pad_q, ConditionReport, HierarchicalModel, VarianceOptions,
    VarianceReport,
};

use crate::bench::write_csv;
use crate::bundle::Bundle;
use crate::error::CliResult;

/// Exit status of `check`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Holds,
    PaddingFixes,
    /// `A` or `B` has a negative entry, so `ones` of the products is not
    /// cancellation-free and padding gives no guarantee.
    Unfixable,
}

impl CheckStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            CheckStatus::Holds => 0,
            CheckStatus::PaddingFixes => 2,
            CheckStatus::Unfixable => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutput {
    pub status: CheckStatus,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ConditionReport>,
}

pub fn cmd_check(dir: &Path) -> CliResult<CheckOutput> {
    let bundle = Bundle::<f64>::load(dir)?;
    for (name, m) in [("A", &bundle.a), ("B", &bundle.b)] {
        if let Some((i, j, v)) = m.first_negative() {
            let status = CheckStatus::Unfixable;
            return Ok(CheckOutput {
                status,
                exit_code: status.exit_code(),
                reason: Some(format!(
                    "{name} has negative entry {v} at ({}, {})",
                    i + 1,
                    j + 1
                )),
                report: None,
            });
        }
    }
    let model = bundle.model()?;
    let report = check_theorem(model.a(), model.b(), model.q())?;
    let status = if report.theorem {
        CheckStatus::Holds
    } else {
        CheckStatus::PaddingFixes
    };
    Ok(CheckOutput {
        status,
        exit_code: status.exit_code(),
        reason: None,
        report: Some(report),
    })
}

#[derive(Clone, Debug, Default)]
pub struct VarianceFlags {
    pub options: VarianceOptions,
    pub pad: bool,
}

#[derive(Serialize)]
struct DRow {
    index: usize,
    d: f64,
}

/// Computes `d` for a bundle and writes `d.csv` and `telemetry.json` to `out`.
pub fn cmd_variances(
    dir: &Path,
    flags: &VarianceFlags,
    out: &Path,
) -> CliResult<VarianceReport<f64>> {
    let bundle = Bundle::<f64>::load(dir)?;
    let mut model = bundle.model()?;
    let mut padding_added = 0;
    if flags.pad {
        let padded = pad_q(model.q(), model.a())?;
        padding_added = padded.nnz() - model.q().nnz();
        model = model.with_q(padded)?;
    }
    let report = compute_variances(&model, &flags.options)?;

    let rows: Vec<DRow> = report
        .d
        .iter()
        .enumerate()
        .map(|(i, &d)| DRow { index: i + 1, d })
        .collect();
    write_csv(&out.join("d.csv"), &rows)?;

    let mut telemetry = report.telemetry_json();
    let obj = telemetry.as_object_mut().expect("object");
    obj.insert("bundle".into(), serde_json::to_value(&bundle.manifest)?);
    obj.insert("padding_added".into(), padding_added.into());
    obj.insert("skip_check".into(), flags.options.skip_check.into());
    fs::write(
        out.join("telemetry.json"),
        serde_json::to_string_pretty(&telemetry)? + "\n",
    )?;
    Ok(report)
}

/// Synthetic bundle families.
#[derive(Clone, Debug, PartialEq)]
pub enum BundleSpec {
    Car1d {
        n: usize,
        m: usize,
        num_predictions: usize,
    },
    NestedAggregation {
        regions: usize,
        mid: usize,
        coarse: usize,
    },
    FrkCar {
        n_xi: usize,
        rank: usize,
        m: usize,
        pad: bool,
    },
}

pub fn build_bundle(spec: &BundleSpec, seed: u64) -> CliResult<Bundle<f64>> {
    let params;
    let (model, kind, padded): (HierarchicalModel<f64>, _, _) = match *spec {
        BundleSpec::Car1d {
            n,
            m,
            num_predictions,
        } => {
            let study = Car1dStudy::new(n, m, num_predictions, seed);
            params = serde_json::to_value(&study)?;
            (study.build()?, "car1d", false)
        }
        BundleSpec::NestedAggregation {
            regions,
            mid,
            coarse,
        } => {
            let graph = nested_partition(regions, mid, coarse, seed)?;
            params = serde_json::json!({ "regions": regions, "mid": mid, "coarse": coarse, "rho": 0.9, "tau": 1.0 });
            (
                nested_aggregation_model(&graph, 0.9, 1.0)?,
                "nested-aggregation",
                false,
            )
        }
        BundleSpec::FrkCar { n_xi, rank, m, pad } => {
            let frk = FrkCar1d::new(n_xi, rank, m, seed);
            params = serde_json::to_value(&frk)?;
            let mut model = frk.build()?;
            if pad {
                model = model.with_q(pad_q(model.q(), model.a())?)?;
            }
            (model, "frk-car", pad)
        }
    };
    let mut bundle = Bundle::from_model(&model, kind, padded, Some(seed));
    bundle.manifest.params = params;
    Ok(bundle)
}

pub fn cmd_gen_bundle(spec: &BundleSpec, seed: u64, out: &Path) -> CliResult<Bundle<f64>> {
    let bundle = build_bundle(spec, seed)?;
    bundle.save(out)?;
    Ok(bundle)
}
