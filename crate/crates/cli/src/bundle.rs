//! Model bundles: a directory with `A.mtx`, `B.mtx`, `Q.mtx`, `R.mtx` and
//! `manifest.json`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use takvar::sparse::mmio::{self, Symmetry};
use takvar::sparse::SparseMatrix;
use takvar::variance::HierarchicalModel;
use takvar::Scalar;

use crate::error::{CliError, CliResult};

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub kind: String,
    /// Number of latent coefficients.
    pub n: usize,
    /// Number of observations.
    pub m: usize,
    /// Number of predictions.
    #[serde(rename = "N")]
    pub num_predictions: usize,
    pub padded: bool,
    pub seed: Option<u64>,
    /// Generator parameters, free-form.
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub params: serde_json::Value,
}

/// Matrices as read from disk, before model validation.
#[derive(Clone, Debug)]
pub struct Bundle<T> {
    pub manifest: Manifest,
    pub a: SparseMatrix<T>,
    pub b: SparseMatrix<T>,
    pub q: SparseMatrix<T>,
    pub r: SparseMatrix<T>,
}

fn load_matrix<T: Scalar>(dir: &Path, name: &str) -> CliResult<SparseMatrix<T>> {
    let path = dir.join(format!("{name}.mtx"));
    mmio::load(&path).map_err(|source| CliError::File {
        path: path.display().to_string(),
        source,
    })
}

impl<T: Scalar> Bundle<T> {
    pub fn load(dir: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(dir.join(MANIFEST))?;
        let manifest: Manifest = serde_json::from_str(&text)?;
        let bundle = Bundle {
            a: load_matrix(dir, "A")?,
            b: load_matrix(dir, "B")?,
            q: load_matrix(dir, "Q")?,
            r: load_matrix(dir, "R")?,
            manifest,
        };
        bundle.check_manifest()?;
        Ok(bundle)
    }

    fn check_manifest(&self) -> CliResult<()> {
        let m = &self.manifest;
        let found = (self.a.ncols(), self.b.nrows(), self.a.nrows());
        if found != (m.n, m.m, m.num_predictions) {
            return Err(CliError::Manifest(format!(
                "manifest says (n, m, N) = ({}, {}, {}), matrices give {:?}",
                m.n, m.m, m.num_predictions, found
            )));
        }
        Ok(())
    }

    pub fn from_model(
        model: &HierarchicalModel<T>,
        kind: &str,
        padded: bool,
        seed: Option<u64>,
    ) -> Self {
        Bundle {
            manifest: Manifest {
                kind: kind.to_string(),
                n: model.n(),
                m: model.m(),
                num_predictions: model.num_predictions(),
                padded,
                seed,
                params: serde_json::Value::Null,
            },
            a: model.a().clone(),
            b: model.b().clone(),
            q: model.q().clone(),
            r: model.r().clone(),
        }
    }

    pub fn save(&self, dir: &Path) -> CliResult<()> {
        fs::create_dir_all(dir)?;
        mmio::save(&self.a, Symmetry::General, &dir.join("A.mtx"))?;
        mmio::save(&self.b, Symmetry::General, &dir.join("B.mtx"))?;
        mmio::save(&self.q, Symmetry::Symmetric, &dir.join("Q.mtx"))?;
        mmio::save(&self.r, Symmetry::Symmetric, &dir.join("R.mtx"))?;
        fs::write(
            dir.join(MANIFEST),
            serde_json::to_string_pretty(&self.manifest)? + "\n",
        )?;
        Ok(())
    }

    /// Validated model.
    pub fn model(&self) -> CliResult<HierarchicalModel<T>> {
        Ok(HierarchicalModel::new(
            self.a.clone(),
            self.b.clone(),
            self.q.clone(),
            self.r.clone(),
        )?)
    }
}
