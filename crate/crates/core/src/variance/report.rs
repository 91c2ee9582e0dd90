use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::Ordering;
use crate::variance::ConditionReport;

/// How `d` is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Forward solves `LG = Aᵀ` and row sums of `G ∘ G`.
    Direct,
    /// Takahashi sparse inverse subset and `(A ∘ AS̃)1`.
    SparseInv,
    /// Empirical variances of conditional simulations.
    CondSim,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Direct, Method::SparseInv, Method::CondSim];

    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::SparseInv => "sparse_inv",
            Method::CondSim => "cond_sim",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "sparse_inv" | "sparse-inv" => Ok(Method::SparseInv),
            "cond_sim" | "cond-sim" => Ok(Method::CondSim),
            other => Err(Error::InvalidArgument(format!("unknown method '{other}'"))),
        }
    }
}

/// Timed phases of a variance computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    /// Assembly of `Pᶜ`, ordering, symbolic and numeric factorization.
    Cholesky,
    Solve,
    Hadamard,
    PartInv,
    Sim,
    Interp,
}

impl Phase {
    pub const ALL: [Phase; 6] = [
        Phase::Cholesky,
        Phase::Solve,
        Phase::Hadamard,
        Phase::PartInv,
        Phase::Sim,
        Phase::Interp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Phase::Cholesky => "Cholesky",
            Phase::Solve => "Solve",
            Phase::Hadamard => "Hadamard",
            Phase::PartInv => "PartInv",
            Phase::Sim => "Sim",
            Phase::Interp => "Interp",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One value per [`Phase`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PerPhase<V> {
    values: [V; 6],
}

impl<V: Copy + Default + std::ops::AddAssign> PerPhase<V> {
    pub fn get(&self, phase: Phase) -> V {
        self.values[phase.index()]
    }

    pub fn add(&mut self, phase: Phase, v: V) {
        self.values[phase.index()] += v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Phase, V)> + '_ {
        Phase::ALL.iter().map(move |&p| (p, self.get(p)))
    }
}

impl PerPhase<f64> {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Phase with the largest time (earliest listed on ties).
    pub fn dominant(&self) -> Phase {
        let mut best = Phase::Cholesky;
        for (p, v) in self.iter() {
            if v > self.get(best) {
                best = p;
            }
        }
        best
    }

    pub fn add_duration(&mut self, phase: Phase, d: Duration) {
        self.add(phase, d.as_secs_f64());
    }

    /// Runs `f`, charging its wall-clock time to `phase`.
    pub fn time<R>(&mut self, phase: Phase, f: impl FnOnce() -> R) -> R {
        let start = Instant::now();
        let out = f();
        self.add_duration(phase, start.elapsed());
        out
    }
}

impl PerPhase<u64> {
    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }
}

/// Variances plus telemetry.
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "")]
pub struct VarianceReport<T> {
    #[serde(skip)]
    pub d: Vec<T>,
    pub method: Method,
    pub ordering: Ordering,
    /// Number of simulations (conditional simulation only).
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    /// Generator used for the Gaussian draws (conditional simulation only).
    pub rng: Option<String>,
    /// Wall-clock seconds per phase.
    pub timings: PerPhase<f64>,
    /// Multiplicative operations per phase.
    pub op_counts: PerPhase<u64>,
    pub n: usize,
    pub num_predictions: usize,
    pub nnz_l: usize,
    pub bandwidth_l: usize,
    pub condition: Option<ConditionReport>,
}

impl<T> VarianceReport<T> {
    pub(crate) fn new(method: Method, d: Vec<T>) -> Self {
        VarianceReport {
            num_predictions: d.len(),
            d,
            method,
            ordering: Ordering::default(),
            samples: None,
            seed: None,
            rng: None,
            timings: PerPhase::default(),
            op_counts: PerPhase::default(),
            n: 0,
            nnz_l: 0,
            bandwidth_l: 0,
            condition: None,
        }
    }

    pub fn total_secs(&self) -> f64 {
        self.timings.total()
    }

    pub fn dominant_phase(&self) -> Phase {
        self.timings.dominant()
    }

    /// Telemetry as JSON (everything except `d`).
    pub fn telemetry_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        let obj = v.as_object_mut().expect("object");
        obj.insert("timings".into(), phase_object(self.timings.iter()));
        obj.insert("op_counts".into(), phase_object(self.op_counts.iter()));
        obj.insert("total_secs".into(), self.total_secs().into());
        obj.insert("dominant_phase".into(), self.dominant_phase().name().into());
        v
    }
}

fn phase_object<V: Into<serde_json::Value>>(
    it: impl Iterator<Item = (Phase, V)>,
) -> serde_json::Value {
    serde_json::Value::Object(it.map(|(p, v)| (p.name().to_string(), v.into())).collect())
}
