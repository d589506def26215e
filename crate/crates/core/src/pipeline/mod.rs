//! End-to-end structure learners and structural evaluation.

mod hc;
mod mecip;
mod metrics;

use std::fmt::{self, Write as _};

pub use hc::{learn_hc_tabu, HC_PATIENCE, HC_TABU_LENGTH};
pub use mecip::{learn_mecip, triangulation_pass, PassOutcome, TestCache};
pub use metrics::{structural_metrics, structural_metrics_graphs, StructMetrics};

use crate::error::{arg, Result};
use crate::graph::PartiallyDirectedGraph;
use crate::solver::DEFAULT_CANDIDATE_BUDGET;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Mecip,
    Hc,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Mecip => "mecip",
            Algorithm::Hc => "hc",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mecip" => Ok(Algorithm::Mecip),
            "hc" => Ok(Algorithm::Hc),
            other => arg(format!("unknown algorithm `{other}` (expected mecip or hc)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnConfig {
    /// Significance level for every chi-square test.
    pub alpha: f64,
    /// Cap on triangulation passes.
    pub max_rounds: usize,
    /// Parent sets a node may have before the score table refuses to build.
    pub candidate_budget: usize,
    /// Optional cap on parent-set size; `None` means unrestricted.
    pub max_parents: Option<usize>,
    /// Only used by the hill climber, to break ties between equal moves.
    pub seed: u64,
}

impl Default for LearnConfig {
    fn default() -> Self {
        Self { alpha: 0.05, max_rounds: 50, candidate_budget: DEFAULT_CANDIDATE_BUDGET, max_parents: None, seed: 0 }
    }
}

impl LearnConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return arg(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.max_rounds == 0 {
            return arg("max_rounds must be at least 1");
        }
        if self.candidate_budget == 0 {
            return arg("candidate budget must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct LearnResult {
    pub algorithm: Algorithm,
    pub cpdag: PartiallyDirectedGraph,
    /// The DAG whose class is `cpdag`.
    pub dag: PartiallyDirectedGraph,
    pub bic: f64,
    /// Triangulation passes for MEC-IP, accepted moves for hill climbing.
    pub rounds: usize,
    /// Edges added to the skeleton by each triangulation pass.
    pub edges_added: Vec<usize>,
    /// Wall-clock seconds per phase, in execution order.
    pub timings: Vec<(&'static str, f64)>,
}

impl LearnResult {
    pub fn seconds(&self, phase: &str) -> Option<f64> {
        self.timings.iter().find(|(p, _)| *p == phase).map(|(_, s)| *s)
    }

    pub fn total_seconds(&self) -> f64 {
        self.seconds("total").unwrap_or_else(|| self.timings.iter().map(|(_, s)| s).sum())
    }

    /// `#`-prefixed summary lines followed by the CPDAG edge list.
    pub fn report(&self, names: &[String]) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# algorithm: {}", self.algorithm);
        let _ = writeln!(s, "# bic: {}", self.bic);
        let _ = writeln!(s, "# rounds: {}", self.rounds);
        if self.algorithm == Algorithm::Mecip {
            let added: Vec<String> = self.edges_added.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "# edges_added: {}", added.join(","));
        }
        for (phase, secs) in &self.timings {
            let _ = writeln!(s, "# seconds.{phase}: {secs:.6}");
        }
        let _ = writeln!(
            s,
            "# edges: {} ({} directed, {} undirected)",
            self.cpdag.edge_count(),
            self.cpdag.directed_edges().len(),
            self.cpdag.undirected_edges().len()
        );
        s.push_str(&self.cpdag.to_edge_list(names));
        s
    }
}
