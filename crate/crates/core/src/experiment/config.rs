use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::{NodeId, TopologyParams};

/// Declared in name order, which is also the CSV row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Exact,
    Gcbt,
    Hybrid,
    Kmb,
    Mkmb,
    Multiple,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Exact,
        Algorithm::Gcbt,
        Algorithm::Hybrid,
        Algorithm::Kmb,
        Algorithm::Mkmb,
        Algorithm::Multiple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Gcbt => "gcbt",
            Algorithm::Hybrid => "hybrid",
            Algorithm::Kmb => "kmb",
            Algorithm::Mkmb => "mkmb",
            Algorithm::Multiple => "multiple",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == lower)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sweep {
    /// Destination area radius in meters.
    Radius(Vec<f64>),
    /// Node count; the area side scales to keep density constant.
    NetworkSize(Vec<usize>),
    /// Maximum PLC hops to a wireless router.
    MaxStep(Vec<u32>),
}

impl Sweep {
    pub fn param_name(&self) -> &'static str {
        match self {
            Sweep::Radius(_) => "radius",
            Sweep::NetworkSize(_) => "network_size",
            Sweep::MaxStep(_) => "max_step",
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Sweep::Radius(v) => v.len(),
            Sweep::NetworkSize(v) => v.len(),
            Sweep::MaxStep(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, index: usize) -> f64 {
        match self {
            Sweep::Radius(v) => v[index],
            Sweep::NetworkSize(v) => v[index] as f64,
            Sweep::MaxStep(v) => v[index] as f64,
        }
    }

    fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourcePolicy {
    FixedId(NodeId),
    /// Wireless node farthest from the area center.
    FarthestFromArea,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub replicates: usize,
    pub topology: TopologyParams,
    pub sweep: Sweep,
    pub algorithms: Vec<Algorithm>,
    pub a_coef: f64,
    pub b_coef: f64,
    pub source_policy: SourcePolicy,
    /// Area radius for sweeps that do not vary it.
    pub area_radius: f64,
    /// Responsibles per node under the Multiple algorithm.
    pub responsibles: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            master_seed: 1,
            replicates: 30,
            topology: TopologyParams::default(),
            sweep: Sweep::Radius(vec![10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]),
            algorithms: Algorithm::ALL.to_vec(),
            a_coef: 1.0,
            b_coef: 1.0,
            source_policy: SourcePolicy::FarthestFromArea,
            area_radius: 20.0,
            responsibles: 2,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Topology parameters at one sweep point.
    pub fn params_at(&self, index: usize) -> TopologyParams {
        let mut p = self.topology.clone();
        match &self.sweep {
            Sweep::NetworkSize(v) => {
                p.n_nodes = v[index];
                p.area_side = TopologyParams::side_for(v[index]);
            }
            Sweep::MaxStep(v) => p.max_plc_hops = v[index],
            Sweep::Radius(_) => {}
        }
        p
    }

    pub fn radius_at(&self, index: usize) -> f64 {
        match &self.sweep {
            Sweep::Radius(v) => v[index],
            _ => self.area_radius,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.replicates < 1 {
            return bad("replicates must be at least 1".into());
        }
        let values = self.sweep.values();
        if values.is_empty() {
            return bad("sweep list is empty".into());
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return bad("sweep list must be strictly increasing".into());
        }
        if let Sweep::Radius(r) = &self.sweep {
            if r.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                return bad("radii must be positive".into());
            }
        }
        if !(self.area_radius > 0.0 && self.area_radius.is_finite()) {
            return bad("area_radius must be positive".into());
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms selected".into());
        }
        if !(self.a_coef >= 0.0
            && self.b_coef >= 0.0
            && self.a_coef.is_finite()
            && self.b_coef.is_finite())
        {
            return bad("weight coefficients must be nonnegative".into());
        }
        if self.responsibles < 1 {
            return bad("responsibles must be at least 1".into());
        }
        for i in 0..values.len() {
            let p = self.params_at(i);
            p.validate()
                .map_err(|e| Error::InvalidConfig(e.to_string()))?;
            if let SourcePolicy::FixedId(id) = self.source_policy {
                if id.idx() >= p.n_nodes {
                    return bad(format!("source {id} outside a {}-node topology", p.n_nodes));
                }
            }
        }
        Ok(())
    }
}
