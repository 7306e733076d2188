use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::range::{ResourceRanges, UniformRange};
use crate::cost::{DeviceSpec, Resources};
use crate::error::{Error, Result};

/// A cluster of fog devices coordinated by one of them, the fog server.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FogNode {
    pub id: usize,
    /// Sorted by device id.
    pub devices: Vec<DeviceSpec>,
    /// Position of the fog server in `devices`.
    pub server: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub nodes: Vec<FogNode>,
    pub cloud: DeviceSpec,
}

impl Topology {
    pub fn device_count(&self) -> usize {
        self.nodes.iter().map(|n| n.devices.len()).sum()
    }

    pub fn devices(&self) -> impl Iterator<Item = &DeviceSpec> {
        self.nodes.iter().flat_map(|n| n.devices.iter())
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(Error::InvalidTopology("no fog nodes".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for node in &self.nodes {
            if node.devices.is_empty() {
                return Err(Error::InvalidTopology(format!(
                    "node {} has no devices",
                    node.id
                )));
            }
            if node.server >= node.devices.len() {
                return Err(Error::InvalidTopology(format!(
                    "node {} server index out of range",
                    node.id
                )));
            }
            let server = &node.devices[node.server];
            for d in &node.devices {
                d.validate()?;
                if d.node_id != node.id {
                    return Err(Error::InvalidTopology(format!(
                        "device {} claims node {} but sits in node {}",
                        d.id, d.node_id, node.id
                    )));
                }
                if !seen.insert(d.id) {
                    return Err(Error::InvalidTopology(format!(
                        "device id {} appears twice",
                        d.id
                    )));
                }
                if !server.capacity.covers(&d.capacity) {
                    return Err(Error::InvalidTopology(format!(
                        "fog server {} of node {} is smaller than device {}",
                        server.id, node.id, d.id
                    )));
                }
            }
            if node.devices.windows(2).any(|w| w[0].id >= w[1].id) {
                return Err(Error::InvalidTopology(format!(
                    "devices of node {} are not sorted by id",
                    node.id
                )));
            }
        }
        self.cloud.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceRanges {
    pub capacity: ResourceRanges,
    /// MB/s.
    pub data_speed: UniformRange,
    pub cpu_frequency: UniformRange,
    pub energy_beta: UniformRange,
    pub energy_budget: UniformRange,
    pub available_time: UniformRange,
}

impl Default for DeviceRanges {
    fn default() -> Self {
        Self {
            capacity: ResourceRanges {
                processing: UniformRange::new(1000.0, 4000.0),
                cache: UniformRange::new(64.0, 512.0),
                memory: UniformRange::new(2048.0, 8192.0),
                bandwidth: UniformRange::new(100.0, 1000.0),
                storage: UniformRange::new(16384.0, 65536.0),
            },
            data_speed: UniformRange::new(20.0, 100.0),
            cpu_frequency: UniformRange::new(1.0, 3.0),
            energy_beta: UniformRange::fixed(0.1),
            energy_budget: UniformRange::fixed(1.0e6),
            available_time: UniformRange::fixed(3600.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CloudSpec {
    pub mips: f64,
    pub data_speed: f64,
    pub cpu_frequency: f64,
    pub energy_beta: f64,
}

impl Default for CloudSpec {
    fn default() -> Self {
        Self {
            mips: 20_000.0,
            // WAN link: much slower than the fog LAN, so offloading costs latency.
            data_speed: 5.0,
            cpu_frequency: 3.5,
            energy_beta: 0.1,
        }
    }
}

/// Parameters of the random topology generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopologySpec {
    /// Fog nodes; devices are dealt to nodes in turn.
    pub nodes: usize,
    pub devices: DeviceRanges,
    pub cloud: CloudSpec,
}

impl Default for TopologySpec {
    fn default() -> Self {
        Self {
            nodes: 1,
            devices: DeviceRanges::default(),
            cloud: CloudSpec::default(),
        }
    }
}

impl TopologySpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(Error::config(
                "topology.nodes",
                0,
                "need at least one fog node",
            ));
        }
        let d = &self.devices;
        d.capacity.validate("topology.devices.capacity", true)?;
        d.data_speed
            .validate_positive("topology.devices.data_speed")?;
        d.cpu_frequency
            .validate_positive("topology.devices.cpu_frequency")?;
        d.energy_beta
            .validate_positive("topology.devices.energy_beta")?;
        d.energy_budget
            .validate_non_negative("topology.devices.energy_budget")?;
        d.available_time
            .validate_positive("topology.devices.available_time")?;
        for (key, v) in [
            ("topology.cloud.mips", self.cloud.mips),
            ("topology.cloud.data_speed", self.cloud.data_speed),
            ("topology.cloud.cpu_frequency", self.cloud.cpu_frequency),
            ("topology.cloud.energy_beta", self.cloud.energy_beta),
        ] {
            if !(v > 0.0) {
                return Err(Error::config(key, v, "must be positive"));
            }
        }
        Ok(())
    }

    /// Draws `device_count` devices and deals them round-robin to the
    /// nodes. Each node's largest device is promoted to fog server and
    /// lifted to the component-wise maximum capacity of its node. A
    /// device's MIPS rating equals its processing capacity.
    pub fn generate(&self, device_count: usize, seed: u64) -> Result<Topology> {
        self.validate()?;
        if device_count < self.nodes {
            return Err(Error::InvalidTopology(format!(
                "{device_count} devices cannot populate {} nodes",
                self.nodes
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = &self.devices;
        let mut nodes: Vec<FogNode> = (0..self.nodes)
            .map(|id| FogNode {
                id,
                devices: Vec::new(),
                server: 0,
            })
            .collect();
        for id in 0..device_count {
            let capacity = Resources(d.capacity.as_array().map(|r| r.sample(&mut rng)));
            let node_id = id % self.nodes;
            let spec = DeviceSpec {
                id,
                node_id,
                capacity,
                energy_budget: d.energy_budget.sample(&mut rng),
                data_speed: d.data_speed.sample(&mut rng),
                mips: capacity[0],
                cpu_frequency: d.cpu_frequency.sample(&mut rng),
                energy_beta: d.energy_beta.sample(&mut rng),
                available_time: d.available_time.sample(&mut rng),
            };
            nodes[node_id].devices.push(spec);
        }
        for node in &mut nodes {
            let top = node
                .devices
                .iter()
                .fold(Resources::default(), |acc, dev| acc.max(&dev.capacity));
            let server = node
                .devices
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.mips.total_cmp(&b.1.mips).then(b.0.cmp(&a.0)))
                .map(|(i, _)| i)
                .unwrap_or(0);
            node.devices[server].capacity = top;
            node.devices[server].mips = top[0];
            node.server = server;
        }
        let cloud = DeviceSpec {
            id: device_count,
            node_id: usize::MAX,
            capacity: Resources::splat(f64::MAX / 4.0),
            energy_budget: 0.0,
            data_speed: self.cloud.data_speed,
            mips: self.cloud.mips,
            cpu_frequency: self.cloud.cpu_frequency,
            energy_beta: self.cloud.energy_beta,
            available_time: f64::MAX / 4.0,
        };
        let topo = Topology { nodes, cloud };
        topo.validate()?;
        Ok(topo)
    }
}
