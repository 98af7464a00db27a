//! Analysis reports and sweep tables as text, JSON and CSV.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::{KernelConfig, MachineConfig, RawConfig};
use crate::format::number;
use crate::mlp::SweepTable;
use crate::model::{intensities, project, Intensity, KernelProfile, MachineSpec, Region};
use crate::Result;

/// Everything `analyze` prints. `machine` and `kernel` are valid config
/// documents, so a JSON report can be fed back in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub machine: MachineConfig,
    pub kernel: KernelConfig,
    pub i_a: Intensity,
    pub i_m: Intensity,
    pub i_n: Intensity,
    pub t_compute: f64,
    pub t_memory: f64,
    pub t_network: f64,
    pub region: Region,
    pub co_limiting: Vec<Region>,
    pub runtime_s: f64,
    pub attained_flops: f64,
    pub tolerance: f64,
}

pub fn analyze(
    machine: &MachineSpec,
    name: &str,
    profile: &KernelProfile,
    tolerance: f64,
) -> Result<AnalysisReport> {
    let point = intensities(profile);
    let report = project(machine, profile, tolerance)?;
    Ok(AnalysisReport {
        machine: machine.into(),
        kernel: KernelConfig::Raw(RawConfig {
            name: Some(name.to_owned()),
            flops: profile.flops(),
            mem_bytes: profile.mem_bytes(),
            net_bytes: profile.net_bytes(),
        }),
        i_a: point.i_a,
        i_m: point.i_m,
        i_n: point.i_n,
        t_compute: report.bounds.t_compute,
        t_memory: report.bounds.t_memory,
        t_network: report.bounds.t_network,
        region: report.region,
        co_limiting: report.co_limiting,
        runtime_s: report.runtime,
        attained_flops: report.attained_flops,
        tolerance,
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let KernelConfig::Raw(kernel) = &self.kernel else {
            unreachable!("reports always carry the resolved profile")
        };
        let co: Vec<&str> = self.co_limiting.iter().map(|r| r.as_str()).collect();
        let mut out = String::new();
        let mut line = |key: &str, value: String, unit: &str| {
            let _ = writeln!(
                out,
                "{key:<16}{value}{}{unit}",
                if unit.is_empty() { "" } else { " " }
            );
        };
        line("machine", self.machine.name.clone(), "");
        line("kernel", kernel.name.clone().unwrap_or_default(), "");
        line("flops", number(kernel.flops), "FLOP");
        line("mem_bytes", number(kernel.mem_bytes), "B");
        line("net_bytes", number(kernel.net_bytes), "B");
        line("i_a", self.i_a.to_string(), "FLOP/memory byte");
        line("i_m", self.i_m.to_string(), "memory byte/network byte");
        line("i_n", self.i_n.to_string(), "FLOP/network byte");
        line("t_compute", number(self.t_compute), "s");
        line("t_memory", number(self.t_memory), "s");
        line("t_network", number(self.t_network), "s");
        line("region", self.region.to_string(), "");
        line("co_limiting", co.join(","), "");
        line("runtime_s", number(self.runtime_s), "s");
        line("attained_flops", number(self.attained_flops), "FLOP/s");
        out
    }
}

pub const SWEEP_HEADER: [&str; 11] = [
    "batch",
    "flops",
    "mem_bytes",
    "net_bytes",
    "i_a",
    "i_m",
    "i_n",
    "region",
    "runtime_s",
    "attained_flops",
    "allreduce_compute_ratio",
];

pub fn sweep_csv(table: &SweepTable) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(SWEEP_HEADER).expect("in-memory write");
    for row in &table.rows {
        writer
            .write_record([
                row.batch.to_string(),
                number(row.profile.flops()),
                number(row.profile.mem_bytes()),
                number(row.profile.net_bytes()),
                row.intensities.i_a.to_string(),
                row.intensities.i_m.to_string(),
                row.intensities.i_n.to_string(),
                row.report.region.to_string(),
                number(row.report.runtime),
                number(row.report.attained_flops),
                number(row.allreduce_compute_ratio),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ascii output")
}
