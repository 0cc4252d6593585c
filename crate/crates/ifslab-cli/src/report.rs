//! The run report: one JSON document per invocation, printed to stdout.
//!
//! Keys appear in a fixed order (struct declaration order below); every
//! key is always present, with `null` marking fields the subcommand does
//! not populate. For a fixed config and seed the document is byte-stable:
//! it embeds the SHA-256 of the raw config bytes and the sampling
//! parameters, and carries no timestamps or timings — stage timings go to
//! stderr so they never perturb the payload.

use ifslab::{
    ClassificationReport, ClosedForm, ConnectivityReport, DimensionEquation,
    DimensionResult, OscCertificate, TopologyVerdict, VerificationReport,
};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::time::Instant;

/// Empirical-measurement summary.
#[derive(Debug, Clone, Default, Serialize)]
pub struct MetrologySummary {
    /// Box-counting slope (log-count against log-inverse-scale).
    pub box_slope: Option<f64>,
    /// Coefficient of determination of the slope fit.
    pub box_r_squared: Option<f64>,
    /// Number of 8-connected raster components.
    pub components: Option<usize>,
    /// Largest component's share of occupied pixels.
    pub largest_component_fraction: Option<f64>,
    /// Full connectivity report when a raster was computed.
    pub connectivity: Option<ConnectivityReport>,
}

/// One file written by the invocation.
#[derive(Debug, Clone, Serialize)]
pub struct OutputFile {
    /// What the file holds: "image-ppm", "cloud-csv", or "boxcount-csv".
    pub kind: &'static str,
    /// Where it was written.
    pub path: String,
}

/// The full report. Field order here is the documented key order.
#[derive(Debug, Serialize)]
pub struct RunReport {
    /// Always "ifslab".
    pub tool: &'static str,
    /// Crate version.
    pub version: &'static str,
    /// Which subcommand produced the report.
    pub subcommand: &'static str,
    /// System name (config `name` field, registry name, or file stem).
    pub config_name: String,
    /// SHA-256 of the raw config bytes, lowercase hex.
    pub config_sha256: String,
    /// Chaos-game seed, when sampling happened.
    pub seed: Option<u64>,
    /// Number of sample points, when sampling happened.
    pub points: Option<usize>,
    /// Burn-in iterations, when sampling happened.
    pub burn_in: Option<usize>,
    /// Raster resolution, when a raster was computed.
    pub resolution: Option<usize>,
    /// Box-count octaves, when box counting ran.
    pub octaves: Option<usize>,
    /// Structural classification (populated by every subcommand).
    pub classification: Option<ClassificationReport>,
    /// The dimension equation, when one was built.
    pub equation: Option<DimensionEquation>,
    /// The solved dimension, when the equation was solved.
    pub dimension: Option<DimensionResult>,
    /// Polynomial closed form, when the equation admits one.
    pub closed_form: Option<ClosedForm>,
    /// Separating-rectangle certificate, from `certify-osc`.
    pub certificate: Option<OscCertificate>,
    /// Certificate re-verification, from `certify-osc`.
    pub verification: Option<VerificationReport>,
    /// Connectivity verdict, from `topology`.
    pub topology: Option<TopologyVerdict>,
    /// Empirical measurements, from `boxcount` and `topology`.
    pub metrology: Option<MetrologySummary>,
    /// Files written by the invocation.
    pub outputs: Vec<OutputFile>,
}

impl RunReport {
    /// A report skeleton with every optional section empty.
    pub fn new(subcommand: &'static str, config_name: &str, config_bytes: &[u8]) -> Self {
        Self {
            tool: "ifslab",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            config_name: config_name.to_string(),
            config_sha256: sha256_hex(config_bytes),
            seed: None,
            points: None,
            burn_in: None,
            resolution: None,
            octaves: None,
            classification: None,
            equation: None,
            dimension: None,
            closed_form: None,
            certificate: None,
            verification: None,
            topology: None,
            metrology: None,
            outputs: Vec::new(),
        }
    }

    /// Serializes the report as pretty JSON (stable key order, trailing
    /// newline).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report types serialize");
        s.push('\n');
        s
    }

    /// Human-readable summary for `--text`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("system:      {}", self.config_name));
        line(format!("config hash: {}", self.config_sha256));
        if let Some(c) = &self.classification {
            line(format!("family:      {:?}", c.family));
            for note in &c.guard_notes {
                line(format!("  note: {note}"));
            }
        }
        if let Some(eq) = &self.equation {
            line(format!("equation:    {}", eq.description));
        }
        if let Some(d) = &self.dimension {
            line(format!(
                "dimension:   {:.15}  (residual {:.3e}, {} bisection steps)",
                d.s, d.residual, d.iterations
            ));
        }
        if let Some(cf) = &self.closed_form {
            let poly: Vec<String> = cf
                .coefficients
                .iter()
                .map(|(e, w)| format!("{w}*u^{e}"))
                .collect();
            line(format!(
                "closed form: {} = 0 with u = {:.12}^(s/{}), root u = {:.15}",
                poly.join(" + "),
                cf.base,
                cf.substitution_order,
                cf.root_u
            ));
        }
        if let Some(cert) = &self.certificate {
            line(format!(
                "certificate: case {:?}, c = {:.12}, r = {:.12}, verified = {}",
                cert.case_tag, cert.c, cert.r, cert.verified
            ));
            for v in &cert.vertices {
                line(format!("  vertex: ({:.12}, {:.12})", v[0], v[1]));
            }
        }
        if let Some(ver) = &self.verification {
            line(format!(
                "verification: all_pass = {}, u_gap = {:.3e}",
                ver.all_pass, ver.u_gap
            ));
        }
        if let Some(t) = &self.topology {
            line(format!("topology:    {:?} (c + r = {:.12})", t.verdict, t.sum_cr));
            line(format!("  reason: {}", t.reason));
        }
        if let Some(m) = &self.metrology {
            if let Some(slope) = m.box_slope {
                line(format!(
                    "box slope:   {slope:.6} (r^2 = {:.6})",
                    m.box_r_squared.unwrap_or(f64::NAN)
                ));
            }
            if let Some(n) = m.components {
                line(format!(
                    "components:  {n} (largest holds {:.4} of occupied pixels)",
                    m.largest_component_fraction.unwrap_or(f64::NAN)
                ));
            }
        }
        for f in &self.outputs {
            line(format!("wrote:       {} ({})", f.path, f.kind));
        }
        out
    }
}

/// Lowercase-hex SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut hex = String::with_capacity(64);
    for b in digest {
        hex.push_str(&format!("{b:02x}"));
    }
    hex
}

/// Wall-clock stage timer that reports to stderr, keeping timings out of
/// the byte-stable stdout payload.
pub struct StageTimer {
    start: Instant,
}

impl StageTimer {
    pub fn start() -> Self {
        Self { start: Instant::now() }
    }

    /// Prints `timing: <stage> <ms> ms` to stderr and restarts the clock.
    pub fn lap(&mut self, stage: &str) {
        let ms = self.start.elapsed().as_secs_f64() * 1e3;
        let _ = writeln!(std::io::stderr(), "timing: {stage} {ms:.1} ms");
        self.start = Instant::now();
    }
}
