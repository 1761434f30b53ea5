//! Serialization helpers shared by the library and the CLI.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::PhysConstants;
use crate::quantum::{
    closed_form_energy, max_bound_n, AngularSign, EnergyBranch, QuantumNumbers, Source,
    SpectralLine, Wavefunction, RESOLVED_BRANCH,
};

/// Seventeen significant digits, enough to round-trip any f64.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Known conventions and corrections every report carries, so that a reader
/// cannot mix up the printed and the resolved energy families.
#[derive(Clone, Debug, Serialize)]
pub struct LedgerStatus {
    pub printed_branch: &'static str,
    pub resolved_branch: &'static str,
    pub resolved_by: &'static str,
    pub entries: Vec<&'static str>,
}

impl LedgerStatus {
    pub fn current() -> Self {
        LedgerStatus {
            printed_branch: EnergyBranch::Printed.name(),
            resolved_branch: RESOLVED_BRANCH.name(),
            resolved_by: "finite-volume Sturm-Liouville oracle",
            entries: vec![
                "printed energies (n+1)((n+2)k/2 - 1) belong to the non-normalizable exponent root s = 1/2 - 1/(2k)",
                "resolved energies (n+1)(1 + nk/2) belong to the root s = 1/(2k); at k = 0 they equal the sign-mirror 2N_r + mu + 1",
                "{P1,H} and {P2,H} vanish only for the geodesic Hamiltonian; with the potential they are reported as informational",
                "P1 and P2 are not conserved when alpha != 0 (central force)",
                "recursion re-derived as a two-step relation a_{n+2} : a_n",
                "kinetic prefactor read as hbar^2/2m",
            ],
        }
    }
}

/// Header shared by every JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct ReportHeader {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Echo of the key=value config file, if one was given.
    pub config: BTreeMap<String, String>,
    pub ledger: LedgerStatus,
}

impl ReportHeader {
    pub fn new(command: &str, config: BTreeMap<String, String>) -> Self {
        ReportHeader {
            tool: "kappa",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config,
            ledger: LedgerStatus::current(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineRecord {
    #[serde(rename = "N_r")]
    pub n_r: u32,
    pub n: u32,
    #[serde(rename = "E_scaled")]
    pub e_scaled: f64,
    #[serde(rename = "E_physical")]
    pub e_physical: f64,
    pub source: Source,
}

impl From<&SpectralLine> for LineRecord {
    fn from(l: &SpectralLine) -> Self {
        LineRecord {
            n_r: l.qn.n_r,
            n: l.n,
            e_scaled: l.e_scaled,
            e_physical: l.e_physical,
            source: l.source,
        }
    }
}

/// One (κ, μ, branch) table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumBlock {
    pub kappa: f64,
    pub mu: u32,
    pub branch: EnergyBranch,
    pub lines: Vec<LineRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub kappa: f64,
    /// Largest normalizable n of the resolved family (κ < 0 only).
    pub max_bound_n: Option<u32>,
    pub resolved: Vec<SpectrumBlock>,
    pub printed: Vec<SpectrumBlock>,
}

/// Closed-form tables for μ = 0..=mu_max and N_r = 0..=nr_max, both families.
pub fn spectrum_report(kappa: f64, mu_max: u32, nr_max: u32, c: &PhysConstants) -> SpectrumReport {
    let mut resolved = Vec::new();
    let mut printed = Vec::new();
    for mu in 0..=mu_max {
        let lines: Vec<_> = (0..=nr_max)
            .map(|nr| closed_form_energy(QuantumNumbers::new(nr, mu), kappa, c))
            .collect();
        resolved.push(SpectrumBlock {
            kappa,
            mu,
            branch: RESOLVED_BRANCH,
            lines: lines
                .iter()
                .map(|l| LineRecord::from(&l.resolved))
                .collect(),
        });
        printed.push(SpectrumBlock {
            kappa,
            mu,
            branch: EnergyBranch::Printed,
            lines: lines.iter().map(|l| LineRecord::from(&l.printed)).collect(),
        });
    }
    SpectrumReport {
        kappa,
        max_bound_n: max_bound_n(kappa),
        resolved,
        printed,
    }
}

/// Samples of Ψ on an (r, φ) grid as CSV `r,phi,re,im`.
pub fn write_wavefunction_csv<W: Write>(
    mut out: W,
    wf: &Wavefunction,
    radii: &[f64],
    phis: &[f64],
) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    writeln!(out, "r,phi,re,im").map_err(io)?;
    for &r in radii {
        for &phi in phis {
            let v = wf.eval(r, phi)?;
            writeln!(
                out,
                "{},{},{},{}",
                fmt17(r),
                fmt17(phi),
                fmt17(v.re),
                fmt17(v.im)
            )
            .map_err(io)?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    #[serde(rename = "N_r")]
    pub n_r: u32,
    pub mu: u32,
    pub sign: AngularSign,
    pub kappa: f64,
    pub branch: EnergyBranch,
    #[serde(rename = "E_scaled")]
    pub e_scaled: f64,
    pub normalizable: bool,
    /// Normalization constant C_κ.
    pub norm_constant: Option<f64>,
    /// ⟨Ψ, Ψ⟩ recomputed by quadrature after normalization.
    pub norm_check: Option<f64>,
    /// Why the state could not be normalized.
    pub note: Option<String>,
}

/// Deterministic pretty JSON. Floats use the shortest representation that
/// round-trips exactly.
pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))
}
