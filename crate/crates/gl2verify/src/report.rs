//! Report assembly and serialization (text, json, csv).
//!
//! Json and csv output are byte-deterministic for a fixed configuration:
//! every collection is emitted in a canonical order and timing data is
//! confined to the text format.

use serde::Serialize;

use crate::config::{CheckKind, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

/// One named verification item (mirrors the library's check items).
#[derive(Debug, Clone, Serialize)]
pub struct ItemReport {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Result of one check for one prime.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: CheckKind,
    pub status: Status,
    pub items: Vec<ItemReport>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> usize {
        self.items.iter().filter(|i| i.pass).count()
    }
}

/// Determinant table row; big integers as decimal strings plus a factored
/// rendering for human comparison.
#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub det_total: String,
    pub det_total_factored: String,
    pub det_trivial: String,
    pub det_trivial_factored: String,
    pub det_principal: String,
    pub det_principal_factored: String,
    pub det_cuspidal: String,
    pub det_cuspidal_factored: String,
    pub det_steinberg: Option<String>,
    pub det_steinberg_factored: Option<String>,
    /// Determinant from exact elimination, when the matrix route ran.
    pub matrix_det: Option<String>,
    pub matrix_det_factored: Option<String>,
}

/// One component of C[G/N'] with its eigenvalues (character-sum route).
#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub component: String,
    pub dim: u64,
    pub lambda_sigma: String,
    pub lambda_pair: String,
}

/// Decomposition of one permutation module.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub space: String,
    pub components: Vec<String>,
    pub max_multiplicity: u64,
}

/// Everything computed for one prime.
#[derive(Debug, Clone, Serialize)]
pub struct PrimeReport {
    pub p: u64,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<TableReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<ComponentReport>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub decompositions: Vec<DecompositionReport>,
    /// Milliseconds; emitted in text output only.
    #[serde(skip)]
    pub elapsed_ms: u128,
}

/// The whole run.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub mode: Mode,
    pub checks: Vec<CheckKind>,
    pub primes: Vec<PrimeReport>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn assemble(mode: Mode, checks: Vec<CheckKind>, primes: Vec<PrimeReport>) -> SuiteReport {
        let pass = primes.iter().all(|p| p.pass);
        SuiteReport { mode, checks, primes, pass }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("prime,check,status,passed,total,note\n");
        for pr in &self.primes {
            for cr in &pr.checks {
                let note = match cr.status {
                    Status::Fail => cr
                        .items
                        .iter()
                        .find(|i| !i.pass)
                        .map(|i| format!("{}: {}", i.name, i.detail))
                        .unwrap_or_default(),
                    Status::Skip => cr.notes.first().cloned().unwrap_or_default(),
                    Status::Pass => String::new(),
                };
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    pr.p,
                    cr.check.name(),
                    cr.status.name(),
                    cr.passed(),
                    cr.items.len(),
                    csv_escape(&note)
                ));
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("gl2verify — exact double-coset verification on GL2(F_p)\n");
        out.push_str(&format!(
            "mode: {}    checks: {}\n",
            self.mode.name(),
            self.checks.iter().map(|c| c.name()).collect::<Vec<_>>().join(" ")
        ));
        out.push_str(&format!(
            "primes: {}\n",
            self.primes.iter().map(|p| p.p.to_string()).collect::<Vec<_>>().join(" ")
        ));
        for pr in &self.primes {
            out.push_str(&format!("\n[p = {}]  ({} ms)\n", pr.p, pr.elapsed_ms));
            for cr in &pr.checks {
                out.push_str(&format!(
                    "  {:<13} {:<4}  {}/{} items\n",
                    cr.check.name(),
                    cr.status.name(),
                    cr.passed(),
                    cr.items.len()
                ));
                for item in cr.items.iter().filter(|i| !i.pass) {
                    out.push_str(&format!("      FAIL {}: {}\n", item.name, item.detail));
                }
                for note in &cr.notes {
                    out.push_str(&format!("      note: {note}\n"));
                }
            }
            if let Some(decs) = non_empty(&pr.decompositions) {
                out.push_str("  decompositions:\n");
                for d in decs {
                    out.push_str(&format!(
                        "    C[G/{}] = {}{}\n",
                        d.space,
                        d.components.join(" + "),
                        if d.max_multiplicity > 1 {
                            format!("   (max multiplicity {})", d.max_multiplicity)
                        } else {
                            String::new()
                        }
                    ));
                }
            }
            if let Some(comps) = &pr.components {
                out.push_str("  components of C[G/N']:\n");
                for c in comps {
                    out.push_str(&format!(
                        "    {:<10} dim {:<4} lambda_sigma = {:<12} pairing = {}\n",
                        c.component, c.dim, c.lambda_sigma, c.lambda_pair
                    ));
                }
            }
        }
        // Combined determinant table, mirroring the reference layout:
        // one row per prime, factored columns.
        let rows: Vec<(u64, &TableReport)> =
            self.primes.iter().filter_map(|p| p.table.as_ref().map(|t| (p.p, t))).collect();
        if !rows.is_empty() {
            out.push_str("\n== determinant table (pairing operator on Z[G/N']) ==\n");
            out.push_str(&format!(
                "  {:<4} {:<22} {:<12} {:<16} {:<14} {:<10}\n",
                "p", "total", "U", "W", "X", "V"
            ));
            for (p, t) in &rows {
                out.push_str(&format!(
                    "  {:<4} {:<22} {:<12} {:<16} {:<14} {:<10}\n",
                    p,
                    t.det_total_factored,
                    t.det_trivial_factored,
                    t.det_principal_factored,
                    t.det_cuspidal_factored,
                    t.det_steinberg_factored.as_deref().unwrap_or("-"),
                ));
            }
            for (p, t) in &rows {
                if let Some(md) = &t.matrix_det_factored {
                    out.push_str(&format!("  matrix-route determinant p={p}: {md}\n"));
                }
            }
        }
        out.push_str(&format!(
            "\noverall: {} ({} prime{}, mode {})\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.primes.len(),
            if self.primes.len() == 1 { "" } else { "s" },
            self.mode.name()
        ));
        out
    }
}

fn non_empty(v: &[DecompositionReport]) -> Option<&[DecompositionReport]> {
    if v.is_empty() {
        None
    } else {
        Some(v)
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_escaping() {
        assert_eq!(csv_escape("plain"), "plain");
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
