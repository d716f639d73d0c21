//! Machine-readable reports. Every exact value is rendered as a string, so
//! serialization round-trips without loss.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub result: ReportResult,
    #[serde(default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportResult {
    Check(CheckReport),
    Lift(LiftReport),
    Aut(AutReport),
    H1(H1Report),
    Forms(FormsReport),
    Error(ErrorReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub torus_rank: usize,
    pub tail_rays: Vec<Vec<i64>>,
    pub curve: String,
    pub support: Vec<String>,
    pub coefficients: Vec<CoefficientEntry>,
    pub bad_locus: Vec<Vec<String>>,
    pub rigid: Vec<String>,
    /// `Some(stable)` when the file asks for a real structure.
    pub conjugation_stable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub point: String,
    pub polyhedron: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum LiftVerdict {
    Liftable { witness: String, divisor: Vec<String> },
    NonTranslate { point: String, translate: Option<String> },
    NotPrincipal { coordinate: usize, obstruction: String },
    UnsupportedAutomorphism { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftReport {
    pub automorphism: String,
    pub result: LiftVerdict,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetEntry {
    pub representative: String,
    pub status: String,
    pub lift: LiftReport,
    pub members: Vec<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub label: String,
    pub automorphism: String,
    pub permutation: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutReport {
    pub genus: u32,
    pub torus_rank: usize,
    pub lambda_rank: usize,
    pub units_basis: Vec<String>,
    pub bad_locus: Vec<Vec<String>>,
    pub rigid: Vec<String>,
    pub k_base: String,
    pub cosets: Vec<CosetEntry>,
    pub spot_checks: usize,
    pub k_generators: Vec<GeneratorEntry>,
    pub exact_sequence: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceEntry {
    pub order: usize,
    pub bound: i64,
    pub representatives: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Report {
    pub matrix: Vec<Vec<i64>>,
    pub rank: usize,
    /// Multiplicities of trivial, sign and regular summands.
    pub decomposition: [usize; 3],
    pub h1_order: u64,
    pub h1_group: String,
    pub tate0_order: u64,
    pub h0_rank: usize,
    pub permutation_module: bool,
    pub brute_force: Option<BruteForceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum VerdictEntry {
    FiniteCertified { evidence: String },
    NotCertified { involution: Vec<usize>, decomposition: [usize; 3], h1_order: u64 },
    Unsupported { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationEntry {
    pub from: i64,
    pub to: i64,
    pub conjugator: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuEntry {
    pub sign_h1_order: u64,
    pub sign_h1_group: String,
    pub brute_force_order: usize,
    pub brute_force_bounds: [i64; 2],
    pub bound: i64,
    pub classes: Vec<Vec<i64>>,
    pub class_invariant: String,
    pub parity_invariant: bool,
    pub conjugations: Vec<ConjugationEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormsReport {
    pub verdict: VerdictEntry,
    pub twisted_lambda: Vec<Vec<i64>>,
    pub twisted_decomposition: [usize; 3],
    pub twisted_h1_order: u64,
    pub mu_family: Option<MuEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: String,
    pub message: String,
    pub exit_code: i32,
}

/// `ℤ/2 × …` notation for a 2-group of the given invariant factors.
pub fn group_name(invariants: &[i64]) -> String {
    if invariants.is_empty() {
        return "1".into();
    }
    invariants.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" x ")
}

fn rows(m: &[Vec<i64>]) -> String {
    let r: Vec<String> = m.iter().map(|row| format!("{row:?}")).collect();
    format!("[{}]", r.join(", "))
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "$ ahaut {}", self.command);
        match &self.result {
            ReportResult::Check(c) => {
                let _ = writeln!(out, "OK: torus rank {}, tail cone {}, curve {}", c.torus_rank, rows(&c.tail_rays), c.curve);
                let _ = writeln!(out, "support: {{{}}}", c.support.join(", "));
                for e in &c.coefficients {
                    let _ = writeln!(out, "  {} -> {}", e.point, e.polyhedron);
                }
                let classes: Vec<String> = c.bad_locus.iter().map(|cl| format!("{{{}}}", cl.join(", "))).collect();
                let _ = writeln!(out, "bad locus: {{{}}}", classes.join(", "));
                let _ = writeln!(out, "rigid points: {{{}}}", c.rigid.join(", "));
                if let Some(stable) = c.conjugation_stable {
                    let _ = writeln!(out, "conjugation stable: {stable}");
                }
            }
            ReportResult::Lift(l) => {
                let _ = writeln!(out, "automorphism: {}", l.automorphism);
                let _ = writeln!(out, "{}", l.summary);
                if let LiftVerdict::Liftable { divisor, .. } = &l.result {
                    let _ = writeln!(out, "difference: ({})", divisor.join("; "));
                }
            }
            ReportResult::Aut(a) => {
                for line in &a.exact_sequence {
                    let _ = writeln!(out, "{line}");
                }
                let _ = writeln!(out, "genus {}, torus rank {}, Lambda rank {}", a.genus, a.torus_rank, a.lambda_rank);
                if !a.units_basis.is_empty() {
                    let _ = writeln!(out, "units basis: {}", a.units_basis.join(", "));
                }
                let _ = writeln!(out, "rigid points: {{{}}}", a.rigid.join(", "));
                let _ = writeln!(out, "K base: {}", a.k_base);
                for c in &a.cosets {
                    let _ = writeln!(out, "coset of {}: {} ({})", c.representative, c.status, c.lift.summary);
                    if let Some(n) = &c.note {
                        let _ = writeln!(out, "  note: {n}");
                    }
                }
                let _ = writeln!(out, "spot checks passed: {}", a.spot_checks);
                for g in &a.k_generators {
                    let _ = writeln!(out, "K acts: {} [{}] on S by {:?}, on Lambda by {}", g.automorphism, g.label, g.permutation, rows(&g.matrix));
                }
            }
            ReportResult::H1(h) => {
                let [a, b, c] = h.decomposition;
                let _ = writeln!(out, "sigma = {}", rows(&h.matrix));
                let _ = writeln!(out, "H1 = {} (order {}), type ({a},{b},{c})", h.h1_group, h.h1_order);
                let _ = writeln!(out, "Tate H0 order {}, H0 rank {}, permutation module: {}", h.tate0_order, h.h0_rank, h.permutation_module);
                if let Some(bf) = &h.brute_force {
                    let _ = writeln!(out, "brute force: order {} (bounds {} and {})", bf.order, bf.bound, bf.bound + 2);
                }
            }
            ReportResult::Forms(f) => {
                let verdict = match &f.verdict {
                    VerdictEntry::FiniteCertified { evidence } => format!("FiniteCertified: {evidence}"),
                    VerdictEntry::NotCertified { involution, decomposition: [a, b, c], h1_order } => format!(
                        "NotCertified: involution {involution:?} acts with type ({a},{b},{c}), H1 order {h1_order}"
                    ),
                    VerdictEntry::Unsupported { reason } => format!("Unsupported: {reason}"),
                };
                let _ = writeln!(out, "{verdict}");
                let [a, b, c] = f.twisted_decomposition;
                let _ = writeln!(out, "twisted Lambda: sigma = {}, type ({a},{b},{c}), H1 order {}", rows(&f.twisted_lambda), f.twisted_h1_order);
                if let Some(mu) = &f.mu_family {
                    let _ = writeln!(out, "sign lattice: H1 = {} (brute force order {} at bounds {:?})", mu.sign_h1_group, mu.brute_force_order, mu.brute_force_bounds);
                    let _ = writeln!(out, "mu_n, |n| <= {}: {} classes, invariant {}", mu.bound, mu.classes.len(), mu.class_invariant);
                    for cl in &mu.classes {
                        let _ = writeln!(out, "  {cl:?}");
                    }
                }
            }
            ReportResult::Error(e) => {
                let _ = writeln!(out, "error ({}): {}", e.error, e.message);
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}
