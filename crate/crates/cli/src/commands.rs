use std::path::PathBuf;

use ahaut_core::curves::{units_lattice, CurveAutomorphism, CurveModel, ECPoint, EcAutomorphism, MobiusMap};
use ahaut_core::datum::{bad_locus, rigid_points, AHDatum};
use ahaut_core::galois::{brute_force_h1, cohomology, IntMatrix, InvolutionLattice};
use ahaut_core::lifting::{k_generators, lift_group, lift_test, CosetStatus, KBase, LiftResult, LocusPoints};
use ahaut_core::real_forms::{forms_analysis, twisted_lambda, validate_real_datum, FiniteEvidence, FormsVerdict};
use ahaut_core::{CoreError, GaussianRational};
use clap::{Parser, Subcommand, ValueEnum};

use crate::datum_file::{self, LoadedDatum};
use crate::error::CliError;
use crate::report::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "ahaut", version, about = "Equivariant automorphisms and real forms of complexity-one torus varieties")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a datum file and report its support and bad locus.
    Check { file: PathBuf },
    /// Test whether a curve automorphism lifts.
    Lift {
        file: PathBuf,
        /// Möbius matrix entries a,b,c,d (Gaussian rationals), t -> (a t + b)/(c t + d).
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["ec_translate", "ec_neg"])]
        mobius: Option<String>,
        /// Translation P -> P + t by a rational point "(x,y)" or "O".
        #[arg(long, allow_hyphen_values = true)]
        ec_translate: Option<String>,
        /// Negation P -> -P (combined with --ec-translate: P -> -P + t).
        #[arg(long)]
        ec_neg: bool,
    },
    /// Fiber group, image group K and the exact sequence.
    Aut { file: PathBuf },
    /// ℤ/2-cohomology of an integral involution.
    H1 {
        /// Square integer matrix as JSON rows, e.g. [[0,1],[1,0]].
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Finiteness verdict for real forms.
    Forms {
        file: PathBuf,
        /// Search bound for the μ-family classification.
        #[arg(long, default_value_t = 16)]
        bound: i64,
    },
}

impl Command {
    pub fn echo(&self) -> String {
        match self {
            Self::Check { file } => format!("check {}", file.display()),
            Self::Lift { file, mobius, ec_translate, ec_neg } => {
                let mut s = format!("lift {}", file.display());
                if let Some(m) = mobius {
                    s += &format!(" --mobius {m}");
                }
                if let Some(t) = ec_translate {
                    s += &format!(" --ec-translate {t}");
                }
                if *ec_neg {
                    s += " --ec-neg";
                }
                s
            }
            Self::Aut { file } => format!("aut {}", file.display()),
            Self::H1 { matrix } => format!("h1 --matrix {matrix}"),
            Self::Forms { file, bound } => format!("forms {} --bound {bound}", file.display()),
        }
    }
}

/// A finished command: the report and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

pub fn execute(command: &Command) -> Outcome {
    let echo = command.echo();
    let mut warnings = Vec::new();
    match dispatch(command, &mut warnings) {
        Ok((result, exit_code)) => Outcome { report: Report { command: echo, result, warnings }, exit_code },
        Err(e) => Outcome {
            report: Report {
                command: echo,
                result: ReportResult::Error(ErrorReport {
                    error: e.kind().into(),
                    message: e.to_string(),
                    exit_code: e.exit_code(),
                }),
                warnings,
            },
            exit_code: e.exit_code(),
        },
    }
}

fn dispatch(command: &Command, warnings: &mut Vec<String>) -> Result<(ReportResult, i32), CliError> {
    match command {
        Command::Check { file } => check(&datum_file::load(file)?).map(|r| (r, 0)),
        Command::Lift { file, mobius, ec_translate, ec_neg } => {
            let loaded = datum_file::load(file)?;
            let label = file.display().to_string();
            let psi = automorphism(&label, mobius.as_deref(), ec_translate.as_deref(), *ec_neg)?;
            let report = lift_report(&loaded.datum, &psi).map_err(|e| CliError::from_core(&label, "", e))?;
            let code = if matches!(report.result, LiftVerdict::UnsupportedAutomorphism { .. }) { 2 } else { 0 };
            Ok((ReportResult::Lift(report), code))
        }
        Command::Aut { file } => {
            let loaded = datum_file::load(file)?;
            aut(&loaded.datum, warnings).map(|r| (r, 0)).map_err(|e| CliError::from_core(&file.display().to_string(), "", e))
        }
        Command::H1 { matrix } => h1(matrix, warnings).map(|r| (r, 0)),
        Command::Forms { file, bound } => {
            let loaded = datum_file::load(file)?;
            let label = file.display().to_string();
            forms(&loaded, *bound, &label, warnings)
        }
    }
}

fn check(loaded: &LoadedDatum) -> Result<ReportResult, CliError> {
    let d = &loaded.datum;
    let names = |pts: &[ahaut_core::CurvePoint]| pts.iter().map(ToString::to_string).collect::<Vec<_>>();
    let conjugation_stable = loaded.real.then(|| validate_real_datum(d.clone()).is_ok());
    Ok(ReportResult::Check(CheckReport {
        torus_rank: d.torus_rank(),
        tail_rays: d.tail().rays().to_vec(),
        curve: d.curve().to_string(),
        support: names(&d.support()),
        coefficients: d
            .coefficients()
            .iter()
            .map(|(p, c)| CoefficientEntry { point: p.to_string(), polyhedron: c.to_string() })
            .collect(),
        bad_locus: bad_locus(d).classes.iter().map(|c| names(c)).collect(),
        rigid: rigid_points(d).keys().map(ToString::to_string).collect(),
        conjugation_stable,
    }))
}

fn automorphism(
    label: &str,
    mobius: Option<&str>,
    ec_translate: Option<&str>,
    ec_neg: bool,
) -> Result<CurveAutomorphism, CliError> {
    if let Some(m) = mobius {
        let entries: Vec<&str> = m.split(',').map(str::trim).collect();
        if entries.len() != 4 {
            return Err(CliError::input(label, "--mobius", "expected four comma-separated entries a,b,c,d"));
        }
        let parsed = entries
            .iter()
            .map(|s| s.parse::<GaussianRational>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::input(label, "--mobius", e.to_string()))?;
        let [a, b, c, d]: [GaussianRational; 4] = parsed.try_into().expect("four entries");
        let m = MobiusMap::new(a, b, c, d).map_err(|e| CliError::input(label, "--mobius", e.to_string()))?;
        return Ok(CurveAutomorphism::Mobius(m));
    }
    if ec_translate.is_none() && !ec_neg {
        return Err(CliError::input(label, "", "give --mobius, --ec-translate or --ec-neg"));
    }
    let t = match ec_translate {
        Some(s) => ECPoint::parse(s).map_err(|e| CliError::input(label, "--ec-translate", e.to_string()))?,
        None => ECPoint::Infinity,
    };
    Ok(CurveAutomorphism::Elliptic(EcAutomorphism { negate: ec_neg, translation: t }))
}

pub fn lift_verdict(result: &LiftResult) -> (LiftVerdict, String) {
    match result {
        LiftResult::Liftable { witness, divisor } => (
            LiftVerdict::Liftable {
                witness: witness.to_string(),
                divisor: divisor.divisors.iter().map(ToString::to_string).collect(),
            },
            format!("Liftable, f = {witness}"),
        ),
        LiftResult::NonTranslate { point, translate } => (
            LiftVerdict::NonTranslate { point: point.to_string(), translate: translate.as_ref().map(ToString::to_string) },
            match translate {
                Some(v) => format!("NonTranslate at {point} (non-integral translate {v})"),
                None => format!("NonTranslate at {point}"),
            },
        ),
        LiftResult::NotPrincipal { coordinate, obstruction } => (
            LiftVerdict::NotPrincipal { coordinate: *coordinate, obstruction: obstruction.to_string() },
            format!("NotPrincipal coord {coordinate}, obstruction {obstruction}"),
        ),
        LiftResult::UnsupportedAutomorphism(reason) => (
            LiftVerdict::UnsupportedAutomorphism { reason: reason.clone() },
            format!("UnsupportedAutomorphism: {reason}"),
        ),
    }
}

fn lift_report(d: &AHDatum, psi: &CurveAutomorphism) -> Result<LiftReport, CoreError> {
    let result = lift_test(d, psi)?;
    let (result, summary) = lift_verdict(&result);
    Ok(LiftReport { automorphism: psi.to_string(), result, summary })
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.rows()
}

fn describe_base(base: &KBase) -> String {
    match base {
        KBase::FullPgl2 => "PGL2: every Mobius map lifts".into(),
        KBase::AffineFamily { point, conjugator } => {
            format!("maps fixing {point}: h^-1 o (t -> a*t + b) o h with h = {conjugator}")
        }
        KBase::TorusFamily { points: [p, q], conjugator } => {
            format!("maps fixing {p} and {q}: h^-1 o (t -> a*t) o h with h = {conjugator}")
        }
        KBase::Finite(v) => {
            let items: Vec<String> = v.iter().map(ToString::to_string).collect();
            format!("finite, {} elements: {{{}}}", v.len(), items.join("; "))
        }
        KBase::EllipticTranslations(locus) => match &locus.points {
            LocusPoints::AllRational => "translations by every rational point".into(),
            LocusPoints::Finite(pts) => {
                let items: Vec<String> = pts.iter().map(ToString::to_string).collect();
                match locus.g {
                    Some(g) => format!("translations by E[{g}](Q) = {{{}}}", items.join(", ")),
                    None => format!("translations by {{{}}}", items.join(", ")),
                }
            }
        },
    }
}

fn aut(d: &AHDatum, warnings: &mut Vec<String>) -> Result<ReportResult, CoreError> {
    let k = lift_group(d)?;
    warnings.extend(k.warnings.iter().cloned());
    let units = units_lattice(d.curve());
    let n = d.torus_rank();
    let lambda_rank = n * units.rank;
    let cosets = k
        .cosets
        .iter()
        .map(|c| {
            let (result, summary) = lift_verdict(&c.result);
            CosetEntry {
                representative: c.representative.to_string(),
                status: match c.status {
                    CosetStatus::Liftable => "Liftable",
                    CosetStatus::NotLiftable => "NotLiftable",
                    CosetStatus::Undetermined => "Undetermined",
                }
                .into(),
                lift: LiftReport { automorphism: c.representative.to_string(), result, summary },
                members: c.members.iter().map(ToString::to_string).collect(),
                note: c.note.clone(),
            }
        })
        .collect();
    let k_generators = k_generators(d, &k)?
        .into_iter()
        .map(|g| GeneratorEntry {
            label: g.label,
            automorphism: g.automorphism.to_string(),
            permutation: g.permutation,
            matrix: matrix_rows(&g.matrix),
        })
        .collect();
    let lambda = if lambda_rank == 0 { "0".to_string() } else { format!("Z^{lambda_rank}") };
    let curve_part = match d.curve() {
        CurveModel::Elliptic(_) => "Aut(C) = E(Q) x {+-1}",
        _ => "Aut(C)",
    };
    Ok(ReportResult::Aut(AutReport {
        genus: k.genus,
        torus_rank: n,
        lambda_rank,
        units_basis: units.basis_labels(),
        bad_locus: k.bad_locus.classes.iter().map(|c| c.iter().map(ToString::to_string).collect()).collect(),
        rigid: k.rigid.iter().map(ToString::to_string).collect(),
        k_base: describe_base(&k.base),
        cosets,
        spot_checks: k.spot_checks.len(),
        k_generators,
        exact_sequence: vec![
            format!("1 -> T = G_m^{n} -> Aut_C^T(X) -> Lambda = {lambda} -> 1"),
            format!("1 -> Aut_C^T(X) -> Aut^T(X) -> K -> 1, K in {curve_part}"),
        ],
    }))
}

fn h1(matrix: &str, warnings: &mut Vec<String>) -> Result<ReportResult, CliError> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(matrix)
        .map_err(|e| CliError::input("--matrix", "", format!("expected JSON integer rows: {e}")))?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(CliError::input("--matrix", "", CoreError::NotSquare.to_string()));
    }
    let sigma = IntMatrix::from_rows(&rows).map_err(|e| CliError::from_core("--matrix", "", e))?;
    let l = InvolutionLattice::new(sigma).map_err(|e| CliError::from_core("--matrix", "", e))?;
    let r = cohomology(&l)?;
    let brute_force = if l.rank() <= 5 {
        match brute_force_h1(&l, 5) {
            Ok(bf) => {
                if bf.order as u64 != r.h1_order {
                    return Err(CliError::Breach(format!(
                        "Smith form gives |H1| = {}, enumeration gives {}",
                        r.h1_order, bf.order
                    )));
                }
                Some(BruteForceEntry { order: bf.order, bound: bf.bound, representatives: bf.representatives })
            }
            Err(CoreError::Unstable(msg)) => {
                warnings.push(format!("brute-force cross-check skipped: {msg}"));
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    Ok(ReportResult::H1(H1Report {
        matrix: rows,
        rank: r.rank,
        decomposition: [r.a, r.b, r.c],
        h1_order: r.h1_order,
        h1_group: group_name(&r.h1_invariants),
        tate0_order: r.tate0_order,
        h0_rank: r.h0_rank,
        permutation_module: r.b == 0,
        brute_force,
    }))
}

fn forms(
    loaded: &LoadedDatum,
    bound: i64,
    label: &str,
    warnings: &mut Vec<String>,
) -> Result<(ReportResult, i32), CliError> {
    if !loaded.real {
        return Err(CliError::input(label, "real.enabled", "the datum does not enable a real structure"));
    }
    let core = |e| CliError::from_core(label, "", e);
    let rd = validate_real_datum(loaded.datum.clone()).map_err(core)?;
    let analysis = forms_analysis(&rd, bound).map_err(|e| match e {
        CoreError::OutOfRange(m) => CliError::input(label, "--bound", m),
        e => core(e),
    })?;
    warnings.extend(analysis.warnings.iter().cloned());
    let lambda = twisted_lambda(&rd);
    let (verdict, code) = match &analysis.verdict {
        FormsVerdict::FiniteCertified(FiniteEvidence::ZeroLattice) => {
            (VerdictEntry::FiniteCertified { evidence: "Lambda = 0".into() }, 0)
        }
        FormsVerdict::FiniteCertified(FiniteEvidence::FixedPuncture(p)) => (
            VerdictEntry::FiniteCertified { evidence: format!("K and conjugation fix the puncture {p}") },
            0,
        ),
        FormsVerdict::NotCertified { involution, report } => (
            VerdictEntry::NotCertified {
                involution: involution.clone(),
                decomposition: [report.a, report.b, report.c],
                h1_order: report.h1_order,
            },
            0,
        ),
        FormsVerdict::Unsupported(reason) => (VerdictEntry::Unsupported { reason: reason.clone() }, 2),
    };
    let mu_family = analysis.mu.as_ref().map(|mu| MuEntry {
        sign_h1_order: mu.sign_h1.h1_order,
        sign_h1_group: group_name(&mu.sign_h1.h1_invariants),
        brute_force_order: mu.brute_force.order,
        brute_force_bounds: [mu.brute_force.bound, mu.brute_force.bound + 2],
        bound: mu.classification.bound,
        classes: mu.classification.classes.clone(),
        class_invariant: "n mod 2".into(),
        parity_invariant: mu.classification.parity_invariant,
        conjugations: mu
            .classification
            .conjugations
            .iter()
            .map(|c| ConjugationEntry { from: c.from, to: c.to, conjugator: c.conjugator.to_string() })
            .collect(),
    });
    Ok((
        ReportResult::Forms(FormsReport {
            verdict,
            twisted_lambda: matrix_rows(lambda.sigma()),
            twisted_decomposition: [analysis.twisted.a, analysis.twisted.b, analysis.twisted.c],
            twisted_h1_order: analysis.twisted.h1_order,
            mu_family,
        }),
        code,
    ))
}

/// Runs a command and renders it; a panic becomes an invariant breach (exit 3).
pub fn run(cli: &Cli) -> (String, i32) {
    let outcome = std::panic::catch_unwind(|| execute(&cli.command)).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        let e = CliError::Breach(msg);
        Outcome {
            report: Report {
                command: cli.command.echo(),
                result: ReportResult::Error(ErrorReport { error: e.kind().into(), message: e.to_string(), exit_code: 3 }),
                warnings: Vec::new(),
            },
            exit_code: 3,
        }
    });
    let text = match cli.format {
        Format::Json => outcome.report.to_json(),
        Format::Text => outcome.report.to_text(),
    };
    (text, outcome.exit_code)
}
