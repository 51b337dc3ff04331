mod emit;
mod exit;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use toprec_core::airy_engine::{airy_recursion, bgw_tensors, kw_tensors, PartitionFunction};
use toprec_core::enumerative::{
    hurwitz_from_tr, hurwitz_oracle, hurwitz_profiles, intersection_table, ClassTag, HurwitzRecord, IntersectionRecord,
};
use toprec_core::exact_algebra::Scalar;
use toprec_core::loop_checks::full_report;
use toprec_core::quantum_curve::{quantum_check, wavefunction, QuantumOperator};
use toprec_core::spectral_curve::{catalog_names, parse_curve_config, CatalogCurve, SpectralCurve};
use toprec_core::tr_engine::{CorrelatorStore, KernelSign, TrOptions};

use emit::{Format, Table};

#[derive(Parser)]
#[command(name = "toprec", version, about = "Exact topological recursion on genus-zero spectral curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct CurveArgs {
    /// Catalog name (airy, bessel, mirzakhani, kappa_gen:M, lambert) or a curve file.
    #[arg(long, default_value = "airy")]
    curve: String,
    /// Largest 2g - 2 + n computed.
    #[arg(long, default_value_t = 3)]
    chi_max: i64,
    /// Use the opposite sign for the recursion kernel.
    #[arg(long)]
    reversed_sign: bool,
}

#[derive(clap::Args, Clone, Copy)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Tr,
    Airy,
}

#[derive(Clone, Copy, ValueEnum)]
enum IntersectionKind {
    Psi,
    Theta,
    Kappa,
}

#[derive(Subcommand)]
enum CurveCommand {
    /// List catalog curves.
    List,
    /// Describe one curve.
    Describe { name: String },
}

#[derive(Subcommand)]
enum Command {
    /// All F_{g,n} coefficients with 2g - 2 + n up to chi-max.
    #[command(alias = "coefficients")]
    Correlators {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        out: OutArgs,
        /// tr, or airy for the quadratic recursion (airy and bessel curves only).
        #[arg(long, value_enum, default_value_t = Engine::Tr)]
        engine: Engine,
    },
    /// Run the invariant suites; exit code 2 on failure.
    Check {
        #[command(flatten)]
        curve: CurveArgs,
        /// Corrupt the first stored coefficient of omega_{g,n}, given as "g,n".
        #[arg(long)]
        corrupt: Option<String>,
    },
    /// Intersection numbers on the moduli space of curves.
    Intersections {
        #[arg(value_enum)]
        kind: IntersectionKind,
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        chi_max: i64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Simple Hurwitz numbers from the Lambert curve.
    Hurwitz {
        #[arg(long)]
        g: Option<u32>,
        /// Comma-separated ramification profile over infinity.
        #[arg(long)]
        profile: Option<String>,
        /// Without --profile: every profile up to this degree.
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, default_value_t = 2)]
        chi_max: i64,
        /// Compare with the symmetric-group enumeration.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// WKB wave function at z = infinity.
    Wavefunction {
        #[arg(long, default_value = "airy")]
        curve: String,
        /// Highest hbar-grade.
        #[arg(long, default_value_t = 3)]
        order: i64,
        /// Apply (hbar d/dx)^2 - 2x and report residuals.
        #[arg(long)]
        verify: bool,
        /// Number of Laurent coefficients printed per grade.
        #[arg(long, default_value_t = 12)]
        terms: i64,
    },
    /// Curve catalog.
    Curve {
        #[command(subcommand)]
        command: CurveCommand,
    },
}

fn load_curve(spec: &str) -> Result<SpectralCurve> {
    if let Ok(c) = spec.parse::<CatalogCurve>() {
        return Ok(c.build());
    }
    let path = PathBuf::from(spec);
    if !path.exists() {
        return Err(exit::config(format!(
            "unknown curve {spec:?}; expected one of {} or a curve file",
            catalog_names().join(", ")
        )));
    }
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_curve_config(&text)?)
}

fn build_store(args: &CurveArgs) -> Result<CorrelatorStore> {
    if args.chi_max < 1 {
        return Err(exit::config("chi-max must be at least 1"));
    }
    let curve = load_curve(&args.curve)?;
    let opts = TrOptions {
        kernel_sign: if args.reversed_sign { KernelSign::Reversed } else { KernelSign::Standard },
        ..TrOptions::default()
    };
    Ok(CorrelatorStore::build_with(curve, args.chi_max, opts)?)
}

fn catalog_store(c: CatalogCurve, chi_max: i64) -> Result<CorrelatorStore> {
    build_store(&CurveArgs {
        curve: c.to_string(),
        chi_max,
        reversed_sign: false,
    })
}

fn parse_list(s: &str, what: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| exit::config(format!("bad {what} {s:?}"))))
        .collect()
}

fn cmd_correlators(curve: &CurveArgs, out: OutArgs, engine: Engine) -> Result<()> {
    let store = build_store(curve)?;
    let single = store.num_points() == 1;
    let jsons = match engine {
        Engine::Tr => store.tensors().map(|t| t.to_json()).collect::<Vec<_>>(),
        Engine::Airy => {
            let tensors = match curve.curve.as_str() {
                "airy" => kw_tensors(),
                "bessel" => bgw_tensors(),
                other => return Err(exit::config(format!("no Airy structure tensors for {other}"))),
            };
            airy_recursion(&tensors, curve.chi_max)?.to_json()
        }
    };
    let mut sorted = jsons;
    sorted.sort_by_key(|t| (2 * t.g as i64 - 2 + t.n as i64, t.g));
    match out.format {
        Format::Json => emit::json(&json!({
            "curve": store.curve().name,
            "chi_max": curve.chi_max,
            "tensors": sorted,
        })),
        Format::Csv => {
            let mut table = Table::new();
            for t in &sorted {
                for e in &t.entries {
                    let idx = e
                        .idx
                        .iter()
                        .map(|&(a, k)| if single { k.to_string() } else { format!("{a}:{k}") })
                        .collect();
                    table.push(t.g, t.n, idx, &e.value);
                }
            }
            table.write()
        }
    }
}

fn cmd_check(curve: &CurveArgs, corrupt: Option<&str>) -> Result<ExitCode> {
    let mut store = build_store(curve)?;
    let mut corrupted = None;
    if let Some(spec) = corrupt {
        let gn = parse_list(spec, "corruption target")?;
        let [g, n] = gn[..] else {
            return Err(exit::config("--corrupt expects g,n"));
        };
        let mut t = store
            .tensor(g as u32, n)
            .ok_or_else(|| exit::config(format!("no omega_{{{g},{n}}} within chi-max")))?
            .clone();
        let (key, old) = t
            .ordered_entries()
            .into_iter()
            .next()
            .ok_or_else(|| exit::config(format!("omega_{{{g},{n}}} has no entries")))?;
        t.set(&key, &old + &Scalar::one());
        store.replace_tensor(t)?;
        corrupted = Some(json!({"g": g, "n": n, "idx": key}));
    }
    let report = full_report(&store, curve.chi_max)?;
    let mut engines = serde_json::Value::Null;
    let mut engines_ok = true;
    let tensors = match store.curve().name.as_str() {
        "airy" => Some(kw_tensors()),
        "bessel" => Some(bgw_tensors()),
        _ => None,
    };
    if let (Some(tensors), 1) = (tensors, store.num_points()) {
        let airy = airy_recursion(&tensors, curve.chi_max)?;
        let tr = PartitionFunction::from_store(&store)?;
        let mut mismatches = Vec::new();
        for t in tr.tensors() {
            if airy.tensor(t.g, t.n) != Some(t) {
                mismatches.push(json!({"g": t.g, "n": t.n}));
            }
        }
        engines_ok = mismatches.is_empty();
        engines = json!({"status": if engines_ok { "pass" } else { "fail" }, "mismatches": mismatches});
    }
    let status = if report.has_failure() || !engines_ok {
        "fail"
    } else if report.has_indeterminate() {
        "indeterminate"
    } else {
        "pass"
    };
    emit::json(&json!({
        "status": status,
        "corrupted": corrupted,
        "engine_equivalence": engines,
        "report": report,
    }))?;
    Ok(match status {
        "fail" => ExitCode::from(exit::INVARIANT),
        "indeterminate" => ExitCode::from(exit::TRUNCATION),
        _ => ExitCode::SUCCESS,
    })
}

fn intersection_rows(records: &[IntersectionRecord], out: OutArgs) -> Result<()> {
    match out.format {
        Format::Json => emit::json(&records),
        Format::Csv => {
            let mut table = Table::new();
            for r in records {
                let mut idx: Vec<String> = r.psi.iter().map(ToString::to_string).collect();
                if r.class == ClassTag::Kappa1Psi {
                    idx.insert(0, format!("kappa1^{}", r.kappa1));
                }
                table.push(r.g, r.n, idx, &r.value);
            }
            table.write()
        }
    }
}

fn cmd_intersections(kind: IntersectionKind, g: Option<u32>, n: Option<usize>, chi_max: i64, out: OutArgs) -> Result<()> {
    let chi = match (g, n) {
        (Some(g), Some(n)) => (2 * g as i64 - 2 + n as i64).max(1),
        _ => chi_max,
    };
    let (curve, class) = match kind {
        IntersectionKind::Psi => (CatalogCurve::Airy, ClassTag::Psi),
        IntersectionKind::Theta => (CatalogCurve::Bessel, ClassTag::ThetaPsi),
        IntersectionKind::Kappa => (CatalogCurve::Mirzakhani, ClassTag::Kappa1Psi),
    };
    let store = catalog_store(curve, chi)?;
    let records: Vec<_> = intersection_table(&store, class)?
        .into_iter()
        .filter(|r| g.is_none_or(|g| r.g == g) && n.is_none_or(|n| r.n == n))
        .collect();
    intersection_rows(&records, out)
}

fn cmd_hurwitz(g: Option<u32>, profile: Option<&str>, max_degree: usize, chi_max: i64, oracle: bool, out: OutArgs) -> Result<ExitCode> {
    let targets: Vec<(u32, Vec<usize>)> = match profile {
        Some(p) => vec![(g.unwrap_or(0), parse_list(p, "profile")?)],
        None => hurwitz_profiles(max_degree, -1, chi_max)
            .into_iter()
            .filter(|(gg, p)| g.is_none_or(|g| *gg == g) && !(*gg == 0 && p.len() == 2))
            .collect(),
    };
    let chi_needed = targets
        .iter()
        .map(|(g, p)| 2 * *g as i64 - 2 + p.len() as i64)
        .max()
        .unwrap_or(1)
        .max(1);
    let store = catalog_store(CatalogCurve::Lambert, chi_needed)?;
    let mut records: Vec<HurwitzRecord> = Vec::new();
    let mut agreement = Vec::new();
    for (g, p) in &targets {
        let r = hurwitz_from_tr(&store, *g, p)?;
        if oracle {
            let o = hurwitz_oracle(*g, p)?;
            agreement.push(o.value == r.value);
        }
        records.push(r);
    }
    let all_agree = agreement.iter().all(|&a| a);
    match out.format {
        Format::Json => {
            let rows: Vec<_> = records
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let mut v = json!({"g": r.g, "profile": r.profile, "value": r.value});
                    if oracle {
                        v["oracle_confirmed"] = json!(agreement[i]);
                    }
                    v
                })
                .collect();
            emit::json(&rows)?;
        }
        Format::Csv => {
            let mut table = Table::new();
            for r in &records {
                table.push(r.g, r.profile.len(), r.profile.iter().map(ToString::to_string).collect(), &r.value);
            }
            table.write()?;
        }
    }
    Ok(if all_agree {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(exit::INVARIANT)
    })
}

fn cmd_wavefunction(curve: &str, order: i64, verify: bool, terms: i64) -> Result<ExitCode> {
    let store = build_store(&CurveArgs {
        curve: curve.to_string(),
        chi_max: order.max(1),
        reversed_sign: false,
    })?;
    let psi = wavefunction(&store, order)?;
    let mut out = json!({ "wavefunction": psi.to_json(terms)? });
    let mut code = ExitCode::SUCCESS;
    if verify {
        if store.curve().name != "airy" {
            return Err(exit::config("--verify applies the Airy quantum curve and needs --curve airy"));
        }
        let report = quantum_check(&QuantumOperator::airy(), &psi, order)?;
        let residuals: Vec<_> = report
            .residuals
            .iter()
            .map(|r| json!({"grade": r.grade, "residual": r.residual.to_string()}))
            .collect();
        out["operator"] = json!("(hbar d/dx)^2 - 2x");
        out["residuals"] = json!(residuals);
        out["pass"] = json!(report.pass());
        if !report.pass() {
            code = ExitCode::from(exit::INVARIANT);
        }
    }
    emit::json(&out)?;
    Ok(code)
}

fn cmd_curve(command: &CurveCommand) -> Result<()> {
    match command {
        CurveCommand::List => {
            for name in catalog_names() {
                let c: CatalogCurve = if *name == "kappa_gen" { "kappa_gen:1" } else { name }.parse()?;
                println!("{name}\t{}", c.description());
            }
            Ok(())
        }
        CurveCommand::Describe { name } => {
            let c: CatalogCurve = name.parse().map_err(|_| exit::config(format!("unknown curve {name:?}")))?;
            let curve = c.build();
            emit::json(&json!({
                "name": c.to_string(),
                "description": c.description(),
                "ramification_points": curve.ramification_points,
                "symbols": curve.symbols.iter().map(|s| s.name().to_string()).collect::<Vec<_>>(),
            }))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Correlators { curve, out, engine } => cmd_correlators(curve, *out, *engine).map(|_| ExitCode::SUCCESS),
        Command::Check { curve, corrupt } => cmd_check(curve, corrupt.as_deref()),
        Command::Intersections { kind, g, n, chi_max, out } => {
            cmd_intersections(*kind, *g, *n, *chi_max, *out).map(|_| ExitCode::SUCCESS)
        }
        Command::Hurwitz {
            g,
            profile,
            max_degree,
            chi_max,
            oracle,
            out,
        } => cmd_hurwitz(*g, profile.as_deref(), *max_degree, *chi_max, *oracle, *out),
        Command::Wavefunction {
            curve,
            order,
            verify,
            terms,
        } => cmd_wavefunction(curve, *order, *verify, *terms),
        Command::Curve { command } => cmd_curve(command).map(|_| ExitCode::SUCCESS),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::code_for(&e))
        }
    }
}
