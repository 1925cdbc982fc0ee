//! `weilstats`: point-count bounds, zeta functions and the modular-form traces
//! extracted from curve counts.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use weilstats::curve_models::{hermitian_model, parse_model, tower_count};
use weilstats::eichler_selberg::{hecke_charpoly, trace_tn};
use weilstats::gf::{field_of_size, prime_power};
use weilstats::moduli_stats::{cache, sigma_moment, EnsembleStore};
use weilstats::motive_ring::getzler_ec_m1n;
use weilstats::siegel_extract::{
    genus2_hecke_trace_in, genus3_hecke_trace_in, harder_check, DimensionTable, Eigenform,
    HarderInput, SiegelWeight,
};
use weilstats::tables::{parse_tables, table_diff, BoundMethod, DiffStatus};
use weilstats::zeta_bounds::{
    counts_from_weil, explicit_formula_bound, format_weil_poly, hasse_weil_bound,
    hasse_weil_coefficients, hasse_weil_serre_bound, ihara_bound, maximal_curve_classify,
    oesterle_search, weil_from_counts, SearchBudget, WeilData,
};
use weilstats::{Error, Result};

use report::{Format, Report};

/// Coefficient count for the explicit-formula search.
const SEARCH_TERMS: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "weilstats", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Md, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Hw,
    Ihara,
    Ef,
    Search,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Upper bounds on the number of points of a genus-g curve over F_q.
    Bounds {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        g: u64,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
    },
    /// Weil polynomial from point counts, or from a curve model.
    Zeta {
        #[arg(long)]
        q: u64,
        #[arg(long, required_unless_present = "model")]
        g: Option<usize>,
        /// c(1),...,c(g).
        #[arg(long, value_delimiter = ',', required_unless_present = "model")]
        counts: Vec<BigInt>,
        /// Element codes, e.g. "a1,a2,a3,a4,a6" or "h0,..|f0,..".
        #[arg(long, conflicts_with_all = ["g", "counts"])]
        model: Option<String>,
        /// Number of counts c(n) to print.
        #[arg(long, default_value_t = 4)]
        ext: usize,
    },
    /// Moment sigma_a(q) over elliptic curves.
    Moments {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u32,
    },
    /// Tr T(n) on S_k(SL(2,Z)).
    Trace {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
    },
    /// Characteristic polynomial of T(p) on S_k(SL(2,Z)).
    Charpoly {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: u64,
    },
    /// Tr T(q) on S_{j,k}(Sp(4,Z)).
    Siegel2 {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Tr T(q) on S_{i,j,k}(Sp(6,Z)).
    Siegel3 {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Congruence between a Siegel eigenvalue and an elliptic eigenform.
    Harder {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        /// Generator u,v of the prime (ell, u + v sqrt d).
        #[arg(long, value_delimiter = ',')]
        pi: Vec<BigInt>,
        #[arg(long)]
        d: Option<u64>,
        /// Eigenvalue of the Siegel form at p.
        #[arg(long, allow_hyphen_values = true)]
        lambda_f: BigInt,
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// Use the eigenform with the negative surd.
        #[arg(long)]
        minus: bool,
    },
    /// e_c(M_{1,n}) from Getzler's formula.
    Getzler {
        #[arg(long)]
        n: u32,
        /// Evaluate at q = P.
        #[arg(long)]
        eval: Option<u64>,
    },
    /// The hermitian curve over F_{q0^2}.
    Hermitian {
        #[arg(long = "q")]
        q0: u64,
    },
    /// Chain counts in the tower over F_{q0^2}.
    Tower {
        #[arg(long = "q")]
        q0: u64,
        #[arg(long)]
        level: usize,
    },
    /// N_q(g) table tools.
    Tables {
        #[command(subcommand)]
        action: TablesAction,
    },
    /// Ensemble snapshots.
    Ensemble {
        #[command(subcommand)]
        action: EnsembleAction,
    },
}

#[derive(Subcommand, Debug)]
enum TablesAction {
    /// Compares a table with every internal bound.
    Diff {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum EnsembleAction {
    /// Enumerates all curves of a genus over F_q and writes a snapshot.
    Build {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summarizes a snapshot.
    Info { file: PathBuf },
}

fn store(dir: &Option<PathBuf>) -> EnsembleStore {
    dir.as_ref()
        .map(EnsembleStore::with_dir)
        .unwrap_or_default()
}

fn field_of(q: u64) -> Result<(u64, u32)> {
    prime_power(q)
        .map(|(p, r)| (p as u64, r))
        .ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))
}

fn trace_label(w: &SiegelWeight) -> &'static str {
    match DimensionTable::shipped().dimension(w) {
        Some(1) => "eigenvalue",
        _ => "trace",
    }
}

fn dimension_cell(w: &SiegelWeight) -> String {
    DimensionTable::shipped()
        .dimension(w)
        .map_or_else(|| "unknown".to_string(), |d| d.to_string())
}

fn weil_rows(r: &mut Report, w: &WeilData, ext: usize) -> Result<()> {
    r.row(["P(t)".to_string(), format_weil_poly(w.poly()?)]);
    r.row([
        "roots on circle".to_string(),
        w.roots_on_circle()?.to_string(),
    ]);
    for n in 1..=ext {
        r.row([format!("c({n})"), counts_from_weil(w, n)?.to_string()]);
    }
    Ok(())
}

fn run(cmd: Command) -> Result<(Report, bool)> {
    let mut ok = true;
    let report = match cmd {
        Command::Bounds { q, g, method } => {
            field_of(q)?;
            let mut r = Report::new("bounds", &["method", "bound"]);
            let want = |m: Method| method == m || method == Method::All;
            if want(Method::Hw) {
                r.row(["hasse-weil", &hasse_weil_bound(q, g).to_string()]);
                r.row(["serre", &hasse_weil_serre_bound(q, g).to_string()]);
            }
            if want(Method::Ihara) {
                r.row(["ihara", &ihara_bound(q, g).to_string()]);
            }
            if want(Method::Ef) {
                let ef = explicit_formula_bound(q, g, &hasse_weil_coefficients())?;
                r.row(["explicit-formula", &ef.bound.to_string()]);
            }
            if want(Method::Search) {
                let ef = oesterle_search(q, g, SEARCH_TERMS, SearchBudget::default())?;
                r.row(["search", &ef.bound.to_string()]);
            }
            r
        }
        Command::Zeta {
            q,
            g,
            counts,
            model,
            ext,
        } => {
            field_of(q)?;
            let mut r = Report::new("zeta", &["quantity", "value"]);
            match model {
                Some(lit) => {
                    let field = field_of_size(q)?;
                    let m = parse_model(&field, &lit)?;
                    let m = m.as_model();
                    r.row(["genus".to_string(), m.genus().to_string()]);
                    weil_rows(&mut r, &m.weil_data()?, ext)?;
                }
                None => {
                    let g = g.expect("required by clap");
                    weil_rows(&mut r, &weil_from_counts(q, g, &counts)?, ext)?;
                }
            }
            r
        }
        Command::Moments { q, a } => {
            let mut r = Report::new("moments", &["q", "a", "sigma"]);
            r.row([
                q.to_string(),
                a.to_string(),
                sigma_moment(q, a)?.to_string(),
            ]);
            r
        }
        Command::Trace { k, n } => {
            let mut r = Report::new("trace", &["k", "n", "trace"]);
            r.row([k.to_string(), n.to_string(), trace_tn(k, n)?.to_string()]);
            r
        }
        Command::Charpoly { k, p } => {
            let mut r = Report::new("charpoly", &["degree", "coefficient"]);
            for (i, c) in hecke_charpoly(k, p)?.iter().enumerate() {
                r.row([i.to_string(), c.to_string()]);
            }
            r
        }
        Command::Siegel2 { j, k, q, cache } => {
            let w = SiegelWeight::Degree2 { j, k };
            let t = genus2_hecke_trace_in(&store(&cache), j, k, q)?;
            let mut r = Report::new("siegel2", &["weight", "q", "dimension", "kind", "value"]);
            r.row([
                w.to_string(),
                q.to_string(),
                dimension_cell(&w),
                trace_label(&w).into(),
                t.to_string(),
            ]);
            r
        }
        Command::Siegel3 { i, j, k, q, cache } => {
            let w = SiegelWeight::Degree3 { i, j, k };
            let t = genus3_hecke_trace_in(&store(&cache), i, j, k, q)?;
            let mut r = Report::new("siegel3", &["weight", "q", "dimension", "kind", "value"]);
            r.row([
                w.to_string(),
                q.to_string(),
                dimension_cell(&w),
                trace_label(&w).into(),
                t.to_string(),
            ]);
            r
        }
        Command::Harder {
            a,
            b,
            p,
            ell,
            pi,
            d,
            lambda_f,
            s,
            minus,
        } => {
            let input = HarderInput {
                a,
                b,
                p,
                lambda_f,
                eigenform: if minus {
                    Eigenform::MinusSurd
                } else {
                    Eigenform::PlusSurd
                },
                ell,
                s,
                d,
                pi: match pi.as_slice() {
                    [] => None,
                    [u, v] => Some((u.clone(), v.clone())),
                    _ => return Err(Error::InvalidInput("--pi takes U,V".into())),
                },
            };
            let h = harder_check(&input)?;
            let mut r = Report::new("harder", &["quantity", "value"]);
            r.row(["weight of f".to_string(), h.weight.to_string()]);
            let poly: Vec<String> = h.charpoly.iter().map(|c| c.to_string()).collect();
            r.row(["charpoly".to_string(), poly.join(" ")]);
            r.row(["lambda_p(f)".to_string(), h.lambda_p_f.to_string()]);
            r.row(["modulus".to_string(), h.modulus.to_string()]);
            if let Some(s) = &h.sqrt_d_residue {
                r.row(["sqrt(d) mod pi".to_string(), s.to_string()]);
            }
            r.row([
                "lambda_p(f) mod pi".to_string(),
                h.lambda_p_f_residue.to_string(),
            ]);
            r.row(["lhs mod pi".to_string(), h.lhs_residue.to_string()]);
            r.row(["rhs mod pi".to_string(), h.rhs_residue.to_string()]);
            r.row(["congruence".to_string(), h.holds.to_string()]);
            r
        }
        Command::Getzler { n, eval } => {
            let e = getzler_ec_m1n(n)?;
            let mut r = Report::new("getzler", &["n", "e_c", "value"]);
            let value = match eval {
                Some(q) => {
                    let (p, k) = field_of(q)?;
                    e.evaluate(p, k)?.to_string()
                }
                None => String::new(),
            };
            r.row([n.to_string(), e.to_string(), value]);
            r
        }
        Command::Hermitian { q0 } => {
            let h = hermitian_model(q0)?;
            let q = q0 * q0;
            let class = maximal_curve_classify(q, h.genus as u64)?;
            ok = h.verified;
            let mut r = Report::new("hermitian", &["quantity", "value"]);
            r.row(["q".to_string(), q.to_string()]);
            r.row(["genus".to_string(), h.genus.to_string()]);
            let counts: Vec<String> = h.counts.iter().map(|c| c.to_string()).collect();
            r.row(["counts".to_string(), counts.join(",")]);
            r.row(["P(t)".to_string(), format_weil_poly(h.weil.poly()?)]);
            r.row(["classification".to_string(), format!("{class:?}")]);
            r.row(["verified".to_string(), h.verified.to_string()]);
            r
        }
        Command::Tower { q0, level } => {
            let t = tower_count(q0, level)?;
            let mut r = Report::new("tower", &["level", "chains", "nonzero last"]);
            r.row([level as u64, t.chains, t.nonzero_last]);
            r
        }
        Command::Tables {
            action: TablesAction::Diff { file },
        } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", file.display())))?;
            let methods = [
                BoundMethod::HasseWeil,
                BoundMethod::Serre,
                BoundMethod::Ihara,
                BoundMethod::Search(SEARCH_TERMS),
            ];
            let d = table_diff(&parse_tables(&text)?, &methods)?;
            ok = d.violations().next().is_none();
            let mut r = Report::new(
                "tables diff",
                &["q", "g", "table", "bound", "method", "status", "amount"],
            );
            for row in &d.rows {
                let (status, amount) = match &row.status {
                    DiffStatus::Violation { excess } => ("VIOLATION", excess),
                    DiffStatus::Slack { slack } => ("SLACK", slack),
                };
                r.row([
                    row.entry.q.to_string(),
                    row.entry.g.to_string(),
                    row.entry.value.to_string(),
                    row.bound.to_string(),
                    format!("{:?}", row.method),
                    status.to_string(),
                    amount.to_string(),
                ]);
            }
            r
        }
        Command::Ensemble {
            action: EnsembleAction::Build { genus, q, out },
        } => {
            let e = cache::build(genus, q)?;
            cache::save(&e, &out)?;
            let mut r = Report::new("ensemble build", &["genus", "q", "classes", "mass", "file"]);
            r.row([
                genus.to_string(),
                q.to_string(),
                e.entries.len().to_string(),
                e.mass().to_string(),
                out.display().to_string(),
            ]);
            r
        }
        Command::Ensemble {
            action: EnsembleAction::Info { file },
        } => {
            let e = cache::load(&file)?;
            let mut r = Report::new("ensemble info", &["family", "group order", "equations"]);
            for f in &e.families {
                r.row([
                    f.label.clone(),
                    f.group_order.to_string(),
                    f.equations.to_string(),
                ]);
            }
            r.row([
                "total classes".to_string(),
                String::new(),
                e.entries.len().to_string(),
            ]);
            r.row(["mass".to_string(), String::new(), e.mass().to_string()]);
            r.row(["version".to_string(), String::new(), cache::code_version()]);
            r
        }
    };
    Ok((report, ok))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Unsupported(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((r, ok)) => {
            print!("{}", r.render(cli.format));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
