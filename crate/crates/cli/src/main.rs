//! `sphll`: tables, stroll dumps, light-leaf recipes and property checks for
//! a Coxeter system given as a JSON matrix file or a built-in type name.

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spherical_leaves::lightleaf::{build_nsll, build_sdl, build_sll};
use spherical_leaves::strolls::{self, Subexpression};
use spherical_leaves::verify::{run_suites, Suite, VerifyConfig};
use spherical_leaves::{CoxeterMatrix, CoxeterSystem, Error, Expression, GenSet, Hecke, LaurentPoly, SphericalModule};

#[derive(Parser)]
#[command(name = "sphll", version, about = "Hecke algebra, spherical module and light-leaf computations")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Coxeter matrix JSON file, or a built-in type: A<n>, B<n>, H3, I2(<m>), I2(inf).
    #[arg(long, global = true, default_value = "A2")]
    system: String,
    /// Parabolic subset, e.g. `s` or `s,t`.
    #[arg(long = "J", global = true, default_value = "")]
    j: String,
    /// Maximum element length to enumerate.
    #[arg(long, global = true, default_value_t = 16)]
    budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Kazhdan-Lusztig basis element b_x, or c_x in M(J) when --J is given.
    Kl {
        #[arg(short = 'x')]
        x: String,
    },
    /// Expands 1 (x) b_{x_1} ... b_{x_n} in M(J).
    Act {
        #[arg(short = 'x')]
        x: String,
    },
    /// Graded rank polynomial of the double-leaf index set.
    Rank {
        #[arg(short = 'x')]
        x: String,
        #[arg(short = 'y')]
        y: String,
    },
    /// Coset strolls and decorations of one or all subexpressions.
    Stroll {
        #[arg(short = 'x')]
        x: String,
        #[arg(long)]
        bits: Option<String>,
    },
    /// Multiset of endpoints x^e over all subexpressions.
    Localize {
        #[arg(short = 'x')]
        x: String,
    },
    /// Spherical light-leaf recipe.
    Sll {
        #[arg(short = 'x')]
        x: String,
        #[arg(long, required_unless_present = "all")]
        bits: Option<String>,
        /// Every subexpression of the word.
        #[arg(long)]
        all: bool,
    },
    /// Spherical double-leaf recipe.
    Sdl {
        #[arg(short = 'x')]
        x: String,
        #[arg(long)]
        bits: String,
        #[arg(short = 'y')]
        y: String,
        #[arg(long)]
        bits2: String,
    },
    /// Non-spherical light-leaf recipe split as (u, z).
    Nsll {
        #[arg(short = 'x')]
        x: String,
        #[arg(long, required_unless_present = "all")]
        bits: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Runs property suites: hecke, spherical, strolls, lightleaf or all.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Longest words for pairwise checks.
        #[arg(long)]
        max_len: Option<usize>,
        /// Random instances per algebraic identity.
        #[arg(long)]
        samples: Option<usize>,
    },
}

enum Failure {
    Lib(Error),
    Config(String),
    Properties,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Properties | Failure::Lib(Error::InternalInconsistency(_)) => 1,
            Failure::Lib(Error::BudgetExceeded { .. }) => 3,
            Failure::Lib(Error::EndpointMismatch(..)) => 4,
            Failure::Lib(_) | Failure::Config(_) => 2,
        }
    }
}

fn builtin(name: &str) -> Option<CoxeterMatrix> {
    let upper = name.trim().to_ascii_uppercase();
    if let Some(m) = upper.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
        let m = if m == "INF" { 0 } else { m.parse().ok().filter(|&m: &u32| m >= 2)? };
        return Some(CoxeterMatrix::dihedral(m));
    }
    if upper == "H3" {
        return Some(CoxeterMatrix::type_h3());
    }
    let (kind, n) = upper.split_at(1.min(upper.len()));
    let n: usize = n.parse().ok().filter(|n| (1..=8).contains(n))?;
    match kind {
        "A" => Some(CoxeterMatrix::type_a(n)),
        "B" if n >= 2 => Some(CoxeterMatrix::type_b(n)),
        _ => None,
    }
}

fn load_system(common: &Common) -> Result<CoxeterSystem, Failure> {
    let path = Path::new(&common.system);
    let matrix = if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        CoxeterMatrix::from_json(&text)?
    } else {
        builtin(&common.system)
            .ok_or_else(|| Failure::Config(format!("{:?} is neither a file nor a built-in type", common.system)))?
    };
    Ok(CoxeterSystem::build(matrix, common.budget))
}

fn parse_j(sys: &CoxeterSystem, text: &str) -> Result<GenSet, Failure> {
    Ok(sys.parse_word(text)?.letters().iter().copied().collect())
}

fn subexpression(sys: &CoxeterSystem, x: &str, bits: &str) -> Result<Subexpression, Failure> {
    let word = sys.parse_word(x)?;
    if word.len() != bits.trim().len() {
        return Err(Failure::Config(format!("{} bits for a word of length {}", bits.trim().len(), word.len())));
    }
    Ok(Subexpression::from_bitstring(word, bits)?)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct TermRow {
    elt: String,
    coeff: String,
}

fn terms_csv<'a>(sys: &CoxeterSystem, terms: impl Iterator<Item = (spherical_leaves::Element, &'a LaurentPoly)>) -> Result<String, Failure> {
    let rows: Vec<TermRow> = terms
        .map(|(x, c)| TermRow {
            elt: sys.display_element(x),
            coeff: c.to_string(),
        })
        .collect();
    Ok(strolls::to_csv(&rows)?)
}

fn no_csv(command: &str) -> Failure {
    Failure::Lib(Error::UnknownFormat(format!("csv is not available for {command}")))
}

fn run(cli: Cli) -> Result<String, Failure> {
    let sys = load_system(&cli.common)?;
    let j = parse_j(&sys, &cli.common.j)?;
    let par = sys.parabolic(j)?;
    let format = cli.common.format;
    let hecke = Hecke::new(&sys);
    match cli.command {
        Command::Kl { x } => {
            let x = sys.parse_element(&x)?;
            if j.is_empty() {
                let b = hecke.kl_basis(x)?;
                match format {
                    Format::Text => Ok(b.render(&sys)),
                    Format::Json => Ok(pretty(&b.to_json(&sys))),
                    Format::Csv => terms_csv(&sys, b.iter()),
                }
            } else {
                let m = SphericalModule::new(&hecke, par.clone());
                let c = m.kl_c(x)?;
                match format {
                    Format::Text => Ok(c.render(&sys)),
                    Format::Json => Ok(pretty(&c.to_json(&sys, &par))),
                    Format::Csv => terms_csv(&sys, c.iter()),
                }
            }
        }
        Command::Act { x } => {
            let m = SphericalModule::new(&hecke, par.clone());
            let out = m.expand_expression(&sys.parse_word(&x)?)?;
            match format {
                Format::Text => Ok(out.render(&sys)),
                Format::Json => Ok(pretty(&out.to_json(&sys, &par))),
                Format::Csv => terms_csv(&sys, out.iter()),
            }
        }
        Command::Rank { x, y } => {
            let (xw, yw) = (sys.parse_word(&x)?, sys.parse_word(&y)?);
            let pairs = strolls::double_leaf_index(&sys, &xw, &yw, j)?;
            let poly = strolls::rank_poly(&sys, &xw, &yw, j)?;
            match format {
                Format::Text => Ok(format!("{poly}\n")),
                Format::Json => Ok(pretty(&serde_json::json!({
                    "x": sys.format_word(&xw),
                    "y": sys.format_word(&yw),
                    "J": names(&sys, j),
                    "rank": poly.to_string(),
                    "poly": poly,
                    "pairs": strolls::pair_rows(&sys, &pairs),
                }))),
                Format::Csv => Ok(strolls::to_csv(&strolls::pair_rows(&sys, &pairs))?),
            }
        }
        Command::Stroll { x, bits } => {
            let word = sys.parse_word(&x)?;
            let mut rows = strolls::stroll_rows(&sys, &word, j)?;
            if let Some(bits) = bits {
                let want = subexpression(&sys, &x, &bits)?.bitstring();
                rows.retain(|r| r.bits == want);
            }
            match format {
                Format::Text => Ok(stroll_table(&rows)),
                Format::Json => Ok(pretty(&serde_json::to_value(&rows).expect("serializable"))),
                Format::Csv => Ok(strolls::to_csv(&rows)?),
            }
        }
        Command::Localize { x } => {
            let counts = strolls::localized_summands(&sys, &sys.parse_word(&x)?)?;
            #[derive(Serialize)]
            struct Row {
                elt: String,
                multiplicity: usize,
            }
            let rows: Vec<Row> = counts
                .iter()
                .map(|(&e, &n)| Row {
                    elt: sys.display_element(e),
                    multiplicity: n,
                })
                .collect();
            match format {
                Format::Text => {
                    let width = rows.iter().map(|r| r.elt.len()).max().unwrap_or(0);
                    Ok(rows.iter().map(|r| format!("{:<width$}  {}\n", r.elt, r.multiplicity)).collect())
                }
                Format::Json => Ok(pretty(&serde_json::to_value(&rows).expect("serializable"))),
                Format::Csv => Ok(strolls::to_csv(&rows)?),
            }
        }
        Command::Sll { x, bits, all } => {
            let subs = selected(&sys, &x, bits.as_deref(), all)?;
            let recipes = subs.iter().map(|e| build_sll(&sys, e, j, None)).collect::<Result<Vec<_>, _>>()?;
            match format {
                Format::Text => Ok(recipes.iter().map(|r| r.render_text(&sys)).collect::<Vec<_>>().join("\n")),
                Format::Json if !all => Ok(pretty(&recipes[0].to_json(&sys))),
                Format::Json => Ok(pretty(&recipes.iter().map(|r| r.to_json(&sys)).collect())),
                Format::Csv => Err(no_csv("sll")),
            }
        }
        Command::Sdl { x, bits, y, bits2 } => {
            let e = subexpression(&sys, &x, &bits)?;
            let f = subexpression(&sys, &y, &bits2)?;
            let d = build_sdl(&sys, &e, &f, j)?;
            Ok(d.render(&sys, format.name())?)
        }
        Command::Nsll { x, bits, all } => {
            let subs = selected(&sys, &x, bits.as_deref(), all)?;
            let recipes = subs.iter().map(|e| build_nsll(&sys, e, j)).collect::<Result<Vec<_>, _>>()?;
            match format {
                Format::Text => Ok(recipes.iter().map(|r| r.render_text(&sys)).collect::<Vec<_>>().join("\n")),
                Format::Json if !all => Ok(pretty(&recipes[0].to_json(&sys))),
                Format::Json => Ok(pretty(&recipes.iter().map(|r| r.to_json(&sys)).collect())),
                Format::Csv => Err(no_csv("nsll")),
            }
        }
        Command::Verify { suite, max_len, samples } => {
            let suites = Suite::parse_list(&suite)?;
            let mut cfg = VerifyConfig::for_system(&sys);
            if let Some(n) = max_len {
                cfg.word_len = n;
                cfg.long_word_len = n + 1;
            }
            if let Some(n) = samples {
                cfg.samples = n;
            }
            let results = run_suites(&sys, &suites, &cfg);
            let failed = results.iter().filter(|r| !r.passed()).count();
            let report = match format {
                Format::Text => {
                    let mut out: String = results.iter().map(|r| format!("{r}\n")).collect();
                    let _ = writeln!(out, "{} properties, {} failed", results.len(), failed);
                    out
                }
                Format::Json => pretty(&serde_json::Value::Array(
                    results
                        .iter()
                        .map(|r| {
                            serde_json::json!({
                                "suite": r.suite.name(),
                                "property": r.name,
                                "checked": r.checked,
                                "passed": r.passed(),
                                "counterexample": r.counterexample,
                            })
                        })
                        .collect(),
                )),
                Format::Csv => return Err(no_csv("verify")),
            };
            if failed > 0 {
                print!("{report}");
                return Err(Failure::Properties);
            }
            Ok(report)
        }
    }
}

fn names(sys: &CoxeterSystem, j: GenSet) -> Vec<String> {
    j.iter().map(|s| sys.generator_name(s).to_string()).collect()
}

fn selected(sys: &CoxeterSystem, x: &str, bits: Option<&str>, all: bool) -> Result<Vec<Subexpression>, Failure> {
    if all {
        let word: Expression = sys.parse_word(x)?;
        Ok(Subexpression::all(&word).collect())
    } else {
        Ok(vec![subexpression(sys, x, bits.unwrap_or_default())?])
    }
}

fn stroll_table(rows: &[strolls::StrollRow]) -> String {
    let header = ["bits", "labels", "stroll", "sdef"];
    let cells: Vec<[String; 4]> = rows
        .iter()
        .map(|r| [r.bits.clone(), r.labels.clone(), r.stroll.clone(), r.sdef.to_string()])
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |row: [&str; 4]| {
        let mut s = String::new();
        for (i, (c, w)) in row.iter().zip(widths).enumerate() {
            if i + 1 == row.len() {
                s.push_str(c);
            } else {
                let _ = write!(s, "{c:<w$}  ");
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header);
    for row in &cells {
        out.push_str(&line([&row[0], &row[1], &row[2], &row[3]]));
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            match &failure {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Config(msg) => eprintln!("error: {msg}"),
                Failure::Properties => eprintln!("error: some properties failed"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
