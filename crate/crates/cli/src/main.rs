use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hurwitz::expr::{parse_field, parse_form};
use hurwitz::extension::{check_extension, extend_tree, solve_cartier_with, CartierSearch, CartierVariant};
use hurwitz::schema::{self, TargetDoc};
use hurwitz::tree::{check_compatibility, validate, RationalPlace};
use hurwitz::{rational, Clause, Error, HurwitzTree, ValidationReport};

#[derive(Parser)]
#[command(name = "hurwitz", version, about = "Validate, compare and extend differential Hurwitz trees")]
struct Cli {
    /// Print structured JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a tree file against the Hurwitz tree conditions.
    Validate { tree: PathBuf },
    /// Breaks, conductors and minimality of a reduction-type file.
    Breaks { witt: PathBuf },
    /// Cartier image of a form.
    Cartier {
        #[arg(long)]
        form: String,
        /// `p` or `p:c0,c1,...` (modulus in ascending degree).
        #[arg(long)]
        field: String,
    },
    /// Solve C(w) = w_prev or C(w) = w + w_prev for w with ord_inf(w) = m_n - 1.
    SolveCartier {
        #[arg(long)]
        form: String,
        #[arg(long)]
        field: String,
        #[arg(long)]
        m_n: u64,
        #[arg(long, value_enum, default_value_t = Variant::FixedPlus)]
        variant: Variant,
        /// Only try new poles at field elements.
        #[arg(long)]
        split: bool,
        #[arg(long)]
        ceiling: Option<u64>,
    },
    /// Check constant-coefficient compatibility.
    Compat { tree: PathBuf },
    /// Check that `hi` extends `lo` along `map`.
    CheckExt { lo: PathBuf, hi: PathBuf, map: PathBuf },
    /// Build an extension of a tree.
    Extend {
        tree: PathBuf,
        /// Target file, or inline JSON starting with `{`.
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "hi.json")]
        out: PathBuf,
        #[arg(long, default_value = "map.json")]
        map: PathBuf,
    },
    /// Depth and form at a rational place.
    Place {
        tree: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long)]
        r: String,
    },
    /// Graphviz export.
    Dot {
        tree: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Section,
    FixedPlus,
}

/// Exit 1 for negative verdicts, 2 for unreadable input.
enum Failure {
    Negative(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::Malformed(_)
            | Error::UnknownId(_)
            | Error::InvalidField(_)
            | Error::FieldMismatch
            | Error::PlaceOutsideEdge { .. } => Failure::Input(e.to_string()),
            _ => Failure::Negative(e.to_string()),
        }
    }
}

type Outcome = Result<(Value, String, bool), Failure>;

const TREE_CLAUSES: [Clause; 12] = [
    Clause::H1,
    Clause::H2,
    Clause::H3,
    Clause::H4,
    Clause::H5,
    Clause::H6,
    Clause::H7,
    Clause::SlopeConductor,
    Clause::MixedDepth,
    Clause::Logarithmic,
    Clause::Shape,
    Clause::Root,
];

const EXT_CLAUSES: [Clause; 5] = [Clause::Refinement, Clause::LevelPair, Clause::Monodromy, Clause::NewBranch, Clause::Prefix];

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok((value, text, ok)) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            } else {
                print!("{text}");
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Failure::Negative(m)) => {
            if cli.json {
                println!("{}", json!({ "ok": false, "error": m }));
            }
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_tree(path: &Path) -> Result<HurwitzTree, Failure> {
    schema::tree_from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn report_value(report: &ValidationReport, clauses: &[Clause]) -> Value {
    let status: serde_json::Map<String, Value> =
        clauses.iter().map(|c| (c.name().to_string(), json!(if report.has(*c) { "fail" } else { "pass" }))).collect();
    json!({ "valid": report.is_valid(), "clauses": status, "violations": report.violations })
}

fn report_text(report: &ValidationReport, clauses: &[Clause]) -> String {
    let mut s: String = clauses.iter().map(|c| format!("{:<18}{}\n", c.name(), if report.has(*c) { "FAIL" } else { "ok" })).collect();
    for v in &report.violations {
        s.push_str(&format!("[{}] {}: {}\n", v.clause, v.location, v.message));
    }
    s.push_str(if report.is_valid() { "VALID\n" } else { "INVALID\n" });
    s
}

fn report(report: ValidationReport, clauses: &[Clause]) -> Outcome {
    Ok((report_value(&report, clauses), report_text(&report, clauses), report.is_valid()))
}

fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Validate { tree } => report(validate(&load_tree(tree)?), &TREE_CLAUSES),
        Command::Compat { tree } => report(check_compatibility(&load_tree(tree)?), &[Clause::Compatibility]),
        Command::CheckExt { lo, hi, map } => {
            let (lo, hi) = (load_tree(lo)?, load_tree(hi)?);
            let map = schema::map_from_json(&read(map)?).map_err(|e| Failure::Input(format!("{}: {e}", map.display())))?;
            report(check_extension(&lo, &hi, &map), &EXT_CLAUSES)
        }
        Command::Breaks { witt } => {
            let rt = schema::witt_from_json(&read(witt)?).map_err(|e| Failure::Input(format!("{}: {e}", witt.display())))?;
            let breaks = rt.breaks()?;
            let conductors = rt.conductors()?;
            let list = |v: Vec<u64>| format!("({})", v.iter().map(u64::to_string).collect::<Vec<_>>().join(", "));
            let levels: Vec<String> =
                conductors
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, c)| {
                        if c.is_minimal() {
                            format!("level {} MINIMAL", i + 1)
                        } else {
                            format!("level {} GENERAL l={}", i + 1, c.excess)
                        }
                    })
                    .collect();
            let mut text = format!("{}; {}", list(breaks.clone()), list(conductors.iter().map(|c| c.conductor).collect()));
            if !levels.is_empty() {
                text.push_str(&format!("; {}", levels.join(", ")));
            }
            text.push('\n');
            let value = json!({
                "breaks": breaks,
                "conductors": conductors.iter().map(|c| c.conductor).collect::<Vec<_>>(),
                "minimal": conductors.iter().map(|c| c.is_minimal()).collect::<Vec<_>>(),
                "excess": conductors.iter().map(|c| c.excess).collect::<Vec<_>>(),
            });
            Ok((value, text, true))
        }
        Command::Cartier { form, field } => {
            let field = parse_field(field)?;
            let w = parse_form(&field, form)?;
            let c = match w.cartier() {
                Err(Error::IrreducibleFactor { .. }) => w.cartier_by_expansion(),
                r => r?,
            };
            Ok((json!({ "input": w.render(), "cartier": c.render() }), format!("{}\n", c.render()), true))
        }
        Command::SolveCartier { form, field, m_n, variant, split, ceiling } => {
            let field = parse_field(field)?;
            let prev = parse_form(&field, form)?;
            let variant = match variant {
                Variant::Section => CartierVariant::Section,
                Variant::FixedPlus => CartierVariant::FixedPlus,
            };
            let mut search = if *split { CartierSearch::split(variant) } else { CartierSearch::new(variant) };
            if let Some(c) = ceiling {
                search.ceiling = *c;
            }
            Ok(match solve_cartier_with(&prev, *m_n, &search)? {
                Some(w) => (json!({ "solution": w.render() }), format!("{}\n", w.render()), true),
                None => (json!({ "solution": Value::Null }), "NONE\n".into(), false),
            })
        }
        Command::Extend { tree, target, out, map } => {
            let prev = load_tree(tree)?;
            let text = if target.trim_start().starts_with('{') { target.clone() } else { read(Path::new(target))? };
            let doc: TargetDoc = schema::from_json(&text).map_err(|e| Failure::Input(format!("target: {e}")))?;
            let target = doc.build(&prev)?;
            let ext = extend_tree(&prev, &target)?;
            write(out, &schema::tree_to_json(&ext.tree))?;
            write(map, &schema::map_to_json(&ext.map))?;
            let value = json!({
                "tree": out.display().to_string(),
                "map": map.display().to_string(),
                "conductor": ext.tree.conductor(),
                "root_depth": rational::format(&ext.tree.root().depth),
            });
            let text = format!(
                "wrote {} and {}; conductor {}, root depth {}\n",
                out.display(),
                map.display(),
                ext.tree.conductor(),
                rational::format(&ext.tree.root().depth)
            );
            Ok((value, text, true))
        }
        Command::Place { tree, edge, r } => {
            let t = load_tree(tree)?;
            let place = RationalPlace::new(edge.clone(), rational::parse(r)?);
            let depth = rational::format(&t.depth_at_place(&place)?);
            let w = t.differential_at_place(&place)?.render();
            Ok((json!({ "depth": depth, "omega": w }), format!("({depth}, {w})\n"), true))
        }
        Command::Dot { tree, out } => {
            let dot = hurwitz::dot::to_dot(&load_tree(tree)?);
            match out {
                Some(path) => {
                    write(path, &dot)?;
                    Ok((json!({ "dot": path.display().to_string() }), String::new(), true))
                }
                None => Ok((json!({ "dot": dot }), dot, true)),
            }
        }
    }
}
