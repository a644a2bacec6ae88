use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rgh::catalog::{matrix_json, to_dot, write_catalog};
use rgh::complex::{Coefficients, ComplexError};
use rgh::enumerate::{enumerate, EnumerationError, Limits, TailOrder};
use rgh::graph::{GraphJson, RibbonGraph};
use rgh::homology::{auto_mode, boundary_matrices, d_squared_defect, homology};
use rgh::signature::Signature;
use rgh::verify::{standard_suite, verify_signature, VerifyError};
use rgh::canonical_form;

#[derive(Parser)]
#[command(name = "rgh", version, about = "Ribbon graph complexes of moduli of bordered surfaces")]
struct Cli {
    /// Worker threads for enumeration and matrix assembly.
    #[arg(long, global = true, env = "RGH_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the classes of one signature.
    Enumerate(EnumerateArgs),
    /// Compute homology and Euler characteristics.
    Homology(HomologyArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Inspect a graph file.
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
}

#[derive(Args)]
struct SignatureArgs {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    h: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    s: u32,
    /// Enumerate every tail labeling instead of boundary-ordered ones.
    #[arg(long)]
    all_orders: bool,
    #[arg(long)]
    max_cells: Option<usize>,
    #[arg(long)]
    max_seconds: Option<f64>,
}

impl SignatureArgs {
    fn signature(&self) -> Result<Signature, Failure> {
        Signature::new(self.g, self.h, self.r, self.s).map_err(|e| Failure::usage(e.to_string()))
    }

    fn order(&self) -> TailOrder {
        if self.all_orders {
            TailOrder::Free
        } else {
            TailOrder::Boundary
        }
    }

    fn limits(&self) -> Result<Limits, Failure> {
        if self.max_cells == Some(0) || self.max_seconds.is_some_and(|s| s.is_nan() || s <= 0.0) {
            return Err(Failure::usage("limits must be positive"));
        }
        Ok(Limits { max_cells: self.max_cells, max_seconds: self.max_seconds })
    }
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    sig: SignatureArgs,
    /// Write the JSON-lines catalog here.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Integer,
    Rational,
    Auto,
}

#[derive(Args)]
struct HomologyArgs {
    #[command(flatten)]
    sig: SignatureArgs,
    #[arg(long, value_enum, default_value = "auto")]
    mode: Mode,
    /// Check that every composite of consecutive differentials vanishes.
    #[arg(long)]
    verify_d2: bool,
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Directory for `d<k>.txt` coordinate files and `d<k>.json` wrappers.
    #[arg(long)]
    matrices: Option<PathBuf>,
    #[arg(long)]
    pretty: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Standard,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long)]
    all_orders: bool,
    #[arg(long)]
    pretty: bool,
}

#[derive(Subcommand)]
enum GraphAction {
    /// Validate a JSON graph and report its signature and dimension.
    Validate { file: PathBuf },
    /// Print the canonical code, automorphism count and canonical graph.
    Canonical {
        file: PathBuf,
        #[arg(long)]
        pretty: bool,
    },
    /// Render as Graphviz DOT.
    Dot { file: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn invariant(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<EnumerationError> for Failure {
    fn from(e: EnumerationError) -> Self {
        let code = match e {
            EnumerationError::BudgetExceeded { .. } => 2,
            EnumerationError::Signature(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<ComplexError> for Failure {
    fn from(e: ComplexError) -> Self {
        let code = match e {
            ComplexError::IntegerModeWithoutTails => 1,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Enumeration(e) => e.into(),
            VerifyError::Complex(e) => e.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(format!("io: {e}"))
    }
}

fn print_json(v: &Value, pretty: bool) -> Result<(), Failure> {
    let text = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    println!("{}", text.map_err(|e| Failure::invariant(e.to_string()))?);
    Ok(())
}

fn save_catalog(path: &Path, basis: &rgh::CellBasis) -> Result<(), Failure> {
    let file = fs::File::create(path)?;
    write_catalog(basis, BufWriter::new(file))?;
    Ok(())
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<(), Failure> {
    let sig = args.sig.signature()?;
    let basis = enumerate(sig, args.sig.order(), &args.sig.limits()?)?;
    if let Some(path) = &args.catalog {
        save_catalog(path, &basis)?;
    }
    let dims: Vec<String> = basis.counts_by_dimension().iter().rev().map(|(d, n)| format!("{d}:{n}")).collect();
    let orientable = basis.iter().filter(|c| c.orientable).count();
    println!("dims {}", dims.join(" "));
    println!("classes {} orientable {}", basis.len(), orientable);
    Ok(())
}

fn cmd_homology(args: HomologyArgs) -> Result<(), Failure> {
    let sig = args.sig.signature()?;
    let mode = match args.mode {
        Mode::Integer => Coefficients::Integer,
        Mode::Rational => Coefficients::Rational,
        Mode::Auto => auto_mode(sig),
    };
    if mode == Coefficients::Integer && sig.r == 0 {
        return Err(ComplexError::IntegerModeWithoutTails.into());
    }
    let basis = enumerate(sig, args.sig.order(), &args.sig.limits()?)?;
    if let Some(path) = &args.catalog {
        save_catalog(path, &basis)?;
    }
    let matrices = boundary_matrices(&basis, mode)?;
    if let Some(dir) = &args.matrices {
        fs::create_dir_all(dir)?;
        for m in &matrices {
            fs::write(dir.join(format!("d{}.txt", m.dim)), m.to_coordinate_text())?;
            let wrapped = serde_json::to_string(&matrix_json(&basis, m)).map_err(|e| Failure::invariant(e.to_string()))?;
            fs::write(dir.join(format!("d{}.json", m.dim)), wrapped + "\n")?;
        }
    }
    if args.verify_d2 {
        if let Some((d, r, c, v)) = d_squared_defect(&matrices) {
            return Err(Failure::invariant(format!(
                "D_SQUARED_NONZERO: entry ({r}, {c}) of d{d}∘d{} is {v}",
                d + 1
            )));
        }
    }
    let result = homology(&basis, &matrices, mode)?;
    print_json(&result.to_json(), args.pretty)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let Suite::Standard = args.suite;
    let order = if args.all_orders { TailOrder::Free } else { TailOrder::Boundary };
    let mut failed = Vec::new();
    for sig in standard_suite() {
        let entry = verify_signature(sig, order, &Limits::unlimited())?;
        if !entry.passed() {
            failed.push(sig.to_string());
        }
        print_json(&entry.to_json(), args.pretty)?;
        io::stdout().flush()?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::invariant(format!("suite failed for {}", failed.join(", "))))
    }
}

fn read_graph(path: &Path) -> Result<RibbonGraph, Failure> {
    let text = fs::read_to_string(path)?;
    let raw: GraphJson = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("malformed graph JSON: {e}")))?;
    RibbonGraph::from_json(&raw).map_err(|e| {
        let lines: Vec<String> = e.violations.iter().map(|v| v.to_string()).collect();
        Failure::usage(lines.join("\n"))
    })
}

fn cmd_graph(action: GraphAction) -> Result<(), Failure> {
    match action {
        GraphAction::Validate { file } => {
            let g = read_graph(&file)?;
            println!("valid, signature {}, dim {}", g.signature(), g.cell_dimension());
            Ok(())
        }
        GraphAction::Canonical { file, pretty } => {
            let g = read_graph(&file)?;
            let form = canonical_form(&g);
            let canon = g.relabel(&form.relabel);
            let v = json!({
                "code": form.code.code,
                "aut": form.code.aut_order,
                "graph": canon.to_json(),
            });
            print_json(&v, pretty)
        }
        GraphAction::Dot { file } => {
            print!("{}", to_dot(&read_graph(&file)?));
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::invariant(e.to_string()))?;
    }
    match cli.command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Homology(a) => cmd_homology(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Graph { action } => cmd_graph(action),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
