use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use genus0_core::forests::{enumerate, tree_polynomial, Forest, Kind, Tree};
use genus0_core::keel::x_element_to_divisor;
use genus0_core::points::{config_violation, type_of};
use genus0_core::poincare::poincare;
use genus0_core::ring::Ring;
use genus0_core::treerep::fiber;
use genus0_core::{Error, Family, GroundSet};
use serde::Serialize;

use crate::config::{parse_config, ConfigError};
use crate::expr::parse_expression;
use crate::selftest::run_selftest;

#[derive(Parser, Debug)]
#[command(name = "genus0", version, about = "Cohomology and combinatorics of genus-zero moduli spaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Poincaré polynomial of the full space or of a family.
    Betti {
        #[arg(long)]
        n: usize,
        /// `full`, `forest <spec>` or `thicket <spec>`, spec like `[{1,2,3},{1,2,3,4}]`.
        #[arg(long, num_args = 1..=2, value_names = ["KIND", "SPEC"])]
        family: Vec<String>,
        /// Also report ranks in real degrees (zeros in odd degrees).
        #[arg(long)]
        doubled: bool,
    },
    /// Normal form of an expression in x and D generators.
    Reduce {
        #[arg(long)]
        n: usize,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Trees containing the whole ground set.
    Trees {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with_all = ["list", "poly"])]
        count: bool,
        #[arg(long, conflicts_with = "poly")]
        list: bool,
        /// Coefficients of the tree polynomial, graded by size.
        #[arg(long)]
        poly: bool,
    },
    /// All forests.
    Forests {
        #[arg(long)]
        n: usize,
    },
    /// Rewrite between boundary divisors and x generators.
    Convert {
        #[arg(long)]
        n: usize,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Tree type of a point configuration read from a JSON file (`-` for stdin).
    PointType {
        #[arg(long)]
        n: usize,
        config: PathBuf,
    },
    /// Trees on one more element restricting to the given tree.
    Fiber {
        #[arg(long)]
        n: usize,
        tree: String,
    },
    /// Run the invariant suites.
    Selftest {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        deep: bool,
    },
}

/// Process exit status and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TOO_LARGE: i32 = 3;

pub(crate) enum Failure {
    Usage(String),
    TooLarge(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge(_) => Failure::TooLarge(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Core(c) => c.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// A finished command: JSON text, a CSV table, and whether it passed.
pub(crate) struct Report {
    json: String,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    ok: bool,
}

impl Report {
    pub(crate) fn new<T: Serialize>(value: &T, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Report { json: serde_json::to_string(value).expect("plain data"), header, rows, ok: true }
    }

    pub(crate) fn failed(mut self) -> Self {
        self.ok = false;
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!("{}\n", self.json),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in memory");
                for r in &self.rows {
                    w.write_record(r).expect("in memory");
                }
                String::from_utf8(w.into_inner().expect("in memory")).expect("utf8")
            }
        }
    }
}

fn ground(n: usize) -> Result<GroundSet, Failure> {
    if n < 3 {
        return Err(Failure::Usage(format!("--n must be at least 3, got {n}")));
    }
    Ok(GroundSet::new(n)?)
}

fn numbered(values: &[u64]) -> Vec<Vec<String>> {
    values.iter().enumerate().map(|(d, v)| vec![d.to_string(), v.to_string()]).collect()
}

#[derive(Serialize)]
struct Betti {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    poincare: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    doubled: Option<Vec<u64>>,
}

/// Largest `n` for the full-space forest sum.
pub const BETTI_MAX_N: usize = 12;

fn betti(n: usize, family: &[String], doubled: bool) -> Result<Report, Failure> {
    let g = ground(n)?;
    let (label, fam) = match family {
        [] => (None, Family::power(g)),
        [k] if k == "full" => (None, Family::power(g)),
        [k, spec] if k == "forest" => {
            let f = Forest::new(Family::parse(g, spec)?)?;
            (Some(f.to_string()), f.into_family())
        }
        [k, spec] if k == "thicket" => {
            let f = Family::parse(g, spec)?;
            if !f.is_thicket() {
                return Err(Failure::Usage(format!("{f} is not a thicket")));
            }
            (Some(f.to_string()), f)
        }
        _ => return Err(Failure::Usage("--family takes `full`, `forest <spec>` or `thicket <spec>`".into())),
    };
    if label.is_none() && n > BETTI_MAX_N {
        return Err(Failure::TooLarge(format!("betti refuses n = {n} for the full space (limit {BETTI_MAX_N})")));
    }
    let p = poincare(&fam)?;
    let out = Betti { n, family: label, poincare: p.coeffs().to_vec(), doubled: doubled.then(|| p.doubled()) };
    let rows = match &out.doubled {
        Some(d) => numbered(d),
        None => numbered(p.coeffs()),
    };
    Ok(Report::new(&out, vec!["degree", "rank"], rows))
}

#[derive(Serialize)]
struct NormalForm {
    normal_form: String,
}

fn reduce(n: usize, text: &str) -> Result<Report, Failure> {
    let g = ground(n)?;
    let e = parse_expression(text, g).map_err(|e| Failure::Usage(e.to_string()))?;
    let nf = e.evaluate(&mut Ring::full(g))?.to_string();
    let rows = vec![vec![nf.clone()]];
    Ok(Report::new(&NormalForm { normal_form: nf }, vec!["normal_form"], rows))
}

#[derive(Serialize)]
struct Converted {
    x: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    divisor: Option<String>,
}

fn convert(n: usize, text: &str) -> Result<Report, Failure> {
    let g = ground(n)?;
    let e = parse_expression(text, g).map_err(|e| Failure::Usage(e.to_string()))?;
    let x = e.evaluate(&mut Ring::full(g))?;
    let linear = x.terms().keys().all(|m| m.degree() == 1);
    let divisor = if linear { Some(x_element_to_divisor(g, &x)?.to_string()) } else { None };
    let out = Converted { x: x.to_string(), divisor };
    let rows = vec![vec![out.x.clone(), out.divisor.clone().unwrap_or_default()]];
    Ok(Report::new(&out, vec!["x", "divisor"], rows))
}

#[derive(Serialize)]
struct TreeCount {
    n: usize,
    count: u64,
}

#[derive(Serialize)]
struct TreeList {
    n: usize,
    trees: Vec<String>,
}

#[derive(Serialize)]
struct TreePoly {
    h: Vec<u64>,
}

/// Largest `n` for listing trees or forests.
pub const LIST_MAX_N: usize = 6;

fn s_trees(g: GroundSet) -> Vec<Tree> {
    enumerate(g, Kind::Trees)
        .filter_map(|f| Tree::from_forest(f).ok())
        .filter(Tree::is_s_tree)
        .collect()
}

fn trees(n: usize, list: bool, poly: bool) -> Result<Report, Failure> {
    let g = ground(n)?;
    if list {
        if n > LIST_MAX_N {
            return Err(Failure::TooLarge(format!("listing trees refuses n = {n} (limit {LIST_MAX_N})")));
        }
        let trees: Vec<String> = s_trees(g).iter().map(ToString::to_string).collect();
        let rows = trees.iter().map(|t| vec![t.clone()]).collect();
        return Ok(Report::new(&TreeList { n, trees }, vec!["tree"], rows));
    }
    let h = tree_polynomial(n)?;
    if poly {
        let rows = numbered(&h);
        return Ok(Report::new(&TreePoly { h }, vec!["size", "trees"], rows));
    }
    let count = h.iter().sum();
    Ok(Report::new(&TreeCount { n, count }, vec!["n", "count"], vec![vec![n.to_string(), count.to_string()]]))
}

#[derive(Serialize)]
struct Forests {
    n: usize,
    count: usize,
    forests: Vec<String>,
}

fn forests(n: usize) -> Result<Report, Failure> {
    let g = ground(n)?;
    if n > LIST_MAX_N {
        return Err(Failure::TooLarge(format!("listing forests refuses n = {n} (limit {LIST_MAX_N})")));
    }
    let forests: Vec<String> = enumerate(g, Kind::Forests).map(|f| f.to_string()).collect();
    let rows = forests.iter().map(|f| vec![f.clone()]).collect();
    Ok(Report::new(&Forests { n, count: forests.len(), forests }, vec!["forest"], rows))
}

#[derive(Serialize)]
struct PointType {
    valid: bool,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    tree: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<[String; 2]>,
}

fn point_type(n: usize, path: &PathBuf) -> Result<Report, Failure> {
    let g = ground(n)?;
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let c = parse_config(&text, g)?;
    if !c.family().is_thicket() {
        return Err(Failure::Usage(format!("{} is not a thicket", c.family())));
    }
    let header = vec!["valid", "type", "violation"];
    if let Some((t, u)) = config_violation(&c) {
        let out = PointType { valid: false, tree: None, violation: Some([t.to_string(), u.to_string()]) };
        let rows = vec![vec!["false".into(), String::new(), format!("{t} {u}")]];
        return Ok(Report::new(&out, header, rows).failed());
    }
    let tree = type_of(&c)?.to_string();
    let rows = vec![vec!["true".into(), tree.clone(), String::new()]];
    Ok(Report::new(&PointType { valid: true, tree: Some(tree), violation: None }, header, rows))
}

#[derive(Serialize)]
struct Fiber {
    tree: String,
    size: usize,
    fiber: Vec<String>,
}

fn fiber_cmd(n: usize, spec: &str) -> Result<Report, Failure> {
    let g = ground(n)?;
    let tree = Tree::new(Family::parse(g, spec)?)?;
    if !tree.is_s_tree() {
        return Err(Failure::Usage(format!("{tree} does not contain the whole ground set")));
    }
    let f: Vec<String> = fiber(&tree)?.iter().map(ToString::to_string).collect();
    let rows = f.iter().map(|t| vec![t.clone()]).collect();
    Ok(Report::new(&Fiber { tree: tree.to_string(), size: f.len(), fiber: f }, vec!["tree"], rows))
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Betti { n, family, doubled } => betti(*n, family, *doubled),
        Command::Reduce { n, expr } => reduce(*n, expr),
        Command::Trees { n, list, poly, .. } => trees(*n, *list, *poly),
        Command::Forests { n } => forests(*n),
        Command::Convert { n, expr } => convert(*n, expr),
        Command::PointType { n, config } => point_type(*n, config),
        Command::Fiber { n, tree } => fiber_cmd(*n, tree),
        Command::Selftest { n, deep } => run_selftest(ground(*n)?, *deep, cli.seed),
    }
}

/// Runs one command line, `args[0]` being the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (code, body, err) = match dispatch(&cli) {
        Ok(r) => (if r.ok { 0 } else { EXIT_FAILED }, r.render(cli.format), String::new()),
        Err(Failure::Usage(m)) => (EXIT_USAGE, String::new(), format!("error: {m}\n")),
        Err(Failure::TooLarge(m)) => (EXIT_TOO_LARGE, String::new(), format!("error: {m}\n")),
    };
    if let (Some(path), true) = (&cli.out, !body.is_empty()) {
        if let Err(e) = std::fs::write(path, &body) {
            return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {}: {e}\n", path.display()) };
        }
        return Outcome { code, stdout: String::new(), stderr: err };
    }
    Outcome { code, stdout: body, stderr: err }
}
