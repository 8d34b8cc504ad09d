use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use symsys_core::polygon::{crossing_matrix, minimal_crossing_matrix, render_svg};
use symsys_core::reductions::{certify_bound_traced, ReductionTrace};
use symsys_core::search::{predicted_max, verify_bounds, BUDGET_ENV};
use symsys_core::*;

#[derive(Parser, Debug)]
#[command(name = "symsys", version, about = "Symplectic k-systems: constructions, checks, reductions and search")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Where to write the JSON report when a table or CSV is printed.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Which {
    One,
    Two,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ReduceMode {
    Genus,
    Power,
    Parity,
    /// Iterate genus and power reductions down to a certified bound.
    Bound,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build one of the explicit integer systems.
    Construct {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        k: u64,
    },
    /// Check a system read from a JSON file ("-" for stdin).
    Verify {
        input: PathBuf,
        /// Overrides the k stored in an integer system.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Exhaustive maximum system search modulo 2^m.
    Search {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        primitive: bool,
        #[arg(long)]
        budget_nodes: Option<u64>,
        /// Search without the 2g + 1 cutoff.
        #[arg(long)]
        discover: bool,
        #[arg(long, env = BUDGET_ENV)]
        max_vectors: Option<u64>,
    },
    /// Search every (g, m) up to the given limits and compare with 2g + 1.
    VerifyBounds {
        #[arg(long)]
        gmax: usize,
        #[arg(long)]
        mmax: u32,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        discover: bool,
        #[arg(long, env = BUDGET_ENV)]
        max_vectors: Option<u64>,
    },
    /// Apply a reduction to a system read from JSON.
    Reduce {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: ReduceMode,
    },
    /// Pair normal form of {"genus", "power", "u", "v"} read from JSON.
    NormalForm { input: PathBuf },
    /// Crossing matrix of the polygon family A_k.
    Polygon {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
        /// Only the two curves alpha(i1, j1) and alpha(i2, j2).
        #[arg(long, value_delimiter = ',', value_name = "I1,J1,I2,J2")]
        pair: Option<Vec<usize>>,
        /// Also write an SVG drawing of the curves.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Minimize each pair over its placements instead of using the
        /// canonical placement.
        #[arg(long)]
        minimal: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Construct { .. } => "construct",
            Command::Verify { .. } => "verify",
            Command::Search { .. } => "search",
            Command::VerifyBounds { .. } => "verify-bounds",
            Command::Reduce { .. } => "reduce",
            Command::NormalForm { .. } => "normal-form",
            Command::Polygon { .. } => "polygon",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Search { .. } | Command::VerifyBounds { .. } => Format::Table,
            Command::Polygon { .. } => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// Result of one command before formatting.
struct Report {
    config: Value,
    result: Value,
    table: String,
    csv: Option<String>,
    /// A verification in the result failed.
    mismatch: bool,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    config: &'a Value,
    result: &'a Value,
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    // Accept a report envelope as well as a bare object.
    Ok(match value {
        Value::Object(mut map) if map.contains_key("command") && map.contains_key("result") => {
            map.remove("result").unwrap()
        }
        v => v,
    })
}

fn read_system(path: &Path) -> anyhow::Result<SympSystem> {
    Ok(serde_json::from_value(read_json(path)?)?)
}

fn budget(max_vectors: Option<u64>, budget_nodes: Option<u64>) -> SearchBudget {
    SearchBudget {
        max_vectors: max_vectors.unwrap_or(SearchBudget::default().max_vectors),
        max_nodes: budget_nodes,
    }
}

fn vector_cells(coords: &[i64]) -> String {
    let g = coords.len() / 2;
    let half = |c: &[i64]| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    format!("({} | {})", half(&coords[..g]), half(&coords[g..]))
}

fn system_table(s: &SympSystem) -> String {
    let js = s.to_json();
    let mut t = match js.power {
        Some(m) => format!("genus {} modulo 2^{m}", js.genus),
        None => format!("genus {}", js.genus),
    };
    if let Some(k) = js.k {
        write!(t, ", k = {k}").unwrap();
    }
    writeln!(t, ", {} elements", js.elements.len()).unwrap();
    for (i, e) in js.elements.iter().enumerate() {
        writeln!(t, "{i:>4}  {}", vector_cells(e)).unwrap();
    }
    t
}

fn system_csv(elements: &[Vec<i64>]) -> String {
    elements
        .iter()
        .map(|e| e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",") + "\n")
        .collect()
}

fn construct(which: Which, genus: usize, k: u64) -> anyhow::Result<Report> {
    let s = match which {
        Which::One => construction_one(genus, k)?,
        Which::Two => construction_two(genus, k)?,
    };
    let verdict = s.check()?;
    let s = SympSystem::Integer(s);
    Ok(Report {
        config: json!({ "which": which, "genus": genus, "k": k }),
        result: serde_json::to_value(&s)?,
        table: system_table(&s),
        csv: Some(system_csv(&s.to_json().elements)),
        mismatch: !verdict.valid,
    })
}

fn verify(input: &Path, k: Option<u64>) -> anyhow::Result<Report> {
    let mut s = read_system(input)?;
    if let (Some(k), SympSystem::Integer(int)) = (k, &s) {
        s = SympSystem::Integer(IntSystem::from_elements(int.genus(), Some(k), int.elements().to_vec())?);
    }
    let verdict = s.check()?;
    let mut result = json!({
        "genus": s.genus(),
        "size": s.len(),
        "valid": verdict.valid,
        "violation": verdict.violation,
        "bound": 2 * s.genus() + 1,
    });
    let mut table = system_table(&s);
    match &verdict.violation {
        None => writeln!(table, "valid").unwrap(),
        Some(v) => writeln!(table, "invalid: elements {} and {} pair to {}", v.first, v.second, v.pairing).unwrap(),
    }
    let mut valid = verdict.valid;
    if let SympSystem::Integer(int) = &s {
        let power = power_of_k(int.k().expect("checked above"))?;
        let reduced = int.reduce_mod(power)?;
        let rv = reduced.check();
        result["residue_valid"] = json!(rv.valid);
        result["residue_power"] = json!(power.get());
        writeln!(table, "modulo 2^{}: {}", power.get(), if rv.valid { "valid" } else { "invalid" }).unwrap();
        valid &= rv.valid;
    }
    Ok(Report {
        config: json!({ "input": input, "k": k }),
        result,
        table,
        csv: None,
        mismatch: !valid,
    })
}

fn search_table(r: &SearchReport) -> String {
    let mut t = String::new();
    writeln!(t, "genus {} modulo 2^{}{}", r.genus, r.power, if r.primitive_only { ", primitive" } else { "" }).unwrap();
    writeln!(t, "maximum     {}", r.max_size).unwrap();
    writeln!(t, "predicted   {}", predicted_max(r.genus, Power::new(r.power).unwrap(), r.primitive_only)).unwrap();
    writeln!(t, "exhaustive  {}", r.exhaustive).unwrap();
    writeln!(t, "nodes       {}", r.nodes).unwrap();
    writeln!(t, "time        {} ms", r.wall_time_ms).unwrap();
    writeln!(t, "witness:").unwrap();
    for w in &r.witness {
        let w: Vec<i64> = w.iter().map(|&x| x as i64).collect();
        writeln!(t, "  {}", vector_cells(&w)).unwrap();
    }
    t
}

fn search(
    g: usize,
    m: u32,
    primitive: bool,
    discover: bool,
    budget: SearchBudget,
) -> anyhow::Result<Report> {
    let power = Power::new(m)?;
    let mode = if discover { SearchMode::Discover } else { SearchMode::Verify };
    let r = max_system_search(g, power, primitive, mode, budget)?;
    let witness_valid = r.witness_system()?.check().valid;
    let mismatch = !witness_valid || (r.exhaustive && r.max_size != predicted_max(g, power, primitive));
    let witness: Vec<Vec<i64>> = r.witness.iter().map(|w| w.iter().map(|&x| x as i64).collect()).collect();
    Ok(Report {
        config: json!({ "g": g, "m": m, "primitive": primitive, "mode": mode, "budget": budget }),
        result: serde_json::to_value(&r)?,
        table: search_table(&r),
        csv: Some(system_csv(&witness)),
        mismatch,
    })
}

fn bounds(gmax: usize, mmax: u32, discover: bool, budget: SearchBudget) -> anyhow::Result<Report> {
    let mode = if discover { SearchMode::Discover } else { SearchMode::Verify };
    let t = verify_bounds(gmax, mmax, mode, budget)?;
    let mut csv = String::from("genus,power,mode,found,predicted,exhaustive,status,nodes\n");
    for r in &t.rows {
        writeln!(
            csv,
            "{},{},{},{},{},{},{:?},{}",
            r.genus,
            r.power,
            r.mode,
            r.found.map_or(String::new(), |f| f.to_string()),
            r.predicted,
            r.exhaustive,
            r.status,
            r.nodes
        )
        .unwrap();
    }
    Ok(Report {
        config: json!({ "gmax": gmax, "mmax": mmax, "mode": mode, "budget": budget }),
        result: serde_json::to_value(&t)?,
        table: t.render(),
        csv: Some(csv.to_lowercase()),
        mismatch: t.has_mismatch(),
    })
}

fn residue_input(s: SympSystem) -> anyhow::Result<ResidueSystem> {
    match s {
        SympSystem::Residue(r) => Ok(r),
        SympSystem::Integer(int) => {
            let k = int.k().ok_or_else(|| anyhow!("integer system needs k to be reduced"))?;
            Ok(int.reduce_mod(power_of_k(k)?)?)
        }
    }
}

fn trace_table(t: &ReductionTrace) -> String {
    let mut s = format!("{:?} reduction\n", t.kind);
    if let Some((u, v)) = t.pair {
        writeln!(s, "pair        elements {u} and {v}").unwrap();
    }
    if let Some((y, b, z)) = t.normal_form {
        writeln!(s, "normal form y = {y}, b = {b}, z = {z}").unwrap();
    }
    writeln!(s, "size        {} -> {}", t.input.len(), t.output.len()).unwrap();
    writeln!(s, "pairings    {}", if t.pairings_preserved { "preserved" } else { "BROKEN" }).unwrap();
    s.push_str(&system_table(&SympSystem::Residue(t.output.clone())));
    s
}

fn reduce(input: &Path, mode: ReduceMode) -> anyhow::Result<Report> {
    let s = read_system(input)?;
    let config = json!({ "input": input, "mode": mode });
    let (result, table, mismatch) = match mode {
        ReduceMode::Genus | ReduceMode::Power => {
            let r = residue_input(s)?;
            let t = match mode {
                ReduceMode::Genus => genus_reduce(&r)?,
                _ => power_reduce(&r)?,
            };
            (serde_json::to_value(&t)?, trace_table(&t), !t.pairings_preserved)
        }
        ReduceMode::Parity => {
            let SympSystem::Integer(int) = s else {
                bail!("the parity check needs an integer system");
            };
            let r = dependence_parity_check(&int)?;
            let mut table = format!(
                "size {}, rank {}, {} dependencies, {} violations\n",
                r.size,
                r.rank,
                r.dependencies.len(),
                r.violations
            );
            for d in &r.dependencies {
                let c: Vec<String> = d.coefficients.iter().map(|x| x.to_string()).collect();
                writeln!(table, "  [{}]{}", c.join(", "), if d.all_odd { "" } else { "  not all odd" }).unwrap();
            }
            (serde_json::to_value(&r)?, table, !r.ok())
        }
        ReduceMode::Bound => {
            let r = residue_input(s)?;
            let (cert, traces) = certify_bound_traced(&r)?;
            let table = format!(
                "size {} <= certified bound {} <= 2g + 1 = {}: {}\n",
                cert.size,
                cert.certified_bound,
                2 * cert.genus + 1,
                cert.holds()
            );
            let value = json!({ "certificate": cert, "traces": traces });
            (value, table, !cert.holds())
        }
    };
    Ok(Report {
        config,
        result,
        table,
        csv: None,
        mismatch,
    })
}

#[derive(Deserialize)]
struct PairInput {
    genus: usize,
    power: u32,
    u: Vec<i64>,
    v: Vec<i64>,
}

fn normal_form(input: &Path) -> anyhow::Result<Report> {
    let p: PairInput = serde_json::from_value(read_json(input)?)?;
    let power = Power::new(p.power)?;
    let (u, v) = (ResidueVector::new(&p.u, power)?, ResidueVector::new(&p.v, power)?);
    if u.genus() != p.genus || v.genus() != p.genus {
        bail!("u and v must have {} coordinates", 2 * p.genus);
    }
    let nf = pair_normal_form(&u, &v)?;
    let t = &nf.transform;
    let certified = t.is_symplectic() && t.apply(&u)? == ResidueVector::basis(p.genus, 0, power);
    let tv = t.apply(&v)?;
    let mut table = String::from("transform:\n");
    for row in t.rows() {
        writeln!(table, "  {}", row.iter().map(|x| format!("{x:>3}")).collect::<String>()).unwrap();
    }
    writeln!(table, "y = {}, b = {}, z = {}", nf.y, nf.b, nf.z).unwrap();
    writeln!(table, "T v = {}", vector_cells(&tv.to_i64())).unwrap();
    let mut result = serde_json::to_value(&nf)?;
    result["certified"] = json!(certified);
    Ok(Report {
        config: json!({ "input": input, "genus": p.genus, "power": p.power }),
        result,
        table,
        csv: None,
        mismatch: !certified,
    })
}

fn matrix_text(labels: &[String], m: &[Vec<usize>], sep: &str, width: usize) -> String {
    let mut s = format!("{:>width$}", "");
    for l in labels {
        write!(s, "{sep}{l:>width$}").unwrap();
    }
    s.push('\n');
    for (l, row) in labels.iter().zip(m) {
        write!(s, "{l:>width$}").unwrap();
        for x in row {
            write!(s, "{sep}{x:>width$}").unwrap();
        }
        s.push('\n');
    }
    s
}

fn polygon(g: usize, k: usize, pair: Option<Vec<usize>>, svg: Option<PathBuf>, minimal: bool) -> anyhow::Result<Report> {
    let mut indices = symsys_core::polygon::a_k_indices(g, k);
    if let Some(p) = &pair {
        if p.len() != 4 {
            bail!("--pair takes four indices i1,j1,i2,j2");
        }
        indices = vec![(p[0], p[1]), (p[2], p[3])];
    }
    let curves = indices
        .iter()
        .map(|&(i, j)| alpha_curve(g, k, i, j))
        .collect::<Result<Vec<_>>>()?;
    let placement = Placement::canonical(&curves)?;
    let matrix = if minimal {
        minimal_crossing_matrix(&curves)?
    } else {
        crossing_matrix(&curves, &placement)?
    };
    let distinct_ok = (0..curves.len())
        .all(|a| (0..curves.len()).all(|b| matrix[a][b] == if curves[a] == curves[b] { 0 } else { 2 }));
    if let Some(path) = &svg {
        std::fs::write(path, render_svg(&curves, &placement)?).with_context(|| format!("writing {}", path.display()))?;
    }
    let labels: Vec<String> = indices.iter().map(|(i, j)| format!("a({i};{j})")).collect();
    let curve_info: Vec<Value> = indices
        .iter()
        .zip(&curves)
        .map(|(&(i, j), c)| -> anyhow::Result<Value> {
            Ok(json!({ "i": i, "j": j, "quad": c.quad(), "partition": partition(c)? }))
        })
        .collect::<anyhow::Result<_>>()?;
    let width = labels.iter().map(|l| l.len()).max().unwrap_or(1);
    Ok(Report {
        config: json!({ "g": g, "k": k, "pair": pair, "svg": svg, "minimal": minimal }),
        result: json!({
            "curves": curve_info,
            "placement": if minimal { Value::Null } else { serde_json::to_value(&placement)? },
            "crossings": matrix,
            "distinct_pairs_cross_twice": distinct_ok,
        }),
        table: matrix_text(&labels, &matrix, " ", width),
        csv: Some(matrix_text(&labels, &matrix, ",", 0)),
        mismatch: !distinct_ok,
    })
}

fn dispatch(cli: &Cli) -> anyhow::Result<Report> {
    match &cli.command {
        &Command::Construct { which, genus, k } => construct(which, genus, k),
        Command::Verify { input, k } => verify(input, *k),
        &Command::Search {
            g,
            m,
            primitive,
            budget_nodes,
            discover,
            max_vectors,
        } => search(g, m, primitive, discover, budget(max_vectors, budget_nodes)),
        &Command::VerifyBounds {
            gmax,
            mmax,
            budget_nodes,
            discover,
            max_vectors,
        } => bounds(gmax, mmax, discover, budget(max_vectors, budget_nodes)),
        Command::Reduce { input, mode } => reduce(input, *mode),
        Command::NormalForm { input } => normal_form(input),
        Command::Polygon {
            g,
            k,
            pair,
            svg,
            minimal,
        } => polygon(*g, *k, pair.clone(), svg.clone(), *minimal),
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let name = cli.command.name();
    let format = cli.format.unwrap_or_else(|| cli.command.default_format());
    let mut report = dispatch(&cli)?;
    if let Value::Object(map) = &mut report.config {
        map.insert("seed".into(), json!(cli.seed));
        map.insert("format".into(), json!(format));
    }
    let envelope = Envelope {
        command: name,
        config: &report.config,
        result: &report.result,
    };
    let json_text = serde_json::to_string_pretty(&envelope)? + "\n";
    let human = match format {
        Format::Json => None,
        Format::Table => Some(report.table),
        Format::Csv => Some(report.csv.ok_or_else(|| anyhow!("{name} has no CSV output"))?),
    };
    match human {
        None => print!("{json_text}"),
        Some(text) => {
            print!("{text}");
            let path = cli.json_out.clone().unwrap_or_else(|| PathBuf::from(format!("symsys-{name}.json")));
            std::fs::write(&path, &json_text).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(!report.mismatch)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
