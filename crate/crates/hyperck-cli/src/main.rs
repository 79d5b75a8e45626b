//! Command-line surface over the hyperck library.
//!
//! Exit codes: 0 success, 1 precondition/validation failure, 2 syntax
//! error, 3 internal invariant breach. Refusals print one JSON line on
//! stderr with the machine-readable reason.

use std::collections::BTreeSet;
use std::fs;
use std::panic;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hyperck::analysis::{catalog_match, giut_status, non_amenability_search};
use hyperck::hypergraph::{EdgeId, VertexId};
use hyperck::io::{
    emit_dot, parse_expression, parse_hg, serialize_hg, serialize_hg_json, HgDocument, ParseError,
};
use hyperck::repcheck::{
    family_from_json, symbolic_numeric_consistency, verify_ck_family, MatrixFamily,
};
use hyperck::rewrite::{derive_forced_equalities, normalize};
use hyperck::transform::{
    attach_product, decompose_ranges, dual_graph, indelay, merge_edges, move_i, move_o, move_r,
    move_s, restrict_subhypergraph, Partition, TransformResult,
};

#[derive(Parser)]
#[command(name = "hyperck", version, about = "finite hypergraph toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnalyzePass {
    Giut,
    Amenability,
    Lattice,
}

#[derive(Subcommand)]
enum Command {
    /// Kind, sinks/sources, quasi-perfect flag, and catalog match.
    Classify { file: PathBuf },
    /// Apply a hypergraph transform and write the resulting document.
    Transform {
        file: PathBuf,
        /// One of: decompose | merge E F | dual | move-s W | move-r W |
        /// move-o W | move-i W | indelay W | attach FILE2 F W | restrict V1,V2,...
        #[arg(long)]
        op: String,
        /// Partition blocks for move-o/move-i/indelay, e.g. "e1,e2|e3".
        #[arg(long)]
        blocks: Option<String>,
        /// Emit the JSON mirror instead of the text format.
        #[arg(long)]
        json: bool,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an analysis pass; the verdict is printed as JSON.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum)]
        pass: AnalyzePass,
        /// Candidate budget for the amenability subset search.
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
    },
    /// Normalize an expression modulo the hypergraph relations.
    Normalize {
        file: PathBuf,
        #[arg(long)]
        expr: String,
    },
    /// Verify a matrix family against the hypergraph relations.
    Verify {
        file: PathBuf,
        #[arg(long)]
        family: PathBuf,
    },
    /// Seeded consistency check between rewriting and a verified family.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = 200)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit the hypergraph as a DOT digraph.
    Dot { file: PathBuf },
}

enum CliError {
    /// Unparseable input: exit code 2.
    Syntax(String),
    /// Violated precondition or failed validation: exit code 1.
    Precondition(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Syntax(_) => 2,
            CliError::Precondition(_) => 1,
        }
    }

    fn report(&self) {
        let (kind, message) = match self {
            CliError::Syntax(m) => ("syntax", m),
            CliError::Precondition(m) => ("precondition", m),
        };
        eprintln!("{}", serde_json::json!({ "error": message, "kind": kind }));
    }
}

impl From<ParseError> for CliError {
    fn from(err: ParseError) -> Self {
        match err {
            ParseError::Syntax(_) | ParseError::Json(_) => CliError::Syntax(err.to_string()),
            _ => CliError::Precondition(err.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = panic::catch_unwind(move || run(cli));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(err)) => {
            err.report();
            ExitCode::from(err.exit_code())
        }
        Err(_) => {
            eprintln!(
                "{}",
                serde_json::json!({"error": "internal invariant breach", "kind": "internal"})
            );
            ExitCode::from(3)
        }
    }
}

fn read_document(path: &Path) -> Result<HgDocument, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Precondition(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_hg(&text)?)
}

fn read_family(path: &Path) -> Result<MatrixFamily, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Precondition(format!("cannot read {}: {e}", path.display())))?;
    family_from_json(&text).map_err(|e| CliError::Syntax(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Classify { file } => classify(&file),
        Command::Transform {
            file,
            op,
            blocks,
            json,
            out,
        } => transform(&file, &op, blocks.as_deref(), json, out.as_deref()),
        Command::Analyze { file, pass, budget } => analyze(&file, pass, budget),
        Command::Normalize { file, expr } => normalize_cmd(&file, &expr),
        Command::Verify { file, family } => verify_cmd(&file, &family),
        Command::Oracle {
            file,
            family,
            trials,
            seed,
        } => oracle_cmd(&file, &family, trials, seed),
        Command::Dot { file } => {
            let doc = read_document(&file)?;
            print!("{}", emit_dot(&doc.hypergraph, &doc.name));
            Ok(())
        }
    }
}

fn classify(file: &Path) -> Result<(), CliError> {
    let doc = read_document(file)?;
    let h = &doc.hypergraph;
    let (sinks, sources) = h.sinks_sources();
    let fmt_set = |set: &BTreeSet<VertexId>| -> String {
        if set.is_empty() {
            "-".to_owned()
        } else {
            set.iter()
                .map(VertexId::as_str)
                .collect::<Vec<_>>()
                .join(" ")
        }
    };
    println!("name: {}", doc.name);
    println!("kind: {}", h.classify_kind());
    println!("vertices: {}", h.vertex_count());
    println!("edges: {}", h.edge_count());
    println!("sinks: {}", fmt_set(&sinks));
    println!("sources: {}", fmt_set(&sources));
    println!("quasi_perfect_only: {}", h.quasi_perfect_only());
    match catalog_match(h) {
        Some(m) => println!("catalog: {} ({})", m.name, m.shape),
        None => println!("catalog: none"),
    }
    Ok(())
}

fn parse_blocks(spec: &str) -> Partition {
    Partition(
        spec.split('|')
            .map(|block| {
                block
                    .split(',')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(EdgeId::new)
                    .collect()
            })
            .collect(),
    )
}

fn partition_for(
    doc: &HgDocument,
    w: &VertexId,
    blocks: Option<&str>,
) -> Result<Partition, CliError> {
    if let Some(spec) = blocks {
        return Ok(parse_blocks(spec));
    }
    doc.partitions.get(w).cloned().ok_or_else(|| {
        CliError::Precondition(format!(
            "no partition for vertex {w}: pass --blocks or declare one in the document"
        ))
    })
}

fn transform(
    file: &Path,
    op: &str,
    blocks: Option<&str>,
    json: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let doc = read_document(file)?;
    let h = &doc.hypergraph;
    let tokens: Vec<&str> = op.split_whitespace().collect();
    let precondition =
        |e: hyperck::transform::TransformError| CliError::Precondition(e.to_string());
    let (result, tag): (TransformResult, &str) = match tokens.as_slice() {
        ["decompose"] => (decompose_ranges(h), "decompose"),
        ["merge", e, f] => (
            merge_edges(h, &EdgeId::new(*e), &EdgeId::new(*f)).map_err(precondition)?,
            "merge",
        ),
        ["dual"] => (
            TransformResult {
                hypergraph: dual_graph(h),
                relabeling: Default::default(),
                warnings: Vec::new(),
            },
            "dual",
        ),
        ["move-s", w] => (
            move_s(h, &VertexId::new(*w)).map_err(precondition)?,
            "move_s",
        ),
        ["move-r", w] => (
            move_r(h, &VertexId::new(*w)).map_err(precondition)?,
            "move_r",
        ),
        ["move-o", w] => {
            let w = VertexId::new(*w);
            let partition = partition_for(&doc, &w, blocks)?;
            (move_o(h, &w, &partition).map_err(precondition)?, "move_o")
        }
        ["move-i", w] => {
            let w = VertexId::new(*w);
            let partition = partition_for(&doc, &w, blocks)?;
            (move_i(h, &w, &partition).map_err(precondition)?, "move_i")
        }
        ["indelay", w] => {
            let w = VertexId::new(*w);
            let partition = partition_for(&doc, &w, blocks)?;
            (indelay(h, &w, &partition).map_err(precondition)?, "indelay")
        }
        ["attach", other, f, w] => {
            let other_doc = read_document(Path::new(other))?;
            (
                attach_product(
                    h,
                    &other_doc.hypergraph,
                    &EdgeId::new(*f),
                    &VertexId::new(*w),
                )
                .map_err(precondition)?,
                "attach",
            )
        }
        ["restrict", rest @ ..] if !rest.is_empty() => {
            let keep: BTreeSet<VertexId> = rest
                .iter()
                .flat_map(|chunk| chunk.split(','))
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(VertexId::new)
                .collect();
            let (restricted, certificate) =
                restrict_subhypergraph(h, &keep).map_err(precondition)?;
            eprintln!(
                "{}",
                serde_json::json!({ "quotient_certificate": certificate })
            );
            (
                TransformResult {
                    hypergraph: restricted,
                    relabeling: Default::default(),
                    warnings: Vec::new(),
                },
                "restrict",
            )
        }
        _ => {
            return Err(CliError::Syntax(format!(
                "unrecognized --op specification: {op:?}"
            )))
        }
    };
    for warning in &result.warnings {
        eprintln!("{}", serde_json::json!({ "warning": warning }));
    }
    let out_doc = HgDocument {
        name: format!("{}_{}", doc.name, tag),
        hypergraph: result.hypergraph,
        citation: doc.citation.clone(),
        partitions: Default::default(),
    };
    let rendered = if json {
        serialize_hg_json(&out_doc)
    } else {
        serialize_hg(&out_doc)
    };
    match out {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| CliError::Precondition(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn analyze(file: &Path, pass: AnalyzePass, budget: u64) -> Result<(), CliError> {
    let doc = read_document(file)?;
    let h = &doc.hypergraph;
    match pass {
        AnalyzePass::Giut => {
            let status = giut_status(h);
            println!(
                "{}",
                serde_json::to_string_pretty(&status).expect("status encodes")
            );
        }
        AnalyzePass::Amenability => {
            let found = non_amenability_search(h, budget)
                .map_err(|e| CliError::Precondition(e.to_string()))?;
            let payload = serde_json::json!({
                "non_amenability_certificate": found,
                "note": if found.is_some() {
                    "certificate proves the algebra is not nuclear"
                } else {
                    "no witness found; this is not a nuclearity proof"
                },
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&payload).expect("encodes")
            );
        }
        AnalyzePass::Lattice => {
            let lattice = h.gen_vertex_lattice();
            let encode = |sets: &BTreeSet<BTreeSet<VertexId>>| -> Vec<Vec<String>> {
                sets.iter()
                    .map(|s| s.iter().map(|v| v.0.clone()).collect())
                    .collect()
            };
            let payload = serde_json::json!({
                "base": encode(&lattice.base),
                "closure": encode(&lattice.closure),
                "closure_size": lattice.closure.len(),
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&payload).expect("encodes")
            );
        }
    }
    Ok(())
}

fn normalize_cmd(file: &Path, expr_text: &str) -> Result<(), CliError> {
    let doc = read_document(file)?;
    let expr = parse_expression(expr_text).map_err(|e| CliError::Syntax(e.to_string()))?;
    let rs = derive_forced_equalities(&doc.hypergraph);
    let normal = normalize(&expr, &rs).map_err(|e| CliError::Precondition(e.to_string()))?;
    println!("normal_form: {normal}");
    match normal.gauge_degree() {
        Some(d) => println!("gauge_degree: {d}"),
        None => println!(
            "gauge_degree: {}",
            if normal.is_zero() { "zero" } else { "mixed" }
        ),
    }
    Ok(())
}

fn verify_cmd(file: &Path, family: &Path) -> Result<(), CliError> {
    let doc = read_document(file)?;
    let fam = read_family(family)?;
    let report = verify_ck_family(&doc.hypergraph, &fam)
        .map_err(|e| CliError::Precondition(e.to_string()))?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report encodes")
    );
    Ok(())
}

fn oracle_cmd(file: &Path, family: &Path, trials: u32, seed: u64) -> Result<(), CliError> {
    let doc = read_document(file)?;
    let fam = read_family(family)?;
    let deviation = symbolic_numeric_consistency(&doc.hypergraph, &fam, trials, seed)
        .map_err(|e| CliError::Precondition(e.to_string()))?;
    let payload = serde_json::json!({
        "trials": trials,
        "seed": seed,
        "max_deviation": deviation,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&payload).expect("encodes")
    );
    Ok(())
}
