//! `tribracket`: verify tribrackets and brackets, search for brackets,
//! compute Φ for catalog or PD diagrams, and reproduce the invariant tables.
//!
//! Exit codes: 0 success, 1 internal error or failed check/mismatch,
//! 2 input error, 3 resource guard.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use tribracket::bracket::{verify_bracket, SearchOptions, SkeinVariant, TribracketBracket};
use tribracket::catalog::{Catalog, CatalogEntry, ExpectedRow, Filter};
use tribracket::diagram::{parse_pd, LinkDiagram, PdCode};
use tribracket::formats;
use tribracket::invariant::{
    counting_invariant, enumerate_colorings, phi, search_orientations, StateSum,
};
use tribracket::ring::ModulusRing;
use tribracket::tribracket::Tribracket;
use tribracket::{builtins, Error, InvariantPolynomial};

/// `println!` that stops quietly when the reader has gone away (`| head`).
macro_rules! out {
    ($($arg:tt)*) => {
        if let Err(e) = writeln!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            return Err(Error::Io(e));
        }
    };
}

#[derive(Parser, Debug)]
#[command(
    name = "tribracket",
    version,
    about = "Tribracket brackets and the link invariants they define"
)]
struct Cli {
    /// Write a JSON run report to this path (`-` for stderr).
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Include wall-clock timing in the run report.
    #[arg(long, global = true)]
    timing: bool,
    /// Worker threads (default: all cores). Affects time only.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the tribracket axioms for a tensor file or built-in name.
    VerifyTribracket {
        /// JSON file, or one of x3, x2, trivial.
        source: String,
    },
    /// Check the bracket axioms and print δ and w.
    VerifyBracket {
        /// JSON file, or one of z7, beta1, beta2.
        source: String,
        #[command(flatten)]
        variant: VariantArg,
    },
    /// Enumerate every bracket on a tribracket over Z/m, one JSON line each.
    SearchBrackets {
        /// Tribracket JSON file or built-in name.
        tribracket: String,
        #[arg(long, short)]
        modulus: u32,
        /// Stop after this many brackets (in canonical order).
        #[arg(long)]
        limit: Option<usize>,
        /// Check every full assignment instead of pruning (slow oracle mode).
        #[arg(long)]
        no_prune: bool,
        #[command(flatten)]
        variant: VariantArg,
    },
    /// Coloring count and Φ of one diagram.
    Invariant {
        /// Catalog name or PD text.
        #[arg(long, short)]
        diagram: String,
        /// Bracket JSON file or built-in name.
        #[arg(long, short)]
        bracket: String,
        /// Component reversal mask (bit i reverses component i).
        #[arg(long, conflicts_with = "all_orientations")]
        orientations: Option<u64>,
        /// Report Φ for every orientation mask.
        #[arg(long)]
        all_orientations: bool,
        /// List every coloring with its β value.
        #[arg(long)]
        list_colorings: bool,
    },
    /// Compute Φ over a corpus and compare with the expected tables (CSV).
    Tables {
        /// beta1, beta2, or a bracket JSON file.
        #[arg(long, short)]
        bracket: String,
        /// Name of the expected table when `--bracket` is a file.
        #[arg(long)]
        table: Option<String>,
        #[arg(long, value_enum, default_value_t = Corpus::All)]
        corpus: Corpus,
    },
    /// Dump faces, signs and roles of a diagram as JSON.
    Diagram {
        /// Catalog name or PD text.
        diagram: String,
        #[arg(long)]
        orientations: Option<u64>,
    },
    /// List catalog entries.
    Catalog {
        #[arg(long)]
        tag: Option<String>,
        #[arg(long)]
        min_crossings: Option<usize>,
        #[arg(long)]
        max_crossings: Option<usize>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct VariantArg {
    /// Check the printed five-term form of (ii.iv) instead of the corrected one.
    #[arg(long)]
    as_printed: bool,
}

impl VariantArg {
    fn get(self) -> SkeinVariant {
        if self.as_printed {
            SkeinVariant::AsPrinted
        } else {
            SkeinVariant::Corrected
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Corpus {
    Knots8,
    Links7,
    All,
}

#[derive(Serialize, Debug, Default)]
struct RunReport {
    command: Vec<String>,
    inputs_digest: String,
    results: Vec<ItemResult>,
    mismatches: Vec<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
    exit_code: u8,
}

#[derive(Serialize, Debug)]
struct ItemResult {
    name: String,
    status: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    detail: String,
}

#[derive(Serialize, Debug)]
struct Mismatch {
    name: String,
    expected: String,
    computed: String,
    note: String,
}

/// How a command finished, before it becomes an exit code.
enum Outcome {
    Ok,
    Failed,
}

struct Run {
    report: RunReport,
    digest: Sha256,
}

impl Run {
    fn input(&mut self, bytes: &[u8]) {
        self.digest.update((bytes.len() as u64).to_le_bytes());
        self.digest.update(bytes);
    }

    fn item(&mut self, name: &str, status: &str, detail: String) {
        self.report.results.push(ItemResult {
            name: name.to_string(),
            status: status.to_string(),
            detail,
        });
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let started = Instant::now();
    let mut run = Run {
        report: RunReport {
            command: command_echo(std::env::args()),
            ..RunReport::default()
        },
        digest: Sha256::new(),
    };
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build_global()
        {
            log::warn!("could not size the worker pool: {e}");
        }
    }
    let code = match dispatch(&cli, &mut run) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            run.item("error", "error", e.to_string());
            exit_code(&e)
        }
    };
    let _ = std::io::stdout().flush();
    run.report.inputs_digest = hex(&run.digest.finalize());
    run.report.exit_code = code;
    if cli.timing {
        run.report.timing_ms = Some(started.elapsed().as_millis());
    }
    if let Some(path) = &cli.report {
        let text = serde_json::to_string_pretty(&run.report).expect("serializable") + "\n";
        let written = if path == Path::new("-") {
            std::io::stderr().write_all(text.as_bytes())
        } else {
            std::fs::write(path, text)
        };
        if let Err(e) = written {
            eprintln!("error: cannot write report: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}

/// The invocation minus the program path and `--workers`, which only
/// affects time.
fn command_echo(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out = vec!["tribracket".to_string()];
    let mut args = args.skip(1);
    while let Some(a) = args.next() {
        if a == "--workers" {
            args.next();
        } else if !a.starts_with("--workers=") {
            out.push(a);
        }
    }
    out
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn exit_code(e: &Error) -> u8 {
    match e {
        _ if e.is_resource_guard() => 3,
        Error::ModulusMismatch { .. } => 1,
        _ => 2,
    }
}

fn dispatch(cli: &Cli, run: &mut Run) -> Result<Outcome, Error> {
    match &cli.command {
        Command::VerifyTribracket { source } => verify_tribracket(run, source),
        Command::VerifyBracket { source, variant } => {
            verify_bracket_cmd(run, source, variant.get())
        }
        Command::SearchBrackets {
            tribracket,
            modulus,
            limit,
            no_prune,
            variant,
        } => search(
            run,
            tribracket,
            *modulus,
            *limit,
            !no_prune,
            variant.get(),
            cli.workers,
        ),
        Command::Invariant {
            diagram,
            bracket,
            orientations,
            all_orientations,
            list_colorings,
        } => invariant(
            run,
            diagram,
            bracket,
            *orientations,
            *all_orientations,
            *list_colorings,
        ),
        Command::Tables {
            bracket,
            table,
            corpus,
        } => tables(run, bracket, table.as_deref(), *corpus),
        Command::Diagram {
            diagram,
            orientations,
        } => dump(run, diagram, *orientations),
        Command::Catalog {
            tag,
            min_crossings,
            max_crossings,
        } => list(run, tag, *min_crossings, *max_crossings),
    }
}

/// Reads `source` as a file if it exists, otherwise returns `None` so the
/// caller can try a built-in name.
fn read_source(run: &mut Run, source: &str) -> Result<Option<String>, Error> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        run.input(text.as_bytes());
        Ok(Some(text))
    } else {
        run.input(source.as_bytes());
        Ok(None)
    }
}

fn load_tribracket(run: &mut Run, source: &str) -> Result<Tribracket, Error> {
    match read_source(run, source)? {
        Some(text) => formats::tribracket_from_json(&text),
        None => builtins::tribracket_by_name(source),
    }
}

fn load_bracket(run: &mut Run, source: &str) -> Result<TribracketBracket, Error> {
    match read_source(run, source)? {
        Some(text) => formats::bracket_from_json(&text, SkeinVariant::Corrected),
        None => builtins::bracket_by_name(source),
    }
}

fn load_catalog() -> Result<Catalog, Error> {
    Catalog::load()
}

/// A catalog entry by name, or a diagram parsed from PD text.
fn load_diagram(
    run: &mut Run,
    catalog: &Catalog,
    text: &str,
) -> Result<(String, PdCode, Vec<bool>), Error> {
    run.input(text.as_bytes());
    match catalog.get(text) {
        Ok(e) => Ok((e.name.clone(), e.pd.clone(), e.default_orientation.clone())),
        Err(unknown) => {
            let looks_like_pd = text.contains(['[', '(', '{']);
            if looks_like_pd {
                Ok(("<pd>".to_string(), parse_pd(text)?, Vec::new()))
            } else {
                Err(unknown)
            }
        }
    }
}

fn verify_tribracket(run: &mut Run, source: &str) -> Result<Outcome, Error> {
    let x = load_tribracket(run, source)?;
    let report = x.verify();
    out!("size: {}", x.size());
    out!("valid: {}", report.valid);
    for v in report.violations.iter().take(20) {
        out!("violation: {:?} at {:?}", v.axiom, v.witness);
    }
    if report.violations.len() > 20 {
        out!("... {} violations in total", report.violations.len());
    }
    let status = if report.valid { "valid" } else { "invalid" };
    run.item(
        source,
        status,
        format!("{} violations", report.violations.len()),
    );
    Ok(if report.valid {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

fn verify_bracket_cmd(
    run: &mut Run,
    source: &str,
    variant: SkeinVariant,
) -> Result<Outcome, Error> {
    let (x, a, b) = match read_source(run, source)? {
        Some(text) => {
            let p = formats::bracket_parts_from_json(&text)?;
            (p.tribracket, p.a, p.b)
        }
        None => {
            let b = builtins::bracket_by_name(source)?;
            (b.tribracket().clone(), b.a().clone(), b.b().clone())
        }
    };
    for t in [&a, &b] {
        if let Some((_, value)) = t.first_non_unit() {
            return Err(Error::NonUnit {
                value,
                modulus: t.ring().modulus(),
            });
        }
    }
    let tri = x.verify();
    let report = verify_bracket(&x, &a, &b, variant);
    let show = |v: Option<u32>| v.map_or("not constant".to_string(), |v| v.to_string());
    out!("modulus: {}", a.ring().modulus());
    out!("tribracket valid: {}", tri.valid);
    out!("variant: {variant:?}");
    out!("delta: {}", show(report.delta));
    out!("w: {}", show(report.w));
    for v in report.skein_violations.iter().take(20) {
        out!("violation: ({}) at {:?}", v.equation, v.witness);
    }
    let valid = tri.valid && report.valid;
    out!("valid: {valid}");
    run.item(
        source,
        if valid { "valid" } else { "invalid" },
        format!("delta {}, w {}", show(report.delta), show(report.w)),
    );
    Ok(if valid { Outcome::Ok } else { Outcome::Failed })
}

fn search(
    run: &mut Run,
    source: &str,
    modulus: u32,
    limit: Option<usize>,
    prune: bool,
    variant: SkeinVariant,
    workers: Option<usize>,
) -> Result<Outcome, Error> {
    let x = load_tribracket(run, source)?;
    run.input(&modulus.to_le_bytes());
    let ring = ModulusRing::new(modulus)?;
    let report = x.verify();
    if !report.valid {
        return Err(Error::MalformedTensor(format!(
            "{source} is not a tribracket ({} violations)",
            report.violations.len()
        )));
    }
    let options = SearchOptions {
        limit,
        workers,
        prune,
        variant,
    };
    let found = tribracket::search_brackets(&x, ring, &options)?;
    let mut out = std::io::stdout().lock();
    for b in &found {
        writeln!(out, "{}", formats::bracket_to_json(b))?;
    }
    run.item(
        source,
        "ok",
        format!("{} brackets over Z/{modulus}", found.len()),
    );
    Ok(Outcome::Ok)
}

fn invariant(
    run: &mut Run,
    diagram: &str,
    bracket: &str,
    orientations: Option<u64>,
    all: bool,
    list_colorings: bool,
) -> Result<Outcome, Error> {
    let b = load_bracket(run, bracket)?;
    let catalog = load_catalog()?;
    let (name, pd, default) = load_diagram(run, &catalog, diagram)?;
    let masks: Vec<u64> = if all {
        (0..1u64 << pd.component_count()).collect()
    } else {
        vec![orientations.unwrap_or_else(|| mask_of(&default))]
    };
    out!(
        "diagram: {name} ({} crossings, {} components)",
        pd.crossing_count(),
        pd.component_count()
    );
    out!(
        "bracket: {bracket} over Z/{} (delta {}, w {})",
        b.ring().modulus(),
        b.delta(),
        b.w()
    );
    for mask in masks {
        let d = LinkDiagram::with_orientation_mask(&pd, mask)?;
        let value = phi(&d, &b)?;
        let count = counting_invariant(&d, b.tribracket());
        out!("orientation mask: {mask}");
        out!("colorings: {count}");
        out!("phi: {value}");
        out!("phi json: {}", serde_json::to_string(&value)?);
        if list_colorings {
            let sum = StateSum::new(&d)?;
            for c in enumerate_colorings(&d, b.tribracket()) {
                let faces: Vec<String> = c.faces.iter().map(|f| (f + 1).to_string()).collect();
                out!("  [{}] beta = {}", faces.join(" "), sum.beta(&c, &b)?);
            }
        }
        run.item(
            &name,
            "ok",
            format!("mask {mask}: {count} colorings, phi {value}"),
        );
    }
    Ok(Outcome::Ok)
}

fn mask_of(flags: &[bool]) -> u64 {
    flags
        .iter()
        .enumerate()
        .fold(0, |m, (i, &r)| m | (r as u64) << i)
}

#[derive(Debug)]
struct Row {
    name: String,
    crossings: usize,
    components: usize,
    colorings: usize,
    phi: InvariantPolynomial,
    mask: u64,
    verdict: Verdict,
    expected: Option<ExpectedRow>,
    /// Every value the second presentation takes over all masks, when it has one.
    second: Option<Vec<InvariantPolynomial>>,
    values: Vec<InvariantPolynomial>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Match,
    /// No orientation matches, and the second presentation agrees with the
    /// first: the expected cell disagrees with the definitions.
    Erratum,
    /// The two presentations disagree: a bug in this program.
    Inconsistent,
    /// No second presentation to decide with.
    Mismatch,
    NoRow,
}

impl Verdict {
    fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "yes",
            Verdict::Erratum => "erratum",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Mismatch => "no",
            Verdict::NoRow => "no-row",
        }
    }
}

fn table_row(
    entry: &CatalogEntry,
    b: &TribracketBracket,
    expected: Option<&ExpectedRow>,
) -> Result<Row, Error> {
    let default = entry.orientation_mask();
    let d = entry.diagram()?;
    let colorings = counting_invariant(&d, b.tribracket());
    let base = Row {
        name: entry.name.clone(),
        crossings: entry.crossings(),
        components: entry.components,
        colorings,
        phi: phi(&d, b)?,
        mask: default,
        verdict: Verdict::NoRow,
        expected: expected.cloned(),
        second: None,
        values: Vec::new(),
    };
    let Some(row) = expected else {
        return Ok(base);
    };
    let found = search_orientations(&entry.pd, b, &row.value)?;
    if let Some(mask) = found.matched {
        let value = found.values.last().expect("matched value").1.clone();
        return Ok(Row {
            phi: value,
            mask,
            verdict: Verdict::Match,
            ..base
        });
    }
    let mut values: Vec<InvariantPolynomial> = found.values.into_iter().map(|(_, v)| v).collect();
    values.sort_by_key(|v| v.to_string());
    values.dedup();
    let second = match entry.braid_pd() {
        None => None,
        Some(pd) => {
            let pd = pd?;
            let mut vs = (0..1u64 << pd.component_count())
                .map(|m| phi(&LinkDiagram::with_orientation_mask(&pd, m)?, b))
                .collect::<Result<Vec<_>, Error>>()?;
            vs.sort_by_key(|v| v.to_string());
            vs.dedup();
            Some(vs)
        }
    };
    let verdict = match &second {
        None => Verdict::Mismatch,
        Some(s) if *s == values => Verdict::Erratum,
        Some(_) => Verdict::Inconsistent,
    };
    Ok(Row {
        verdict,
        second,
        values,
        ..base
    })
}

fn tables(
    run: &mut Run,
    bracket: &str,
    table: Option<&str>,
    corpus: Corpus,
) -> Result<Outcome, Error> {
    let b = load_bracket(run, bracket)?;
    let catalog = load_catalog()?;
    let table_name = table.unwrap_or(bracket);
    let expected = catalog.table(table_name)?;
    if let Some(r) = expected.rows.iter().find(|r| r.value.ring() != b.ring()) {
        return Err(Error::ModulusMismatch {
            left: b.ring().modulus(),
            right: r.value.ring().modulus(),
        });
    }
    let mut entries: Vec<&CatalogEntry> = Vec::new();
    if corpus != Corpus::Links7 {
        entries.extend(catalog.list(&Filter {
            max_crossings: Some(8),
            ..Filter::tag("knot")
        }));
    }
    if corpus != Corpus::Knots8 {
        entries.extend(catalog.list(&Filter {
            max_crossings: Some(7),
            ..Filter::tag("link")
        }));
    }
    for e in &entries {
        run.input(e.name.as_bytes());
        run.input(e.pd.to_string().as_bytes());
    }
    let rows = entries
        .par_iter()
        .map(|e| table_row(e, &b, expected.get(&e.name)))
        .collect::<Result<Vec<_>, Error>>()?;

    let mut csv = csv::Writer::from_writer(std::io::stdout().lock());
    csv.write_record([
        "name",
        "crossings",
        "components",
        "coloring_count",
        "phi",
        "orientation_mask",
        "match",
    ])
    .map_err(csv_error)?;
    for r in &rows {
        csv.write_record([
            r.name.clone(),
            r.crossings.to_string(),
            r.components.to_string(),
            r.colorings.to_string(),
            r.phi.to_string(),
            r.mask.to_string(),
            r.verdict.as_str().to_string(),
        ])
        .map_err(csv_error)?;
    }
    csv.flush()?;
    drop(csv);

    let mut failed = 0;
    for r in &rows {
        let note = r
            .expected
            .as_ref()
            .and_then(|e| e.printed.as_ref())
            .map(|p| format!("expected cell printed as {p:?}"))
            .unwrap_or_default();
        if !note.is_empty() {
            eprintln!(
                "note: {}: {note}, compared as {}",
                r.name,
                r.expected.as_ref().expect("row").value
            );
        }
        run.item(&r.name, r.verdict.as_str(), r.phi.to_string());
        if r.verdict == Verdict::Match {
            continue;
        }
        failed += 1;
        let expected = r
            .expected
            .as_ref()
            .map_or("-".to_string(), |e| e.value.to_string());
        let computed = if r.values.is_empty() {
            r.phi.to_string()
        } else {
            r.values
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" / ")
        };
        let why = match r.verdict {
            Verdict::Erratum => "second presentation agrees; table erratum",
            Verdict::Inconsistent => "presentations disagree",
            Verdict::Mismatch => "no second presentation",
            _ => "no expected row",
        };
        eprintln!(
            "- {}: expected {expected}, computed {computed} ({why})",
            r.name
        );
        if let (Verdict::Inconsistent, Some(second)) = (r.verdict, &r.second) {
            let s: Vec<String> = second.iter().map(|v| v.to_string()).collect();
            eprintln!("  second presentation gives {}", s.join(" / "));
        }
        run.report.mismatches.push(Mismatch {
            name: r.name.clone(),
            expected,
            computed,
            note: [why.to_string(), note]
                .join("; ")
                .trim_end_matches("; ")
                .to_string(),
        });
    }
    eprintln!(
        "{} of {} rows match {table_name}",
        rows.len() - failed,
        rows.len()
    );
    Ok(if failed == 0 {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn dump(run: &mut Run, diagram: &str, orientations: Option<u64>) -> Result<Outcome, Error> {
    let catalog = load_catalog()?;
    let (name, pd, default) = load_diagram(run, &catalog, diagram)?;
    let d =
        LinkDiagram::with_orientation_mask(&pd, orientations.unwrap_or_else(|| mask_of(&default)))?;
    out!("{}", serde_json::to_string_pretty(&d.dump())?);
    run.item(&name, "ok", String::new());
    Ok(Outcome::Ok)
}

fn list(
    run: &mut Run,
    tag: &Option<String>,
    min: Option<usize>,
    max: Option<usize>,
) -> Result<Outcome, Error> {
    let catalog = load_catalog()?;
    let filter = Filter {
        tag: tag.clone(),
        min_crossings: min,
        max_crossings: max,
    };
    for e in catalog.list(&filter) {
        let tags: Vec<&str> = e.tags.iter().map(String::as_str).collect();
        out!(
            "{}\t{}\t{}\t{}",
            e.name,
            e.crossings(),
            e.components,
            tags.join(",")
        );
        run.input(e.name.as_bytes());
    }
    Ok(Outcome::Ok)
}
