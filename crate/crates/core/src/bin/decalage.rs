use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use decalage::checks::CellularMode;
use decalage::corpus::corpus;
use decalage::filtration::FilteredComplex;
use decalage::flags::{
    flag_filtration_f, pushforward_flag_comparison, skeletal_flag, support_filtration_g, CellularSheaf,
    ClosedSubcomplexFlag, FlagFiltration, SimplicialComplex,
};
use decalage::io::json::{complex_from_value_unchecked, filtration_to_value, FilteredDocument};
use decalage::io::report::{envelope, page_grid, page_tsv, sha256_of_all, to_text, write_into};
use decalage::io::scenario::{run_check, CheckKind, CheckRequest, RunOptions, Scenario, Workspace};
use decalage::io::simplicial_text::{flag_from_value, map_from_value, parse_complex, sheaf_from_value};
use decalage::spectral::SpectralSequence;
use decalage::{Coefficients, Error, Result};

/// Exact spectral sequences of filtered complexes, décalage and flag filtrations.
#[derive(Parser)]
#[command(name = "decalage", version)]
struct Cli {
    /// Coefficient ring for reported groups.
    #[arg(long, global = true, default_value = "int")]
    coefficients: Coefficients,
    /// Last page to compute or compare.
    #[arg(long, global = true)]
    max_page: Option<usize>,
    /// Directory receiving report files.
    #[arg(long, global = true, env = "DECALAGE_OUT")]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// A filtered document (`.json`), a simplicial complex (`.txt`) or a
/// scenario bundle (directory).
#[derive(Args, Clone)]
struct Input {
    input: PathBuf,
    /// Flag for simplicial input; the skeletal flag by default.
    #[arg(long)]
    flag: Option<PathBuf>,
    /// Sheaf for simplicial input; the constant sheaf by default.
    #[arg(long)]
    sheaf: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check shapes and d ∘ d = 0, naming the offending degrees.
    Validate { input: PathBuf },
    Cohomology(Input),
    /// Spectral sequence of a filtration; prints page tables as TSV.
    Ss {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        page: Option<usize>,
        #[arg(long)]
        filtration: Option<String>,
    },
    /// Adds the shifted filtration of a named filtration to the document.
    Decale {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        filtration: Option<String>,
    },
    /// Adds the diagonal filtration of two named filtrations.
    Diagonal {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// sta, pdec, lmlu, cellular, dec-reindex, e1-triples, ker-formula, leray.
    Check {
        kind: CheckKind,
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "P")]
        p: String,
        #[arg(long, default_value = "F")]
        f: String,
        #[arg(long, default_value = "left")]
        mode: CellularMode,
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<i32>,
    },
    /// Flag filtration F of a simplicial complex, as a filtered document.
    FlagF(Input),
    /// Support filtration G on the barycentric subdivision.
    FlagG(Input),
    /// Compares the flag filtration pulled back along a map with the shifted
    /// filtration of the pushforward.
    Leray {
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// Flag on the target.
        #[arg(long)]
        flag: PathBuf,
        #[arg(long)]
        sheaf: Option<PathBuf>,
    },
    /// Seeded random filtered complexes.
    RandomCorpus {
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Runs scenario bundles.
    Run {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
    },
}

struct Ctx {
    coeffs: Coefficients,
    max_page: Option<usize>,
    out: Option<PathBuf>,
    seed: u64,
}

impl Ctx {
    fn opts(&self) -> RunOptions {
        RunOptions { coeffs: self.coeffs, max_page: self.max_page }
    }

    /// Prints the report, writes it to `name` under `--out`, maps pass to the exit code.
    fn emit(&self, name: &str, command: &str, hash: &str, pass: Option<bool>, result: Value) -> Result<ExitCode> {
        let text = to_text(&envelope(command, hash, self.coeffs, pass, result));
        write_into(self.out.as_deref(), name, &text)?;
        print!("{text}");
        Ok(if pass == Some(false) { ExitCode::from(1) } else { ExitCode::SUCCESS })
    }
}

fn read(path: &Path, bytes: &mut Vec<Vec<u8>>) -> Result<String> {
    let b = std::fs::read(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    bytes.push(b.clone());
    String::from_utf8(b).map_err(|_| Error::Parse(format!("{} is not UTF-8", path.display())))
}

fn read_json(path: &Path, bytes: &mut Vec<Vec<u8>>) -> Result<Value> {
    serde_json::from_str(&read(path, bytes)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn is_text(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "txt")
}

fn load_simplicial(
    path: &Path,
    flag: Option<&Path>,
    sheaf: Option<&Path>,
    bytes: &mut Vec<Vec<u8>>,
) -> Result<(SimplicialComplex, CellularSheaf, ClosedSubcomplexFlag)> {
    let x = parse_complex(&read(path, bytes)?)?;
    let s = match sheaf {
        Some(p) => sheaf_from_value(&x, &read_json(p, bytes)?)?,
        None => CellularSheaf::constant(&x),
    };
    let flag = match flag {
        Some(p) => flag_from_value(&x, &read_json(p, bytes)?)?,
        None => skeletal_flag(&x),
    };
    Ok((x, s, flag))
}

fn load(input: &Input) -> Result<Workspace> {
    if input.input.is_dir() {
        return Scenario::load(&input.input)?
            .workspace
            .ok_or_else(|| Error::Parse("the scenario has no complex".into()));
    }
    let mut bytes = Vec::new();
    if is_text(&input.input) {
        let (x, s, flag) = load_simplicial(&input.input, input.flag.as_deref(), input.sheaf.as_deref(), &mut bytes)?;
        let ff = flag_filtration_f(&x, &s, &flag)?;
        return Ok(Workspace::from_flag(ff, sha256_of_all(bytes.iter().map(Vec::as_slice))));
    }
    let v = read_json(&input.input, &mut bytes)?;
    let doc = FilteredDocument::from_value(&v)?;
    Ok(Workspace::from_document(doc, sha256_of_all(bytes.iter().map(Vec::as_slice))))
}

fn named(ws: &Workspace, name: Option<&str>) -> Result<(String, FilteredComplex)> {
    match name {
        Some(n) => Ok((n.to_string(), ws.filtration(n)?.clone())),
        None => ws
            .filtrations
            .first()
            .cloned()
            .ok_or_else(|| Error::Parse("the input has no filtration".into())),
    }
}

fn document(ws: &Workspace) -> Value {
    FilteredDocument { complex: ws.complex.clone(), filtrations: ws.filtrations.clone() }.to_value()
}

fn flag_document(ff: &FlagFiltration, name: &str, coeffs: Coefficients) -> Result<Value> {
    let mut graded = Map::new();
    for p in ff.filtration.window() {
        let gr = ff.filtration.graded_piece(p)?;
        let mut m = Map::new();
        for l in ff.filtration.base().degree_range() {
            m.insert(l.to_string(), Value::String(coeffs.describe(gr.cohomology(l)?)));
        }
        graded.insert(p.to_string(), Value::Object(m));
    }
    let mut fs = Map::new();
    fs.insert(name.to_string(), filtration_to_value(&ff.filtration));
    Ok(json!({
        "flag_length": ff.n(),
        "document": {"complex": decalage::io::json::complex_to_value(ff.filtration.base()), "filtrations": fs},
        "graded_cohomology": graded,
    }))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let ctx = Ctx { coeffs: cli.coefficients, max_page: cli.max_page, out: cli.out, seed: cli.seed };
    match cli.command {
        Command::Validate { input } => {
            let mut bytes = Vec::new();
            let v = read_json(&input, &mut bytes)?;
            let c = complex_from_value_unchecked(v.get("complex").unwrap_or(&v))?;
            let r = c.validate();
            for viol in &r.violations {
                eprintln!("degree {}: {}", viol.degree, viol.message);
            }
            let hash = sha256_of_all(bytes.iter().map(Vec::as_slice));
            ctx.emit("validate.json", "validate", &hash, Some(r.valid), serde_json::to_value(&r)?)
        }
        Command::Cohomology(input) => {
            let ws = load(&input)?;
            let out = run_check(&ws, &CheckRequest::new(CheckKind::Cohomology), ctx.opts())?;
            ctx.emit("cohomology.json", "cohomology", &ws.input_sha256, None, out.report)
        }
        Command::Ss { input, page, filtration } => {
            let ws = load(&input)?;
            let (name, f) = named(&ws, filtration.as_deref())?;
            let want = page.unwrap_or(1).max(ctx.max_page.unwrap_or(1));
            let ss = SpectralSequence::compute(&f, want)?;
            let problems = ss.verify()?;
            let mut pages = Vec::new();
            for pg in ss.pages() {
                let tsv = page_tsv(pg, ctx.coeffs);
                write_into(ctx.out.as_deref(), &format!("page_{}.tsv", pg.r), &tsv)?;
                pages.push(json!({"r": pg.r, "table": tsv}));
            }
            let result = json!({
                "filtration": name,
                "stabilization_page": ss.stabilization_page(),
                "verification": problems,
                "pages": pages,
            });
            let text = to_text(&envelope("ss", &ws.input_sha256, ctx.coeffs, Some(problems.is_empty()), result));
            write_into(ctx.out.as_deref(), "ss.json", &text)?;
            match page {
                Some(r) => {
                    print!("{}", page_tsv(ss.page(r), ctx.coeffs));
                    println!();
                    print!("{}", page_grid(&ss, r, ctx.coeffs));
                }
                None => print!("{text}"),
            }
            Ok(if problems.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Decale { input, filtration } => {
            let mut ws = load(&input)?;
            let (name, f) = named(&ws, filtration.as_deref())?;
            ws.filtrations.push((format!("Dec {name}"), f.decale()));
            ctx.emit("decale.json", "decale", &ws.input_sha256, None, document(&ws))
        }
        Command::Diagonal { input, first, second } => {
            let mut ws = load(&input)?;
            let d = ws.filtration(&first)?.diagonal(ws.filtration(&second)?)?;
            ws.filtrations.push((format!("Diag {first} {second}"), d));
            ctx.emit("diagonal.json", "diagonal", &ws.input_sha256, None, document(&ws))
        }
        Command::Check { kind, input, p, f, mode, shift } => {
            let ws = load(&input)?;
            let req = CheckRequest { kind, p, f, mode, shift };
            let out = run_check(&ws, &req, ctx.opts())?;
            let result = serde_json::to_value(&out)?;
            ctx.emit(&format!("check-{}.json", kind.name()), "check", &ws.input_sha256, Some(out.pass), result)
        }
        Command::FlagF(input) | Command::FlagG(input) if input.input.is_dir() || !is_text(&input.input) => {
            Err(Error::Parse("flag filtrations need a simplicial .txt input".into()))
        }
        Command::FlagF(input) => {
            let mut bytes = Vec::new();
            let (x, s, flag) = load_simplicial(&input.input, input.flag.as_deref(), input.sheaf.as_deref(), &mut bytes)?;
            let ff = flag_filtration_f(&x, &s, &flag)?;
            let hash = sha256_of_all(bytes.iter().map(Vec::as_slice));
            ctx.emit("flag-f.json", "flag-f", &hash, None, flag_document(&ff, "F", ctx.coeffs)?)
        }
        Command::FlagG(input) => {
            let mut bytes = Vec::new();
            let (x, s, flag) = load_simplicial(&input.input, input.flag.as_deref(), input.sheaf.as_deref(), &mut bytes)?;
            let ff = support_filtration_g(&x, &s, &flag)?;
            let hash = sha256_of_all(bytes.iter().map(Vec::as_slice));
            ctx.emit("flag-g.json", "flag-g", &hash, None, flag_document(&ff, "G", ctx.coeffs)?)
        }
        Command::Leray { source, target, map, flag, sheaf } => {
            let mut bytes = Vec::new();
            let x = parse_complex(&read(&source, &mut bytes)?)?;
            let y = parse_complex(&read(&target, &mut bytes)?)?;
            let f = map_from_value(x.clone(), y.clone(), &read_json(&map, &mut bytes)?)?;
            let tflag = flag_from_value(&y, &read_json(&flag, &mut bytes)?)?;
            let s = match sheaf {
                Some(p) => sheaf_from_value(&x, &read_json(&p, &mut bytes)?)?,
                None => CellularSheaf::constant(&x),
            };
            let r = pushforward_flag_comparison(&f, &s, &tflag, ctx.coeffs)?;
            let hash = sha256_of_all(bytes.iter().map(Vec::as_slice));
            ctx.emit("leray.json", "leray", &hash, Some(r.pass), serde_json::to_value(&r)?)
        }
        Command::RandomCorpus { count } => {
            let docs: Vec<Value> = corpus(ctx.seed, count)?
                .into_iter()
                .map(|f| {
                    let mut fs = Map::new();
                    fs.insert("F".into(), filtration_to_value(&f));
                    json!({"complex": decalage::io::json::complex_to_value(f.base()), "filtrations": fs})
                })
                .collect();
            if let Some(dir) = &ctx.out {
                for (i, d) in docs.iter().enumerate() {
                    write_into(Some(dir), &format!("corpus-{:04}.json", i), &to_text(d))?;
                }
            }
            let hash = sha256_of_all([ctx.seed.to_le_bytes().as_slice(), &(count as u64).to_le_bytes()]);
            ctx.emit("random-corpus.json", "random-corpus", &hash, None, json!({"seed": ctx.seed, "count": count, "documents": docs}))
        }
        Command::Run { scenarios } => {
            let opts = ctx.opts();
            let outcomes: Vec<Result<_>> = scenarios
                .par_iter()
                .map(|p| Scenario::load(p).and_then(|s| s.run(opts)))
                .collect();
            let mut reports = Vec::new();
            let mut pass = true;
            for (path, o) in scenarios.iter().zip(outcomes) {
                let o = o.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                pass &= o.pass;
                let text = to_text(&envelope("run", &o.input_sha256, ctx.coeffs, Some(o.pass), serde_json::to_value(&o)?));
                write_into(ctx.out.as_deref(), &format!("{}.json", o.name), &text)?;
                reports.push(serde_json::to_value(&o)?);
            }
            let hashes: Vec<&str> = reports.iter().filter_map(|r| r["input_sha256"].as_str()).collect();
            let hash = sha256_of_all(hashes.iter().map(|h| h.as_bytes()));
            ctx.emit("run.json", "run", &hash, Some(pass), Value::Array(reports))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(j) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
