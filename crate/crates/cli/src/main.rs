mod formats;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use spectra_core::cheeger::{cheeger_brute, cheeger_function_bound};
use spectra_core::homology::persistence;
use spectra_core::significance::{verify_surface_certificate, SignificanceReport};
use spectra_core::spaces::{gen_dyck, gen_rayleigh, gen_rp, gen_torus, DyckParams, FMode, Mat3};
use spectra_core::spectrum::{index_spectrum, kr2_sweep, OddCycleWitness};
use spectra_core::symcx::SymmetricComplex;
use spectra_core::value::Value;

#[derive(Parser)]
#[command(name = "spectra", version, about = "Min-max spectra of functions on symmetric complexes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a bundled space to an SCX file (plus witness certificates)
    Gen(GenArgs),
    /// The full min-max spectrum with an odd-cycle witness
    Spectrum {
        input: PathBuf,
        /// how many values to compute (default: dimension + 1)
        #[arg(long)]
        k: Option<usize>,
        /// decimal digits for displayed values, or `exact`
        #[arg(long, default_value = "exact")]
        tol: String,
        #[arg(long)]
        json: bool,
    },
    /// The second value alone, by the odd-cycle sweep
    Kr2 {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Persistence bars of the lower-star filtration
    Persistence {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Homology-visible candidate levels and the certified sublist
    Significance {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check a surface certificate against a complex
    Verify {
        input: PathBuf,
        certificate: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Cheeger constant and function-based bounds on a weighted graph
    Cheeger(CheegerArgs),
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("mode").required(true)))]
struct CheegerArgs {
    input: PathBuf,
    /// exact minimum over all proper subsets
    #[arg(long, group = "mode")]
    brute: bool,
    /// energy and co-area rounding of the function in this file
    #[arg(long, group = "mode", value_name = "FN_FILE")]
    bound: Option<PathBuf>,
    /// both of the above, plus the comparison
    #[arg(long, group = "mode", value_name = "FN_FILE")]
    compare: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    /// rp1 | rp2 | rp3 | torus | rayleigh | dyck
    space: String,
    #[arg(short, long)]
    output: PathBuf,
    /// cycle length for rp1
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// constant vertex value (default 0)
    #[arg(long)]
    constant: Option<String>,
    /// comma-separated per-vertex values
    #[arg(long)]
    values: Option<String>,
    /// nine comma-separated entries, row major, for rayleigh
    #[arg(long)]
    matrix: Option<String>,
    /// subdivision level for rayleigh
    #[arg(long, default_value_t = 2)]
    level: u32,
    /// distance-based values for dyck instead of the 0/r/R markers
    #[arg(long)]
    metric: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(report) => {
            print!("{}", report);
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::FAILURE
        }
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            format!("file not found: {}", path.display())
        } else {
            format!("{}: {}", path.display(), e)
        }
    })
}

fn load_complex(path: &Path) -> Result<SymmetricComplex, String> {
    let text = read_file(path)?;
    let c = formats::parse_scx(&text).map_err(|e| format!("{}: {}", path.display(), e))?;
    let report = c.validate();
    if !report.is_valid() {
        let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(format!("{}: invalid complex: {}", path.display(), lines.join("; ")));
    }
    Ok(c)
}

fn parse_values_list(s: &str) -> Result<Vec<Value>, String> {
    s.split(',')
        .map(|tok| Value::parse(tok.trim()).map_err(|e| format!("bad value '{}': {}", tok, e)))
        .collect()
}

fn fmode(args: &GenArgs) -> Result<FMode, String> {
    match (&args.constant, &args.values) {
        (Some(_), Some(_)) => Err("give either --constant or --values, not both".into()),
        (Some(c), None) => Ok(FMode::Constant(
            Value::parse(c).map_err(|e| format!("bad value '{}': {}", c, e))?,
        )),
        (None, Some(v)) => Ok(FMode::PerVertex(parse_values_list(v)?)),
        (None, None) => Ok(FMode::Constant(Value::zero())),
    }
}

fn witness_edges(c: &SymmetricComplex, w: &OddCycleWitness) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = w.edges.iter().map(|&e| c.external_verts(e)).collect();
    out.sort();
    out
}

fn show(v: &Value, tol: &Option<u32>) -> String {
    match tol {
        Some(d) => v.round_decimals(*d).to_string(),
        None => v.to_string(),
    }
}

fn run(cmd: Cmd) -> Result<String, String> {
    match cmd {
        Cmd::Gen(args) => run_gen(args),
        Cmd::Spectrum { input, k, tol, json } => {
            let c = load_complex(&input)?;
            let k = k.unwrap_or(c.dimension() + 1);
            if k == 0 || k > c.dimension() + 1 {
                return Err(format!(
                    "k must be between 1 and {} for this complex",
                    c.dimension() + 1
                ));
            }
            let digits = match tol.as_str() {
                "exact" => None,
                d => Some(d.parse::<u32>().map_err(|_| format!("bad --tol '{}'", d))?),
            };
            let report = index_spectrum(&c, k);
            let edges = report
                .kr2
                .as_ref()
                .map(|(_, w)| witness_edges(&c, w))
                .unwrap_or_default();
            if json {
                let values: Vec<serde_json::Value> = report
                    .index_values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        json!({"k": i + 1, "value": v.as_ref().map_or("inf".into(), |v| show(v, &digits))})
                    })
                    .collect();
                let out = json!({
                    "command": "spectrum",
                    "input": input.display().to_string(),
                    "k": k,
                    "tol": tol,
                    "caveat_upper_bound": report.upper_bound_caveat,
                    "values": values,
                    "witness": edges,
                });
                return Ok(format!("{}\n", serde_json::to_string_pretty(&out).unwrap()));
            }
            let mut out = String::new();
            out.push_str("# spectra spectrum\n");
            out.push_str(&format!("# input {}\n", input.display()));
            out.push_str(&format!("# k {}\n", k));
            out.push_str(&format!("# tol {}\n", tol));
            out.push_str(&format!(
                "caveat upper_bound {}\n",
                if report.upper_bound_caveat { 1 } else { 0 }
            ));
            for (i, v) in report.index_values.iter().enumerate() {
                match v {
                    Some(v) => out.push_str(&format!("k {} {}\n", i + 1, show(v, &digits))),
                    None => out.push_str(&format!("k {} inf\n", i + 1)),
                }
            }
            out.push_str("witness\n");
            for e in edges {
                out.push_str(&format!("e {} {}\n", e[0], e[1]));
            }
            Ok(out)
        }
        Cmd::Kr2 { input, json } => {
            let c = load_complex(&input)?;
            let (level, witness) = kr2_sweep(&c).map_err(|e| e.to_string())?;
            let edges = witness_edges(&c, &witness);
            if json {
                let out = json!({
                    "command": "kr2",
                    "input": input.display().to_string(),
                    "level": level.to_string(),
                    "witness": edges,
                });
                return Ok(format!("{}\n", serde_json::to_string_pretty(&out).unwrap()));
            }
            let mut out = String::new();
            out.push_str("# spectra kr2\n");
            out.push_str(&format!("# input {}\n", input.display()));
            out.push_str(&format!("level {}\n", level));
            out.push_str("witness\n");
            for e in edges {
                out.push_str(&format!("e {} {}\n", e[0], e[1]));
            }
            Ok(out)
        }
        Cmd::Persistence { input, json } => {
            let c = load_complex(&input)?;
            let d = persistence(&c);
            if json {
                let bars: Vec<serde_json::Value> = d
                    .bars
                    .iter()
                    .map(|b| {
                        json!({
                            "p": b.dim,
                            "birth": b.birth.to_string(),
                            "death": b.death.as_ref().map_or("inf".into(), |v| v.to_string()),
                        })
                    })
                    .collect();
                let out = json!({
                    "command": "persistence",
                    "input": input.display().to_string(),
                    "bars": bars,
                });
                return Ok(format!("{}\n", serde_json::to_string_pretty(&out).unwrap()));
            }
            let mut out = String::new();
            out.push_str("# spectra persistence\n");
            out.push_str(&format!("# input {}\n", input.display()));
            out.push_str(&formats::write_bars(&d.bars));
            Ok(out)
        }
        Cmd::Significance { input, json } => {
            let c = load_complex(&input)?;
            let report = SignificanceReport::from_diagram(&persistence(&c));
            if json {
                let certified: Vec<serde_json::Value> = report
                    .certified
                    .iter()
                    .map(|(p, v)| json!({"p": p, "level": v.to_string()}))
                    .collect();
                let out = json!({
                    "command": "significance",
                    "input": input.display().to_string(),
                    "candidates": report.candidates.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "certified": certified,
                });
                return Ok(format!("{}\n", serde_json::to_string_pretty(&out).unwrap()));
            }
            let mut out = String::new();
            out.push_str("# spectra significance\n");
            out.push_str(&format!("# input {}\n", input.display()));
            for v in &report.candidates {
                out.push_str(&format!("candidate {}\n", v));
            }
            for (p, v) in &report.certified {
                out.push_str(&format!("certified {} {}\n", p, v));
            }
            Ok(out)
        }
        Cmd::Verify {
            input,
            certificate,
            json,
        } => {
            let c = load_complex(&input)?;
            let text = read_file(&certificate)?;
            let cert = formats::parse_certificate(&text, &c)
                .map_err(|e| format!("{}: {}", certificate.display(), e))?;
            let verdict =
                verify_surface_certificate(&c, &cert).map_err(|e| e.to_string())?;
            let class_line = match &verdict.classification {
                Ok(true) => "pass".to_string(),
                Ok(false) => "fail".to_string(),
                Err(e) => format!("error: {}", e),
            };
            let pass = verdict.all_pass();
            if json {
                let out = json!({
                    "command": "verify",
                    "input": input.display().to_string(),
                    "certificate": certificate.display().to_string(),
                    "containment": verdict.containment,
                    "classification": class_line,
                    "essentiality": verdict.essentiality,
                    "verdict": pass,
                });
                return Ok(format!("{}\n", serde_json::to_string_pretty(&out).unwrap()));
            }
            let mark = |b: bool| if b { "pass" } else { "fail" };
            let mut out = String::new();
            out.push_str("# spectra verify\n");
            out.push_str(&format!("# input {}\n", input.display()));
            out.push_str(&format!("# certificate {}\n", certificate.display()));
            out.push_str(&format!("containment {}\n", mark(verdict.containment)));
            out.push_str(&format!("classification {}\n", class_line));
            out.push_str(&format!("essentiality {}\n", mark(verdict.essentiality)));
            out.push_str(&format!("verdict {}\n", mark(pass)));
            Ok(out)
        }
        Cmd::Cheeger(CheegerArgs {
            input,
            brute,
            bound,
            compare,
            json,
        }) => {
            let text = read_file(&input)?;
            let g = formats::parse_graph(&text).map_err(|e| format!("{}: {}", input.display(), e))?;
            let fn_path = bound.as_ref().or(compare.as_ref());
            let want_brute = brute || compare.is_some();
            let mode = if compare.is_some() {
                "compare"
            } else if brute {
                "brute"
            } else {
                "bound"
            };
            let brute_result = if want_brute {
                Some(cheeger_brute(&g).map_err(|e| e.to_string())?)
            } else {
                None
            };
            let bound_result = match fn_path {
                Some(p) => {
                    let ftext = read_file(p)?;
                    let u = formats::parse_function(&ftext, &g)
                        .map_err(|e| format!("{}: {}", p.display(), e))?;
                    Some(cheeger_function_bound(&g, &u).map_err(|e| e.to_string())?)
                }
                None => None,
            };
            if json {
                let mut out = json!({
                    "command": "cheeger",
                    "input": input.display().to_string(),
                    "mode": mode,
                });
                let map = out.as_object_mut().unwrap();
                if let Some((h, cut)) = &brute_result {
                    map.insert("h".into(), json!(h.to_string()));
                    map.insert("cut".into(), json!(cut));
                }
                if let Some(b) = &bound_result {
                    map.insert("energy".into(), json!(b.energy.to_string()));
                    map.insert("ratio".into(), json!(b.subset_ratio.to_string()));
                    map.insert("subset".into(), json!(b.subset));
                }
                if let (Some((h, _)), Some(b)) = (&brute_result, &bound_result) {
                    map.insert("bound_holds".into(), json!(&b.energy >= h));
                }
                return Ok(format!("{}\n", serde_json::to_string_pretty(&out).unwrap()));
            }
            let mut out = String::new();
            out.push_str("# spectra cheeger\n");
            out.push_str(&format!("# input {}\n", input.display()));
            out.push_str(&format!("# mode {}\n", mode));
            if let Some((h, cut)) = &brute_result {
                out.push_str(&format!("h {}\n", h));
                out.push_str("cut");
                for v in cut {
                    out.push_str(&format!(" {}", v));
                }
                out.push('\n');
            }
            if let Some(b) = &bound_result {
                out.push_str(&format!("energy {}\n", b.energy));
                out.push_str(&format!("ratio {}\n", b.subset_ratio));
                out.push_str("subset");
                for v in &b.subset {
                    out.push_str(&format!(" {}", v));
                }
                out.push('\n');
            }
            if let (Some((h, _)), Some(b)) = (&brute_result, &bound_result) {
                out.push_str(&format!(
                    "bound_holds {}\n",
                    if &b.energy >= h { 1 } else { 0 }
                ));
            }
            Ok(out)
        }
    }
}

fn parse_matrix(s: &str) -> Result<Mat3, String> {
    let entries = parse_values_list(s)?;
    if entries.len() != 9 {
        return Err(format!("matrix needs 9 entries, got {}", entries.len()));
    }
    let mut it = entries.into_iter();
    let mut row = || -> [Value; 3] {
        [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]
    };
    Ok([row(), row(), row()])
}

fn run_gen(args: GenArgs) -> Result<String, String> {
    let mut wrote = Vec::new();
    let mut write = |path: PathBuf, content: String| -> Result<(), String> {
        fs::write(&path, content).map_err(|e| format!("{}: {}", path.display(), e))?;
        wrote.push(path);
        Ok(())
    };
    match args.space.as_str() {
        "rp1" => {
            let mode = match fmode(&args)? {
                FMode::Constant(v) => FMode::PerVertex(vec![v; args.n]),
                per => per,
            };
            let c = gen_rp(1, mode).map_err(|e| e.to_string())?;
            write(args.output.clone(), formats::write_scx(&c))?;
        }
        "rp2" => {
            let c = gen_rp(2, fmode(&args)?).map_err(|e| e.to_string())?;
            write(args.output.clone(), formats::write_scx(&c))?;
        }
        "rp3" => {
            let c = gen_rp(3, fmode(&args)?).map_err(|e| e.to_string())?;
            write(args.output.clone(), formats::write_scx(&c))?;
        }
        "torus" => {
            let c = gen_torus(fmode(&args)?).map_err(|e| e.to_string())?;
            write(args.output.clone(), formats::write_scx(&c))?;
        }
        "rayleigh" => {
            let m = match &args.matrix {
                Some(s) => parse_matrix(s)?,
                None => return Err("rayleigh needs --matrix".into()),
            };
            let c = gen_rayleigh(&m, args.level).map_err(|e| e.to_string())?;
            write(args.output.clone(), formats::write_scx(&c))?;
        }
        "dyck" => {
            let params = if args.metric {
                DyckParams::metric()
            } else {
                DyckParams::combinatorial()
            };
            let fx = gen_dyck(&params).map_err(|e| e.to_string())?;
            write(args.output.clone(), formats::write_scx(&fx.complex))?;
            let stem = args
                .output
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dyck".into());
            let dir = args.output.parent().unwrap_or(Path::new("."));
            let rp2_cert = spectra_core::significance::SurfaceCertificate {
                witness: fx.rp2_witness.clone(),
                level: fx.r_level.clone(),
                claimed_class: spectra_core::significance::SurfaceClass::new(1, false),
                claims_essential: true,
            };
            write(
                dir.join(format!("{}_rp2.cert", stem)),
                formats::write_certificate(&fx.complex, &rp2_cert),
            )?;
            let surface_cert = spectra_core::significance::SurfaceCertificate {
                witness: fx.dyck_witness.clone(),
                level: Value::zero(),
                claimed_class: spectra_core::significance::SurfaceClass::new(-1, false),
                claims_essential: true,
            };
            write(
                dir.join(format!("{}_surface.cert", stem)),
                formats::write_certificate(&fx.complex, &surface_cert),
            )?;
        }
        other => return Err(format!("unknown space '{}'", other)),
    }
    let mut out = String::new();
    for p in wrote {
        out.push_str(&format!("wrote {}\n", p.display()));
    }
    Ok(out)
}
