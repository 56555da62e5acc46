use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use powres::complex::{assemble_complex, check_source_sink, covering_check, validate_polyhedral};
use powres::export::{
    complex_to_json, export_m2, graded_to_json, render_svg, tree_from_text, tree_to_text,
};
use powres::koszul::{koszul_strand, rho_isomorphism};
use powres::monomial::{parse_ideal, MonomialIdeal};
use powres::resolution::{betti_formula, homogenize, pd_power};
use powres::tree::{build_support_tree, validate_support, RootedTree};
use powres::verify::{
    chain_map_check, check_d_squared, tampered, verify_instance, Field,
};
use powres::{Error, Result};

#[derive(Parser)]
#[command(name = "powres", version, about = "Cubical cell complexes supporting minimal free resolutions of powers of square-free monomial ideals of projective dimension one")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ResolveFormat {
    Text,
    Json,
    M2,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Json,
    M2,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Find a tree supporting the minimal free resolution of an ideal.
    Tree {
        /// File with the ideal (generators separated by commas/newlines).
        #[arg(long)]
        ideal: PathBuf,
        /// Load the tree from a tree-format file instead of searching.
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Assemble the cell complex supporting the resolution of the r-th power.
    Power {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        r: u32,
        /// Also check the polyhedral-complex property and cube orientations.
        #[arg(long)]
        validate: bool,
        /// Write the JSON document here instead of summarizing to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the cellular minimal free resolution of the r-th power.
    Resolve {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: ResolveFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the Koszul strand and optionally check the isomorphism.
    Koszul {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        r: u32,
        /// Verify the basis bijection with the cellular resolution.
        #[arg(long)]
        check_iso: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full verification suite on one instance.
    Verify {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        r: u32,
        /// Comma-separated fields: q for the rationals, or a prime.
        #[arg(long, default_value = "q,2,3,5")]
        fields: String,
        /// Also confirm that a corrupted complex is caught.
        #[arg(long)]
        negative_controls: bool,
    },
    /// Print the Betti numbers of the r-th power from the closed formula.
    Betti {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: u32,
        /// Also print the projective dimension.
        #[arg(long)]
        pd: bool,
    },
    /// Export the complex or resolution to a file format.
    Export {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn write_out(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load(path: &PathBuf) -> Result<(MonomialIdeal, RootedTree)> {
    let ideal = parse_ideal(&read(path)?)?;
    let tree = build_support_tree(&ideal)?;
    Ok((ideal, tree))
}

fn parse_fields(spec: &str) -> Result<Vec<Field>> {
    spec.split(',')
        .map(|f| match f.trim() {
            "q" | "Q" | "0" => Ok(Field::Rational),
            p => p
                .parse::<u64>()
                .ok()
                .filter(|&p| [2, 3, 5, 7, 11, 13].contains(&p))
                .map(Field::Prime)
                .ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("unsupported field `{p}` (use q or a small prime)"),
                }),
        })
        .collect()
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Tree { ideal, tree } => {
            let parsed = parse_ideal(&read(&ideal)?)?;
            let t = match tree {
                Some(path) => {
                    let t = tree_from_text(&read(&path)?)?;
                    let report = validate_support(&t, &parsed)?;
                    if !report.supports_minimal_resolution() {
                        eprintln!("error: tree does not support the minimal resolution");
                        for b in &report.disconnected_at {
                            eprintln!("  disconnected at {}", t.ring().format(b));
                        }
                        return Ok(false);
                    }
                    t
                }
                None => build_support_tree(&parsed)?,
            };
            print!("{}", tree_to_text(&t));
            Ok(true)
        }
        Command::Power { ideal, r, validate, out } => {
            let (_, tree) = load(&ideal)?;
            let cx = assemble_complex(&tree, r)?;
            if validate {
                let report = validate_polyhedral(&cx);
                let oriented = cx
                    .cells()
                    .iter()
                    .flatten()
                    .all(|c| check_source_sink(c, &tree));
                if !report.ok() || !oriented {
                    eprintln!("error: polyhedral validation failed");
                    return Ok(false);
                }
                eprintln!(
                    "validated: {} cell pairs, all intersections are common faces",
                    report.pairs_checked
                );
            }
            match out {
                Some(_) => write_out(&out, &complex_to_json(&cx))?,
                None => {
                    let fv: Vec<String> =
                        cx.f_vector().iter().map(|v| v.to_string()).collect();
                    println!("f-vector: {}", fv.join(" "));
                    println!("cells: {}", cx.total_cells());
                }
            }
            Ok(true)
        }
        Command::Resolve { ideal, r, format, out } => {
            let (_, tree) = load(&ideal)?;
            let cx = assemble_complex(&tree, r)?;
            let gc = homogenize(&cx);
            match format {
                ResolveFormat::Json => write_out(&out, &graded_to_json(&gc))?,
                ResolveFormat::M2 => write_out(&out, &export_m2(&tree, r, &gc))?,
                ResolveFormat::Text => {
                    let mut s = String::new();
                    let betti: Vec<String> =
                        gc.betti().iter().map(|b| b.to_string()).collect();
                    s.push_str(&format!("betti: {}\n", betti.join(" ")));
                    s.push_str(&format!("pd: {}\n", pd_power(tree.q(), r)));
                    for (i, m) in gc.diffs.iter().enumerate() {
                        s.push_str(&format!(
                            "d{}: {} x {}\n",
                            i + 1,
                            m.rows,
                            m.cols.len()
                        ));
                    }
                    write_out(&out, &s)?;
                }
            }
            Ok(true)
        }
        Command::Koszul { ideal, r, check_iso, out } => {
            let (_, tree) = load(&ideal)?;
            let strand = koszul_strand(&tree, r);
            if check_iso {
                let gc = homogenize(&assemble_complex(&tree, r)?);
                let rho = rho_isomorphism(&gc, &strand)?;
                if !rho.ok() {
                    eprintln!("error: rho is not an isomorphism of complexes");
                    return Ok(false);
                }
                eprintln!("rho: degree-preserving bijection commuting with differentials");
            }
            match out {
                Some(_) => write_out(&out, &graded_to_json(&strand))?,
                None => {
                    let betti: Vec<String> =
                        strand.betti().iter().map(|b| b.to_string()).collect();
                    println!("strand ranks: {}", betti.join(" "));
                }
            }
            Ok(true)
        }
        Command::Verify { ideal, r, fields, negative_controls } => {
            let (parsed, tree) = load(&ideal)?;
            let fields = parse_fields(&fields)?;
            let summary = verify_instance(&tree, &parsed, r, &fields)?;
            let yes = |b: bool| if b { "pass" } else { "FAIL" };
            println!("cells: {}", summary.total_cells);
            println!("polyhedral complex: {}", yes(summary.polyhedral));
            println!("d^2 = 0: {}", yes(summary.d_squared));
            println!("homogeneous: {}", yes(summary.homogeneous));
            println!("minimal (no unit entries): {}", yes(summary.minimal));
            println!("augmentation: {}", yes(summary.augmentation));
            println!("generators minimal: {}", yes(summary.generators_minimal));
            for e in &summary.exactness {
                println!(
                    "exact over {} ({} multidegrees): {}",
                    e.field,
                    e.multidegrees_checked,
                    yes(e.ok())
                );
                for f in &e.failures {
                    println!("  {f}");
                }
            }
            println!("betti formula: {}", yes(summary.betti_ok));
            println!("koszul isomorphism: {}", yes(summary.rho_ok));
            let mut ok = summary.ok();
            if r as usize >= tree.q() {
                let cover = covering_check(&tree, r)?;
                let cm = chain_map_check(&tree, r)?;
                println!("covering: {}", yes(cover));
                println!(
                    "chain maps commute and cover: {}",
                    yes(cm.commute && cm.surjective == Some(true))
                );
                ok = ok && cover && cm.commute && cm.surjective == Some(true);
            }
            if negative_controls {
                let gc = homogenize(&assemble_complex(&tree, r)?);
                let caught = if gc.diffs.len() > 1 {
                    !check_d_squared(&tampered(&gc))
                } else {
                    !powres::verify::check_augmentation(&tampered(&gc))
                };
                println!("negative control caught: {}", yes(caught));
                ok = ok && caught;
            }
            Ok(ok)
        }
        Command::Betti { q, r, pd } => {
            let counts: Vec<String> = (0..=q.min(r as usize))
                .map(|t| betti_formula(q, r, t).to_string())
                .collect();
            println!("{}", counts.join(" "));
            if pd {
                println!("pd: {}", pd_power(q, r));
            }
            Ok(true)
        }
        Command::Export { ideal, r, format, out } => {
            let (_, tree) = load(&ideal)?;
            let cx = assemble_complex(&tree, r)?;
            match format {
                ExportFormat::Json => write_out(&out, &complex_to_json(&cx))?,
                ExportFormat::M2 => {
                    let gc = homogenize(&cx);
                    write_out(&out, &export_m2(&tree, r, &gc))?;
                }
                ExportFormat::Svg => write_out(&out, &render_svg(&cx)?)?,
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
