use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kaprekar::checks;
use kaprekar::dynamics::{build_graph, cycles, export_dot};
use kaprekar::equivalence::{
    catalog_r2, group_classify, partition, r_equiv, set_members, stabilize_in, verify_catalog, EquivSet,
    PartitionExport,
};
use kaprekar::{check_bw, classify, derive_k_functions, iterate, make_number, orbit, params, solve_fixed_points};

const MAX_DERIVE_WIDTH: usize = 16;

#[derive(Parser)]
#[command(name = "kaprekar", version, about = "Generalized Kaprekar routine analyses")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Iterate the routine from a number.
    Step {
        number: String,
        /// Defaults to the number of digits given.
        #[arg(short, long)]
        width: Option<usize>,
        /// Exact number of steps; without it, stop at the first repeat.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
    },
    /// Parameters, family and image of a number.
    Params {
        number: String,
        #[arg(short, long)]
        width: Option<usize>,
    },
    /// The symbolic K-function catalog.
    Derive {
        #[arg(short, long)]
        width: usize,
    },
    /// The class graph.
    Graph {
        #[arg(short, long)]
        width: usize,
    },
    /// Attractors with parametric and numeric members.
    Cycles {
        #[arg(short, long)]
        width: usize,
    },
    /// Fixed points of the routine.
    Constants {
        #[arg(short, long)]
        width: usize,
    },
    /// The order-r partition of the classes.
    Partition {
        #[arg(short, long)]
        width: usize,
        #[arg(short = 'r', long = "order", default_value_t = 2)]
        order: usize,
    },
    /// Partition refinement per component until it stops changing.
    Stabilize {
        #[arg(short, long)]
        width: usize,
    },
    /// Product table of an equivalence set (I, II or III).
    Group {
        set: String,
        #[arg(short, long, default_value_t = 6)]
        width: usize,
    },
    /// Compare two numbers at order r, or list the second-order catalog.
    Equiv {
        left: Option<String>,
        right: Option<String>,
        #[arg(short, long)]
        width: Option<usize>,
        #[arg(short = 'r', long = "order", default_value_t = 2)]
        order: usize,
        /// List the second-order catalog at the given width with its
        /// verification report.
        #[arg(long)]
        catalog: bool,
    },
    /// Run the reference checks.
    VerifyPaper,
}

/// Bad input: exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Output of a command: the rendered text and whether it reports failure.
struct Output {
    body: String,
    failed: bool,
}

impl From<String> for Output {
    fn from(body: String) -> Self {
        Self { body, failed: false }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|o| emit(&cli, &o).map(|_| o)) {
        Ok(o) if o.failed => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let domain = e.downcast_ref::<Usage>().is_some() || e.downcast_ref::<kaprekar::Error>().is_some();
            ExitCode::from(if domain { 2 } else { 1 })
        }
    }
}

fn emit(cli: &Cli, o: &Output) -> anyhow::Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, &o.body).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(o.body.as_bytes()).context("writing to stdout"),
    }
}

fn check_width(w: usize) -> anyhow::Result<usize> {
    if w < 2 {
        return Err(kaprekar::Error::WidthTooSmall { width: w }.into());
    }
    Ok(w)
}

fn formats(f: Format, allowed: &[Format], cmd: &str) -> anyhow::Result<Format> {
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let name = f
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default();
        Err(usage(format!("{cmd} does not support --format {name}")))
    }
}

fn json<T: Serialize>(v: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn number(text: &str, width: Option<usize>) -> anyhow::Result<kaprekar::DigitNumber> {
    let w = check_width(width.unwrap_or(text.chars().count()))?;
    Ok(make_number(text, w)?)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    use Format::*;
    let fmt = cli.format;
    let out = match &cli.cmd {
        Cmd::Step {
            number: text,
            width,
            count,
            limit,
        } => {
            let f = formats(fmt, &[Text, Json], "step")?;
            let n = number(text, *width)?;
            let (steps, terminal) = match count {
                Some(c) => ((1..=*c).map(|r| iterate(&n, r)).collect::<Vec<_>>(), None),
                None => {
                    let o = orbit(&n, *limit as usize);
                    (o.steps, Some(o.terminal))
                }
            };
            #[derive(Serialize)]
            struct Step {
                number: String,
                params: String,
            }
            #[derive(Serialize)]
            struct StepOut {
                start: String,
                width: usize,
                steps: Vec<Step>,
                terminal: Option<kaprekar::Terminal>,
            }
            let o = StepOut {
                start: n.to_string(),
                width: n.width(),
                steps: steps
                    .iter()
                    .map(|s| Step {
                        number: s.to_string(),
                        params: params(s).to_string(),
                    })
                    .collect(),
                terminal,
            };
            match f {
                Json => json(&o)?,
                _ => {
                    let mut s = format!("{} {}\n", o.start, params(&n));
                    for st in &o.steps {
                        let _ = writeln!(s, "{} {}", st.number, st.params);
                    }
                    match terminal {
                        Some(kaprekar::Terminal::FixedPoint) => s.push_str("fixed point\n"),
                        Some(kaprekar::Terminal::EnteredCycle { length }) => {
                            let _ = writeln!(s, "cycle of length {length}");
                        }
                        Some(kaprekar::Terminal::Truncated { limit }) => {
                            let _ = writeln!(s, "stopped after {limit} steps");
                        }
                        None => {}
                    }
                    s
                }
            }
        }
        Cmd::Params { number: text, width } => {
            let f = formats(fmt, &[Text, Json], "params")?;
            let n = number(text, *width)?;
            let alpha = params(&n);
            let tag = classify(&alpha);
            let image = kaprekar::apply_f(&alpha);
            let bw = check_bw(&image, &tag);
            #[derive(Serialize)]
            struct ParamsOut {
                number: String,
                width: usize,
                params: String,
                family: String,
                image: String,
                image_params: String,
                image_in_bw: bool,
            }
            let o = ParamsOut {
                number: n.to_string(),
                width: n.width(),
                params: alpha.to_string(),
                family: tag.short(),
                image: image.to_string(),
                image_params: params(&image).to_string(),
                image_in_bw: bw.satisfied,
            };
            match f {
                Json => json(&o)?,
                _ => format!(
                    "number {}\nparams {}\nfamily {}\nimage {}\nimage params {}\nimage shape ok {}\n",
                    o.number, o.params, o.family, o.image, o.image_params, o.image_in_bw
                ),
            }
        }
        Cmd::Derive { width } => {
            let f = formats(fmt, &[Text, Json, Csv], "derive")?;
            let w = check_width(*width)?;
            if w > MAX_DERIVE_WIDTH {
                return Err(usage(format!(
                    "derive supports widths up to {MAX_DERIVE_WIDTH}, got {w}"
                )));
            }
            let e = derive_k_functions(w).to_export();
            match f {
                Json => json(&e)?,
                Csv => csv_table(
                    &["id", "aliases", "family", "permutation", "output", "domain", "points"],
                    e.functions.iter().map(|g| {
                        vec![
                            g.id.clone(),
                            g.aliases.join(" "),
                            g.family.clone(),
                            g.permutation.clone(),
                            g.output.join("; "),
                            g.domain.join("; "),
                            g.feasible_count.to_string(),
                        ]
                    }),
                )?,
                _ => {
                    let mut s = format!("width {w}: {} functions\n", e.total);
                    for c in &e.counts {
                        let _ = writeln!(
                            s,
                            "{} (k={}): {} classes, {} orderings, {} functions",
                            c.family, c.nonzero, c.classes, c.raw_orderings, c.entries
                        );
                    }
                    for g in &e.functions {
                        let alias = if g.aliases.is_empty() {
                            String::new()
                        } else {
                            format!(" [{}]", g.aliases.join(", "))
                        };
                        let _ = writeln!(
                            s,
                            "{}{alias}: ({}) on {{{}}}, {} classes",
                            g.id,
                            g.output.join(", "),
                            g.domain.join(", "),
                            g.feasible_count
                        );
                    }
                    s
                }
            }
        }
        Cmd::Graph { width } => {
            let f = formats(fmt, &[Text, Json, Csv, Dot], "graph")?;
            let g = build_graph(check_width(*width)?);
            match f {
                Dot => export_dot(&g),
                Json => json(&g.to_export())?,
                Csv => csv_table(
                    &["class", "next", "component", "depth"],
                    (0..g.nodes.len()).map(|v| {
                        vec![
                            g.nodes[v].to_string(),
                            g.nodes[g.succ[v]].to_string(),
                            g.components[g.component_of[v]].name.clone(),
                            g.depth[v].to_string(),
                        ]
                    }),
                )?,
                _ => {
                    let mut s = format!("width {}: {} classes\n", g.width, g.nodes.len());
                    for c in &g.components {
                        let _ = writeln!(s, "{}: {} classes, cycle {}", c.name, c.size(), join(&c.cycle.members));
                    }
                    s
                }
            }
        }
        Cmd::Cycles { width } => {
            let f = formats(fmt, &[Text, Json, Csv], "cycles")?;
            let cs = cycles(check_width(*width)?);
            match f {
                Json => json(&cs)?,
                Csv => csv_table(
                    &["length", "members", "numbers"],
                    cs.iter()
                        .map(|c| vec![c.len().to_string(), join(&c.members), join(&c.numeric_members)]),
                )?,
                _ => {
                    let mut s = String::new();
                    for c in &cs {
                        let _ = writeln!(
                            s,
                            "length {}: {} | {}",
                            c.len(),
                            join(&c.members),
                            join(&c.numeric_members)
                        );
                    }
                    s
                }
            }
        }
        Cmd::Constants { width } => {
            let f = formats(fmt, &[Text, Json, Csv], "constants")?;
            let fps = solve_fixed_points(check_width(*width)?);
            match f {
                Json => json(&fps)?,
                Csv => csv_table(
                    &["params", "number", "function"],
                    fps.iter()
                        .map(|p| vec![p.alpha_e.to_string(), p.n_e.to_string(), p.witness_fn.clone()]),
                )?,
                _ if fps.is_empty() => "no fixed points\n".to_string(),
                _ => fps
                    .iter()
                    .map(|p| format!("{} {} {}\n", p.n_e, p.alpha_e, p.witness_fn))
                    .collect(),
            }
        }
        Cmd::Partition { width, order } => {
            let f = formats(fmt, &[Text, Json, Csv], "partition")?;
            let w = check_width(*width)?;
            if *order < 1 {
                return Err(usage("order must be at least 1"));
            }
            let p = partition(w, *order).to_export();
            match f {
                Json => json(&p)?,
                Csv => csv_table(
                    &["block", "image", "members"],
                    p.blocks
                        .iter()
                        .zip(&p.images)
                        .enumerate()
                        .map(|(i, (b, img))| vec![(i + 1).to_string(), img.clone(), b.join(" ")]),
                )?,
                _ => {
                    let mut s = format!("width {w}, order {order}: {} blocks\n", p.blocks.len());
                    for (b, img) in p.blocks.iter().zip(&p.images) {
                        let _ = writeln!(s, "{img} <- {}", b.join(" "));
                    }
                    s
                }
            }
        }
        Cmd::Stabilize { width } => {
            let f = formats(fmt, &[Text, Json], "stabilize")?;
            let g = build_graph(check_width(*width)?);
            #[derive(Serialize)]
            struct Stable {
                component: String,
                size: usize,
                order: usize,
                partition: PartitionExport,
            }
            let out: Vec<Stable> = g
                .components
                .iter()
                .map(|c| {
                    let (u, p) = stabilize_in(&g, &c.nodes);
                    Stable {
                        component: c.name.clone(),
                        size: c.size(),
                        order: u,
                        partition: p.to_export(),
                    }
                })
                .collect();
            match f {
                Json => json(&out)?,
                _ => {
                    let mut s = String::new();
                    for c in &out {
                        let _ = writeln!(
                            s,
                            "{}: {} classes, stable from order {} with {} blocks",
                            c.component,
                            c.size,
                            c.order,
                            c.partition.blocks.len()
                        );
                        for (b, img) in c.partition.blocks.iter().zip(&c.partition.images) {
                            let _ = writeln!(s, "  {img} <- {}", b.join(" "));
                        }
                    }
                    s
                }
            }
        }
        Cmd::Group { set, width } => {
            let f = formats(fmt, &[Text, Json, Csv], "group")?;
            let set: EquivSet = set.parse()?;
            let t = group_classify(&set_members(set, *width)?);
            match f {
                Json => json(&t)?,
                Csv => t.to_csv(),
                _ => {
                    let mut s = format!("set {set} at width {}\n", t.width);
                    let cell = t.elements.iter().map(|e| e.len()).max().unwrap_or(1).max(7);
                    let _ = write!(s, "{:cell$}", "f\\g");
                    for e in &t.elements {
                        let _ = write!(s, " {e:cell$}");
                    }
                    s.truncate(s.trim_end().len());
                    s.push('\n');
                    for (e, row) in t.elements.iter().zip(&t.cells) {
                        let _ = write!(s, "{e:cell$}");
                        for c in row {
                            let r = c.result.to_string();
                            let _ = write!(s, " {:cell$}", if c.vacuous { format!("{r}*") } else { r });
                        }
                        s.truncate(s.trim_end().len());
                        s.push('\n');
                    }
                    let _ = writeln!(s, "closed: {}", t.closed);
                    let _ = writeln!(s, "abelian: {}", t.abelian);
                    let _ = writeln!(s, "group: {}", t.group.map_or("none".to_string(), |g| g.to_string()));
                    s
                }
            }
        }
        Cmd::Equiv {
            left,
            right,
            width,
            order,
            catalog,
        } => {
            if *catalog {
                let f = formats(fmt, &[Text, Json], "equiv --catalog")?;
                let Some(w) = width else {
                    return Err(usage("equiv --catalog needs --width"));
                };
                let w = check_width(*w)?;
                let maps: Vec<_> = catalog_r2(w).iter().map(|m| m.to_export()).collect();
                let report = verify_catalog(w);
                #[derive(Serialize)]
                struct CatalogOut<'a, M: Serialize, R: Serialize> {
                    maps: &'a [M],
                    report: &'a R,
                }
                match f {
                    Json => json(&CatalogOut {
                        maps: &maps,
                        report: &report,
                    })?,
                    _ => {
                        let mut s = String::new();
                        for m in &maps {
                            let _ = writeln!(
                                s,
                                "{}: ({}) on {{{}}}, {} pairs{}",
                                m.id,
                                m.transform.join(", "),
                                m.domain.join(", "),
                                m.pairs.len(),
                                if m.valid { "" } else { ", not an equivalence" }
                            );
                        }
                        let _ = writeln!(
                            s,
                            "sound: {}, blocks: {}, split blocks: {}",
                            report.is_sound(),
                            report.blocks,
                            report.uncovered.len()
                        );
                        for u in &report.uncovered {
                            let pieces: Vec<String> = u.pieces.iter().map(|p| join(p)).collect();
                            let _ = writeln!(s, "  {} <- {{{}}}", u.image, pieces.join("} {"));
                        }
                        s
                    }
                }
            } else {
                let f = formats(fmt, &[Text, Json], "equiv")?;
                let (Some(l), Some(r)) = (left, right) else {
                    bail!(usage("equiv needs two numbers, or --catalog"));
                };
                let m = number(l, *width)?;
                let n = number(r, *width)?;
                let holds = r_equiv(&m, &n, *order)?;
                #[derive(Serialize)]
                struct EquivOut {
                    left: String,
                    right: String,
                    order: usize,
                    left_image: String,
                    right_image: String,
                    equivalent: bool,
                }
                let o = EquivOut {
                    left: m.to_string(),
                    right: n.to_string(),
                    order: *order,
                    left_image: iterate(&m, *order).to_string(),
                    right_image: iterate(&n, *order).to_string(),
                    equivalent: holds,
                };
                match f {
                    Json => json(&o)?,
                    _ => format!(
                        "{} -> {}\n{} -> {}\nequivalent at order {}: {}\n",
                        o.left, o.left_image, o.right, o.right_image, o.order, o.equivalent
                    ),
                }
            }
        }
        Cmd::VerifyPaper => {
            let f = formats(fmt, &[Text, Json], "verify-paper")?;
            let results = checks::run_all();
            let failed = results.iter().any(|r| !r.passed);
            let body = match f {
                Json => json(&results)?,
                _ => checks::render(&results),
            };
            return Ok(Output { body, failed });
        }
    };
    Ok(out.into())
}
