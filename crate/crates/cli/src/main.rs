//! Command-line front end: construct groups, print classification and
//! automorphism reports, evaluate words to portraits, run the verification
//! battery, and reproduce the worked-example catalog.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use mggs::group::QuotientBudget;
use mggs::oracle::{self, CheckResult};
use mggs::{
    aut_structure, enumerate_quotient, parse_word, perm_apply, Classification, FpVec, MggsGroup,
    Unit, Word,
};

#[derive(Parser)]
#[command(
    name = "mggs",
    version,
    about = "multi-GGS groups on the p-regular rooted tree"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Odd prime modulus.
    #[arg(short, long)]
    p: Option<u64>,
    /// Defining rows: entries comma-separated, rows semicolon-separated,
    /// e.g. "1,2,2,1" or "1,2;2,1".
    #[arg(short = 'E', long = "E", value_name = "ROWS")]
    rows: Option<String>,
    /// Group specification file: {"p": .., "rows": [[..], ..]}.
    #[arg(long, conflicts_with_all = ["p", "rows"])]
    file: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the classification of the defining space.
    Classify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        json: bool,
    },
    /// Print the subgroups U, V, W with their orders.
    Uvw {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        json: bool,
    },
    /// Print the full automorphism structure report.
    Aut {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a word to a portrait.
    Portrait {
        #[command(flatten)]
        group: GroupArgs,
        /// Word over the generators, e.g. "a^2 * b[1,0] * c^-1 * k3(a)".
        #[arg(short, long)]
        word: String,
        /// Truncation depth.
        #[arg(short, long)]
        depth: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the section of a word's portrait below a vertex.
    Section {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short, long)]
        word: String,
        /// Vertex letters, comma-separated; empty string for the root.
        #[arg(short, long)]
        vertex: String,
        #[arg(short, long)]
        depth: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run verification checks and emit one JSON line per result.
    Verify {
        /// Which check to run: global-equations, order-p, kappa-closure,
        /// centralizer-a, contraction, properties, normalizers, or all.
        #[arg(default_value = "all")]
        check: String,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short, long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 0xC0FFEE)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Run the worked-example catalog and diff against the expected values.
    Examples {
        #[arg(long)]
        json: bool,
    },
}

fn parse_rows(p: u64, rows: &str) -> anyhow::Result<Vec<FpVec>> {
    rows.split(';')
        .map(|row| {
            let entries = row
                .split(',')
                .map(|e| {
                    e.trim()
                        .parse::<i64>()
                        .with_context(|| format!("bad entry `{e}` in row `{row}`"))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            Ok(FpVec::new(p, entries))
        })
        .collect()
}

#[derive(serde::Deserialize)]
struct GroupSpecFile {
    p: u64,
    rows: Vec<Vec<i64>>,
}

fn build_group(args: &GroupArgs) -> anyhow::Result<MggsGroup> {
    if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let spec: GroupSpecFile = serde_json::from_str(&text).context("bad group file")?;
        let rows = spec
            .rows
            .into_iter()
            .map(|r| FpVec::new(spec.p, r))
            .collect();
        return MggsGroup::new(spec.p, rows).map_err(|e| anyhow!("{e}"));
    }
    let p = args.p.ok_or_else(|| anyhow!("missing -p"))?;
    let rows = args.rows.as_deref().ok_or_else(|| anyhow!("missing -E"))?;
    MggsGroup::new(p, parse_rows(p, rows)?).map_err(|e| anyhow!("{e}"))
}

fn parse_vertex(input: &str, p: u64) -> anyhow::Result<Vec<u64>> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|x| {
            let v: u64 = x
                .trim()
                .parse()
                .with_context(|| format!("bad letter `{x}`"))?;
            if v >= p {
                Err(anyhow!("letter {v} is not in 0..{p}"))
            } else {
                Ok(v)
            }
        })
        .collect()
}

fn set_string(values: &[u64]) -> String {
    let inner: Vec<String> = values.iter().map(u64::to_string).collect();
    format!("{{{}}}", inner.join(", "))
}

fn run() -> anyhow::Result<i32> {
    let cli = Cli::parse();
    match cli.command {
        Command::Classify { group, json } => {
            let g = build_group(&group)?;
            let class = g.classification();
            if json {
                println!("{}", serde_json::to_string(&class)?);
            } else if class == Classification::Constant {
                println!("constant (excluded from Aut computation)");
            } else {
                println!("{class}");
            }
            Ok(0)
        }
        Command::Uvw { group, json } => {
            let g = build_group(&group)?;
            let report = aut_structure(&g).map_err(|e| anyhow!("{e}"))?;
            if json {
                let value = serde_json::json!({
                    "U": report.u, "V": report.v, "W": report.w,
                    "scalars": report.scalars,
                    "orders": report.orders,
                });
                println!("{}", serde_json::to_string(&value)?);
            } else {
                println!("U = {} (order {})", set_string(&report.u), report.u.len());
                println!("V = {} (order {})", set_string(&report.v), report.v.len());
                println!("W = {} (order {})", set_string(&report.w), report.w.len());
                let scalars: Vec<String> = report
                    .scalars
                    .iter()
                    .map(|(v, l)| format!("{v} ↦ {l}"))
                    .collect();
                println!("scalars: {}", scalars.join(", "));
            }
            Ok(0)
        }
        Command::Aut { group, json } => {
            let g = build_group(&group)?;
            let report = aut_structure(&g).map_err(|e| anyhow!("{e}"))?;
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                println!("classification: {}", report.classification);
                println!("U = {} (order {})", set_string(&report.u), report.u.len());
                println!("V = {} (order {})", set_string(&report.v), report.v.len());
                println!("W = {} (order {})", set_string(&report.w), report.w.len());
                println!("structure: Aut(G) ≅ {}", report.structure);
                println!("outer automorphism group finite: {}", report.out_finite);
                println!(
                    "automorphisms of order coprime to p: {}",
                    report.coprime_autos
                );
                if let Some(note) = &report.note {
                    println!("note: {note}");
                }
            }
            Ok(0)
        }
        Command::Portrait {
            group,
            word,
            depth,
            json,
        } => {
            let g = build_group(&group)?;
            let w = parse_word(&word, g.p(), g.rank()).map_err(|e| anyhow!("{e}"))?;
            let portrait = w.evaluate(&g, depth).map_err(|e| anyhow!("{e}"))?;
            if json {
                println!("{}", serde_json::to_string(&portrait)?);
            } else {
                print_portrait(&portrait);
            }
            Ok(0)
        }
        Command::Section {
            group,
            word,
            vertex,
            depth,
            json,
        } => {
            let g = build_group(&group)?;
            let w = parse_word(&word, g.p(), g.rank()).map_err(|e| anyhow!("{e}"))?;
            let v = parse_vertex(&vertex, g.p())?;
            let portrait = w.evaluate(&g, depth).map_err(|e| anyhow!("{e}"))?;
            let section = portrait.section(&v).map_err(|e| anyhow!("{e}"))?;
            if json {
                println!("{}", serde_json::to_string(&section)?);
            } else {
                print_portrait(&section);
            }
            Ok(0)
        }
        Command::Verify {
            check,
            group,
            depth,
            seed,
            trials,
        } => {
            eprintln!("seed: {seed}");
            let results = run_checks(&check, &group, depth, seed, trials)?;
            let mut failed = false;
            for res in &results {
                println!("{}", res.to_json_line());
                failed |= !res.passed();
            }
            Ok(if failed { 1 } else { 0 })
        }
        Command::Examples { json } => run_examples(json),
    }
}

fn print_portrait(portrait: &mggs::Portrait) {
    println!("p = {}, depth = {}", portrait.p(), portrait.depth());
    for level in 0..portrait.depth() {
        let labels: Vec<String> = portrait
            .level_labels(level)
            .iter()
            .map(|l| {
                if l.is_identity() {
                    "id".to_string()
                } else if l.u == 1 {
                    format!("x+{}", l.t)
                } else if l.t == 0 {
                    format!("{}x", l.u)
                } else {
                    format!("{}x+{}", l.u, l.t)
                }
            })
            .collect();
        println!("level {level}: [{}]", labels.join(", "));
    }
}

fn custom_group(args: &GroupArgs) -> anyhow::Result<Option<MggsGroup>> {
    if args.p.is_none() && args.rows.is_none() && args.file.is_none() {
        return Ok(None);
    }
    build_group(args).map(Some)
}

fn run_checks(
    check: &str,
    group_args: &GroupArgs,
    depth: Option<usize>,
    seed: u64,
    trials: Option<usize>,
) -> anyhow::Result<Vec<CheckResult>> {
    let custom = custom_group(group_args)?;
    let gs3 = MggsGroup::new(3, vec![FpVec::new(3, [1, 2])]).expect("valid");
    let sym5 = MggsGroup::new(5, vec![FpVec::new(5, [1, 2, 2, 1])]).expect("valid");
    let pick = |fallback: &MggsGroup| custom.clone().unwrap_or_else(|| fallback.clone());
    let results = match check {
        "all" => {
            if custom.is_some() {
                return Err(anyhow!(
                    "`verify all` runs the built-in catalog; drop -p/-E"
                ));
            }
            oracle::run_all(seed).map_err(|e| anyhow!("{e}"))?
        }
        "global-equations" => {
            let g = pick(&gs3);
            let d = depth.unwrap_or(2);
            vec![
                oracle::check_global_equations(&g, d, seed).map_err(|e| anyhow!("{e}"))?,
                oracle::check_global_equations_mutation_control(&g, d, seed)
                    .map_err(|e| anyhow!("{e}"))?,
            ]
        }
        "order-p" => {
            let g = pick(&gs3);
            vec![
                oracle::check_order_p_prop(&g, trials.unwrap_or(40), depth.unwrap_or(3), seed)
                    .map_err(|e| anyhow!("{e}"))?,
            ]
        }
        "kappa-closure" => {
            let g = pick(&gs3);
            vec![oracle::check_kappa_closure(&g, depth.unwrap_or(3)).map_err(|e| anyhow!("{e}"))?]
        }
        "centralizer-a" => {
            vec![
                oracle::check_centralizer_normalizer_a(depth.unwrap_or(2), seed)
                    .map_err(|e| anyhow!("{e}"))?,
            ]
        }
        "contraction" => {
            let g = pick(&gs3);
            vec![oracle::check_contraction(&g, trials.unwrap_or(1000), seed)
                .map_err(|e| anyhow!("{e}"))?]
        }
        "properties" => {
            let g = pick(&gs3);
            vec![oracle::check_property_suite(&g, trials.unwrap_or(60), seed)
                .map_err(|e| anyhow!("{e}"))?]
        }
        "normalizers" => {
            let g = pick(&sym5);
            vec![oracle::check_normalizer_family(&g, depth.unwrap_or(2))
                .map_err(|e| anyhow!("{e}"))?]
        }
        other => {
            return Err(anyhow!(
                "unknown check `{other}`; expected one of global-equations, order-p, \
                 kappa-closure, centralizer-a, contraction, properties, normalizers, all"
            ))
        }
    };
    Ok(results)
}

struct ExampleCase {
    name: &'static str,
    group: MggsGroup,
    classification: Classification,
    u: Vec<u64>,
    v: Vec<u64>,
    w: Vec<u64>,
    structure: &'static str,
    reflection_flag: bool,
}

fn gs_group(p: u64) -> MggsGroup {
    let mut row = vec![0i64; (p - 1) as usize];
    row[0] = 1;
    row[1] = -1;
    MggsGroup::new(p, vec![FpVec::new(p, row)]).expect("valid")
}

fn thirteen_group() -> MggsGroup {
    let b1 = FpVec::new(13, [1, 2, 11, 3, 12, 10, 10, 12, 3, 11, 2, 1]);
    let b2 = perm_apply(&b1, Unit::new(3, 13).expect("unit")).expect("length");
    let b3 = perm_apply(&b1, Unit::new(9, 13).expect("unit")).expect("length");
    MggsGroup::new(13, vec![b1, b2, b3]).expect("valid")
}

fn example_catalog() -> Vec<ExampleCase> {
    let units = |p: u64| (1..p).collect::<Vec<_>>();
    vec![
        ExampleCase {
            name: "symmetric p=5, span{(1,2,2,1)}",
            group: MggsGroup::new(5, vec![FpVec::new(5, [1, 2, 2, 1])]).expect("valid"),
            classification: Classification::Symmetric,
            u: vec![1, 4],
            v: vec![1, 4],
            w: vec![1],
            structure: "(G ⋊ C_5) ⋊ C_2",
            reflection_flag: true,
        },
        ExampleCase {
            name: "maximal p=5, span{(1,2,3,4)}",
            group: MggsGroup::new(5, vec![FpVec::new(5, [1, 2, 3, 4])]).expect("valid"),
            classification: Classification::Regular,
            u: units(5),
            v: units(5),
            w: units(5),
            structure: "(G ⋊ ∏_ω C_5) ⋊ (C_4)²",
            reflection_flag: false,
        },
        ExampleCase {
            name: "maximal p=7, span{(1,..,6)}",
            group: MggsGroup::new(7, vec![FpVec::new(7, [1, 2, 3, 4, 5, 6])]).expect("valid"),
            classification: Classification::Regular,
            u: units(7),
            v: units(7),
            w: units(7),
            structure: "(G ⋊ ∏_ω C_7) ⋊ (C_6)²",
            reflection_flag: false,
        },
        ExampleCase {
            name: "three-dimensional p=13",
            group: thirteen_group(),
            classification: Classification::Regular,
            u: units(13),
            v: vec![1, 5, 8, 12],
            w: vec![1, 12],
            structure: "(G ⋊ ∏_ω C_13) ⋊ (C_12 × C_2)",
            reflection_flag: false,
        },
        ExampleCase {
            name: "Gupta-Sidki p=3",
            group: gs_group(3),
            classification: Classification::Regular,
            u: vec![1, 2],
            v: vec![1, 2],
            w: vec![1, 2],
            structure: "(G ⋊ ∏_ω C_3) ⋊ C_2²",
            reflection_flag: false,
        },
        ExampleCase {
            name: "Gupta-Sidki p=5",
            group: gs_group(5),
            classification: Classification::Regular,
            u: vec![1],
            v: vec![1],
            w: vec![1],
            structure: "G ⋊ ∏_ω C_5",
            reflection_flag: false,
        },
        ExampleCase {
            name: "Gupta-Sidki p=7",
            group: gs_group(7),
            classification: Classification::Regular,
            u: vec![1],
            v: vec![1],
            w: vec![1],
            structure: "G ⋊ ∏_ω C_7",
            reflection_flag: false,
        },
        ExampleCase {
            name: "full space p=3",
            group: MggsGroup::full_space(3).expect("valid"),
            classification: Classification::Regular,
            u: vec![1, 2],
            v: vec![1],
            w: vec![1],
            structure: "(G ⋊ ∏_ω C_3) ⋊ C_2",
            reflection_flag: false,
        },
        ExampleCase {
            name: "full space p=5",
            group: MggsGroup::full_space(5).expect("valid"),
            classification: Classification::Regular,
            u: units(5),
            v: vec![1],
            w: vec![1],
            structure: "(G ⋊ ∏_ω C_5) ⋊ C_4",
            reflection_flag: false,
        },
    ]
}

fn run_examples(json: bool) -> anyhow::Result<i32> {
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    // The pinned vector identity of the thirteen-dimensional space.
    let b1 = FpVec::new(13, [1, 2, 11, 3, 12, 10, 10, 12, 3, 11, 2, 1]);
    let image = perm_apply(&b1, Unit::new(5, 13).expect("unit")).expect("length");
    let negated = image == b1.neg();
    if !negated {
        failures.push("index permutation by 5 does not negate the base vector".to_string());
    }
    rows.push(serde_json::json!({
        "case": "b1 · P_5 = -b1",
        "pass": negated,
    }));
    // The depth-2 quotient of the cyclic group has p elements.
    let gs3 = gs_group(3);
    let q = enumerate_quotient(&gs3, &[Word::a(3, 1, 1)], 2, QuotientBudget::default())
        .map_err(|e| anyhow!("{e}"))?;
    if q.len() != 3 {
        failures.push(format!(
            "cyclic quotient has {} elements, expected 3",
            q.len()
        ));
    }
    rows.push(serde_json::json!({
        "case": "|<a> at depth 2| = 3",
        "pass": q.len() == 3,
    }));
    for case in example_catalog() {
        let report = aut_structure(&case.group).map_err(|e| anyhow!("{e}"))?;
        let mut mismatches = Vec::new();
        if report.classification != case.classification {
            mismatches.push(format!(
                "classification {} != {}",
                report.classification, case.classification
            ));
        }
        if report.u != case.u {
            mismatches.push(format!("U {:?} != {:?}", report.u, case.u));
        }
        if report.v != case.v {
            mismatches.push(format!("V {:?} != {:?}", report.v, case.v));
        }
        if report.w != case.w {
            mismatches.push(format!("W {:?} != {:?}", report.w, case.w));
        }
        if report.structure != case.structure {
            mismatches.push(format!(
                "structure `{}` != `{}`",
                report.structure, case.structure
            ));
        }
        if report.reflection_scalar_trivial != case.reflection_flag {
            mismatches.push("reflection flag mismatch".to_string());
        }
        let pass = mismatches.is_empty();
        rows.push(serde_json::json!({
            "case": case.name,
            "pass": pass,
            "classification": report.classification,
            "U": report.u,
            "V": report.v,
            "W": report.w,
            "structure": report.structure,
            "mismatches": mismatches,
        }));
        if !pass {
            failures.push(format!("{}: {}", case.name, mismatches.join("; ")));
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        for row in &rows {
            let pass = row["pass"].as_bool().unwrap_or(false);
            let name = row["case"].as_str().unwrap_or("?");
            if let Some(structure) = row.get("structure").and_then(|s| s.as_str()) {
                println!(
                    "[{}] {name}: |U|={} |V|={} |W|={}  Aut(G) ≅ {structure}",
                    if pass { "ok" } else { "FAIL" },
                    row["U"].as_array().map(Vec::len).unwrap_or(0),
                    row["V"].as_array().map(Vec::len).unwrap_or(0),
                    row["W"].as_array().map(Vec::len).unwrap_or(0),
                );
            } else {
                println!("[{}] {name}", if pass { "ok" } else { "FAIL" });
            }
        }
    }
    if failures.is_empty() {
        Ok(0)
    } else {
        for f in &failures {
            eprintln!("mismatch: {f}");
        }
        Ok(1)
    }
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}
