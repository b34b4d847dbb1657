//! Command-line workbench: inspect bound quiver algebras, enumerate
//! support τ-tilting collections, complete and mutate rigid collections,
//! emit exchange graphs, list torsion classes, run named verifiers, and
//! cross-check the polygon model.
//!
//! Exit codes: 0 = success / verifier passed, 1 = verifier found a
//! falsifier or an internal cross-check disagreed, 2 = malformed input or
//! unmet hypothesis, 3 = a budget or cap refused the computation.

mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use reltilt_core::algebra::AlgRef;
use reltilt_core::atlas::Atlas;
use reltilt_core::geom::{
    full_triangulations, realize_relative_problem, tiling_end_algebra, Arc,
    PartialTriangulation, Polygon,
};
use reltilt_core::io as ser;
use reltilt_core::rep::Rep;
use reltilt_core::rtilt::{self, ExchangeSide, GraphBudget, TtClass};
use reltilt_core::torsion::enumerate_torsion_classes;
use reltilt_core::twoterm::hom_k_shift1_dim;
use reltilt_core::{Error, Result};

/// Largest polygon the exhaustive sweep will accept.
const SWEEP_SIDES_CAP: usize = 6;

#[derive(Parser)]
#[command(
    name = "reltilt",
    version,
    about = "Exact workbench for two-term relative tilting over bound quiver algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct AlgebraArg {
    /// Algebra description file (TOML, or JSON when it starts with '{')
    #[arg(long)]
    algebra: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate an algebra file
    Algebra {
        #[command(subcommand)]
        cmd: AlgebraCmd,
    },
    /// List the indecomposable modules of an algebra
    Atlas(AlgebraArg),
    /// Work with support τ-tilting collections
    Sttilt {
        #[command(subcommand)]
        cmd: SttiltCmd,
    },
    /// Complete a rigid collection on both sides
    Completions {
        #[command(flatten)]
        alg: AlgebraArg,
        /// Subcategory file: JSON array of two-term complexes
        #[arg(long)]
        input: PathBuf,
    },
    /// Exchange one member of a complete collection
    Mutate {
        #[command(flatten)]
        alg: AlgebraArg,
        /// Subcategory file holding the complete collection
        #[arg(long)]
        input: PathBuf,
        /// Index of the member to exchange (as listed in the input label)
        #[arg(long)]
        at: usize,
    },
    /// Build the exchange graph of completions
    ExchangeGraph {
        #[command(flatten)]
        alg: AlgebraArg,
        /// Write a DOT rendering to this path
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write a JSON rendering to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Enumerate functorially finite torsion classes
    Torsion(AlgebraArg),
    /// Run a named verifier and report pass/fail with any falsifier
    Verify {
        /// Verifier id; pass an unknown id to list the known ones
        theorem: String,
        #[command(flatten)]
        alg: AlgebraArg,
        /// Sweep every instance instead of a budgeted sample
        #[arg(long)]
        exhaustive: bool,
        /// Also write the JSON report to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Polygon model: realize arc families and sweep small polygons
    Polygon {
        /// Number of polygon sides
        #[arg(long)]
        sides: usize,
        /// Tiling arcs, e.g. "0-2,0-3"
        #[arg(long)]
        rigid: Option<String>,
        /// Arcs to realize as the relative part, e.g. "1-3"
        #[arg(long)]
        x: Option<String>,
        /// Exhaustively cross-check rigidity against non-crossing
        #[arg(long)]
        sweep: bool,
        /// Write the tiling algebra's exchange graph as DOT
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Validate a file: admissibility, confluence, dimension bounds
    Check {
        /// Algebra description file
        file: PathBuf,
    },
    /// Re-emit an algebra file in canonical form
    Dump {
        /// Algebra description file
        file: PathBuf,
        /// Emit JSON instead of TOML
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum SttiltCmd {
    /// Enumerate all support τ-tilting collections
    Enumerate(AlgebraArg),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Map library errors onto the exit-code contract.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CrossCheck(_) => 1,
        Error::Budget(_) | Error::CapExceeded(_) | Error::IncompleteAtlas(_) => 3,
        _ => 2,
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Algebra { cmd } => match cmd {
            AlgebraCmd::Check { file } => run_algebra_check(&file),
            AlgebraCmd::Dump { file, json } => run_algebra_dump(&file, json),
        },
        Cmd::Atlas(a) => run_atlas(&a.algebra),
        Cmd::Sttilt { cmd } => match cmd {
            SttiltCmd::Enumerate(a) => run_sttilt_enumerate(&a.algebra),
        },
        Cmd::Completions { alg, input } => run_completions(&alg.algebra, &input),
        Cmd::Mutate { alg, input, at } => run_mutate(&alg.algebra, &input, at),
        Cmd::ExchangeGraph { alg, dot, json } => {
            run_exchange_graph(&alg.algebra, dot.as_deref(), json.as_deref())
        }
        Cmd::Torsion(a) => run_torsion(&a.algebra),
        Cmd::Verify {
            theorem,
            alg,
            exhaustive,
            json,
        } => run_verify(&theorem, &alg.algebra, exhaustive, json.as_deref()),
        Cmd::Polygon {
            sides,
            rigid,
            x,
            sweep,
            dot,
        } => run_polygon(sides, rigid.as_deref(), x.as_deref(), sweep, dot.as_deref()),
    }
}

/* # File helpers */

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<AlgRef> {
    let text = read_text(path)?;
    ser::algebra_from_str(&text, ser::session_prime()?)
}

fn load_class(alg: &AlgRef, path: &Path) -> Result<TtClass> {
    let text = read_text(path)?;
    let objects = ser::parse_subcategory(alg, &text)?;
    TtClass::new(alg, &objects)
}

fn dims_label(m: &Rep) -> String {
    let parts: Vec<String> = m.dims.iter().map(|d| d.to_string()).collect();
    format!("({})", parts.join(","))
}

fn arc_label(a: Arc) -> String {
    let (i, j) = a.endpoints();
    format!("{i}-{j}")
}

fn arcs_label(arcs: &[Arc]) -> String {
    if arcs.is_empty() {
        return "(none)".into();
    }
    let parts: Vec<String> = arcs.iter().map(|&a| arc_label(a)).collect();
    parts.join(",")
}

/* # Subcommands */

fn run_algebra_check(file: &Path) -> Result<ExitCode> {
    let alg = load_algebra(file)?;
    println!("algebra ok");
    let ids: Vec<String> = alg.quiver.vertex_ids.iter().map(|v| v.to_string()).collect();
    println!("vertices: [{}]", ids.join(", "));
    println!("arrows: {}", alg.quiver.arrows.len());
    for a in &alg.quiver.arrows {
        println!(
            "  a{}: {} -> {}",
            a.id, alg.quiver.vertex_ids[a.from], alg.quiver.vertex_ids[a.to]
        );
    }
    println!("relations: {}", alg.relations.len());
    println!("dimension: {} over F_{}", alg.dim(), alg.p);
    Ok(ExitCode::SUCCESS)
}

fn run_algebra_dump(file: &Path, json: bool) -> Result<ExitCode> {
    let alg = load_algebra(file)?;
    let text = if json {
        ser::algebra_to_json(&alg)
    } else {
        ser::algebra_to_toml(&alg)
    };
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn run_atlas(file: &Path) -> Result<ExitCode> {
    let alg = load_algebra(file)?;
    let atlas = Atlas::knit(alg)?;
    let status = if atlas.complete {
        "complete"
    } else {
        "truncated by budget"
    };
    println!(
        "indecomposable modules: {} ({status})",
        atlas.modules.len()
    );
    for (i, m) in atlas.modules.iter().enumerate() {
        let mut marks = String::new();
        if atlas.is_projective(i) {
            marks.push_str(" projective");
        }
        if atlas.is_injective(i) {
            marks.push_str(" injective");
        }
        println!("  m{i}: dims {}{marks}", dims_label(m));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_sttilt_enumerate(file: &Path) -> Result<ExitCode> {
    let alg = load_algebra(file)?;
    let (mut classes, complete) = rtilt::sttilt_classes(&alg, &GraphBudget::default())?;
    classes.sort_by_key(ser::class_sort_key);
    let status = if complete {
        "enumeration complete"
    } else {
        "budget-truncated"
    };
    println!("support τ-tilting collections: {} ({status})", classes.len());
    for (i, c) in classes.iter().enumerate() {
        println!("  t{i}: {}", ser::class_label(c));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_completions(alg_file: &Path, input: &Path) -> Result<ExitCode> {
    let alg = load_algebra(alg_file)?;
    let x = load_class(&alg, input)?;
    println!("input: {} [{} members]", ser::class_label(&x), x.len());
    let pair = rtilt::completions(&x)?;
    println!(
        "co-Bongartz-side completion (cone side): {}",
        ser::class_label(&pair.m.class)
    );
    println!(
        "Bongartz-side completion (cocone side): {}",
        ser::class_label(&pair.n.class)
    );
    match &pair.scan {
        Some(scan) => println!(
            "exhaustive scan: {} candidates, no third completion",
            scan.candidates_tested
        ),
        None => println!("exhaustive scan: not run (input is not one member short)"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_mutate(alg_file: &Path, input: &Path, at: usize) -> Result<ExitCode> {
    let alg = load_algebra(alg_file)?;
    let t = load_class(&alg, input)?;
    println!("input: {}", ser::class_label(&t));
    if at >= t.len() {
        return Err(Error::Input(format!(
            "member index {at} out of range (collection has {} members)",
            t.len()
        )));
    }
    println!(
        "exchanged member {at}: {}",
        ser::summand_label(t.member(at))
    );
    let (result, side) = rtilt::mutation(&t, at)?;
    let side_name = match side {
        ExchangeSide::Bongartz => "Bongartz-side",
        ExchangeSide::CoBongartz => "co-Bongartz-side",
    };
    println!("result ({side_name}): {}", ser::class_label(&result));
    Ok(ExitCode::SUCCESS)
}

fn run_exchange_graph(
    alg_file: &Path,
    dot: Option<&Path>,
    json: Option<&Path>,
) -> Result<ExitCode> {
    let alg = load_algebra(alg_file)?;
    let g = rtilt::exchange_graph(&alg, &GraphBudget::default())?;
    let status = match (&g.complete, &g.note) {
        (true, _) => "complete".to_string(),
        (false, Some(note)) => format!("incomplete: {note}"),
        (false, None) => "incomplete".to_string(),
    };
    println!(
        "exchange graph: {} vertices, {} edges ({status})",
        g.vertices.len(),
        g.edges.len()
    );
    if let Some(path) = dot {
        write_text(path, &ser::emit_dot(&g))?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = json {
        write_text(path, &ser::graph_to_json(&g))?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn run_torsion(file: &Path) -> Result<ExitCode> {
    let alg = load_algebra(file)?;
    let atlas = Atlas::knit(alg)?;
    atlas.require_complete()?;
    println!("modules:");
    for (i, m) in atlas.modules.iter().enumerate() {
        println!("  m{i}: dims {}", dims_label(m));
    }
    let mut classes = enumerate_torsion_classes(&atlas)?;
    for c in classes.iter_mut() {
        c.sort_unstable();
    }
    classes.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    println!("functorially finite torsion classes: {}", classes.len());
    for (i, c) in classes.iter().enumerate() {
        if c.is_empty() {
            println!("  T{i}: 0");
        } else {
            let parts: Vec<String> = c.iter().map(|j| format!("m{j}")).collect();
            println!("  T{i}: add({})", parts.join(", "));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(
    theorem: &str,
    alg_file: &Path,
    exhaustive: bool,
    json: Option<&Path>,
) -> Result<ExitCode> {
    let alg = load_algebra(alg_file)?;
    let instance = alg_file.display().to_string();
    let outcome = verify::run_verifier(theorem, &alg, &instance, exhaustive)?;
    let report = outcome.render();
    print!("{report}");
    if let Some(path) = json {
        write_text(path, &report)?;
    }
    if outcome.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn run_polygon(
    sides: usize,
    rigid: Option<&str>,
    x: Option<&str>,
    sweep: bool,
    dot: Option<&Path>,
) -> Result<ExitCode> {
    if sweep {
        return polygon_sweep(sides);
    }
    let Some(rigid) = rigid else {
        return Err(Error::Input(
            "pass --rigid with a tiling arc list, or --sweep".into(),
        ));
    };
    let p = ser::session_prime()?;
    let poly = Polygon::new(sides)?;
    let tiling_arcs = poly.parse_arcs(rigid)?;
    let tiling = PartialTriangulation::new(poly, &tiling_arcs)?;
    let x_arcs = match x {
        Some(s) => poly.parse_arcs(s)?,
        None => Vec::new(),
    };
    let prob = realize_relative_problem(&tiling, &x_arcs, p)?;
    println!("polygon: {sides} sides");
    println!("tiling: {}", arcs_label(tiling.arcs()));
    println!(
        "tiling algebra: {} vertices, {} arrows, {} relations, dimension {} over F_{}",
        prob.alg.n_vertices(),
        prob.alg.quiver.arrows.len(),
        prob.alg.relations.len(),
        prob.alg.dim(),
        prob.alg.p
    );
    println!("diagonals:");
    for a in poly.all_arcs() {
        match prob.realize(a) {
            Ok(c) => println!("  {}: {}", arc_label(a), ser::summand_label(&c)),
            Err(e) => println!("  {}: refused ({e})", arc_label(a)),
        }
    }
    if !x_arcs.is_empty() {
        println!("x: {}", arcs_label(&x_arcs));
        println!("x class: {}", ser::class_label(&prob.class));
        if rtilt::is_weak_cluster_tilting(&prob.class)? {
            println!("x is already complete");
        } else {
            let pair = rtilt::completions(&prob.class)?;
            println!(
                "co-Bongartz-side completion: arcs {}",
                arcs_label(&prob.arcs_for(&pair.m.class)?)
            );
            println!(
                "Bongartz-side completion: arcs {}",
                arcs_label(&prob.arcs_for(&pair.n.class)?)
            );
        }
    }
    if let Some(path) = dot {
        let g = rtilt::exchange_graph(&prob.alg, &GraphBudget::default())?;
        write_text(path, &ser::emit_dot(&g))?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

/// Exhaustive polygon cross-check: every arc family is pairwise
/// non-crossing exactly when its realization over each full tiling is
/// rigid; every non-crossing family yields a validated tiling algebra; the
/// number of full triangulations and the number of complete collections
/// over every tiling algebra both equal the Catalan number.
fn polygon_sweep(sides: usize) -> Result<ExitCode> {
    if sides > SWEEP_SIDES_CAP {
        return Err(Error::CapExceeded(format!(
            "polygon sweep is capped at {SWEEP_SIDES_CAP} sides, got {sides}"
        )));
    }
    let p = ser::session_prime()?;
    let poly = Polygon::new(sides)?;
    let arcs = poly.all_arcs();
    let n = arcs.len();
    let expected = catalan(sides - 2);

    // Every pairwise non-crossing subset must yield a validated tiling
    // algebra; count how many are full triangulations along the way.
    let mut non_crossing: Vec<u32> = Vec::new();
    let mut full_count = 0usize;
    for mask in 0u32..(1 << n) {
        let chosen: Vec<Arc> = (0..n)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| arcs[i])
            .collect();
        let ok = chosen
            .iter()
            .all(|&a| chosen.iter().all(|&b| poly.crossing_number(a, b) == 0));
        if !ok {
            continue;
        }
        non_crossing.push(mask);
        if chosen.is_empty() {
            continue;
        }
        let tiling = PartialTriangulation::new(poly, &chosen)?;
        tiling_end_algebra(&tiling, p)?;
        if tiling.is_full() {
            full_count += 1;
        }
    }
    println!("polygon sweep: {sides} sides, {n} diagonals");
    println!(
        "non-crossing families: {} of {} subsets, every tiling algebra validated",
        non_crossing.len(),
        1u32 << n
    );
    println!("full triangulations: {full_count} (expected {expected})");
    if full_count != expected {
        return Err(Error::CrossCheck(format!(
            "found {full_count} full triangulations, expected {expected}"
        )));
    }
    let tilings = full_triangulations(poly);
    if tilings.len() != expected {
        return Err(Error::CrossCheck(format!(
            "triangulation generator produced {}, expected {expected}",
            tilings.len()
        )));
    }

    // Over every full tiling, realize all diagonals and compare rigidity
    // with non-crossing, pair by pair and family by family.
    for (ti, r) in tilings.iter().enumerate() {
        let prob = realize_relative_problem(r, &arcs, p)?;
        let mut bad = vec![0u32; n];
        for i in 0..n {
            for j in 0..n {
                let d1 = hom_k_shift1_dim(&prob.complexes[i], &prob.complexes[j]);
                let crossing = poly.crossing_number(arcs[i], arcs[j]);
                if (d1 > 0) && crossing == 0 {
                    return Err(Error::CrossCheck(format!(
                        "tiling {ti}: non-crossing pair {} / {} is not rigid",
                        arc_label(arcs[i]),
                        arc_label(arcs[j])
                    )));
                }
                if d1 > 0 {
                    bad[i] |= 1 << j;
                    bad[j] |= 1 << i;
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let crossing = poly.crossing_number(arcs[i], arcs[j]);
                if crossing > 0 && bad[i] & (1 << j) == 0 {
                    return Err(Error::CrossCheck(format!(
                        "tiling {ti}: crossing pair {} / {} realized as rigid",
                        arc_label(arcs[i]),
                        arc_label(arcs[j])
                    )));
                }
            }
        }
        let mut rigid_families = 0usize;
        for &mask in &non_crossing {
            if (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .all(|i| bad[i] & mask == 0)
            {
                rigid_families += 1;
            }
        }
        if rigid_families != non_crossing.len() {
            return Err(Error::CrossCheck(format!(
                "tiling {ti}: {rigid_families} rigid families, expected {}",
                non_crossing.len()
            )));
        }
        let (classes, complete) = rtilt::sttilt_classes(&prob.alg, &GraphBudget::default())?;
        if !complete {
            return Err(Error::Budget(format!(
                "tiling {ti}: collection enumeration hit its budget"
            )));
        }
        if classes.len() != expected {
            return Err(Error::CrossCheck(format!(
                "tiling {ti}: {} complete collections, expected {expected}",
                classes.len()
            )));
        }
        println!(
            "  tiling {ti} [{}]: rigidity matches non-crossing, {} complete collections",
            arcs_label(r.arcs()),
            classes.len()
        );
    }
    println!("polygon sweep: PASS");
    Ok(ExitCode::SUCCESS)
}

fn catalan(n: usize) -> usize {
    let mut c = vec![0usize; n + 1];
    c[0] = 1;
    for i in 1..=n {
        for j in 0..i {
            c[i] += c[j] * c[i - 1 - j];
        }
    }
    c[n]
}
