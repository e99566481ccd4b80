//! Command-line front end: load scenes, run completion, query invariants
//! and wall deltas, run the tropical oracle, emit JSON and SVG, and ship
//! the self-verifying worked demos.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tropscat::engine::{initial_diagram, Diagram, Scene};
use tropscat::geom::Point;
use tropscat::lattice::{bv, BoundaryVector, Refinement};
use tropscat::novikov::Cutoff;
use tropscat::render::svg_diagram;
use tropscat::scene::{
    diagram_from_json, diagram_to_json, rat_from_str, rat_to_string, scene_from_json,
};
use tropscat::tropical::wall_crossing_sum;
use tropscat::{rat, rint, Rat};

#[derive(Parser)]
#[command(
    name = "tropscat",
    about = "Scattering diagrams with focus-focus singularities: completion, \
             wall-crossing invariants, tropical disc counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SceneArgs {
    /// Scene file (JSON)
    #[arg(long)]
    scene: PathBuf,
    /// Override the truncation order (λ for energy mode, k for degree mode)
    #[arg(long)]
    order: Option<String>,
    /// Override the truncation mode
    #[arg(long, value_parser = ["energy", "degree"])]
    mode: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Complete the scene's scattering diagram and write it as JSON
    Scatter {
        #[command(flatten)]
        scene: SceneArgs,
        /// Output path for the diagram JSON (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG figure of the completed diagram
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print the consistency report of a diagram (exit 1 on defects)
    Check {
        #[command(flatten)]
        scene: SceneArgs,
        /// Diagram JSON to check; defaults to the scene's initial diagram
        #[arg(long)]
        diagram: Option<PathBuf>,
    },
    /// Print the Ω/Ω̃ table at a point in a direction
    Invariants {
        #[command(flatten)]
        scene: SceneArgs,
        /// Query point "x,y" (rational coordinates)
        #[arg(long)]
        at: String,
        /// Primitive query direction "a,b"
        #[arg(long)]
        direction: String,
    },
    /// Print ΔΩ/ΔΩ̃ of a class across a collision point
    Wallcross {
        #[command(flatten)]
        scene: SceneArgs,
        /// Collision point "x,y"
        #[arg(long)]
        at: String,
        /// Boundary class "a,b"
        #[arg(long)]
        class: String,
    },
    /// Print N^trop counts and the wall-crossing sum for a class
    TropicalCount {
        #[command(flatten)]
        scene: SceneArgs,
        /// Target boundary class "a,b"
        #[arg(long)]
        class: String,
    },
    /// Write an SVG figure of the completed diagram
    Render {
        #[command(flatten)]
        scene: SceneArgs,
        /// Output path for the SVG
        #[arg(long)]
        out: PathBuf,
    },
    /// Reproduce and verify the two-singularity pentagon diagram
    DemoPentagon,
    /// Reproduce and verify the worked ΔΩ̃ tables of the pentagon wall
    DemoKronecker,
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_scene(args: &SceneArgs) -> Result<Scene, String> {
    let text = std::fs::read_to_string(&args.scene)
        .map_err(|e| format!("cannot read --scene {}: {e}", args.scene.display()))?;
    let mut scene = scene_from_json(&text).map_err(|e| format!("--scene: {e}"))?;
    match (&args.mode, &args.order) {
        (None, None) => {}
        (mode, order) => {
            let mode = mode.clone().unwrap_or_else(|| match scene.cutoff {
                Cutoff::Energy(_) => "energy".into(),
                Cutoff::Degree(_) => "degree".into(),
            });
            let order = order.clone().ok_or("--mode requires --order")?;
            scene.cutoff = match mode.as_str() {
                "energy" => Cutoff::Energy(
                    rat_from_str(&order).map_err(|_| format!("--order {order:?} is not rational"))?,
                ),
                _ => Cutoff::Degree(
                    order.parse().map_err(|_| format!("--order {order:?} is not an integer"))?,
                ),
            };
        }
    }
    Ok(scene)
}

fn parse_point(flag: &str, s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or(format!("--{flag} expects \"x,y\""))?;
    Ok(Point::new(
        rat_from_str(x).map_err(|e| format!("--{flag}: {e}"))?,
        rat_from_str(y).map_err(|e| format!("--{flag}: {e}"))?,
    ))
}

fn parse_class(flag: &str, s: &str) -> Result<BoundaryVector, String> {
    let (a, b) = s.split_once(',').ok_or(format!("--{flag} expects \"a,b\""))?;
    Ok(bv(
        a.trim().parse().map_err(|_| format!("--{flag}: {a:?} is not an integer"))?,
        b.trim().parse().map_err(|_| format!("--{flag}: {b:?} is not an integer"))?,
    ))
}

fn completed(scene: &Scene) -> Result<Diagram, String> {
    initial_diagram(scene)
        .map_err(|e| e.to_string())?
        .complete()
        .map_err(|e| e.to_string())
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Scatter { scene, out, svg } => {
            let diagram = completed(&load_scene(&scene)?)?;
            write_or_print(&out, &diagram_to_json(&diagram))?;
            if let Some(path) = svg {
                std::fs::write(&path, svg_diagram(&diagram))
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { scene, diagram } => {
            let scene = load_scene(&scene)?;
            let d = match diagram {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("cannot read --diagram {}: {e}", path.display()))?;
                    diagram_from_json(&scene, &text).map_err(|e| format!("--diagram: {e}"))?
                }
                None => initial_diagram(&scene).map_err(|e| e.to_string())?,
            };
            let report = d.check_consistency().map_err(|e| e.to_string())?;
            if report.is_empty() {
                println!("consistent: every loop product is the identity to the cutoff");
                Ok(ExitCode::SUCCESS)
            } else {
                for (p, defects) in &report {
                    println!("defect at ({},{}):", rat_to_string(&p.x), rat_to_string(&p.y));
                    for t in defects {
                        println!(
                            "  class ({},{})  T^{}  coeffs ({},{})",
                            t.zvec.a,
                            t.zvec.b,
                            rat_to_string(&t.texp),
                            rat_to_string(&t.alpha),
                            rat_to_string(&t.beta)
                        );
                    }
                }
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Invariants { scene, at, direction } => {
            let diagram = completed(&load_scene(&scene)?)?;
            let u = parse_point("at", &at)?;
            let dir = parse_class("direction", &direction)?;
            let table = diagram.invariants_at(&u, dir).map_err(|e| e.to_string())?;
            if table.entries.is_empty() {
                println!("no invariants: no wall through the point in that direction");
            }
            for (l, (omega, tilde)) in &table.entries {
                println!(
                    "l={l}  Omega={}  OmegaTilde={}",
                    rat_to_string(omega),
                    rat_to_string(tilde)
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Wallcross { scene, at, class } => {
            let diagram = completed(&load_scene(&scene)?)?;
            let p = parse_point("at", &at)?;
            let gamma = parse_class("class", &class)?;
            let (domega, dtilde) = diagram.wall_delta(&p, gamma).map_err(|e| e.to_string())?;
            println!(
                "dOmega({},{})={}  dOmegaTilde({},{})={}",
                gamma.a,
                gamma.b,
                rat_to_string(&domega),
                gamma.a,
                gamma.b,
                rat_to_string(&dtilde)
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::TropicalCount { scene, class } => {
            let scene = load_scene(&scene)?;
            let gamma = parse_class("class", &class)?;
            let (total, parts) = wcf_for_scene(&scene, gamma)?;
            for c in &parts {
                println!(
                    "w={:?}  Ntrop={}  Aut={}  product={}  value={}",
                    c.weights,
                    c.ntrop,
                    c.aut,
                    rat_to_string(&c.omega_product),
                    rat_to_string(&c.value)
                );
            }
            println!(
                "dOmegaTilde({},{})={}",
                gamma.a,
                gamma.b,
                rat_to_string(&total)
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Render { scene, out } => {
            let diagram = completed(&load_scene(&scene)?)?;
            std::fs::write(&out, svg_diagram(&diagram))
                .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DemoPentagon => demo_pentagon(),
        Command::DemoKronecker => demo_kronecker(),
    }
}

/// The wall-crossing sum for a class over the first two distinct
/// singularity directions of the scene, with the multiple-cover tables of
/// the initial walls.
fn wcf_for_scene(
    scene: &Scene,
    gamma: BoundaryVector,
) -> Result<(Rat, Vec<tropscat::tropical::WcfContribution>), String> {
    let mut dirs: Vec<(BoundaryVector, u32)> = Vec::new();
    for s in &scene.singularities {
        if !dirs.iter().any(|(d, _)| *d == s.direction) {
            dirs.push((s.direction, s.multiplicity));
        }
    }
    if dirs.len() != 2 {
        return Err("tropical-count needs a scene with exactly two distinct directions".into());
    }
    let (g1, g2) = (dirs[0].0, dirs[1].0);
    // gamma = a·g1 + b·g2 with a, b ≥ 0
    let det = g1.a * g2.b - g1.b * g2.a;
    if det == 0 {
        return Err("the two scene directions are parallel".into());
    }
    let anum = gamma.a * g2.b - gamma.b * g2.a;
    let bnum = g1.a * gamma.b - g1.b * gamma.a;
    if anum % det != 0 || bnum % det != 0 {
        return Ok((rint(0), Vec::new()));
    }
    let (a, b) = (anum / det, bnum / det);
    if a < 0 || b < 0 {
        return Ok((rint(0), Vec::new()));
    }
    let mults = [dirs[0].1 as i64, dirs[1].1 as i64];
    let tables = move |i: usize, w: u64| -> Rat {
        let sign = if w % 2 == 1 { 1i64 } else { -1 };
        rint(mults[i] * sign) / rint((w * w) as i64)
    };
    wall_crossing_sum(&[g1, g2], &[a as u64, b as u64], &tables).map_err(|e| e.to_string())
}

fn pentagon_scene() -> Scene {
    Scene {
        singularities: vec![
            tropscat::engine::Singularity {
                pos: Point::new(rint(-1), rint(0)),
                direction: bv(1, 0),
                multiplicity: 1,
            },
            tropscat::engine::Singularity {
                pos: Point::new(rint(0), rint(-1)),
                direction: bv(0, 1),
                multiplicity: 1,
            },
        ],
        cutoff: Cutoff::Energy(rint(14)),
        epsilon: 1,
        sigma: Refinement::Default,
        viewport: None,
    }
}

fn demo_pentagon() -> Result<ExitCode, String> {
    let scene = pentagon_scene();
    let diagram = completed(&scene)?;
    let inserted = diagram.rays.len() - 2 * scene.singularities.len();
    println!("{inserted} new ray");
    let p = Point::new(rint(0), rint(0));
    let (domega, _) = diagram.wall_delta(&p, bv(1, 1)).map_err(|e| e.to_string())?;
    println!("dOmega(g1+g2)={}", rat_to_string(&domega));
    let mut ok = inserted == 1 && domega == rint(1);
    for gamma in [bv(1, 0), bv(0, 1), bv(2, 1), bv(1, 2), bv(2, 2), bv(3, 1), bv(1, 3)] {
        let (d, _) = diagram.wall_delta(&p, gamma).map_err(|e| e.to_string())?;
        if d != rint(0) {
            println!("unexpected dOmega({},{})={}", gamma.a, gamma.b, rat_to_string(&d));
            ok = false;
        }
    }
    if ok {
        println!("verified");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("MISMATCH");
        Ok(ExitCode::FAILURE)
    }
}

fn demo_kronecker() -> Result<ExitCode, String> {
    let scene = pentagon_scene();
    let diagram = completed(&scene)?;
    let p = Point::new(rint(0), rint(0));
    let mut ok = true;
    let expected = [(bv(1, 2), rint(0)), (bv(2, 2), rat(-1, 4))];
    for (gamma, want) in expected {
        let (_, engine_val) = diagram.wall_delta(&p, gamma).map_err(|e| e.to_string())?;
        let (oracle_val, parts) = wcf_for_scene(&scene, gamma)?;
        println!("dOmegaTilde({},{}):", gamma.a, gamma.b);
        for c in &parts {
            println!(
                "  w={:?}  Ntrop={}  Aut={}  value={}",
                c.weights,
                c.ntrop,
                c.aut,
                rat_to_string(&c.value)
            );
        }
        println!(
            "  engine={}  oracle={}  expected={}",
            rat_to_string(&engine_val),
            rat_to_string(&oracle_val),
            rat_to_string(&want)
        );
        if engine_val != want || oracle_val != want {
            ok = false;
        }
    }
    if ok {
        println!("verified");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("MISMATCH");
        Ok(ExitCode::FAILURE)
    }
}
