use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use serde_json::{json, Value};

use gensimplex::cellular::{
    check_cellular, check_hereditarily_cellular, connection_map, dominate, domination_witness, dual_in_complex,
    dual_of_map, star_contraction, CellularBudget, FacePreservingMap, Verdict,
};
use gensimplex::geometry::{
    affine_approximant, canonical_xbar, epsilon_sequence, epsilons_csv, realize, selection_realization,
    selection_trajectory, sup_distance, sup_distance_sampled, to_off, trajectory_csv,
};
use gensimplex::io::{
    from_json, read_face_preserving, read_members, read_selection, to_json, FacePreservingDoc, StellarSimplexDoc,
};
use gensimplex::stellar::{
    certify_ball, elementary_collapse_search, star_ball, BallStatus, MoveSequence, SearchBudget, StellarMove,
};
use gensimplex::subdivision::{
    amalgamate, barycentric_map, barycentric_power, bottom_selection, count_elementary_selections,
    enumerate_elementary_selections, generate_prefix,
};
use gensimplex::systems::{
    is_system, star_system, subdivide_then_star, transform_system, CellSystem, SystemOfComplexes,
};
use gensimplex::{Complex, SimplicialMap, Subcomplex};

use crate::inputs::{self, read_text};
use crate::{Command, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success = 0,
    False = 1,
    Indeterminate = 2,
}

impl From<Verdict> for Outcome {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::True => Outcome::Success,
            Verdict::False => Outcome::False,
            Verdict::Indeterminate => Outcome::Indeterminate,
        }
    }
}

#[derive(Args)]
pub struct SelectArgs {
    /// Complex JSON file or `deltaN`.
    #[arg(long)]
    input: String,
    /// Pick the least vertex of every face.
    #[arg(long, conflicts_with_all = ["random", "index"])]
    bottom: bool,
    /// Pick uniformly at random using the seed.
    #[arg(long, conflicts_with = "index")]
    random: bool,
    /// The selection at this position in the enumeration order.
    #[arg(long)]
    index: Option<usize>,
    /// Only print how many elementary selections exist.
    #[arg(long)]
    count: bool,
}

#[derive(Subcommand)]
pub enum StellarCommand {
    /// Replay a move list on a complex.
    Apply {
        #[arg(long)]
        input: String,
        #[arg(long)]
        moves: PathBuf,
    },
    /// Reverse a move list.
    Invert {
        #[arg(long)]
        moves: PathBuf,
    },
    /// Search for a starring of a ball.
    Star {
        #[arg(long)]
        input: String,
    },
    /// Search for a collapse to a point.
    Collapse {
        #[arg(long)]
        input: String,
    },
}

#[derive(Subcommand)]
pub enum SystemCommand {
    /// Report whether a member list is a system and a cell-system.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Star every member with moves that are free of each other.
    Star {
        #[arg(long)]
        input: PathBuf,
    },
    /// Turn the union into the chain complex of the member poset.
    Transform {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum CellularCommand {
    /// Check whether every dual of a map is a ball.
    Check {
        #[arg(long)]
        map: PathBuf,
        /// Read a face-preserving map and check every face restriction.
        #[arg(long)]
        hereditary: bool,
    },
    /// The dual of a face in a map (or in a complex with `--complex`).
    Dual {
        #[arg(long, conflicts_with = "complex")]
        map: Option<PathBuf>,
        #[arg(long)]
        complex: Option<String>,
        #[arg(long)]
        face: String,
    },
    /// Build a connection map or a star-contraction on a stellar simplex.
    Connect {
        /// Stellar simplex JSON, `deltaN` or `beta-deltaN`.
        #[arg(long)]
        simplex: String,
        #[arg(long)]
        sigma: String,
        /// New vertex of the subdivision (connection map) or target vertex (star-contraction).
        #[arg(long)]
        vertex: String,
        /// Vertex of `sigma` receiving the new vertex.
        #[arg(long, required_unless_present = "contract")]
        choice: Option<String>,
        #[arg(long)]
        contract: bool,
    },
    /// Same as the top-level `dominate`.
    Dominate {
        #[arg(long)]
        map: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum GeomCommand {
    /// Coordinates of the vertices of `β^k A`.
    Realize {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 0)]
        level: usize,
    },
    /// Mesh sizes per level, as CSV.
    Eps {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 5)]
        levels: usize,
    },
    /// OFF of `β^k A`, or with `--depth` a trajectory CSV under a random prefix.
    Export {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long)]
        depth: Option<usize>,
        /// Deepest-level vertex; defaults to the first one.
        #[arg(long, requires = "depth")]
        vertex: Option<String>,
    },
    /// Affine approximants of a selection with the canonical interior points.
    Approx {
        #[arg(long)]
        selection: PathBuf,
        #[arg(long, num_args = 1.., default_values_t = [10usize, 100, 200])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        density: usize,
    },
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{}", text.trim_end()) {
                // A closed pipe means the reader has what it wants.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.context("writing standard output"),
            }
        }
    }
}

fn emit_json(cfg: &RunConfig, kind: &str, v: &impl serde::Serialize) -> Result<()> {
    emit(cfg, &to_json(kind, v)?)
}

fn search_budget(cfg: &RunConfig) -> SearchBudget {
    SearchBudget { nodes: cfg.search_budget as usize, depth: cfg.search_depth as usize }
}

fn cellular_budget(cfg: &RunConfig) -> CellularBudget {
    CellularBudget {
        search: search_budget(cfg),
        collapse: cfg.collapse_backtrack as usize,
        ..CellularBudget::default()
    }
}

fn read_map(path: &Path) -> Result<SimplicialMap> {
    from_json(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_fp(path: &Path) -> Result<FacePreservingMap> {
    read_face_preserving(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn system_of(path: &Path) -> Result<SystemOfComplexes> {
    let members = read_members(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(SystemOfComplexes::new(members)?)
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        Command::Complex { input, ball } => complex(cfg, &input, ball),
        Command::Subdivide { input, levels } => {
            emit_json(cfg, "complex", &barycentric_power(&inputs::complex(&input)?, levels))?;
            Ok(Outcome::Success)
        }
        Command::Select(args) => select(cfg, args),
        Command::Amalgamate { f, s } => amalgamation(cfg, &f, &s),
        Command::Stellar(c) => stellar(cfg, c),
        Command::System(c) => system(cfg, c),
        Command::Cellular(c) => cellular(cfg, c),
        Command::Dominate { map } => domination(cfg, &map),
        Command::Geom(c) => geom(cfg, c),
    }
}

fn complex(cfg: &RunConfig, input: &str, ball: bool) -> Result<Outcome> {
    let c = inputs::complex(input)?;
    let mut out = json!({
        "facets": c.facets(),
        "f_vector": c.f_vector(),
        "dim": c.dim(),
        "euler_characteristic": c.euler_characteristic(),
        "pure": c.is_pure(),
        "connected": c.is_connected(),
    });
    let mut outcome = Outcome::Success;
    if ball {
        let (status, cert) = match certify_ball(&c, None, cfg.collapse_backtrack as usize) {
            BallStatus::Ball(cert) => ("ball".to_string(), Some(cert)),
            BallStatus::NotBall(why) => {
                outcome = Outcome::False;
                (format!("not a ball: {why}"), None)
            }
            BallStatus::Indeterminate(why) => {
                outcome = Outcome::Indeterminate;
                (format!("indeterminate: {why}"), None)
            }
        };
        out["ball"] = json!({ "status": status, "certificate": cert });
    }
    emit_json(cfg, "complex-summary", &out)?;
    Ok(outcome)
}

fn select(cfg: &RunConfig, a: SelectArgs) -> Result<Outcome> {
    let c = Arc::new(inputs::complex(&a.input)?);
    if a.count {
        emit_json(cfg, "selection-count", &json!({ "count": count_elementary_selections(&c) }))?;
        return Ok(Outcome::Success);
    }
    let s = if a.random {
        generate_prefix(&c, 1, cfg.seed).morphism(0).clone()
    } else if let Some(i) = a.index {
        match enumerate_elementary_selections(&c).nth(i) {
            Some(s) => s,
            None => bail!("selection index {i} out of range"),
        }
    } else {
        bottom_selection(c)
    };
    emit_json(cfg, "selection", s.map())?;
    Ok(Outcome::Success)
}

fn amalgamation(cfg: &RunConfig, f: &Path, s: &Path) -> Result<Outcome> {
    let f = read_map(f)?;
    let s = read_selection(&read_text(s)?)?;
    let sp = amalgamate(&f, &s)?;
    let left = f.compose(sp.map())?;
    let right = s.map().compose(&barycentric_map(&f)?)?;
    let bad = left.source().faces().find(|t| left.image_face(t) != right.image_face(t)).cloned();
    let report = match &bad {
        None => "ok".to_string(),
        Some(t) => format!("square fails at {t:?}"),
    };
    emit_json(cfg, "amalgamation", &json!({ "s_prime": sp.map(), "report": report }))?;
    Ok(if bad.is_none() { Outcome::Success } else { Outcome::False })
}

fn stellar(cfg: &RunConfig, c: StellarCommand) -> Result<Outcome> {
    match c {
        StellarCommand::Apply { input, moves } => {
            let c = inputs::complex(&input)?;
            let seq: MoveSequence = from_json(&read_text(&moves)?)?;
            let (result, essential) = seq.replay(&c);
            emit_json(cfg, "replay", &json!({ "result": result, "essential": essential }))?;
        }
        StellarCommand::Invert { moves } => {
            let seq: MoveSequence = from_json(&read_text(&moves)?)?;
            emit_json(cfg, "moves", &seq.inverse())?;
        }
        StellarCommand::Star { input } => {
            let b = Arc::new(inputs::complex(&input)?);
            match star_ball(&b, &Subcomplex::boundary_of(b.clone()), search_budget(cfg)) {
                Some(seq) => emit_json(cfg, "moves", &seq)?,
                None => {
                    eprintln!("no starring found within the search budget");
                    return Ok(Outcome::Indeterminate);
                }
            }
        }
        StellarCommand::Collapse { input } => {
            let c = inputs::complex(&input)?;
            match elementary_collapse_search(&c, cfg.collapse_backtrack as usize) {
                Some(w) => emit_json(cfg, "collapse", &w)?,
                None => {
                    eprintln!("no collapse found within the backtracking budget");
                    return Ok(Outcome::Indeterminate);
                }
            }
        }
    }
    Ok(Outcome::Success)
}

fn system(cfg: &RunConfig, c: SystemCommand) -> Result<Outcome> {
    match c {
        SystemCommand::Check { input } => {
            let members = read_members(&read_text(&input)?)?;
            let system = is_system(&members);
            let mut report = json!({ "system": system });
            if system {
                let s = SystemOfComplexes::new(members)?;
                report["induced"] = json!(s.is_induced());
                match CellSystem::new(s, cfg.collapse_backtrack as usize) {
                    Ok(cs) => {
                        report["cell_system"] = json!(true);
                        report["tame"] = json!(cs.is_tame());
                    }
                    Err(e) => {
                        report["cell_system"] = json!(false);
                        report["reason"] = json!(e.to_string());
                    }
                }
            }
            let ok = report["cell_system"] == Value::Bool(true);
            emit_json(cfg, "system-check", &report)?;
            Ok(if ok { Outcome::Success } else { Outcome::False })
        }
        SystemCommand::Star { input } => {
            let cs = CellSystem::new(system_of(&input)?, cfg.collapse_backtrack as usize)?;
            if cs.is_tame() {
                emit_json(cfg, "system-starring", &star_system(&cs, search_budget(cfg))?)?;
            } else {
                let st = subdivide_then_star(&cs, search_budget(cfg), cfg.collapse_backtrack as usize)?;
                let doc = json!({ "moves": st.moves, "beta_moves": st.beta_moves, "starring": st.starring });
                emit_json(cfg, "subdivided-system-starring", &doc)?;
            }
            Ok(Outcome::Success)
        }
        SystemCommand::Transform { input } => {
            let cs = CellSystem::new(system_of(&input)?, cfg.collapse_backtrack as usize)?;
            // Non-tame systems are subdivided once first.
            let t = if cs.is_tame() {
                transform_system(cs.system(), &star_system(&cs, search_budget(cfg))?)?
            } else {
                subdivide_then_star(&cs, search_budget(cfg), cfg.collapse_backtrack as usize)?.transformed
            };
            emit_json(cfg, "system-transform", &t)?;
            Ok(if t.verified { Outcome::Success } else { Outcome::False })
        }
    }
}

fn cellular(cfg: &RunConfig, c: CellularCommand) -> Result<Outcome> {
    let collapse = cfg.collapse_backtrack as usize;
    match c {
        CellularCommand::Check { map, hereditary } => {
            if hereditary {
                let rep = check_hereditarily_cellular(&read_fp(&map)?, collapse)?;
                emit_json(cfg, "hereditary-report", &rep)?;
                Ok(rep.cellular.into())
            } else {
                let rep = check_cellular(&read_map(&map)?, collapse)?;
                emit_json(cfg, "cellular-report", &rep)?;
                Ok(rep.cellular.into())
            }
        }
        CellularCommand::Dual { map, complex, face } => {
            let sigma = inputs::face(&face)?;
            let d = match (map, complex) {
                (Some(m), None) => dual_of_map(&sigma, &read_map(&m)?)?,
                (None, Some(c)) => dual_in_complex(&sigma, &inputs::complex(&c)?)?,
                _ => bail!("give exactly one of --map and --complex"),
            };
            emit_json(cfg, "complex", &d)?;
            Ok(Outcome::Success)
        }
        CellularCommand::Connect { simplex, sigma, vertex, choice, contract } => {
            let a = inputs::stellar_simplex(&simplex)?;
            let sigma = inputs::face(&sigma)?;
            let v = inputs::vertex(&vertex)?;
            let f = if contract {
                star_contraction(&sigma, &v, &a)?.1
            } else {
                let choice = inputs::vertex(choice.as_deref().expect("required by clap"))?;
                connection_map(&StellarMove::subdivide(sigma, v), &a, &choice)?
            };
            emit_json(cfg, "face-preserving-map", &FacePreservingDoc::from(&f))?;
            Ok(Outcome::Success)
        }
        CellularCommand::Dominate { map } => domination(cfg, &map),
    }
}

fn domination(cfg: &RunConfig, map: &Path) -> Result<Outcome> {
    let f = read_fp(map)?;
    let d = dominate(&f, cellular_budget(cfg))?;
    let witness = domination_witness(&f, &d.g);
    let elementary = d.factors.iter().all(|s| s.is_elementary());
    let report = json!({
        "route": d.route,
        "steps": d.steps,
        "cellular": d.cellular,
        "witness": witness,
        "factors": d.factors.len(),
        "factors_elementary": elementary,
        "source": StellarSimplexDoc::from(d.g.source()),
        "g": d.g.map().assignment(),
    });
    emit_json(cfg, "domination", &report)?;
    Ok(if witness && elementary { Outcome::Success } else { Outcome::False })
}

fn geom(cfg: &RunConfig, c: GeomCommand) -> Result<Outcome> {
    match c {
        GeomCommand::Realize { base, level } => {
            let r = realize(&inputs::complex(&base)?, level)?;
            let report = json!({
                "level": r.level(),
                "ambient": r.ambient(),
                "mesh": r.mesh(),
                "coordinates": r.coordinates(),
            });
            emit_json(cfg, "realization", &report)?;
        }
        GeomCommand::Eps { base, levels } => {
            emit(cfg, &epsilons_csv(&epsilon_sequence(&inputs::complex(&base)?, levels)?)?)?;
        }
        GeomCommand::Export { base, level, depth, vertex } => {
            let a = inputs::complex(&base)?;
            match depth {
                None => emit(cfg, &to_off(&realize(&a, level)?))?,
                Some(depth) => {
                    let prefix = generate_prefix(&a, depth, cfg.seed);
                    let x = match vertex {
                        Some(v) => inputs::vertex(&v)?,
                        None => prefix.level(depth).domain().into_iter().next().context("empty complex")?,
                    };
                    let t = selection_trajectory(&prefix, &x)?;
                    emit(cfg, &trajectory_csv(&t)?)?;
                    if !t.bound_holds {
                        return Ok(Outcome::False);
                    }
                }
            }
        }
        GeomCommand::Approx { selection, n, density } => {
            let s = read_selection(&read_text(&selection)?)?;
            let c: Complex = (**s.map().target()).clone();
            let target = selection_realization(&s)?;
            let mut rows = Vec::new();
            let mut all_valid = true;
            for k in n {
                let (phi, rep) = affine_approximant(&c, &canonical_xbar(&s, k)?)?;
                all_valid &= rep.valid;
                rows.push(json!({
                    "n": k,
                    "valid": rep.valid,
                    "sup_distance": sup_distance(&phi, &target)?,
                    "sampled": sup_distance_sampled(&phi, &target, density)?,
                }));
            }
            emit_json(cfg, "approximants", &rows)?;
            if !all_valid {
                return Ok(Outcome::False);
            }
        }
    }
    Ok(Outcome::Success)
}
