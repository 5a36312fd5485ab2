use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use chessdeg::chessboard::{
    canonical_projection, chessboard_complex, cyclic_row_action, cyclic_vertex_action, join_action_power,
    join_map_power, join_power, PermutationAction, SimplicialMap,
};
use chessdeg::degree::{
    congruence_audit, degree_by_preimage, degree_homological, enumerate_equivariant_maps, orient,
    pseudomanifold_check, DegreeReport, EnumerationCap,
};
use chessdeg::geometry::{
    parse_config, random_config, run_scenario, Outcome, ScenarioInput, ScenarioKind, ScenarioReport, ScenarioSpec,
    SearchMode,
};
use chessdeg::geometry::scenario::DEFAULT_COORD_BOUND;
use chessdeg::homology::{homology, homology_up_to};
use chessdeg::simplicial::{join, simplex_skeleton, Simplex, SimplicialComplex};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

const SCENARIO_HELP: &str = "\
Scenarios and their parameters:
  colored-radon     --d D             classes [3, 1 x D] in R^D, r = 2
  k1                --r R --d D       classes [R-1 x D, 2R-1] in R^D, R prime
  mixed-a           --r R --d D --l L --k K
                                      classes [R-1 x L, 2R-1 x K], R prime,
                                      (R-1)(D-L+1)+1 <= R*K
  mixed-b           --p P --d D --l L --k K
                                      classes [R-1 x L, P x K] with R = 2P-1 prime,
                                      (R-1)(D-L+1)+1 <= P*K
  k33                                 K_{3,3} in the plane, r = 2
  k333                                K_{3,3,3} in the plane, r = 3
  k555                                K_{5,5,5} in space, r = 3
  k4444                               K_{4,4,4,4} in space, r = 4
  classic-tverberg  --r R --d D       (R-1)(D+1)+1 singletons in R^D

Exit codes: 0 every trial found a certificate, 1 some trial was refuted,
2 some trial was inconclusive, 3 input error.";

#[derive(Parser, Debug)]
#[command(name = "chessdeg", version, about = "Chessboard complexes, mapping degrees and colored Tverberg certificates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Compact single-line JSON instead of pretty-printed JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum number of LP evaluations per scenario trial.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Walk all maximal rainbow partitions (default).
    #[arg(long, global = true, conflicts_with = "stochastic")]
    exhaustive: bool,
    /// Randomized local search; never reports a refutation.
    #[arg(long, global = true)]
    stochastic: bool,
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Zero all timings so identical runs give identical bytes.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a complex and print it as JSON.
    #[command(subcommand)]
    Complex(ComplexCommand),
    /// Integral homology (reduced unless --unreduced).
    Homology {
        #[command(flatten)]
        source: Source,
        /// Reduced homology; this is the default.
        #[arg(long, conflicts_with = "unreduced")]
        reduced: bool,
        #[arg(long)]
        unreduced: bool,
        /// Highest dimension to compute.
        #[arg(long)]
        max_dim: Option<isize>,
        /// Report torsion as prime powers.
        #[arg(long)]
        primary: bool,
    },
    /// Pseudomanifold check.
    Pseudo {
        #[command(flatten)]
        source: Source,
    },
    /// Fundamental class of an orientable pseudomanifold.
    Orient {
        #[command(flatten)]
        source: Source,
    },
    /// Mapping degree of a simplicial map between oriented pseudomanifolds.
    Degree {
        /// The row projection Delta_{R,K} -> [R]^(K).
        #[arg(long, num_args = 2, value_names = ["R", "K"], conflicts_with_all = ["map", "dom", "cod"])]
        xi: Option<Vec<usize>>,
        /// Join power of the map (with --xi).
        #[arg(long, default_value_t = 1)]
        power: usize,
        /// Map file: {"vertex_map": [...]}.
        #[arg(long, requires_all = ["dom", "cod"])]
        map: Option<PathBuf>,
        #[arg(long)]
        dom: Option<PathBuf>,
        #[arg(long)]
        cod: Option<PathBuf>,
        /// homological, preimage or both.
        #[arg(long, default_value = "homological")]
        method: String,
        /// Codomain facet for the preimage count; defaults to the first facet.
        #[arg(long, value_delimiter = ',')]
        target: Option<Vec<usize>>,
        /// Report the residue modulo this number (defaults to R with --xi).
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Enumerate equivariant simplicial maps.
    Equimaps {
        #[command(flatten)]
        pair: MapPair,
    },
    /// Degrees of all equivariant maps and their congruence modulo the group order.
    AuditCongruence {
        #[command(flatten)]
        pair: MapPair,
        /// Modulus; defaults to the order of the actions.
        #[arg(long = "mod")]
        modulus: Option<u64>,
        /// Expected residue up to sign; defaults to (-1)^power.
        #[arg(long, allow_hyphen_values = true)]
        expected: Option<i64>,
    },
    /// Verify a colored Tverberg-type statement on seeded or given points.
    #[command(after_help = SCENARIO_HELP)]
    Scenario {
        /// Scenario name, see below.
        name: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        /// Number of independent trials; trial i uses seed + i.
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// Point configuration file instead of random points.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Seeded random integer configuration with the given class sizes.
    RandomConfig {
        #[arg(long)]
        d: usize,
        /// Class sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Coordinates lie in [-bound, bound].
        #[arg(long, default_value_t = DEFAULT_COORD_BOUND)]
        bound: u64,
    },
}

#[derive(Subcommand, Debug)]
enum ComplexCommand {
    /// The chessboard complex Delta_{m,n}.
    Chessboard {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// The (k-1)-skeleton of the simplex on m vertices.
    Skeleton {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// Join of two complex files.
    Join { a: PathBuf, b: PathBuf },
}

#[derive(Args, Debug)]
struct Source {
    /// Complex file.
    #[arg(long, conflicts_with_all = ["chessboard", "skeleton"])]
    complex: Option<PathBuf>,
    /// Delta_{M,N}.
    #[arg(long, num_args = 2, value_names = ["M", "N"], conflicts_with = "skeleton")]
    chessboard: Option<Vec<usize>>,
    /// [M]^(K).
    #[arg(long, num_args = 2, value_names = ["M", "K"])]
    skeleton: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
struct MapPair {
    /// Domain Delta_{M,N} with the cyclic row action.
    #[arg(long, num_args = 2, value_names = ["M", "N"], conflicts_with = "dom")]
    dom_chessboard: Option<Vec<usize>>,
    /// Domain complex file (needs --dom-action).
    #[arg(long, requires = "dom_action")]
    dom: Option<PathBuf>,
    /// Action file: {"generator": [...]}.
    #[arg(long)]
    dom_action: Option<PathBuf>,
    /// Codomain [M]^(K) with the cyclic vertex action.
    #[arg(long, num_args = 2, value_names = ["M", "K"], conflicts_with = "cod")]
    cod_skeleton: Option<Vec<usize>>,
    #[arg(long, requires = "cod_action")]
    cod: Option<PathBuf>,
    #[arg(long)]
    cod_action: Option<PathBuf>,
    /// Replace domain and codomain by their d-fold joins.
    #[arg(long, default_value_t = 1)]
    power: usize,
    /// Largest number of domain vertex orbits to enumerate over.
    #[arg(long, default_value_t = 4)]
    cap: usize,
}

/// Per-phase wall clock, zeroed under `--deterministic`.
struct Phases {
    deterministic: bool,
    list: Vec<(String, u64)>,
}

impl Phases {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        let ms = if self.deterministic { 0 } else { start.elapsed().as_millis() as u64 };
        self.list.push((name.to_string(), ms));
        out
    }
}

struct Run {
    global: Global,
    phases: Phases,
    params: Value,
}

struct Reply {
    report: Value,
    code: u8,
}

impl Reply {
    fn ok(report: Value) -> Self {
        Reply { report, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<chessdeg::Error>() {
                Some(chessdeg::Error::Integrity(_)) => 1,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn execute(cli: Cli) -> Result<u8> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads)
        .build()
        .context("building the worker pool")?;
    let mut run = Run {
        phases: Phases { deterministic: cli.global.deterministic, list: Vec::new() },
        global: cli.global.clone(),
        params: json!({}),
    };
    let reply = pool.install(|| dispatch(&cli.command, &mut run))?;
    let mut report = reply.report;
    if let Value::Object(m) = &mut report {
        m.insert("manifest".into(), manifest(&run));
    }
    let text = if run.global.json {
        serde_json::to_string(&report)?
    } else {
        serde_json::to_string_pretty(&report)?
    };
    match &run.global.out {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = writeln!(out, "{text}").and_then(|_| out.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e).context("writing the report");
                }
            }
        }
    }
    Ok(reply.code)
}

/// Command line without the flags that must not change the report.
fn recorded_command_line() -> String {
    let mut out = vec!["chessdeg".to_string()];
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "--threads" || a == "--out" {
            args.next();
            continue;
        }
        if a.starts_with("--threads=") || a.starts_with("--out=") {
            continue;
        }
        out.push(a);
    }
    out.join(" ")
}

fn manifest(run: &Run) -> Value {
    let phases: Map<String, Value> = run.phases.list.iter().map(|(n, ms)| (n.clone(), json!(ms))).collect();
    json!({
        "command": recorded_command_line(),
        "seed": run.global.seed,
        "params": run.params,
        "version": env!("CARGO_PKG_VERSION"),
        "elapsed_ms": phases,
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_complex(path: &Path) -> Result<SimplicialComplex> {
    Ok(SimplicialComplex::from_json(&read(path)?)?)
}

fn json_usizes(path: &Path, key: &str) -> Result<Vec<usize>> {
    let v: Value = serde_json::from_str(&read(path)?).map_err(|e| chessdeg::Error::MalformedInput(e.to_string()))?;
    v.get(key)
        .and_then(Value::as_array)
        .and_then(|a| a.iter().map(|x| x.as_u64().map(|x| x as usize)).collect::<Option<Vec<_>>>())
        .ok_or_else(|| chessdeg::Error::MalformedInput(format!("{}: expected an integer array \"{key}\"", path.display())).into())
}

fn complex_document(k: &SimplicialComplex) -> Value {
    serde_json::to_value(k.to_document()).expect("complex document serializes")
}

fn source_complex(source: &Source) -> Result<SimplicialComplex> {
    if let Some(path) = &source.complex {
        return load_complex(path);
    }
    if let Some(mn) = &source.chessboard {
        return Ok(chessboard_complex(mn[0], mn[1])?);
    }
    if let Some(mk) = &source.skeleton {
        return Ok(simplex_skeleton(mk[0], mk[1])?);
    }
    Err(input_error("one of --complex, --chessboard or --skeleton is required"))
}

fn input_error(msg: impl Into<String>) -> anyhow::Error {
    chessdeg::Error::Parameter(msg.into()).into()
}

fn dispatch(command: &Command, run: &mut Run) -> Result<Reply> {
    match command {
        Command::Complex(c) => complex_command(c, run),
        Command::Homology { source, unreduced, max_dim, primary, .. } => {
            let k = run.phases.time("build", || source_complex(source))?;
            let reduced = !unreduced;
            run.params = json!({"complex": k.name(), "reduced": reduced, "max_dim": max_dim});
            let h = run.phases.time("homology", || match max_dim {
                Some(q) => homology_up_to(&k, reduced, *q),
                None => homology(&k, reduced),
            });
            let mut report = h.to_json();
            report["complex"] = json!(k.name());
            if *primary {
                let torsion: Vec<Vec<String>> =
                    h.primary_torsion().iter().map(|t| t.iter().map(ToString::to_string).collect()).collect();
                report["primary_torsion"] = json!(torsion);
            }
            Ok(Reply::ok(report))
        }
        Command::Pseudo { source } => {
            let k = run.phases.time("build", || source_complex(source))?;
            run.params = json!({"complex": k.name()});
            let report = run.phases.time("check", || pseudomanifold_check(&k))?;
            let mut v = report.to_json();
            v["complex"] = json!(k.name());
            Ok(Reply::ok(v))
        }
        Command::Orient { source } => {
            let k = run.phases.time("build", || source_complex(source))?;
            run.params = json!({"complex": k.name()});
            let fc = run.phases.time("orient", || orient(&k))?;
            Ok(Reply::ok(fc.to_json()))
        }
        Command::Degree { xi, power, map, dom, cod, method, target, modulus } => {
            degree_command(xi.as_deref(), *power, map.as_deref(), dom.as_deref(), cod.as_deref(), method, target.as_deref(), *modulus, run)
        }
        Command::Equimaps { pair } => {
            let (k, l, a, b) = run.phases.time("build", || map_pair(pair))?;
            run.params = pair_params(pair, &k, &l);
            let maps = run
                .phases
                .time("enumerate", || enumerate_equivariant_maps(&k, &l, &a, &b, EnumerationCap { max_orbits: pair.cap }))?;
            let list: Vec<&[usize]> = maps.iter().map(SimplicialMap::vertex_map).collect();
            Ok(Reply::ok(json!({"domain": k.name(), "codomain": l.name(), "order": a.order(), "count": maps.len(), "maps": list})))
        }
        Command::AuditCongruence { pair, modulus, expected } => {
            let (k, l, a, b) = run.phases.time("build", || map_pair(pair))?;
            run.params = pair_params(pair, &k, &l);
            let modulus = modulus.unwrap_or(a.order() as u64);
            let expected = expected.unwrap_or(if pair.power % 2 == 0 { 1 } else { -1 });
            run.params["mod"] = json!(modulus);
            run.params["expected"] = json!(expected);
            let maps = run
                .phases
                .time("enumerate", || enumerate_equivariant_maps(&k, &l, &a, &b, EnumerationCap { max_orbits: pair.cap }))?;
            if maps.is_empty() {
                return Ok(Reply::ok(json!({"count": 0, "passed": true})));
            }
            let (dom_fc, cod_fc) = run.phases.time("orient", || -> Result<_> { Ok((orient(&k)?, orient(&l)?)) })?;
            let report = run.phases.time("degrees", || congruence_audit(&maps, &dom_fc, &cod_fc, modulus, expected))?;
            let mut v = report.to_json();
            v["count"] = json!(maps.len());
            Ok(Reply { code: if report.passed() { 0 } else { 1 }, report: v })
        }
        Command::Scenario { name, d, r, k, l, p, trials, config } => {
            scenario_command(name, [*d, *r, *k, *l, *p], *trials, config.as_deref(), run)
        }
        Command::RandomConfig { d, sizes, bound } => {
            run.params = json!({"d": d, "sizes": sizes, "bound": bound});
            let seed = run.global.seed;
            let config = run.phases.time("generate", || random_config(*d, sizes, seed, *bound))?;
            Ok(Reply::ok(serde_json::to_value(config.to_document())?))
        }
    }
}

fn complex_command(c: &ComplexCommand, run: &mut Run) -> Result<Reply> {
    let k = match c {
        ComplexCommand::Chessboard { m, n } => {
            run.params = json!({"m": m, "n": n});
            run.phases.time("build", || chessboard_complex(*m, *n))?
        }
        ComplexCommand::Skeleton { m, k } => {
            run.params = json!({"m": m, "k": k});
            run.phases.time("build", || simplex_skeleton(*m, *k))?
        }
        ComplexCommand::Join { a, b } => {
            let (ka, kb) = (load_complex(a)?, load_complex(b)?);
            run.params = json!({"a": ka.name(), "b": kb.name()});
            run.phases.time("build", || join(&ka, &kb))
        }
    };
    Ok(Reply::ok(complex_document(&k)))
}

#[allow(clippy::too_many_arguments)]
fn degree_command(
    xi: Option<&[usize]>,
    power: usize,
    map: Option<&Path>,
    dom: Option<&Path>,
    cod: Option<&Path>,
    method: &str,
    target: Option<&[usize]>,
    modulus: Option<u64>,
    run: &mut Run,
) -> Result<Reply> {
    if !matches!(method, "homological" | "preimage" | "both") {
        return Err(input_error(format!("unknown method {method:?}; expected homological, preimage or both")));
    }
    let (f, dom_fc, cod_fc, modulus) = if let Some(rk) = xi {
        let (r, k) = (rk[0], rk[1]);
        run.params = json!({"xi": [r, k], "power": power, "method": method});
        let (f, dom_fc, cod_fc) = run.phases.time("build", || -> Result<_> {
            let (dom, cod, f) = canonical_projection(r, k)?;
            let (dom_fc, cod_fc) = (orient(&dom)?, orient(&cod)?);
            let (mut df, mut cf) = (dom_fc.clone(), cod_fc.clone());
            for _ in 1..power {
                df = df.join(&dom_fc);
                cf = cf.join(&cod_fc);
            }
            Ok((join_map_power(&f, power)?, df, cf))
        })?;
        (f, dom_fc, cod_fc, modulus.or(Some(r as u64)))
    } else {
        let (Some(map), Some(dom), Some(cod)) = (map, dom, cod) else {
            return Err(input_error("either --xi R K or all of --map, --dom, --cod is required"));
        };
        let (k, l) = (load_complex(dom)?, load_complex(cod)?);
        run.params = json!({"dom": k.name(), "cod": l.name(), "method": method});
        let f = SimplicialMap::new(&k, &l, json_usizes(map, "vertex_map")?)?;
        let (dom_fc, cod_fc) = run.phases.time("orient", || -> Result<_> { Ok((orient(&k)?, orient(&l)?)) })?;
        (f, dom_fc, cod_fc, modulus)
    };
    let target = match target {
        Some(t) => Simplex::new(t.to_vec())?,
        None => cod_fc.complex().facets()[0].clone(),
    };
    let with_mod = |rep: DegreeReport| match modulus {
        Some(m) => rep.with_modulus(m),
        None => rep,
    };
    let homological = || -> Result<DegreeReport> { Ok(with_mod(degree_homological(&f, &dom_fc, &cod_fc)?)) };
    let preimage = || -> Result<DegreeReport> { Ok(with_mod(degree_by_preimage(&f, &dom_fc, &cod_fc, &target)?)) };
    let report = match method {
        "homological" => run.phases.time("degree", homological)?.to_json(),
        "preimage" => run.phases.time("degree", preimage)?.to_json(),
        _ => {
            let h = run.phases.time("homological", homological)?;
            let p = run.phases.time("preimage", preimage)?;
            if h.value != p.value {
                return Err(chessdeg::Error::Integrity(format!("degree algorithms disagree: {} vs {}", h.value, p.value)).into());
            }
            let mut v = h.to_json();
            v["method"] = json!("both");
            v["homological"] = h.to_json()["degree"].clone();
            v["preimage"] = p.to_json()["degree"].clone();
            v
        }
    };
    Ok(Reply::ok(report))
}

type Pair = (SimplicialComplex, SimplicialComplex, PermutationAction, PermutationAction);

fn map_pair(pair: &MapPair) -> Result<Pair> {
    let (k, a) = if let Some(mn) = &pair.dom_chessboard {
        (chessboard_complex(mn[0], mn[1])?, cyclic_row_action(mn[0], mn[1])?)
    } else if let (Some(dom), Some(act)) = (&pair.dom, &pair.dom_action) {
        (load_complex(dom)?, PermutationAction::new(json_usizes(act, "generator")?)?)
    } else {
        return Err(input_error("a domain is required: --dom-chessboard M N or --dom FILE --dom-action FILE"));
    };
    let (l, b) = if let Some(mk) = &pair.cod_skeleton {
        (simplex_skeleton(mk[0], mk[1])?, cyclic_vertex_action(mk[0])?)
    } else if let (Some(cod), Some(act)) = (&pair.cod, &pair.cod_action) {
        (load_complex(cod)?, PermutationAction::new(json_usizes(act, "generator")?)?)
    } else {
        return Err(input_error("a codomain is required: --cod-skeleton M K or --cod FILE --cod-action FILE"));
    };
    if pair.power == 0 {
        return Err(input_error("--power must be at least 1"));
    }
    if pair.power == 1 {
        return Ok((k, l, a, b));
    }
    Ok((
        join_power(&k, pair.power)?,
        join_power(&l, pair.power)?,
        join_action_power(&a, pair.power)?,
        join_action_power(&b, pair.power)?,
    ))
}

fn pair_params(pair: &MapPair, k: &SimplicialComplex, l: &SimplicialComplex) -> Value {
    json!({"domain": k.name(), "codomain": l.name(), "power": pair.power, "cap": pair.cap})
}

fn scenario_spec(name: &str, [d, r, k, l, p]: [Option<usize>; 5]) -> Result<ScenarioSpec> {
    let kind = ScenarioKind::from_name(name)
        .ok_or_else(|| input_error(format!("unknown scenario {name:?}; see `chessdeg scenario --help`")))?;
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| input_error(format!("scenario {} needs --{flag}", kind.name())));
    Ok(match kind {
        ScenarioKind::ColoredRadon => ScenarioSpec::colored_radon(need(d, "d")?),
        ScenarioKind::K1 => ScenarioSpec::k1(need(r, "r")?, need(d, "d")?),
        ScenarioKind::MixedA => ScenarioSpec::mixed_a(need(r, "r")?, need(d, "d")?, need(l, "l")?, need(k, "k")?),
        ScenarioKind::MixedB => ScenarioSpec::mixed_b(need(p, "p")?, need(d, "d")?, need(l, "l")?, need(k, "k")?),
        ScenarioKind::K33 => ScenarioSpec::k33(),
        ScenarioKind::K333 => ScenarioSpec::k333(),
        ScenarioKind::K555 => ScenarioSpec::k555(),
        ScenarioKind::K4444 => ScenarioSpec::k4444(),
        ScenarioKind::ClassicTverberg => ScenarioSpec::classic_tverberg(need(r, "r")?, need(d, "d")?),
    })
}

fn scenario_command(
    name: &str,
    params: [Option<usize>; 5],
    trials: u64,
    config: Option<&Path>,
    run: &mut Run,
) -> Result<Reply> {
    if trials == 0 {
        return Err(input_error("--trials must be positive"));
    }
    let mut spec = scenario_spec(name, params)?;
    if run.global.stochastic {
        spec = spec.with_mode(SearchMode::Stochastic).with_budget(run.global.budget.unwrap_or(100_000));
    } else if let Some(b) = run.global.budget {
        spec = spec.with_budget(b);
    }
    spec.validate()?;
    let config = config.map(|p| -> Result<_> { Ok(parse_config(&read(p)?)?) }).transpose()?;
    run.params = json!({"scenario": spec.kind.name(), "params": spec.params_json(), "trials": trials, "mode": spec.mode.name()});
    if spec.mode == SearchMode::Exhaustive {
        run.params["budget"] = json!(run.global.budget);
    } else {
        run.params["budget"] = json!(spec.budget);
    }

    let seed = run.global.seed;
    let deterministic = run.global.deterministic;
    let reports = run.phases.time("search", || {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let s = seed.wrapping_add(i);
                let input = match &config {
                    Some(c) => ScenarioInput::Config(c.clone(), s),
                    None => ScenarioInput::Seed(s),
                };
                run_scenario(&spec, input).map(|mut rep| {
                    if deterministic {
                        rep.elapsed_ms = 0;
                    }
                    rep
                })
            })
            .collect::<chessdeg::Result<Vec<ScenarioReport>>>()
    })?;

    let count = |o: Outcome| reports.iter().filter(|r| r.outcome == o).count();
    let (found, refuted, inconclusive) = (count(Outcome::Found), count(Outcome::Refuted), count(Outcome::Inconclusive));
    let code = if refuted > 0 {
        Outcome::Refuted.exit_code()
    } else if inconclusive > 0 {
        Outcome::Inconclusive.exit_code()
    } else {
        0
    };
    let report = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        json!({
            "scenario": spec.kind.name(),
            "params": spec.params_json(),
            "trials": trials,
            "found": found,
            "refuted": refuted,
            "inconclusive": inconclusive,
            "lp_calls": reports.iter().map(|r| r.lp_calls).sum::<u64>(),
            "reports": reports.iter().map(ScenarioReport::to_json).collect::<Vec<_>>(),
        })
    };
    Ok(Reply { report, code: u8::try_from(code).map_err(|_| anyhow!("exit code out of range"))? })
}
