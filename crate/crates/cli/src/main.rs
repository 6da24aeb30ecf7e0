mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use strata_core::strata::Window;
use strata_core::io::{parse, render, GameFile, MonoidFile, MorphismFile, PositionsFile, QuotientFile, StrataFile};
use strata_core::{
    build_quotient, check_defining_equation, convert, fiber_stratify, game_stratify, solve_p_positions, verify, Error,
    Form, LatticeGame, MonoidMorphism, QuotientPolicy,
};

use report::{Report, Status};

#[derive(Parser, Debug)]
#[command(name = "strata", version, about = "Lattice games, misère quotients and affine stratifications")]
struct Cli {
    #[command(flatten)]
    budget: Budget,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

/// Work caps, settable from the environment.
#[derive(Args, Debug, Clone, Copy)]
struct Budget {
    /// Largest accepted functional threshold.
    #[arg(long, global = true, env = "STRATA_MAX_THRESHOLD", default_value_t = 400)]
    max_threshold: i64,
    /// Largest number of lattice points a verification window may hold.
    #[arg(long, global = true, env = "STRATA_MAX_POINTS", default_value_t = 2_000_000)]
    max_points: usize,
    /// Largest number of quotient escalation rounds.
    #[arg(long, global = true, env = "STRATA_MAX_ROUNDS", default_value_t = 8)]
    max_rounds: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// P-positions of a game up to a functional threshold.
    Solve {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        threshold: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detect and certify a finite quotient.
    Quotient {
        #[arg(long)]
        game: PathBuf,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stratification of the P-positions from a certified quotient.
    StratifyGame {
        #[arg(long)]
        game: PathBuf,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stratification of one fiber of a morphism from N^n to a finite monoid.
    Fiber {
        #[arg(long)]
        monoid: PathBuf,
        #[arg(long)]
        morphism: PathBuf,
        #[arg(long)]
        element: usize,
        /// Self-check on the box [0, B]^n.
        #[arg(long, default_value_t = 12)]
        window: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Present a stratification in another form (1 to 6).
    Convert {
        #[arg(long)]
        strata: PathBuf,
        #[arg(long)]
        form: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify disjointness and compare with a game or fiber oracle.
    Verify {
        #[arg(long)]
        strata: PathBuf,
        #[arg(long, requires = "threshold", conflicts_with_all = ["monoid", "morphism"])]
        game: Option<PathBuf>,
        #[arg(long)]
        threshold: Option<i64>,
        #[arg(long, requires_all = ["morphism", "element"])]
        monoid: Option<PathBuf>,
        #[arg(long)]
        morphism: Option<PathBuf>,
        #[arg(long)]
        element: Option<usize>,
        /// Box [0, B]^n for the fiber oracle.
        #[arg(long, default_value_t = 20)]
        window: i64,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct PolicyArgs {
    /// Solved threshold; defaults to what the policy needs.
    #[arg(long)]
    threshold: Option<i64>,
    /// Escalation step.
    #[arg(long, default_value_t = QuotientPolicy::default().delta)]
    delta: i64,
    /// Classified window.
    #[arg(long, default_value_t = QuotientPolicy::default().window)]
    window: i64,
    /// Separating-offset window.
    #[arg(long, default_value_t = QuotientPolicy::default().probe)]
    probe: i64,
    /// Escalation rounds.
    #[arg(long, default_value_t = QuotientPolicy::default().max_rounds)]
    rounds: usize,
}

/// Why a command did not succeed.
enum Failure {
    /// Unreadable or invalid input: exit 2.
    Input(String),
    /// The computation ran but could not establish its claim: exit 1.
    Unproven(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(_) | Error::Uncertified | Error::IllDefined(..) | Error::Overflow => {
                Failure::Unproven(e.to_string())
            }
            e => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<LatticeGame, Failure> {
    load::<GameFile>(path)?.build().map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_morphism(monoid: &Path, morphism: &Path) -> Result<MonoidMorphism, Failure> {
    let m = load::<MonoidFile>(monoid)?.build().map_err(|e| Failure::Input(format!("{}: {e}", monoid.display())))?;
    load::<MorphismFile>(morphism)?.build(m).map_err(|e| Failure::Input(format!("{}: {e}", morphism.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

impl Budget {
    fn threshold(&self, t: i64) -> Result<i64, Failure> {
        if t < 0 {
            return Err(Failure::Input(format!("threshold must be nonnegative, got {t}")));
        }
        if t > self.max_threshold {
            return Err(Failure::Input(format!("threshold {t} exceeds STRATA_MAX_THRESHOLD={}", self.max_threshold)));
        }
        Ok(t)
    }

    fn window(&self, w: &Window) -> Result<(), Failure> {
        let n = match w {
            Window::Box(b) => b.iter().map(|(lo, hi)| (hi - lo + 1).max(0) as usize).product(),
            Window::Points(p) => p.len(),
        };
        if n > self.max_points {
            return Err(Failure::Input(format!("window holds {n} points, over STRATA_MAX_POINTS={}", self.max_points)));
        }
        Ok(())
    }
}

impl PolicyArgs {
    fn resolve(&self, g: &LatticeGame, budget: &Budget) -> Result<(QuotientPolicy, i64), Failure> {
        for (name, v) in [("delta", self.delta), ("window", self.window), ("probe", self.probe)] {
            if v <= 0 {
                return Err(Failure::Input(format!("--{name} must be positive, got {v}")));
            }
        }
        if self.rounds > budget.max_rounds {
            return Err(Failure::Input(format!("--rounds {} exceeds STRATA_MAX_ROUNDS={}", self.rounds, budget.max_rounds)));
        }
        let policy = QuotientPolicy { window: self.window, probe: self.probe, delta: self.delta, max_rounds: self.rounds };
        let t = match self.threshold {
            Some(t) => t,
            None => policy.required_threshold(g)?,
        };
        Ok((policy, budget.threshold(t)?))
    }
}

fn solve(game: &Path, threshold: i64, out: Option<&Path>, budget: &Budget) -> Outcome {
    let g = load_game(game)?;
    let t = budget.threshold(threshold)?;
    let pset = solve_p_positions(&g, t)?;
    let check = check_defining_equation(&g, &pset, t)?;
    emit(&render(&PositionsFile::of(&g, &pset)), out)?;
    let mut r = Report::new("solve", Status::from_pass(check.passed()));
    r.fact("p_positions", pset.len());
    r.fact("threshold", t);
    r.equation(&check);
    Ok(r)
}

fn quotient(game: &Path, policy: &PolicyArgs, out: Option<&Path>, budget: &Budget) -> Outcome {
    let g = load_game(game)?;
    let (policy, t) = policy.resolve(&g, budget)?;
    let pset = solve_p_positions(&g, t)?;
    let q = build_quotient(&g, &pset, &policy)?;
    emit(&render(&QuotientFile::of(&q)), out)?;
    let mut r = Report::new("quotient", if q.certified { Status::Pass } else { Status::Uncertified });
    r.fact("classes", q.len());
    r.fact("threshold", t);
    r.fact("cert_window", q.cert_window);
    if let Some(note) = &q.note {
        r.fact("note", note.as_str());
    }
    Ok(r)
}

fn stratify_game(game: &Path, policy: &PolicyArgs, out: Option<&Path>, budget: &Budget) -> Outcome {
    let g = load_game(game)?;
    let (policy, t) = policy.resolve(&g, budget)?;
    let pset = solve_p_positions(&g, t)?;
    let q = build_quotient(&g, &pset, &policy)?;
    if !q.certified {
        let mut r = Report::new("stratify-game", Status::Uncertified);
        r.fact("note", q.note.as_deref().unwrap_or("quotient did not stabilize"));
        return Ok(r);
    }
    let gs = game_stratify(&g, &q, &pset)?;
    emit(&render(&StrataFile::of(&gs.stratification)), out)?;
    let mut r = Report::new("stratify-game", Status::Pass);
    r.fact("strata", gs.stratification.len());
    r.fact("cert_window", q.cert_window);
    r.verification(&gs.report);
    Ok(r)
}

fn fiber(monoid: &Path, morphism: &Path, element: usize, window: i64, out: Option<&Path>, budget: &Budget) -> Outcome {
    let phi = load_morphism(monoid, morphism)?;
    let s = fiber_stratify(&phi, element)?;
    let w = Window::cube(phi.source_dim(), 0, window.max(0));
    budget.window(&w)?;
    let rep = verify(&s, |x| phi.eval(x).is_ok_and(|v| v == element), &w)?;
    emit(&render(&StrataFile::of(&s)), out)?;
    let mut r = Report::new("fiber", Status::Pass);
    r.fact("strata", s.len());
    r.verification(&rep);
    Ok(r)
}

fn convert_cmd(strata: &Path, form: u8, out: Option<&Path>) -> Outcome {
    let target = Form::from_number(form).ok_or_else(|| Failure::Input(format!("--form must be 1 to 6, got {form}")))?;
    let s = load::<StrataFile>(strata)?.build().map_err(|e| Failure::Input(format!("{}: {e}", strata.display())))?;
    let c = convert(&s, target)?;
    emit(&render(&StrataFile::of(&c)), out)?;
    let mut r = Report::new("convert", Status::Pass);
    r.fact("form", form);
    r.fact("strata", c.len());
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    strata: &Path,
    game: Option<&Path>,
    threshold: Option<i64>,
    monoid: Option<&Path>,
    morphism: Option<&Path>,
    element: Option<usize>,
    window: i64,
    budget: &Budget,
) -> Outcome {
    let s = load::<StrataFile>(strata)?.build().map_err(|e| Failure::Input(format!("{}: {e}", strata.display())))?;
    let rep = match (game, monoid, morphism, element) {
        (Some(game), ..) => {
            let g = load_game(game)?;
            if g.dim() != s.dim() {
                return Err(Failure::Input(format!("game dimension {} differs from strata dimension {}", g.dim(), s.dim())));
            }
            let t = budget.threshold(threshold.unwrap_or(0))?;
            let pset = solve_p_positions(&g, t)?;
            let w = Window::Points(g.window(t)?);
            budget.window(&w)?;
            verify(&s, |x| pset.contains(x), &w)?
        }
        (None, Some(m), Some(f), Some(q)) => {
            let phi = load_morphism(m, f)?;
            if phi.source_dim() != s.dim() {
                return Err(Failure::Input(format!("morphism source {} differs from strata dimension {}", phi.source_dim(), s.dim())));
            }
            let w = Window::cube(s.dim(), 0, window.max(0));
            budget.window(&w)?;
            verify(&s, |x| phi.eval(x).is_ok_and(|v| v == q), &w)?
        }
        _ => verify(&s, |x| s.contains(x), &Window::Points(Vec::new()))?,
    };
    let mut r = Report::new("verify", Status::Pass);
    r.verification_with(&rep, s.is_disjoint());
    Ok(r)
}

fn run(cli: &Cli) -> Outcome {
    let b = &cli.budget;
    match &cli.command {
        Command::Solve { game, threshold, out } => solve(game, *threshold, out.as_deref(), b),
        Command::Quotient { game, policy, out } => quotient(game, policy, out.as_deref(), b),
        Command::StratifyGame { game, policy, out } => stratify_game(game, policy, out.as_deref(), b),
        Command::Fiber { monoid, morphism, element, window, out } => {
            fiber(monoid, morphism, *element, *window, out.as_deref(), b)
        }
        Command::Convert { strata, form, out } => convert_cmd(strata, *form, out.as_deref()),
        Command::Verify { strata, game, threshold, monoid, morphism, element, window } => verify_cmd(
            strata,
            game.as_deref(),
            *threshold,
            monoid.as_deref(),
            morphism.as_deref(),
            *element,
            *window,
            b,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            if cli.timings {
                report.fact("elapsed_ms", start.elapsed().as_millis() as u64);
            }
            // Reports go to stderr when the artifact is on stdout.
            let artifact_on_stdout = match &cli.command {
                Command::Verify { .. } => false,
                Command::Solve { out, .. }
                | Command::Quotient { out, .. }
                | Command::StratifyGame { out, .. }
                | Command::Fiber { out, .. }
                | Command::Convert { out, .. } => out.is_none(),
            };
            if artifact_on_stdout {
                eprint!("{}", report.render());
            } else {
                print!("{}", report.render());
            }
            ExitCode::from(report.exit_code())
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Unproven(msg)) => {
            eprintln!("failed: {msg}");
            ExitCode::from(1)
        }
    }
}
