//! `berkpot`: exact potential theory on the Berkovich line from the command line.
//!
//! Exit codes: 0 success, 1 a check failed, 2 parse or usage error,
//! 3 precondition violated.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use berkpot::equilibrium::{equilibrium, is_capacity_zero, normalize_set, CompactSet};
use berkpot::green::{
    brelot_cartan_family_check, green_properties_report, nested_limit_check, verify_main_theorem,
    GreenFunction, Report,
};
use berkpot::io::{measure_to_json, parse_scene, Scene};
use berkpot::plane::{classical_green, leja_extremal, FeketeMode, PlaneCompact};
use berkpot::rational::{format_rational, parse_rational, to_decimal, to_f64};
use berkpot::{BerkPoint, Error, LogScalar, PrimeContext, Rational};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const DIGITS: u32 = 12;
const DEFAULT_SAMPLES: usize = 50;

#[derive(Parser)]
#[command(name = "berkpot", version, about = "Potential theory on the Berkovich projective line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print -log_p of a kernel between two points.
    Kernel {
        #[arg(short, long)]
        p: u64,
        /// Pole of the kernel.
        #[arg(long, default_value = "I:inf")]
        zeta: String,
        #[arg(long, value_enum, default_value_t = KernelKind::Hsia)]
        kind: KernelKind,
        x: String,
        y: String,
    },
    /// Robin constant, capacity and equilibrium measure of a scene.
    Capacity {
        scene: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Green function values at sample points, with its property checks.
    Green {
        scene: PathBuf,
        /// Evaluate here instead of at the scene's samples.
        #[arg(long = "at")]
        at: Vec<String>,
    },
    /// Run one of the verification suites on a scene.
    Verify {
        /// Scene file; the brelot suite only needs `-p`.
        scene: Option<PathBuf>,
        #[arg(long, value_enum)]
        suite: Suite,
        /// The family's point for the brelot suite.
        #[arg(long)]
        point: Option<String>,
        #[arg(short, long, default_value_t = 2)]
        p: u64,
        /// Family size for the nested and brelot suites.
        #[arg(long, default_value_t = 64)]
        n_max: u32,
        /// Log-radius offset of the nested family: member n uses R + step/n.
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        step: String,
    },
    /// CSV of the Green function along the path D(a, t).
    Profile {
        scene: PathBuf,
        /// Center a of the path, a rational.
        #[arg(long)]
        path: String,
        /// `start:end:step`, rationals.
        #[arg(long, allow_hyphen_values = true)]
        t_range: String,
    },
    /// CSV comparing the Leja extremal function with the Green function.
    Leja {
        #[arg(long, value_enum)]
        set: PlaneSet,
        /// Largest order; rows are printed for 1, 2, 4, ... and n itself.
        #[arg(long)]
        n: usize,
        /// Evaluation point `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, value_enum, default_value_t = Mode::Greedy)]
        mode: Mode,
        /// Boundary sample count.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Disk center `re,im`.
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        center: String,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Small,
    Spherical,
    Hsia,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Main,
    Brelot,
    Nested,
    GreenProps,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlaneSet {
    Circle,
    Disk,
    Interval,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Greedy,
    Exhaustive,
}

/// Command output plus whether every check passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("berkpot: {e}");
            ExitCode::from(match e {
                Error::Parse(_) => 2,
                Error::Precondition(_) => 3,
                Error::Certification(_) => 1,
            })
        }
    }
}

fn run(command: Command) -> berkpot::Result<Outcome> {
    match command {
        Command::Kernel { p, zeta, kind, x, y } => cmd_kernel(p, &zeta, kind, &x, &y),
        Command::Capacity { scene, json } => cmd_capacity(&load_scene(&scene)?, json),
        Command::Green { scene, at } => cmd_green(&load_scene(&scene)?, &at),
        Command::Verify { scene, suite, point, p, n_max, step } => {
            let scene = scene.map(|s| load_scene(&s)).transpose()?;
            cmd_verify(scene.as_ref(), suite, point.as_deref(), p, n_max, &step)
        }
        Command::Profile { scene, path, t_range } => cmd_profile(&load_scene(&scene)?, &path, &t_range),
        Command::Leja { set, n, z, mode, grid, center, radius, a, b } => {
            let compact = match set {
                PlaneSet::Circle => PlaneCompact::unit_circle(grid),
                PlaneSet::Disk => PlaneCompact::disk(parse_complex(&center)?, radius, grid),
                PlaneSet::Interval => PlaneCompact::interval(a, b, grid),
            };
            let mode = match mode {
                Mode::Greedy => FeketeMode::Greedy,
                Mode::Exhaustive => FeketeMode::Exhaustive,
            };
            cmd_leja(&compact, n, parse_complex(&z)?, mode)
        }
    }
}

fn load_scene(path: &Path) -> berkpot::Result<Scene> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_scene(&text)
}

/// The scene's samples, or seeded random ones.
fn samples(scene: &Scene) -> Vec<BerkPoint> {
    scene.samples.clone().unwrap_or_else(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(scene.seed);
        berkpot::random::samples(&mut rng, DEFAULT_SAMPLES, &scene.set.zeta, &scene.ctx)
    })
}

fn parse_point(s: &str) -> berkpot::Result<BerkPoint> {
    s.parse()
}

fn parse_complex(s: &str) -> berkpot::Result<Complex64> {
    let bad = || Error::Parse(format!("expected `re,im`, got `{s}`"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

fn scalar_line(v: &LogScalar) -> String {
    match v {
        LogScalar::Finite(r) => format!("{} {}", format_rational(r), to_decimal(r, DIGITS)),
        other => other.to_wire(),
    }
}

/// The invocation, echoed into JSON reports.
fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn pretty(v: &Value) -> String {
    let mut v = v.clone();
    if let Value::Object(map) = &mut v {
        map.insert("command".into(), json!(command_echo()));
    }
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn cmd_kernel(p: u64, zeta: &str, kind: KernelKind, x: &str, y: &str) -> berkpot::Result<Outcome> {
    let (x, y, zeta) = (parse_point(x)?, parse_point(y)?, parse_point(zeta)?);
    let ctx = PrimeContext::new(p)?;
    let v = match kind {
        KernelKind::Small => ctx.small_kernel_log(&x, &y)?,
        KernelKind::Spherical => ctx.spherical_kernel_log(&x, &y),
        KernelKind::Hsia => ctx.hsia_kernel_log(&x, &y, &zeta),
    };
    Ok(Outcome::ok(format!("{}\n", scalar_line(&v))))
}

fn cmd_capacity(scene: &Scene, as_json: bool) -> berkpot::Result<Outcome> {
    let ctx = &scene.ctx;
    let eq = equilibrium(&scene.set, ctx)?;
    let atoms: Vec<(String, String)> = eq
        .measure
        .atoms()
        .iter()
        .map(|(x, w)| (x.to_string(), format_rational(w)))
        .collect();
    if as_json {
        let v = json!({
            "robin": eq.robin.to_wire(),
            "capacityLog": eq.capacity_log.to_wire(),
            "atoms": measure_to_json(&eq.measure),
        });
        return Ok(Outcome::ok(pretty(&v)));
    }
    let mut out = String::new();
    match &eq.robin {
        LogScalar::Finite(robin) => {
            let cap = (ctx.p() as f64).powf(-to_f64(robin));
            writeln!(out, "robin: {}", format_rational(robin)).unwrap();
            writeln!(out, "capacity_log: {}", eq.capacity_log.to_wire()).unwrap();
            writeln!(out, "capacity: {cap:.12}").unwrap();
            for (x, w) in atoms {
                writeln!(out, "atom: {x} {w}").unwrap();
            }
        }
        _ => out.push_str("capacity: 0\n"),
    }
    Ok(Outcome::ok(out))
}

fn checks_json(report: &Report) -> Value {
    Value::Array(
        report
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "status": if c.passed { "pass" } else { "fail" },
                    "detail": c.detail,
                })
            })
            .collect(),
    )
}

fn cmd_green(scene: &Scene, at: &[String]) -> berkpot::Result<Outcome> {
    let ctx = &scene.ctx;
    let g = GreenFunction::new(&scene.set, ctx)?;
    let points = if at.is_empty() {
        samples(scene)
    } else {
        at.iter().map(|s| parse_point(s)).collect::<berkpot::Result<Vec<_>>>()?
    };
    let values: Vec<Value> = points
        .iter()
        .map(|z| json!([z.to_string(), g.eval(z, ctx).to_wire()]))
        .collect();
    let report = green_properties_report(&g, &points, None, ctx)?;
    let v = json!({
        "robin": format_rational(&g.robin),
        "values": values,
        "checks": checks_json(&report),
    });
    Ok(Outcome { text: pretty(&v), passed: report.passed() })
}

fn need_scene(scene: Option<&Scene>, suite: &str) -> berkpot::Result<Scene> {
    scene
        .cloned()
        .ok_or_else(|| Error::Parse(format!("the {suite} suite needs a scene file")))
}

fn cmd_verify(
    scene: Option<&Scene>,
    suite: Suite,
    point: Option<&str>,
    p: u64,
    n_max: u32,
    step: &str,
) -> berkpot::Result<Outcome> {
    let (name, max_gap, report, extra) = match suite {
        Suite::Main => {
            let scene = need_scene(scene, "main")?;
            let r = verify_main_theorem(&scene.set, &samples(&scene), &scene.ctx)?;
            let extra = json!({ "candidates": r.candidates, "samples": r.samples });
            ("main", Some(r.max_gap.clone()), r.report, extra)
        }
        Suite::GreenProps => {
            let scene = need_scene(scene, "green-props")?;
            let ctx = &scene.ctx;
            let g = GreenFunction::new(&scene.set, ctx)?;
            // Monotonicity against the first piece of the set on its own.
            let set = &scene.set;
            let first = match (set.balls.first(), set.points.first()) {
                (Some(b), _) => CompactSet::new(set.zeta.clone(), vec![b.clone()], vec![]),
                (None, Some(x)) => CompactSet::from_points(vec![x.clone()], set.zeta.clone()),
                _ => unreachable!("scenes are nonempty"),
            };
            let smaller = if is_capacity_zero(&first, ctx)? { None } else { Some(GreenFunction::new(&first, ctx)?) };
            let r = green_properties_report(&g, &samples(&scene), smaller.as_ref(), ctx)?;
            ("green-props", None, r, json!({}))
        }
        Suite::Nested => {
            let scene = need_scene(scene, "nested")?;
            let set = normalize_set(&scene.set, &scene.ctx)?;
            let [ball] = set.balls.as_slice() else {
                return Err(Error::Precondition("the nested suite needs a scene with exactly one ball".into()));
            };
            if !set.points.is_empty() {
                return Err(Error::Precondition("the nested suite needs a scene with exactly one ball".into()));
            }
            let step = parse_rational(step)?;
            let r = nested_limit_check(&ball.center, &ball.log_radius, &step, n_max, &set.zeta, &samples(&scene), &scene.ctx)?;
            let mut report = Report::default();
            let expected = step.abs_sub_zero() / Rational::from_integer(n_max.into());
            report.checks.push(check("monotone", r.monotone, if r.decreasing_sets { "nondecreasing values" } else { "nonincreasing values" }));
            report.checks.push(check("closed form agrees", r.closed_form_agrees, ""));
            report.checks.push(check(
                "final deviation",
                r.witness.is_some() && r.final_deviation == expected,
                &format!("{} at {}", format_rational(&r.final_deviation), r.witness.as_ref().map_or("none".into(), |w| w.to_string())),
            ));
            let extra = json!({
                "decreasingSets": r.decreasing_sets,
                "witness": r.witness.as_ref().map(|w| w.to_string()),
                "values": r.witness_values.iter().map(format_rational).collect::<Vec<_>>(),
            });
            ("nested", Some(r.final_deviation.clone()), report, extra)
        }
        Suite::Brelot => {
            let point = point.ok_or_else(|| Error::Parse("the brelot suite needs --point".into()))?;
            let a = parse_point(point)?;
            let (ctx, pts) = match scene {
                Some(s) => (s.ctx.clone(), samples(s)),
                None => {
                    let ctx = PrimeContext::new(p)?;
                    let mut rng = ChaCha8Rng::seed_from_u64(0);
                    let pts = berkpot::random::samples(&mut rng, DEFAULT_SAMPLES, &BerkPoint::gauss(), &ctx);
                    (ctx, pts)
                }
            };
            let r = brelot_cartan_family_check(&a, n_max, &pts, &ctx)?;
            let extra = json!({
                "deficiency": r.deficiency.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "capacityZero": r.deficiency_capacity_zero,
            });
            ("brelot", None, r.report, extra)
        }
    };
    let mut v = json!({
        "suite": name,
        "checks": checks_json(&report),
    });
    if let Some(gap) = &max_gap {
        v["maxGap"] = json!(format_rational(gap));
    }
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, extra) {
        dst.extend(src);
    }
    let passed = report.passed() && (name != "main" || max_gap.as_ref().is_some_and(|g| g == &Rational::from_integer(0.into())));
    Ok(Outcome { text: pretty(&v), passed })
}

fn check(name: &str, passed: bool, detail: &str) -> berkpot::green::Check {
    berkpot::green::Check { name: name.to_string(), passed, detail: detail.to_string() }
}

trait AbsSubZero {
    fn abs_sub_zero(&self) -> Rational;
}

impl AbsSubZero for Rational {
    fn abs_sub_zero(&self) -> Rational {
        if *self < Rational::from_integer(0.into()) {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

fn parse_center(s: &str) -> berkpot::Result<Rational> {
    match parse_point(s) {
        Ok(BerkPoint::TypeI(c)) => Ok(c),
        Ok(other) => Err(Error::Parse(format!("path center must be a finite rational, got {other}"))),
        Err(_) => parse_rational(s),
    }
}

fn cmd_profile(scene: &Scene, path: &str, t_range: &str) -> berkpot::Result<Outcome> {
    let a = parse_center(path)?;
    let parts: Vec<&str> = t_range.split(':').collect();
    let [start, end, step] = parts.as_slice() else {
        return Err(Error::Parse(format!("--t-range must be start:end:step, got `{t_range}`")));
    };
    let (start, end, step) = (parse_rational(start)?, parse_rational(end)?, parse_rational(step)?);
    if step <= Rational::from_integer(0.into()) || end < start {
        return Err(Error::Parse("--t-range needs start <= end and a positive step".into()));
    }
    let ctx = &scene.ctx;
    let g = GreenFunction::new(&scene.set, ctx)?;
    let mut out = String::from("t,G\n");
    let mut t = start;
    while t <= end {
        let v = g.eval(&BerkPoint::disk(a.clone(), t.clone()), ctx);
        writeln!(out, "{},{}", to_decimal(&t, DIGITS), v.to_decimal(DIGITS)).unwrap();
        t += &step;
    }
    Ok(Outcome::ok(out))
}

fn cmd_leja(e: &PlaneCompact, n_max: usize, z: Complex64, mode: FeketeMode) -> berkpot::Result<Outcome> {
    if n_max == 0 {
        return Err(Error::Parse("--n must be positive".into()));
    }
    let green = classical_green(e, z)?;
    let mut orders: Vec<usize> = std::iter::successors(Some(1usize), |n| n.checked_mul(2))
        .take_while(|&n| n < n_max)
        .collect();
    orders.push(n_max);
    let mut out = String::from("n,leja_value,green_value,abs_error\n");
    for n in orders {
        let l = leja_extremal(e, z, n, mode)?;
        writeln!(out, "{n},{l:.12},{green:.12},{:.12}", (l - green).abs()).unwrap();
    }
    Ok(Outcome::ok(out))
}
