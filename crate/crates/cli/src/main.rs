use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use dvm_core::circles::{
    avg_abs_s, circle_points, exp_sum_closed, exp_sum_direct_with, AngleConvention,
};
use dvm_core::collision::{
    DiscreteOperator, Domain, KernelSpec, LatticeDistribution, Maxwellian, MaxwellianMixture,
    Sampling, Vec2,
};
use dvm_core::harness::{
    converge_study, figure_data, max_r_search, relax_simulate, Comparison, ConvergeConfig,
    FigureQuery, DEFAULT_M_DIAG,
};
use dvm_core::io::{self as dio, RunManifest};
use dvm_core::{Error, Result};

const EXIT_PRECONDITION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "dvm",
    version,
    about = "Lattice collision operator and lattice-point experiments"
)]
struct Cli {
    /// Write CSV here instead of stdout; the run manifest goes to <FILE>.manifest.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Integer points on x^2 + y^2 = n.
    Circle { n: u64 },
    /// S(n, k) by direct summation and by the closed form.
    Expsum {
        n: u64,
        #[arg(allow_negative_numbers = true)]
        k: i64,
        #[arg(long, value_enum, default_value_t = ConventionArg::Atan2)]
        convention: ConventionArg,
    },
    /// Mean of |S(m, k)| over m <= X, reported at every decade.
    AvgS {
        #[arg(value_name = "X")]
        x: u64,
        #[arg(allow_negative_numbers = true)]
        k: i64,
    },
    /// Q^h(f, f) at one lattice velocity or over the whole support.
    Collide(CollideArgs),
    /// Q^h against the quadrature reference over a ladder of h.
    Converge(ConvergeArgs),
    /// Box points whose circle carries many lattice points.
    Figure(FigureArgs),
    /// Largest r2(n) with n <= bound^2.
    MaxR {
        #[arg(long)]
        bound: f64,
    },
    /// Space-homogeneous relaxation with RK4.
    Simulate(SimulateArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum ConventionArg {
    Atan2,
    Sincos,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum DensityArg {
    Maxwellian,
    Bimaxwellian,
    File,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum SamplingArg {
    Cell,
    Point,
}

impl From<SamplingArg> for Sampling {
    fn from(s: SamplingArg) -> Self {
        match s {
            SamplingArg::Cell => Sampling::CellAverage,
            SamplingArg::Point => Sampling::Point,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct DistributionArgs {
    #[arg(long = "f", value_enum, default_value_t = DensityArg::Maxwellian)]
    f: DensityArg,
    /// Lattice CSV (with <FILE>.header.json) when --f file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Lattice step for closed-form densities.
    #[arg(long, default_value_t = 0.25)]
    h: f64,
    /// Support radius for closed-form densities.
    #[arg(long, default_value_t = 4.0)]
    support: f64,
    #[arg(long, value_enum, default_value_t = SamplingArg::Cell)]
    sampling: SamplingArg,
}

#[derive(Args, Debug, Serialize)]
struct CollideArgs {
    #[command(flatten)]
    dist: DistributionArgs,
    /// Truncation radius R of the lattice sum.
    #[arg(long = "R")]
    r: f64,
    /// Velocity "vx,vy" on the lattice; omit for every support point.
    #[arg(long, value_parser = parse_vec2)]
    v: Option<Vec2>,
    #[arg(long, default_value = "maxwell", value_parser = parse_kernel)]
    kernel: KernelSpec,
}

#[derive(Args, Debug, Serialize)]
struct ConvergeArgs {
    #[arg(long = "f", value_enum, default_value_t = DensityArg::Bimaxwellian)]
    f: DensityArg,
    /// Strictly decreasing steps, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.25,0.125,0.0625")]
    h_list: Vec<f64>,
    #[arg(long = "R", default_value_t = 6.0)]
    r: f64,
    #[arg(long = "M", default_value_t = DEFAULT_M_DIAG)]
    m: usize,
    #[arg(long, value_parser = parse_vec2, default_value = "0,0")]
    v: Vec2,
    #[arg(long, default_value = "maxwell", value_parser = parse_kernel)]
    kernel: KernelSpec,
    #[arg(long, value_enum, default_value_t = SamplingArg::Cell)]
    sampling: SamplingArg,
}

#[derive(Args, Debug, Serialize)]
struct FigureArgs {
    #[arg(long)]
    min: u64,
    #[arg(long)]
    max: u64,
    #[arg(long)]
    threshold: u32,
    #[arg(long, value_parser = parse_comparison)]
    cmp: Comparison,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    #[command(flatten)]
    dist: DistributionArgs,
    #[arg(long)]
    dt: f64,
    #[arg(long)]
    steps: usize,
    #[arg(long = "R")]
    r: f64,
    #[arg(long, default_value = "maxwell", value_parser = parse_kernel)]
    kernel: KernelSpec,
    /// Also save the final distribution as a lattice CSV.
    #[arg(long = "final")]
    final_state: Option<PathBuf>,
}

fn parse_vec2(s: &str) -> std::result::Result<Vec2, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [x, y] = parts.as_slice() else {
        return Err(format!("expected \"vx,vy\", got {s:?}"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok(Vec2::new(num(x)?, num(y)?))
}

fn parse_kernel(s: &str) -> std::result::Result<KernelSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_comparison(s: &str) -> std::result::Result<Comparison, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn closed_form(kind: DensityArg) -> Result<MaxwellianMixture> {
    match kind {
        DensityArg::Maxwellian => Ok(MaxwellianMixture::new(vec![Maxwellian::standard()])),
        DensityArg::Bimaxwellian => Ok(MaxwellianMixture::bi_maxwellian()),
        DensityArg::File => Err(Error::InvalidArgument(
            "a file distribution has no closed form".into(),
        )),
    }
}

fn load_distribution(args: &DistributionArgs) -> Result<LatticeDistribution> {
    match (args.f, &args.input) {
        (DensityArg::File, Some(path)) => dio::load_lattice(path),
        (DensityArg::File, None) => Err(Error::InvalidArgument("--f file needs --input".into())),
        (kind, _) => LatticeDistribution::sample(
            &closed_form(kind)?,
            args.h,
            args.support,
            args.sampling.into(),
        ),
    }
}

/// Destination for the CSV body; the manifest follows the same choice.
struct Output {
    path: Option<PathBuf>,
}

impl Output {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        })
    }

    fn manifest(&self, command: &Command, extra: serde_json::Value) -> Result<()> {
        let config = json!({ "args": command, "results": extra });
        let m = RunManifest::new(
            command_name(command),
            config,
            Some(env!("CARGO_PKG_VERSION")),
            self.path.as_deref(),
        );
        match &self.path {
            Some(p) => {
                m.save_for(p)?;
            }
            None => eprintln!("{}", m.to_json()?),
        }
        Ok(())
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Circle { .. } => "circle",
        Command::Expsum { .. } => "expsum",
        Command::AvgS { .. } => "avg-s",
        Command::Collide(_) => "collide",
        Command::Converge(_) => "converge",
        Command::Figure(_) => "figure",
        Command::MaxR { .. } => "max-r",
        Command::Simulate(_) => "simulate",
    }
}

fn run(cli: &Cli) -> Result<()> {
    let out = Output {
        path: cli.out.clone(),
    };
    let command = &cli.command;
    match command {
        Command::Circle { n } => {
            if *n == 0 {
                return Err(Error::InvalidArgument("n must be at least 1".into()));
            }
            let set = circle_points(*n);
            dio::write_circle_csv(out.writer()?, &set)?;
            out.manifest(command, json!({ "r2": set.len() }))
        }
        Command::Expsum { n, k, convention } => {
            if *n == 0 {
                return Err(Error::InvalidArgument("n must be at least 1".into()));
            }
            let conv = match convention {
                ConventionArg::Atan2 => AngleConvention::Atan2,
                ConventionArg::Sincos => AngleConvention::SinCos,
            };
            let direct = exp_sum_direct_with(*n, *k, conv);
            #[derive(Serialize)]
            struct Row {
                n: u64,
                k: i64,
                re: f64,
                im: f64,
                abs: f64,
                closed_abs: f64,
            }
            let row = Row {
                n: *n,
                k: *k,
                re: direct.value.re,
                im: direct.value.im,
                abs: direct.value.norm(),
                closed_abs: exp_sum_closed(*n, *k),
            };
            dio::write_rows(out.writer()?, &[row])?;
            out.manifest(command, json!({}))
        }
        Command::AvgS { x, k } => {
            let stats = avg_abs_s(*x, *k)?;
            dio::write_stats_csv(out.writer()?, &stats)?;
            out.manifest(
                command,
                json!({ "identically_zero": stats.identically_zero }),
            )
        }
        Command::Collide(a) => {
            let f = load_distribution(&a.dist)?;
            let op = DiscreteOperator::new(f.h(), a.r, &a.kernel)?;
            let points = match a.v {
                Some(v) => vec![f.lattice_index(v)?],
                None => f.support_points(),
            };
            let q = op.eval_many(&f, &points, Domain::Unbounded)?;
            let rows: Vec<((i64, i64), f64)> = points.into_iter().zip(q).collect();
            dio::write_qh_csv(out.writer()?, &rows)?;
            out.manifest(
                command,
                json!({ "h": f.h(), "R_support": f.radius(), "terms": op.term_count() }),
            )
        }
        Command::Converge(a) => {
            let density = closed_form(a.f)?;
            let cfg = ConvergeConfig {
                v: a.v,
                h_list: a.h_list.clone(),
                truncation: a.r,
                m_diag: a.m,
                sampling: a.sampling.into(),
                ..Default::default()
            };
            let study = converge_study(&density, &a.kernel, &cfg)?;
            #[derive(Serialize)]
            struct Row {
                h: f64,
                #[serde(rename = "Qh")]
                qh: f64,
                #[serde(rename = "Qref")]
                qref: f64,
                abs_err: f64,
                #[serde(rename = "tail_R")]
                tail_r: f64,
                riemann_h: f64,
                #[serde(rename = "fourier_tail_M")]
                fourier_tail_m: f64,
                equid_term: f64,
                c3: f64,
            }
            let rows: Vec<Row> = study
                .rows
                .iter()
                .map(|r| Row {
                    h: r.h,
                    qh: r.qh,
                    qref: r.qref,
                    abs_err: r.abs_err,
                    tail_r: r.budget.tail_r,
                    riemann_h: r.budget.riemann_h,
                    fourier_tail_m: r.budget.fourier_tail_m,
                    equid_term: r.budget.equid_term,
                    c3: r.budget.c3,
                })
                .collect();
            dio::write_rows(out.writer()?, &rows)?;
            out.manifest(
                command,
                json!({ "reference": study.reference, "density": study.density }),
            )
        }
        Command::Figure(a) => {
            let data = figure_data(FigureQuery {
                coord_min: a.min,
                coord_max: a.max,
                threshold: a.threshold,
                comparison: a.cmp,
            })?;
            dio::write_rows(out.writer()?, &data.points)?;
            out.manifest(command, json!({ "count": data.count }))
        }
        Command::MaxR { bound } => {
            let best = max_r_search(*bound)?;
            #[derive(Serialize)]
            struct Row {
                bound: f64,
                n: u64,
                r2: u64,
            }
            dio::write_rows(
                out.writer()?,
                &[Row {
                    bound: *bound,
                    n: best.n,
                    r2: best.r2,
                }],
            )?;
            out.manifest(command, json!({}))
        }
        Command::Simulate(a) => {
            let f0 = load_distribution(&a.dist)?;
            let traj = relax_simulate(&f0, &a.kernel, a.r, a.dt, a.steps)?;
            #[derive(Serialize)]
            struct Row {
                step: usize,
                t: f64,
                #[serde(rename = "H")]
                h: f64,
                mass: f64,
                momentum_x: f64,
                momentum_y: f64,
                energy: f64,
            }
            let rows: Vec<Row> = traj
                .iter()
                .map(|s| Row {
                    step: s.step,
                    t: s.t,
                    h: s.h_functional,
                    mass: s.moments.mass,
                    momentum_x: s.moments.momentum[0],
                    momentum_y: s.moments.momentum[1],
                    energy: s.moments.energy,
                })
                .collect();
            dio::write_rows(out.writer()?, &rows)?;
            if let (Some(path), Some(last)) = (&a.final_state, traj.last()) {
                save_final(path, &last.f, command)?;
            }
            out.manifest(command, json!({ "h": f0.h(), "R_support": f0.radius() }))
        }
    }
}

fn save_final(path: &Path, f: &LatticeDistribution, command: &Command) -> Result<()> {
    dio::save_lattice(path, f)?;
    RunManifest::new(
        command_name(command),
        json!({ "args": command }),
        Some(env!("CARGO_PKG_VERSION")),
        Some(path),
    )
    .save_for(path)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PRECONDITION);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_PRECONDITION
            })
        }
    }
}
