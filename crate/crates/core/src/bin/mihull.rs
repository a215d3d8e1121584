use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use mihull::concmin::minimize_over_mih;
use mihull::format::{
    parse_instance, parse_objective, print_instance, print_rays, print_solution, print_stats, Stats,
};
use mihull::gen;
use mihull::inthull::{integer_hull_from_vertices, intvertex_bound, max_encoding_size};
use mihull::mihull::{hrep_bound_for, mixed_integer_hull, reduce_to_polytope, vrep_bound_for, Method};
use mihull::polyrep::{hrep_to_vrep, vrep_to_hrep, MixedSpace, Polyhedron, VRep};
use mihull::rat::RatVec;
use mihull::Error;

#[derive(Parser)]
#[command(name = "mihull", version, about = "Exact mixed-integer hulls of rational polyhedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Scaling,
    Subsets,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Mixed-integer hull as a point/ray file with a stats block
    Hull {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integer hull of a pure-integer polytope (d = 0)
    IntegerHull {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded polytope carrying the mixed-integer points, plus the rays
    Reduce {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        rays: Option<PathBuf>,
    },
    /// Minimum of a min-of-affine objective, printed as value@point
    Minimize {
        file: PathBuf,
        #[arg(long)]
        objective: PathBuf,
    },
    /// Compare a method against exhaustive enumeration
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// Generate instance files
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Rotated hypercube in Z × R^d
    Example1 {
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Comma-separated half-widths (positive, odd)
        #[arg(long, value_delimiter = ',')]
        b: Option<Vec<i64>>,
        /// All half-widths equal to 3
        #[arg(long)]
        remark1: bool,
        /// Write `<name>.hrep` and `<name>.vrep` here instead of stdout
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Nonnegative system with strictly positive rows
    Knapsack {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random instance
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "vrep")]
        kind: RandomKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKind {
    Vrep,
    Hrep,
    Pure,
    Unbounded,
}

enum Failure {
    Lib(Error),
    Io(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Parse { .. }) => 2,
            Failure::Lib(
                Error::MixedInfeasible | Error::EmptyPolyhedron | Error::Infeasible | Error::FiberEmpty,
            ) => 3,
            Failure::Lib(Error::UnboundedInput | Error::NonPolytopeInput | Error::ImplicitLineality) => 4,
            Failure::Mismatch(_) => 5,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(m) | Failure::Mismatch(m) => m.clone(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> CliResult<Polyhedron> {
    Ok(parse_instance(&read(path)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn resolve(method: MethodArg, p: &Polyhedron) -> Method {
    match (method, p) {
        (MethodArg::Scaling, _) | (MethodArg::Auto, Polyhedron::H(_)) => Method::Scaling,
        (MethodArg::Subsets, _) | (MethodArg::Auto, Polyhedron::V(_)) => Method::Subsets,
        (MethodArg::Oracle, _) => Method::Oracle,
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Scaling => "scaling",
        Method::Subsets => "subsets",
        Method::Oracle => "oracle",
    }
}

fn hull_output(space: MixedSpace, vertices: Vec<RatVec>, rays: Vec<RatVec>) -> CliResult<String> {
    Ok(print_instance(&Polyhedron::V(VRep::new(space, vertices, rays)?)))
}

fn cmd_hull(file: &Path, method: MethodArg, out: Option<&Path>) -> CliResult<()> {
    let p = load(file)?;
    let method = resolve(method, &p);
    let start = Instant::now();
    let (hull, report) = mixed_integer_hull(&p, method)?;
    let millis = start.elapsed().as_millis();
    let (bound_hrep, bound_vrep) = match &p {
        Polyhedron::H(h) => (Some(hrep_bound_for(h)), None),
        Polyhedron::V(v) if v.is_polytope() && v.space.n > 0 => {
            let h = vrep_to_hrep(v)?;
            (Some(hrep_bound_for(&h)), Some(vrep_bound_for(v)?))
        }
        Polyhedron::V(_) => (None, None),
    };
    let stats = Stats {
        vertices: hull.vertices.len(),
        t: report.map(|r| r.t),
        bound_hrep,
        bound_vrep,
        method: method_name(method).into(),
        millis,
    };
    let mut text = hull_output(hull.space, hull.vertices, hull.rays)?;
    text.push_str(&print_stats(&stats));
    emit(out, &text)
}

fn polytope_points(p: Polyhedron) -> CliResult<VRep> {
    let v = match p {
        Polyhedron::V(v) => v,
        Polyhedron::H(h) => hrep_to_vrep(&h)?,
    };
    if !v.is_polytope() {
        return Err(Error::UnboundedInput.into());
    }
    Ok(v)
}

fn cmd_integer_hull(file: &Path, out: Option<&Path>) -> CliResult<()> {
    let p = load(file)?;
    if p.space().d != 0 {
        return Err(Error::NotPureInteger.into());
    }
    let v = polytope_points(p)?;
    let start = Instant::now();
    let hull = integer_hull_from_vertices(&v.points)?;
    let millis = start.elapsed().as_millis();
    if hull.is_empty() {
        return Err(Error::MixedInfeasible.into());
    }
    let bound = intvertex_bound(v.space.n, max_encoding_size(&v.points), v.points.len(), false)?;
    let count = hull.vertices.len();
    let mut text = hull_output(v.space, hull.vertices, Vec::new())?;
    text.push_str(&format!("# vertices: {count}\n# bound: {bound}\n# millis: {millis}\n"));
    emit(out, &text)
}

fn cmd_reduce(file: &Path, out: Option<&Path>, rays_out: Option<&Path>) -> CliResult<()> {
    let p = load(file)?;
    let space = p.space();
    let (q, rays) = reduce_to_polytope(&p)?;
    emit(out, &print_instance(&q))?;
    emit(rays_out, &print_rays(space, &rays))
}

fn cmd_minimize(file: &Path, objective: &Path) -> CliResult<()> {
    let p = load(file)?;
    let f = parse_objective(&read(objective)?, p.space().dim())?;
    let v = polytope_points(p)?;
    let (point, value) = minimize_over_mih(&v, &f)?;
    println!("{}", print_solution(&point, &value));
    Ok(())
}

fn cmd_verify(files: &[PathBuf], method: MethodArg) -> CliResult<()> {
    let mut mismatches = Vec::new();
    for file in files {
        let p = load(file)?;
        let method = resolve(method, &p);
        let (got, _) = mixed_integer_hull(&p, method)?;
        let (want, _) = mixed_integer_hull(&p, Method::Oracle)?;
        if got == want {
            println!("ok {} ({} vertices, {})", file.display(), got.vertices.len(), method_name(method));
        } else {
            println!("MISMATCH {} ({})", file.display(), method_name(method));
            mismatches.push(file.display().to_string());
        }
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("mismatch on {}", mismatches.join(", "))))
    }
}

fn cmd_gen(kind: GenKind) -> CliResult<()> {
    match kind {
        GenKind::Example1 { d, b, remark1, out_dir } => {
            let (name, b) = match (b, remark1) {
                (Some(b), _) => (format!("example1_d{}", b.len().saturating_sub(1)), b),
                (None, true) => (format!("remark1_d{d}"), gen::remark1_b(d)),
                (None, false) => (format!("example1_d{d}"), gen::example1_default_b(d)),
            };
            let (h, v) = gen::example1(&b)?;
            let hrep = print_instance(&Polyhedron::H(h));
            let vrep = print_instance(&Polyhedron::V(v));
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(&dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
                    for (ext, text) in [("hrep", &hrep), ("vrep", &vrep)] {
                        let path = dir.join(format!("{name}.{ext}"));
                        emit(Some(&path), text)?;
                        println!("{}", path.display());
                    }
                    Ok(())
                }
                None => emit(None, &format!("{hrep}\n{vrep}")),
            }
        }
        GenKind::Knapsack { m, n, d, seed, out } => {
            let h = gen::knapsack(m, n, d, seed)?;
            emit(out.as_deref(), &print_instance(&Polyhedron::H(h)))
        }
        GenKind::Random { seed, kind, out } => {
            let p = match kind {
                RandomKind::Vrep => Polyhedron::V(gen::random_vrep(seed)?),
                RandomKind::Hrep => Polyhedron::H(vrep_to_hrep(&gen::random_vrep(seed)?)?),
                RandomKind::Pure => Polyhedron::V(gen::random_pure(seed)?),
                RandomKind::Unbounded => Polyhedron::V(gen::random_unbounded(seed)?),
            };
            emit(out.as_deref(), &print_instance(&p))
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Hull { file, method, out } => cmd_hull(&file, method, out.as_deref()),
        Command::IntegerHull { file, out } => cmd_integer_hull(&file, out.as_deref()),
        Command::Reduce { file, out, rays } => cmd_reduce(&file, out.as_deref(), rays.as_deref()),
        Command::Minimize { file, objective } => cmd_minimize(&file, &objective),
        Command::Verify { files, method } => cmd_verify(&files, method),
        Command::Gen { kind } => cmd_gen(kind),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
