use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use lieps::algebroid::{kunneth, Kunneth, TensorComplex, TrivialAlgebroid};
use lieps::cealg::ce_betti;
use lieps::error::{Error, ErrorKind};
use lieps::io::{parse_complex, parse_cover, parse_lie_algebra};
use lieps::mv::{mv_exactness_report, MVReport, MVSetup};
use lieps::psforms::{
    integration_certificate, stabilization, IntegrationCertificate, Stabilization,
};
use lieps::verify::{koszul_samples, verify, KoszulSample};
use lieps::{BettiTable, LieAlgebra, SimplicialComplex, Q};

/// Exact piecewise polynomial cohomology of simplicial complexes and trivial
/// Lie algebroids over them.
#[derive(Parser)]
#[command(name = "lieps", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Maximum coefficient degree D of the polynomial forms.
    #[arg(long, default_value_t = 2)]
    coeff_degree: usize,
    /// Highest form degree to report; defaults to dim K + dim g.
    #[arg(long)]
    max_degree: Option<usize>,
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Piecewise Betti numbers next to simplicial ones, with the integration certificate.
    Betti {
        complex: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Validate a Lie algebra and print its Chevalley–Eilenberg Betti numbers.
    CeBetti {
        lie_algebra: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Betti numbers of the trivial algebroid K × g, with the Künneth comparison.
    AlgebroidBetti {
        complex: PathBuf,
        lie_algebra: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Seed for the sampled Koszul checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Mayer–Vietoris exactness report for a two-piece cover.
    MvReport {
        complex: PathBuf,
        cover: PathBuf,
        /// Tensor coefficients in this Lie algebra; trivial coefficients if absent.
        #[arg(long)]
        lie_algebra: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the full seeded check suite and print a JSON report.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) => match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Internal => 3,
                ErrorKind::Validation => 4,
            },
            Failure::Io(..) => 2,
            Failure::Check(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(path, e) => format!("{}: {e}", path.display()),
            Failure::Check(msg) => msg.clone(),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load_complex(path: &Path) -> Result<SimplicialComplex, Failure> {
    Ok(parse_complex(&read(path)?)?)
}

fn load_lie_algebra(path: &Path) -> Result<LieAlgebra<Q>, Failure> {
    let g = parse_lie_algebra(&read(path)?)?;
    g.validate()?;
    Ok(g)
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes") + "\n"
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "OK"
    } else {
        "FAILED"
    }
}

#[derive(Serialize)]
struct BettiOutput {
    coeff_degree: usize,
    max_degree: usize,
    ps_betti: BettiTable,
    simplicial_betti: BettiTable,
    certificate: IntegrationCertificate,
    stabilization: Stabilization,
}

fn cmd_betti(path: &Path, common: &Common) -> Outcome {
    let k = load_complex(path)?;
    let pmax = common.max_degree.unwrap_or(k.dim().unwrap_or(0));
    let cap = common.coeff_degree;
    let certificate = integration_certificate::<Q>(&k, cap, pmax)?;
    let stab = stabilization::<Q>(&k, cap, pmax)?;
    if !certificate.stokes || (cap >= 1 && !certificate.holds()) {
        return Err(Failure::Check(format!(
            "integration certificate failed: {certificate:?}"
        )));
    }
    if common.json {
        return Ok(to_json(&BettiOutput {
            coeff_degree: cap,
            max_degree: pmax,
            ps_betti: certificate.ps_betti.clone(),
            simplicial_betti: certificate.simplicial_betti.clone(),
            certificate,
            stabilization: stab,
        }));
    }
    let cert = if k.is_empty() {
        "certificate vacuous".to_string()
    } else if cap == 0 {
        "certificate not applicable at D=0".to_string()
    } else {
        format!("certificate {}", verdict(certificate.holds()))
    };
    let mut out = format!(
        "{} | simplicial {} | {cert}\n",
        certificate.ps_betti, certificate.simplicial_betti
    );
    writeln!(
        out,
        "D={cap}: {}  D={}: {}  {}",
        stab.at_cap,
        cap + 1,
        stab.at_next_cap,
        if stab.stable() {
            "stable"
        } else {
            "not stable"
        }
    )
    .unwrap();
    Ok(out)
}

#[derive(Serialize)]
struct CeOutput {
    dim: usize,
    jacobi: bool,
    betti: BettiTable,
}

fn cmd_ce(path: &Path, json: bool) -> Outcome {
    let g = load_lie_algebra(path)?;
    let betti = ce_betti(&g)?;
    if json {
        return Ok(to_json(&CeOutput {
            dim: g.dim(),
            jacobi: true,
            betti,
        }));
    }
    Ok(format!("Jacobi OK; Betti {betti}\n"))
}

#[derive(Serialize)]
struct AlgebroidOutput {
    coeff_degree: usize,
    max_degree: usize,
    kunneth: Kunneth,
    koszul_samples: Vec<KoszulSample>,
}

fn cmd_algebroid(complex: &Path, lie: &Path, common: &Common, seed: u64) -> Outcome {
    let k = load_complex(complex)?;
    let g = load_lie_algebra(lie)?;
    let pmax = common.max_degree.unwrap_or(k.dim().unwrap_or(0) + g.dim());
    let cap = common.coeff_degree;
    let a = TrivialAlgebroid::new(k, g)?;
    let report = kunneth(&a, cap, pmax)?;
    let samples = koszul_samples(&TensorComplex::new(&a, cap)?, seed, 2)?;
    if !report.holds() || samples.iter().any(|s| !s.agrees) {
        return Err(Failure::Check(format!(
            "Künneth or Koszul comparison failed: {report:?}, {samples:?}"
        )));
    }
    if common.json {
        return Ok(to_json(&AlgebroidOutput {
            coeff_degree: cap,
            max_degree: pmax,
            kunneth: report,
            koszul_samples: samples,
        }));
    }
    Ok(format!(
        "{} | {} ⊗ {} = {} | Künneth {}\nKoszul samples: {}/{} agree\n",
        report.tensor,
        report.base,
        report.fiber,
        report.convolution,
        verdict(report.holds()),
        samples.iter().filter(|s| s.agrees).count(),
        samples.len()
    ))
}

fn cmd_mv(complex: &Path, cover: &Path, lie: Option<&Path>, common: &Common) -> Outcome {
    let k = load_complex(complex)?;
    let (k1, k2) = parse_cover(&read(cover)?, &k)?;
    let g = lie.map(load_lie_algebra).transpose()?;
    let pmax = common
        .max_degree
        .unwrap_or(k.dim().unwrap_or(0) + g.as_ref().map_or(0, LieAlgebra::dim));
    let setup = MVSetup::new(k, k1, k2, common.coeff_degree, g)?;
    let report = mv_exactness_report(&setup, pmax)?;
    if common.json {
        return Ok(to_json(&report));
    }
    Ok(render_mv(&report))
}

fn render_mv(report: &MVReport) -> String {
    let mut out = String::new();
    writeln!(out, "cover: {}", report.cover).unwrap();
    writeln!(out, "coefficients: {}", report.coefficients).unwrap();
    write!(out, "coefficient degree: {}", report.coeff_degree).unwrap();
    if let Some(note) = &report.truncation_obstruction {
        write!(out, " ({note}, retried)").unwrap();
    }
    out.push('\n');
    writeln!(
        out,
        "p  dims (K | K1⊕K2 | W)  rank i  rank j  i inj  ker j = im i  j surj"
    )
    .unwrap();
    for d in &report.short_sequence {
        writeln!(
            out,
            "{}  {} | {} | {}  {}  {}  {}  {}  {}",
            d.degree,
            d.dim_k,
            d.dim_middle,
            d.dim_w,
            d.rank_i,
            d.rank_j,
            d.i_injective,
            d.middle_exact,
            d.j_surjective
        )
        .unwrap();
    }
    writeln!(out, "connecting ranks: {:?}", report.connecting_ranks).unwrap();
    for n in &report.long_sequence {
        writeln!(
            out,
            "{}: dim {}, rank in {}, rank out {}, {}",
            n.node,
            n.dim,
            n.rank_in,
            n.rank_out,
            if n.exact { "exact" } else { "NOT exact" }
        )
        .unwrap();
    }
    writeln!(out, "exact: {}", report.exact).unwrap();
    out
}

fn cmd_verify(seed: u64) -> Outcome {
    let report = verify(seed)?;
    let text = to_json(&report);
    if !report.passed {
        eprint!("{text}");
        return Err(Failure::Check("verification failed".into()));
    }
    Ok(text)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Betti { complex, common } => cmd_betti(&complex, &common),
        Command::CeBetti { lie_algebra, json } => cmd_ce(&lie_algebra, json),
        Command::AlgebroidBetti {
            complex,
            lie_algebra,
            common,
            seed,
        } => cmd_algebroid(&complex, &lie_algebra, &common, seed),
        Command::MvReport {
            complex,
            cover,
            lie_algebra,
            common,
        } => cmd_mv(&complex, &cover, lie_algebra.as_deref(), &common),
        Command::Verify { seed } => cmd_verify(seed),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
