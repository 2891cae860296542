use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use segre_syz::bott::{bwb_cohomology, schur_dim, BottResult};
use segre_syz::koszul::DEFAULT_BUDGET;
use segre_syz::lattice::standard_basis_indices;
use segre_syz::pfunc::{p_function, vanishing_bound};
use segre_syz::witness::{verify_witness, CycleSpec};
use segre_syz::{ArtinianRing, DimVector, Error, KoszulComplex, Monomial, MultiIndex, RankBackend, TableOptions};

mod selftest;

/// Syzygies of Segre embeddings: Betti tables, vanishing bounds, witnesses.
#[derive(Parser, Debug)]
#[command(name = "segre", version)]
struct Cli {
    /// Worker threads for parallel cell computation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    M2,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Backend {
    Exact,
    Modular,
}

impl From<Backend> for RankBackend {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Exact => RankBackend::Exact,
            Backend::Modular => RankBackend::Modular,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti table of the Segre embedding with dimension vector A.
    Betti {
        /// Comma-separated dimensions, e.g. 2,2,1.
        dims: String,
        #[arg(long, value_enum, default_value = "m2")]
        format: Format,
        #[arg(long)]
        pmax: Option<usize>,
        #[arg(long)]
        qmax: Option<usize>,
        #[arg(long, value_enum, default_value = "modular")]
        rank_backend: Backend,
        /// Cap on potential matrix entries per differential.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// The vanishing bound P(a;q) and P(a;q) - q for q up to the regularity.
    Pfunc {
        dims: String,
        #[arg(long, value_enum, default_value = "m2")]
        format: Format,
    },
    /// Standard basis of the Artinian reduction, by degree.
    Basis { dims: String },
    /// Normal form of a monomial, given as space-separated points.
    Straighten {
        #[arg(long)]
        dims: String,
        monomial: String,
    },
    /// Builds and checks an explicit nonzero class in K_{p,q}.
    Witness {
        dims: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Cohomology of Q^d ⊗ S_alpha R on P^{m-1}.
    Bott {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// Weakly decreasing, m - 1 entries (default all zero).
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Recomputes the published tables and runs the property checks.
    Selftest,
}

/// Parses a dimension vector, telling the user if it had to be normalized.
fn dims_arg(raw: &str) -> anyhow::Result<(DimVector, Vec<u32>)> {
    let entries: Vec<u32> = raw
        .split(',')
        .map(|t| t.trim().parse::<u32>().with_context(|| format!("bad dimension {t:?}")))
        .collect::<anyhow::Result<_>>()?;
    let (a, changed) = DimVector::normalize(&entries)?;
    if changed {
        eprintln!("note: using dimension vector ({a}); only the multiset of nonzero entries matters");
    }
    Ok((a, entries))
}

/// Rewrites a point given in the user's coordinate order into the order of
/// the normalized dimension vector.
fn reorder_point(raw_dims: &[u32], point: &MultiIndex) -> anyhow::Result<MultiIndex> {
    let c = point.coords();
    if c.len() != raw_dims.len() {
        bail!("point {point} has {} coordinates, expected {}", c.len(), raw_dims.len());
    }
    let mut order: Vec<usize> = (0..raw_dims.len()).filter(|&i| raw_dims[i] > 0).collect();
    order.sort_by(|&i, &j| raw_dims[j].cmp(&raw_dims[i]));
    if (0..raw_dims.len()).any(|i| raw_dims[i] == 0 && c[i] != 0) {
        bail!("point {point} is outside the poset");
    }
    Ok(MultiIndex::new(order.iter().map(|&i| c[i]).collect()))
}

fn render_ext(x: segre_syz::ExtNat) -> serde_json::Value {
    match x.finite() {
        Some(v) => serde_json::Value::from(v as u64),
        None => serde_json::Value::Null,
    }
}

fn run(cli: Cli, out: &mut impl Write) -> anyhow::Result<()> {
    match cli.command {
        Command::Betti { dims, format, pmax, qmax, rank_backend, budget } => {
            let (a, _) = dims_arg(&dims)?;
            let k = KoszulComplex::new(a)?.with_budget(budget);
            let t = k.betti_table(&TableOptions { pmax, qmax, backend: rank_backend.into() })?;
            match format {
                Format::M2 => write!(out, "{}", t.to_m2())?,
                Format::Json => writeln!(out, "{}", t.to_json())?,
            }
        }
        Command::Pfunc { dims, format } => {
            let (a, _) = dims_arg(&dims)?;
            let qs: Vec<usize> = (0..=a.regularity() + 1).collect();
            let p: Vec<_> = qs.iter().map(|&q| p_function(&a, q)).collect();
            let b: Vec<_> = qs.iter().map(|&q| vanishing_bound(&a, q)).collect();
            match format {
                Format::M2 => {
                    let row = |xs: Vec<String>| xs.join(" ");
                    writeln!(out, "q       : {}", row(qs.iter().map(usize::to_string).collect()))?;
                    writeln!(out, "P(a;q)  : {}", row(p.iter().map(ToString::to_string).collect()))?;
                    writeln!(out, "P(a;q)-q: {}", row(b.iter().map(ToString::to_string).collect()))?;
                }
                Format::Json => {
                    let v = serde_json::json!({
                        "a": a,
                        "q": qs,
                        "p": p.into_iter().map(render_ext).collect::<Vec<_>>(),
                        "bound": b.into_iter().map(render_ext).collect::<Vec<_>>(),
                    });
                    writeln!(out, "{v}")?;
                }
            }
        }
        Command::Basis { dims } => {
            let (a, _) = dims_arg(&dims)?;
            for (q, elems) in standard_basis_indices(&a) {
                writeln!(out, "degree {q}: {} elements", elems.len())?;
                for (path, pts) in elems {
                    writeln!(out, "  {path}  {}", Monomial::new(pts))?;
                }
            }
        }
        Command::Straighten { dims, monomial } => {
            let (a, raw) = dims_arg(&dims)?;
            let factors = monomial
                .split_whitespace()
                .filter(|t| *t != "1")
                .map(|t| {
                    let v: MultiIndex = t.parse()?;
                    let v = reorder_point(&raw, &v)?;
                    a.check(&v)?;
                    Ok(v)
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let ring = ArtinianRing::new(a);
            writeln!(out, "{}", ring.straighten(&Monomial::new(factors))?)?;
        }
        Command::Witness { dims, p, q, budget } => {
            let (a, _) = dims_arg(&dims)?;
            let spec = if q == 1 {
                CycleSpec::row_one(&a, p)?
            } else if a.entries().iter().all(|&x| x == 1) {
                CycleSpec::cube(a.len(), q, p)?
            } else {
                bail!("explicit witnesses exist for q = 1, or for q >= 2 when all dimensions are 1");
            };
            let k = KoszulComplex::new(a)?.with_budget(budget);
            let report = verify_witness(&k, &spec)?;
            writeln!(out, "{spec}")?;
            writeln!(out, "is_cycle: {}", report.is_cycle)?;
            writeln!(out, "is_boundary: {}", report.is_boundary)?;
            match k.kpq_dim(p, q, RankBackend::Modular) {
                Ok(d) => writeln!(out, "dim K_{{{p},{q}}}: {d}")?,
                Err(Error::BudgetExceeded { .. }) => writeln!(out, "dim K_{{{p},{q}}}: skipped (over budget)")?,
                Err(e) => return Err(e.into()),
            }
        }
        Command::Bott { m, d, alpha } => {
            if m == 0 {
                bail!("--m must be at least 1");
            }
            let alpha: Vec<i64> = match alpha {
                Some(s) if !s.trim().is_empty() => s
                    .split(',')
                    .map(|t| t.trim().parse::<i64>().with_context(|| format!("bad entry {t:?}")))
                    .collect::<anyhow::Result<_>>()?,
                _ => vec![0; m - 1],
            };
            match bwb_cohomology(d, &alpha, m)? {
                BottResult::Singular => writeln!(out, "SINGULAR")?,
                r @ BottResult::Regular { .. } => {
                    let BottResult::Regular { dominant, .. } = &r else { unreachable!() };
                    writeln!(out, "{r}, dim = {}", schur_dim(dominant, m)?)?;
                }
            }
        }
        Command::Selftest => {
            if !selftest::run(out)? {
                return Err(anyhow!(selftest::Failed));
            }
        }
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. } | Error::StraighteningLoop(_)) => 1,
        _ if e.is::<selftest::Failed>() => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
