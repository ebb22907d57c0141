//! Command-line front end for the weilrep engine.
//!
//! Standard output carries machine-readable JSON only; human-readable
//! logs go to standard error. Exit codes: 0 success, 1 property failure
//! under `verify`, 2 usage errors, 3 validation errors.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use weilrep::field::PrimeField;
use weilrep::gauss::{gauss_sum_closed_form, relation_cocycle, weil_of_relation};
use weilrep::heisenberg::{group_cocycle, weil_of_group};
use weilrep::json;
use weilrep::linalg::{FpMatrix, QuadraticForm};
use weilrep::relations::{compose, random_perfect_lagrangian, random_perfect_lagrangian_with};
use weilrep::symplectic::{decompose, random_element, SymplecticSpace};
use weilrep::verify::{run_suites, trial_rng, SuiteConfig};

#[derive(Parser)]
#[command(
    name = "weilrep",
    about = "Exact engine for the Weil representation of finite symplectic groups and perfect Lagrangian relations over F_p",
    version
)]
struct Cli {
    /// Cap on operator rows p^n; larger requests are validation errors.
    #[arg(long, default_value_t = 10_000, global = true)]
    max_rows: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpaceArgs {
    /// Odd prime modulus.
    #[arg(long)]
    p: u64,
    /// Half-dimension of the symplectic space.
    #[arg(long)]
    n: usize,
    /// Seed for the deterministic random stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random symplectic group elements as JSON.
    GenSymplectic {
        #[command(flatten)]
        space: SpaceArgs,
        /// Number of elements; one object for 1, an array otherwise.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Decompose an element into a generator word.
    Decompose {
        /// Input element JSON file, or - for stdin.
        input: String,
    },
    /// Weil operator of a group element.
    WeilGroup { input: String },
    /// Cocycle c with W(g1) W(g2) = c W(g1 g2).
    CocycleGroup { g1: String, g2: String },
    /// Generate a random perfect Lagrangian relation.
    GenRelation {
        /// Odd prime modulus.
        #[arg(long)]
        p: u64,
        /// Source half-dimension.
        #[arg(long)]
        m: usize,
        /// Target half-dimension.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Requested kernel dimension (random if omitted).
        #[arg(long)]
        ker_dim: Option<usize>,
        /// Requested indefiniteness dimension (random if omitted).
        #[arg(long)]
        indef_dim: Option<usize>,
    },
    /// Compose two relations: the product S T applies T first.
    ComposeRelations { s: String, t: String },
    /// Check the perfect Lagrangian predicate and report structure dims.
    CheckLagrangian { input: String },
    /// Weil operator of a perfect Lagrangian relation.
    WeilRelation { input: String },
    /// Cocycle c with W(S) W(T) = c W(ST).
    CocycleRelation { s: String, t: String },
    /// Dense matrix of a Gaussian operator document.
    GaussianEval { input: String },
    /// Closed-form Gauss sum of a quadratic form document.
    GaussSum { input: String },
    /// Run property suites and exit nonzero on any failure.
    Verify {
        /// heisenberg | group | relations | functor | gaussian | all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
}

#[derive(Debug, Serialize)]
struct CocycleDoc {
    c: [f64; 2],
    modulus: f64,
}

#[derive(Debug, Serialize)]
struct LagrangianCheckDoc {
    p: u64,
    m: usize,
    n: usize,
    perfect_lagrangian: bool,
    dim: usize,
    ker_dim: usize,
    dom_dim: usize,
    im_dim: usize,
    indef_dim: usize,
}

#[derive(Debug, serde::Deserialize)]
struct GaussSumInputDoc {
    p: u64,
    dim_x: usize,
    dim_y: usize,
    /// Upper-triangular coefficients of Q on F_p^{dim_x + dim_y}.
    coeffs: Vec<Vec<u64>>,
}

#[derive(Debug, Serialize)]
struct GaussSumOutputDoc {
    p: u64,
    dim_x: usize,
    dim_y: usize,
    z: json::SubspaceDoc,
    c: [f64; 2],
    c_modulus: f64,
    r: Vec<Vec<u64>>,
}

fn read_text(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

fn read_doc<T: DeserializeOwned>(path: &str) -> Result<T, String> {
    serde_json::from_str(&read_text(path)?).map_err(|e| format!("parsing {path}: {e}"))
}

fn emit<T: Serialize>(doc: &T) {
    println!("{}", serde_json::to_string(doc).expect("serializable output"));
}

fn check_cap(p: u64, n: usize, max_rows: u64) -> Result<(), String> {
    let rows = (p as f64).powi(n as i32);
    if rows > max_rows as f64 {
        return Err(format!(
            "operator would have p^n = {rows} rows, above the cap {max_rows}"
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::GenSymplectic { space, count } => {
            let field = PrimeField::new(space.p).map_err(|e| e.to_string())?;
            let s = SymplecticSpace::new(field, space.n);
            let docs: Vec<json::ElementDoc> = (0..count)
                .map(|i| {
                    let mut rng = trial_rng(space.seed, i as u64);
                    json::element_to_doc(&random_element(s, &mut rng))
                })
                .collect();
            if count == 1 {
                emit(&docs[0]);
            } else {
                emit(&docs);
            }
        }
        Command::Decompose { input } => {
            let g = json::element_from_doc(&read_doc(&input)?).map_err(|e| e.to_string())?;
            let word = decompose(&g).map_err(|e| e.to_string())?;
            emit(&json::word_to_doc(g.space(), &word));
        }
        Command::WeilGroup { input } => {
            let g = json::element_from_doc(&read_doc(&input)?).map_err(|e| e.to_string())?;
            check_cap(
                g.space().field().modulus(),
                g.space().half_dim(),
                cli.max_rows,
            )?;
            let w = weil_of_group(&g).map_err(|e| e.to_string())?;
            emit(&json::operator_to_doc(&w));
        }
        Command::CocycleGroup { g1, g2 } => {
            let g1 = json::element_from_doc(&read_doc(&g1)?).map_err(|e| e.to_string())?;
            let g2 = json::element_from_doc(&read_doc(&g2)?).map_err(|e| e.to_string())?;
            check_cap(
                g1.space().field().modulus(),
                g1.space().half_dim(),
                cli.max_rows,
            )?;
            let c = group_cocycle(&g1, &g2).map_err(|e| e.to_string())?;
            emit(&CocycleDoc {
                c: [c.re, c.im],
                modulus: c.norm(),
            });
        }
        Command::GenRelation {
            p,
            m,
            n,
            seed,
            ker_dim,
            indef_dim,
        } => {
            let field = PrimeField::new(p).map_err(|e| e.to_string())?;
            let source = SymplecticSpace::new(field, m);
            let target = SymplecticSpace::new(field, n);
            let mut rng = trial_rng(seed, 0);
            let t = match (ker_dim, indef_dim) {
                (Some(k), Some(i)) => random_perfect_lagrangian_with(source, target, k, i, &mut rng),
                (None, None) => random_perfect_lagrangian(source, target, &mut rng),
                (Some(k), None) => {
                    let i = (k + n).checked_sub(m).ok_or("ker_dim too small for m, n")?;
                    random_perfect_lagrangian_with(source, target, k, i, &mut rng)
                }
                (None, Some(i)) => {
                    let k = (i + m).checked_sub(n).ok_or("indef_dim too small for m, n")?;
                    random_perfect_lagrangian_with(source, target, k, i, &mut rng)
                }
            }
            .map_err(|e| e.to_string())?;
            emit(&json::relation_to_doc(&t));
        }
        Command::ComposeRelations { s, t } => {
            let s_rel = json::relation_from_doc(&read_doc(&s)?).map_err(|e| e.to_string())?;
            let t_rel = json::relation_from_doc(&read_doc(&t)?).map_err(|e| e.to_string())?;
            let st = compose(&s_rel, &t_rel).map_err(|e| e.to_string())?;
            emit(&json::relation_to_doc(&st));
        }
        Command::CheckLagrangian { input } => {
            let t = json::relation_from_doc(&read_doc(&input)?).map_err(|e| e.to_string())?;
            let st = t.structure();
            emit(&LagrangianCheckDoc {
                p: t.source().field().modulus(),
                m: t.source().half_dim(),
                n: t.target().half_dim(),
                perfect_lagrangian: t.is_perfect_lagrangian(),
                dim: t.dim(),
                ker_dim: st.ker.dim(),
                dom_dim: st.dom.dim(),
                im_dim: st.im.dim(),
                indef_dim: st.indef.dim(),
            });
        }
        Command::WeilRelation { input } => {
            let t = json::relation_from_doc(&read_doc(&input)?).map_err(|e| e.to_string())?;
            let p = t.source().field().modulus();
            check_cap(p, t.source().half_dim().max(t.target().half_dim()), cli.max_rows)?;
            let w = weil_of_relation(&t).map_err(|e| e.to_string())?;
            emit(&json::operator_to_doc(&w));
        }
        Command::CocycleRelation { s, t } => {
            let s_rel = json::relation_from_doc(&read_doc(&s)?).map_err(|e| e.to_string())?;
            let t_rel = json::relation_from_doc(&read_doc(&t)?).map_err(|e| e.to_string())?;
            let c = relation_cocycle(&s_rel, &t_rel).map_err(|e| e.to_string())?;
            emit(&CocycleDoc {
                c: [c.re, c.im],
                modulus: c.norm(),
            });
        }
        Command::GaussianEval { input } => {
            let g = json::gaussian_from_doc(&read_doc(&input)?).map_err(|e| e.to_string())?;
            check_cap(g.field().modulus(), g.mu().max(g.nu()), cli.max_rows)?;
            let m = g.matrix().map_err(|e| e.to_string())?;
            emit(&json::operator_to_doc(&m));
        }
        Command::GaussSum { input } => {
            let doc: GaussSumInputDoc = read_doc(&input)?;
            let field = PrimeField::new(doc.p).map_err(|e| e.to_string())?;
            let coeffs = FpMatrix::from_rows(field, &doc.coeffs).map_err(|e| e.to_string())?;
            let q = QuadraticForm::new(coeffs).map_err(|e| e.to_string())?;
            if q.dim() != doc.dim_x + doc.dim_y {
                return Err("coeffs must be (dim_x + dim_y) square".into());
            }
            let res = gauss_sum_closed_form(&q, doc.dim_x).map_err(|e| e.to_string())?;
            let c = res.c.to_complex();
            emit(&GaussSumOutputDoc {
                p: doc.p,
                dim_x: doc.dim_x,
                dim_y: doc.dim_y,
                z: json::subspace_to_doc(&res.z),
                c: [c.re, c.im],
                c_modulus: res.c.modulus(),
                r: res
                    .r
                    .coeffs()
                    .row_vectors()
                    .map(|r| r.to_vec())
                    .collect(),
            });
        }
        Command::Verify {
            suite,
            p,
            n,
            seed,
            trials,
            tolerance,
        } => {
            check_cap(p, n, cli.max_rows)?;
            let cfg = SuiteConfig {
                p,
                n,
                seed,
                trials,
                tolerance,
            };
            let reports = run_suites(&suite, &cfg).map_err(|e| e.to_string())?;
            let mut all_passed = true;
            for report in &reports {
                for prop in &report.properties {
                    eprintln!(
                        "{} {}::{} ({} trials, max residual {:.3e}) {}",
                        if prop.passed { "PASS" } else { "FAIL" },
                        report.suite,
                        prop.name,
                        prop.trials,
                        prop.max_residual,
                        prop.detail,
                    );
                    all_passed &= prop.passed;
                }
            }
            emit(&reports);
            if !all_passed {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
