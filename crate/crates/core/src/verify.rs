//! Property suites over seeded randomized trials, shared by the CLI
//! `verify` subcommand and usable directly from tests.
//!
//! Each trial draws from its own ChaCha8 stream (seed fixed, stream =
//! trial index), so any failure is replayable from the printed seed and
//! trial number alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::gauss::{adjoint_law_check, gauss_sum_closed_form, gaussian_compose,
                   gaussian_from_operator, relation_from_gaussian, solve_intertwining,
                   weil_of_relation, GaussianData};
use crate::heisenberg::{group_cocycle, heisenberg_op, intertwining_residual, weil_of_group};
use crate::linalg::{FpMatrix, FpSubspace, QuadraticForm};
use crate::operator::{commutant_dimension, scalar_ratio, ComplexOperator};
use crate::relations::{compose, random_perfect_lagrangian};
use crate::symplectic::{decompose, evaluate_word, random_element, SymplecticSpace};

/// Independent per-trial random stream.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Configuration shared by all suites.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteConfig {
    pub p: u64,
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            p: 3,
            n: 1,
            seed: 0,
            trials: 50,
            tolerance: crate::operator::DEFAULT_TOL,
        }
    }
}

/// Outcome of one verified property.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub passed: bool,
    pub trials: usize,
    pub max_residual: f64,
    pub detail: String,
}

impl PropertyReport {
    fn new(name: &str, passed: bool, trials: usize, max_residual: f64, detail: String) -> Self {
        PropertyReport {
            name: name.into(),
            passed,
            trials,
            max_residual,
            detail,
        }
    }
}

/// Aggregated suite outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }
}

fn space(cfg: &SuiteConfig, n: usize) -> Result<SymplecticSpace> {
    Ok(SymplecticSpace::new(PrimeField::new(cfg.p)?, n))
}

/// Heisenberg suite: product law, unitarity, irreducibility.
pub fn heisenberg_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let s = space(cfg, cfg.n)?;
    let f = s.field();
    let mut props = Vec::new();

    let mut worst: f64 = 0.0;
    let mut unit_worst: f64 = 0.0;
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, t as u64);
        let dim = s.dim();
        let rand_vec = |rng: &mut ChaCha8Rng| -> Vec<u64> {
            use rand::Rng;
            (0..dim).map(|_| rng.random_range(0..cfg.p)).collect()
        };
        let v = rand_vec(&mut rng);
        let w = rand_vec(&mut rng);
        let av = heisenberg_op(s, &v)?;
        let aw = heisenberg_op(s, &w)?;
        let sum: Vec<u64> = v.iter().zip(&w).map(|(&a, &b)| f.add(a, b)).collect();
        let expected = f.character(f.mul(f.half(), s.form(&v, &w)?));
        let lhs = av.mul(&aw)?;
        let rhs = heisenberg_op(s, &sum)?.scale(expected);
        worst = worst.max(lhs.sub(&rhs)?.frobenius_norm() / rhs.frobenius_norm());

        let gram = av.adjoint().mul(&av)?;
        let id = ComplexOperator::identity(cfg.p, cfg.n);
        unit_worst = unit_worst.max(gram.sub(&id)?.frobenius_norm() / id.frobenius_norm());
    }
    props.push(PropertyReport::new(
        "product-law",
        worst < cfg.tolerance,
        cfg.trials,
        worst,
        format!("a(v)a(w) = Exp(half {{v,w}}) a(v+w), residual {worst:.3e}"),
    ));
    props.push(PropertyReport::new(
        "unitarity",
        unit_worst < cfg.tolerance,
        cfg.trials,
        unit_worst,
        format!("a(v)* a(v) = 1, residual {unit_worst:.3e}"),
    ));

    let ops: Vec<ComplexOperator> = (0..s.dim())
        .map(|i| {
            let mut v = vec![0u64; s.dim()];
            v[i] = 1;
            heisenberg_op(s, &v)
        })
        .collect::<Result<_>>()?;
    let cdim = commutant_dimension(&ops)?;
    props.push(PropertyReport::new(
        "irreducibility",
        cdim == 1,
        1,
        (cdim as f64 - 1.0).abs(),
        format!("commutant dimension {cdim}, expected 1"),
    ));

    Ok(SuiteReport {
        suite: "heisenberg".into(),
        config: *cfg,
        properties: props,
    })
}

/// Group suite: decomposition exactness, intertwining, cocycle modulus.
pub fn group_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let s = space(cfg, cfg.n)?;
    let mut props = Vec::new();

    let mut exact = true;
    let mut worst: f64 = 0.0;
    let mut cocycle_worst: f64 = 0.0;
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, t as u64);
        let g = random_element(s, &mut rng);
        let word = decompose(&g)?;
        exact &= evaluate_word(s, &word)? == g;

        let w = weil_of_group(&g)?;
        worst = worst.max(intertwining_residual(&g, &w)?);

        let h = random_element(s, &mut rng);
        let c = group_cocycle(&g, &h)?;
        cocycle_worst = cocycle_worst.max((c.norm() - 1.0).abs());
    }
    props.push(PropertyReport::new(
        "decomposition-exactness",
        exact,
        cfg.trials,
        if exact { 0.0 } else { 1.0 },
        "generator word reproduces the element entry-wise".into(),
    ));
    props.push(PropertyReport::new(
        "intertwining",
        worst < 1e-9,
        cfg.trials,
        worst,
        format!("a(vg) = W(g)^-1 a(v) W(g), residual {worst:.3e}"),
    ));
    props.push(PropertyReport::new(
        "cocycle-modulus",
        cocycle_worst < 1e-9,
        cfg.trials,
        cocycle_worst,
        format!("|c(g1,g2)| = 1, residual {cocycle_worst:.3e}"),
    ));

    Ok(SuiteReport {
        suite: "group".into(),
        config: *cfg,
        properties: props,
    })
}

/// Relations suite: composition closure, dualities, associativity.
pub fn relations_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut props = Vec::new();
    let max_n = cfg.n.max(1);
    let spaces: Vec<SymplecticSpace> = (0..=max_n)
        .map(|k| space(cfg, k))
        .collect::<Result<_>>()?;

    let mut closure = true;
    let mut dualities = true;
    let mut assoc = true;
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, t as u64);
        use rand::Rng;
        let sm = spaces[rng.random_range(0..spaces.len())];
        let sn = spaces[rng.random_range(0..spaces.len())];
        let sk = spaces[rng.random_range(0..spaces.len())];
        let t_rel = random_perfect_lagrangian(sm, sn, &mut rng)?;
        let s_rel = random_perfect_lagrangian(sn, sk, &mut rng)?;
        let st = compose(&s_rel, &t_rel)?;
        closure &= st.is_perfect_lagrangian();

        for rel in [&t_rel, &s_rel, &st] {
            let stx = rel.structure();
            let src = rel.source();
            let tgt = rel.target();
            dualities &= src.lozenge(&stx.dom)? == stx.ker
                && src.lozenge(&stx.ker)? == stx.dom
                && tgt.lozenge(&stx.im)? == stx.indef
                && tgt.lozenge(&stx.indef)? == stx.im;
        }

        let r_rel = random_perfect_lagrangian(sk, sm, &mut rng)?;
        let left = compose(&r_rel, &compose(&s_rel, &t_rel)?)?;
        let right = compose(&compose(&r_rel, &s_rel)?, &t_rel)?;
        assoc &= left == right;
    }
    props.push(PropertyReport::new(
        "composition-closure",
        closure,
        cfg.trials,
        if closure { 0.0 } else { 1.0 },
        "perfect Lagrangian relations compose to perfect Lagrangian".into(),
    ));
    props.push(PropertyReport::new(
        "structure-dualities",
        dualities,
        cfg.trials,
        if dualities { 0.0 } else { 1.0 },
        "(dom)^loz = ker, (im)^loz = indef and converses".into(),
    ));
    props.push(PropertyReport::new(
        "associativity",
        assoc,
        cfg.trials,
        if assoc { 0.0 } else { 1.0 },
        "(R S) T = R (S T) as canonical subspaces".into(),
    ));

    Ok(SuiteReport {
        suite: "relations".into(),
        config: *cfg,
        properties: props,
    })
}

/// Functor suite: solver uniqueness, composition cocycle, adjoint law.
pub fn functor_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut props = Vec::new();
    let max_n = cfg.n.max(1);
    let spaces: Vec<SymplecticSpace> = (0..=max_n)
        .map(|k| space(cfg, k))
        .collect::<Result<_>>()?;

    let mut nullity_ok = true;
    let mut min_gap = f64::INFINITY;
    let mut cocycle_ok = true;
    let mut worst_prop: f64 = 0.0;
    let mut adjoint_ok = true;
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, t as u64);
        use rand::Rng;
        let sm = spaces[rng.random_range(0..spaces.len())];
        let sn = spaces[rng.random_range(0..spaces.len())];
        let sk = spaces[rng.random_range(0..spaces.len())];
        let t_rel = random_perfect_lagrangian(sm, sn, &mut rng)?;
        let s_rel = random_perfect_lagrangian(sn, sk, &mut rng)?;

        let sol_t = solve_intertwining(&t_rel)?;
        nullity_ok &= sol_t.nullity == 1;
        min_gap = min_gap.min(sol_t.spectral_gap);

        let st = compose(&s_rel, &t_rel)?;
        let prod = weil_of_relation(&s_rel)?.mul(&sol_t.operator)?;
        let wst = weil_of_relation(&st)?;
        match scalar_ratio(&prod, &wst, cfg.tolerance) {
            Ok(c) => {
                cocycle_ok &= c.norm() > 0.0;
                let residual = prod.sub(&wst.scale(c))?.frobenius_norm()
                    / prod.frobenius_norm().max(f64::MIN_POSITIVE);
                worst_prop = worst_prop.max(residual);
            }
            Err(Error::NotProportional { residual }) => {
                cocycle_ok = false;
                worst_prop = worst_prop.max(residual);
            }
            Err(e) => return Err(e),
        }

        adjoint_ok &= adjoint_law_check(&t_rel)?;
    }
    props.push(PropertyReport::new(
        "solver-uniqueness",
        nullity_ok && min_gap >= 1e4,
        cfg.trials,
        if min_gap.is_finite() { 1.0 / min_gap } else { 0.0 },
        format!("nullity 1 with spectral gap >= 1e4 (min gap {min_gap:.3e})"),
    ));
    props.push(PropertyReport::new(
        "composition-cocycle",
        cocycle_ok && worst_prop < cfg.tolerance,
        cfg.trials,
        worst_prop,
        format!("W(S) W(T) = c W(ST), c != 0, residual {worst_prop:.3e}"),
    ));
    props.push(PropertyReport::new(
        "adjoint-law",
        adjoint_ok,
        cfg.trials,
        if adjoint_ok { 0.0 } else { 1.0 },
        "W(T)* proportional to W(T^square)".into(),
    ));

    Ok(SuiteReport {
        suite: "functor".into(),
        config: *cfg,
        properties: props,
    })
}

/// Gaussian suite: closed-form sums vs direct summation, symbolic
/// composition vs the dense product, and the operator round trip.
pub fn gaussian_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let field = PrimeField::new(cfg.p)?;
    let mut props = Vec::new();
    use rand::Rng;

    // closed-form Gauss sums against direct summation
    let mut worst_sum: f64 = 0.0;
    let mut codim_ok = true;
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, t as u64);
        let dim_x = rng.random_range(0..=3usize);
        let dim_y = rng.random_range(0..=2usize);
        let mut coeffs = FpMatrix::zeros(field, dim_x + dim_y, dim_x + dim_y);
        for i in 0..dim_x + dim_y {
            for j in i..dim_x + dim_y {
                coeffs.set(i, j, rng.random_range(0..cfg.p));
            }
        }
        let q = QuadraticForm::new(coeffs)?;
        let res = gauss_sum_closed_form(&q, dim_x)?;
        codim_ok &= dim_y - res.z.dim() <= dim_x;
        for y in crate::operator::points(cfg.p, dim_y) {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for x in crate::operator::points(cfg.p, dim_x) {
                let mut v = x.clone();
                v.extend_from_slice(&y);
                acc += field.character(q.eval(&v)?);
            }
            let predicted = if res.z.contains_vector(&y) {
                res.c.to_complex() * field.character(res.r.eval(&y)?)
            } else {
                num_complex::Complex64::new(0.0, 0.0)
            };
            worst_sum = worst_sum.max((acc - predicted).norm() / res.c.modulus().max(1.0));
        }
    }
    props.push(PropertyReport::new(
        "gauss-sum-closed-form",
        worst_sum < 1e-10 && codim_ok,
        cfg.trials,
        worst_sum,
        format!("closed form matches direct summation, residual {worst_sum:.3e}"),
    ));

    // symbolic composition against the dense product
    let mut worst_comp: f64 = 0.0;
    let random_gaussian = |mu: usize, nu: usize, rng: &mut ChaCha8Rng| -> Result<GaussianData> {
        let rows: Vec<Vec<u64>> = (0..rng.random_range(0..=mu + nu))
            .map(|_| (0..mu + nu).map(|_| rng.random_range(0..cfg.p)).collect())
            .collect();
        let h = FpSubspace::from_rows(field, mu + nu, &rows)?;
        let mut coeffs = FpMatrix::zeros(field, mu + nu, mu + nu);
        for i in 0..mu + nu {
            for j in i..mu + nu {
                coeffs.set(i, j, rng.random_range(0..cfg.p));
            }
        }
        GaussianData::new(
            mu,
            nu,
            h,
            QuadraticForm::new(coeffs)?,
            num_complex::Complex64::new(1.0, 0.0),
        )
    };
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, 1_000_000 + t as u64);
        let mu = rng.random_range(0..=cfg.n);
        let nu = rng.random_range(0..=cfg.n);
        let kappa = rng.random_range(0..=cfg.n);
        let b = random_gaussian(mu, nu, &mut rng)?;
        let a = random_gaussian(nu, kappa, &mut rng)?;
        let composite = gaussian_compose(&a, &b)?;
        let dense = a.matrix()?.mul(&b.matrix()?)?;
        let diff = composite.matrix()?.sub(&dense)?.frobenius_norm();
        worst_comp = worst_comp.max(diff / dense.frobenius_norm().max(1.0));
    }
    props.push(PropertyReport::new(
        "gaussian-composition",
        worst_comp < 1e-9,
        cfg.trials,
        worst_comp,
        format!("matrix(compose(a,b)) = matrix(a) matrix(b), residual {worst_comp:.3e}"),
    ));

    // Weil operators are Gaussian and the dictionary inverts them
    let mut worst_round: f64 = 0.0;
    let mut relation_ok = true;
    let round_trials = cfg.trials.min(100);
    for t in 0..round_trials {
        let mut rng = trial_rng(cfg.seed, 2_000_000 + t as u64);
        let sm = SymplecticSpace::new(field, rng.random_range(0..=cfg.n.max(1)));
        let sn = SymplecticSpace::new(field, rng.random_range(0..=cfg.n.max(1)));
        let t_rel = random_perfect_lagrangian(sm, sn, &mut rng)?;
        let w = weil_of_relation(&t_rel)?;
        let g = gaussian_from_operator(&w)?;
        let back = g.matrix()?;
        let c = scalar_ratio(&back, &w, cfg.tolerance)?;
        let residual = back.sub(&w.scale(c))?.frobenius_norm() / back.frobenius_norm();
        worst_round = worst_round.max(residual);
        relation_ok &= relation_from_gaussian(&g)? == t_rel;
    }
    props.push(PropertyReport::new(
        "weil-gaussian-round-trip",
        worst_round < 1e-9 && relation_ok,
        round_trials,
        worst_round,
        format!("extraction reproduces W(T) and inverts to T, residual {worst_round:.3e}"),
    ));

    Ok(SuiteReport {
        suite: "gaussian".into(),
        config: *cfg,
        properties: props,
    })
}

/// Runs a suite by name; "all" runs every suite in order.
pub fn run_suites(which: &str, cfg: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    let all = which == "all";
    if all || which == "heisenberg" {
        out.push(heisenberg_suite(cfg)?);
    }
    if all || which == "group" {
        out.push(group_suite(cfg)?);
    }
    if all || which == "relations" {
        out.push(relations_suite(cfg)?);
    }
    if all || which == "functor" {
        out.push(functor_suite(cfg)?);
    }
    if all || which == "gaussian" {
        out.push(gaussian_suite(cfg)?);
    }
    if out.is_empty() {
        return Err(Error::invalid(
            "suite",
            format!("unknown suite '{which}'; expected heisenberg | group | relations | functor | gaussian | all"),
        ));
    }
    Ok(out)
}
