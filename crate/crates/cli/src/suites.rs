//! Orchestration of the check suites over a chart specification.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use chiral_core::algebroid::{matrix_identities, trace_symmetry, verify_axioms, Axiom};
use chiral_core::charts::BundleKind;
use chiral_core::cocycles::{a_of_triple, verify_cocycles};
use chiral_core::envelope::{
    log_derivative_action, verify_generator_gradings, verify_susy, Envelope, W1Element,
};
use chiral_core::kernel::parse_with_names;
use chiral_core::sample::{PoolConfig, Sampler};
use chiral_core::{Frame, FrameChange, Outcome, SuperCovector, SuperScalar, SuperVector, VertexAlgebroid};

use crate::report::{CheckReport, Record};
use crate::spec::ChartSpec;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Axioms,
    Cocycles,
    Susy,
    Gradings,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Axioms, Suite::Cocycles, Suite::Susy, Suite::Gradings];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Cocycles => "cocycles",
            Suite::Susy => "susy",
            Suite::Gradings => "gradings",
        }
    }

    /// Comma-separated suite names, or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>, CliError> {
        if s.trim() == "all" {
            return Ok(Self::ALL.to_vec());
        }
        let mut out: Vec<Suite> = s.split(',').map(|p| p.trim().parse()).collect::<Result<_, _>>()?;
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(CliError::Invalid("no suites selected".into()));
        }
        Ok(out)
    }
}

impl FromStr for Suite {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| CliError::Invalid(format!("unknown suite '{s}' (expected axioms, cocycles, susy, gradings)")))
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub pool: PoolConfig,
    pub timings: bool,
    /// Perturb `c` of the base algebroid by a skew term built from this
    /// function, as a negative control.
    pub corrupt_c: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            samples: 200,
            pool: PoolConfig::default(),
            timings: false,
            corrupt_c: None,
        }
    }
}

pub const SUSY_SKIP: &str = "requires cotangent natural frames";

/// Combine outcomes sharing an id.
fn merge(outcomes: impl IntoIterator<Item = Outcome>) -> Vec<Outcome> {
    let mut by_id: BTreeMap<String, Outcome> = BTreeMap::new();
    for o in outcomes {
        match by_id.get_mut(&o.id) {
            Some(acc) => {
                acc.samples += o.samples;
                acc.failures += o.failures;
                if acc.witness.is_none() {
                    acc.witness = o.witness;
                }
            }
            None => {
                by_id.insert(o.id.clone(), o);
            }
        }
    }
    by_id.into_values().collect()
}

struct Ctx<'a> {
    spec: &'a ChartSpec,
    frames: Vec<Frame>,
    cfg: &'a RunConfig,
}

fn timed<T>(cfg: &RunConfig, f: impl FnOnce() -> T) -> (T, Option<u64>) {
    let t = Instant::now();
    let v = f();
    (v, cfg.timings.then(|| t.elapsed().as_millis() as u64))
}

pub const NO_INPUTS: &str = "no applicable inputs in this chart system";

fn records(suite: &str, outcomes: Vec<Outcome>, ms: Option<u64>) -> Vec<Record> {
    outcomes
        .iter()
        .map(|o| {
            if o.samples == 0 {
                return Record::skipped(suite, &o.id, &o.anchor, NO_INPUTS);
            }
            Record {
                wall_ms: ms,
                ..Record::from_outcome(suite, o)
            }
        })
        .collect()
}

fn residual_outcome(id: &str, anchor: &str, residuals: Vec<(String, chiral_core::RatFunc)>) -> Outcome {
    let mut o = Outcome::new(id, anchor);
    for (name, r) in residuals {
        o.record_residual(&r, r.is_zero(), || vec![("identity".to_string(), name)]);
    }
    o
}

fn run_axioms(ctx: &Ctx) -> Result<Vec<Record>, CliError> {
    let base = ctx.frames[0].clone();
    let alg = match &ctx.cfg.corrupt_c {
        Some(expr) => {
            let f = parse_with_names(expr, &ctx.spec.system.vars)?;
            VertexAlgebroid::with_corrupted_c(base.clone(), SuperScalar::from_rf(base.ambient(), f))
        }
        None => VertexAlgebroid::new(base),
    };
    let cfg = ctx.cfg;
    let mut out = Vec::new();
    std::thread::scope(|s| {
        let handles: Vec<_> = Axiom::ALL
            .iter()
            .map(|&ax| {
                let alg = &alg;
                s.spawn(move || timed(cfg, || verify_axioms(alg, cfg.seed, cfg.samples, cfg.pool, &[ax])))
            })
            .collect();
        for h in handles {
            let (o, ms) = h.join().expect("axiom worker");
            out.extend(records("axioms", o, ms));
        }
    });
    let (changes, ms) = timed(cfg, || -> Result<Vec<Outcome>, CliError> {
        let mut ids = Vec::new();
        let mut sym = Vec::new();
        for (i, from) in ctx.frames.iter().enumerate() {
            for to in &ctx.frames[i + 1..] {
                let fc = FrameChange::between(from, to)?;
                let tag = |n: &str| format!("{} -> {}: {n}", from.id(), to.id());
                ids.extend(matrix_identities(&fc)?.into_iter().map(|(n, r)| (tag(n), r)));
                sym.extend(trace_symmetry(&fc)?.into_iter().map(|(n, r)| (tag(n), r)));
            }
        }
        Ok(vec![
            residual_outcome("frame.matrix-identities", "Jacobian identities of a holonomic change", ids),
            residual_outcome("frame.trace-symmetry", "trace symmetries of a holonomic change", sym),
        ])
    });
    out.extend(records("axioms", changes?, ms));
    Ok(out)
}

fn run_cocycles(ctx: &Ctx) -> Result<Vec<Record>, CliError> {
    let (outcomes, ms) = timed(ctx.cfg, || verify_cocycles(&ctx.spec.system, &ctx.spec.bundle));
    let mut out = records("cocycles", outcomes?, ms);
    if !ctx.spec.triples.is_empty() {
        let mut o = Outcome::new("cocycle.designated-triples", "a_012 two paths on designated triples");
        for t in &ctx.spec.triples {
            let f = |k: usize| &ctx.frames[t[k]];
            let names = || vec![("triple".to_string(), format!("{} {} {}", f(0).id(), f(1).id(), f(2).id()))];
            match a_of_triple(f(0), f(1), f(2)) {
                Ok(_) => o.record(true, || unreachable!()),
                Err(e) => o.record_residual(&e, false, names),
            }
        }
        out.push(Record::from_outcome("cocycles", &o));
    }
    Ok(out)
}

fn run_susy(ctx: &Ctx) -> Result<Vec<Record>, CliError> {
    if !matches!(ctx.spec.bundle.kind, BundleKind::Cotangent) {
        return Ok(vec![Record::skipped("susy", "susy", "Q, J, G, L transformation laws", SUSY_SKIP)]);
    }
    let (outcomes, ms) = timed(ctx.cfg, || -> Result<Vec<Outcome>, CliError> {
        let mut all = Vec::new();
        for from in &ctx.frames {
            for to in &ctx.frames {
                all.extend(verify_susy(from, to)?);
            }
        }
        Ok(merge(all))
    });
    Ok(records("susy", outcomes?, ms))
}

fn run_gradings(ctx: &Ctx) -> Result<Vec<Record>, CliError> {
    let cfg = ctx.cfg;
    let (outcomes, ms) = timed(cfg, || -> Result<Vec<Outcome>, CliError> {
        let mut all = Vec::new();
        let amb = ctx.frames[0].ambient();
        let mut s = Sampler::new(cfg.seed ^ 0x6772_6164, amb, cfg.pool);
        for f in &ctx.frames {
            let env = Envelope::new(f.clone())?;
            let mut fns = vec![s.base()];
            for _ in 0..2 {
                let p = s.parity();
                fns.push(s.scalar(p));
            }
            fns.retain(|a| !a.is_zero());
            all.extend(verify_generator_gradings(&env, &monomial_terms(&fns))?);
        }
        let env = Envelope::new(ctx.frames[0].clone())?;
        let mut lemma = Outcome::new("grading.log-derivative", "(a^-1 da)_(0) kills weight <= 1");
        let x = SuperScalar::coord(amb, 0);
        let one = SuperScalar::one(amb);
        for a in [x.clone(), &x * &x, &one + &x] {
            for _ in 0..cfg.samples.div_ceil(3) {
                let z = W1Element {
                    scalar: s.any_scalar(),
                    vector: s.any_vector(),
                    covector: s.any_covector(),
                };
                let r = log_derivative_action(&env, &a, &z)?;
                lemma.record_residual(&r, r.is_zero(), || {
                    vec![("a".to_string(), a.to_string()), ("x".to_string(), z.to_string())]
                });
            }
        }
        all.push(lemma);
        let mut parity = Outcome::new("grading.charge-parity", "F = parity mod 2");
        for _ in 0..cfg.samples {
            let mask = s.gen_range(0..1 << amb.m) as u32;
            let k = s.gen_range(0..amb.rank());
            let c = SuperScalar::monomial(amb, mask, s.polynomial());
            let e = match s.gen_range(0..3) {
                0 => W1Element::scalar(c),
                1 => W1Element::vector(SuperVector::single(amb, k, c)),
                _ => W1Element::covector(SuperCovector::single(amb, k, c)),
            };
            let f = e.fermionic_charge()?;
            let p = e.parity()?;
            let ok = match (f, p) {
                (Some(f), Some(p)) => f.rem_euclid(2) as u8 == p,
                (None, None) => true,
                _ => false,
            };
            parity.record(ok, || chiral_core::Witness {
                inputs: vec![("x".to_string(), e.to_string())],
                residual: format!("charge {f:?}, parity {p:?}"),
            });
        }
        all.push(parity);
        Ok(merge(all))
    });
    Ok(records("gradings", outcomes?, ms))
}

/// Split functions into single-monomial terms.
fn monomial_terms(fns: &[SuperScalar]) -> Vec<SuperScalar> {
    fns.iter()
        .flat_map(|a| {
            a.terms()
                .map(|(m, f)| SuperScalar::monomial(a.ambient(), m, f.clone()))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Run the selected suites; errors inside a check become failed records.
pub fn run_suite(spec: &ChartSpec, suites: &[Suite], cfg: &RunConfig) -> Result<CheckReport, CliError> {
    if suites.is_empty() {
        return Err(CliError::Invalid("no suites selected".into()));
    }
    let frames = spec.system.frames(&spec.bundle)?;
    let ctx = Ctx { spec, frames, cfg };
    let mut recs = Vec::new();
    std::thread::scope(|s| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&suite| {
                let ctx = &ctx;
                s.spawn(move || {
                    let r = match suite {
                        Suite::Axioms => run_axioms(ctx),
                        Suite::Cocycles => run_cocycles(ctx),
                        Suite::Susy => run_susy(ctx),
                        Suite::Gradings => run_gradings(ctx),
                    };
                    r.unwrap_or_else(|e| vec![Record::errored(suite.name(), suite.name(), "suite", &e)])
                })
            })
            .collect();
        for h in handles {
            recs.extend(h.join().expect("suite worker"));
        }
    });
    Ok(CheckReport::new(
        &spec.name,
        spec.bundle.name(),
        cfg.seed,
        cfg.samples,
        suites.iter().map(|s| s.name().to_string()).collect(),
        recs,
    ))
}
