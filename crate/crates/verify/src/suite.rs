//! Property table, trial context and the suite runner.

use std::collections::BTreeMap;
use std::fmt::{self, Display};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use supcone::{
    float_tolerance, AdaptedProcess, Backend, Band, CondExp, ExtVec, Filtration, LatVec, ProjSeq,
    Rational, Scalar, VecSeq,
};

use crate::error::{VerifyError, VerifyResult};
use crate::generate::{generate_model, SizeBounds};
use crate::model::{Model, ModelSpec, ProcessKind};
use crate::mutation::Mutation;
use crate::report::{Counterexample, Counts, SuiteReport};
use crate::suites;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ConeAxioms,
    BandsDecomposition,
    Multiplication,
    Convergence,
    Expectation,
    BorelCantelli,
    Martingales,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::ConeAxioms,
        Suite::BandsDecomposition,
        Suite::Multiplication,
        Suite::Convergence,
        Suite::Expectation,
        Suite::BorelCantelli,
        Suite::Martingales,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ConeAxioms => "cone-axioms",
            Suite::BandsDecomposition => "bands-decomposition",
            Suite::Multiplication => "multiplication",
            Suite::Convergence => "convergence",
            Suite::Expectation => "expectation",
            Suite::BorelCantelli => "borel-cantelli",
            Suite::Martingales => "martingales",
            Suite::All => "all",
        }
    }

    pub fn contains(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which backends a property is meaningful on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Needs {
    Any,
    /// Exact equalities that rounding would break.
    Exact,
    /// Transcendental functions.
    Float,
}

/// Two sides of a failed identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stop {
    Skip(String),
    Fail(Failure),
}

impl From<supcone::Error> for Stop {
    fn from(e: supcone::Error) -> Self {
        Stop::Fail(Failure {
            identity: "kernel call succeeds".into(),
            lhs: format!("error: {e}"),
            rhs: "a value".into(),
        })
    }
}

pub type Step = Result<(), Stop>;

/// Values compared by the properties.
pub trait Agree: Display {
    fn agree(&self, other: &Self, tol: f64) -> bool;
}

impl<S: Scalar> Agree for ExtVec<S> {
    fn agree(&self, other: &Self, tol: f64) -> bool {
        self.close_to(other, tol)
    }
}

impl<S: Scalar> Agree for LatVec<S> {
    fn agree(&self, other: &Self, tol: f64) -> bool {
        self.close_to(other, tol)
    }
}

impl Agree for Band {
    fn agree(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl Agree for bool {
    fn agree(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

pub struct Property<S> {
    pub suite: Suite,
    pub name: &'static str,
    pub needs: Needs,
    pub check: fn(&mut Ctx<S>) -> Step,
}

impl<S> Property<S> {
    pub fn id(&self) -> String {
        format!("{}/{}", self.suite, self.name)
    }
}

/// Per-trial state: the model, a property-specific random stream and the
/// inputs drawn so far.
pub struct Ctx<'a, S> {
    pub model: &'a Model<S>,
    rng: ChaCha8Rng,
    mutation: Option<Mutation>,
    inputs: Vec<(String, String)>,
    tol: f64,
}

fn stream_of(id: &str) -> u64 {
    // FNV-1a: stable across platforms and releases.
    id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

impl<'a, S: Scalar> Ctx<'a, S> {
    pub fn new(model: &'a Model<S>, trial_seed: u64, property: &str, mutation: Option<Mutation>) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        rng.set_stream(stream_of(property));
        Self {
            model,
            rng,
            mutation,
            inputs: Vec::new(),
            tol: float_tolerance(),
        }
    }

    pub fn dim(&self) -> usize {
        self.model.space.atom_count()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn mutated(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn record(&mut self, name: &str, value: impl Display) {
        self.inputs.push((name.to_string(), value.to_string()));
    }

    pub fn inputs(&self) -> &[(String, String)] {
        &self.inputs
    }

    fn choose<'m, T>(&mut self, what: &str, items: Vec<(&'m String, &'m T)>) -> Result<(&'m String, &'m T), Stop> {
        if items.is_empty() {
            return Err(Stop::Skip(format!("model has no suitable {what}")));
        }
        let i = self.rng.gen_range(0..items.len());
        Ok(items[i])
    }

    /// A named model vector.
    pub fn ext(&mut self, label: &str) -> Result<ExtVec<S>, Stop> {
        let model = self.model;
        let (name, v) = self.choose("vector", model.vectors.iter().collect())?;
        self.record(label, name);
        Ok(v.clone())
    }

    /// The positive part of a named model vector.
    pub fn nonneg(&mut self, label: &str) -> Result<ExtVec<S>, Stop> {
        let model = self.model;
        let (name, v) = self.choose("vector", model.vectors.iter().collect())?;
        self.record(label, format!("pos({name})"));
        Ok(v.pos_part())
    }

    /// A named finite model vector.
    pub fn lat(&mut self, label: &str) -> Result<LatVec<S>, Stop> {
        let model = self.model;
        let finite = model.vectors.iter().filter(|(_, v)| v.is_finite()).collect();
        let (name, v) = self.choose("finite vector", finite)?;
        self.record(label, name);
        Ok(v.to_lat().expect("filtered to finite vectors"))
    }

    pub fn nonneg_lat(&mut self, label: &str) -> Result<LatVec<S>, Stop> {
        let model = self.model;
        let finite = model.vectors.iter().filter(|(_, v)| v.is_finite()).collect();
        let (name, v) = self.choose("finite vector", finite)?;
        self.record(label, format!("pos({name})"));
        Ok(v.to_lat().expect("filtered to finite vectors").pos_part())
    }

    /// A random band.
    pub fn band(&mut self, label: &str) -> Band {
        let n = self.dim();
        let b = Band::from_mask((0..n).map(|_| self.rng.gen_bool(0.5)).collect());
        self.record(label, &b);
        b
    }

    pub fn int(&mut self, label: &str, lo: i64, hi: i64) -> i64 {
        let k = self.rng.gen_range(lo..=hi);
        self.record(label, k);
        k
    }

    pub fn seq(&mut self, label: &str, pred: impl Fn(&VecSeq<S>) -> bool) -> Result<VecSeq<S>, Stop> {
        let model = self.model;
        let items = model.sequences.iter().filter(|(_, s)| pred(s)).collect();
        let (name, s) = self.choose("sequence", items)?;
        self.record(label, name);
        Ok(s.clone())
    }

    pub fn proj(&mut self, label: &str, pred: impl Fn(&ProjSeq) -> bool) -> Result<ProjSeq, Stop> {
        let model = self.model;
        let items = model.projections.iter().filter(|(_, p)| pred(p)).collect();
        let (name, p) = self.choose("projection sequence", items)?;
        self.record(label, name);
        Ok(p.clone())
    }

    pub fn filtration(&mut self, label: &str) -> Result<Filtration<S>, Stop> {
        let model = self.model;
        let (name, f) = self.choose("partition chain", model.filtrations.iter().collect())?;
        self.record(label, name);
        Ok(f.clone())
    }

    pub fn process(&mut self, label: &str, kinds: &[ProcessKind]) -> Result<AdaptedProcess<S>, Stop> {
        let model = self.model;
        let items = model.processes.iter().filter(|(_, (_, k))| kinds.contains(k)).collect();
        let (name, (p, _)) = self.choose("process", items)?;
        self.record(label, name);
        Ok(p.clone())
    }

    /// An operator of the model: a random level of a random chain.
    pub fn cond_exp(&mut self, label: &str) -> Result<CondExp<S>, Stop> {
        let model = self.model;
        let (name, f) = self.choose("partition chain", model.filtrations.iter().collect())?;
        let level = self.rng.gen_range(0..=f.stable_from());
        self.record(label, format!("{name}[{level}]"));
        Ok(f.at(level).clone())
    }

    pub fn fail(&self, identity: &str, lhs: impl Display, rhs: impl Display) -> Step {
        Err(Stop::Fail(Failure {
            identity: identity.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }))
    }

    pub fn eq<V: Agree>(&self, identity: &str, lhs: &V, rhs: &V) -> Step {
        if lhs.agree(rhs, self.tol) {
            Ok(())
        } else {
            self.fail(identity, lhs, rhs)
        }
    }

    pub fn le_ext(&self, identity: &str, lhs: &ExtVec<S>, rhs: &ExtVec<S>) -> Step {
        if lhs.le_tol(rhs, self.tol)? {
            Ok(())
        } else {
            self.fail(identity, lhs, rhs)
        }
    }

    pub fn le_lat(&self, identity: &str, lhs: &LatVec<S>, rhs: &LatVec<S>) -> Step {
        if lhs.le_tol(rhs, self.tol)? {
            Ok(())
        } else {
            self.fail(identity, lhs, rhs)
        }
    }

    pub fn ensure(&self, identity: &str, holds: bool, lhs: impl Display, rhs: impl Display) -> Step {
        if holds {
            Ok(())
        } else {
            self.fail(identity, lhs, rhs)
        }
    }
}

pub fn skip(reason: &str) -> Step {
    Err(Stop::Skip(reason.to_string()))
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub backend: Backend,
    pub model: Option<ModelSpec>,
    pub mutation: Option<Mutation>,
    pub bounds: SizeBounds,
}

impl RunConfig {
    pub fn new(suite: Suite, trials: usize, seed: u64, backend: Backend) -> Self {
        Self {
            suite,
            trials,
            seed,
            backend,
            model: None,
            mutation: None,
            bounds: SizeBounds::default(),
        }
    }
}

enum Outcome {
    Pass,
    Skip,
    Fail(Failure, Vec<(String, String)>),
}

fn run_property<S: Scalar>(prop: &Property<S>, model: &Model<S>, trial_seed: u64, mutation: Option<Mutation>) -> Outcome {
    let applicable = match prop.needs {
        Needs::Any => true,
        Needs::Exact => S::BACKEND == Backend::Rational,
        Needs::Float => S::BACKEND == Backend::Float,
    };
    if !applicable {
        return Outcome::Skip;
    }
    let mut cx = Ctx::new(model, trial_seed, &prop.id(), mutation);
    match (prop.check)(&mut cx) {
        Ok(()) => Outcome::Pass,
        Err(Stop::Skip(_)) => Outcome::Skip,
        Err(Stop::Fail(f)) => Outcome::Fail(f, cx.inputs),
    }
}

/// Counterexamples kept per property.
const MAX_COUNTEREXAMPLES: usize = 3;

pub fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| master.next_u64()).collect()
}

pub fn run_suite(cfg: &RunConfig) -> VerifyResult<SuiteReport> {
    match cfg.backend {
        Backend::Rational => run_on::<Rational>(cfg),
        Backend::Float => run_on::<f64>(cfg),
    }
}

fn run_on<S: Scalar>(cfg: &RunConfig) -> VerifyResult<SuiteReport> {
    let props: Vec<Property<S>> = suites::properties::<S>()
        .into_iter()
        .filter(|p| cfg.suite.contains(p.suite))
        .collect();
    let fixed = match &cfg.model {
        Some(spec) => Some(spec.instantiate::<S>()?),
        None => None,
    };
    let seeds = trial_seeds(cfg.seed, cfg.trials);
    let results: Vec<Vec<Outcome>> = seeds
        .par_iter()
        .map(|&trial_seed| {
            let generated;
            let model = match &fixed {
                Some(m) => m,
                None => {
                    generated = generate_model(trial_seed, &cfg.bounds)
                        .instantiate::<S>()
                        .expect("generated models are valid");
                    &generated
                }
            };
            props
                .iter()
                .map(|p| run_property(p, model, trial_seed, cfg.mutation))
                .collect()
        })
        .collect();

    let mut counts: BTreeMap<String, Counts> = props.iter().map(|p| (p.id(), Counts::default())).collect();
    let mut counterexamples = Vec::new();
    for (trial, outcomes) in results.into_iter().enumerate() {
        for (p, outcome) in props.iter().zip(outcomes) {
            let c = counts.get_mut(&p.id()).expect("every property is counted");
            match outcome {
                Outcome::Pass => c.passed += 1,
                Outcome::Skip => c.skipped += 1,
                Outcome::Fail(failure, inputs) => {
                    c.failed += 1;
                    if c.failed as usize <= MAX_COUNTEREXAMPLES {
                        let model = match &cfg.model {
                            Some(spec) => spec.clone(),
                            None => generate_model(seeds[trial], &cfg.bounds),
                        };
                        counterexamples.push(Counterexample {
                            property: p.id(),
                            trial,
                            trial_seed: seeds[trial],
                            backend: cfg.backend,
                            mutation: cfg.mutation,
                            inputs,
                            failure,
                            model,
                        });
                    }
                }
            }
        }
    }
    counterexamples.sort_by(|a, b| (&a.property, a.trial).cmp(&(&b.property, b.trial)));
    Ok(SuiteReport::new(cfg, counts, counterexamples))
}

/// Re-runs the property of a counterexample on its embedded model and
/// seed. Returns the failure if it reproduces.
pub fn replay(cx: &Counterexample) -> VerifyResult<Option<Failure>> {
    match cx.backend {
        Backend::Rational => replay_on::<Rational>(cx),
        Backend::Float => replay_on::<f64>(cx),
    }
}

fn replay_on<S: Scalar>(cx: &Counterexample) -> VerifyResult<Option<Failure>> {
    let model = cx.model.instantiate::<S>()?;
    let props = suites::properties::<S>();
    let prop = props
        .iter()
        .find(|p| p.id() == cx.property)
        .ok_or_else(|| VerifyError::Usage(format!("unknown property {}", cx.property)))?;
    Ok(match run_property(prop, &model, cx.trial_seed, cx.mutation) {
        Outcome::Fail(f, _) => Some(f),
        _ => None,
    })
}
