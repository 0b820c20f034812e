//! Model files: JSON descriptions of a finite atomic space and named
//! objects over it. Rationals are `"p/q"` strings, `+∞` is `"inf"`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num::traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use supcone::{
    AdaptedProcess, AtomicSpace, Band, CondExp, Ext, ExtVec, Filtration, LatVec, ProjSeq,
    ProjTail, Rational, Scalar, TailRule, VecSeq,
};

use crate::error::{VerifyError, VerifyResult};

/// An exact rational, serialized as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Q(pub Rational);

impl Q {
    pub fn new(num: i64, den: i64) -> Self {
        Q(Rational::from_ratio(num, den))
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Q {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = num.parse::<num::BigInt>().map_err(|_| format!("bad numerator in {s:?}"))?;
        let den = den.parse::<num::BigInt>().map_err(|_| format!("bad denominator in {s:?}"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Q(Rational::new(num, den)))
    }
}

impl Serialize for Q {
    fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A rational or `"inf"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XQ {
    Fin(Q),
    Inf,
}

impl fmt::Display for XQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XQ::Fin(q) => q.fmt(f),
            XQ::Inf => f.write_str("inf"),
        }
    }
}

impl Serialize for XQ {
    fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for XQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.trim() == "inf" {
            Ok(XQ::Inf)
        } else {
            s.parse().map(XQ::Fin).map_err(serde::de::Error::custom)
        }
    }
}

/// A refining chain of partitions given by atom labels. `levels[0]` is the
/// global `T`; `levels[n]` is `T_n`, and the last level repeats forever.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub levels: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TailSpec {
    Zero,
    Constant { value: Vec<Q> },
    Periodic { values: Vec<Vec<Q>> },
    Geometric { v: Vec<Q>, ratio: Q },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeqSpec {
    #[serde(default)]
    pub prefix: Vec<Vec<Q>>,
    pub tail: TailSpec,
}

/// Bands are lists of atom indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProjTailSpec {
    Constant { band: Vec<usize> },
    Periodic { bands: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjSpec {
    #[serde(default)]
    pub prefix: Vec<Vec<usize>>,
    pub tail: ProjTailSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Adapted,
    Submartingale,
    Martingale,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessSpec {
    pub sequence: String,
    pub filtration: String,
    pub kind: ProcessKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub atoms: Vec<String>,
    pub weights: Vec<Q>,
    #[serde(default)]
    pub vectors: BTreeMap<String, Vec<XQ>>,
    #[serde(default)]
    pub partitions: BTreeMap<String, ChainSpec>,
    #[serde(default)]
    pub sequences: BTreeMap<String, SeqSpec>,
    #[serde(default)]
    pub projections: BTreeMap<String, ProjSpec>,
    #[serde(default)]
    pub processes: BTreeMap<String, ProcessSpec>,
}

/// A model instantiated on a backend.
#[derive(Debug, Clone)]
pub struct Model<S> {
    pub space: AtomicSpace<S>,
    pub vectors: BTreeMap<String, ExtVec<S>>,
    pub filtrations: BTreeMap<String, Filtration<S>>,
    pub sequences: BTreeMap<String, VecSeq<S>>,
    pub projections: BTreeMap<String, ProjSeq>,
    pub processes: BTreeMap<String, (AdaptedProcess<S>, ProcessKind)>,
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> VerifyError {
    VerifyError::Validation {
        field: field.into(),
        message: message.into(),
    }
}

fn lat<S: Scalar>(values: &[Q]) -> LatVec<S> {
    LatVec::new(values.iter().map(|q| S::from_rational(&q.0)).collect())
}

fn ext<S: Scalar>(values: &[XQ]) -> ExtVec<S> {
    ExtVec::new(
        values
            .iter()
            .map(|v| match v {
                XQ::Fin(q) => Ext::Fin(S::from_rational(&q.0)),
                XQ::Inf => Ext::Inf,
            })
            .collect(),
    )
}

impl ModelSpec {
    pub fn from_json(text: &str) -> VerifyResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            invalid(if field == "." { "model".into() } else { field }, e.inner().to_string())
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("model serializes");
        text.push('\n');
        text
    }

    pub fn load(path: &Path) -> VerifyResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| VerifyError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> VerifyResult<()> {
        std::fs::write(path, self.to_json())
            .map_err(|e| VerifyError::Io(format!("{}: {e}", path.display())))
    }

    pub fn dim(&self) -> usize {
        self.atoms.len()
    }

    fn check_len(&self, field: &str, len: usize) -> VerifyResult<()> {
        if len == self.dim() {
            Ok(())
        } else {
            Err(invalid(field, format!("has {len} entries for {} atoms", self.dim())))
        }
    }

    fn check_band(&self, field: &str, atoms: &[usize]) -> VerifyResult<()> {
        match atoms.iter().find(|&&a| a >= self.dim()) {
            Some(a) => Err(invalid(field, format!("atom index {a} out of range"))),
            None => Ok(()),
        }
    }

    /// Structural checks; process semantics are checked on instantiation.
    pub fn validate(&self) -> VerifyResult<()> {
        if self.atoms.is_empty() {
            return Err(invalid("atoms", "at least one atom is required"));
        }
        self.check_len("weights", self.weights.len())?;
        for (i, w) in self.weights.iter().enumerate() {
            if !w.0.is_positive() {
                return Err(invalid(format!("weights[{i}]"), format!("weight {w} is not positive")));
            }
        }
        let total: Rational = self.weights.iter().map(|w| w.0.clone()).sum();
        if !total.is_one() {
            return Err(invalid("weights", format!("weights sum to {}, expected 1", Q(total))));
        }
        for (name, v) in &self.vectors {
            self.check_len(&format!("vectors.{name}"), v.len())?;
        }
        for (name, chain) in &self.partitions {
            let field = format!("partitions.{name}.levels");
            if chain.levels.is_empty() {
                return Err(invalid(field, "needs at least the global level"));
            }
            for (i, level) in chain.levels.iter().enumerate() {
                self.check_len(&format!("{field}[{i}]"), level.len())?;
                if i > 0 && !refines(level, &chain.levels[i - 1]) {
                    return Err(invalid(
                        format!("{field}[{i}]"),
                        format!("does not refine level {}", i - 1),
                    ));
                }
            }
        }
        for (name, s) in &self.sequences {
            let field = format!("sequences.{name}");
            for (i, term) in s.prefix.iter().enumerate() {
                self.check_len(&format!("{field}.prefix[{i}]"), term.len())?;
            }
            match &s.tail {
                TailSpec::Zero => {}
                TailSpec::Constant { value } => self.check_len(&format!("{field}.tail.value"), value.len())?,
                TailSpec::Periodic { values } => {
                    if values.is_empty() {
                        return Err(invalid(format!("{field}.tail.values"), "period must be positive"));
                    }
                    for (i, v) in values.iter().enumerate() {
                        self.check_len(&format!("{field}.tail.values[{i}]"), v.len())?;
                    }
                }
                TailSpec::Geometric { v, ratio } => {
                    self.check_len(&format!("{field}.tail.v"), v.len())?;
                    if v.iter().any(|c| c.0.is_negative()) {
                        return Err(invalid(format!("{field}.tail.v"), "must be nonnegative"));
                    }
                    if !ratio.0.is_positive() || ratio.0 >= Rational::one() {
                        return Err(invalid(format!("{field}.tail.ratio"), "must lie in (0, 1)"));
                    }
                }
            }
        }
        for (name, p) in &self.projections {
            let field = format!("projections.{name}");
            for (i, b) in p.prefix.iter().enumerate() {
                self.check_band(&format!("{field}.prefix[{i}]"), b)?;
            }
            match &p.tail {
                ProjTailSpec::Constant { band } => self.check_band(&format!("{field}.tail.band"), band)?,
                ProjTailSpec::Periodic { bands } => {
                    if bands.is_empty() {
                        return Err(invalid(format!("{field}.tail.bands"), "period must be positive"));
                    }
                    for (i, b) in bands.iter().enumerate() {
                        self.check_band(&format!("{field}.tail.bands[{i}]"), b)?;
                    }
                }
            }
        }
        for (name, p) in &self.processes {
            if !self.sequences.contains_key(&p.sequence) {
                return Err(invalid(
                    format!("processes.{name}.sequence"),
                    format!("unknown sequence {:?}", p.sequence),
                ));
            }
            if !self.partitions.contains_key(&p.filtration) {
                return Err(invalid(
                    format!("processes.{name}.filtration"),
                    format!("unknown partition chain {:?}", p.filtration),
                ));
            }
        }
        Ok(())
    }

    pub fn instantiate<S: Scalar>(&self) -> VerifyResult<Model<S>> {
        let n = self.dim();
        let space = AtomicSpace::new(self.weights.iter().map(|w| S::from_rational(&w.0)).collect())
            .map_err(|e| invalid("weights", e.to_string()))?;
        let vectors = self.vectors.iter().map(|(k, v)| (k.clone(), ext(v))).collect();
        let mut filtrations = BTreeMap::new();
        for (name, chain) in &self.partitions {
            let field = format!("partitions.{name}");
            let ops = chain
                .levels
                .iter()
                .map(|l| CondExp::from_labels(&space, l))
                .collect::<supcone::Result<Vec<_>>>()
                .map_err(|e| invalid(&field, e.to_string()))?;
            let global = ops[0].clone();
            let mut rest: Vec<_> = ops.into_iter().skip(1).collect();
            let tail = rest.pop().unwrap_or_else(|| global.clone());
            let f = Filtration::new(rest, tail, global).map_err(|e| invalid(&field, e.to_string()))?;
            filtrations.insert(name.clone(), f);
        }
        let mut sequences = BTreeMap::new();
        for (name, s) in &self.sequences {
            let tail = match &s.tail {
                TailSpec::Zero => TailRule::Zero,
                TailSpec::Constant { value } => TailRule::Constant(lat(value)),
                TailSpec::Periodic { values } => TailRule::Periodic(values.iter().map(|v| lat(v)).collect()),
                TailSpec::Geometric { v, ratio } => TailRule::Geometric {
                    v: lat(v),
                    ratio: S::from_rational(&ratio.0),
                },
            };
            let xs = VecSeq::new(n, s.prefix.iter().map(|v| lat(v)).collect(), tail)
                .map_err(|e| invalid(format!("sequences.{name}"), e.to_string()))?;
            sequences.insert(name.clone(), xs);
        }
        let mut projections = BTreeMap::new();
        for (name, p) in &self.projections {
            let band = |atoms: &Vec<usize>| Band::from_indices(n, atoms);
            let tail = match &p.tail {
                ProjTailSpec::Constant { band: b } => ProjTail::Constant(band(b)),
                ProjTailSpec::Periodic { bands } => ProjTail::Periodic(bands.iter().map(band).collect()),
            };
            let ps = ProjSeq::new(n, p.prefix.iter().map(band).collect(), tail)
                .map_err(|e| invalid(format!("projections.{name}"), e.to_string()))?;
            projections.insert(name.clone(), ps);
        }
        let mut processes = BTreeMap::new();
        for (name, p) in &self.processes {
            let field = format!("processes.{name}");
            let xs: &VecSeq<S> = &sequences[&p.sequence];
            let f: &Filtration<S> = &filtrations[&p.filtration];
            let proc = AdaptedProcess::new(xs.clone(), f.clone())
                .map_err(|e| invalid(&field, e.to_string()))?;
            // Exact claims are only checked where arithmetic is exact.
            if S::BACKEND == supcone::Backend::Rational {
                let holds = match p.kind {
                    ProcessKind::Adapted => true,
                    ProcessKind::Submartingale => proc.is_submartingale()?,
                    ProcessKind::Martingale => proc.is_martingale()?,
                };
                if !holds {
                    return Err(invalid(format!("{field}.kind"), format!("process is not a {:?}", p.kind).to_lowercase()));
                }
            }
            processes.insert(name.clone(), (proc, p.kind));
        }
        Ok(Model {
            space,
            vectors,
            filtrations,
            sequences,
            projections,
            processes,
        })
    }
}

/// `fine` refines `coarse`: atoms sharing a fine label share a coarse one.
fn refines(fine: &[usize], coarse: &[usize]) -> bool {
    let mut seen = BTreeMap::new();
    fine.iter()
        .zip(coarse)
        .all(|(f, c)| *seen.entry(*f).or_insert(*c) == *c)
}

/// Coordinates of a finite vector as model values.
pub fn lat_to_q(v: &LatVec<Rational>) -> Vec<Q> {
    v.coords().iter().map(|c| Q(c.clone())).collect()
}

pub fn ext_to_xq(v: &ExtVec<Rational>) -> Vec<XQ> {
    v.coords()
        .iter()
        .map(|c| match c {
            Ext::Fin(q) => XQ::Fin(Q(q.clone())),
            Ext::Inf => XQ::Inf,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"atoms": ["w"], "weights": ["1/1"]}"#;

    #[test]
    fn minimal_model_is_valid() {
        let spec = ModelSpec::from_json(MINIMAL).unwrap();
        let model = spec.instantiate::<Rational>().unwrap();
        assert_eq!(model.space.atom_count(), 1);
    }

    #[test]
    fn weights_must_sum_to_one() {
        let text = r#"{"atoms": ["a", "b"], "weights": ["1/2", "2/5"]}"#;
        match ModelSpec::from_json(text) {
            Err(VerifyError::Validation { field, message }) => {
                assert_eq!(field, "weights");
                assert!(message.contains("9/10"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_name_the_field() {
        let text = r#"{"atoms": ["a"], "weights": ["1/0"]}"#;
        let err = ModelSpec::from_json(text).unwrap_err().to_string();
        assert!(err.contains("weights[0]"), "{err}");
        let text = r#"{"atoms": ["a"], "weights": ["1"], "sequences": {"s": {"tail": {"kind": "constant", "value": ["1", "2"]}}}}"#;
        let err = ModelSpec::from_json(text).unwrap_err().to_string();
        assert!(err.contains("sequences.s.tail.value"), "{err}");
        let text = r#"{"atoms": ["a"], "wieghts": ["1"]}"#;
        let err = ModelSpec::from_json(text).unwrap_err().to_string();
        assert!(err.contains("wieghts"), "{err}");
        let text = r#"{"atoms": ["a", "b"], "weights": ["1/2", "1/2"], "partitions": {"f": {"levels": [[0, 1], [0, 0]]}}}"#;
        let err = ModelSpec::from_json(text).unwrap_err().to_string();
        assert!(err.contains("partitions.f.levels[1]"), "{err}");
    }

    #[test]
    fn process_kind_is_checked() {
        let text = r#"{
            "atoms": ["a", "b"], "weights": ["1/2", "1/2"],
            "partitions": {"f": {"levels": [[0, 0], [0, 1]]}},
            "sequences": {"s": {"prefix": [["1", "2"]], "tail": {"kind": "constant", "value": ["1", "1"]}}},
            "processes": {"p": {"sequence": "s", "filtration": "f", "kind": "martingale"}}
        }"#;
        let spec = ModelSpec::from_json(text).unwrap();
        let err = spec.instantiate::<Rational>().unwrap_err().to_string();
        assert!(err.contains("processes.p"), "{err}");
    }

    #[test]
    fn rationals_are_canonical() {
        assert_eq!("2/4".parse::<Q>().unwrap().to_string(), "1/2");
        assert_eq!("-3".parse::<Q>().unwrap().to_string(), "-3/1");
        assert!("x".parse::<Q>().is_err());
    }
}
