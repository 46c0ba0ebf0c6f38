//! JSON inputs: instance specs, amplitude files and spaced-set instances.
//!
//! Rationals are always `"num/den"` strings. Integers may be JSON numbers or
//! decimal strings, the latter for values outside the `i64` range.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::bounds::SieveInstance;
use crate::error::{Error, Result};
use crate::expsum::QuadraticAmplitude;
use crate::farey::SpacedSet;
use crate::sweep::random_amplitudes;

/// Longest amplitude sequence accepted from a file or generator.
pub const MAX_AMPLITUDES: u64 = 1_000_000;

/// An integer given either as a JSON number or as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IntRepr", into = "IntRepr")]
pub struct JsonInt(pub BigInt);

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Signed(i64),
    Unsigned(u64),
    Text(String),
}

impl TryFrom<IntRepr> for JsonInt {
    type Error = Error;
    fn try_from(r: IntRepr) -> Result<Self> {
        match r {
            IntRepr::Signed(v) => Ok(JsonInt(v.into())),
            IntRepr::Unsigned(v) => Ok(JsonInt(v.into())),
            IntRepr::Text(s) => s.trim().parse().map(JsonInt).map_err(|_| Error::Input(format!("not an integer: {s:?}"))),
        }
    }
}

impl From<JsonInt> for IntRepr {
    fn from(v: JsonInt) -> Self {
        match i64::try_from(&v.0) {
            Ok(small) => IntRepr::Signed(small),
            Err(_) => IntRepr::Text(v.0.to_string()),
        }
    }
}

impl From<BigInt> for JsonInt {
    fn from(v: BigInt) -> Self {
        JsonInt(v)
    }
}

/// Where the amplitudes `a_i` come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AmpRepr", into = "AmpRepr")]
pub enum AmplitudeSource {
    Ones,
    /// Real and imaginary parts uniform in `[-1, 1)` from a ChaCha8 stream.
    Random(u64),
    Explicit(Vec<Complex64>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AmpRepr {
    Generator(String),
    Values(Vec<[f64; 2]>),
}

impl FromStr for AmplitudeSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ones" {
            return Ok(AmplitudeSource::Ones);
        }
        let seed = s
            .strip_prefix("random(")
            .and_then(|rest| rest.strip_suffix(')'))
            .and_then(|inner| inner.trim().parse::<u64>().ok())
            .ok_or_else(|| Error::Input(format!("unknown amplitude generator {s:?}; expected \"ones\" or \"random(<seed>)\"")))?;
        Ok(AmplitudeSource::Random(seed))
    }
}

impl fmt::Display for AmplitudeSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmplitudeSource::Ones => f.write_str("ones"),
            AmplitudeSource::Random(seed) => write!(f, "random({seed})"),
            AmplitudeSource::Explicit(a) => write!(f, "explicit[{}]", a.len()),
        }
    }
}

impl TryFrom<AmpRepr> for AmplitudeSource {
    type Error = Error;
    fn try_from(r: AmpRepr) -> Result<Self> {
        match r {
            AmpRepr::Generator(s) => s.parse(),
            AmpRepr::Values(v) => {
                if v.iter().flatten().any(|c| !c.is_finite()) {
                    return Err(Error::Input("amplitudes must be finite".into()));
                }
                Ok(AmplitudeSource::Explicit(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
            }
        }
    }
}

impl From<AmplitudeSource> for AmpRepr {
    fn from(s: AmplitudeSource) -> Self {
        match s {
            AmplitudeSource::Explicit(a) => AmpRepr::Values(a.into_iter().map(|z| [z.re, z.im]).collect()),
            other => AmpRepr::Generator(other.to_string()),
        }
    }
}

impl AmplitudeSource {
    /// The first `n` amplitudes; an explicit list must have exactly `n` entries.
    pub fn resolve(&self, n: u64) -> Result<Vec<Complex64>> {
        if n > MAX_AMPLITUDES {
            return Err(Error::Input(format!("N = {n} exceeds {MAX_AMPLITUDES}")));
        }
        match self {
            AmplitudeSource::Ones => Ok(vec![Complex64::new(1.0, 0.0); n as usize]),
            AmplitudeSource::Random(seed) => Ok(random_amplitudes(&mut ChaCha8Rng::seed_from_u64(*seed), n as usize)),
            AmplitudeSource::Explicit(a) if a.len() as u64 == n => Ok(a.clone()),
            AmplitudeSource::Explicit(a) => Err(Error::Input(format!("a has {} entries but N = {n}", a.len()))),
        }
    }
}

/// A Farey-form instance as written by users.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub c0: Rational,
    pub c1: Rational,
    pub c2: Rational,
    /// Optional; when present, `p/q` must equal `c1/c0` in lowest terms with `q > 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<JsonInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<JsonInt>,
    #[serde(rename = "M")]
    pub m: JsonInt,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "Q")]
    pub order: u64,
    pub a: AmplitudeSource,
}

impl InstanceSpec {
    pub fn amplitude(&self) -> Result<QuadraticAmplitude> {
        if self.n == 0 {
            return Err(Error::Input("N must be at least 1".into()));
        }
        let a = self.a.resolve(self.n)?;
        let amp = QuadraticAmplitude::new(self.c0.clone(), self.c1.clone(), self.c2.clone(), self.m.0.clone(), a)?;
        match (&self.p, &self.q) {
            (None, None) => {}
            (Some(p), Some(q)) => {
                if p.0 != amp.p || q.0 != amp.q {
                    return Err(Error::Input(format!(
                        "p/q = {}/{} does not match c1/c0 = {}/{} in lowest terms",
                        p.0, q.0, amp.p, amp.q
                    )));
                }
            }
            _ => return Err(Error::Input("p and q must be given together".into())),
        }
        Ok(amp)
    }

    pub fn to_instance(&self) -> Result<SieveInstance> {
        SieveInstance::new(self.amplitude()?, self.order)
    }
}

/// Amplitude sequence over the window `(M, M + N]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeFile {
    #[serde(rename = "M")]
    pub m: JsonInt,
    #[serde(rename = "N")]
    pub n: u64,
    pub a: AmplitudeSource,
}

impl AmplitudeFile {
    pub fn amplitudes(&self) -> Result<Vec<Complex64>> {
        self.a.resolve(self.n)
    }
}

/// A set of points, either certified or to be certified from its exact minimum gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointsInput {
    Certified(SpacedSet),
    Raw(Vec<Rational>),
}

impl PointsInput {
    pub fn into_spaced(self) -> Result<SpacedSet> {
        match self {
            PointsInput::Certified(s) => Ok(s),
            PointsInput::Raw(points) => SpacedSet::from_points(points),
        }
    }
}

/// Input for the single-sum and quadratic-form checks on an arbitrary spaced set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacedSpec {
    #[serde(rename = "X")]
    pub x: PointsInput,
    pub a: AmplitudeSource,
    pub y: Vec<JsonInt>,
}

/// A resolved [`SpacedSpec`].
#[derive(Debug, Clone)]
pub struct SpacedProblem {
    pub x: SpacedSet,
    pub a: Vec<Complex64>,
    pub y: Vec<BigInt>,
}

impl SpacedSpec {
    pub fn resolve(self) -> Result<SpacedProblem> {
        if self.y.is_empty() {
            return Err(Error::Input("y must be nonempty".into()));
        }
        let a = self.a.resolve(self.y.len() as u64)?;
        let x = self.x.into_spaced()?;
        Ok(SpacedProblem { x, a, y: self.y.into_iter().map(|v| v.0).collect() })
    }
}

fn from_json<'a, T: Deserialize<'a>>(what: &str, text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid {what}: {e}")))
}

pub fn parse_instance_spec(text: &str) -> Result<InstanceSpec> {
    from_json("instance spec", text)
}

pub fn parse_amplitude_file(text: &str) -> Result<AmplitudeFile> {
    from_json("amplitude file", text)
}

pub fn parse_spaced_spec(text: &str) -> Result<SpacedSpec> {
    from_json("spaced-set instance", text)
}

pub fn parse_spaced_set(text: &str) -> Result<SpacedSet> {
    from_json("spaced set", text)
}

pub fn parse_farey(text: &str) -> Result<crate::farey::FareySequence> {
    from_json("Farey sequence", text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HAND: &str = r#"{"c0":"1/1","c1":"0/1","c2":"0/1","p":0,"q":1,"M":0,"N":2,"Q":3,"a":"ones"}"#;

    #[test]
    fn hand_instance_parses() {
        let spec = parse_instance_spec(HAND).unwrap();
        let inst = spec.to_instance().unwrap();
        assert_eq!(inst.frequencies, vec![BigInt::from(1), BigInt::from(4)]);
        assert_eq!(inst.farey.len(), 3);
        let round = serde_json::to_string(&spec).unwrap();
        assert_eq!(parse_instance_spec(&round).unwrap(), spec);
    }

    #[test]
    fn pq_must_match() {
        let bad = HAND.replace("\"p\":0", "\"p\":1");
        assert!(matches!(parse_instance_spec(&bad).unwrap().to_instance(), Err(Error::Input(_))));
        let lone = HAND.replace("\"p\":0,", "");
        assert!(parse_instance_spec(&lone).unwrap().to_instance().is_err());
        let none = HAND.replace("\"p\":0,\"q\":1,", "");
        assert!(parse_instance_spec(&none).unwrap().to_instance().is_ok());
    }

    #[test]
    fn big_m_as_string() {
        let s = HAND.replace("\"M\":0", "\"M\":\"-123456789012345678901234567890\"");
        let spec = parse_instance_spec(&s).unwrap();
        assert_eq!(spec.m.0.to_string(), "-123456789012345678901234567890");
        assert!(serde_json::to_string(&spec).unwrap().contains("\"-123456789012345678901234567890\""));
    }

    #[test]
    fn rejects_float_rationals_and_unknown_fields() {
        assert!(parse_instance_spec(&HAND.replace("\"1/1\"", "1.0")).is_err());
        assert!(parse_instance_spec(&HAND.replace("\"Q\":3", "\"Q\":3,\"extra\":1")).is_err());
        assert!(parse_instance_spec(&HAND.replace("\"c1\":\"0/1\"", "\"c1\":\"0/0\"")).is_err());
    }

    #[test]
    fn amplitude_sources() {
        assert_eq!("ones".parse::<AmplitudeSource>().unwrap(), AmplitudeSource::Ones);
        assert_eq!("random( 7 )".parse::<AmplitudeSource>().unwrap(), AmplitudeSource::Random(7));
        assert!("random(x)".parse::<AmplitudeSource>().is_err());
        let r = AmplitudeSource::Random(7).resolve(5).unwrap();
        assert_eq!(r, AmplitudeSource::Random(7).resolve(5).unwrap());
        assert!(r.iter().all(|z| (-1.0..1.0).contains(&z.re) && (-1.0..1.0).contains(&z.im)));

        let file = parse_amplitude_file(r#"{"M":3,"N":2,"a":[[1,0],[0.5,-2]]}"#).unwrap();
        assert_eq!(file.amplitudes().unwrap()[1], Complex64::new(0.5, -2.0));
        let short = parse_amplitude_file(r#"{"M":3,"N":3,"a":[[1,0]]}"#).unwrap();
        assert!(short.amplitudes().is_err());
        assert!(AmplitudeSource::Ones.resolve(MAX_AMPLITUDES + 1).is_err());
    }

    #[test]
    fn spaced_specs() {
        let raw = parse_spaced_spec(r#"{"X":["0/1","1/2"],"a":"ones","y":[0,1]}"#).unwrap().resolve().unwrap();
        assert_eq!(raw.x.delta(), &Rational::new(1, 2));
        let cert = parse_spaced_spec(r#"{"X":{"points":["0/1","1/2"],"delta":"1/4","enclosure":"2/1"},"a":"ones","y":[3]}"#)
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(cert.x.enclosure(), &Rational::from_integer(2));
        let lying = r#"{"X":{"points":["0/1","1/2"],"delta":"1/1","enclosure":"2/1"},"a":"ones","y":[3]}"#;
        assert!(parse_spaced_spec(lying).is_err());
        assert!(parse_spaced_spec(r#"{"X":["0/1","1/2"],"a":"ones","y":[]}"#).unwrap().resolve().is_err());
    }
}
