//! JSON description of a sampling law.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Family, RadialLaw};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PresetName {
    #[serde(rename = "example_3_2")]
    Example32,
    #[serde(rename = "example_4_2")]
    Example42,
}

impl PresetName {
    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Example32 => "example_3_2",
            PresetName::Example42 => "example_4_2",
        }
    }

    pub fn law(self) -> RadialLaw {
        match self {
            PresetName::Example32 => RadialLaw::example_3_2(),
            PresetName::Example42 => RadialLaw::example_4_2(),
        }
    }
}

impl std::str::FromStr for PresetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "example_3_2" => Ok(PresetName::Example32),
            "example_4_2" => Ok(PresetName::Example42),
            other => Err(Error::Config(format!("unknown preset {other:?} (expected example_3_2 or example_4_2)"))),
        }
    }
}

/// `{"family": ..., "d": ..., "alpha": ..., "tau": ..., "zeta": float | "inf", "preset": ...}`.
///
/// With a preset the remaining fields are optional but must agree with it.
/// Without one, `regularly_varying` builds `C / (1 + r^alpha)` and
/// `exponential_type` builds `C exp(-r^tau / tau)` (`tau < 1`) or
/// `C exp(-r / zeta)` (`tau = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub tau: Option<f64>,
    #[serde(default, with = "zeta_repr")]
    pub zeta: Option<f64>,
    #[serde(default)]
    pub preset: Option<PresetName>,
}

impl LawSpec {
    pub fn preset(name: PresetName) -> Self {
        name.law().spec().expect("presets are serializable")
    }

    pub fn build(&self) -> Result<RadialLaw> {
        if let Some(name) = self.preset {
            let law = name.law();
            let mismatch = |field: &str| Error::Config(format!("field {field:?} disagrees with preset {}", name.as_str()));
            if self.family.is_some_and(|f| f != law.family()) {
                return Err(mismatch("family"));
            }
            if self.d.is_some_and(|d| d != law.d()) {
                return Err(mismatch("d"));
            }
            if self.alpha.is_some() && self.alpha != law.alpha() {
                return Err(mismatch("alpha"));
            }
            if self.tau.is_some() && self.tau != law.tau() {
                return Err(mismatch("tau"));
            }
            if self.zeta.is_some() && self.zeta != law.zeta() {
                return Err(mismatch("zeta"));
            }
            return Ok(law);
        }
        let family = self.family.ok_or_else(|| Error::Config("law needs a family or a preset".into()))?;
        let d = self.d.ok_or_else(|| Error::Config("law needs an ambient dimension d".into()))?;
        match family {
            Family::RegularlyVarying => {
                if self.tau.is_some() || self.zeta.is_some() {
                    return Err(Error::Config("tau/zeta do not apply to a regularly varying law".into()));
                }
                let alpha = self.alpha.ok_or_else(|| Error::Config("regularly varying law needs alpha".into()))?;
                RadialLaw::heavy(d, alpha)
            }
            Family::ExponentialType => {
                if self.alpha.is_some() {
                    return Err(Error::Config("alpha does not apply to an exponential-type law".into()));
                }
                let tau = self.tau.ok_or_else(|| Error::Config("exponential-type law needs tau".into()))?;
                let zeta = match self.zeta {
                    Some(z) => z,
                    None if tau < 1.0 => f64::INFINITY,
                    None => return Err(Error::Config("exponential-type law with tau = 1 needs zeta".into())),
                };
                RadialLaw::exponential(d, tau, zeta)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("law spec serializes")
    }
}

mod zeta_repr {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(value: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match value {
            None => s.serialize_none(),
            Some(z) if z.is_infinite() => s.serialize_some("inf"),
            Some(z) => s.serialize_some(z),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Number(z)) => Ok(Some(z)),
            Some(Repr::Text(t)) if matches!(t.as_str(), "inf" | "infinity" | "Infinity") => Ok(Some(f64::INFINITY)),
            Some(Repr::Text(t)) => Err(serde::de::Error::custom(format!("zeta must be a number or \"inf\", got {t:?}"))),
        }
    }
}
