//! Input descriptors, read from JSON or TOML.

use std::path::Path;

use kstab_core::{FanPair, P1Pair, PlaneDivisorCase, WeightedBlowupDescriptor};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// One pair to evaluate. Exactly one of the four kinds must be present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1: Option<P1Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toric: Option<FanPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane_divisor: Option<PlaneDivisorCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weighted_blowup: Option<WeightedBlowupDescriptor>,
}

#[derive(Debug, Clone, Copy)]
pub enum PairKind<'a> {
    P1(&'a P1Pair),
    Toric(&'a FanPair),
    PlaneDivisor(&'a PlaneDivisorCase),
    WeightedBlowup(&'a WeightedBlowupDescriptor),
}

impl PairDescriptor {
    fn bare() -> Self {
        PairDescriptor {
            label: None,
            notes: None,
            p1: None,
            toric: None,
            plane_divisor: None,
            weighted_blowup: None,
        }
    }

    pub fn from_p1(pair: P1Pair) -> Self {
        PairDescriptor {
            p1: Some(pair),
            ..Self::bare()
        }
    }

    pub fn from_toric(fp: FanPair) -> Self {
        PairDescriptor {
            toric: Some(fp),
            ..Self::bare()
        }
    }

    pub fn from_plane_divisor(case: PlaneDivisorCase) -> Self {
        PairDescriptor {
            plane_divisor: Some(case),
            ..Self::bare()
        }
    }

    pub fn from_weighted_blowup(desc: WeightedBlowupDescriptor) -> Self {
        PairDescriptor {
            weighted_blowup: Some(desc),
            ..Self::bare()
        }
    }

    pub fn kind(&self) -> std::result::Result<PairKind<'_>, String> {
        let present: Vec<PairKind> = [
            self.p1.as_ref().map(PairKind::P1),
            self.toric.as_ref().map(PairKind::Toric),
            self.plane_divisor.as_ref().map(PairKind::PlaneDivisor),
            self.weighted_blowup.as_ref().map(PairKind::WeightedBlowup),
        ]
        .into_iter()
        .flatten()
        .collect();
        match present.as_slice() {
            [one] => Ok(*one),
            [] => Err("descriptor has none of p1, toric, plane_divisor, weighted_blowup".into()),
            _ => Err(
                "descriptor has more than one of p1, toric, plane_divisor, weighted_blowup".into(),
            ),
        }
    }

    /// Parses TOML when `path` ends in `.toml`, JSON otherwise.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let input = |message: String| CliError::Input {
            path: path.to_owned(),
            message,
        };
        let desc: PairDescriptor = if path.extension().is_some_and(|e| e == "toml") {
            let de = toml::Deserializer::parse(text).map_err(|e| input(toml_message(text, &e)))?;
            serde_path_to_error::deserialize(de).map_err(|e| {
                let at = e.path().to_string();
                input(format!("field {at}: {}", toml_message(text, e.inner())))
            })?
        } else {
            let mut de = serde_json::Deserializer::from_str(text);
            serde_path_to_error::deserialize(&mut de).map_err(|e| {
                let inner = e.inner();
                input(format!(
                    "line {} column {}: field {}: {}",
                    inner.line(),
                    inner.column(),
                    e.path(),
                    strip_position(&inner.to_string())
                ))
            })?
        };
        desc.kind().map_err(input)?;
        Ok(desc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        log::debug!("loading descriptor {}", path.display());
        Self::parse(&text, path)
    }
}

fn toml_message(text: &str, e: &toml::de::Error) -> String {
    let msg = e.message().trim_end().to_string();
    match e.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            format!("line {line} column {column}: {msg}")
        }
        None => msg,
    }
}

fn strip_position(msg: &str) -> &str {
    msg.rfind(" at line ").map_or(msg, |i| &msg[..i])
}
