use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ilp::{Constraint, DomainSpec, IlpInstance};

pub const FORMAT_VERSION: u32 = 1;

/// Serialized form of an instance. Field order is the canonical key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub version: u32,
    pub num_vars: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domains: Option<Vec<Vec<i64>>>,
    pub constraints: Vec<ConstraintRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintRecord {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

impl InstanceDocument {
    pub fn from_instance(instance: &IlpInstance, domains: &DomainSpec) -> Self {
        InstanceDocument {
            version: FORMAT_VERSION,
            num_vars: instance.num_vars(),
            domains: (!domains.is_boolean()).then(|| domains.all().to_vec()),
            constraints: instance
                .constraints()
                .iter()
                .map(|c| ConstraintRecord {
                    coeffs: c.coeffs.clone(),
                    rhs: c.rhs,
                })
                .collect(),
        }
    }

    pub fn into_instance(self) -> Result<(IlpInstance, DomainSpec)> {
        if self.version != FORMAT_VERSION {
            return Err(Error::Validation(format!("unsupported version {}", self.version)));
        }
        let domains = match self.domains {
            Some(d) => {
                if d.len() != self.num_vars {
                    return Err(Error::Validation(format!(
                        "{} domains for {} variables",
                        d.len(),
                        self.num_vars
                    )));
                }
                DomainSpec::new(d)?
            }
            None => DomainSpec::boolean(self.num_vars),
        };
        let instance = IlpInstance::new(
            self.num_vars,
            self.constraints
                .into_iter()
                .map(|c| Constraint {
                    coeffs: c.coeffs,
                    rhs: c.rhs,
                })
                .collect(),
        )?;
        Ok((instance, domains))
    }
}

/// Reads a UTF-8 JSON instance document.
pub fn parse(bytes: &[u8]) -> Result<(IlpInstance, DomainSpec)> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let doc: InstanceDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse(format!(
            "line {} column {}, at `{}`: {}",
            inner.line(),
            inner.column(),
            path,
            inner
        ))
    })?;
    de.end().map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_instance()
}

/// Canonical bytes: compact JSON in canonical key order, one trailing
/// newline. Boolean domains are omitted.
pub fn serialize(instance: &IlpInstance, domains: &DomainSpec) -> Vec<u8> {
    let doc = InstanceDocument::from_instance(instance, domains);
    let mut out = serde_json::to_vec(&doc).expect("documents always serialize");
    out.push(b'\n');
    out
}
