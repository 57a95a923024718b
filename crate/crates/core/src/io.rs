//! Instance files: `{"algebra": ..., "module": ..., "metadata": ...}`.
//!
//! The module is optional and defaults to the adjoint module of the algebra.

use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::LieLikeAlgebra;
use crate::module::OrdinaryModule;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("instance has no \"algebra\" field")]
    MissingAlgebra,
    #[error("bad algebra: {0}")]
    Algebra(serde_json::Error),
    #[error("bad module: {0}")]
    Module(serde_json::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub algebra: Arc<LieLikeAlgebra>,
    pub module: OrdinaryModule,
    pub metadata: Option<Value>,
}

impl InstanceFile {
    /// Instance with the adjoint module.
    pub fn adjoint(algebra: LieLikeAlgebra) -> Self {
        let algebra = Arc::new(algebra);
        InstanceFile {
            module: OrdinaryModule::adjoint(Arc::clone(&algebra)),
            algebra,
            metadata: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let value: Value = serde_json::from_str(text)?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self, InstanceError> {
        let obj = value.as_object().ok_or(InstanceError::MissingAlgebra)?;
        let alg_value = obj.get("algebra").ok_or(InstanceError::MissingAlgebra)?;
        let algebra: Arc<LieLikeAlgebra> = Arc::new(
            serde_json::from_value(alg_value.clone()).map_err(InstanceError::Algebra)?,
        );
        let module = match obj.get("module") {
            None | Some(Value::Null) => OrdinaryModule::adjoint(Arc::clone(&algebra)),
            Some(v) => OrdinaryModule::from_json(Arc::clone(&algebra), v).map_err(InstanceError::Module)?,
        };
        Ok(InstanceFile {
            algebra,
            module,
            metadata: obj.get("metadata").cloned(),
        })
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("algebra".into(), json!(*self.algebra));
        obj.insert("module".into(), self.module.to_json());
        if let Some(meta) = &self.metadata {
            obj.insert("metadata".into(), meta.clone());
        }
        Value::Object(obj)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("instance serializes");
        s.push('\n');
        s
    }
}
