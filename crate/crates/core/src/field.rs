//! Nodal scalar fields on a mesh.

use crate::error::{CsfError, Result};
use crate::mesh::Mesh;

use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Unit tag of a nodal field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldUnit {
    Kelvin,
    Meter,
    MeterPerSecond,
    PerMeter,
    Dimensionless,
}

/// Immutable nodal scalar field; solvers build new fields per step rather
/// than mutating shared ones.
#[derive(Debug, Clone)]
pub struct DiscreteField {
    mesh: Arc<Mesh>,
    unit: FieldUnit,
    values: Vec<f64>,
}

impl DiscreteField {
    pub fn new(mesh: Arc<Mesh>, unit: FieldUnit, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n_nodes() {
            return Err(CsfError::invalid(format!(
                "field length {} does not match node count {}",
                values.len(),
                mesh.n_nodes()
            )));
        }
        let field = DiscreteField { mesh, unit, values };
        field.check_finite("field construction")?;
        Ok(field)
    }

    pub fn constant(mesh: Arc<Mesh>, unit: FieldUnit, value: f64) -> Result<Self> {
        let n = mesh.n_nodes();
        DiscreteField::new(mesh, unit, vec![value; n])
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn unit(&self) -> FieldUnit {
        self.unit
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn check_finite(&self, context: &'static str) -> Result<()> {
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(CsfError::NonFinite {
                what: "field value",
                context,
            });
        }
        Ok(())
    }
}
